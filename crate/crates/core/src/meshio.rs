//! File formats, domain tessellation and surface meshing.
//!
//! Ribbon files:
//!
//! ```text
//! {"n":5,"d":5,"sides":[{"outer":[[x,y,z],...],"inner":[[x,y,z],...]},...]}
//! ```
//!
//! An inner row may list only its `d - 1` middle points; the two end points
//! are implied by twist compatibility and filled in on read.
//!
//! Net files list every label once, in canonical order:
//!
//! ```text
//! {"n":5,"depth":8,"points":[{"label":"8,0,0,0,0","p":[x,y,z]},...]}
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::bezier::{Ribbon, RibbonSide};
use crate::domain::{CoordScheme, DomainPolygon};
use crate::labels::{Label, LabelIndex};
use crate::spatch::SPatchNet;
use crate::{Error, Result, Vec2, Vec3};

/// Step of the central differences used for mesh normals.
pub const NORMAL_STEP: f64 = 1e-5;
/// Vertices closer than this to the boundary sample their normal this far
/// inside instead.
pub const BOUNDARY_OFFSET: f64 = 1e-4;

#[derive(Deserialize)]
struct RibbonFile {
    n: usize,
    d: usize,
    sides: Vec<SideFile>,
}

#[derive(Deserialize)]
struct SideFile {
    outer: Vec<[f64; 3]>,
    inner: Vec<[f64; 3]>,
}

#[derive(Deserialize)]
struct NetFile {
    n: usize,
    depth: usize,
    points: Vec<NetEntry>,
}

#[derive(Deserialize)]
struct NetEntry {
    label: String,
    p: [f64; 3],
}

fn v3(p: [f64; 3]) -> Vec3 {
    Vec3::new(p[0], p[1], p[2])
}

fn json_point(p: &Vec3) -> Result<String> {
    if !p.iter().all(|c| c.is_finite()) {
        return Err(Error::Structural(format!("non-finite coordinate in {p:?}")));
    }
    Ok(serde_json::to_string(&[p.x, p.y, p.z]).expect("finite floats serialize"))
}

fn json_row(row: &[Vec3]) -> Result<String> {
    let pts = row.iter().map(json_point).collect::<Result<Vec<_>>>()?;
    Ok(format!("[{}]", pts.join(",")))
}

pub fn parse_ribbon(text: &str) -> Result<Ribbon> {
    let file: RibbonFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("ribbon file: {e}")))?;
    let (n, d) = (file.n, file.d);
    if file.sides.len() != n {
        return Err(Error::MalformedRibbon(format!(
            "header says n = {n} but {} sides are listed",
            file.sides.len()
        )));
    }
    if n < 3 || d == 0 {
        return Err(Error::MalformedRibbon(format!("need n >= 3 and d >= 1, got n = {n}, d = {d}")));
    }
    for (i, s) in file.sides.iter().enumerate() {
        if s.outer.len() != d + 1 {
            return Err(Error::MalformedRibbon(format!(
                "side {i}: outer row has {} points, expected {}",
                s.outer.len(),
                d + 1
            )));
        }
        let short = d >= 2 && s.inner.len() == d - 1;
        if s.inner.len() != d + 1 && !short {
            return Err(Error::MalformedRibbon(format!(
                "side {i}: inner row has {} points, expected {} (or {} without shared ends)",
                s.inner.len(),
                d + 1,
                d.saturating_sub(1)
            )));
        }
    }
    let outer = |i: usize, j: usize| v3(file.sides[i % n].outer[j]);
    let sides = (0..n)
        .map(|i| {
            let s = &file.sides[i];
            let inner = if s.inner.len() == d + 1 {
                s.inner.iter().copied().map(v3).collect()
            } else {
                // C[0,1]^i = C[d-1,0]^(i-1) and C[d,1]^i = C[1,0]^(i+1)
                let mut row = Vec::with_capacity(d + 1);
                row.push(outer(i + n - 1, d - 1));
                row.extend(s.inner.iter().copied().map(v3));
                row.push(outer(i + 1, 1));
                row
            };
            RibbonSide {
                outer: s.outer.iter().copied().map(v3).collect(),
                inner,
            }
        })
        .collect();
    Ribbon::new(d, sides)
}

pub fn format_ribbon(r: &Ribbon) -> Result<String> {
    let mut out = format!("{{\"n\":{},\"d\":{},\"sides\":[\n", r.n(), r.degree());
    for (i, s) in r.sides().iter().enumerate() {
        let sep = if i + 1 == r.n() { "" } else { "," };
        writeln!(out, "{{\"outer\":{},\"inner\":{}}}{sep}", json_row(&s.outer)?, json_row(&s.inner)?)
            .expect("string write");
    }
    out.push_str("]}\n");
    Ok(out)
}

pub fn read_ribbon(path: impl AsRef<Path>) -> Result<Ribbon> {
    parse_ribbon(&fs::read_to_string(path)?)
}

pub fn write_ribbon(r: &Ribbon, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_ribbon(r)?)?;
    Ok(())
}

pub fn parse_net(text: &str) -> Result<SPatchNet> {
    let file: NetFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("net file: {e}")))?;
    let index = Arc::new(LabelIndex::new(file.n, file.depth)?);
    let mut slots: Vec<Option<Vec3>> = vec![None; index.len()];
    for entry in &file.points {
        let label: Label = entry.label.parse()?;
        let o = index.ordinal(&label).ok_or_else(|| {
            Error::Structural(format!(
                "label {label} does not belong to n = {}, depth = {}",
                file.n, file.depth
            ))
        })?;
        if slots[o].is_some() {
            return Err(Error::Structural(format!("duplicate label {label}")));
        }
        slots[o] = Some(v3(entry.p));
    }
    let points = slots
        .into_iter()
        .enumerate()
        .map(|(o, p)| p.ok_or_else(|| Error::Structural(format!("missing label {}", index.label(o)))))
        .collect::<Result<Vec<_>>>()?;
    SPatchNet::new(index, points)
}

pub fn format_net(net: &SPatchNet) -> Result<String> {
    let mut out = format!("{{\"n\":{},\"depth\":{},\"points\":[\n", net.n(), net.depth());
    let last = net.len() - 1;
    for (k, (s, p)) in net.iter().enumerate() {
        let sep = if k == last { "" } else { "," };
        writeln!(out, "{{\"label\":\"{s}\",\"p\":{}}}{sep}", json_point(p)?).expect("string write");
    }
    out.push_str("]}\n");
    Ok(out)
}

pub fn read_net(path: impl AsRef<Path>) -> Result<SPatchNet> {
    parse_net(&fs::read_to_string(path)?)
}

pub fn write_net(net: &SPatchNet, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_net(net)?)?;
    Ok(())
}

/// Concentric-ring triangulation of the domain polygon.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainTriangulation {
    pub n: usize,
    pub resolution: usize,
    pub points: Vec<Vec2>,
    /// Counter-clockwise index triples.
    pub triangles: Vec<[usize; 3]>,
}

impl DomainTriangulation {
    /// Number of vertices on the outermost ring.
    pub fn boundary_len(&self) -> usize {
        self.n * self.resolution
    }

    pub fn boundary_points(&self) -> &[Vec2] {
        &self.points[self.points.len() - self.boundary_len()..]
    }
}

/// Ring `r` (0..=R) is the polygon scaled by `r / R` with `r` vertices per
/// side; triangles stitch consecutive rings.
pub fn tessellate_domain(n: usize, resolution: usize) -> Result<DomainTriangulation> {
    if resolution < 1 {
        return Err(Error::IndexRange {
            what: "resolution",
            value: resolution,
            min: 1,
            max: usize::MAX,
        });
    }
    let poly = DomainPolygon::new(n)?;
    let rr = resolution;
    let ring_start = |r: usize| if r == 0 { 0 } else { 1 + n * r * (r - 1) / 2 };
    // index of point m (0..=r, m = r wraps) on side s of ring r
    let ring_index = |r: usize, s: usize, m: usize| {
        if r == 0 {
            0
        } else {
            ring_start(r) + (s * r + m) % (n * r)
        }
    };

    let mut points = Vec::with_capacity(1 + n * rr * (rr + 1) / 2);
    points.push(Vec2::zeros());
    for r in 1..=rr {
        for s in 0..n {
            for m in 0..r {
                let t = m as f64 / r as f64;
                let on_edge = poly.edge_point(s, t).expect("valid edge parameter");
                points.push(if r == rr { on_edge } else { on_edge * (r as f64 / rr as f64) });
            }
        }
    }

    let mut triangles = Vec::with_capacity(n * rr * rr);
    for r in 1..=rr {
        for s in 0..n {
            for m in 0..r {
                triangles.push([ring_index(r, s, m), ring_index(r, s, m + 1), ring_index(r - 1, s, m)]);
            }
            for m in 0..r - 1 {
                triangles.push([ring_index(r - 1, s, m), ring_index(r, s, m + 1), ring_index(r - 1, s, m + 1)]);
            }
        }
    }
    Ok(DomainTriangulation {
        n,
        resolution,
        points,
        triangles,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceMesh {
    pub vertices: Vec<Vec3>,
    pub normals: Option<Vec<Vec3>>,
    pub triangles: Vec<[usize; 3]>,
    /// Vertices whose normal could not be formed; emitted as zero vectors.
    pub degenerate_normals: usize,
}

/// Evaluates the patch on the ring tessellation, optionally with normals.
pub fn mesh_patch(net: &SPatchNet, resolution: usize, scheme: CoordScheme, with_normals: bool) -> Result<SurfaceMesh> {
    let tri = tessellate_domain(net.n(), resolution)?;
    let domain = net.domain();
    let evaluated = crate::par_map(&tri.points, |&x| -> Result<(Vec3, Option<Vec3>)> {
        let p = net.eval_at_domain_point(x, scheme)?;
        if !with_normals {
            return Ok((p, None));
        }
        let probe = if domain.boundary_distance(x) < BOUNDARY_OFFSET {
            x - x.normalize() * BOUNDARY_OFFSET
        } else {
            x
        };
        match net.sampled_normal(probe, NORMAL_STEP, scheme) {
            Ok(nrm) => Ok((p, Some(nrm))),
            Err(Error::DegenerateNormal { .. }) => Ok((p, None)),
            Err(e) => Err(e),
        }
    });
    let mut vertices = Vec::with_capacity(tri.points.len());
    let mut normals = Vec::with_capacity(if with_normals { tri.points.len() } else { 0 });
    let mut degenerate = 0;
    for res in evaluated {
        let (p, nrm) = res?;
        vertices.push(p);
        if with_normals {
            if nrm.is_none() {
                degenerate += 1;
            }
            normals.push(nrm.unwrap_or_else(Vec3::zeros));
        }
    }
    Ok(SurfaceMesh {
        vertices,
        normals: with_normals.then_some(normals),
        triangles: tri.triangles,
        degenerate_normals: degenerate,
    })
}

/// Wavefront OBJ with 17 significant digits and 1-based indices.
pub fn format_obj(mesh: &SurfaceMesh) -> String {
    let mut out = String::new();
    for v in &mesh.vertices {
        writeln!(out, "v {:.16e} {:.16e} {:.16e}", v.x, v.y, v.z).expect("string write");
    }
    if let Some(normals) = &mesh.normals {
        for v in normals {
            writeln!(out, "vn {:.16e} {:.16e} {:.16e}", v.x, v.y, v.z).expect("string write");
        }
    }
    for t in &mesh.triangles {
        let [a, b, c] = t.map(|i| i + 1);
        if mesh.normals.is_some() {
            writeln!(out, "f {a}//{a} {b}//{b} {c}//{c}").expect("string write");
        } else {
            writeln!(out, "f {a} {b} {c}").expect("string write");
        }
    }
    out
}

pub fn write_obj_to(mesh: &SurfaceMesh, mut w: impl Write) -> io::Result<()> {
    w.write_all(format_obj(mesh).as_bytes())
}

pub fn write_obj(mesh: &SurfaceMesh, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_obj(mesh))?;
    Ok(())
}

/// Counts of `v`, `vn` and `f` records in OBJ text.
pub fn obj_counts(text: &str) -> (usize, usize, usize) {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for line in text.lines() {
        if let Some(tag) = line.split_whitespace().next() {
            *counts.entry(tag).or_default() += 1;
        }
    }
    let get = |k| counts.get(k).copied().unwrap_or(0);
    (get("v"), get("vn"), get("f"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::signed_area;
    use crate::sample::generate_ribbon;

    #[test]
    fn tessellation_counts() {
        let t = tessellate_domain(5, 1).unwrap();
        assert_eq!((t.points.len(), t.triangles.len()), (6, 5));
        let t = tessellate_domain(5, 3).unwrap();
        assert_eq!((t.points.len(), t.triangles.len()), (31, 45));
        for n in 3..=8 {
            for r in 1..=10 {
                let t = tessellate_domain(n, r).unwrap();
                assert_eq!(t.points.len(), 1 + n * r * (r + 1) / 2);
                assert_eq!(t.triangles.len(), n * r * r);
            }
        }
        assert!(tessellate_domain(5, 0).is_err());
    }

    #[test]
    fn tessellation_geometry() {
        for n in [3, 5, 8] {
            let t = tessellate_domain(n, 6).unwrap();
            let poly = DomainPolygon::new(n).unwrap();
            assert!(t.boundary_points().iter().all(|p| poly.on_boundary(*p)));
            let area: f64 = t
                .triangles
                .iter()
                .map(|[a, b, c]| {
                    let ar = signed_area(t.points[*a], t.points[*b], t.points[*c]);
                    assert!(ar > 1e-6, "degenerate or clockwise triangle");
                    ar
                })
                .sum();
            let poly_area = 0.5 * n as f64 * (2.0 * std::f64::consts::PI / n as f64).sin();
            assert!((area - poly_area).abs() < 1e-12);
        }
    }

    #[test]
    fn ribbon_round_trip_and_short_inner_rows() {
        let r = generate_ribbon(5, 5, 4).unwrap();
        let text = format_ribbon(&r).unwrap();
        let back = parse_ribbon(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(format_ribbon(&back).unwrap(), text);

        let trimmed = serde_json::json!({
            "n": 5, "d": 5,
            "sides": r.sides().iter().map(|s| serde_json::json!({
                "outer": s.outer.iter().map(|p| [p.x, p.y, p.z]).collect::<Vec<_>>(),
                "inner": s.inner[1..5].iter().map(|p| [p.x, p.y, p.z]).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        });
        assert_eq!(parse_ribbon(&trimmed.to_string()).unwrap(), r);
    }

    #[test]
    fn minimal_ribbon_round_trip() {
        let text = "{\"n\":3,\"d\":1,\"sides\":[\n\
            {\"outer\":[[0.0,0.0,0.0],[1.0,0.0,0.0]],\"inner\":[[0.1,0.2,0.3],[0.5,0.5,0.5]]},\n\
            {\"outer\":[[1.0,0.0,0.0],[0.0,1.0,0.0]],\"inner\":[[0.4,0.25,1.0],[0.125,0.0625,0.2]]},\n\
            {\"outer\":[[0.0,1.0,0.0],[0.0,0.0,0.0]],\"inner\":[[0.3,0.3,0.3],[1e-7,2e+300,-0.0]]}\n\
            ]}\n";
        let r = parse_ribbon(text).unwrap();
        assert_eq!(format_ribbon(&r).unwrap(), text);
    }

    #[test]
    fn malformed_ribbons() {
        let bad_row = r#"{"n":3,"d":2,"sides":[
            {"outer":[[0,0,0],[1,0,0],[2,0,0]],"inner":[[0,0,0],[1,0,0],[2,0,0]]},
            {"outer":[[0,0,0],[1,0,0]],"inner":[[0,0,0],[1,0,0],[2,0,0]]},
            {"outer":[[0,0,0],[1,0,0],[2,0,0]],"inner":[[0,0,0],[1,0,0],[2,0,0]]}]}"#;
        let err = parse_ribbon(bad_row).unwrap_err();
        assert!(matches!(&err, Error::MalformedRibbon(m) if m.contains("side 1")), "{err}");
        let bad_n = r#"{"n":4,"d":1,"sides":[]}"#;
        assert!(matches!(parse_ribbon(bad_n), Err(Error::MalformedRibbon(_))));
        let err = parse_ribbon("{\"n\":3,\n\"d\":x}").unwrap_err();
        assert!(matches!(&err, Error::Parse(m) if m.contains("line 2")), "{err}");
    }

    #[test]
    fn net_round_trip_and_errors() {
        let r = generate_ribbon(5, 3, 2).unwrap();
        let net = crate::fill::fill(&r, crate::fill::Continuity::G1, crate::interior::MaskKind::Biharmonic).unwrap();
        let text = format_net(&net).unwrap();
        let back = parse_net(&text).unwrap();
        assert_eq!(back.points(), net.points());
        assert_eq!(back.len() as u128, crate::labels::label_count(5, 6));
        assert_eq!(format_net(&back).unwrap(), text);

        // drop one label
        let lines: Vec<&str> = text.lines().collect();
        let victim = lines[3];
        let label = victim.split('"').nth(3).unwrap().to_string();
        let mut kept: Vec<&str> = lines.iter().copied().filter(|l| *l != victim).collect();
        let missing = kept.join("\n");
        let err = parse_net(&missing).unwrap_err();
        assert!(matches!(&err, Error::Structural(m) if m.contains(&label)), "{err}");

        kept.insert(3, lines[4]);
        let dup = kept.join("\n");
        assert!(matches!(parse_net(&dup), Err(Error::Structural(m)) if m.contains("duplicate")));
    }

    #[test]
    fn meshes() {
        let p = Vec3::new(1.0, 2.0, 3.0);
        let net = SPatchNet::from_fn(5, 3, |_| p).unwrap();
        let m = mesh_patch(&net, 4, CoordScheme::Wachspress, false).unwrap();
        assert!(m.vertices.iter().all(|v| (v - p).norm() < 1e-14));
        assert_eq!(m.vertices.len(), 1 + 5 * 4 * 5 / 2);
        assert_eq!(m.triangles.len(), 5 * 16);

        let poly = DomainPolygon::new(6).unwrap();
        let flat = SPatchNet::from_fn(6, 4, |s| {
            let x = s.entries().zip(poly.vertices()).fold(Vec2::zeros(), |a, (e, v)| a + v * e as f64) / 4.0;
            Vec3::new(x.x, x.y, 0.0)
        })
        .unwrap();
        for scheme in [CoordScheme::Wachspress, CoordScheme::MeanValue] {
            let m = mesh_patch(&flat, 5, scheme, true).unwrap();
            assert_eq!(m.degenerate_normals, 0);
            let normals = m.normals.unwrap();
            assert!(normals.iter().all(|n| (n - Vec3::z()).norm() < 1e-9));
        }
    }

    #[test]
    fn obj_output() {
        let mesh = SurfaceMesh {
            vertices: vec![Vec3::zeros(), Vec3::x(), Vec3::y()],
            normals: Some(vec![Vec3::z(); 3]),
            triangles: vec![[0, 1, 2]],
            degenerate_normals: 0,
        };
        let text = format_obj(&mesh);
        assert_eq!(obj_counts(&text), (3, 3, 1));
        assert!(text.contains("f 1//1 2//2 3//3"));
        assert!(text.lines().next().unwrap() == "v 0.0000000000000000e0 0.0000000000000000e0 0.0000000000000000e0");
        let bare = SurfaceMesh { normals: None, ..mesh };
        assert!(format_obj(&bare).ends_with("f 1 2 3\n"));
    }
}
