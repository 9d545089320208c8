//! WebAssembly bindings for the browser demo in `www/`.
//!
//! All state lives in [`Session`], a plain Rust type that the native tests
//! drive directly; [`Demo`] only forwards calls and turns errors into JS
//! exceptions.

use serde_json::json;
use spatch::bezier::{require_sabin, Ribbon};
use spatch::domain::{CoordScheme, DomainPolygon};
use spatch::fill::{self, Continuity};
use spatch::interior::MaskKind;
use spatch::meshio::{self, SurfaceMesh};
use spatch::sample::generate_ribbon;
use spatch::spatch::SPatchNet;
use spatch::verify::{self, CheckOptions};
use spatch::{Vec2, Vec3};
use wasm_bindgen::prelude::*;

pub const MAX_N: usize = 8;
pub const MAX_D: usize = 6;
pub const MAX_RESOLUTION: usize = 48;

pub struct Session {
    seed: u64,
    continuity: Continuity,
    mask: MaskKind,
    scheme: CoordScheme,
    ribbon: Ribbon,
    net: SPatchNet,
    mesh: Option<SurfaceMesh>,
}

fn flat(points: impl IntoIterator<Item = Vec3>) -> Vec<f32> {
    points.into_iter().flat_map(|p| [p.x as f32, p.y as f32, p.z as f32]).collect()
}

impl Session {
    pub fn new(n: usize, d: usize, seed: u64) -> Result<Self, String> {
        let (ribbon, net) = Self::build(n, d, seed, Continuity::G1, MaskKind::Biharmonic)?;
        Ok(Session {
            seed,
            continuity: Continuity::G1,
            mask: MaskKind::Biharmonic,
            scheme: CoordScheme::Wachspress,
            ribbon,
            net,
            mesh: None,
        })
    }

    fn build(n: usize, d: usize, seed: u64, c: Continuity, m: MaskKind) -> Result<(Ribbon, SPatchNet), String> {
        if !(3..=MAX_N).contains(&n) || !(2..=MAX_D).contains(&d) {
            return Err(format!("demo supports 3 <= n <= {MAX_N} and 2 <= d <= {MAX_D}"));
        }
        let mut ribbon = generate_ribbon(n, d, seed).map_err(|e| e.to_string())?;
        require_sabin(&mut ribbon, verify::DEFAULT_TOL).map_err(|e| e.to_string())?;
        let net = fill::fill(&ribbon, c, m).map_err(|e| e.to_string())?;
        Ok((ribbon, net))
    }

    fn refill(&mut self) -> Result<(), String> {
        self.net = fill::fill(&self.ribbon, self.continuity, self.mask).map_err(|e| e.to_string())?;
        self.mesh = None;
        Ok(())
    }

    pub fn regenerate(&mut self, n: usize, d: usize, seed: u64) -> Result<(), String> {
        let (ribbon, net) = Self::build(n, d, seed, self.continuity, self.mask)?;
        self.seed = seed;
        self.ribbon = ribbon;
        self.net = net;
        self.mesh = None;
        Ok(())
    }

    /// `continuity` is `c0` or `g1`; `mask` is `harmonic`, `biharmonic` or
    /// empty for the continuity's default.
    pub fn set_fill(&mut self, continuity: &str, mask: &str) -> Result<(), String> {
        let c: Continuity = continuity.parse().map_err(|e: spatch::Error| e.to_string())?;
        let m = if mask.is_empty() {
            c.default_mask()
        } else {
            mask.parse().map_err(|e: spatch::Error| e.to_string())?
        };
        self.continuity = c;
        self.mask = m;
        self.refill()
    }

    pub fn set_coords(&mut self, coords: &str) -> Result<(), String> {
        self.scheme = coords.parse().map_err(|e: spatch::Error| e.to_string())?;
        self.mesh = None;
        Ok(())
    }

    pub fn net(&self) -> &SPatchNet {
        &self.net
    }

    pub fn ribbon(&self) -> &Ribbon {
        &self.ribbon
    }

    pub fn remesh(&mut self, resolution: usize) -> Result<(), String> {
        let r = resolution.clamp(1, MAX_RESOLUTION);
        self.mesh = Some(meshio::mesh_patch(&self.net, r, self.scheme, true).map_err(|e| e.to_string())?);
        Ok(())
    }

    fn mesh(&self) -> Result<&SurfaceMesh, String> {
        self.mesh.as_ref().ok_or_else(|| "no mesh; call remesh first".to_string())
    }

    pub fn positions(&self) -> Result<Vec<f32>, String> {
        Ok(flat(self.mesh()?.vertices.iter().copied()))
    }

    pub fn normals(&self) -> Result<Vec<f32>, String> {
        Ok(flat(self.mesh()?.normals.iter().flatten().copied()))
    }

    pub fn indices(&self) -> Result<Vec<u32>, String> {
        Ok(self.mesh()?.triangles.iter().flatten().map(|&i| i as u32).collect())
    }

    /// Ribbon boundary curves, `samples + 1` points per side, side after side.
    pub fn boundary_curves(&self, samples: usize) -> Vec<f32> {
        let samples = samples.max(1);
        let pts = (0..self.ribbon.n()).flat_map(|i| {
            let curve = self.ribbon.outer_curve(i);
            (0..=samples).map(move |k| curve.eval(k as f64 / samples as f64).expect("t in [0, 1]"))
        });
        flat(pts)
    }

    /// Both ribbon rows of every side, `2 (d + 1)` points per side.
    pub fn ribbon_points(&self) -> Vec<f32> {
        flat(self.ribbon.sides().iter().flat_map(|s| s.outer.iter().chain(&s.inner).copied()))
    }

    /// Domain polygon vertices as `x0, y0, x1, y1, ...`.
    pub fn domain_vertices(&self) -> Vec<f64> {
        self.net.domain().vertices().iter().flat_map(|v| [v.x, v.y]).collect()
    }

    /// Surface point and unit normal at a domain point: `[x, y, z, nx, ny, nz]`.
    pub fn probe(&self, x: f64, y: f64) -> Result<Vec<f64>, String> {
        let domain: &DomainPolygon = self.net.domain();
        let q = Vec2::new(x, y);
        let p = self.net.eval_at_domain_point(q, self.scheme).map_err(|e| e.to_string())?;
        let inside = if domain.boundary_distance(q) < meshio::BOUNDARY_OFFSET && q.norm() > 0.0 {
            q - q.normalize() * meshio::BOUNDARY_OFFSET
        } else {
            q
        };
        let n = self
            .net
            .sampled_normal(inside, meshio::NORMAL_STEP, self.scheme)
            .unwrap_or_else(|_| Vec3::zeros());
        Ok(vec![p.x, p.y, p.z, n.x, n.y, n.z])
    }

    pub fn summary_json(&self) -> String {
        json!({
            "n": self.net.n(),
            "d": self.ribbon.degree(),
            "seed": self.seed,
            "depth": self.net.depth(),
            "points": self.net.len(),
            "continuity": self.continuity.to_string(),
            "mask": self.mask.to_string(),
            "coords": self.scheme.to_string(),
        })
        .to_string()
    }

    pub fn check_json(&self) -> Result<String, String> {
        let opts = CheckOptions {
            scheme: self.scheme,
            ..CheckOptions::default()
        };
        let report = verify::check(&self.net, &self.ribbon, Continuity::G1, &opts).map_err(|e| e.to_string())?;
        Ok(report.to_json())
    }

    pub fn ribbon_json(&self) -> Result<String, String> {
        meshio::format_ribbon(&self.ribbon).map_err(|e| e.to_string())
    }

    pub fn net_json(&self) -> Result<String, String> {
        meshio::format_net(&self.net).map_err(|e| e.to_string())
    }

    pub fn obj(&self) -> Result<String, String> {
        Ok(meshio::format_obj(self.mesh()?))
    }
}

fn js<T>(r: Result<T, String>) -> Result<T, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub struct Demo(Session);

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    pub fn new(n: usize, d: usize, seed: u32) -> Result<Demo, JsError> {
        js(Session::new(n, d, seed.into())).map(Demo)
    }

    pub fn regenerate(&mut self, n: usize, d: usize, seed: u32) -> Result<(), JsError> {
        js(self.0.regenerate(n, d, seed.into()))
    }

    #[wasm_bindgen(js_name = setFill)]
    pub fn set_fill(&mut self, continuity: &str, mask: &str) -> Result<(), JsError> {
        js(self.0.set_fill(continuity, mask))
    }

    #[wasm_bindgen(js_name = setCoords)]
    pub fn set_coords(&mut self, coords: &str) -> Result<(), JsError> {
        js(self.0.set_coords(coords))
    }

    pub fn remesh(&mut self, resolution: usize) -> Result<(), JsError> {
        js(self.0.remesh(resolution))
    }

    pub fn positions(&self) -> Result<Vec<f32>, JsError> {
        js(self.0.positions())
    }

    pub fn normals(&self) -> Result<Vec<f32>, JsError> {
        js(self.0.normals())
    }

    pub fn indices(&self) -> Result<Vec<u32>, JsError> {
        js(self.0.indices())
    }

    #[wasm_bindgen(js_name = boundaryCurves)]
    pub fn boundary_curves(&self, samples: usize) -> Vec<f32> {
        self.0.boundary_curves(samples)
    }

    #[wasm_bindgen(js_name = ribbonPoints)]
    pub fn ribbon_points(&self) -> Vec<f32> {
        self.0.ribbon_points()
    }

    #[wasm_bindgen(js_name = domainVertices)]
    pub fn domain_vertices(&self) -> Vec<f64> {
        self.0.domain_vertices()
    }

    pub fn probe(&self, x: f64, y: f64) -> Result<Vec<f64>, JsError> {
        js(self.0.probe(x, y))
    }

    pub fn summary(&self) -> String {
        self.0.summary_json()
    }

    pub fn check(&self) -> Result<String, JsError> {
        js(self.0.check_json())
    }

    #[wasm_bindgen(js_name = ribbonJson)]
    pub fn ribbon_json(&self) -> Result<String, JsError> {
        js(self.0.ribbon_json())
    }

    #[wasm_bindgen(js_name = netJson)]
    pub fn net_json(&self) -> Result<String, JsError> {
        js(self.0.net_json())
    }

    pub fn obj(&self) -> Result<String, JsError> {
        js(self.0.obj())
    }
}
