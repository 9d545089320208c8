//! Numerical witnesses of boundary interpolation, panel affinity and
//! tangent-plane continuity.
//!
//! Everything here goes through the public evaluation API, so the checks are
//! independent of how the fill was computed.

use nalgebra::Matrix3;
use serde::Serialize;

use crate::bezier::{ribbon_boundary_frame, Ribbon};
use crate::domain::CoordScheme;
use crate::fill::{g1_panels_with_report, Continuity};
use crate::labels::panel;
use crate::spatch::SPatchNet;
use crate::{Error, Result, Vec3};

pub const DEFAULT_SAMPLES: usize = 33;
pub const DEFAULT_OFFSETS: [f64; 2] = [1e-2, 1e-3];
pub const DEFAULT_TOL: f64 = 1e-9;
/// Normal deviation allowed at the smallest probe offset, in radians.
pub const DEFAULT_G1_TOL: f64 = 2e-3;
/// Angles below this are finite-difference noise; no shrink is required.
pub const ANGLE_FLOOR: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOptions {
    pub samples: usize,
    pub offsets: Vec<f64>,
    pub scheme: CoordScheme,
    pub tolerance: f64,
    pub g1_tolerance: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            samples: DEFAULT_SAMPLES,
            offsets: DEFAULT_OFFSETS.to_vec(),
            scheme: CoordScheme::default(),
            tolerance: DEFAULT_TOL,
            g1_tolerance: DEFAULT_G1_TOL,
        }
    }
}

/// Max relative deviation per side between the patch boundary and the
/// ribbon's outer row, over `samples` uniform parameters including the ends.
pub fn check_c0(net: &SPatchNet, r: &Ribbon, samples: usize) -> Result<Vec<f64>> {
    if net.n() != r.n() {
        return Err(Error::DimensionMismatch {
            expected: r.n(),
            got: net.n(),
        });
    }
    if net.depth() != r.degree() && net.depth() != r.degree() + 3 {
        return Err(Error::DepthMismatch {
            net: net.depth(),
            ribbon: r.degree(),
        });
    }
    let scale = r.bbox_diagonal();
    let samples = samples.max(2);
    (0..r.n())
        .map(|i| {
            let patch = net.boundary_curve(i)?;
            let ribbon = r.outer_curve(i);
            (0..samples).try_fold(0.0f64, |worst, k| {
                let t = k as f64 / (samples - 1) as f64;
                let dev = (patch.eval(t)? - ribbon.eval(t)?).norm() / scale;
                Ok(worst.max(dev))
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct G1Report {
    pub offsets: Vec<f64>,
    /// `per_side[i][k]`: max angle (radians) on side `i` at `offsets[k]`.
    pub per_side: Vec<Vec<f64>>,
    /// Max over sides, per offset.
    pub max: Vec<f64>,
    /// `max[k + 1] / max[k]`.
    pub shrink_ratio: Vec<f64>,
    /// Samples where the ribbon's tangent and cross-derivative are parallel.
    pub degenerate_frames: usize,
    /// Samples where the patch normal could not be formed.
    pub degenerate_normals: usize,
}

/// Angle between the patch normal just inside each edge and the ribbon's
/// tangent-plane normal at the same edge parameter.
pub fn check_g1(
    net: &SPatchNet,
    r: &Ribbon,
    samples: usize,
    offsets: &[f64],
    scheme: CoordScheme,
) -> Result<G1Report> {
    if net.n() != r.n() {
        return Err(Error::DimensionMismatch {
            expected: r.n(),
            got: net.n(),
        });
    }
    let n = r.n();
    let domain = net.domain();
    let jobs: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|i| (0..offsets.len()).flat_map(move |o| (1..=samples).map(move |k| (i, o, k))))
        .collect();
    // (angle, degenerate frame, degenerate normal)
    let results = crate::par_map(&jobs, |&(i, o, k)| -> Result<(f64, bool, bool)> {
        let t = k as f64 / (samples + 1) as f64;
        let eps = offsets[o];
        let frame = ribbon_boundary_frame(r, i, t)?;
        let reference = frame.normal();
        let scale = frame.tangent.norm() * frame.cross.norm();
        if !(reference.norm() > 1e-12 * scale) {
            return Ok((0.0, true, false));
        }
        let x = domain.edge_point(i, t)? + domain.inward_normal(i) * eps;
        match net.sampled_normal(x, eps / 10.0, scheme) {
            Ok(normal) => Ok((angle_between_lines(&normal, &reference), false, false)),
            Err(Error::DegenerateNormal { .. }) => Ok((0.0, false, true)),
            Err(e) => Err(e),
        }
    });
    let mut per_side = vec![vec![0.0f64; offsets.len()]; n];
    let mut degenerate_frames = 0;
    let mut degenerate_normals = 0;
    for (&(i, o, _), res) in jobs.iter().zip(results) {
        let (angle, bad_frame, bad_normal) = res?;
        degenerate_frames += bad_frame as usize;
        degenerate_normals += bad_normal as usize;
        per_side[i][o] = per_side[i][o].max(angle);
    }
    let max: Vec<f64> = (0..offsets.len())
        .map(|o| per_side.iter().map(|s| s[o]).fold(0.0, f64::max))
        .collect();
    let shrink_ratio = max
        .windows(2)
        .map(|w| if w[0] > 0.0 { w[1] / w[0] } else { 0.0 })
        .collect();
    Ok(G1Report {
        offsets: offsets.to_vec(),
        per_side,
        max,
        shrink_ratio,
        degenerate_frames,
        degenerate_normals,
    })
}

/// Angle between two directions, ignoring orientation.
fn angle_between_lines(a: &Vec3, b: &Vec3) -> f64 {
    let (a, b) = (a.normalize(), b.normalize());
    let b = if a.dot(&b) < 0.0 { -b } else { b };
    a.cross(&b).norm().atan2(a.dot(&b))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PanelResidual {
    pub side: usize,
    pub panel: usize,
    pub residual: f64,
}

/// Least-squares affine fit of every boundary panel against the domain
/// polygon (panel element `k` ↔ direction at angle `2kπ/n`); residuals are
/// relative to the net's bounding-box diagonal.
pub fn check_panels(net: &SPatchNet) -> Vec<PanelResidual> {
    let (n, depth) = (net.n(), net.depth());
    let scale = net.bbox_diagonal();
    let dirs: Vec<Vec3> = (1..=n)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            Vec3::new(a.cos(), a.sin(), 1.0)
        })
        .collect();
    let gram: Matrix3<f64> = dirs.iter().map(|h| h * h.transpose()).sum();
    let gram_inv = gram.try_inverse().expect("regular polygon directions span the plane");
    let mut out = Vec::with_capacity(n * depth);
    for i in 0..n {
        for j in 0..depth {
            let labels = panel(i, j, n, depth).expect("valid panel");
            let pts: Vec<Vec3> = labels.iter().map(|s| net.point(s).expect("label in net")).collect();
            let moment: Matrix3<f64> = dirs.iter().zip(&pts).map(|(h, p)| h * p.transpose()).sum();
            let mt = gram_inv * moment;
            let residual = dirs
                .iter()
                .zip(&pts)
                .map(|(h, p)| (mt.transpose() * h - p).norm())
                .fold(0.0, f64::max)
                / scale;
            out.push(PanelResidual {
                side: i,
                panel: j,
                residual,
            });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct C0Section {
    pub per_side: Vec<f64>,
    pub max: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct G1Section {
    #[serde(flatten)]
    pub report: G1Report,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PanelSection {
    pub residuals: Vec<PanelResidual>,
    pub max: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CornerSection {
    pub worst: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Machine-readable result of [`check`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub n: usize,
    pub depth: usize,
    pub ribbon_degree: usize,
    pub continuity: Continuity,
    pub c0: C0Section,
    pub g1: Option<G1Section>,
    pub panels: Option<PanelSection>,
    pub corner_consistency: Option<CornerSection>,
    pub pass: bool,
}

impl CheckReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs the checks appropriate for `continuity`.
pub fn check(net: &SPatchNet, r: &Ribbon, continuity: Continuity, opts: &CheckOptions) -> Result<CheckReport> {
    let per_side = check_c0(net, r, opts.samples)?;
    let max = per_side.iter().copied().fold(0.0, f64::max);
    let c0 = C0Section {
        pass: max <= opts.tolerance,
        per_side,
        max,
        tolerance: opts.tolerance,
    };

    let (g1, panels, corner) = if continuity == Continuity::G1 {
        let report = check_g1(net, r, opts.samples, &opts.offsets, opts.scheme)?;
        let shrinking = report.max.windows(2).all(|w| w[1] < w[0] || w[0] <= ANGLE_FLOOR);
        let last = report.max.last().copied().unwrap_or(0.0);
        let g1 = G1Section {
            pass: shrinking && last < opts.g1_tolerance && report.degenerate_normals == 0,
            report,
            tolerance: opts.g1_tolerance,
        };

        let residuals = check_panels(net);
        let pmax = residuals.iter().map(|p| p.residual).fold(0.0, f64::max);
        let panels = PanelSection {
            pass: pmax <= opts.tolerance,
            residuals,
            max: pmax,
            tolerance: opts.tolerance,
        };

        let worst = match g1_panels_with_report(r, f64::INFINITY) {
            Ok((_, rep)) => rep.corner_deviation,
            Err(_) => f64::INFINITY,
        };
        let corner = CornerSection {
            worst,
            tolerance: opts.tolerance,
            pass: worst <= opts.tolerance,
        };
        (Some(g1), Some(panels), Some(corner))
    } else {
        (None, None, None)
    };

    let pass = c0.pass
        && g1.as_ref().is_none_or(|s| s.pass)
        && panels.as_ref().is_none_or(|s| s.pass)
        && corner.as_ref().is_none_or(|s| s.pass);
    Ok(CheckReport {
        n: net.n(),
        depth: net.depth(),
        ribbon_degree: r.degree(),
        continuity,
        c0,
        g1,
        panels,
        corner_consistency: corner,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fill::{fill, fill_c0};
    use crate::interior::{solve_interior, MaskKind};
    use crate::sample::{generate_ribbon, planar_ribbon};

    #[test]
    fn generated_ribbon_angles_shrink_with_offset() {
        for seed in [0, 4] {
            let (n, d) = ([4, 5, 6][seed as usize % 3], [3, 5][seed as usize % 2]);
            let r = generate_ribbon(n, d, seed).unwrap();
            let net = fill(&r, Continuity::G1, MaskKind::Biharmonic).unwrap();
            let rep = check_g1(&net, &r, 33, &[1e-2, 1e-3, 1e-4], CoordScheme::Wachspress).unwrap();
            assert!(rep.max[2] < rep.max[1] && rep.max[1] < rep.max[0], "{:?}", rep.max);
            assert!(rep.shrink_ratio.iter().all(|q| *q < 0.2), "{:?}", rep.shrink_ratio);
            let c0net = fill(&r, Continuity::C0, MaskKind::Harmonic).unwrap();
            let neg = check_g1(&c0net, &r, 33, &[1e-2, 1e-3], CoordScheme::Wachspress).unwrap();
            assert!(neg.max[1] > 1e-2, "{:?}", neg.max);
        }
    }

    #[test]
    fn planar_fill_passes_everything() {
        let r = planar_ribbon(6, 4, 0.0).unwrap();
        let net = fill(&r, Continuity::G1, MaskKind::Biharmonic).unwrap();
        let rep = check(&net, &r, Continuity::G1, &CheckOptions::default()).unwrap();
        assert!(rep.pass, "{}", rep.to_json());
        assert!(rep.g1.unwrap().report.max.iter().all(|a| *a < 1e-9));
    }

    #[test]
    fn c0_check_and_negative_control() {
        let r = generate_ribbon(5, 4, 6).unwrap();
        let net = solve_interior(&fill_c0(&r).unwrap(), MaskKind::Harmonic).unwrap();
        assert!(check_c0(&net, &r, 50).unwrap().iter().all(|d| *d < 1e-11));
        let mut bumped = net.clone();
        let s = crate::labels::boundary_label(2, 2, 5, 4).unwrap();
        let p = bumped.point(&s).unwrap();
        bumped.set_point(&s, p + Vec3::new(0.0, 0.0, 0.05)).unwrap();
        let dev = check_c0(&bumped, &r, 50).unwrap();
        assert!(dev[2] > 1e-3 && dev[0] < 1e-11);
    }

    #[test]
    fn depth_mismatch() {
        let r = generate_ribbon(5, 4, 6).unwrap();
        let net = SPatchNet::from_fn(5, 6, |_| Vec3::zeros()).unwrap();
        assert!(matches!(check_c0(&net, &r, 10), Err(Error::DepthMismatch { .. })));
    }

    #[test]
    fn panels_of_triangles_fit_exactly() {
        let net = SPatchNet::from_fn(3, 4, |s| Vec3::new(s.get(0) as f64, (s.get(1) * s.get(2)) as f64, 1.0)).unwrap();
        assert!(check_panels(&net).iter().all(|p| p.residual < 1e-14));
    }

    #[test]
    fn perturbed_panel_detected() {
        let r = generate_ribbon(5, 4, 1).unwrap();
        let mut net = fill(&r, Continuity::G1, MaskKind::Biharmonic).unwrap();
        assert!(check_panels(&net).iter().all(|p| p.residual < 1e-9));
        let s = &panel(1, 3, 5, 7).unwrap()[3];
        let p = net.point(s).unwrap();
        net.set_point(s, p + Vec3::new(0.01, 0.0, 0.0)).unwrap();
        let res = check_panels(&net);
        let bad: Vec<_> = res.iter().filter(|p| p.residual > 1e-4).collect();
        assert!(!bad.is_empty() && bad.iter().all(|p| p.side == 1));
    }
}
