//! Fixed control points of the filling patch.
//!
//! A C⁰ fill copies the ribbon's outer rows onto the boundary labels. A G¹
//! fill works at depth `d + 3`: the outer rows are degree-elevated three
//! times onto the boundary, the last point of every boundary panel is placed
//! from the ribbon's cross-derivative rows, and the rest of each panel
//! follows from requiring the panel to be an affine image of the domain
//! polygon.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::bezier::Ribbon;
use crate::interior::{solve_interior, MaskKind};
use crate::labels::{binomial, boundary_label, panel, Label, LabelIndex};
use crate::spatch::SPatchNet;
use crate::{Error, Result, Vec3};

/// Relative tolerance for panels computed twice near a corner.
pub const CORNER_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Continuity {
    C0,
    #[default]
    G1,
}

impl Continuity {
    /// Mask used for the free points unless overridden.
    pub fn default_mask(self) -> MaskKind {
        match self {
            Continuity::C0 => MaskKind::Harmonic,
            Continuity::G1 => MaskKind::Biharmonic,
        }
    }

    /// Depth of the filling patch for a ribbon of degree `d`.
    pub fn depth(self, d: usize) -> usize {
        match self {
            Continuity::C0 => d,
            Continuity::G1 => d + 3,
        }
    }
}

impl fmt::Display for Continuity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Continuity::C0 => "c0",
            Continuity::G1 => "g1",
        })
    }
}

impl FromStr for Continuity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "c0" => Ok(Continuity::C0),
            "g1" => Ok(Continuity::G1),
            other => Err(Error::Parse(format!("unknown continuity '{other}'"))),
        }
    }
}

/// A control net in which only some labels carry positions.
#[derive(Clone, Debug)]
pub struct PartialNet {
    index: Arc<LabelIndex>,
    values: Vec<Option<Vec3>>,
}

impl PartialNet {
    pub fn empty(n: usize, depth: usize) -> Result<Self> {
        let index = Arc::new(LabelIndex::new(n, depth)?);
        let values = vec![None; index.len()];
        Ok(PartialNet { index, values })
    }

    pub fn index(&self) -> &Arc<LabelIndex> {
        &self.index
    }

    pub fn n(&self) -> usize {
        self.index.n()
    }

    pub fn depth(&self) -> usize {
        self.index.depth()
    }

    pub fn value(&self, ordinal: usize) -> Option<Vec3> {
        self.values[ordinal]
    }

    pub fn get(&self, s: &Label) -> Option<Vec3> {
        self.index.ordinal(s).and_then(|o| self.values[o])
    }

    pub fn is_fixed(&self, ordinal: usize) -> bool {
        self.values[ordinal].is_some()
    }

    pub fn fixed_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }

    pub fn free_count(&self) -> usize {
        self.values.len() - self.fixed_count()
    }

    /// Ordinals of the free labels in canonical order.
    pub fn free_ordinals(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&o| self.values[o].is_none()).collect()
    }

    pub fn fixed_points(&self) -> impl Iterator<Item = &Vec3> {
        self.values.iter().flatten()
    }

    pub fn set(&mut self, s: &Label, p: Vec3) {
        let o = self.index.ordinal(s).expect("label belongs to the net");
        self.values[o] = Some(p);
    }

    /// Fixes `s` to `p` unless it already has a value; an existing value
    /// must agree with `p` to within `tol · scale`. Returns the deviation.
    fn set_checked(&mut self, s: &Label, p: Vec3, scale: f64, tol: f64) -> Result<f64> {
        let o = self.index.ordinal(s).expect("label belongs to the net");
        match self.values[o] {
            None => {
                self.values[o] = Some(p);
                Ok(0.0)
            }
            Some(q) => {
                let deviation = (q - p).norm() / scale;
                if deviation > tol {
                    return Err(Error::InconsistentPanel {
                        label: s.to_string(),
                        first: [q.x, q.y, q.z],
                        second: [p.x, p.y, p.z],
                        deviation,
                    });
                }
                Ok(deviation)
            }
        }
    }

    /// Converts to a complete net; fails if any label is still free.
    pub fn into_net(self) -> Result<SPatchNet> {
        let points = self
            .values
            .iter()
            .enumerate()
            .map(|(o, v)| {
                v.ok_or_else(|| Error::Structural(format!("label {} has no position", self.index.label(o))))
            })
            .collect::<Result<Vec<_>>>()?;
        SPatchNet::new(self.index, points)
    }

    pub(crate) fn with_values(index: Arc<LabelIndex>, values: Vec<Option<Vec3>>) -> Self {
        PartialNet { index, values }
    }
}

/// Affine map taking homogeneous domain coordinates `(cos θ, sin θ, 1)` to
/// 3D, fixed by three consecutive panel points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PanelFrame {
    /// Row `r` holds the coefficients of output coordinate `r`.
    m: Matrix3<f64>,
    n: usize,
}

impl PanelFrame {
    /// Solves for the map sending the domain directions at angles 0, 2π/n and
    /// 4π/n to the panel points `P_n`, `P_1` and `P_2`.
    pub fn solve(last: Vec3, first: Vec3, second: Vec3, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidPolygon(n));
        }
        let a = Matrix3::from_fn(|r, c| {
            let theta = 2.0 * PI * r as f64 / n as f64;
            [theta.cos(), theta.sin(), 1.0][c]
        });
        let rhs = Matrix3::from_rows(&[last.transpose(), first.transpose(), second.transpose()]);
        let mt = a
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Numerical("singular panel system".into()))?;
        if !mt.iter().all(|v| v.is_finite()) {
            return Err(Error::Numerical("non-finite panel frame".into()));
        }
        Ok(PanelFrame { m: mt.transpose(), n })
    }

    /// Image of the domain direction at angle `2kπ/n`.
    pub fn point(&self, k: usize) -> Vec3 {
        let theta = 2.0 * PI * k as f64 / self.n as f64;
        self.m * Vec3::new(theta.cos(), theta.sin(), 1.0)
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }
}

/// Remaining panel points `P_3 … P_{n-1}` of the affine panel through
/// `P_n`, `P_1`, `P_2`.
pub fn affine_complete(last: Vec3, first: Vec3, second: Vec3, n: usize) -> Result<Vec<Vec3>> {
    let frame = PanelFrame::solve(last, first, second, n)?;
    Ok((3..n).map(|k| frame.point(k)).collect())
}

/// Fixes the boundary labels to the (unelevated) outer rows; depth = `d`.
pub fn fill_c0(r: &Ribbon) -> Result<PartialNet> {
    let (n, d) = (r.n(), r.degree());
    let mut net = PartialNet::empty(n, d)?;
    for i in 0..n {
        for j in 0..=d {
            net.set(&boundary_label(i, j, n, d)?, r.point(i, j, 0));
        }
    }
    Ok(net)
}

/// Offset `P_{j,n} - P_{j,1}` of panel `j` on side `i` for a degree-`d`
/// ribbon filled at depth `d + 3`; `j` ranges over `0..=d+2`.
pub fn panel_tip_offset(r: &Ribbon, i: usize, j: usize) -> Vec3 {
    let n = r.n();
    let d = r.degree();
    let c = -(2.0 * PI / n as f64).cos();
    let gate = |lo: usize, hi: usize| (lo..=hi).contains(&j);
    let outer = |k: usize| r.point(i, k, 0);
    let cross = |k: usize| r.point(i, k, 1) - r.point(i, k, 0);
    let b = |top: usize, k: usize| binomial(top, k) as f64;

    let mut acc = Vec3::zeros();
    if gate(1, d) {
        acc += (outer(j) - outer(j - 1)) * (2.0 * c * b(d - 1, j - 1));
    }
    if gate(2, d + 1) {
        acc += (outer(j - 1) - outer(j - 2)) * (4.0 * c * b(d - 1, j - 2));
    }
    if gate(3, d + 2) {
        acc += (outer(j - 2) - outer(j - 3)) * (2.0 * c * b(d - 1, j - 3));
    }
    if gate(0, d) {
        acc += cross(j) * b(d, j);
    }
    if gate(1, d + 1) {
        acc += cross(j - 1) * ((2.0 + 2.0 * c) * b(d, j - 1));
    }
    if gate(2, d + 2) {
        acc += cross(j - 2) * b(d, j - 2);
    }
    acc * (d as f64 / (d + 3) as f64) / b(d + 2, j)
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PanelReport {
    /// Worst relative disagreement between values computed twice.
    pub corner_deviation: f64,
}

/// All boundary-panel points of the G¹ fill at depth `d + 3`.
pub fn g1_panels(r: &Ribbon) -> Result<PartialNet> {
    g1_panels_with_report(r, CORNER_TOL).map(|(net, _)| net)
}

pub fn g1_panels_with_report(r: &Ribbon, tol: f64) -> Result<(PartialNet, PanelReport)> {
    let n = r.n();
    let depth = r.degree() + 3;
    let scale = r.bbox_diagonal();
    let mut net = PartialNet::empty(n, depth)?;
    for i in 0..n {
        let elevated = r.outer_curve(i).degree_elevate(3);
        for (j, p) in elevated.control_points().iter().enumerate() {
            net.set_checked(&boundary_label(i, j, n, depth)?, *p, scale, tol)?;
        }
    }

    let mut report = PanelReport::default();
    for i in 0..n {
        for j in 0..depth {
            let labels = panel(i, j, n, depth)?;
            let first = net.get(&labels[0]).expect("boundary point set");
            let second = net.get(&labels[1]).expect("boundary point set");
            let last = first + panel_tip_offset(r, i, j);
            let frame = PanelFrame::solve(last, first, second, n)?;
            for (k, s) in labels.iter().enumerate().skip(2) {
                // element k (zero-based) is the panel's (k+1)-th point
                let p = if k == n - 1 { last } else { frame.point(k + 1) };
                let dev = net.set_checked(s, p, scale, tol)?;
                report.corner_deviation = report.corner_deviation.max(dev);
            }
        }
    }
    Ok((net, report))
}

/// G¹ fill: boundary panels followed by the interior mask solve.
pub fn fill_g1(r: &Ribbon, mask: MaskKind) -> Result<SPatchNet> {
    solve_interior(&g1_panels(r)?, mask)
}

/// Complete fill with the requested continuity and interior mask.
pub fn fill(r: &Ribbon, continuity: Continuity, mask: MaskKind) -> Result<SPatchNet> {
    let partial = match continuity {
        Continuity::C0 => fill_c0(r)?,
        Continuity::G1 => g1_panels(r)?,
    };
    solve_interior(&partial, mask)
}
