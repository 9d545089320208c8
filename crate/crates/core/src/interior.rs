//! Placement of the free control points by discrete mask equations.
//!
//! The harmonic mask of a control point puts weight 1 on each adjacent point
//! and minus the valence on the point itself; the biharmonic mask is the
//! harmonic mask applied to itself. Requiring every free point's mask to
//! vanish, with the fixed points as boundary data, gives a square symmetric
//! system that has a unique solution whenever at least one point is fixed.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::fill::PartialNet;
use crate::labels::{Label, LabelIndex};
use crate::spatch::SPatchNet;
use crate::{bbox_diagonal, Error, Result, Vec3};

/// Above this many unknowns the solve switches from dense Cholesky to
/// conjugate gradients.
pub const DENSE_LIMIT: usize = 5000;
pub const CG_TOL: f64 = 1e-12;
/// Mask residual bound relative to the bounding-box diagonal.
pub const RESIDUAL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaskKind {
    Harmonic,
    #[default]
    Biharmonic,
}

impl fmt::Display for MaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MaskKind::Harmonic => "harmonic",
            MaskKind::Biharmonic => "biharmonic",
        })
    }
}

impl FromStr for MaskKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "harmonic" => Ok(MaskKind::Harmonic),
            "biharmonic" => Ok(MaskKind::Biharmonic),
            other => Err(Error::Parse(format!("unknown mask '{other}'"))),
        }
    }
}

/// Integer stencil centred on one control point, keyed by label ordinal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mask {
    pub center: usize,
    pub weights: BTreeMap<usize, i64>,
}

impl Mask {
    pub fn sum(&self) -> i64 {
        self.weights.values().sum()
    }

    pub fn weight(&self, ordinal: usize) -> i64 {
        self.weights.get(&ordinal).copied().unwrap_or(0)
    }

    /// The stencil with labels in place of ordinals.
    pub fn labelled(&self, index: &LabelIndex) -> BTreeMap<Label, i64> {
        self.weights
            .iter()
            .map(|(&o, &w)| (index.label(o).clone(), w))
            .collect()
    }

    /// `Σ_k w_k P_k`.
    pub fn apply(&self, points: &[Vec3]) -> Vec3 {
        self.weights
            .iter()
            .fold(Vec3::zeros(), |acc, (&o, &w)| acc + points[o] * w as f64)
    }
}

/// Mask construction over a precomputed adjacency graph.
#[derive(Clone, Debug)]
pub struct Masks {
    adjacency: Vec<Vec<usize>>,
}

impl Masks {
    pub fn new(index: &LabelIndex) -> Self {
        Masks {
            adjacency: index.adjacency(),
        }
    }

    pub fn valence(&self, ordinal: usize) -> usize {
        self.adjacency[ordinal].len()
    }

    pub fn harmonic(&self, i: usize) -> Mask {
        let mut weights = BTreeMap::new();
        for &j in &self.adjacency[i] {
            weights.insert(j, 1);
        }
        weights.insert(i, -(self.adjacency[i].len() as i64));
        Mask { center: i, weights }
    }

    pub fn biharmonic(&self, i: usize) -> Mask {
        let mut weights = BTreeMap::new();
        for (&j, &wj) in &self.harmonic(i).weights {
            for (&k, &wk) in &self.harmonic(j).weights {
                *weights.entry(k).or_insert(0) += wj * wk;
            }
        }
        weights.retain(|_, w| *w != 0);
        Mask { center: i, weights }
    }

    pub fn mask(&self, i: usize, kind: MaskKind) -> Mask {
        match kind {
            MaskKind::Harmonic => self.harmonic(i),
            MaskKind::Biharmonic => self.biharmonic(i),
        }
    }
}

pub fn harmonic_mask(s: &Label, index: &LabelIndex) -> Result<Mask> {
    let o = lookup(s, index)?;
    Ok(Masks::new(index).harmonic(o))
}

pub fn biharmonic_mask(s: &Label, index: &LabelIndex) -> Result<Mask> {
    let o = lookup(s, index)?;
    Ok(Masks::new(index).biharmonic(o))
}

fn lookup(s: &Label, index: &LabelIndex) -> Result<usize> {
    index
        .ordinal(s)
        .ok_or_else(|| Error::Structural(format!("label {s} not in L({}, {})", index.n(), index.depth())))
}

/// One mask equation per free label, restricted to the free columns.
#[derive(Clone, Debug)]
pub struct InteriorSystem {
    /// Ordinals of the unknowns, in canonical label order.
    pub free: Vec<usize>,
    /// Sparse rows: `(column, coefficient)` with columns indexing `free`.
    pub rows: Vec<Vec<(usize, f64)>>,
    /// Fixed-point contributions moved to the right-hand side.
    pub rhs: Vec<Vec3>,
    pub kind: MaskKind,
}

impl InteriorSystem {
    pub fn len(&self) -> usize {
        self.free.len()
    }

    pub fn is_empty(&self) -> bool {
        self.free.is_empty()
    }

    pub fn dense(&self) -> DMatrix<f64> {
        let n = self.len();
        let mut a = DMatrix::zeros(n, n);
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, v) in row {
                a[(r, c)] += v;
            }
        }
        a
    }

    /// `max |A - Aᵀ|`.
    pub fn symmetry_defect(&self) -> f64 {
        let a = self.dense();
        (&a - a.transpose()).abs().max()
    }

    fn mul(&self, x: &[f64], out: &mut [f64]) {
        for (o, row) in out.iter_mut().zip(&self.rows) {
            *o = row.iter().map(|&(c, v)| v * x[c]).sum();
        }
    }
}

pub fn assemble(p: &PartialNet, kind: MaskKind) -> InteriorSystem {
    let masks = Masks::new(p.index());
    let free = p.free_ordinals();
    let mut column = vec![usize::MAX; p.index().len()];
    for (c, &o) in free.iter().enumerate() {
        column[o] = c;
    }
    let built: Vec<(Vec<(usize, f64)>, Vec3)> = crate::par_map(&free, |&o| {
        let mask = masks.mask(o, kind);
        let mut row = Vec::with_capacity(mask.weights.len());
        let mut rhs = Vec3::zeros();
        for (&k, &w) in &mask.weights {
            match p.value(k) {
                Some(q) => rhs -= q * w as f64,
                None => row.push((column[k], w as f64)),
            }
        }
        (row, rhs)
    });
    let (rows, rhs) = built.into_iter().unzip();
    InteriorSystem { free, rows, rhs, kind }
}

/// Solves the mask system and returns the completed net.
pub fn solve_interior(p: &PartialNet, kind: MaskKind) -> Result<SPatchNet> {
    let system = assemble(p, kind);
    let mut values: Vec<Option<Vec3>> = (0..p.index().len()).map(|o| p.value(o)).collect();
    if !system.is_empty() {
        if p.fixed_count() == 0 {
            return Err(Error::Numerical("mask system needs at least one fixed point".into()));
        }
        let solution = if system.len() <= DENSE_LIMIT {
            solve_dense(&system)?
        } else {
            solve_cg(&system)?
        };
        if let Some(row) = solution.iter().position(|v| !v.iter().all(|c| c.is_finite())) {
            return Err(Error::Numerical(format!(
                "non-finite solution at label {}",
                p.index().label(system.free[row])
            )));
        }
        for (&o, v) in system.free.iter().zip(solution) {
            values[o] = Some(v);
        }
    }
    let net = PartialNet::with_values(p.index().clone(), values).into_net()?;

    let residuals = mask_residuals(&net, &system.free, kind);
    let scale = net.bbox_diagonal();
    if let Some((row, worst)) = residuals
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(r, v)| (r, *v))
    {
        if !(worst <= RESIDUAL_TOL * scale) {
            return Err(Error::Numerical(format!(
                "mask residual {worst:e} at label {} exceeds {:e}",
                net.index().label(system.free[row]),
                RESIDUAL_TOL * scale
            )));
        }
    }
    Ok(net)
}

/// Absolute residual `|Σ_k mask[k] P_k|` of every listed mask equation.
pub fn mask_residuals(net: &SPatchNet, centers: &[usize], kind: MaskKind) -> Vec<f64> {
    let masks = Masks::new(net.index());
    centers
        .iter()
        .map(|&o| masks.mask(o, kind).apply(net.points()).norm())
        .collect()
}

/// Quadratic mask energy `Σ_free |mask · P|²`, exposed for inspection.
pub fn mask_energy(net: &SPatchNet, centers: &[usize], kind: MaskKind) -> f64 {
    mask_residuals(net, centers, kind).iter().map(|r| r * r).sum()
}

/// Harmonic rows are negative definite, biharmonic rows positive definite.
fn sign(kind: MaskKind) -> f64 {
    match kind {
        MaskKind::Harmonic => -1.0,
        MaskKind::Biharmonic => 1.0,
    }
}

fn solve_dense(system: &InteriorSystem) -> Result<Vec<Vec3>> {
    let s = sign(system.kind);
    let n = system.len();
    let a = system.dense() * s;
    let chol = a.cholesky().ok_or_else(|| {
        Error::Numerical(format!("mask matrix of size {n} is not positive definite"))
    })?;
    let mut out = vec![Vec3::zeros(); n];
    for axis in 0..3 {
        let b = DVector::from_iterator(n, system.rhs.iter().map(|r| r[axis] * s));
        let x = chol.solve(&b);
        for (o, v) in out.iter_mut().zip(x.iter()) {
            o[axis] = *v;
        }
    }
    Ok(out)
}

fn solve_cg(system: &InteriorSystem) -> Result<Vec<Vec3>> {
    let s = sign(system.kind);
    let n = system.len();
    let mut out = vec![Vec3::zeros(); n];
    let mut ap = vec![0.0; n];
    for axis in 0..3 {
        let b: Vec<f64> = system.rhs.iter().map(|r| r[axis] * s).collect();
        let bnorm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut x = vec![0.0; n];
        if bnorm == 0.0 {
            continue;
        }
        let mut r = b.clone();
        let mut p = r.clone();
        let mut rr: f64 = r.iter().map(|v| v * v).sum();
        let mut converged = false;
        for _ in 0..10 * n {
            system.mul(&p, &mut ap);
            let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum::<f64>() * s;
            if !(pap > 0.0) {
                return Err(Error::Numerical("conjugate gradient breakdown".into()));
            }
            let alpha = rr / pap;
            for k in 0..n {
                x[k] += alpha * p[k];
                r[k] -= alpha * ap[k] * s;
            }
            let next: f64 = r.iter().map(|v| v * v).sum();
            if next.sqrt() <= CG_TOL * bnorm {
                converged = true;
                break;
            }
            let beta = next / rr;
            rr = next;
            for k in 0..n {
                p[k] = r[k] + beta * p[k];
            }
        }
        if !converged {
            return Err(Error::Numerical(format!(
                "conjugate gradient did not converge in {} iterations",
                10 * n
            )));
        }
        for (o, v) in out.iter_mut().zip(&x) {
            o[axis] = *v;
        }
    }
    Ok(out)
}

/// Largest and smallest fixed coordinate along `axis`, for bound checks.
pub fn fixed_range(p: &PartialNet, axis: usize) -> (f64, f64) {
    p.fixed_points()
        .map(|q| q[axis])
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// Bounding-box diagonal of the fixed points.
pub fn fixed_scale(p: &PartialNet) -> f64 {
    bbox_diagonal(p.fixed_points())
}
