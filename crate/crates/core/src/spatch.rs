//! S-patch control nets and their evaluation.
//!
//! `S(λ) = Σ_s P_s · (d! / Π s_i!) · Π λ_i^{s_i}` over all labels of the net.

use std::sync::Arc;

use crate::bezier::BezierCurve;
use crate::domain::{Barycentric, CoordScheme, DomainPolygon};
use crate::labels::{boundary_label, binomial, Label, LabelIndex};
use crate::{bbox_diagonal, Error, Result, Vec2, Vec3};

#[derive(Clone, Debug)]
pub struct SPatchNet {
    index: Arc<LabelIndex>,
    domain: DomainPolygon,
    coeffs: Arc<Vec<f64>>,
    points: Vec<Vec3>,
}

/// `d! / Π s_i!`, built as a product of binomials in exact integer arithmetic.
pub fn multinomial(s: &Label) -> u128 {
    let mut total = 0;
    let mut acc = 1u128;
    for e in s.entries() {
        total += e;
        acc *= binomial(total, e);
    }
    acc
}

/// The S-patch basis function of label `s` at `λ`; `0^0 = 1`.
pub fn basis(s: &Label, lambda: &Barycentric) -> Result<f64> {
    if s.n() != lambda.len() {
        return Err(Error::DimensionMismatch {
            expected: s.n(),
            got: lambda.len(),
        });
    }
    let mono: f64 = s
        .entries()
        .zip(lambda.values())
        .map(|(e, l)| l.powi(e as i32))
        .product();
    Ok(multinomial(s) as f64 * mono)
}

impl SPatchNet {
    /// Builds a net from points given in the index's canonical order.
    pub fn new(index: Arc<LabelIndex>, points: Vec<Vec3>) -> Result<Self> {
        if points.len() != index.len() {
            return Err(Error::DimensionMismatch {
                expected: index.len(),
                got: points.len(),
            });
        }
        let domain = DomainPolygon::new(index.n())?;
        let coeffs = Arc::new(index.iter().map(|s| multinomial(s) as f64).collect());
        Ok(SPatchNet {
            index,
            domain,
            coeffs,
            points,
        })
    }

    pub fn from_fn(n: usize, depth: usize, f: impl FnMut(&Label) -> Vec3) -> Result<Self> {
        let index = Arc::new(LabelIndex::new(n, depth)?);
        let points = index.iter().map(f).collect();
        SPatchNet::new(index, points)
    }

    pub fn n(&self) -> usize {
        self.index.n()
    }

    pub fn depth(&self) -> usize {
        self.index.depth()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index(&self) -> &Arc<LabelIndex> {
        &self.index
    }

    pub fn domain(&self) -> &DomainPolygon {
        &self.domain
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn point(&self, s: &Label) -> Option<Vec3> {
        self.index.ordinal(s).map(|o| self.points[o])
    }

    pub fn set_point(&mut self, s: &Label, p: Vec3) -> Result<()> {
        let o = self
            .index
            .ordinal(s)
            .ok_or_else(|| Error::Structural(format!("label {s} not in net")))?;
        self.points[o] = p;
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Label, &Vec3)> {
        self.index.iter().zip(&self.points)
    }

    pub fn bbox_diagonal(&self) -> f64 {
        bbox_diagonal(&self.points)
    }

    pub fn map_points(&self, f: impl Fn(&Vec3) -> Vec3) -> SPatchNet {
        SPatchNet {
            index: self.index.clone(),
            domain: self.domain.clone(),
            coeffs: self.coeffs.clone(),
            points: self.points.iter().map(f).collect(),
        }
    }

    pub fn eval(&self, lambda: &Barycentric) -> Result<Vec3> {
        let n = self.n();
        if lambda.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: lambda.len(),
            });
        }
        let d = self.depth();
        // powers[i * (d + 1) + e] = λ_i^e
        let mut powers = vec![1.0; n * (d + 1)];
        for (i, l) in lambda.values().iter().enumerate() {
            for e in 1..=d {
                powers[i * (d + 1) + e] = powers[i * (d + 1) + e - 1] * l;
            }
        }
        let mut acc = Vec3::zeros();
        for ((s, p), c) in self.index.iter().zip(&self.points).zip(self.coeffs.iter()) {
            let w = s
                .entries()
                .enumerate()
                .fold(*c, |w, (i, e)| w * powers[i * (d + 1) + e]);
            acc += p * w;
        }
        Ok(acc)
    }

    pub fn eval_at_domain_point(&self, x: Vec2, scheme: CoordScheme) -> Result<Vec3> {
        let x = self.domain.snap(x);
        let lambda = self.domain.barycentric(x, scheme)?;
        self.eval(&lambda)
    }

    /// Control polygon of side `i`: the points at `s_{i,0} … s_{i,D}`.
    pub fn boundary_curve(&self, i: usize) -> Result<BezierCurve> {
        let (n, d) = (self.n(), self.depth());
        let ctrl = (0..=d)
            .map(|j| {
                let s = boundary_label(i, j, n, d)?;
                Ok(self.points[self.index.ordinal(&s).expect("boundary label in net")])
            })
            .collect::<Result<Vec<_>>>()?;
        BezierCurve::new(ctrl)
    }

    /// Unit normal from central differences along the two domain axes.
    pub fn sampled_normal(&self, x: Vec2, h: f64, scheme: CoordScheme) -> Result<Vec3> {
        let ex = Vec2::new(h, 0.0);
        let ey = Vec2::new(0.0, h);
        let du = self.eval_at_domain_point(x + ex, scheme)? - self.eval_at_domain_point(x - ex, scheme)?;
        let dv = self.eval_at_domain_point(x + ey, scheme)? - self.eval_at_domain_point(x - ey, scheme)?;
        let nrm = du.cross(&dv);
        let len = nrm.norm();
        if !(len > 1e-12 * du.norm() * dv.norm()) || !len.is_finite() {
            return Err(Error::DegenerateNormal { x: x.x, y: x.y });
        }
        Ok(nrm / len)
    }
}
