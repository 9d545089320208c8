//! Regular n-gon parameter domain and generalized barycentric coordinates.
//!
//! Vertex `k` (zero-based) sits on the unit circle at angle `2π(k+1)/n`, so the
//! last vertex is `(1, 0)`. Edge `i` runs from vertex `i` to vertex `i + 1`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Vec2};

/// Absolute tolerance of the inside/outside and on-boundary tests. The domain
/// is inscribed in the unit circle, so this is also relative to its scale.
pub const DOMAIN_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoordScheme {
    #[default]
    Wachspress,
    MeanValue,
}

impl fmt::Display for CoordScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoordScheme::Wachspress => "wachspress",
            CoordScheme::MeanValue => "meanvalue",
        })
    }
}

impl FromStr for CoordScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "wachspress" => Ok(CoordScheme::Wachspress),
            "meanvalue" | "mean-value" | "mvc" => Ok(CoordScheme::MeanValue),
            other => Err(Error::Parse(format!("unknown coordinate scheme '{other}'"))),
        }
    }
}

/// Generalized barycentric coordinates over an n-gon.
#[derive(Clone, Debug, PartialEq)]
pub struct Barycentric(pub Vec<f64>);

impl Barycentric {
    /// Kronecker coordinates of vertex `k`.
    pub fn vertex(n: usize, k: usize) -> Self {
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        Barycentric(v)
    }

    /// Accepts explicit coordinates after checking sign and partition of unity.
    pub fn from_values(values: Vec<f64>, tol: f64) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite() || *v < -tol) {
            return Err(Error::InvalidBarycentric(format!(
                "coordinates must be finite and non-negative: {values:?}"
            )));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::InvalidBarycentric(format!(
                "coordinates sum to {sum}, expected 1"
            )));
        }
        Ok(Barycentric(values))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DomainPolygon {
    n: usize,
    vertices: Vec<Vec2>,
}

impl DomainPolygon {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidPolygon(n));
        }
        let vertices = (1..=n)
            .map(|k| {
                let a = 2.0 * PI * k as f64 / n as f64;
                Vec2::new(a.cos(), a.sin())
            })
            .collect();
        Ok(DomainPolygon { n, vertices })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    /// Vertex with cyclic indexing.
    pub fn vertex(&self, k: usize) -> Vec2 {
        self.vertices[k % self.n]
    }

    /// Unit normal of edge `i` pointing into the polygon.
    pub fn inward_normal(&self, i: usize) -> Vec2 {
        let e = self.vertex(i + 1) - self.vertex(i);
        Vec2::new(-e.y, e.x).normalize()
    }

    /// Point `(1 - t) v_i + t v_{i+1}` on edge `i`.
    pub fn edge_point(&self, i: usize, t: f64) -> Result<Vec2> {
        if i >= self.n {
            return Err(Error::IndexRange {
                what: "side",
                value: i,
                min: 0,
                max: self.n - 1,
            });
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::ParameterRange { name: "t", value: t });
        }
        Ok(self.vertex(i) * (1.0 - t) + self.vertex(i + 1) * t)
    }

    /// Signed areas of the triangles `(x, v_j, v_{j+1})`; all non-negative
    /// inside the polygon.
    fn edge_areas(&self, x: Vec2) -> Vec<f64> {
        (0..self.n)
            .map(|j| signed_area(x, self.vertex(j), self.vertex(j + 1)))
            .collect()
    }

    /// Distance from `x` to the polygon boundary, negative outside.
    pub fn boundary_distance(&self, x: Vec2) -> f64 {
        (0..self.n)
            .map(|j| (x - self.vertex(j)).dot(&self.inward_normal(j)))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, x: Vec2) -> bool {
        self.boundary_distance(x) >= -DOMAIN_EPS
    }

    pub fn on_boundary(&self, x: Vec2) -> bool {
        self.boundary_distance(x).abs() <= DOMAIN_EPS
    }

    /// Projects points within `DOMAIN_EPS` of an edge onto that edge.
    pub fn snap(&self, x: Vec2) -> Vec2 {
        let mut y = x;
        for j in 0..self.n {
            let nrm = self.inward_normal(j);
            let dist = (y - self.vertex(j)).dot(&nrm);
            if dist.abs() <= DOMAIN_EPS {
                y -= nrm * dist;
            }
        }
        y
    }

    pub fn barycentric(&self, x: Vec2, scheme: CoordScheme) -> Result<Barycentric> {
        if !x.x.is_finite() || !x.y.is_finite() || !self.contains(x) {
            return Err(Error::OutOfDomain { x: x.x, y: x.y });
        }
        let mut w = match scheme {
            CoordScheme::Wachspress => self.wachspress_weights(x),
            CoordScheme::MeanValue => self.mean_value_weights(x),
        };
        let sum: f64 = w.iter().sum();
        if !(sum > 0.0) || !sum.is_finite() {
            return Err(Error::Numerical(format!(
                "barycentric weights at ({}, {}) do not normalize",
                x.x, x.y
            )));
        }
        for v in &mut w {
            *v /= sum;
        }
        Ok(Barycentric(w))
    }

    /// Wachspress weights with the denominator cleared: corner-triangle area
    /// times the product of all edge areas not incident to the vertex.
    fn wachspress_weights(&self, x: Vec2) -> Vec<f64> {
        let n = self.n;
        let areas: Vec<f64> = self.edge_areas(x).into_iter().map(|a| a.max(0.0)).collect();
        (0..n)
            .map(|i| {
                let prev = (i + n - 1) % n;
                let corner = signed_area(self.vertex(prev), self.vertex(i), self.vertex(i + 1));
                (0..n)
                    .filter(|&j| j != prev && j != i)
                    .fold(corner, |acc, j| acc * areas[j])
            })
            .collect()
    }

    fn mean_value_weights(&self, x: Vec2) -> Vec<f64> {
        let n = self.n;
        for k in 0..n {
            if (x - self.vertex(k)).norm() <= DOMAIN_EPS {
                return Barycentric::vertex(n, k).0;
            }
        }
        for j in 0..n {
            let (a, b) = (self.vertex(j), self.vertex(j + 1));
            let e = b - a;
            let dist = (x - a).dot(&self.inward_normal(j));
            if dist.abs() <= DOMAIN_EPS {
                let t = ((x - a).dot(&e) / e.norm_squared()).clamp(0.0, 1.0);
                let mut w = vec![0.0; n];
                w[j] = 1.0 - t;
                w[(j + 1) % n] = t;
                return w;
            }
        }
        let d: Vec<Vec2> = self.vertices.iter().map(|v| v - x).collect();
        let r: Vec<f64> = d.iter().map(|v| v.norm()).collect();
        // tan(α_j / 2) for the angle at x subtended by edge j
        let half_tan: Vec<f64> = (0..n)
            .map(|j| {
                let k = (j + 1) % n;
                let cross = d[j].x * d[k].y - d[j].y * d[k].x;
                cross / (r[j] * r[k] + d[j].dot(&d[k]))
            })
            .collect();
        (0..n)
            .map(|i| (half_tan[(i + n - 1) % n] + half_tan[i]) / r[i])
            .collect()
    }
}

/// Convenience wrapper around [`DomainPolygon::new`].
pub fn polygon_vertices(n: usize) -> Result<DomainPolygon> {
    DomainPolygon::new(n)
}

pub(crate) fn signed_area(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const SCHEMES: [CoordScheme; 2] = [CoordScheme::Wachspress, CoordScheme::MeanValue];

    fn random_interior(poly: &DomainPolygon, rng: &mut ChaCha8Rng) -> Vec2 {
        loop {
            let x = Vec2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            if poly.boundary_distance(x) > 1e-9 {
                return x;
            }
        }
    }

    #[test]
    fn square_vertices() {
        let p = DomainPolygon::new(4).unwrap();
        let expected = [(0.0, 1.0), (-1.0, 0.0), (0.0, -1.0), (1.0, 0.0)];
        for (v, (x, y)) in p.vertices().iter().zip(expected) {
            assert_abs_diff_eq!(v.x, x, epsilon = 1e-15);
            assert_abs_diff_eq!(v.y, y, epsilon = 1e-15);
        }
    }

    #[test]
    fn triangle_vertices() {
        let p = DomainPolygon::new(3).unwrap();
        assert_abs_diff_eq!(p.vertex(2).x, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.vertex(2).y, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.vertex(0).x, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(p.vertex(0).y, 3f64.sqrt() / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn degenerate_polygon_rejected() {
        assert!(matches!(DomainPolygon::new(2), Err(Error::InvalidPolygon(2))));
    }

    #[test]
    fn edge_points() {
        let p = DomainPolygon::new(4).unwrap();
        let a = p.edge_point(0, 0.0).unwrap();
        assert_abs_diff_eq!((a - Vec2::new(0.0, 1.0)).norm(), 0.0, epsilon = 1e-15);
        let b = p.edge_point(0, 1.0).unwrap();
        assert_abs_diff_eq!((b - Vec2::new(-1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
        let c = p.edge_point(3, 0.5).unwrap();
        assert_abs_diff_eq!((c - Vec2::new(0.5, 0.5)).norm(), 0.0, epsilon = 1e-15);
        assert!(matches!(p.edge_point(0, 1.5), Err(Error::ParameterRange { .. })));
        assert!(p.edge_point(4, 0.5).is_err());
    }

    #[test]
    fn centre_is_uniform() {
        for n in 3..=8 {
            let p = DomainPolygon::new(n).unwrap();
            for scheme in SCHEMES {
                let b = p.barycentric(Vec2::zeros(), scheme).unwrap();
                for v in b.values() {
                    assert_abs_diff_eq!(*v, 1.0 / n as f64, epsilon = 1e-14);
                }
            }
        }
    }

    #[test]
    fn lagrange_and_edge_midpoint() {
        for n in 3..=8 {
            let p = DomainPolygon::new(n).unwrap();
            for scheme in SCHEMES {
                let b = p.barycentric(p.vertex(1), scheme).unwrap();
                for (k, v) in b.values().iter().enumerate() {
                    assert_abs_diff_eq!(*v, if k == 1 { 1.0 } else { 0.0 }, epsilon = 1e-12);
                }
                let mid = (p.vertex(0) + p.vertex(1)) * 0.5;
                let b = p.barycentric(mid, scheme).unwrap();
                for (k, v) in b.values().iter().enumerate() {
                    let want = if k < 2 { 0.5 } else { 0.0 };
                    assert_abs_diff_eq!(*v, want, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn edge_linearity() {
        let p = DomainPolygon::new(6).unwrap();
        for scheme in SCHEMES {
            for i in 0..6 {
                for t in [0.1, 0.37, 0.8] {
                    let x = p.edge_point(i, t).unwrap();
                    let b = p.barycentric(x, scheme).unwrap();
                    for k in 0..6 {
                        let want = if k == i {
                            1.0 - t
                        } else if k == (i + 1) % 6 {
                            t
                        } else {
                            0.0
                        };
                        assert_abs_diff_eq!(b.values()[k], want, epsilon = 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn random_interior_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [3, 4, 5, 6, 8] {
            let p = DomainPolygon::new(n).unwrap();
            for _ in 0..1000 {
                let x = random_interior(&p, &mut rng);
                for scheme in SCHEMES {
                    let b = p.barycentric(x, scheme).unwrap();
                    let sum: f64 = b.values().iter().sum();
                    assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-12);
                    assert!(b.values().iter().all(|v| *v >= 0.0));
                    let rec = b
                        .values()
                        .iter()
                        .zip(p.vertices())
                        .fold(Vec2::zeros(), |acc, (l, v)| acc + v * *l);
                    assert_abs_diff_eq!((rec - x).norm(), 0.0, epsilon = 1e-10);
                }
            }
        }
    }

    #[test]
    fn schemes_agree_on_triangles() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = DomainPolygon::new(3).unwrap();
        for _ in 0..200 {
            let x = random_interior(&p, &mut rng);
            let a = p.barycentric(x, CoordScheme::Wachspress).unwrap();
            let b = p.barycentric(x, CoordScheme::MeanValue).unwrap();
            for (u, v) in a.values().iter().zip(b.values()) {
                assert_abs_diff_eq!(*u, *v, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn exterior_point_rejected() {
        let p = DomainPolygon::new(5).unwrap();
        let err = p.barycentric(Vec2::new(2.0, 0.0), CoordScheme::Wachspress);
        assert!(matches!(err, Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn scheme_parses() {
        assert_eq!("meanvalue".parse::<CoordScheme>().unwrap(), CoordScheme::MeanValue);
        assert_eq!("Wachspress".parse::<CoordScheme>().unwrap(), CoordScheme::Wachspress);
        assert!("bilinear".parse::<CoordScheme>().is_err());
    }
}
