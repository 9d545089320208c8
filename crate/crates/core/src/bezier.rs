//! Bézier curves, ribbons and the Bézier-triangle evaluator.

use std::fmt;

use crate::labels::{Label, LabelIndex};
use crate::{bbox_diagonal, Error, Result, Vec3};

/// Default twist-compatibility tolerance, relative to the ribbon's bounding
/// box diagonal.
pub const DEFAULT_RIBBON_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct BezierCurve {
    ctrl: Vec<Vec3>,
}

impl BezierCurve {
    pub fn new(ctrl: Vec<Vec3>) -> Result<Self> {
        if ctrl.len() < 2 {
            return Err(Error::Structural(format!(
                "a Bézier curve needs at least 2 control points, got {}",
                ctrl.len()
            )));
        }
        Ok(BezierCurve { ctrl })
    }

    pub fn degree(&self) -> usize {
        self.ctrl.len() - 1
    }

    pub fn control_points(&self) -> &[Vec3] {
        &self.ctrl
    }

    pub fn into_control_points(self) -> Vec<Vec3> {
        self.ctrl
    }

    pub fn eval(&self, t: f64) -> Result<Vec3> {
        check_unit(t)?;
        Ok(de_casteljau(&self.ctrl, t))
    }

    /// First derivative with respect to `t`.
    pub fn derivative(&self, t: f64) -> Result<Vec3> {
        check_unit(t)?;
        let d = self.degree() as f64;
        let diffs: Vec<Vec3> = self.ctrl.windows(2).map(|w| (w[1] - w[0]) * d).collect();
        Ok(de_casteljau(&diffs, t))
    }

    /// Raises the degree `times` times without changing the curve.
    pub fn degree_elevate(&self, times: usize) -> BezierCurve {
        let mut ctrl = self.ctrl.clone();
        for _ in 0..times {
            let m = ctrl.len(); // new degree
            let mut next = Vec::with_capacity(m + 1);
            next.push(ctrl[0]);
            for k in 1..m {
                let a = k as f64 / m as f64;
                next.push(ctrl[k - 1] * a + ctrl[k] * (1.0 - a));
            }
            next.push(ctrl[m - 1]);
            ctrl = next;
        }
        BezierCurve { ctrl }
    }
}

fn check_unit(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::ParameterRange { name: "t", value: t })
    }
}

pub(crate) fn de_casteljau(ctrl: &[Vec3], t: f64) -> Vec3 {
    let mut pts = ctrl.to_vec();
    let s = 1.0 - t;
    for r in (1..pts.len()).rev() {
        for k in 0..r {
            pts[k] = pts[k] * s + pts[k + 1] * t;
        }
    }
    pts[0]
}

/// Bernstein polynomials `B_j^d(t)` for `j = 0..=d`.
pub(crate) fn bernstein_all(d: usize, t: f64) -> Vec<f64> {
    let mut b = vec![0.0; d + 1];
    b[0] = 1.0;
    let s = 1.0 - t;
    for r in 1..=d {
        let mut carry = 0.0;
        for v in b.iter_mut().take(r + 1) {
            let old = *v;
            *v = old * s + carry;
            carry = old * t;
        }
    }
    b
}

/// One side of a Sabin net: the boundary row and the cross-derivative row.
#[derive(Clone, Debug, PartialEq)]
pub struct RibbonSide {
    pub outer: Vec<Vec3>,
    pub inner: Vec<Vec3>,
}

/// A loop of Bézier ribbons of common degree `d` around an n-sided hole.
///
/// Side `i` runs from corner `i` to corner `i + 1`; its inner row lies inside
/// the hole.
#[derive(Clone, Debug, PartialEq)]
pub struct Ribbon {
    d: usize,
    sides: Vec<RibbonSide>,
}

/// Corner identities of a twist-compatible loop, for side `i` and its
/// predecessor `i - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CornerIdentity {
    /// `C_{0,0}^i = C_{d,0}^{i-1}`
    LoopClosure,
    /// `C_{1,1}^i = C_{d-1,1}^{i-1}`
    TwistInner,
    /// `C_{1,0}^i = C_{d,1}^{i-1}`
    TwistOuterInner,
    /// `C_{0,1}^i = C_{d-1,0}^{i-1}`
    TwistInnerOuter,
}

impl CornerIdentity {
    pub const ALL: [CornerIdentity; 4] = [
        CornerIdentity::LoopClosure,
        CornerIdentity::TwistInner,
        CornerIdentity::TwistOuterInner,
        CornerIdentity::TwistInnerOuter,
    ];

    /// `((j, row) on side i, (j, row) on side i - 1)`.
    fn positions(self, d: usize) -> ((usize, usize), (usize, usize)) {
        match self {
            CornerIdentity::LoopClosure => ((0, 0), (d, 0)),
            CornerIdentity::TwistInner => ((1, 1), (d - 1, 1)),
            CornerIdentity::TwistOuterInner => ((1, 0), (d, 1)),
            CornerIdentity::TwistInnerOuter => ((0, 1), (d - 1, 0)),
        }
    }
}

impl fmt::Display for CornerIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CornerIdentity::LoopClosure => "loop closure C[0,0]^i = C[d,0]^(i-1)",
            CornerIdentity::TwistInner => "twist C[1,1]^i = C[d-1,1]^(i-1)",
            CornerIdentity::TwistOuterInner => "twist C[1,0]^i = C[d,1]^(i-1)",
            CornerIdentity::TwistInnerOuter => "twist C[0,1]^i = C[d-1,0]^(i-1)",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityDeviation {
    pub identity: CornerIdentity,
    /// Worst relative deviation over all corners.
    pub worst: f64,
    /// Side `i` at which the worst deviation occurs (compared with `i - 1`).
    pub side: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RibbonReport {
    pub deviations: Vec<IdentityDeviation>,
    pub tolerance: f64,
    pub pass: bool,
}

impl RibbonReport {
    pub fn violations(&self) -> impl Iterator<Item = &IdentityDeviation> {
        self.deviations.iter().filter(move |d| d.worst > self.tolerance)
    }

    pub fn describe_violations(&self, n: usize) -> String {
        self.violations()
            .map(|v| {
                format!(
                    "{} violated between sides {} and {} (relative deviation {:.3e})",
                    v.identity,
                    (v.side + n - 1) % n,
                    v.side,
                    v.worst
                )
            })
            .collect::<Vec<_>>()
            .join("; ")
    }
}

impl Ribbon {
    pub fn new(d: usize, sides: Vec<RibbonSide>) -> Result<Self> {
        if sides.len() < 3 {
            return Err(Error::MalformedRibbon(format!(
                "need at least 3 sides, got {}",
                sides.len()
            )));
        }
        if d == 0 {
            return Err(Error::MalformedRibbon("degree must be at least 1".into()));
        }
        for (i, s) in sides.iter().enumerate() {
            if s.outer.len() != d + 1 || s.inner.len() != d + 1 {
                return Err(Error::MalformedRibbon(format!(
                    "side {i}: rows have {} and {} points, expected {}",
                    s.outer.len(),
                    s.inner.len(),
                    d + 1
                )));
            }
            if s.outer.iter().chain(&s.inner).any(|p| !p.iter().all(|c| c.is_finite())) {
                return Err(Error::MalformedRibbon(format!("side {i}: non-finite coordinate")));
            }
        }
        Ok(Ribbon { d, sides })
    }

    pub fn n(&self) -> usize {
        self.sides.len()
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn sides(&self) -> &[RibbonSide] {
        &self.sides
    }

    /// `C_{j,row}^i` with cyclic side index.
    pub fn point(&self, i: usize, j: usize, row: usize) -> Vec3 {
        let s = &self.sides[i % self.n()];
        if row == 0 {
            s.outer[j]
        } else {
            s.inner[j]
        }
    }

    fn point_mut(&mut self, i: usize, j: usize, row: usize) -> &mut Vec3 {
        let n = self.n();
        let s = &mut self.sides[i % n];
        if row == 0 {
            &mut s.outer[j]
        } else {
            &mut s.inner[j]
        }
    }

    pub fn all_points(&self) -> impl Iterator<Item = &Vec3> {
        self.sides.iter().flat_map(|s| s.outer.iter().chain(&s.inner))
    }

    pub fn bbox_diagonal(&self) -> f64 {
        bbox_diagonal(self.all_points())
    }

    /// Number of bitwise-distinct control points.
    pub fn distinct_points(&self) -> usize {
        let mut keys: Vec<[u64; 3]> = self
            .all_points()
            .map(|p| [p.x.to_bits(), p.y.to_bits(), p.z.to_bits()])
            .collect();
        keys.sort_unstable();
        keys.dedup();
        keys.len()
    }

    pub fn outer_curve(&self, i: usize) -> BezierCurve {
        BezierCurve {
            ctrl: self.sides[i % self.n()].outer.clone(),
        }
    }

    pub fn map_points(&self, f: impl Fn(&Vec3) -> Vec3) -> Ribbon {
        Ribbon {
            d: self.d,
            sides: self
                .sides
                .iter()
                .map(|s| RibbonSide {
                    outer: s.outer.iter().map(&f).collect(),
                    inner: s.inner.iter().map(&f).collect(),
                })
                .collect(),
        }
    }

    /// Measures the corner identities without modifying the ribbon.
    pub fn report(&self, tol: f64) -> RibbonReport {
        let n = self.n();
        let scale = self.bbox_diagonal();
        let deviations: Vec<IdentityDeviation> = CornerIdentity::ALL
            .iter()
            .map(|&identity| {
                let ((j0, r0), (j1, r1)) = identity.positions(self.d);
                let (worst, side) = (0..n)
                    .map(|i| {
                        let a = self.point(i, j0, r0);
                        let b = self.point(i + n - 1, j1, r1);
                        ((a - b).norm() / scale, i)
                    })
                    .fold((0.0, 0), |best, cur| if cur.0 > best.0 { cur } else { best });
                IdentityDeviation {
                    identity,
                    worst,
                    side,
                }
            })
            .collect();
        let pass = deviations.iter().all(|d| d.worst <= tol);
        RibbonReport {
            deviations,
            tolerance: tol,
            pass,
        }
    }

    /// Copies each shared point from its lexicographically smaller
    /// `(side, j, row)` position onto the other, making the identities exact.
    fn snap(&mut self) {
        let n = self.n();
        for i in 0..n {
            let prev = (i + n - 1) % n;
            for identity in CornerIdentity::ALL {
                let ((j0, r0), (j1, r1)) = identity.positions(self.d);
                let here = (i, j0, r0);
                let there = (prev, j1, r1);
                let (keep, drop) = if here < there { (here, there) } else { (there, here) };
                let v = self.point(keep.0, keep.1, keep.2);
                *self.point_mut(drop.0, drop.1, drop.2) = v;
            }
        }
    }
}

/// Checks loop closure and twist compatibility. On success the shared points
/// are snapped so that downstream code sees exact equality.
pub fn validate_ribbon(r: &mut Ribbon, tol: f64) -> Result<RibbonReport> {
    let report = r.report(tol);
    if report.pass {
        r.snap();
    }
    Ok(report)
}

/// Like [`validate_ribbon`] but turns a failed report into an error.
pub fn require_sabin(r: &mut Ribbon, tol: f64) -> Result<RibbonReport> {
    let report = validate_ribbon(r, tol)?;
    if !report.pass {
        return Err(Error::NotTwistCompatible(report.describe_violations(r.n())));
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryFrame {
    pub point: Vec3,
    pub tangent: Vec3,
    /// v-derivative at v = 0 of the degree d×d tensor patch built on the two rows.
    pub cross: Vec3,
}

impl BoundaryFrame {
    pub fn normal(&self) -> Vec3 {
        self.tangent.cross(&self.cross)
    }
}

pub fn ribbon_boundary_frame(r: &Ribbon, i: usize, t: f64) -> Result<BoundaryFrame> {
    check_unit(t)?;
    if i >= r.n() {
        return Err(Error::IndexRange {
            what: "side",
            value: i,
            min: 0,
            max: r.n() - 1,
        });
    }
    let side = &r.sides[i];
    let curve = r.outer_curve(i);
    let b = bernstein_all(r.d, t);
    let cross = side
        .inner
        .iter()
        .zip(&side.outer)
        .zip(&b)
        .fold(Vec3::zeros(), |acc, ((c1, c0), w)| acc + (c1 - c0) * *w)
        * r.d as f64;
    Ok(BoundaryFrame {
        point: curve.eval(t)?,
        tangent: curve.derivative(t)?,
        cross,
    })
}

/// Control net of a Bézier triangle, indexed by `L_{3,d}`.
#[derive(Clone, Debug)]
pub struct BezierTriangleNet {
    degree: usize,
    /// `tri[i][j]` holds the point with label `(i, j, d - i - j)`.
    tri: Vec<Vec<Vec3>>,
}

impl BezierTriangleNet {
    pub fn from_fn(degree: usize, mut f: impl FnMut(&Label) -> Vec3) -> Result<Self> {
        let index = LabelIndex::new(3, degree)?;
        let mut tri: Vec<Vec<Vec3>> = (0..=degree).map(|i| vec![Vec3::zeros(); degree + 1 - i]).collect();
        for s in index.iter() {
            tri[s.get(0)][s.get(1)] = f(s);
        }
        Ok(BezierTriangleNet { degree, tri })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn point(&self, s: &Label) -> Vec3 {
        self.tri[s.get(0)][s.get(1)]
    }
}

/// Triangular de Casteljau evaluation.
pub fn bezier_triangle_eval(net: &BezierTriangleNet, bary: [f64; 3]) -> Result<Vec3> {
    let sum: f64 = bary.iter().sum();
    if bary.iter().any(|b| !b.is_finite() || *b < -1e-12) || (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidBarycentric(format!("{bary:?}")));
    }
    let [a, b, c] = bary;
    let mut tri = net.tri.clone();
    for r in (1..=net.degree).rev() {
        // level r has labels (i, j, r - i - j); reduce to level r - 1
        let mut next: Vec<Vec<Vec3>> = (0..r).map(|i| vec![Vec3::zeros(); r - i]).collect();
        for (i, row) in next.iter_mut().enumerate() {
            for (j, p) in row.iter_mut().enumerate() {
                *p = tri[i + 1][j] * a + tri[i][j + 1] * b + tri[i][j] * c;
            }
        }
        tri = next;
    }
    Ok(tri[0][0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_pt(rng: &mut ChaCha8Rng) -> Vec3 {
        Vec3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        )
    }

    fn binom(n: usize, k: usize) -> f64 {
        crate::labels::binomial(n, k) as f64
    }

    fn bernstein_sum(ctrl: &[Vec3], t: f64) -> Vec3 {
        let d = ctrl.len() - 1;
        ctrl.iter().enumerate().fold(Vec3::zeros(), |acc, (j, p)| {
            acc + p * (binom(d, j) * t.powi(j as i32) * (1.0 - t).powi((d - j) as i32))
        })
    }

    #[test]
    fn constant_and_linear_curves() {
        let p = Vec3::new(1.0, 2.0, 3.0);
        let c = BezierCurve::new(vec![p, p, p]).unwrap();
        for t in [0.0, 0.3, 1.0] {
            assert!((c.eval(t).unwrap() - p).norm() < 1e-15);
        }
        let l = BezierCurve::new(vec![Vec3::zeros(), Vec3::new(1.0, 0.0, 0.0)]).unwrap();
        assert_abs_diff_eq!((l.eval(0.25).unwrap() - Vec3::new(0.25, 0.0, 0.0)).norm(), 0.0);
        assert!(l.eval(1.5).is_err());
        assert!(BezierCurve::new(vec![p]).is_err());
    }

    #[test]
    fn casteljau_matches_bernstein() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ctrl: Vec<Vec3> = (0..4).map(|_| rand_pt(&mut rng)).collect();
        let c = BezierCurve::new(ctrl.clone()).unwrap();
        let diff = (c.eval(0.3).unwrap() - bernstein_sum(&ctrl, 0.3)).norm();
        assert!(diff < 1e-14, "{diff}");
        let b = bernstein_all(5, 0.37);
        for (j, v) in b.iter().enumerate() {
            let want = binom(5, j) * 0.37f64.powi(j as i32) * 0.63f64.powi(5 - j as i32);
            assert_abs_diff_eq!(*v, want, epsilon = 1e-15);
        }
    }

    #[test]
    fn elevation() {
        let l = BezierCurve::new(vec![Vec3::zeros(), Vec3::new(1.0, 0.0, 0.0)]).unwrap();
        let e = l.degree_elevate(1);
        assert_eq!(
            e.control_points(),
            &[Vec3::zeros(), Vec3::new(0.5, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0)]
        );
        assert_eq!(l.degree_elevate(0), l);

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let q = BezierCurve::new((0..6).map(|_| rand_pt(&mut rng)).collect()).unwrap();
        let e = q.degree_elevate(3);
        assert_eq!(e.degree(), 8);
        assert_eq!(e.control_points()[0], q.control_points()[0]);
        assert_eq!(e.control_points()[8], q.control_points()[5]);
        for k in 0..50 {
            let t = k as f64 / 49.0;
            let diff = (e.eval(t).unwrap() - q.eval(t).unwrap()).norm();
            assert!(diff < 1e-12, "t = {t}: {diff}");
        }
    }

    #[test]
    fn curve_derivative_matches_difference_quotient() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let q = BezierCurve::new((0..5).map(|_| rand_pt(&mut rng)).collect()).unwrap();
        let h = 1e-6;
        let fd = (q.eval(0.4 + h).unwrap() - q.eval(0.4 - h).unwrap()) / (2.0 * h);
        assert!((fd - q.derivative(0.4).unwrap()).norm() < 1e-8);
    }

    fn planar_square(d: usize) -> Ribbon {
        crate::sample::planar_ribbon(4, d, 0.0).unwrap()
    }

    #[test]
    fn sabin_ribbon_passes_and_perturbed_fails() {
        let mut r = planar_square(3);
        let report = validate_ribbon(&mut r, DEFAULT_RIBBON_TOL).unwrap();
        assert!(report.pass);
        assert!(report.deviations.iter().all(|d| d.worst == 0.0));

        let mut bad = planar_square(3);
        let diag = bad.bbox_diagonal();
        bad.sides[2].inner[1].z += 0.1 * diag;
        let report = validate_ribbon(&mut bad, DEFAULT_RIBBON_TOL).unwrap();
        assert!(!report.pass);
        let v: Vec<_> = report.violations().collect();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].identity, CornerIdentity::TwistInner);
        assert_eq!(v[0].side, 2);
        assert!(report.describe_violations(4).contains("sides 1 and 2"));
        assert!(require_sabin(&mut bad, DEFAULT_RIBBON_TOL).is_err());
    }

    #[test]
    fn snapping_removes_noise() {
        let mut r = planar_square(4);
        let corner0 = r.point(0, 0, 0);
        let end0 = r.point(0, 4, 0);
        r.sides[3].outer[4].x += 1e-13;
        r.sides[1].outer[0].y -= 1e-13;
        let report = validate_ribbon(&mut r, DEFAULT_RIBBON_TOL).unwrap();
        assert!(report.pass);
        assert!(r.report(0.0).pass);
        // the smaller (side, j, row) copy wins
        assert_eq!(r.point(3, 4, 0), corner0);
        assert_eq!(r.point(1, 0, 0), end0);
    }

    #[test]
    fn structural_errors() {
        let side = RibbonSide {
            outer: vec![Vec3::zeros(); 3],
            inner: vec![Vec3::zeros(); 2],
        };
        assert!(matches!(
            Ribbon::new(2, vec![side.clone(), side.clone(), side]),
            Err(Error::MalformedRibbon(_))
        ));
    }

    #[test]
    fn frame_basics() {
        let r = planar_square(3);
        for i in 0..4 {
            let f = ribbon_boundary_frame(&r, i, 0.3).unwrap();
            assert_abs_diff_eq!(f.cross.z, 0.0);
            let f0 = ribbon_boundary_frame(&r, i, 0.0).unwrap();
            let want = (r.point(i, 0, 1) - r.point(i, 0, 0)) * 3.0;
            assert_abs_diff_eq!((f0.cross - want).norm(), 0.0, epsilon = 1e-15);
        }
        assert!(ribbon_boundary_frame(&r, 0, -0.1).is_err());
    }

    /// Degree d×d tensor surface carrying only the two given rows; its first
    /// v-derivative at v = 0 depends on nothing else.
    fn two_row_surface(r: &Ribbon, i: usize, u: f64, v: f64) -> Vec3 {
        let d = r.degree();
        let w0 = (1.0 - v).powi(d as i32);
        let w1 = d as f64 * v * (1.0 - v).powi(d as i32 - 1);
        (0..=d).fold(Vec3::zeros(), |acc, j| {
            let bu = binom(d, j) * u.powi(j as i32) * (1.0 - u).powi((d - j) as i32);
            acc + (r.point(i, j, 0) * w0 + r.point(i, j, 1) * w1) * bu
        })
    }

    #[test]
    fn frame_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let sides = (0..5)
            .map(|_| RibbonSide {
                outer: (0..5).map(|_| rand_pt(&mut rng)).collect(),
                inner: (0..5).map(|_| rand_pt(&mut rng)).collect(),
            })
            .collect();
        let r = Ribbon::new(4, sides).unwrap();
        let (i, t) = (2, 0.4);
        let f = ribbon_boundary_frame(&r, i, t).unwrap();
        let mut errs = Vec::new();
        for h in [1e-4, 1e-5, 1e-6] {
            let dv = (two_row_surface(&r, i, t, h) - two_row_surface(&r, i, t, -h)) / (2.0 * h);
            let du = (two_row_surface(&r, i, t + h, 0.0) - two_row_surface(&r, i, t - h, 0.0)) / (2.0 * h);
            errs.push(((dv - f.cross).norm() / f.cross.norm(), (du - f.tangent).norm() / f.tangent.norm()));
        }
        assert!(errs[2].0 < 1e-6 && errs[2].1 < 1e-6, "{errs:?}");
        assert!(errs[1].0 < errs[0].0 && errs[1].1 < errs[0].1, "{errs:?}");
    }

    fn multinomial_sum(net: &BezierTriangleNet, bary: [f64; 3]) -> Vec3 {
        let d = net.degree();
        let fact = |k: usize| (1..=k).map(|v| v as f64).product::<f64>();
        let idx = LabelIndex::new(3, d).unwrap();
        idx.iter().fold(Vec3::zeros(), |acc, s| {
            let coeff = fact(d) / (fact(s.get(0)) * fact(s.get(1)) * fact(s.get(2)));
            let mono: f64 = (0..3).map(|k| bary[k].powi(s.get(k) as i32)).product();
            acc + net.point(s) * (coeff * mono)
        })
    }

    #[test]
    fn triangle_eval() {
        let p = Vec3::new(0.5, -1.0, 2.0);
        let flat = BezierTriangleNet::from_fn(3, |_| p).unwrap();
        assert!((bezier_triangle_eval(&flat, [0.2, 0.3, 0.5]).unwrap() - p).norm() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let net = BezierTriangleNet::from_fn(2, |_| rand_pt(&mut rng)).unwrap();
        let corner = bezier_triangle_eval(&net, [1.0, 0.0, 0.0]).unwrap();
        assert_eq!(corner, net.point(&"2,0,0".parse().unwrap()));
        let third = 1.0 / 3.0;
        let a = bezier_triangle_eval(&net, [third; 3]).unwrap();
        assert!((a - multinomial_sum(&net, [third; 3])).norm() < 1e-14);

        let net = BezierTriangleNet::from_fn(4, |_| rand_pt(&mut rng)).unwrap();
        for _ in 0..50 {
            let (u, v): (f64, f64) = (rng.random(), rng.random());
            let (u, v) = if u + v > 1.0 { (1.0 - u, 1.0 - v) } else { (u, v) };
            let b = [u, v, 1.0 - u - v];
            let diff = (bezier_triangle_eval(&net, b).unwrap() - multinomial_sum(&net, b)).norm();
            assert!(diff < 1e-13, "{diff}");
        }
        assert!(bezier_triangle_eval(&net, [0.5, 0.5, 0.5]).is_err());
    }
}
