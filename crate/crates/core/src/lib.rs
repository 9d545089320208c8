//! Multi-sided hole filling with S-patches.
//!
//! A loop of twist-compatible Bézier ribbons (a Sabin net) is turned into an
//! S-patch control net whose boundary panels reproduce the ribbons'
//! cross-derivatives, so the filling surface joins its neighbours with
//! tangent-plane continuity. The remaining control points are placed by
//! solving harmonic or biharmonic mask equations over the control-net graph.
//!
//! Indexing is zero-based throughout: side `i` runs from domain vertex `i` to
//! vertex `i + 1` (cyclic), and label entry `i` is the exponent of the `i`-th
//! barycentric coordinate.

// Negated float comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bezier;
pub mod domain;
mod error;
pub mod fill;
pub mod interior;
pub mod labels;
pub mod meshio;
pub mod sample;
pub mod spatch;
pub mod verify;

pub use error::{Error, Result};

pub type Vec3 = nalgebra::Vector3<f64>;
pub type Vec2 = nalgebra::Vector2<f64>;

/// Diagonal of the axis-aligned bounding box of `points`, or 1 when the box
/// is degenerate. Used as the reference length for relative tolerances.
pub fn bbox_diagonal<'a>(points: impl IntoIterator<Item = &'a Vec3>) -> f64 {
    let mut lo = Vec3::repeat(f64::INFINITY);
    let mut hi = Vec3::repeat(f64::NEG_INFINITY);
    let mut any = false;
    for p in points {
        lo = lo.inf(p);
        hi = hi.sup(p);
        any = true;
    }
    if !any {
        return 1.0;
    }
    let diag = (hi - lo).norm();
    if diag > 0.0 && diag.is_finite() {
        diag
    } else {
        1.0
    }
}

/// Number of worker threads requested through `SPATCH_THREADS` (0 = auto).
pub fn configured_threads() -> usize {
    std::env::var("SPATCH_THREADS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(0)
}

/// Runs `f` inside a thread pool honouring `SPATCH_THREADS`.
#[cfg(feature = "parallel")]
pub fn with_thread_cap<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let threads = configured_threads();
    if threads == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_thread_cap<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    f()
}

/// Ordered map over a slice, parallel when the `parallel` feature is on.
/// Output order always matches input order.
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}
