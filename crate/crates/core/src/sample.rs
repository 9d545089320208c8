//! Seeded generators of twist-compatible ribbons for tests and demos.
//!
//! The ribbon is laid out in the plane around a regular n-gon so that the
//! shared corner points coincide, then every point is pushed through the same
//! smooth map `(x, y) ↦ (warp(x, y), height(x, y))`. Because the map is applied
//! pointwise, shared points stay shared.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bezier::{require_sabin, Ribbon, RibbonSide, DEFAULT_RIBBON_TOL};
use crate::domain::DomainPolygon;
use crate::{Error, Result, Vec2, Vec3};

/// Planar control rows of a Sabin net over the regular n-gon.
pub fn sabin_layout(n: usize, d: usize) -> Result<Vec<(Vec<Vec2>, Vec<Vec2>)>> {
    if d < 2 {
        return Err(Error::UnsupportedSize(format!(
            "twist-compatible ribbons need degree >= 2, got {d}"
        )));
    }
    let poly = DomainPolygon::new(n)?;
    let v = |k: isize| poly.vertex(k.rem_euclid(n as isize) as usize);
    let df = d as f64;
    Ok((0..n as isize)
        .map(|i| {
            let (a, b) = (v(i), v(i + 1));
            let outer: Vec<Vec2> = (0..=d).map(|j| a + (b - a) * (j as f64 / df)).collect();
            let inner = if d == 2 {
                vec![outer[0] + (v(i - 1) - a) * 0.5, Vec2::zeros(), outer[2] + (v(i + 2) - b) * 0.5]
            } else {
                let w0 = (v(i - 1) - a) / df;
                let wd = (v(i + 2) - b) / df;
                (0..=d)
                    .map(|j| {
                        let u = (j.clamp(1, d - 1) - 1) as f64 / (d - 2) as f64;
                        outer[j] + w0 * (1.0 - u) + wd * u
                    })
                    .collect()
            };
            (outer, inner)
        })
        .collect())
}

fn lift(layout: Vec<(Vec<Vec2>, Vec<Vec2>)>, d: usize, f: impl Fn(Vec2) -> Vec3) -> Result<Ribbon> {
    let sides = layout
        .into_iter()
        .map(|(outer, inner)| RibbonSide {
            outer: outer.into_iter().map(&f).collect(),
            inner: inner.into_iter().map(&f).collect(),
        })
        .collect();
    let mut r = Ribbon::new(d, sides)?;
    require_sabin(&mut r, DEFAULT_RIBBON_TOL)?;
    Ok(r)
}

/// Flat Sabin net at height `z`.
pub fn planar_ribbon(n: usize, d: usize, z: f64) -> Result<Ribbon> {
    lift(sabin_layout(n, d)?, d, |p| Vec3::new(p.x, p.y, z))
}

/// Smooth random map used to lift layouts.
#[derive(Clone, Debug)]
pub struct HeightField {
    poly: Vec<(i32, i32, f64)>,
    wave: [f64; 4],
    warp: [f64; 6],
}

impl HeightField {
    pub fn random(rng: &mut impl Rng) -> Self {
        let mut poly = Vec::new();
        for total in 1..=3 {
            for p in 0..=total {
                let amp = if total == 1 { 0.2 } else { 0.15 };
                poly.push((p, total - p, rng.random_range(-amp..amp)));
            }
        }
        let wave = [
            rng.random_range(0.02..0.05),
            rng.random_range(1.0..2.5),
            rng.random_range(1.0..2.5),
            rng.random_range(0.0..std::f64::consts::TAU),
        ];
        let warp = [
            rng.random_range(-0.06..0.06),
            rng.random_range(0.5..2.0),
            rng.random_range(0.0..std::f64::consts::TAU),
            rng.random_range(-0.06..0.06),
            rng.random_range(0.5..2.0),
            rng.random_range(0.0..std::f64::consts::TAU),
        ];
        HeightField { poly, wave, warp }
    }

    pub fn apply(&self, p: Vec2) -> Vec3 {
        let (x, y) = (p.x, p.y);
        let mut z: f64 = self.poly.iter().map(|&(a, b, c)| c * x.powi(a) * y.powi(b)).sum();
        let [amp, kx, ky, phase] = self.wave;
        z += amp * (kx * x + phase).sin() * (ky * y).cos();
        let w = &self.warp;
        Vec3::new(
            x + w[0] * (w[1] * y + w[2]).sin(),
            y + w[3] * (w[4] * x + w[5]).sin(),
            z,
        )
    }
}

/// Seeded random Sabin net: the planar layout lifted by a random smooth
/// height field with a mild in-plane warp.
pub fn generate_ribbon(n: usize, d: usize, seed: u64) -> Result<Ribbon> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = HeightField::random(&mut rng);
    lift(sabin_layout(n, d)?, d, |p| field.apply(p))
}
