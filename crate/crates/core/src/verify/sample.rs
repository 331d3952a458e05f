//! Deterministic low-discrepancy sampling of the regions of `R⁵`.
//!
//! Points come from a five-dimensional Halton sequence with a
//! Cranley–Patterson rotation drawn from a seeded ChaCha stream, mapped to a
//! box and filtered by rejection.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::Point;
use crate::jets::DIM;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SampleRegion {
    /// `B_a`: `|x₀| < r` and `r_o < 1/a`.
    Ba,
    /// `L∖L_o`: `r < |x₀|`.
    LInterior,
    /// `B_a^>`: `B_a ∪ L` without the axis.
    BaTilde,
}

/// Excluded bands, all measured as distances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Exclusions {
    /// Distance to `L_o`, `|r − |x₀|| / √2`.
    pub cone: f64,
    /// Distance to the axis `r = 0`.
    pub axis: f64,
    /// Margin `1/a − r_o` to the outer boundary of `B_a`.
    pub outer: f64,
}

impl Exclusions {
    pub fn uniform(width: f64) -> Self {
        Self { cone: width, axis: width, outer: width }
    }
}

const BASES: [u64; DIM] = [2, 3, 5, 7, 11];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while i > 0 {
        out += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    out
}

/// Whether `p` lies in `region` after the exclusions.
pub fn accepts(region: SampleRegion, p: &Point, a: f64, ex: &Exclusions) -> bool {
    let r = p.r();
    let ax0 = p.x0().abs();
    if r < ex.axis || (r - ax0).abs() / std::f64::consts::SQRT_2 < ex.cone {
        return false;
    }
    let in_ba = r > ax0 && 1.0 / a - p.ro() >= ex.outer;
    let in_l = r < ax0;
    match region {
        SampleRegion::Ba => in_ba,
        SampleRegion::LInterior => in_l,
        SampleRegion::BaTilde => in_ba || in_l,
    }
}

/// `n` points of `region`, identical for identical inputs.
pub fn sample(region: SampleRegion, a: f64, n: usize, seed: u64, ex: &Exclusions) -> Result<Vec<Point>> {
    sample_within(region, a, n, seed, ex, f64::INFINITY)
}

/// As `sample`, restricted to the box `|xᵢ| ≤ max_norm` and to `r ≤ max_norm`.
pub fn sample_within(
    region: SampleRegion,
    a: f64,
    n: usize,
    seed: u64,
    ex: &Exclusions,
    max_norm: f64,
) -> Result<Vec<Point>> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Config(format!("a must be positive, got {a}")));
    }
    let half = (1.2 / a).min(max_norm);
    if half.is_nan() || half <= 0.0 {
        return Err(Error::EmptyRegion(format!("empty box for max_norm = {max_norm}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: [f64; DIM] = std::array::from_fn(|_| rng.random::<f64>());
    let budget = 4000 * n as u64 + 20_000;
    let mut out = Vec::with_capacity(n);
    let mut i = 1u64;
    while out.len() < n {
        if i > budget {
            return Err(Error::EmptyRegion(format!(
                "{region:?} with a = {a}: only {} of {n} points after {budget} candidates",
                out.len()
            )));
        }
        let x: [f64; DIM] = std::array::from_fn(|k| {
            let u = (radical_inverse(i, BASES[k]) + shift[k]).fract();
            (2.0 * u - 1.0) * half
        });
        let p = Point::new(x);
        if p.r() <= max_norm && accepts(region, &p, a, ex) {
            out.push(p);
        }
        i += 1;
    }
    Ok(out)
}

/// Stable 64-bit FNV-1a hash, used to derive per-check seeds.
pub fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Seed for one check, independent of which other checks run.
pub fn derive_seed(seed: u64, tag: &str) -> u64 {
    seed ^ fnv1a(tag)
}
