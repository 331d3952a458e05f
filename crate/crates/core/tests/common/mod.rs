//! Point generators shared by the property tests.
#![allow(dead_code)]

use proptest::prelude::*;

use twistor_core::geometry::Point;
use twistor_core::jets::DIM;

/// Unit vector on S³ from a box sample, kept away from the degenerate origin.
pub fn direction() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(-1.0..1.0f64)
        .prop_filter("nonzero direction", |v| v.iter().map(|c| c * c).sum::<f64>() > 0.05)
        .prop_map(|v| {
            let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
            v.map(|c| c / n)
        })
}

pub fn point_from(x0: f64, r: f64, u: [f64; 4]) -> Point {
    Point::new([x0, r * u[0], r * u[1], r * u[2], r * u[3]])
}

/// Points of `B_a` with `r_o` in `[margin, 1/a − margin]` and `|x₀|/r ≤ 0.8`.
pub fn ba_point(a: f64, margin: f64) -> impl Strategy<Value = Point> {
    (margin..(1.0 / a - margin), -0.8..0.8f64, direction()).prop_map(|(ro, t, u)| {
        let r = ro / (1.0 - t * t);
        point_from(t * r, r, u)
    })
}

/// Points of `L∖L_o` with `|x₀| − r ≥ gap` and `r ≥ 0.01`.
pub fn l_point(gap: f64) -> impl Strategy<Value = Point> {
    (0.01..1.5f64, gap..1.5f64, prop::bool::ANY, direction())
        .prop_map(|(r, d, up, u)| point_from(if up { r + d } else { -(r + d) }, r, u))
}

/// Either region, off the cone and the axis.
pub fn ba_tilde_point(a: f64) -> impl Strategy<Value = Point> {
    prop_oneof![ba_point(a, 0.02 / a), l_point(0.02)]
}

pub fn any_point() -> impl Strategy<Value = [f64; DIM]> {
    prop::array::uniform5(-1.0..1.0f64)
}

/// `‖A − B‖ / (1 + ‖A‖ + ‖B‖)` over flat slices, max norm.
pub fn rel(a: &[f64], b: &[f64]) -> f64 {
    let m = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    m(&d) / (1.0 + m(a) + m(b))
}

pub fn flat<const N: usize>(m: &[[f64; N]; N], n: usize) -> Vec<f64> {
    (0..n).flat_map(|i| (0..n).map(move |j| m[i][j])).collect()
}
