//! Curvature identities, finite-difference Christoffel symbols, and the two
//! independent routes to connection and curvature forms.

#![allow(clippy::needless_range_loop)]

mod common;

use common::{ba_point, ba_tilde_point, direction, l_point, point_from, rel};
use nalgebra::DMatrix;
use proptest::prelude::*;

use twistor_core::clifford::FrameId;
use twistor_core::curvature::{
    cartan_curvature, christoffel_at, christoffel_with_inverse, connection_forms, curvature, curvature_values_at,
    frame_hessian, hessian_scalar, koszul_omega, structure_equation_residuals, FrameJets,
};
use twistor_core::frames::{frame_eh, frame_eval, frame_f_via_psi, in_ca};
use twistor_core::geometry::{metric_components, metric_in_psi_coords, psi_map, MetricFamily, MetricSpec, Point};
use twistor_core::jets::{Jet, DIM};

/// Christoffel symbols from central differences of metric values alone.
fn christoffel_fd(spec: &MetricSpec, p: &Point, h: f64) -> Vec<f64> {
    let g0 = metric_components(spec, p).unwrap();
    let (n, off) = (g0.dim, g0.offset);
    let vals = |q: &Point| metric_components(spec, q).unwrap().value();
    let dg: Vec<DMatrix<f64>> = (0..n)
        .map(|k| {
            let mut e = [0.0; DIM];
            e[k + off] = 1.0;
            (vals(&p.add_scaled(&e, h)) - vals(&p.add_scaled(&e, -h))) / (2.0 * h)
        })
        .collect();
    let ginv = g0.value().try_inverse().unwrap();
    let mut out = Vec::with_capacity(n * n * n);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let s: f64 = (0..n).map(|l| ginv[(k, l)] * (dg[i][(l, j)] + dg[j][(l, i)] - dg[l][(i, j)])).sum();
                out.push(0.5 * s);
            }
        }
    }
    out
}

fn eh_point(a: f64) -> impl Strategy<Value = Point> {
    (1.05..3.0f64, direction()).prop_map(move |(t, u)| point_from(0.0, t * a, u))
}

/// Coordinate components lose digits like powers of `1/β` as `r_o → 1/a`,
/// so coordinate identities keep the same `0.1/a` outer band as the suite.
fn coordinate_point() -> impl Strategy<Value = Point> {
    prop_oneof![ba_point(1.0, 0.1), l_point(0.02)]
}

fn spec_and_point() -> impl Strategy<Value = (MetricSpec, Point)> {
    prop_oneof![
        coordinate_point().prop_map(|p| (MetricSpec::ga(1.0), p)),
        coordinate_point().prop_map(|p| (MetricSpec::ga_tilde(1.0), p)),
        (0.02..0.9f64, direction()).prop_map(|(r, u)| (MetricSpec::ha(1.0), point_from(0.0, r, u))),
        eh_point(1.0).prop_map(|p| (MetricSpec::eguchi_hanson(1.0), p)),
    ]
}

/// `q⁴` for `g̃_a`, whose orthonormal frames have coordinate length `|q|`, so
/// that `weight·R_abcd` are frame components; 1 otherwise.
fn frame_weight(spec: &MetricSpec, p: &Point) -> f64 {
    if spec.family == MetricFamily::GaTilde {
        p.q().powi(4)
    } else {
        1.0
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn christoffel_matches_finite_differences((spec, p) in spec_and_point()) {
        let chr = christoffel_at(&spec, &p).unwrap();
        let n = spec.dim();
        let exact: Vec<f64> = (0..n).flat_map(|k| (0..n).flat_map(move |i| (0..n).map(move |j| (k, i, j))))
            .map(|(k, i, j)| chr.value(k, i, j)).collect();
        // Metric derivatives scale like inverse powers of the distance to the
        // axis, to the outer boundary r_o = 1/a and, for g̃_a, to the cone.
        let outer = match spec.family {
            MetricFamily::Ha => 1.0 - p.r(),
            MetricFamily::EguchiHanson => p.r() - 1.0,
            _ if p.r() > p.x0().abs() => 1.0 - p.ro(),
            _ => 1.0,
        };
        let h = 1e-4 * p.r().min(1.0).min((p.r() - p.x0().abs()).abs()).min(outer);
        let fd = christoffel_fd(&spec, &p, h);
        prop_assert!(rel(&exact, &fd) < 1e-7, "residual {}", rel(&exact, &fd));
    }

    #[test]
    fn first_bianchi_identity((spec, p) in spec_and_point()) {
        let cb = curvature_values_at(&spec, &p).unwrap();
        let n = cb.dim();
        let w = frame_weight(&spec, &p);
        let scale = 1.0 + w * cb.riemann_down.max_abs();
        // Lowering the first index is linear, so the cyclic sum may be taken
        // on R_lkij in frame weight.
        let r = |l, k, i, j| w * cb.riemann_down.value(l, k, i, j);
        for l in 0..n { for k in 0..n { for i in 0..n { for j in 0..n {
            let s = r(l, k, i, j) + r(l, i, j, k) + r(l, j, k, i);
            prop_assert!(s.abs() / scale < 1e-9);
        }}}}
    }

    #[test]
    fn riemann_has_its_pair_symmetries((spec, p) in spec_and_point()) {
        let cb = curvature_values_at(&spec, &p).unwrap();
        let n = cb.dim();
        let w = frame_weight(&spec, &p);
        let scale = 1.0 + w * cb.riemann_down.max_abs();
        let r = |a, b, c, d| w * cb.riemann_down.value(a, b, c, d);
        for a in 0..n { for b in 0..n { for c in 0..n { for d in 0..n {
            prop_assert!((r(a, b, c, d) + r(b, a, c, d)).abs() / scale < 1e-9);
            prop_assert!((r(a, b, c, d) + r(a, b, d, c)).abs() / scale < 1e-9);
            prop_assert!((r(a, b, c, d) - r(c, d, a, b)).abs() / scale < 1e-9);
        }}}}
    }

    #[test]
    fn weyl_is_trace_free((spec, p) in spec_and_point()) {
        let cb = curvature_values_at(&spec, &p).unwrap();
        let n = cb.dim();
        let scale = 1.0 + cb.weyl.max_abs();
        for b in 0..n { for d in 0..n {
            let t: f64 = (0..n).flat_map(|a| (0..n).map(move |c| (a, c)))
                .map(|(a, c)| cb.ginv[a][c].value * cb.weyl.value(a, b, c, d)).sum();
            prop_assert!(t.abs() / scale < 1e-9);
        }}
    }

    #[test]
    fn eguchi_hanson_is_ricci_flat_with_riemann_equal_to_weyl(p in eh_point(1.0)) {
        let cb = curvature_values_at(&MetricSpec::eguchi_hanson(1.0), &p).unwrap();
        prop_assert!(cb.ricci_max_abs() < 1e-8);
        prop_assert!(cb.riemann_down.max_abs() > 1e-3);
        let d: Vec<f64> = cb.riemann_down.values().iter().zip(cb.weyl.values()).map(|(x, y)| x - y).collect();
        prop_assert!(d.iter().fold(0.0f64, |m, v| m.max(v.abs())) < 1e-8);
    }

    #[test]
    fn ga_is_flat_inside_the_cone(p in l_point(0.02)) {
        let cb = curvature_values_at(&MetricSpec::ga(1.0), &p).unwrap();
        prop_assert!(cb.riemann_down.max_abs() < 1e-12);
    }

    #[test]
    fn weyl_is_conformally_covariant(p in ba_point(1.0, 0.1)) {
        let w = curvature_values_at(&MetricSpec::ga(1.0), &p).unwrap().weyl.values();
        let wt = curvature_values_at(&MetricSpec::ga_tilde(1.0), &p).unwrap().weyl.values();
        let q2 = p.q() * p.q();
        let scaled: Vec<f64> = w.iter().map(|v| v / q2).collect();
        prop_assert!(rel(&wt, &scaled) < 1e-8, "residual {}", rel(&wt, &scaled));
    }

    #[test]
    fn ga_tilde_curvature_has_no_s_component(p in ba_point(1.0, 0.05)) {
        let y = psi_map(&p).unwrap();
        let g = metric_in_psi_coords(&MetricSpec::ga_tilde(1.0), &y).unwrap();
        let cb = curvature(&g).unwrap();
        let scale = 1.0 + cb.riemann_down.max_abs();
        for b in 0..DIM { for c in 0..DIM { for d in 0..DIM {
            prop_assert!(cb.riemann_down.value(0, b, c, d).abs() / scale < 1e-9);
        }}}
    }
}

fn eh_frame_and_forms(
    p: &Point,
) -> (FrameJets, twistor_core::geometry::MetricJets, twistor_core::curvature::ConnectionForms) {
    let spec = MetricSpec::eguchi_hanson(1.0);
    let g = metric_components(&spec, p).unwrap();
    let frame = frame_eh(p, 1.0).unwrap();
    let cb = curvature(&g).unwrap();
    let forms = connection_forms(&frame, &g, &cb.christoffel, Some(&cb)).unwrap();
    (frame, g, forms)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn cartan_curvature_matches_riemann_route(p in eh_point(1.0)) {
        let (frame, g, forms) = eh_frame_and_forms(&p);
        let cartan = cartan_curvature(&frame, g.offset).unwrap();
        let riem = forms.curvature.as_ref().unwrap();
        prop_assert!(rel(&cartan.curvature, riem) < 1e-9, "residual {}", rel(&cartan.curvature, riem));
    }

    #[test]
    fn koszul_connection_matches_levi_civita(p in eh_point(1.0)) {
        let (frame, _, forms) = eh_frame_and_forms(&p);
        let fv = frame.values();
        let mut from_cov = Vec::new();
        let mut koszul = Vec::new();
        for i in 0..4 { for j in 0..4 { for k in 0..4 {
            koszul.push(forms.omega[i][j][k]);
            from_cov.push((0..4).map(|m| forms.omega_cov[i][j][m].value * fv[k][m]).sum::<f64>());
        }}}
        prop_assert!(rel(&koszul, &from_cov) < 1e-10);
    }

    #[test]
    fn structure_equations_hold(p in eh_point(1.0)) {
        let (frame, g, forms) = eh_frame_and_forms(&p);
        let (first, second) = structure_equation_residuals(&frame, &g, &forms);
        prop_assert!(first < 1e-8 && second < 1e-8, "first {first}, second {second}");
    }

    #[test]
    fn cartan_ricci_matches_coordinate_ricci_for_ga(p in ba_point(1.0, 0.05)) {
        let e = frame_eval(FrameId::E, &p, 1.0).unwrap().as_frame_jets();
        let fc = cartan_curvature(&e, 0).unwrap();
        let cb = curvature_values_at(&MetricSpec::ga(1.0), &p).unwrap();
        let ev = e.values();
        let ric = cb.ricci_value();
        let frame_ric = fc.ricci();
        let mut lhs = Vec::new();
        let mut rhs = Vec::new();
        for a in 0..DIM { for b in 0..DIM {
            lhs.push(frame_ric[a][b]);
            rhs.push((0..DIM).flat_map(|i| (0..DIM).map(move |j| (i, j))).map(|(i, j)| ev[a][i] * ev[b][j] * ric[i][j]).sum::<f64>());
        }}
        prop_assert!(rel(&lhs, &rhs) < 1e-9, "residual {}", rel(&lhs, &rhs));
    }

    #[test]
    fn frame_hessian_matches_coordinate_hessian(p in ba_point(1.0, 0.05), c in prop::array::uniform5(-1.0..1.0f64)) {
        let e = frame_eval(FrameId::E, &p, 1.0).unwrap().as_frame_jets();
        let fc = cartan_curvature(&e, 0).unwrap();
        let x = p.seeded();
        // A smooth test function: a quadratic plus a product term.
        let mut u = Jet::zero();
        for i in 0..DIM {
            u += x[i] * c[i] + x[i].square() * (0.1 * c[(i + 1) % DIM]);
        }
        u += x[0] * x[3] * x[4];
        let g = metric_components(&MetricSpec::ga(1.0), &p).unwrap();
        let (chr, _) = christoffel_with_inverse(&g).unwrap();
        let hess = hessian_scalar(&u, &chr);
        let fh = frame_hessian(&u, &e, &fc, 0);
        let ev = e.values();
        let mut lhs = Vec::new();
        let mut rhs = Vec::new();
        for a in 0..DIM { for b in 0..DIM {
            lhs.push(fh[a][b]);
            rhs.push((0..DIM).flat_map(|i| (0..DIM).map(move |j| (i, j))).map(|(i, j)| ev[a][i] * ev[b][j] * hess[i][j]).sum::<f64>());
        }}
        prop_assert!(rel(&lhs, &rhs) < 1e-10);
    }

    #[test]
    fn koszul_omega_is_antisymmetric_in_the_frame(p in ba_point(1.0, 0.02)) {
        let e = frame_eval(FrameId::E, &p, 1.0).unwrap().as_frame_jets();
        let w = koszul_omega(&e, 0).unwrap();
        // The stored components are g(∇_{e_k} e_i, e_j), antisymmetric in i, j.
        let scale = 1.0 + w.iter().flatten().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 0..DIM { for j in 0..DIM { for k in 0..DIM {
            let s = w[i][j][k] + w[j][i][k];
            prop_assert!(s.abs() / scale < 1e-12, "{} at scale {scale}", s.abs());
        }}}
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn frame_f_closed_form_matches_psi_route(p in ba_tilde_point(1.0)) {
        let closed = frame_eval(FrameId::F, &p, 1.0).unwrap().values();
        let psi = frame_f_via_psi(&p, 1.0).unwrap().values();
        let (a, b): (Vec<f64>, Vec<f64>) = (closed.iter().flatten().copied().collect(), psi.iter().flatten().copied().collect());
        prop_assert!(rel(&a, &b) < 1e-11, "residual {}", rel(&a, &b));
    }

    #[test]
    fn frames_are_orthonormal(p in ba_tilde_point(1.0)) {
        for id in [FrameId::E, FrameId::F, FrameId::ETilde, FrameId::HTilde] {
            if id == FrameId::HTilde && !in_ca(&p, 1.0) {
                continue;
            }
            let f = frame_eval(id, &p, 1.0).unwrap();
            let g = f.gram().unwrap();
            let scale = 1.0 + g.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
            prop_assert!(f.gram_residual().unwrap() / scale < 1e-10, "{id}: {}", f.gram_residual().unwrap());
        }
    }
}
