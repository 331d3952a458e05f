//! Metric families, the inversion `Ψ` and the product structure of `g̃_a`.

#![allow(clippy::needless_range_loop)]

mod common;

use common::{ba_point, ba_tilde_point, direction, l_point, point_from, rel};
use proptest::prelude::*;

use twistor_core::geometry::{
    metric_components, metric_in_psi_coords, psi_jacobian_at, psi_jets, psi_map, radial_r, sigma_forms, signature,
    MetricJets, MetricSpec, Point, ETA,
};
use twistor_core::jets::DIM;

fn values(g: &MetricJets) -> Vec<f64> {
    let n = g.dim;
    (0..n).flat_map(|i| (0..n).map(move |j| g.g[i][j].value)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn minkowski_in_cylindrical_form(x0 in -2.0..2.0f64, r in 0.01..2.0f64, u in direction()) {
        let p = point_from(x0, r, u);
        let x = p.seeded();
        let dr = radial_r(&x).unwrap().grad;
        let sig = sigma_forms(&x).unwrap();
        let rr = p.r2();
        let mut cyl = vec![0.0; DIM * DIM];
        for i in 0..DIM {
            for j in 0..DIM {
                let mut v = dr[i] * dr[j];
                for s in &sig {
                    v += rr * s[i].value * s[j].value;
                }
                if i == 0 && j == 0 {
                    v -= 1.0;
                }
                cyl[i * DIM + j] = v;
            }
        }
        let g = values(&metric_components(&MetricSpec::minkowski(), &p).unwrap());
        prop_assert!(rel(&g, &cyl) < 1e-12, "residual {}", rel(&g, &cyl));
    }

    #[test]
    fn ga_is_lorentzian(p in ba_tilde_point(1.0)) {
        let g = metric_components(&MetricSpec::ga(1.0), &p).unwrap();
        prop_assert_eq!(signature(&g.value()), (1, 4));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ga_tilde_is_conformal_to_ga((a, p) in scaled_point()) {
        let g = metric_components(&MetricSpec::ga(a), &p).unwrap();
        let gt = metric_components(&MetricSpec::ga_tilde(a), &p).unwrap();
        let q2 = p.q() * p.q();
        let scaled: Vec<f64> = values(&g).iter().map(|v| v / q2).collect();
        prop_assert!(rel(&values(&gt), &scaled) < 1e-12);
    }

    #[test]
    fn ga_restricts_to_ha_on_the_slice(r in 0.02..0.98f64, u in direction()) {
        let p = point_from(0.0, r, u);
        let g = metric_components(&MetricSpec::ga(1.0), &p).unwrap();
        let h = metric_components(&MetricSpec::ha(1.0), &p).unwrap();
        prop_assert_eq!(h.dim, 4);
        let block: Vec<f64> = (1..DIM).flat_map(|i| (1..DIM).map(move |j| (i, j))).map(|(i, j)| g.g[i][j].value).collect();
        prop_assert!(rel(&block, &values(&h)) < 1e-12);
        for i in 1..DIM {
            prop_assert!(g.g[0][i].value.abs() < 1e-12);
        }
    }

    #[test]
    fn ga_is_minkowski_on_l(p in l_point(0.01)) {
        let g = values(&metric_components(&MetricSpec::ga(1.0), &p).unwrap());
        let eta = values(&MetricJets::minkowski());
        prop_assert!(rel(&g, &eta) < 1e-14);
    }

    #[test]
    fn psi_is_an_involution(p in ba_tilde_point(1.0)) {
        let back = psi_map(&psi_map(&p).unwrap()).unwrap();
        prop_assert!(rel(&back.x, &p.x) < 1e-13);
    }

    #[test]
    fn psi_is_conformal_with_factor_inverse_q_squared(p in ba_tilde_point(1.0)) {
        let jac = psi_jacobian_at(&p.seeded()).unwrap();
        let pulled = values(&MetricJets::minkowski().pullback(&jac));
        let q2 = p.q() * p.q();
        let expect: Vec<f64> = (0..DIM).flat_map(|i| (0..DIM).map(move |j| if i == j { ETA[i] / q2 } else { 0.0 })).collect();
        prop_assert!(rel(&pulled, &expect) < 1e-12);
    }

    #[test]
    fn psi_jacobian_matches_jet_partials(p in ba_tilde_point(1.0)) {
        let x = p.seeded();
        let jac = psi_jacobian_at(&x).unwrap();
        let y = psi_jets(&x).unwrap();
        for a in 0..DIM {
            for b in 0..DIM {
                let (lhs, rhs) = (jac[a][b].value, y[a].grad[b]);
                prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + lhs.abs()));
            }
        }
    }

    #[test]
    fn ga_tilde_is_a_product_in_psi_coordinates(a in prop::sample::select(vec![0.5, 1.0, 2.0]), t in 0.0..1.0f64, s in -0.95..0.95f64, u in direction()) {
        let ro = (0.02 + 0.96 * t) / a;
        let r = ro / (1.0 - s * s);
        let x = point_from(s * r, r, u);
        let y = psi_map(&x).unwrap();
        let gt = metric_in_psi_coords(&MetricSpec::ga_tilde(a), &y).unwrap();
        let eh = metric_components(&MetricSpec::eguchi_hanson(a), &y).unwrap();
        prop_assert!((gt.g[0][0].value + 1.0).abs() < 1e-10);
        for i in 1..DIM {
            prop_assert!(gt.g[0][i].value.abs() < 1e-10);
        }
        let block: Vec<f64> = (1..DIM).flat_map(|i| (1..DIM).map(move |j| (i, j))).map(|(i, j)| gt.g[i][j].value).collect();
        prop_assert!(rel(&block, &values(&eh)) < 1e-10, "residual {}", rel(&block, &values(&eh)));
    }

    #[test]
    fn ga_tilde_is_flat_minkowski_in_psi_coordinates_on_l(p in l_point(0.02)) {
        let y = psi_map(&p).unwrap();
        let gt = values(&metric_in_psi_coords(&MetricSpec::ga_tilde(1.0), &y).unwrap());
        prop_assert!(rel(&gt, &values(&MetricJets::minkowski())) < 1e-12);
    }
}

fn scaled_point() -> impl Strategy<Value = (f64, Point)> {
    prop::sample::select(vec![0.5, 1.0, 2.0]).prop_flat_map(|a| (Just(a), ba_tilde_point(a)))
}

proptest! {
    #[test]
    fn region_generators_land_in_their_regions(p in ba_point(2.0, 0.01), l in l_point(0.01)) {
        prop_assert!(p.r() > p.x0().abs() && p.ro() < 0.5);
        prop_assert!(l.r() < l.x0().abs());
    }
}
