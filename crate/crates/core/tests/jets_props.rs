//! Jet arithmetic against central finite differences and closed-form
//! monomial partials.

use proptest::prelude::*;

use twistor_core::jets::{jet_apply, seed, Elementary, Jet, DIM};

/// Smooth composite of the coordinates, evaluable both as a jet and as a
/// plain float. Every operation is well defined on all of R⁵.
#[derive(Debug, Clone)]
enum Expr {
    Var(usize),
    Const(f64),
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// `1 / (1 + e²)`.
    Bump(Box<Expr>),
    /// `sqrt(1 + e²)`.
    Hyp(Box<Expr>),
    /// `ln(2 + e²)`.
    Log(Box<Expr>),
}

impl Expr {
    fn jet(&self, x: &[Jet; DIM]) -> Jet {
        match self {
            Expr::Var(i) => x[*i],
            Expr::Const(c) => Jet::constant(*c),
            Expr::Add(a, b) => a.jet(x) + b.jet(x),
            Expr::Mul(a, b) => a.jet(x) * b.jet(x),
            Expr::Bump(e) => (e.jet(x).square() + 1.0).recip().unwrap(),
            Expr::Hyp(e) => (e.jet(x).square() + 1.0).sqrt().unwrap(),
            Expr::Log(e) => (e.jet(x).square() + 2.0).ln().unwrap(),
        }
    }

    fn eval(&self, x: &[f64; DIM]) -> f64 {
        match self {
            Expr::Var(i) => x[*i],
            Expr::Const(c) => *c,
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Bump(e) => 1.0 / (1.0 + e.eval(x).powi(2)),
            Expr::Hyp(e) => (1.0 + e.eval(x).powi(2)).sqrt(),
            Expr::Log(e) => (2.0 + e.eval(x).powi(2)).ln(),
        }
    }
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![(0..DIM).prop_map(Expr::Var), (-2.0..2.0f64).prop_map(Expr::Const)];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|e| Expr::Bump(Box::new(e))),
            inner.clone().prop_map(|e| Expr::Hyp(Box::new(e))),
            inner.prop_map(|e| Expr::Log(Box::new(e))),
        ]
    })
}

fn point() -> impl Strategy<Value = [f64; DIM]> {
    prop::array::uniform5(-1.0..1.0f64)
}

fn shifted(x: &[f64; DIM], steps: &[(usize, f64)]) -> [f64; DIM] {
    let mut y = *x;
    for &(i, h) in steps {
        y[i] += h;
    }
    y
}

/// Central difference of `f` along `dirs`, nested one index at a time.
fn central(f: &dyn Fn(&[f64; DIM]) -> f64, x: &[f64; DIM], dirs: &[usize], h: f64) -> f64 {
    match dirs.split_first() {
        None => f(x),
        Some((&i, rest)) => {
            let plus = shifted(x, &[(i, h)]);
            let minus = shifted(x, &[(i, -h)]);
            (central(f, &plus, rest, h) - central(f, &minus, rest, h)) / (2.0 * h)
        }
    }
}

fn close(jet: f64, fd: f64, tol: f64, scale: f64) -> bool {
    (jet - fd).abs() <= tol * (1.0 + scale)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn partials_match_finite_differences(e in expr(), x in point()) {
        let j = e.jet(&seed(x));
        let f = |y: &[f64; DIM]| e.eval(y);
        prop_assert!((j.value - f(&x)).abs() <= 1e-12 * (1.0 + j.value.abs()));
        let s1 = (0..DIM).map(|i| j.grad[i].abs()).fold(0.0, f64::max);
        for i in 0..DIM {
            let fd = central(&f, &x, &[i], 1e-5);
            prop_assert!(close(j.grad[i], fd, 1e-5, s1), "d{i}: jet {} fd {fd}", j.grad[i]);
        }
        let mut s2: f64 = 0.0;
        let mut s3: f64 = 0.0;
        for i in 0..DIM {
            for k in 0..DIM {
                s2 = s2.max(j.d2(i, k).abs());
                for l in 0..DIM {
                    s3 = s3.max(j.d3(i, k, l).abs());
                }
            }
        }
        for i in 0..DIM {
            for k in i..DIM {
                let fd = central(&f, &x, &[i, k], 1e-4);
                prop_assert!(close(j.d2(i, k), fd, 1e-4, s2), "d{i}{k}: jet {} fd {fd}", j.d2(i, k));
                for l in k..DIM {
                    let fd = central(&f, &x, &[i, k, l], 1e-3);
                    prop_assert!(
                        close(j.d3(i, k, l), fd, 1e-4, s3),
                        "d{i}{k}{l}: jet {} fd {fd}", j.d3(i, k, l)
                    );
                }
            }
        }
    }

    #[test]
    fn mixed_partials_are_symmetric(e in expr(), x in point()) {
        let j = e.jet(&seed(x));
        for i in 0..DIM {
            for k in 0..DIM {
                prop_assert_eq!(j.d2(i, k), j.d2(k, i));
                for l in 0..DIM {
                    prop_assert_eq!(j.d3(i, k, l), j.d3(l, i, k));
                    prop_assert_eq!(j.d3(i, k, l), j.d3(k, i, l));
                }
            }
        }
    }
}

/// Monomial `∏ xᵢ^{αᵢ}` with its partials written out by the power rule.
fn monomial_closed_form(alpha: &[u32; DIM], x: &[f64; DIM]) -> Jet {
    let d = |steps: &[usize]| -> f64 {
        let mut counts = [0u32; DIM];
        for &s in steps {
            counts[s] += 1;
        }
        (0..DIM)
            .map(|i| {
                let (a, c) = (alpha[i], counts[i]);
                if c > a {
                    return 0.0;
                }
                let falling: u32 = (0..c).map(|t| a - t).product();
                falling as f64 * x[i].powi((a - c) as i32)
            })
            .product()
    };
    let mut j = Jet::constant(d(&[]));
    for i in 0..DIM {
        j.grad[i] = d(&[i]);
        for k in 0..DIM {
            j.set_d2(i, k, d(&[i, k]));
            for l in 0..DIM {
                j.set_d3(i, k, l, d(&[i, k, l]));
            }
        }
    }
    j
}

fn monomial_jet(alpha: &[u32; DIM], x: &[Jet; DIM]) -> Jet {
    let mut j = Jet::one();
    for i in 0..DIM {
        for _ in 0..alpha[i] {
            j = jet_apply(Elementary::Mul, &[j, x[i]]).unwrap();
        }
    }
    j
}

fn dyadic_point() -> impl Strategy<Value = [f64; DIM]> {
    prop::array::uniform5((-8i32..=8).prop_map(|k| k as f64 * 0.25))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// With dyadic coordinates and small exponents every product is exact,
    /// so the Leibniz rule must reproduce the power-rule partials bit for bit.
    #[test]
    fn leibniz_matches_power_rule_exactly(
        a in prop::array::uniform5(0u32..3),
        b in prop::array::uniform5(0u32..3),
        x in dyadic_point(),
    ) {
        let xs = seed(x);
        let prod = jet_apply(Elementary::Mul, &[monomial_jet(&a, &xs), monomial_jet(&b, &xs)]).unwrap();
        let ab: [u32; DIM] = std::array::from_fn(|i| a[i] + b[i]);
        let closed = monomial_closed_form(&ab, &x);
        prop_assert_eq!(prod.value, closed.value);
        for i in 0..DIM {
            prop_assert_eq!(prod.grad[i], closed.grad[i]);
            for k in 0..DIM {
                prop_assert_eq!(prod.d2(i, k), closed.d2(i, k));
                for l in 0..DIM {
                    prop_assert_eq!(prod.d3(i, k, l), closed.d3(i, k, l));
                }
            }
        }
    }
}
