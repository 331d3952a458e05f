//! The registered checks. Each one samples its own points from a seed derived
//! from the suite seed and its id, so enabling or disabling a check never
//! changes another check's residuals.
//!
//! Every identity `A = B` is scored as `‖A − B‖ / (1 + ‖A‖ + ‖B‖)`. Counting
//! checks score 0 or 1 per case with tolerance 0.5, so a single failed case
//! fails the check. Lower bounds `x > t` are scored as `t / x` with
//! tolerance 1.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::SuiteConfig;
use super::sample::{derive_seed, sample, sample_within, Exclusions, SampleRegion};
use crate::clifford::{clifford_relations, inner_raw, FrameId, SpinorValue, EPS};
use crate::curvature::{
    asd_split, cartan_curvature, christoffel, christoffel_with_inverse, conformal_ricci_pair, connection_forms,
    curvature_values_at, divergence, frame_orientation, lie_derivative_metric, weyl, weyl_extension_probe,
    ConnectionForms, FrameJets,
};
use crate::exec::{map_points, Execution};
use crate::frames::{frame_eh, frame_eval, gram_schmidt};
use crate::geometry::{field_v, metric_at, metric_components, metric_in_psi_coords, psi_map, MetricSpec, Point};
use crate::jets::DIM;
use crate::regularity::{
    expected_probe_class, ga_class, monomial_class, smoothness_probe, CrossingCurve, MonomialSpec, ScalarField,
    SmoothnessClass, MAX_ORDER,
};
use crate::spingeo::{
    einstein_rescale_sides, essentiality_probe, length_square_u, spinor_eval, spinor_square, SpinorEval, SpinorField,
};
use crate::{Error, Result};

/// Evaluation context shared by the checks of one run.
pub struct Ctx<'a> {
    pub cfg: &'a SuiteConfig,
    pub exec: Execution,
}

impl Ctx<'_> {
    fn exclusions(&self) -> Exclusions {
        Exclusions::uniform(self.cfg.exclude)
    }

    fn points(&self, tag: &str, region: SampleRegion, n: usize) -> Result<Vec<Point>> {
        sample(region, self.cfg.a, n.max(1), derive_seed(self.cfg.seed, tag), &self.exclusions())
    }

    fn map<T: Sync>(&self, items: &[T], f: impl Fn(&T) -> Result<f64> + Sync + Send) -> Result<Vec<f64>> {
        map_points(self.exec, items, f).into_iter().collect()
    }

    fn n(&self) -> usize {
        self.cfg.samples
    }

    /// A third of the base count, used for the smaller regions.
    fn n_third(&self) -> usize {
        (self.cfg.samples / 3).max(1)
    }

    /// Spinor parameters: the three fixed pairs and the configured one.
    fn bc_pairs(&self) -> Vec<(f64, f64)> {
        let mut pairs = vec![(1.0, 0.0), (0.0, 1.0), (1.0, 1.0)];
        let own = (self.cfg.b, self.cfg.c);
        if !pairs.contains(&own) {
            pairs.push(own);
        }
        pairs
    }
}

type CheckFn = fn(&Ctx) -> Result<Vec<f64>>;

/// A registered check.
pub struct CheckDef {
    pub id: &'static str,
    pub criterion: Option<u8>,
    pub name: &'static str,
    pub claim: &'static str,
    pub tol: f64,
    pub run: CheckFn,
}

pub const CHECKS: &[CheckDef] = &[
    CheckDef {
        id: "c01_clifford_relations",
        criterion: Some(1),
        name: "Clifford relations",
        claim: "γ₀² = 1, γᵢ² = −1 and γᵢγⱼ + γⱼγᵢ = 0 in exact integer arithmetic",
        tol: 0.5,
        run: c01_clifford,
    },
    CheckDef {
        id: "c02_frame_e_gram",
        criterion: Some(2),
        name: "frame e orthonormal",
        claim: "Gram(e, g_a) = diag(−1, 1, 1, 1, 1) on B_a^> for a/2, a, 2a",
        tol: 1e-10,
        run: c02_gram,
    },
    CheckDef {
        id: "c03_product_block",
        criterion: Some(3),
        name: "conformal product structure",
        claim: "in Ψ-coordinates g̃_a = −ds² + g_EH on B_a",
        tol: 1e-10,
        run: c03_product,
    },
    CheckDef {
        id: "c03_flat_interior",
        criterion: Some(3),
        name: "g̃_a flat inside the cone",
        claim: "for r < |x₀|, g̃_a is η in Ψ-coordinates and its Riemann tensor vanishes in an orthonormal frame",
        tol: 1e-10,
        run: c03_flat,
    },
    CheckDef {
        id: "c03_ricci_flat",
        criterion: Some(3),
        name: "g̃_a Ricci-flat",
        claim: "Ric(g̃_a) = 0 on B_a",
        tol: 1e-8,
        run: c03_ricci,
    },
    CheckDef {
        id: "c04_connection_forms",
        criterion: Some(4),
        name: "Eguchi-Hanson connection forms",
        claim: "ω¹₂ = ω³₄ = −βR⁻¹f², ω¹₃ = −ω²₄ = −βR⁻¹f³, ω¹₄ = ω²₃ = −γf⁴",
        tol: 1e-9,
        run: c04_connection,
    },
    CheckDef {
        id: "c04_curvature_forms",
        criterion: Some(4),
        name: "Eguchi-Hanson curvature forms as displayed",
        claim: "Ω¹₂ = Ω³₄ = −(2a⁴/R⁶)λ¹₋, Ω¹₃ = −Ω²₄ = −(2a⁴/R⁶)λ²₋, Ω¹₄ = Ω²₃ = (4a⁴/R⁶)λ³₋",
        tol: 1e-8,
        run: c04_curvature_displayed,
    },
    CheckDef {
        id: "c04_weyl_plus_vanishes",
        criterion: Some(4),
        name: "Eguchi-Hanson anti-self-dual",
        claim: "‖W⁺‖ = 0 ≠ ‖W⁻‖ in the coordinate orientation of R⁴",
        tol: 1e-9,
        run: c04_asd,
    },
    CheckDef {
        id: "c04x_curvature_forms_rederived",
        criterion: None,
        name: "Eguchi-Hanson curvature forms from the structure equation",
        claim: "Ω¹₂ = Ω³₄ = (2a⁴/R⁶)(f¹²+f³⁴), Ω¹₃ = −Ω²₄ = (2a⁴/R⁶)(f¹³−f²⁴), Ω¹₄ = Ω²₃ = −(4a⁴/R⁶)(f¹⁴+f²³)",
        tol: 1e-8,
        run: c04_curvature_rederived,
    },
    CheckDef {
        id: "c05_twistor_psi_bc",
        criterion: Some(5),
        name: "ψ_bc twistor spinor",
        claim: "∇_Xψ_bc + (1/n)X·Dψ_bc = 0 for g_a on B_a and L∖L_o",
        tol: 1e-8,
        run: c05_twistor,
    },
    CheckDef {
        id: "c05_nu_parallel",
        criterion: Some(5),
        name: "ν_bc parallel",
        claim: "∇ν_bc = 0 for g̃_a on B_a",
        tol: 1e-9,
        run: c05_nu,
    },
    CheckDef {
        id: "c06_lie_derivative",
        criterion: Some(6),
        name: "V conformal Killing",
        claim: "L_V g_a = −4x₀·g_a",
        tol: 1e-9,
        run: c06_lie,
    },
    CheckDef {
        id: "c06_divergence",
        criterion: Some(6),
        name: "divergence of V",
        claim: "div(V) = −10x₀",
        tol: 1e-9,
        run: c06_div,
    },
    CheckDef {
        id: "c07_spinor_square",
        criterion: Some(7),
        name: "spinor square of ψ_bc",
        claim: "V_ψ_bc = (b² + c²)·V",
        tol: 1e-9,
        run: c07_square,
    },
    CheckDef {
        id: "c07_null_length",
        criterion: Some(7),
        name: "length of V",
        claim: "g_a(V, V) = −(r² − x₀²)²",
        tol: 1e-10,
        run: c07_length,
    },
    CheckDef {
        id: "c07_causal_type",
        criterion: Some(7),
        name: "causal type of V_ψ",
        claim: "V_ψ is timelike off L_o, lightlike on L_o∖{0} and zero at the origin",
        tol: 0.5,
        run: c07_causal,
    },
    CheckDef {
        id: "c08_length_square",
        criterion: Some(8),
        name: "length square of ψ_bc",
        claim: "⟨ψ_bc, ψ_bc⟩ = (r² − x₀²)(b² + c²)",
        tol: 1e-12,
        run: c08_length,
    },
    CheckDef {
        id: "c08_einstein_rescaling",
        criterion: Some(8),
        name: "Einstein rescaling equation",
        claim: "−u·Ric⁰ = (n − 2)·Hess(u)⁰ off L_o",
        tol: 1e-7,
        run: c08_pde,
    },
    CheckDef {
        id: "c09_ga_c1_not_c2",
        criterion: Some(9),
        name: "g_a is C¹ but not C²",
        claim: "every component of g_a is C¹ across L_o and some component is not C²",
        tol: 0.5,
        run: c09_ga,
    },
    CheckDef {
        id: "c09_monomial_classes",
        criterion: Some(9),
        name: "monomial smoothness classes",
        claim: "r_oᵐ·f_l is C^{k−1} but not C^k with k = min(m, m + s_l)",
        tol: 0.5,
        run: c09_monomials,
    },
    CheckDef {
        id: "c09_ro_squared_c1",
        criterion: Some(9),
        name: "r_o² is C¹",
        claim: "r_o² is C¹ but not C² across L_o",
        tol: 0.5,
        run: c09_ro2,
    },
    CheckDef {
        id: "c10_weyl_decay",
        criterion: Some(10),
        name: "Weyl decay toward L_o",
        claim: "|W^{g_a}| ~ r_o² approaching L_o from B_a (fitted exponent 2 ± 0.15)",
        tol: 0.15,
        run: c10_decay,
    },
    CheckDef {
        id: "c10_weyl_rescaling",
        criterion: Some(10),
        name: "Weyl rescaling as displayed",
        claim: "W^{g_a} = r_o⁴r⁴·W^{g̃_a} with lowered indices",
        tol: 1e-8,
        run: c10_rescale_displayed,
    },
    CheckDef {
        id: "c10_weyl_nonzero_interior",
        criterion: Some(10),
        name: "Weyl nonzero in B_a",
        claim: "max |W^{g_a}| > 1e-3 at interior points of B_a",
        tol: 1.0,
        run: c10_interior,
    },
    CheckDef {
        id: "c10_weyl_zero_on_l",
        criterion: Some(10),
        name: "Weyl zero on L",
        claim: "W^{g_a} = 0 on L∖L_o",
        tol: 1e-12,
        run: c10_zero_on_l,
    },
    CheckDef {
        id: "c10x_weyl_conformal_covariance",
        criterion: None,
        name: "Weyl conformal covariance",
        claim: "W^{g_a} = (r² − x₀²)²·W^{g̃_a} with lowered indices",
        tol: 1e-8,
        run: c10_rescale_conformal,
    },
    CheckDef {
        id: "c11_conformal_ricci",
        criterion: Some(11),
        name: "conformal Ricci identity",
        claim: "Ric^{g_a} = −(n−2)(Hess μ − dμ²) − (Δμ + (n−2)|dμ|²)g̃_a with μ = ln|r² − x₀²|",
        tol: 1e-8,
        run: c11_ricci,
    },
    CheckDef {
        id: "c12_essentiality_convergence",
        criterion: Some(12),
        name: "essentiality identity at the origin",
        claim: "V_{Dψ_bc} → −(n/2)·grad(div V_ψ_bc) as |x| → 0, monotonically over 5 radii",
        tol: 1e-6,
        run: c12_convergence,
    },
    CheckDef {
        id: "c12_essentiality_limit_nonzero",
        criterion: Some(12),
        name: "essentiality limit nonzero",
        claim: "‖V_{Dψ_bc}‖ > 1e-3 at the smallest radius",
        tol: 1.0,
        run: c12_limit,
    },
];

pub fn check_ids() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.id).collect()
}

pub fn find(id: &str) -> Option<&'static CheckDef> {
    CHECKS.iter().find(|c| c.id == id)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `‖A − B‖ / (1 + ‖A‖ + ‖B‖)`.
pub fn normalized(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    norm(&d) / (1.0 + norm(a) + norm(b))
}

fn flat<const N: usize>(m: &[[f64; N]; N], n: usize) -> Vec<f64> {
    (0..n).flat_map(|i| (0..n).map(move |j| m[i][j])).collect()
}

fn c01_clifford(_: &Ctx) -> Result<Vec<f64>> {
    Ok(clifford_relations().iter().map(|r| if r.holds { 0.0 } else { 1.0 }).collect())
}

fn c02_gram(ctx: &Ctx) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for s in [0.5, 1.0, 2.0] {
        let a = s * ctx.cfg.a;
        let ex = Exclusions::uniform(ctx.cfg.exclude.min(0.5 / (10.0 * a)));
        let seed = derive_seed(ctx.cfg.seed, &format!("c02/{s}"));
        let pts = sample(SampleRegion::BaTilde, a, ctx.n() * 5 / 3, seed, &ex)?;
        out.extend(ctx.map(&pts, |p| frame_eval(FrameId::E, p, a)?.gram_residual())?);
    }
    Ok(out)
}

fn c03_product(ctx: &Ctx) -> Result<Vec<f64>> {
    let a = ctx.cfg.a;
    let pts = ctx.points("c03_product", SampleRegion::Ba, ctx.n())?;
    ctx.map(&pts, |p| {
        let y = psi_map(p)?;
        let gt = metric_in_psi_coords(&MetricSpec::ga_tilde(a), &y)?.value();
        let eh = metric_components(&MetricSpec::eguchi_hanson(a), &y)?.value();
        let mut expected = vec![0.0; DIM * DIM];
        expected[0] = -1.0;
        for i in 1..DIM {
            for j in 1..DIM {
                expected[i * DIM + j] = eh[(i - 1, j - 1)];
            }
        }
        let got: Vec<f64> = (0..DIM).flat_map(|i| (0..DIM).map(move |j| (i, j))).map(|(i, j)| gt[(i, j)]).collect();
        Ok(normalized(&got, &expected))
    })
}

fn c03_flat(ctx: &Ctx) -> Result<Vec<f64>> {
    let a = ctx.cfg.a;
    let pts = ctx.points("c03_flat", SampleRegion::LInterior, ctx.n_third())?;
    ctx.map(&pts, |p| {
        let y = psi_map(p)?;
        let gt = metric_in_psi_coords(&MetricSpec::ga_tilde(a), &y)?.value();
        let got: Vec<f64> = gt.iter().copied().collect();
        let eta: Vec<f64> = (0..DIM * DIM).map(|k| if k % (DIM + 1) == 0 { EPS[k / DIM] } else { 0.0 }).collect();
        // On L, g̃_a = η/q², so |q|∂ᵢ is orthonormal and the frame components
        // of the lowered Riemann tensor are q⁴·R_abcd.
        let cb = curvature_values_at(&MetricSpec::ga_tilde(a), p)?;
        let frame_riemann = p.q().powi(4) * cb.riemann_down.max_abs();
        Ok(normalized(&got, &eta).max(frame_riemann))
    })
}

fn c03_ricci(ctx: &Ctx) -> Result<Vec<f64>> {
    let a = ctx.cfg.a;
    let pts = ctx.points("c03_ricci", SampleRegion::Ba, ctx.n())?;
    ctx.map(&pts, |p| {
        let cb = curvature_values_at(&MetricSpec::ga_tilde(a), p)?;
        Ok(cb.ricci_max_abs() / (1.0 + cb.riemann.max_abs()))
    })
}

/// Eguchi–Hanson data at the Ψ-image of a `B_a` sample, where `R = 1/r_o > a`.
fn eh_forms(p: &Point, a: f64) -> Result<(f64, FrameJets, ConnectionForms)> {
    let y = psi_map(p)?;
    let yp = Point::new([0.0, y.x[1], y.x[2], y.x[3], y.x[4]]);
    let g = metric_components(&MetricSpec::eguchi_hanson(a), &yp)?;
    let frame = frame_eh(&yp, a)?;
    let (chr, _) = christoffel_with_inverse(&g)?;
    let mut forms = connection_forms(&frame, &g, &chr, None)?;
    // Near the bolt R = a the coordinate Riemann tensor loses digits to
    // cancellation; the structure equations in the frame do not.
    forms.curvature = Some(cartan_curvature(&frame, g.offset)?.curvature);
    Ok((yp.r(), frame, forms))
}

fn eh_points(ctx: &Ctx, tag: &str) -> Result<Vec<Point>> {
    ctx.points(tag, SampleRegion::Ba, ctx.n_third())
}

/// Closed-form `ω^i_j(f_k)` of the Eguchi–Hanson frame.
pub fn eh_omega_closed_form(r: f64, a: f64) -> [[[f64; 4]; 4]; 4] {
    let b = (1.0 - (a / r).powi(4)).sqrt();
    let gamma = b / r + 2.0 * (a / r).powi(4) / (r * b);
    let mut w = [[[0.0; 4]; 4]; 4];
    let mut set = |i: usize, j: usize, k: usize, v: f64| {
        w[i][j][k] = v;
        w[j][i][k] = -v;
    };
    set(0, 1, 1, -b / r);
    set(2, 3, 1, -b / r);
    set(0, 2, 2, -b / r);
    set(1, 3, 2, b / r);
    set(0, 3, 3, -gamma);
    set(1, 2, 3, -gamma);
    w
}

/// A 2-form as `((a, b), sign)` entries on `fᵃ∧fᵇ`.
type Basis<'a> = &'a [((usize, usize), f64)];

/// `Ω^i_j(f_a, f_b)` for `i < j`, `a < b`, from coefficients on 2-form bases.
/// `forms[(i, j)]` lists `(coefficient, basis)` with basis entries `((a, b), sign)`.
fn curvature_table(entries: &[((usize, usize), f64, Basis)]) -> [[[[f64; 4]; 4]; 4]; 4] {
    let mut t = [[[[0.0; 4]; 4]; 4]; 4];
    for &((i, j), coef, basis) in entries {
        for &((a, b), s) in basis {
            t[i][j][a][b] = coef * s;
        }
    }
    t
}

/// The displayed Eguchi–Hanson curvature forms on the displayed `λⁱ₋`.
pub fn eh_curvature_displayed(r: f64, a: f64) -> [[[[f64; 4]; 4]; 4]; 4] {
    let c2 = 2.0 * a.powi(4) / r.powi(6);
    let c4 = 4.0 * a.powi(4) / r.powi(6);
    // λ¹₋ = f¹² − f³⁴, λ²₋ = f¹³ − f⁴² = f¹³ + f²⁴, λ³₋ = f¹⁴ − f²³.
    let l1: &[((usize, usize), f64)] = &[((0, 1), 1.0), ((2, 3), -1.0)];
    let l2: &[((usize, usize), f64)] = &[((0, 2), 1.0), ((1, 3), 1.0)];
    let l3: &[((usize, usize), f64)] = &[((0, 3), 1.0), ((1, 2), -1.0)];
    curvature_table(&[
        ((0, 1), -c2, l1),
        ((2, 3), -c2, l1),
        ((0, 2), -c2, l2),
        ((1, 3), c2, l2),
        ((0, 3), c4, l3),
        ((1, 2), c4, l3),
    ])
}

/// Curvature forms obtained by hand from the closed-form `ω` through
/// `Ω = dω − ω∧ω`, using `f¹ = −dR/β`, `f² = Rσ¹`, `f³ = Rσ²`, `f⁴ = Rβσ³`
/// and `dσ¹ = 2σ²∧σ³` (cyclic).
pub fn eh_curvature_rederived(r: f64, a: f64) -> [[[[f64; 4]; 4]; 4]; 4] {
    let c2 = 2.0 * a.powi(4) / r.powi(6);
    let c4 = 4.0 * a.powi(4) / r.powi(6);
    let m1: &[((usize, usize), f64)] = &[((0, 1), 1.0), ((2, 3), 1.0)];
    let m2: &[((usize, usize), f64)] = &[((0, 2), 1.0), ((1, 3), -1.0)];
    let m3: &[((usize, usize), f64)] = &[((0, 3), 1.0), ((1, 2), 1.0)];
    curvature_table(&[
        ((0, 1), c2, m1),
        ((2, 3), c2, m1),
        ((0, 2), c2, m2),
        ((1, 3), -c2, m2),
        ((0, 3), -c4, m3),
        ((1, 2), -c4, m3),
    ])
}

fn curvature_residual(forms: &ConnectionForms, expected: &[[[[f64; 4]; 4]; 4]; 4]) -> Result<f64> {
    let mut got = Vec::with_capacity(36);
    let mut want = Vec::with_capacity(36);
    for i in 0..4 {
        for j in (i + 1)..4 {
            for a in 0..4 {
                for b in (a + 1)..4 {
                    got.push(forms.curv(i, j, a, b).ok_or_else(|| Error::Domain("curvature forms missing".into()))?);
                    want.push(expected[i][j][a][b]);
                }
            }
        }
    }
    Ok(normalized(&got, &want))
}

fn c04_connection(ctx: &Ctx) -> Result<Vec<f64>> {
    let a = ctx.cfg.a;
    let pts = eh_points(ctx, "c04_connection")?;
    ctx.map(&pts, |p| {
        let (r, _, forms) = eh_forms(p, a)?;
        let w = eh_omega_closed_form(r, a);
        let mut got = Vec::new();
        let mut want = Vec::new();
        for i in 0..4 {
            for j in (i + 1)..4 {
                for k in 0..4 {
                    got.push(forms.omega[i][j][k]);
                    want.push(w[i][j][k]);
                }
            }
        }
        Ok(normalized(&got, &want))
    })
}

fn c04_curvature_displayed(ctx: &Ctx) -> Result<Vec<f64>> {
    let a = ctx.cfg.a;
    let pts = eh_points(ctx, "c04_curvature")?;
    ctx.map(&pts, |p| {
        let (r, _, forms) = eh_forms(p, a)?;
        curvature_residual(&forms, &eh_curvature_displayed(r, a))
    })
}

fn c04_curvature_rederived(ctx: &Ctx) -> Result<Vec<f64>> {
    let a = ctx.cfg.a;
    let pts = eh_points(ctx, "c04_curvature")?;
    ctx.map(&pts, |p| {
        let (r, _, forms) = eh_forms(p, a)?;
        curvature_residual(&forms, &eh_curvature_rederived(r, a))
    })
}

fn c04_asd(ctx: &Ctx) -> Result<Vec<f64>> {
    let a = ctx.cfg.a;
    let pts = eh_points(ctx, "c04_asd")?;
    ctx.map(&pts, |p| {
        let (_, frame, forms) = eh_forms(p, a)?;
        let split = asd_split(&forms, frame_orientation(&frame))?;
        Ok(if split.norm_minus > 0.0 { split.norm_plus / split.norm_minus } else { f64::INFINITY })
    })
}

/// `ψ_bc` in frame `e` under `g_a`, or under `g_a + ε·dx₁dx₂` with `e`
/// re-orthonormalized and the same components.
fn psi_eval(p: &Point, a: f64, b: f64, c: f64, perturbation: Option<f64>) -> Result<SpinorEval> {
    let field = SpinorField::psi_bc(b, c);
    let spec = MetricSpec::ga(a);
    let Some(eps) = perturbation else {
        return spinor_eval(&field, &spec, p);
    };
    let mut g = metric_at(&spec, &p.seeded())?;
    g.g[1][2] = g.g[1][2] + 0.5 * eps;
    g.g[2][1] = g.g[2][1] + 0.5 * eps;
    let e = frame_eval(FrameId::E, p, a)?.as_frame_jets();
    let v = gram_schmidt(&e.v, &g, &EPS)?;
    let frame = FrameJets { dim: DIM, eps: EPS, v };
    SpinorEval::from_parts(FrameId::Custom, frame, g, field.components(p, a)?)
}

fn c05_twistor(ctx: &Ctx) -> Result<Vec<f64>> {
    let a = ctx.cfg.a;
    let mut pts = ctx.points("c05_ba", SampleRegion::Ba, ctx.n())?;
    pts.extend(ctx.points("c05_l", SampleRegion::LInterior, ctx.n_third())?);
    let mut out = Vec::new();
    for (b, c) in ctx.bc_pairs() {
        out.extend(ctx.map(&pts, |p| Ok(psi_eval(p, a, b, c, ctx.cfg.perturbation)?.twistor_residual().max))?);
    }
    Ok(out)
}

fn c05_nu(ctx: &Ctx) -> Result<Vec<f64>> {
    let a = ctx.cfg.a;
    let pts = ctx.points("c05_nu", SampleRegion::Ba, ctx.n())?;
    let mut out = Vec::new();
    for (b, c) in ctx.bc_pairs() {
        out.extend(ctx.map(&pts, |p| {
            let ev = spinor_eval(&SpinorField::nu_bc(b, c), &MetricSpec::ga_tilde(a), p)?;
            let size = ev.value().norm();
            Ok((0..DIM).map(|k| ev.cov_deriv(k).norm()).fold(0.0, f64::max) / (1.0 + size))
        })?);
    }
    Ok(out)
}

fn c06_lie(ctx: &Ctx) -> Result<Vec<f64>> {
    let a = ctx.cfg.a;
    let pts = ctx.points("c06_lie", SampleRegion::BaTilde, ctx.n())?;
    ctx.map(&pts, |p| {
        let g = metric_components(&MetricSpec::ga(a), p)?;
        let l = lie_derivative_metric(&field_v(&p.seeded()), &g);
        let rhs: [[f64; DIM]; DIM] = std::array::from_fn(|i| std::array::from_fn(|j| -4.0 * p.x0() * g.g[i][j].value));
        Ok(normalized(&flat(&l, DIM), &flat(&rhs, DIM)))
    })
}

fn c06_div(ctx: &Ctx) -> Result<Vec<f64>> {
    let a = ctx.cfg.a;
    let pts = ctx.points("c06_div", SampleRegion::BaTilde, ctx.n())?;
    ctx.map(&pts, |p| {
        let g = metric_components(&MetricSpec::ga(a), p)?;
        let div = divergence(&field_v(&p.seeded()), &christoffel(&g)?).value;
        let want = -10.0 * p.x0();
        Ok((div - want).abs() / (1.0 + div.abs() + want.abs()))
    })
}

fn v_field_values(p: &Point) -> [f64; DIM] {
    field_v(&p.seeded()).map(|j| j.value)
}

fn c07_square(ctx: &Ctx) -> Result<Vec<f64>> {
    let (a, b, c) = (ctx.cfg.a, ctx.cfg.b, ctx.cfg.c);
    let pts = ctx.points("c07_square", SampleRegion::BaTilde, ctx.n())?;
    ctx.map(&pts, |p| {
        let ev = spinor_eval(&SpinorField::psi_bc(b, c), &MetricSpec::ga(a), p)?;
        let vpsi = spinor_square(&ev.value(), &ev.frame)?;
        let want = v_field_values(p).map(|v| (b * b + c * c) * v);
        Ok(normalized(&vpsi, &want))
    })
}

fn c07_length(ctx: &Ctx) -> Result<Vec<f64>> {
    let a = ctx.cfg.a;
    let pts = ctx.points("c07_length", SampleRegion::BaTilde, ctx.n())?;
    ctx.map(&pts, |p| {
        let g = metric_components(&MetricSpec::ga(a), p)?;
        let v = v_field_values(p);
        let gvv = g.pair_value(&v, &v);
        let want = -p.q() * p.q();
        Ok((gvv - want).abs() / (1.0 + gvv.abs() + want.abs()))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Causal {
    Zero,
    Lightlike,
    Timelike,
    Spacelike,
}

fn causal_type(v: &[f64; DIM], gvv: f64) -> Causal {
    let e2: f64 = v.iter().map(|x| x * x).sum();
    if e2.sqrt() <= 1e-12 {
        Causal::Zero
    } else if gvv.abs() <= 1e-9 * e2 {
        Causal::Lightlike
    } else if gvv < 0.0 {
        Causal::Timelike
    } else {
        Causal::Spacelike
    }
}

fn c07_causal(ctx: &Ctx) -> Result<Vec<f64>> {
    let (a, b, c) = (ctx.cfg.a, ctx.cfg.b, ctx.cfg.c);
    let mut pts = ctx.points("c07_causal", SampleRegion::BaTilde, ctx.n())?;
    let cone: Vec<Point> = ctx
        .points("c07_cone", SampleRegion::Ba, (ctx.n() / 10).max(1))?
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            let s = if i % 2 == 0 { 1.0 } else { -1.0 };
            Point::new([s * p.r(), p.x[1], p.x[2], p.x[3], p.x[4]])
        })
        .collect();
    pts.extend(cone);
    pts.push(Point::new([0.0; DIM]));
    ctx.map(&pts, |p| {
        // Frame e is undefined at the origin; h̃ covers it.
        let id = if p.norm() == 0.0 { FrameId::HTilde } else { FrameId::E };
        let field = if p.norm() == 0.0 { SpinorField::psi_bc_htilde(b, c) } else { SpinorField::psi_bc(b, c) };
        let w = field.components(p, a)?.map(|j| j.value);
        let frame = frame_eval(id, p, a)?.as_frame_jets();
        let vpsi = spinor_square(&SpinorValue::new(w, id), &frame)?;
        let g = metric_components(&MetricSpec::ga(a), p)?;
        let got = causal_type(&vpsi, g.pair_value(&vpsi, &vpsi));
        let want = if p.norm() == 0.0 {
            Causal::Zero
        } else if p.q().abs() <= 1e-12 * p.r2() {
            Causal::Lightlike
        } else {
            Causal::Timelike
        };
        Ok(if got == want { 0.0 } else { 1.0 })
    })
}

fn c08_length(ctx: &Ctx) -> Result<Vec<f64>> {
    let (a, b, c) = (ctx.cfg.a, ctx.cfg.b, ctx.cfg.c);
    let pts = ctx.points("c08_length", SampleRegion::BaTilde, ctx.n())?;
    ctx.map(&pts, |p| {
        let w = SpinorField::psi_bc(b, c).components(p, a)?.map(|j| j.value);
        let u = inner_raw(&w, &w);
        let want = length_square_u(b, c, p);
        Ok(((u.re - want).abs() + u.im.abs()) / (1.0 + u.norm() + want.abs()))
    })
}

fn c08_pde(ctx: &Ctx) -> Result<Vec<f64>> {
    let (a, b, c) = (ctx.cfg.a, ctx.cfg.b, ctx.cfg.c);
    let pts = ctx.points("c08_pde", SampleRegion::BaTilde, ctx.n())?;
    ctx.map(&pts, |p| {
        let (lhs, rhs) = einstein_rescale_sides(b, c, a, p)?;
        Ok(normalized(&flat(&lhs, DIM), &flat(&rhs, DIM)))
    })
}

/// Random straight curves through `L_o∖{0}`, at least ten of them.
pub fn random_cone_curves(seed: u64, a: f64, n: usize) -> Result<Vec<CrossingCurve>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0;
    while out.len() < n {
        attempts += 1;
        if attempts > 100 * n + 100 {
            return Err(Error::EmptyRegion("could not draw transversal cone curves".into()));
        }
        let u: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let un = u.iter().map(|v| v * v).sum::<f64>().sqrt();
        if un < 0.1 {
            continue;
        }
        let r = rng.random_range(0.2..0.8) / a;
        let s = if rng.random::<bool>() { 1.0 } else { -1.0 };
        let base = Point::new([s * r, r * u[0] / un, r * u[1] / un, r * u[2] / un, r * u[3] / un]);
        let base = Point::new([s * base.r(), base.x[1], base.x[2], base.x[3], base.x[4]]);
        let dir: [f64; DIM] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        if let Ok(c) = CrossingCurve::straight(base, dir, 0.01 * r, 12) {
            out.push(c);
        }
    }
    Ok(out)
}

fn cone_curves(ctx: &Ctx) -> Result<Vec<CrossingCurve>> {
    random_cone_curves(derive_seed(ctx.cfg.seed, "c09_curves"), ctx.cfg.a, (ctx.n() / 30).max(10))
}

fn c09_ga(ctx: &Ctx) -> Result<Vec<f64>> {
    let a = ctx.cfg.a;
    let curves = cone_curves(ctx)?;
    ctx.map(&curves, |c| Ok(if ga_class(c, a)? == SmoothnessClass::Exactly(1) { 0.0 } else { 1.0 }))
}

/// Random monomial specs with `m ∈ {1, 2, 3}` and `s_l ∈ {−1, 0, 1, 2}`.
pub fn random_monomials(seed: u64, n: usize) -> Vec<MonomialSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let m = rng.random_range(1..=3u32);
            let s = rng.random_range(-1..=2i32);
            let lr = rng.random_range((-s).max(0)..=2) as u32;
            let mut l = [lr, 0, 0, 0, 0, 0];
            for _ in 0..(s + lr as i32) {
                l[rng.random_range(1..6)] += 1;
            }
            MonomialSpec { m, l }
        })
        .collect()
}

fn c09_monomials(ctx: &Ctx) -> Result<Vec<f64>> {
    let a = ctx.cfg.a;
    let specs = random_monomials(derive_seed(ctx.cfg.seed, "c09_monomials"), 30);
    ctx.map(&specs, |s| Ok(if monomial_class(s, a)? == expected_probe_class(s) { 0.0 } else { 1.0 }))
}

fn c09_ro2(ctx: &Ctx) -> Result<Vec<f64>> {
    let a = ctx.cfg.a;
    let curves = cone_curves(ctx)?;
    ctx.map(&curves, |c| {
        let class = smoothness_probe(&ScalarField::RoSquared, c, MAX_ORDER, a)?.class();
        Ok(if class == SmoothnessClass::Exactly(1) { 0.0 } else { 1.0 })
    })
}

/// Spatial directions for the Weyl decay sequences.
const DECAY_DIRECTIONS: [[f64; 4]; 3] = [[0.5, 0.5, 0.5, 0.5], [0.8, -0.2, 0.4, 0.4], [-0.1, 0.7, 0.1, -0.7]];

fn c10_decay(ctx: &Ctx) -> Result<Vec<f64>> {
    let a = ctx.cfg.a;
    let x0 = 0.5 / a;
    ctx.map(&DECAY_DIRECTIONS, |d| {
        let n = norm(d);
        let pts: Vec<Point> = (0..12)
            .map(|k| {
                let r = x0 + 0.05 / a * 0.5f64.powi(k);
                Point::new([x0, r * d[0] / n, r * d[1] / n, r * d[2] / n, r * d[3] / n])
            })
            .collect();
        Ok((weyl_extension_probe(&pts, a)?.exponent - 2.0).abs())
    })
}

fn weyl_rescale(ctx: &Ctx, tag: &str, factor: fn(&Point) -> f64) -> Result<Vec<f64>> {
    let a = ctx.cfg.a;
    let pts = ctx.points(tag, SampleRegion::Ba, ctx.n_third())?;
    ctx.map(&pts, |p| {
        let wg = weyl(&MetricSpec::ga(a), p)?.values();
        let f = factor(p);
        let wt: Vec<f64> = weyl(&MetricSpec::ga_tilde(a), p)?.values().iter().map(|v| f * v).collect();
        Ok(normalized(&wg, &wt))
    })
}

fn c10_rescale_displayed(ctx: &Ctx) -> Result<Vec<f64>> {
    weyl_rescale(ctx, "c10_rescale", |p| p.ro().powi(4) * p.r().powi(4))
}

fn c10_rescale_conformal(ctx: &Ctx) -> Result<Vec<f64>> {
    weyl_rescale(ctx, "c10_rescale", |p| p.q().powi(2))
}

fn c10_interior(ctx: &Ctx) -> Result<Vec<f64>> {
    let a = ctx.cfg.a;
    // Interior: at least 0.1/a away from L_o and from the outer boundary.
    let ex = Exclusions { cone: 0.1 / a, axis: ctx.cfg.exclude, outer: 0.1 / a };
    let pts = sample_within(
        SampleRegion::Ba,
        a,
        ctx.n_third(),
        derive_seed(ctx.cfg.seed, "c10_interior"),
        &ex,
        f64::INFINITY,
    )?;
    ctx.map(&pts, |p| Ok(1e-3 / weyl(&MetricSpec::ga(a), p)?.max_abs()))
}

fn c10_zero_on_l(ctx: &Ctx) -> Result<Vec<f64>> {
    let a = ctx.cfg.a;
    let pts = ctx.points("c10_zero", SampleRegion::LInterior, ctx.n_third())?;
    ctx.map(&pts, |p| Ok(weyl(&MetricSpec::ga(a), p)?.max_abs()))
}

fn c11_ricci(ctx: &Ctx) -> Result<Vec<f64>> {
    let a = ctx.cfg.a;
    let pts = ctx.points("c11_ricci", SampleRegion::BaTilde, ctx.n())?;
    ctx.map(&pts, |p| {
        let (lhs, rhs) = conformal_ricci_pair(p, a)?;
        Ok(normalized(&flat(&lhs, DIM), &flat(&rhs, DIM)))
    })
}

/// Radii `0.1/a · 2^{−k}`, `k = 0..5`.
pub fn essentiality_radii(a: f64) -> Vec<f64> {
    (0..5).map(|k| 0.1 / a * 0.5f64.powi(k)).collect()
}

fn c12_convergence(ctx: &Ctx) -> Result<Vec<f64>> {
    let (a, b, c) = (ctx.cfg.a, ctx.cfg.b, ctx.cfg.c);
    let radii = essentiality_radii(a);
    let probes = map_points(ctx.exec, &radii, |&eps| essentiality_probe(b, c, a, eps))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let diffs: Vec<f64> = probes.iter().map(|p| p.max_difference / (1.0 + p.min_norm)).collect();
    let monotone = diffs.windows(2).all(|w| w[1] < w[0]);
    let last = *diffs.last().expect("five radii");
    Ok(vec![if monotone { last } else { f64::INFINITY }])
}

fn c12_limit(ctx: &Ctx) -> Result<Vec<f64>> {
    let (a, b, c) = (ctx.cfg.a, ctx.cfg.b, ctx.cfg.c);
    let eps = *essentiality_radii(a).last().expect("five radii");
    let probe = essentiality_probe(b, c, a, eps)?;
    Ok(vec![1e-3 / probe.min_norm])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_prefixed() {
        let ids = check_ids();
        let set: std::collections::BTreeSet<_> = ids.iter().collect();
        assert_eq!(set.len(), ids.len());
        for c in CHECKS {
            let prefix = c.id.split('_').next().unwrap();
            match c.criterion {
                Some(n) => assert_eq!(prefix, format!("c{n:02}")),
                None => assert!(prefix.ends_with('x')),
            }
            assert!(c.tol > 0.0);
        }
    }

    #[test]
    fn monomial_generator_hits_requested_orders() {
        for s in random_monomials(9, 200) {
            assert!((1..=3).contains(&s.m));
            assert!((-1..=2).contains(&s.s_l()));
        }
    }

    #[test]
    fn normalized_residual() {
        assert_eq!(normalized(&[1.0, 2.0], &[1.0, 2.0]), 0.0);
        assert!((normalized(&[0.0], &[1.0]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn eh_closed_form_at_reference_point() {
        let w = eh_omega_closed_form(2.0, 1.0);
        assert!((w[0][1][1] + 0.9375f64.sqrt() / 2.0).abs() < 1e-15);
        let d = eh_curvature_displayed(2.0, 1.0);
        assert_eq!(d[0][3][0][3], 0.0625);
    }
}
