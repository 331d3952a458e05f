//! Spinor fields given by closed-form components, the spinor covariant
//! derivative, Dirac and twistor operators, spinor squares and the
//! Einstein-rescaling equation.
//!
//! In an orthonormal frame with signature `ε` and connection forms `ωⁱⱼ`,
//! `∇_{e_k} φ = e_k(w) + ½ Σ_{i<j} εᵢεⱼ ωⁱⱼ(e_k) γᵢγⱼ w` and
//! `Dφ = Σ_k ε_k γ_k ∇_{e_k} φ`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clifford::{apply_matrix, gamma_k, gammas, inner_raw, FrameId, SpinMatrix, SpinorValue, EPS};
use crate::curvature::{
    cartan_curvature, christoffel_with_inverse, connection_forms, curvature, divergence, frame_hessian, gradient,
    hessian_scalar, lie_derivative_metric, trace_free, trace_free_frame, ConnectionForms, FrameJets, SidePair,
};
use crate::frames::{frame_eval, frame_htilde, transform_eval, TransformId};
use crate::geometry::{cone_q, metric_at, radial_r, MetricFamily, MetricJets, MetricSpec, Point, VectorJet};
use crate::jets::{CJet, Jet, JetOrder, DIM};
use crate::{Error, Result};

/// Dimension entering the twistor operator.
pub const N: f64 = 5.0;

type Spin4 = [CJet; 4];

fn cz() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Which closed-form spinor a field represents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SpinorLabel {
    /// `(x₀e₀ + re₁)·[e_s, (b, −c, 0, 0)]`, components `(−x₀b, x₀c, rb, rc)` in `e`.
    PsiBc {
        b: Complex64,
        c: Complex64,
    },
    /// The parallel spinor `[f_s, (0, 0, b, c)]` of `g̃_a`.
    NuBc {
        b: Complex64,
        c: Complex64,
    },
    /// The flat twistor `(Σ xᵢ ∂ᵢ)·[u_s, w₀]`.
    PsiW0 {
        w0: [Complex64; 4],
    },
    Constant {
        w: [Complex64; 4],
    },
}

/// A closed-form spinor field together with the frame its components refer to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinorField {
    pub label: SpinorLabel,
    pub frame_id: FrameId,
}

impl SpinorField {
    pub fn psi_bc(b: f64, c: f64) -> Self {
        Self::psi_bc_complex(Complex64::new(b, 0.0), Complex64::new(c, 0.0))
    }

    pub fn psi_bc_complex(b: Complex64, c: Complex64) -> Self {
        Self { label: SpinorLabel::PsiBc { b, c }, frame_id: FrameId::E }
    }

    /// `ψ_bc` in the lift of `h̃`, which extends across the axis and the origin.
    pub fn psi_bc_htilde(b: f64, c: f64) -> Self {
        Self { frame_id: FrameId::HTilde, ..Self::psi_bc(b, c) }
    }

    pub fn nu_bc(b: f64, c: f64) -> Self {
        let (b, c) = (Complex64::new(b, 0.0), Complex64::new(c, 0.0));
        Self { label: SpinorLabel::NuBc { b, c }, frame_id: FrameId::F }
    }

    pub fn psi_w0(w0: [Complex64; 4]) -> Self {
        Self { label: SpinorLabel::PsiW0 { w0 }, frame_id: FrameId::U }
    }

    pub fn constant(w: [Complex64; 4], frame_id: FrameId) -> Self {
        Self { label: SpinorLabel::Constant { w }, frame_id }
    }

    /// Component jets at `p`; `a` is the metric parameter used by frame transitions.
    pub fn components(&self, p: &Point, a: f64) -> Result<Spin4> {
        match (self.label, self.frame_id) {
            (SpinorLabel::PsiBc { b, c }, FrameId::E) => psi_bc_in_e(p, b, c),
            (SpinorLabel::PsiBc { b, c }, FrameId::HTilde) => psi_bc_in_htilde(p, b, c, a),
            (SpinorLabel::PsiBc { b, c }, FrameId::U) => {
                if p.q() >= 0.0 {
                    return Err(Error::Domain("ψ_bc is presented in u only on L∖L_o".into()));
                }
                let w = psi_bc_in_e(p, b, c)?;
                change_spinor_frame_jets(&w, FrameId::E, FrameId::U, p, a)
            }
            (SpinorLabel::NuBc { b, c }, FrameId::F) => {
                Ok([CJet::zero(), CJet::zero(), CJet::constant(b), CJet::constant(c)])
            }
            (SpinorLabel::NuBc { b, c }, FrameId::ETilde) => {
                let w = [CJet::zero(), CJet::zero(), CJet::constant(b), CJet::constant(c)];
                change_spinor_frame_jets(&w, FrameId::F, FrameId::ETilde, p, a)
            }
            (SpinorLabel::PsiW0 { w0 }, FrameId::U) => {
                let x = p.seeded();
                let mut out = [CJet::zero(); 4];
                let g = gammas();
                for (k, xk) in x.iter().enumerate() {
                    let gw = apply_matrix(&g[k], &w0);
                    for i in 0..4 {
                        out[i] += xk.to_complex() * CJet::constant(gw[i]);
                    }
                }
                Ok(out)
            }
            (SpinorLabel::Constant { w }, _) => Ok(w.map(CJet::constant)),
            (label, frame) => Err(Error::FrameMismatch {
                expected: format!("a supported frame for {label:?}"),
                got: frame.to_string(),
            }),
        }
    }
}

fn psi_bc_in_e(p: &Point, b: Complex64, c: Complex64) -> Result<Spin4> {
    let x = p.seeded();
    let mut r = radial_r(&x)?;
    let mut x0 = x[0];
    if p.q() == 0.0 {
        // Frame e is only C¹ on L_o.
        let one = JetOrder::new(1)?;
        r = r.truncate(one);
        x0 = x0.truncate(one);
    }
    let (r, x0) = (r.to_complex(), x0.to_complex());
    Ok([-(x0 * b), x0 * c, r * b, r * c])
}

/// `Φ = G̃⁻¹Q̃⁻¹(−x₀b, x₀c, rb, rc)ᵀ` with the `1/r` factors cancelled.
///
/// Writing `Q̃ = [[ch, −sh],[−sh, ch]]` blockwise, the lower block of
/// `Q̃⁻¹w` is `(b, c)·(ch·r − sh·x₀)` and `G̃⁻¹` divides it by `r`, leaving
/// `ch − sh·x₀/r` times a polynomial in `x`.
fn psi_bc_in_htilde(p: &Point, b: Complex64, c: Complex64, a: f64) -> Result<Spin4> {
    if p.norm() == 0.0 {
        // ψ_bc vanishes at the origin, where its h̃ components are only continuous.
        return Ok([CJet::zero(); 4].map(|w| w.truncate(JetOrder::new(0).expect("order 0"))));
    }
    let x = p.seeded();
    let (ch, sh_x0_over_r, sh_r) = if p.q() < 0.0 {
        (Jet::one(), Jet::zero(), Jet::zero())
    } else {
        let qt = transform_eval(TransformId::QTilde, p, a)?;
        let m = qt.spin_jets().ok_or_else(|| Error::Domain("Q̃ is a spin matrix".into()))?;
        let ch = m[0][0].re();
        let sh = -m[0][2].re();
        let r = radial_r(&x)?;
        (ch, sh * x[0] / r, sh * r)
    };
    let b = CJet::constant(b);
    let c = CJet::constant(c);
    let x0 = x[0].to_complex();
    let i = Complex64::i();
    let z1 = x[1].to_complex() + x[2].to_complex() * i;
    let z2 = x[3].to_complex() + x[4].to_complex() * i;
    let m = (ch - sh_x0_over_r).to_complex();
    let (chc, shr) = (ch.to_complex(), sh_r.to_complex());
    let mut out =
        [b * (-(chc * x0) + shr), c * (chc * x0 - shr), m * (z1.conj() * b - z2 * c), m * (z2.conj() * b + z1 * c)];
    if p.q() == 0.0 {
        let one = JetOrder::new(1)?;
        out = out.map(|w| w.truncate(one));
    }
    Ok(out)
}

fn spin_jets_of(id: TransformId, p: &Point, a: f64) -> Result<[[CJet; 4]; 4]> {
    let t = transform_eval(id, p, a)?;
    t.spin_jets().copied().ok_or_else(|| Error::Domain(format!("{id:?} is not a spin transform")))
}

fn apply_jets(m: &[[CJet; 4]; 4], w: &Spin4) -> Spin4 {
    std::array::from_fn(|i| {
        let mut acc = CJet::zero();
        for j in 0..4 {
            acc += m[i][j] * w[j];
        }
        acc
    })
}

fn conj_transpose(m: &[[CJet; 4]; 4]) -> [[CJet; 4]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|j| m[j][i].conj()))
}

/// Inverse of a boost lift `[[ch, ±sh], …]`: flip the sign of the off-diagonal part.
fn boost_inverse(m: &[[CJet; 4]; 4]) -> [[CJet; 4]; 4] {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { m[i][j] } else { -m[i][j] }))
}

/// Spinor components after a change of frame, as jets.
///
/// Supported transitions: `e → u` (`G̃⁻¹`, on `L∖L_o`), `e → h̃` (`G̃⁻¹Q̃⁻¹`),
/// `ẽ → f` (`κ̃`), their inverses, and `e ↔ ẽ` (same components, the
/// conformal identification of spinor bundles).
pub fn change_spinor_frame_jets(w: &Spin4, from: FrameId, to: FrameId, p: &Point, a: f64) -> Result<Spin4> {
    use FrameId::*;
    if from == to {
        return Ok(*w);
    }
    match (from, to) {
        (E, ETilde) | (ETilde, E) => Ok(*w),
        (E, U) | (U, E) => {
            if p.q() >= 0.0 {
                return Err(Error::Domain("e·G = u holds only on L∖L_o".into()));
            }
            let g = spin_jets_of(TransformId::GTilde, p, a)?;
            if from == E {
                Ok(apply_jets(&conj_transpose(&g), w))
            } else {
                Ok(apply_jets(&g, w))
            }
        }
        (E, HTilde) | (HTilde, E) => {
            let g = spin_jets_of(TransformId::GTilde, p, a)?;
            let q = spin_jets_of(TransformId::QTilde, p, a)?;
            if from == E {
                Ok(apply_jets(&conj_transpose(&g), &apply_jets(&boost_inverse(&q), w)))
            } else {
                Ok(apply_jets(&q, &apply_jets(&g, w)))
            }
        }
        (ETilde, F) | (F, ETilde) => {
            let k = spin_jets_of(TransformId::KappaTilde, p, a)?;
            if from == ETilde {
                Ok(apply_jets(&k, w))
            } else {
                Ok(apply_jets(&boost_inverse(&k), w))
            }
        }
        _ => Err(Error::UnknownTransition { from: from.to_string(), to: to.to_string() }),
    }
}

/// Value-level frame change of a spinor.
pub fn change_spinor_frame(phi: &SpinorValue, to: FrameId, p: &Point, a: f64) -> Result<SpinorValue> {
    let w = phi.w.map(CJet::constant);
    let out = change_spinor_frame_jets(&w, phi.frame, to, p, a)?;
    Ok(SpinorValue::new(out.map(|c| c.value), to))
}

/// Rescales a spinor value for `g_to = e^{2σ} g_from`: components times `e^{σ/2}`.
///
/// The relation between the two metrics is checked at `p`.
pub fn conformal_rescale_spinor(
    phi: &SpinorValue,
    sigma: f64,
    from: &MetricSpec,
    to: &MetricSpec,
    to_frame: FrameId,
    p: &Point,
) -> Result<SpinorValue> {
    let x = p.seeded();
    let g0 = metric_at(from, &x)?.value();
    let g1 = metric_at(to, &x)?.value();
    let f = (2.0 * sigma).exp();
    let res = (&g1 - &g0 * f).amax() / (1.0 + g1.amax());
    if res > 1e-10 {
        return Err(Error::ScaleMismatch(res));
    }
    let s = (sigma / 2.0).exp();
    Ok(SpinorValue::new(phi.w.map(|c| c * s), to_frame))
}

/// A spinor evaluated with everything needed for first-order operators.
#[derive(Debug, Clone)]
pub struct SpinorEval {
    pub frame_id: FrameId,
    pub frame: FrameJets,
    pub metric: MetricJets,
    pub forms: ConnectionForms,
    pub components: Spin4,
    /// Spin connection matrices `A_k`, one per frame direction.
    pub connection: [SpinMatrix; DIM],
}

/// `A_k = ½ Σ_{i<j} εᵢεⱼ ωⁱⱼ(e_k) γᵢγⱼ` for every frame direction.
pub fn spin_connection_from(forms: &ConnectionForms) -> [SpinMatrix; DIM] {
    let g = gammas();
    std::array::from_fn(|k| {
        let mut a = SpinMatrix::zeros();
        for i in 0..DIM {
            for j in (i + 1)..DIM {
                let w = 0.5 * EPS[i] * EPS[j] * forms.omega[i][j][k];
                if w != 0.0 {
                    a += g[i] * g[j] * Complex64::new(w, 0.0);
                }
            }
        }
        a
    })
}

impl SpinorEval {
    pub fn from_parts(frame_id: FrameId, frame: FrameJets, metric: MetricJets, components: Spin4) -> Result<Self> {
        if metric.dim != DIM {
            return Err(Error::Dimension { expected: DIM, got: metric.dim });
        }
        let (chr, _) = christoffel_with_inverse(&metric)?;
        let forms = connection_forms(&frame, &metric, &chr, None)?;
        let connection = spin_connection_from(&forms);
        Ok(Self { frame_id, frame, metric, forms, components, connection })
    }

    pub fn value(&self) -> SpinorValue {
        SpinorValue::new(self.components.map(|c| c.value), self.frame_id)
    }

    /// `e_k(w)`: derivative of the components along frame vector `k`.
    pub fn component_derivative(&self, k: usize) -> [Complex64; 4] {
        let v = &self.frame.v[k];
        std::array::from_fn(|i| {
            let mut acc = cz();
            for m in 0..DIM {
                acc += self.components[i].grad[m] * v[m].value;
            }
            acc
        })
    }

    pub fn cov_deriv(&self, k: usize) -> SpinorValue {
        let d = self.component_derivative(k);
        let aw = apply_matrix(&self.connection[k], &self.components.map(|c| c.value));
        SpinorValue::new(std::array::from_fn(|i| d[i] + aw[i]), self.frame_id)
    }

    pub fn dirac(&self) -> SpinorValue {
        let mut out = [cz(); 4];
        for k in 0..DIM {
            let g = gamma_k(k, &self.cov_deriv(k).w);
            for i in 0..4 {
                out[i] += g[i] * EPS[k];
            }
        }
        SpinorValue::new(out, self.frame_id)
    }

    pub fn twistor_residual(&self) -> TwistorResidual {
        let d = self.dirac();
        let mut per = Vec::with_capacity(DIM);
        let mut norms = [0.0; DIM];
        let mut scale: f64 = 0.0;
        for k in 0..DIM {
            let nab = self.cov_deriv(k);
            let gd = gamma_k(k, &d.w);
            let b: [Complex64; 4] = gd.map(|v| -v / N);
            let diff: [Complex64; 4] = std::array::from_fn(|i| nab.w[i] - b[i]);
            let (na, nb) = (nab.norm(), SpinorValue::new(b, self.frame_id).norm());
            let nd = diff.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            norms[k] = nd / (1.0 + na + nb);
            scale = scale.max(na);
            per.push(SpinorValue::new(diff, self.frame_id));
        }
        let max = norms.iter().cloned().fold(0.0, f64::max);
        TwistorResidual { per_direction: per, norms, max, grad_scale: scale, dirac_norm: d.norm() }
    }
}

/// Twistor operator `P_k = ∇_{e_k}φ + (1/n) e_k·Dφ` in every direction.
#[derive(Debug, Clone)]
pub struct TwistorResidual {
    pub per_direction: Vec<SpinorValue>,
    /// `‖P_k‖ / (1 + ‖∇_kφ‖ + ‖(1/n)e_k·Dφ‖)`.
    pub norms: [f64; DIM],
    pub max: f64,
    /// Largest `‖∇_{e_k}φ‖`.
    pub grad_scale: f64,
    pub dirac_norm: f64,
}

fn frame_for(field: &SpinorField, spec: &MetricSpec, p: &Point) -> Result<FrameJets> {
    if field.frame_id == FrameId::U {
        return Ok(FrameJets {
            dim: DIM,
            eps: EPS,
            v: std::array::from_fn(|i| {
                let mut v = [Jet::zero(); DIM];
                v[i] = Jet::one();
                v
            }),
        });
    }
    let a = spec.a.ok_or_else(|| Error::FrameMismatch {
        expected: "a metric of the a-family".into(),
        got: format!("{:?}", spec.family),
    })?;
    let f = if field.frame_id == FrameId::HTilde { frame_htilde(p, a)? } else { frame_eval(field.frame_id, p, a)? };
    Ok(f.as_frame_jets())
}

fn metric_for_spinors(spec: &MetricSpec, p: &Point) -> Result<MetricJets> {
    if spec.dim() != DIM {
        return Err(Error::Dimension { expected: DIM, got: spec.dim() });
    }
    let g = metric_at(spec, &p.seeded())?;
    let o = g.order().get().min(2) as u8;
    Ok(g.truncate(JetOrder::new(o)?))
}

/// Evaluates `field` at `p` with respect to `spec`.
pub fn spinor_eval(field: &SpinorField, spec: &MetricSpec, p: &Point) -> Result<SpinorEval> {
    let frame = frame_for(field, spec, p)?;
    let metric = metric_for_spinors(spec, p)?;
    let comps = field.components(p, spec.a.unwrap_or(1.0))?;
    SpinorEval::from_parts(field.frame_id, frame, metric, comps)
}

pub fn spin_connection(field: &SpinorField, spec: &MetricSpec, p: &Point) -> Result<[SpinMatrix; DIM]> {
    Ok(spinor_eval(field, spec, p)?.connection)
}

pub fn spinor_cov_deriv(field: &SpinorField, k: usize, spec: &MetricSpec, p: &Point) -> Result<SpinorValue> {
    if k >= DIM {
        return Err(Error::Domain(format!("direction {k} out of range")));
    }
    Ok(spinor_eval(field, spec, p)?.cov_deriv(k))
}

pub fn dirac(field: &SpinorField, spec: &MetricSpec, p: &Point) -> Result<SpinorValue> {
    Ok(spinor_eval(field, spec, p)?.dirac())
}

pub fn twistor_residual(field: &SpinorField, spec: &MetricSpec, p: &Point) -> Result<TwistorResidual> {
    Ok(spinor_eval(field, spec, p)?.twistor_residual())
}

/// Frame components `Vⁱ = εᵢ⟨φ, γᵢφ⟩` of the spinor square, with the reality check.
pub fn spinor_square_frame(w: &[Complex64; 4]) -> Result<[f64; DIM]> {
    let n2: f64 = w.iter().map(|c| c.norm_sqr()).sum();
    let mut out = [0.0; DIM];
    for (i, o) in out.iter_mut().enumerate() {
        let v = inner_raw(w, &gamma_k(i, w));
        if v.im.abs() > 1e-12 * (1.0 + n2) {
            return Err(Error::NonRealPairing(v.im));
        }
        *o = EPS[i] * v.re;
    }
    Ok(out)
}

/// Cartesian components of `V_φ` with `g(V_φ, X) = ⟨φ, X·φ⟩`.
pub fn spinor_square(phi: &SpinorValue, frame: &FrameJets) -> Result<[f64; DIM]> {
    let v = spinor_square_frame(&phi.w)?;
    let fv = frame.values();
    Ok(std::array::from_fn(|m| (0..DIM).map(|i| v[i] * fv[i][m]).sum()))
}

/// `V_φ` as jets in Cartesian components, for differentiation.
pub fn spinor_square_jets(ev: &SpinorEval) -> Result<VectorJet> {
    spinor_square_frame(&ev.value().w)?;
    let w = &ev.components;
    let g = gammas();
    let g0 = g[0];
    let mut vi = [Jet::zero(); DIM];
    for (i, out) in vi.iter_mut().enumerate() {
        // ⟨w, γᵢw⟩ = Σ conj((γ₀w)_a) (γᵢw)_a
        let gi = g[i];
        let mut acc = CJet::zero();
        for a in 0..4 {
            let mut l = CJet::zero();
            let mut r = CJet::zero();
            for b in 0..4 {
                if g0[(a, b)] != cz() {
                    l += w[b] * g0[(a, b)];
                }
                if gi[(a, b)] != cz() {
                    r += w[b] * gi[(a, b)];
                }
            }
            acc += l.conj() * r;
        }
        *out = acc.re() * EPS[i];
    }
    let mut out = [Jet::zero(); DIM];
    for (m, o) in out.iter_mut().enumerate() {
        for i in 0..DIM {
            *o += vi[i] * ev.frame.v[i][m];
        }
    }
    Ok(out)
}

/// `u = (r² − x₀²)(|b|² + |c|²)`, the length square of `ψ_bc`.
pub fn length_square_u(b: f64, c: f64, p: &Point) -> f64 {
    p.q() * (b * b + c * c)
}

/// The two sides `(−u·Ric⁰, (n−2)·Hess(u)⁰)` of the Einstein-rescaling
/// equation for `g_a`, as components in frame `e`, trace-free with respect to
/// `diag(ε)`. Curvature comes from the structure equations of `e`, which stay
/// well-conditioned near the outer boundary of `B_a`.
pub fn einstein_rescale_sides(b: f64, c: f64, a: f64, p: &Point) -> Result<SidePair> {
    if p.q() == 0.0 {
        return Err(Error::Singular("g_a is not C² on L_o".into()));
    }
    let frame = frame_eval(FrameId::E, p, a)?.as_frame_jets();
    let fc = cartan_curvature(&frame, 0)?;
    let u = cone_q(&p.seeded()) * (b * b + c * c);
    let ric0 = trace_free_frame(&fc.ricci(), &EPS, DIM);
    let h0 = trace_free_frame(&frame_hessian(&u, &frame, &fc, 0), &EPS, DIM);
    let lhs = std::array::from_fn(|i| std::array::from_fn(|j| -u.value * ric0[i][j]));
    let rhs = std::array::from_fn(|i| std::array::from_fn(|j| (N - 2.0) * h0[i][j]));
    Ok((lhs, rhs))
}

/// As `einstein_rescale_sides`, in coordinates with Levi-Civita Christoffel
/// symbols and trace-free parts with respect to `g_a`.
pub fn einstein_rescale_sides_coordinates(b: f64, c: f64, a: f64, p: &Point) -> Result<SidePair> {
    let x = p.seeded();
    let q = cone_q(&x);
    if q.value == 0.0 {
        return Err(Error::Singular("g_a is not C² on L_o".into()));
    }
    let spec = MetricSpec::ga(a);
    let g = metric_at(&spec, &x)?.truncate(JetOrder::new(2)?);
    let cb = curvature(&g)?;
    let u = q * (b * b + c * c);
    let ric0 = trace_free(&cb.ricci_value(), &g, &cb.ginv);
    let hess = hessian_scalar(&u, &cb.christoffel);
    let h0 = trace_free(&hess, &g, &cb.ginv);
    let lhs = std::array::from_fn(|i| std::array::from_fn(|j| -u.value * ric0[i][j]));
    let rhs = std::array::from_fn(|i| std::array::from_fn(|j| (N - 2.0) * h0[i][j]));
    Ok((lhs, rhs))
}

/// `−u·Ric⁰ − (n−2)·Hess(u)⁰` for `g_a`, trace-free parts with respect to `g_a`.
pub fn einstein_rescale_residual(b: f64, c: f64, a: f64, p: &Point) -> Result<[[f64; DIM]; DIM]> {
    let (lhs, rhs) = einstein_rescale_sides(b, c, a, p)?;
    Ok(std::array::from_fn(|i| std::array::from_fn(|j| lhs[i][j] - rhs[i][j])))
}

/// Deviation of `V_ψ` from being conformal Killing:
/// `L_V g − (2/n) div(V) g` for the spinor square of `field`.
pub fn conformal_killing_residual(field: &SpinorField, spec: &MetricSpec, p: &Point) -> Result<f64> {
    let ev = spinor_eval(field, spec, p)?;
    let v = spinor_square_jets(&ev)?;
    let (chr, _) = christoffel_with_inverse(&ev.metric)?;
    let div = divergence(&v, &chr).value;
    let l = lie_derivative_metric(&v, &ev.metric);
    let mut worst: f64 = 0.0;
    for i in 0..DIM {
        for j in 0..DIM {
            worst = worst.max((l[i][j] - 2.0 / N * div * ev.metric.g[i][j].value).abs());
        }
    }
    Ok(worst)
}

/// One essentiality sample: spinor square of `Dψ_bc` against `(n/2)·grad(div V_ψ)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EssentialitySample {
    pub point: Point,
    pub v_dpsi: [f64; DIM],
    pub rhs: [f64; DIM],
}

/// Result of probing the essentiality identity at radius `ε`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EssentialityProbe {
    pub eps: f64,
    pub samples: Vec<EssentialitySample>,
    /// Sign `s` with `V_{Dψ} = s·(n/2)·grad(div V_ψ)` fixed by the flat oracle.
    pub sign: f64,
    /// `max |V_{Dψ} − s·rhs|` over the samples.
    pub max_difference: f64,
    /// `min ‖V_{Dψ}‖` over the samples.
    pub min_norm: f64,
}

/// Unit directions used by the essentiality probe: two inside `L`, three in `B_a`.
pub const PROBE_DIRECTIONS: [[f64; DIM]; 5] = [
    [0.9, 0.3, 0.2, -0.1, 0.2],
    [-0.8, 0.2, -0.3, 0.3, 0.1],
    [0.3, 0.8, 0.4, -0.2, 0.3],
    [-0.2, -0.5, 0.6, 0.5, -0.3],
    [0.1, 0.3, -0.4, 0.7, 0.5],
];

/// The sign relating `V_{Dψ}` and `(n/2)·grad(div V_ψ)` in flat space, from
/// `ψ_{w₀}` with `w₀ = (b, −c, 0, 0)`.
pub fn flat_essentiality_sign(b: f64, c: f64) -> Result<f64> {
    let w0 = [Complex64::new(b, 0.0), Complex64::new(-c, 0.0), cz(), cz()];
    let field = SpinorField::psi_w0(w0);
    let p = Point::new([0.0; DIM]);
    let ev = spinor_eval(&field, &MetricSpec::minkowski(), &p)?;
    let vd = spinor_square(&ev.dirac(), &ev.frame)?;
    // div V_ψ = −10 x₀ (b² + c²) for the flat twistor, so grad points along ±∂₀.
    let probe = Point::new([0.1, 0.2, -0.1, 0.3, 0.05]);
    let evp = spinor_eval(&field, &MetricSpec::minkowski(), &probe)?;
    let v = spinor_square_jets(&evp)?;
    let (chr, ginv) = christoffel_with_inverse(&evp.metric)?;
    let div = divergence(&v, &chr);
    let rhs = gradient(&div, &ginv, DIM, 0).map(|g| g * N / 2.0);
    let dot: f64 = (0..DIM).map(|i| vd[i] * rhs[i]).sum();
    if dot == 0.0 {
        return Err(Error::Domain("flat essentiality oracle is degenerate".into()));
    }
    Ok(dot.signum())
}

/// Compares `V_{Dψ_bc}` with `(n/2)·grad(div V_{ψ_bc})` under `g_a` at points of norm `eps`.
pub fn essentiality_probe(b: f64, c: f64, a: f64, eps: f64) -> Result<EssentialityProbe> {
    let sign = flat_essentiality_sign(b, c)?;
    let spec = MetricSpec::ga(a);
    let field = SpinorField::psi_bc(b, c);
    let mut samples = Vec::with_capacity(PROBE_DIRECTIONS.len());
    let mut max_difference: f64 = 0.0;
    let mut min_norm = f64::INFINITY;
    for d in PROBE_DIRECTIONS {
        let n = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        let p = Point::new(d.map(|v| v * eps / n));
        let ev = spinor_eval(&field, &spec, &p)?;
        let v_dpsi = spinor_square(&ev.dirac(), &ev.frame)?;
        let v = spinor_square_jets(&ev)?;
        let (chr, ginv) = christoffel_with_inverse(&ev.metric)?;
        let div = divergence(&v, &chr);
        let rhs = gradient(&div, &ginv, DIM, 0).map(|g| g * N / 2.0);
        for i in 0..DIM {
            max_difference = max_difference.max((v_dpsi[i] - sign * rhs[i]).abs());
        }
        min_norm = min_norm.min(v_dpsi.iter().map(|v| v * v).sum::<f64>().sqrt());
        samples.push(EssentialitySample { point: p, v_dpsi, rhs });
    }
    Ok(EssentialityProbe { eps, samples, sign, max_difference, min_norm })
}

/// Whether a metric family admits the spinor constructions of this module.
pub fn supports_spinors(spec: &MetricSpec) -> bool {
    matches!(spec.family, MetricFamily::Minkowski | MetricFamily::Ga | MetricFamily::GaTilde)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const A: f64 = 1.0;

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn constant_spinor_is_parallel_in_flat_space() {
        let f = SpinorField::constant([c(1.0), c(0.5), c(-0.2), c(0.3)], FrameId::U);
        let p = Point::new([0.1, 0.2, 0.3, 0.4, 0.5]);
        let t = twistor_residual(&f, &MetricSpec::minkowski(), &p).unwrap();
        assert_eq!(t.max, 0.0);
        assert_eq!(t.dirac_norm, 0.0);
    }

    #[test]
    fn flat_twistor_has_constant_dirac() {
        let (b, cc) = (0.7, -0.4);
        let w0 = [c(b), c(-cc), c(0.0), c(0.0)];
        let f = SpinorField::psi_w0(w0);
        let p = Point::new([0.3, -0.2, 0.1, 0.5, 0.2]);
        let ev = spinor_eval(&f, &MetricSpec::minkowski(), &p).unwrap();
        assert!(ev.twistor_residual().max < 1e-14);
        let d = ev.dirac();
        for i in 0..4 {
            assert_relative_eq!(d.w[i].re, -5.0 * w0[i].re, epsilon = 1e-13);
        }
    }

    #[test]
    fn psi_bc_is_twistor_in_ba_and_on_cone() {
        let f = SpinorField::psi_bc(0.8, 0.6);
        for x in [[0.1, 0.5, 0.2, -0.3, 0.1], [1.0, 0.3, 0.2, -0.1, 0.4]] {
            let t = twistor_residual(&f, &MetricSpec::ga(A), &Point::new(x)).unwrap();
            assert!(t.max < 1e-12, "{x:?}: {}", t.max);
        }
    }

    #[test]
    fn psi_bc_in_htilde_is_twistor() {
        let f = SpinorField::psi_bc_htilde(0.8, 0.6);
        let t = twistor_residual(&f, &MetricSpec::ga(A), &Point::new([0.1, 0.5, 0.2, -0.3, 0.1])).unwrap();
        assert!(t.max < 1e-12, "{}", t.max);
    }

    #[test]
    fn nu_bc_is_parallel() {
        let f = SpinorField::nu_bc(0.8, 0.6);
        let ev = spinor_eval(&f, &MetricSpec::ga_tilde(A), &Point::new([0.1, 0.5, 0.2, -0.3, 0.1])).unwrap();
        for k in 0..5 {
            assert!(ev.cov_deriv(k).norm() < 1e-12);
        }
    }

    #[test]
    fn spinor_square_of_psi_bc() {
        let (b, cc) = (0.8, 0.6);
        let p = Point::new([0.1, 0.5, 0.2, -0.3, 0.1]);
        let ev = spinor_eval(&SpinorField::psi_bc(b, cc), &MetricSpec::ga(A), &p).unwrap();
        let v = spinor_square(&ev.value(), &ev.frame).unwrap();
        let r = p.r();
        let x0 = p.x0();
        let s = b * b + cc * cc;
        assert_relative_eq!(v[0], -s * (r * r + x0 * x0), epsilon = 1e-12);
        for m in 1..5 {
            assert_relative_eq!(v[m], -s * 2.0 * x0 * p.x[m], epsilon = 1e-12);
        }
    }

    #[test]
    fn length_square_example() {
        assert_eq!(length_square_u(1.0, 1.0, &Point::new([1.0, 2.0, 0.0, 0.0, 0.0])), 6.0);
    }

    #[test]
    fn frame_change_examples() {
        let p = Point::new([0.1, 0.5, 0.2, -0.3, 0.1]);
        let (b, cc) = (0.8, 0.6);
        let w = SpinorValue::new([c(-p.x0() * b), c(p.x0() * cc), c(p.r() * b), c(p.r() * cc)], FrameId::ETilde);
        let nu = change_spinor_frame(&w, FrameId::F, &p, A).unwrap();
        let scale = (1.0 / p.q()).sqrt();
        assert!(nu.w[0].norm() * scale < 1e-14 && nu.w[1].norm() * scale < 1e-14);
        assert_relative_eq!(nu.w[2].re * scale, b, epsilon = 1e-13);
        assert_relative_eq!(nu.w[3].re * scale, cc, epsilon = 1e-13);
        let back = change_spinor_frame(&nu, FrameId::ETilde, &p, A).unwrap();
        assert!(back.sub(&w).unwrap().norm() < 1e-13);
        assert!(matches!(change_spinor_frame(&w, FrameId::HTilde, &p, A), Err(Error::UnknownTransition { .. })));
    }
}
