//! Pointwise evaluation of the frames `e`, `f`, `ẽ`, `u`, `h̃` and of the
//! vector and spin transformation matrices between them.
//!
//! Frames are returned in Cartesian components of the standard coordinates.
//! `f` and `ẽ` are built in `Ψ`-coordinates `y = Ψ(x)` and pushed forward
//! through the Jacobian of `Ψ`. A frame transforms as `frame' = frame · M`,
//! i.e. `frame'_j = Σᵢ frameᵢ M_ij`.

use num_complex::Complex64;

use crate::clifford::{FrameId, SpinMatrix, EPS};
use crate::curvature::FrameJets;
use crate::geometry::{
    beta, classify, cone_q, field_t, metric_at, psi_jacobian_at, psi_jets, radial_r, ro_squared, sigma_duals,
    MetricJets, MetricSpec, Point, RegionTag, VectorJet,
};
use crate::jets::{CJet, Jet, JetOrder, DIM};
use crate::{Error, Result};

/// A frame evaluated at a point.
#[derive(Debug, Clone)]
pub struct FrameValue {
    pub id: FrameId,
    pub point: Point,
    /// `vectors[i][m]` is Cartesian component `m` of the `i`-th frame vector.
    pub vectors: [VectorJet; DIM],
    /// The metric for which the frame is orthonormal.
    pub metric_spec: MetricSpec,
}

impl FrameValue {
    pub fn values(&self) -> [[f64; DIM]; DIM] {
        std::array::from_fn(|i| std::array::from_fn(|m| self.vectors[i][m].value))
    }

    pub fn order(&self) -> JetOrder {
        self.vectors.iter().flatten().map(|j| j.order()).min().unwrap_or(JetOrder::MAX)
    }

    pub fn as_frame_jets(&self) -> FrameJets {
        FrameJets { dim: DIM, eps: EPS, v: self.vectors }
    }

    /// Gram matrix under `metric_spec` at the evaluation point.
    pub fn gram(&self) -> Result<[[f64; DIM]; DIM]> {
        let g = metric_at(&self.metric_spec, &self.point.seeded())?;
        Ok(crate::curvature::gram(&self.as_frame_jets(), &g))
    }

    /// Largest deviation of the Gram matrix from `diag(−1,1,1,1,1)`.
    pub fn gram_residual(&self) -> Result<f64> {
        let gm = self.gram()?;
        let mut worst: f64 = 0.0;
        for i in 0..DIM {
            for j in 0..DIM {
                let e = if i == j { EPS[i] } else { 0.0 };
                worst = worst.max((gm[i][j] - e).abs());
            }
        }
        Ok(worst)
    }

    /// `frame · M` for a real matrix of jets.
    pub fn times(&self, m: &[[Jet; DIM]; DIM], id: FrameId) -> FrameValue {
        let mut out = [[Jet::zero(); DIM]; DIM];
        for (j, v) in out.iter_mut().enumerate() {
            for (c, comp) in v.iter_mut().enumerate() {
                let mut acc = Jet::zero();
                for i in 0..DIM {
                    acc += self.vectors[i][c] * m[i][j];
                }
                *comp = acc;
            }
        }
        FrameValue { id, point: self.point, vectors: out, metric_spec: self.metric_spec }
    }
}

/// Vector and spin transformation matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransformId {
    G,
    GTilde,
    Q,
    QTilde,
    Kappa,
    KappaTilde,
    E01,
}

#[derive(Debug, Clone)]
pub enum TransformMatrix {
    Vector(Box<[[Jet; DIM]; DIM]>),
    Spin(Box<[[CJet; 4]; 4]>),
}

#[derive(Debug, Clone)]
pub struct TransformValue {
    pub id: TransformId,
    pub matrix: TransformMatrix,
}

impl TransformValue {
    pub fn vector_value(&self) -> Option<[[f64; DIM]; DIM]> {
        match &self.matrix {
            TransformMatrix::Vector(m) => Some(std::array::from_fn(|i| std::array::from_fn(|j| m[i][j].value))),
            TransformMatrix::Spin(_) => None,
        }
    }

    pub fn spin_value(&self) -> Option<SpinMatrix> {
        match &self.matrix {
            TransformMatrix::Spin(m) => Some(SpinMatrix::from_fn(|i, j| m[i][j].value)),
            TransformMatrix::Vector(_) => None,
        }
    }

    pub fn vector_jets(&self) -> Option<&[[Jet; DIM]; DIM]> {
        match &self.matrix {
            TransformMatrix::Vector(m) => Some(m),
            TransformMatrix::Spin(_) => None,
        }
    }

    pub fn spin_jets(&self) -> Option<&[[CJet; 4]; 4]> {
        match &self.matrix {
            TransformMatrix::Spin(m) => Some(m),
            TransformMatrix::Vector(_) => None,
        }
    }
}

fn unit_vector(i: usize) -> VectorJet {
    let mut v = [Jet::zero(); DIM];
    v[i] = Jet::one();
    v
}

fn scaled(v: &VectorJet, s: Jet) -> VectorJet {
    v.map(|c| c * s)
}

fn combo(a: &VectorJet, sa: Jet, b: &VectorJet, sb: Jet) -> VectorJet {
    std::array::from_fn(|m| a[m] * sa + b[m] * sb)
}

fn truncate_vectors(v: [VectorJet; DIM], order: JetOrder) -> [VectorJet; DIM] {
    v.map(|row| row.map(|c| c.truncate(order)))
}

fn check_a(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("parameter a must be positive, got {a}")))
    }
}

fn in_closure_of_ba(p: &Point, a: f64) -> Result<()> {
    if !p.is_finite() {
        return Err(Error::Domain("non-finite point".into()));
    }
    if classify(p, a).tag == RegionTag::OutsideClosure {
        return Err(Error::Domain(format!("point has a·r_o = {:.6} ≥ 1", a * p.ro())));
    }
    Ok(())
}

/// The coefficient `a⁴r_o²/(1+β)`.
fn boost_coefficient(x: &[Jet; DIM], a: f64) -> Result<Jet> {
    let ro2 = ro_squared(x)?;
    let b = beta(x, a)?;
    Ok(ro2 * a.powi(4) / (b + 1.0))
}

fn frame_e_at(x: &[Jet; DIM], a: f64) -> Result<[VectorJet; DIM]> {
    let q = cone_q(x);
    let r = radial_r(x)?;
    let rinv = r.recip()?;
    let duals = sigma_duals(x);
    let dr: VectorJet = [Jet::zero(), x[1] * rinv, x[2] * rinv, x[3] * rinv, x[4] * rinv];
    if q.value <= 0.0 {
        let v = [unit_vector(0), dr, scaled(&duals[0], rinv), scaled(&duals[1], rinv), scaled(&duals[2], rinv)];
        let order = if q.value == 0.0 { JetOrder::new(1)? } else { JetOrder::MAX };
        return Ok(truncate_vectors(v, order));
    }
    let c = boost_coefficient(x, a)?;
    let b = beta(x, a)?;
    let t = field_t(x)?;
    let r2 = r.square();
    let c0 = -(x[0] * rinv * c * 2.0);
    let c1 = (r2 + x[0].square()) * c / r2;
    Ok([
        combo(&unit_vector(0), Jet::one(), &t, c0),
        combo(&dr, Jet::one(), &t, c1),
        scaled(&duals[0], rinv),
        scaled(&duals[1], rinv),
        scaled(&duals[2], (r * b).recip()?),
    ])
}

/// Frame `f` in closed form. With `s = −x₀/q` and `R = r/q`, pushing
/// `{−∂_s, −β∂_R, X₁/R, X₂/R, X₃/(Rβ)}` forward by `Ψ` gives
/// `{(r² + x₀²)∂₀ + 2x₀xᵢ∂ᵢ, −βT, (q/r)X₁, (q/r)X₂, (q/(rβ))X₃}`, which avoids
/// the large `Ψ`-coordinates near `L_o`.
fn frame_f_at(x: &[Jet; DIM], a: f64) -> Result<[VectorJet; DIM]> {
    let q = cone_q(x);
    if q.value == 0.0 {
        return Err(Error::Domain("frames f and ẽ are not defined on L_o".into()));
    }
    let r = radial_r(x)?;
    let b = beta(x, a)?;
    let t = field_t(x)?;
    let w = r.square() + x[0].square();
    let two_x0 = x[0] * 2.0;
    let f0: VectorJet = [w, two_x0 * x[1], two_x0 * x[2], two_x0 * x[3], two_x0 * x[4]];
    let qr = q / r;
    let duals = sigma_duals(x);
    Ok([f0, scaled(&t, -b), scaled(&duals[0], qr), scaled(&duals[1], qr), scaled(&duals[2], qr / b)])
}

/// Frame `f` built in `Ψ`-coordinates and pushed forward numerically; an
/// independent route to the closed form used by `frame_eval`.
pub fn frame_f_via_psi(p: &Point, a: f64) -> Result<FrameJets> {
    check_a(a)?;
    in_closure_of_ba(p, a)?;
    let v = frame_in_psi_coords(&p.seeded(), a, PsiFrame::F)?;
    Ok(FrameJets { dim: DIM, eps: EPS, v })
}

/// Which of `f` or `ẽ` to build in `Ψ`-coordinates.
#[derive(Clone, Copy, PartialEq, Eq)]
enum PsiFrame {
    F,
    ETilde,
}

fn frame_in_psi_coords(x: &[Jet; DIM], a: f64, which: PsiFrame) -> Result<[VectorJet; DIM]> {
    let q = cone_q(x);
    if q.value == 0.0 {
        return Err(Error::Domain("frames f and ẽ are not defined on L_o".into()));
    }
    let y = psi_jets(x)?;
    let sign = q.value.signum();
    let ry = (y[1].square() + y[2].square() + y[3].square() + y[4].square()).sqrt()?;
    if ry.value == 0.0 {
        return Err(Error::Domain("frames f and ẽ need r > 0".into()));
    }
    let big_r = ry * sign;
    let rinv = big_r.recip()?;
    let s = y[0];
    let b = beta(x, a)?;
    let ds = unit_vector(0);
    let d_r: VectorJet = [Jet::zero(), y[1] * rinv, y[2] * rinv, y[3] * rinv, y[4] * rinv];
    let duals = sigma_duals(&y);
    let tail = [scaled(&duals[0], rinv), scaled(&duals[1], rinv), scaled(&duals[2], (big_r * b).recip()?)];
    let (v0, v1) = match which {
        PsiFrame::F => (scaled(&ds, -Jet::one()), scaled(&d_r, -b)),
        PsiFrame::ETilde => {
            let r2 = big_r.square();
            let s2 = s.square();
            let inv = -(r2 - s2).recip()?;
            let srr = s * big_r * 2.0;
            (combo(&ds, (s2 + r2) * inv, &d_r, srr * b * inv), combo(&ds, srr * inv, &d_r, (s2 + r2) * b * inv))
        }
    };
    let yv = [v0, v1, tail[0], tail[1], tail[2]];
    // x = Ψ(y), so Cartesian components are DΨ(y) applied to the y-components.
    let jac = psi_jacobian_at(&y)?;
    Ok(yv.map(|v| {
        std::array::from_fn(|m| {
            let mut acc = Jet::zero();
            for k in 0..DIM {
                acc += jac[m][k] * v[k];
            }
            acc
        })
    }))
}

/// `(k, q)` of the boost `Q` at a jet point, with `h₀ = k e₀ + q e₁` parallel to `∂/∂x₀`.
pub fn boost_kq_at(x: &[Jet; DIM], a: f64) -> Result<(Jet, Jet)> {
    let qc = cone_q(x);
    if qc.value <= 0.0 {
        let order = if qc.value == 0.0 { JetOrder::new(1)? } else { JetOrder::MAX };
        return Ok((Jet::one().truncate(order), Jet::zero().truncate(order)));
    }
    let ro2 = ro_squared(x)?;
    let b = beta(x, a)?;
    let b2 = b.square();
    let rho = ro2 * a.powi(4) / b2;
    let den = 1.0 - x[0].square() * rho * 4.0;
    if den.value <= 0.0 {
        return Err(Error::CaViolation(format!("4x₀²ρ = {:.6} ≥ 1", 1.0 - den.value)));
    }
    let pref = ((ro2 * rho + 1.0) / den).sqrt()?;
    let r = radial_r(x)?;
    let r2 = r.square();
    let w = r2 + x[0].square();
    let c = b2 * rho / (b + 1.0);
    let k = pref * (1.0 - w.square() * c / r2);
    let q = -(pref * x[0] * w * c * 2.0 / r);
    if k.value <= 0.0 {
        return Err(Error::CaViolation(format!("k = {:.6} ≤ 0", k.value)));
    }
    Ok((k, q))
}

/// `(k, q)` values at a point.
pub fn boost_kq(p: &Point, a: f64) -> Result<(f64, f64)> {
    check_a(a)?;
    in_closure_of_ba(p, a)?;
    let (k, q) = boost_kq_at(&p.seeded(), a)?;
    Ok((k.value, q.value))
}

/// Whether `p` lies in `C_a`.
pub fn in_ca(p: &Point, a: f64) -> bool {
    boost_kq(p, a).is_ok()
}

fn htilde_at(x: &[Jet; DIM], p: &Point, a: f64) -> Result<[VectorJet; DIM]> {
    let (k, qq) = boost_kq_at(x, a)?;
    let qc = cone_q(x);
    let u: [VectorJet; DIM] = std::array::from_fn(unit_vector);
    if qc.value <= 0.0 {
        // Q = 1 and e·G = u near every point of L∖L_o; C¹ only on L_o and at the origin.
        let order = if qc.value == 0.0 || p.norm() == 0.0 { JetOrder::new(1)? } else { JetOrder::MAX };
        return Ok(truncate_vectors(u, order));
    }
    let e = frame_e_at(x, a)?;
    let r = radial_r(x)?;
    let rinv = r.recip()?;
    let c = boost_coefficient(x, a)?;
    let b = beta(x, a)?;
    let t = field_t(x)?;
    let c1 = (r.square() + x[0].square()) * c / r.square();
    let dr: VectorJet = [Jet::zero(), x[1] * rinv, x[2] * rinv, x[3] * rinv, x[4] * rinv];
    let x3 = sigma_duals(x)[2];
    let h0 = combo(&e[0], k, &e[1], qq);
    // Row 4 of G is (0, −x₄, −x₃, x₂, x₁)/r.
    let g4 = [Jet::zero(), -x[4] * rinv, -x[3] * rinv, x[2] * rinv, x[1] * rinv];
    let twist = (b.recip()? - 1.0) * rinv;
    let mut out = [h0, u[1], u[2], u[3], u[4]];
    for (j, hj) in out.iter_mut().enumerate().skip(1) {
        let xr = x[j] * rinv;
        for m in 0..DIM {
            let bracket = e[0][m] * qq + dr[m] * (k - 1.0) + t[m] * k * c1;
            hj[m] = u[j][m] + xr * bracket + g4[j] * x3[m] * twist;
        }
    }
    Ok(out)
}

/// The orthonormal Eguchi–Hanson frame `{−β∂_R, X₁/R, X₂/R, X₃/(Rβ)}` at the
/// spatial part of `p`, as a four-dimensional frame in the coordinates `x₁…x₄`.
pub fn frame_eh(p: &Point, a: f64) -> Result<FrameJets> {
    check_a(a)?;
    let x = p.seeded();
    let r = radial_r(&x)?;
    if r.value <= a {
        return Err(Error::Domain(format!("Eguchi-Hanson frame needs R > a, got R = {}", r.value)));
    }
    let rinv = r.recip()?;
    let b = (1.0 - (r.square().square()).recip()? * a.powi(4)).sqrt()?;
    let rb_inv = (r * b).recip()?;
    let z = Jet::zero();
    let f1 = [x[1], x[2], x[3], x[4], z].map(|c| -(c * b * rinv));
    let f2 = [-x[2], x[1], -x[4], x[3], z].map(|c| c * rinv);
    let f3 = [-x[3], x[4], x[1], -x[2], z].map(|c| c * rinv);
    let f4 = [-x[4], -x[3], x[2], x[1], z].map(|c| c * rb_inv);
    Ok(FrameJets { dim: 4, eps: [1.0; DIM], v: [f1, f2, f3, f4, [z; DIM]] })
}

/// Evaluates one of the frames at `p`.
pub fn frame_eval(id: FrameId, p: &Point, a: f64) -> Result<FrameValue> {
    check_a(a)?;
    in_closure_of_ba(p, a)?;
    let x = p.seeded();
    let (vectors, metric_spec) = match id {
        FrameId::E => (frame_e_at(&x, a)?, MetricSpec::ga(a)),
        FrameId::F => (frame_f_at(&x, a)?, MetricSpec::ga_tilde(a)),
        FrameId::ETilde => (frame_in_psi_coords(&x, a, PsiFrame::ETilde)?, MetricSpec::ga_tilde(a)),
        FrameId::U => (std::array::from_fn(unit_vector), MetricSpec::minkowski()),
        FrameId::HTilde => (htilde_at(&x, p, a)?, MetricSpec::ga(a)),
        FrameId::Custom => {
            return Err(Error::Domain("custom frames are built by the caller".into()));
        }
    };
    Ok(FrameValue { id, point: *p, vectors, metric_spec })
}

/// The continuous frame `h̃ = e·(QG)` on `C_a`, including the axis.
pub fn frame_htilde(p: &Point, a: f64) -> Result<FrameValue> {
    frame_eval(FrameId::HTilde, p, a)
}

fn cj(re: Jet, im: Jet) -> CJet {
    re.to_complex() + im.to_complex() * Complex64::i()
}

fn real_cj(re: Jet) -> CJet {
    re.to_complex()
}

/// Evaluates one of the transformation matrices at `p`.
pub fn transform_eval(id: TransformId, p: &Point, a: f64) -> Result<TransformValue> {
    check_a(a)?;
    in_closure_of_ba(p, a)?;
    let x = p.seeded();
    let matrix = match id {
        TransformId::E01 => {
            let mut m = [[Jet::zero(); DIM]; DIM];
            m[0][1] = -Jet::one();
            m[1][0] = -Jet::one();
            TransformMatrix::Vector(Box::new(m))
        }
        TransformId::G => {
            let r = radial_r(&x)?;
            let rinv = r.recip()?;
            let z = Jet::zero();
            let rows: [[Jet; DIM]; DIM] = [
                [Jet::one(), z, z, z, z],
                [z, x[1], x[2], x[3], x[4]],
                [z, -x[2], x[1], -x[4], x[3]],
                [z, -x[3], x[4], x[1], -x[2]],
                [z, -x[4], -x[3], x[2], x[1]],
            ];
            let m =
                std::array::from_fn(|i| std::array::from_fn(|j| if i == 0 { rows[i][j] } else { rows[i][j] * rinv }));
            TransformMatrix::Vector(Box::new(m))
        }
        TransformId::GTilde => {
            let r = radial_r(&x)?;
            let rinv = r.recip()?;
            let z = CJet::zero();
            let one = CJet::one();
            let m = [
                [one, z, z, z],
                [z, one, z, z],
                [z, z, cj(x[1] * rinv, x[2] * rinv), cj(x[3] * rinv, x[4] * rinv)],
                [z, z, cj(-x[3] * rinv, x[4] * rinv), cj(x[1] * rinv, -x[2] * rinv)],
            ];
            TransformMatrix::Spin(Box::new(m))
        }
        TransformId::Q => {
            let (k, q) = boost_kq_at(&x, a)?;
            let mut m = [[Jet::zero(); DIM]; DIM];
            m[0][0] = k;
            m[1][1] = k;
            m[0][1] = q;
            m[1][0] = q;
            for (i, row) in m.iter_mut().enumerate().skip(2) {
                row[i] = Jet::one();
            }
            TransformMatrix::Vector(Box::new(m))
        }
        TransformId::QTilde => {
            let (k, q) = boost_kq_at(&x, a)?;
            let ch = ((k + 1.0) * 0.5).sqrt()?;
            let sh = q / ((k + 1.0) * 2.0).sqrt()?;
            let z = CJet::zero();
            let (c, s) = (real_cj(ch), real_cj(sh));
            let m = [[c, z, -s, z], [z, c, z, s], [-s, z, c, z], [z, s, z, c]];
            TransformMatrix::Spin(Box::new(m))
        }
        TransformId::Kappa => {
            let qc = cone_q(&x);
            if qc.value == 0.0 {
                return Err(Error::Domain("κ is not defined on L_o".into()));
            }
            radial_r(&x)?;
            let (s, big_r) = s_and_r(&x)?;
            let d = big_r.square() - s.square();
            let inv = d.recip()?;
            let mut m = [[Jet::zero(); DIM]; DIM];
            m[0][0] = (s.square() + big_r.square()) * inv;
            m[1][1] = m[0][0];
            m[0][1] = s * big_r * inv * 2.0;
            m[1][0] = m[0][1];
            for (i, row) in m.iter_mut().enumerate().skip(2) {
                row[i] = Jet::one();
            }
            TransformMatrix::Vector(Box::new(m))
        }
        TransformId::KappaTilde => {
            let qc = cone_q(&x);
            if qc.value <= 0.0 {
                return Err(Error::Domain("κ̃ needs R² − s² > 0, i.e. a point of B_a".into()));
            }
            radial_r(&x)?;
            let (s, big_r) = s_and_r(&x)?;
            let inv = (big_r.square() - s.square()).sqrt()?.recip()?;
            let (rr, ss) = (real_cj(big_r * inv), real_cj(s * inv));
            let z = CJet::zero();
            let m = [[rr, z, -ss, z], [z, rr, z, ss], [-ss, z, rr, z], [z, ss, z, rr]];
            TransformMatrix::Spin(Box::new(m))
        }
    };
    Ok(TransformValue { id, matrix })
}

/// `s = y₀` and the signed radius `R = r/(r² − x₀²)` as jets in `x`.
pub fn s_and_r(x: &[Jet; DIM]) -> Result<(Jet, Jet)> {
    let q = cone_q(x);
    if q.value == 0.0 {
        return Err(Error::Singular("Ψ-coordinates are singular on L_o".into()));
    }
    let qinv = q.recip()?;
    Ok((-(x[0] * qinv), radial_r(x)? * qinv))
}

/// The boost parameter `t = ln((R − s)/(R + s))` of `κ`, defined on `B_a`.
pub fn kappa_parameter(p: &Point) -> Result<f64> {
    let q = p.q();
    if q <= 0.0 {
        return Err(Error::Domain("t is defined only on B_a".into()));
    }
    let (s, big_r) = (-p.x0() / q, p.r() / q);
    Ok(((big_r - s) / (big_r + s)).ln())
}

/// Orthonormalizes `vectors` for `g` with signature `eps` by Gram–Schmidt on jets.
pub fn gram_schmidt(vectors: &[VectorJet; DIM], g: &MetricJets, eps: &[f64; DIM]) -> Result<[VectorJet; DIM]> {
    let n = g.dim;
    let mut out = *vectors;
    for i in 0..n {
        let mut v = vectors[i];
        for j in 0..i {
            let proj = g.pair(&v, &out[j]) * eps[j];
            for m in 0..DIM {
                v[m] -= proj * out[j][m];
            }
        }
        let norm2 = g.pair(&v, &v) * eps[i];
        if norm2.value <= 0.0 {
            return Err(Error::FrameMismatch {
                expected: format!("vector {i} with g(v,v)·ε > 0"),
                got: format!("{:.3e}", norm2.value),
            });
        }
        let inv = norm2.sqrt()?.recip()?;
        out[i] = v.map(|c| c * inv);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::lambda_check;
    use approx::assert_relative_eq;

    const A: f64 = 1.0;

    fn pt(x: [f64; 5]) -> Point {
        Point::new(x)
    }

    #[test]
    fn e_on_cone_interior_is_coordinate_frame() {
        let p = pt([1.0, 0.3, 0.2, -0.1, 0.4]);
        let e = frame_eval(FrameId::E, &p, A).unwrap().values();
        assert_eq!(e[0], [1.0, 0.0, 0.0, 0.0, 0.0]);
        let r = p.r();
        for m in 1..5 {
            assert_relative_eq!(e[1][m], p.x[m] / r, epsilon = 1e-15);
        }
    }

    #[test]
    fn frames_are_orthonormal_in_ba() {
        let p = pt([0.1, 0.5, 0.2, -0.3, 0.1]);
        for id in [FrameId::E, FrameId::F, FrameId::ETilde, FrameId::HTilde] {
            let f = frame_eval(id, &p, A).unwrap();
            assert!(f.gram_residual().unwrap() < 1e-12, "{id}");
        }
    }

    #[test]
    fn k_and_q_lie_on_hyperbola() {
        for x in [[0.1, 0.5, 0.2, -0.3, 0.1], [-0.3, 0.4, 0.1, 0.2, 0.0], [0.2, 0.6, 0.0, 0.0, 0.1]] {
            let (k, q) = boost_kq(&pt(x), A).unwrap();
            assert_relative_eq!(k * k - q * q, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn q_is_identity_on_cone() {
        let p = pt([1.0, 0.3, 0.2, -0.1, 0.4]);
        let m = transform_eval(TransformId::Q, &p, A).unwrap().vector_value().unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(m[i][j], if i == j { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn htilde_on_axis_and_cone_is_standard() {
        for x in [[0.5, 0.0, 0.0, 0.0, 0.0], [1.0, 0.3, 0.2, -0.1, 0.4], [0.0; 5]] {
            let h = frame_htilde(&pt(x), A).unwrap().values();
            for i in 0..5 {
                for m in 0..5 {
                    assert_relative_eq!(h[i][m], if i == m { 1.0 } else { 0.0 }, epsilon = 1e-15);
                }
            }
        }
    }

    #[test]
    fn htilde_matches_e_times_qg() {
        let p = pt([0.1, 0.5, 0.2, -0.3, 0.1]);
        let e = frame_eval(FrameId::E, &p, A).unwrap();
        let q = transform_eval(TransformId::Q, &p, A).unwrap();
        let g = transform_eval(TransformId::G, &p, A).unwrap();
        let h = e.times(q.vector_jets().unwrap(), FrameId::Custom).times(g.vector_jets().unwrap(), FrameId::Custom);
        let ht = frame_htilde(&p, A).unwrap();
        for i in 0..5 {
            for m in 0..5 {
                assert_relative_eq!(h.vectors[i][m].value, ht.vectors[i][m].value, epsilon = 1e-13);
                for v in 0..5 {
                    assert_relative_eq!(h.vectors[i][m].grad[v], ht.vectors[i][m].grad[v], epsilon = 1e-11);
                }
            }
        }
    }

    #[test]
    fn spin_lifts_cover_vector_transforms() {
        let p = pt([0.1, 0.5, 0.2, -0.3, 0.1]);
        for (sid, vid) in [
            (TransformId::KappaTilde, TransformId::Kappa),
            (TransformId::QTilde, TransformId::Q),
            (TransformId::GTilde, TransformId::G),
        ] {
            let s = transform_eval(sid, &p, A).unwrap().spin_value().unwrap();
            let m = transform_eval(vid, &p, A).unwrap().vector_value().unwrap();
            let l = lambda_check(&s).unwrap();
            for i in 0..5 {
                for j in 0..5 {
                    assert_relative_eq!(l[i][j], m[i][j], epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn ca_violation_far_from_cone() {
        // Near the outer boundary of B_a with large |x₀| the boost degenerates.
        let p = pt([2.0, 2.5, 0.0, 0.0, 0.0]);
        assert!(p.ro() < 1.0);
        assert!(matches!(boost_kq(&p, A), Err(Error::CaViolation(_))));
    }

    #[test]
    fn gram_schmidt_orthonormalizes() {
        let p = pt([0.1, 0.5, 0.2, -0.3, 0.1]);
        let g = metric_at(&MetricSpec::ga(A), &p.seeded()).unwrap();
        let u: [VectorJet; 5] = std::array::from_fn(unit_vector);
        let v = gram_schmidt(&u, &g, &EPS).unwrap();
        let fj = FrameJets { dim: 5, eps: EPS, v };
        assert!(crate::curvature::gram_residual(&fj, &g) < 1e-13);
    }
}
