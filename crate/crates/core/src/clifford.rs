//! The Cl(1,4) representation on C⁴, Clifford multiplication, the spinor
//! inner product and spin-group elements.
//!
//! `γ₀² = +1` and `γᵢ² = −1` for `i = 1..4`, so for any vector
//! `X·X·w = −g(X,X)·w`. The inner product is `⟨φ,ψ⟩ = (γ₀ w_φ, w_ψ)` with the
//! Hermitian product conjugate-linear in the first slot.
//!
//! Frame changes: if `frame' = frame·M` with spin lift `S` (`λ(S) = M`) then
//! spinor components transform as `w' = S⁻¹ w`.

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type SpinMatrix = Matrix4<Complex64>;

/// Time-orientation sign per frame index: `ε = (−1, 1, 1, 1, 1)`.
pub const EPS: [f64; 5] = [-1.0, 1.0, 1.0, 1.0, 1.0];

/// `γᵢ² = η_i · Id`.
pub const GAMMA_SQUARE: [i64; 5] = [1, -1, -1, -1, -1];

/// Gamma matrices with entries in the Gaussian integers, `(re, im)`.
pub const GAMMA_INT: [[[(i64, i64); 4]; 4]; 5] = {
    const O: (i64, i64) = (0, 0);
    const P: (i64, i64) = (1, 0);
    const M: (i64, i64) = (-1, 0);
    const I: (i64, i64) = (0, 1);
    const J: (i64, i64) = (0, -1);
    [
        [[M, O, O, O], [O, M, O, O], [O, O, P, O], [O, O, O, P]],
        [[O, O, M, O], [O, O, O, P], [P, O, O, O], [O, M, O, O]],
        [[O, O, J, O], [O, O, O, J], [J, O, O, O], [O, J, O, O]],
        [[O, O, O, M], [O, O, M, O], [O, P, O, O], [P, O, O, O]],
        [[O, O, O, J], [O, O, I, O], [O, I, O, O], [J, O, O, O]],
    ]
};

/// The five gamma matrices as complex matrices.
pub fn gammas() -> [SpinMatrix; 5] {
    std::array::from_fn(|k| {
        Matrix4::from_fn(|i, j| {
            let (re, im) = GAMMA_INT[k][i][j];
            Complex64::new(re as f64, im as f64)
        })
    })
}

type GaussMat = [[(i64, i64); 4]; 4];

fn gmul(a: &GaussMat, b: &GaussMat) -> GaussMat {
    let mut out = [[(0i64, 0i64); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let (mut re, mut im) = (0, 0);
            for k in 0..4 {
                let (ar, ai) = a[i][k];
                let (br, bi) = b[k][j];
                re += ar * br - ai * bi;
                im += ar * bi + ai * br;
            }
            out[i][j] = (re, im);
        }
    }
    out
}

/// One exact Clifford relation and whether it holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub name: String,
    pub holds: bool,
}

/// Checks `γ₀² = 1`, `γᵢ² = −1` and all ten anticommutators exactly.
pub fn clifford_relations() -> Vec<RelationCheck> {
    let g = &GAMMA_INT;
    let mut out = Vec::with_capacity(15);
    for k in 0..5 {
        let sq = gmul(&g[k], &g[k]);
        let holds = (0..4).all(|i| (0..4).all(|j| sq[i][j] == if i == j { (GAMMA_SQUARE[k], 0) } else { (0, 0) }));
        out.push(RelationCheck { name: format!("gamma{k}^2"), holds });
    }
    for a in 0..5 {
        for b in (a + 1)..5 {
            let ab = gmul(&g[a], &g[b]);
            let ba = gmul(&g[b], &g[a]);
            let holds = (0..4).all(|i| (0..4).all(|j| ab[i][j].0 + ba[i][j].0 == 0 && ab[i][j].1 + ba[i][j].1 == 0));
            out.push(RelationCheck { name: format!("{{gamma{a},gamma{b}}}"), holds });
        }
    }
    out
}

/// Frames whose spin lifts spinor components can refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FrameId {
    /// The `g_a`-orthonormal frame built from `T` and the σ-duals.
    E,
    /// The product frame adapted to `−ds² + g_EH`.
    F,
    /// The `g̃_a`-orthonormal rescaling of `e`.
    ETilde,
    /// The standard coordinate frame.
    U,
    /// `e·(QG)`, regular across the axis.
    HTilde,
    /// Frames built ad hoc, such as a re-orthonormalized frame for a perturbed metric.
    Custom,
}

impl std::fmt::Display for FrameId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FrameId::E => "e",
            FrameId::F => "f",
            FrameId::ETilde => "etilde",
            FrameId::U => "u",
            FrameId::HTilde => "htilde",
            FrameId::Custom => "custom",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorValue {
    pub w: [Complex64; 4],
    pub frame: FrameId,
}

impl SpinorValue {
    pub fn new(w: [Complex64; 4], frame: FrameId) -> Self {
        Self { w, frame }
    }

    pub fn zero(frame: FrameId) -> Self {
        Self { w: [Complex64::new(0.0, 0.0); 4], frame }
    }

    pub fn norm(&self) -> f64 {
        self.w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn sub(&self, o: &SpinorValue) -> Result<SpinorValue> {
        same_frame(self.frame, o.frame)?;
        Ok(SpinorValue::new(std::array::from_fn(|i| self.w[i] - o.w[i]), self.frame))
    }

    pub fn apply(&self, m: &SpinMatrix) -> SpinorValue {
        let w = apply_matrix(m, &self.w);
        SpinorValue::new(w, self.frame)
    }
}

/// Components of a tangent vector in an orthonormal frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameVector {
    pub v: [f64; 5],
    pub frame: FrameId,
}

fn same_frame(a: FrameId, b: FrameId) -> Result<()> {
    if a != b {
        return Err(Error::FrameMismatch { expected: a.to_string(), got: b.to_string() });
    }
    Ok(())
}

pub fn apply_matrix(m: &SpinMatrix, w: &[Complex64; 4]) -> [Complex64; 4] {
    std::array::from_fn(|i| (0..4).map(|j| m[(i, j)] * w[j]).sum())
}

/// `(Σ vᵢ γᵢ) w` without frame bookkeeping.
pub fn gamma_action(v: &[Complex64; 5], w: &[Complex64; 4]) -> [Complex64; 4] {
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (k, g) in GAMMA_INT.iter().enumerate() {
        if v[k] == Complex64::new(0.0, 0.0) {
            continue;
        }
        for i in 0..4 {
            for j in 0..4 {
                let (re, im) = g[i][j];
                if re != 0 || im != 0 {
                    out[i] += v[k] * Complex64::new(re as f64, im as f64) * w[j];
                }
            }
        }
    }
    out
}

/// `γ_k w`.
pub fn gamma_k(k: usize, w: &[Complex64; 4]) -> [Complex64; 4] {
    let mut v = [Complex64::new(0.0, 0.0); 5];
    v[k] = Complex64::new(1.0, 0.0);
    gamma_action(&v, w)
}

/// Clifford product of a frame vector with a spinor.
pub fn clifford_mul(v: &FrameVector, w: &SpinorValue) -> Result<SpinorValue> {
    same_frame(w.frame, v.frame)?;
    let vc = v.v.map(|c| Complex64::new(c, 0.0));
    Ok(SpinorValue::new(gamma_action(&vc, &w.w), w.frame))
}

/// `(γ₀ a, b)` on raw component vectors.
pub fn inner_raw(a: &[Complex64; 4], b: &[Complex64; 4]) -> Complex64 {
    let ga = gamma_k(0, a);
    (0..4).map(|i| ga[i].conj() * b[i]).sum()
}

/// The invariant spinor inner product.
pub fn spinor_inner(phi: &SpinorValue, psi: &SpinorValue) -> Result<Complex64> {
    same_frame(phi.frame, psi.frame)?;
    Ok(inner_raw(&phi.w, &psi.w))
}

/// `exp((t/2) γᵢγⱼ)` in closed form.
pub fn spin_exp(t: f64, i: usize, j: usize) -> Result<SpinMatrix> {
    if i == j || i > 4 || j > 4 {
        return Err(Error::Domain(format!("spin_exp needs two distinct indices in 0..5, got ({i},{j})")));
    }
    let g = gammas();
    let b = g[i] * g[j];
    let id = SpinMatrix::identity();
    // (γᵢγⱼ)² = −ηᵢηⱼ.
    let sq = -GAMMA_SQUARE[i] * GAMMA_SQUARE[j];
    let h = t / 2.0;
    let (c, s) = if sq > 0 { (h.cosh(), h.sinh()) } else { (h.cos(), h.sin()) };
    Ok(id * Complex64::new(c, 0.0) + b * Complex64::new(s, 0.0))
}

/// The vector rotation `M` with `S γⱼ S⁻¹ = Σᵢ Mᵢⱼ γᵢ`.
pub fn lambda_check(s: &SpinMatrix) -> Result<[[f64; 5]; 5]> {
    let inv = s.try_inverse().ok_or(Error::NotInSpinGroup(f64::INFINITY))?;
    let g = gammas();
    let mut m = [[0.0; 5]; 5];
    let mut worst: f64 = 0.0;
    let scale = 1.0 + s.norm() * inv.norm();
    for j in 0..5 {
        let c = s * g[j] * inv;
        let mut rebuilt = SpinMatrix::zeros();
        for i in 0..5 {
            let coeff = (g[i] * c).trace() / Complex64::new(4.0 * GAMMA_SQUARE[i] as f64, 0.0);
            worst = worst.max(coeff.im.abs() / scale);
            m[i][j] = coeff.re;
            rebuilt += g[i] * Complex64::new(coeff.re, 0.0);
        }
        worst = worst.max((c - rebuilt).norm() / scale);
    }
    if worst > 1e-10 {
        return Err(Error::NotInSpinGroup(worst));
    }
    Ok(m)
}
