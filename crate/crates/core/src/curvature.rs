//! Levi-Civita curvature stack for any metric given as jets.
//!
//! Conventions, fixed once:
//! - `Γᵏᵢⱼ = ½ gᵏˡ (∂ᵢgⱼₗ + ∂ⱼgᵢₗ − ∂ₗgᵢⱼ)`.
//! - `R(∂ᵢ,∂ⱼ)∂ₖ = Rˡₖᵢⱼ ∂ₗ` with `R(X,Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_[X,Y]`.
//! - `Ricₖⱼ = Rⁱₖᵢⱼ`, so the round sphere has positive Ricci curvature.
//! - `R_abcd = g_al Rˡ_bcd`.
//! - Frame connection forms `ωⁱⱼ(X) = g(∇_X eᵢ, eⱼ)`, so that
//!   `∇_X eᵢ = Σⱼ εⱼ ωⁱⱼ(X) eⱼ` with `ε` the frame signature.
//! - Curvature forms `Ωⁱⱼ(X,Y) = g(R(X,Y)eᵢ, eⱼ)`.

use crate::geometry::{metric_at, MetricJets, MetricSpec, Point, VectorJet};
use crate::jets::{Jet, JetOrder, DIM};
use crate::{Error, Result};

pub type JetMatrix = [[Jet; DIM]; DIM];

/// Two sides of a tensor identity as value matrices.
pub type SidePair = ([[f64; DIM]; DIM], [[f64; DIM]; DIM]);

/// Inverse of the leading `n × n` block by Gauss–Jordan elimination on jets.
pub fn invert_jets(m: &JetMatrix, n: usize) -> Result<JetMatrix> {
    let mut a = *m;
    let mut inv = [[Jet::zero(); DIM]; DIM];
    for (i, row) in inv.iter_mut().enumerate().take(n) {
        row[i] = Jet::one();
    }
    let scale = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| m[i][j].value.abs()).fold(0.0, f64::max);
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].value.abs().total_cmp(&a[y][col].value.abs())).unwrap_or(col);
        if a[piv][col].value.abs() <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::SingularMetric);
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].recip()?;
        for j in 0..n {
            a[col][j] *= p;
            inv[col][j] *= p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r][col];
            if f.value == 0.0 && f.grad.iter().all(|&g| g == 0.0) && f.order().get() > 0 {
                // Exact zero jets need no elimination step.
                if (0..n).all(|j| a[col][j].value == 0.0 || j == col) && f == Jet::zero().truncate(f.order()) {
                    continue;
                }
            }
            for j in 0..n {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    Ok(inv)
}

/// Christoffel symbols `gamma[k][i][j] = Γᵏᵢⱼ` as jets of one order less than the metric.
#[derive(Debug, Clone)]
pub struct Christoffel {
    pub dim: usize,
    pub offset: usize,
    pub gamma: [[[Jet; DIM]; DIM]; DIM],
}

impl Christoffel {
    pub fn value(&self, k: usize, i: usize, j: usize) -> f64 {
        self.gamma[k][i][j].value
    }
}

/// Levi-Civita Christoffel symbols and the inverse metric.
pub fn christoffel_with_inverse(g: &MetricJets) -> Result<(Christoffel, JetMatrix)> {
    let n = g.dim;
    if g.order().get() < 1 {
        return Err(Error::Order { requested: 1, available: 0 });
    }
    let ginv = invert_jets(&g.g, n)?;
    // dg[k][i][j] = ∂ₖ gᵢⱼ
    let mut dg = [[[Jet::zero(); DIM]; DIM]; DIM];
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                let d = g.d(&g.g[i][j], k);
                dg[k][i][j] = d;
                dg[k][j][i] = d;
            }
        }
    }
    let mut gamma = [[[Jet::zero(); DIM]; DIM]; DIM];
    // Lowered symbols first: Γ_lij = ½(∂ᵢgⱼₗ + ∂ⱼgᵢₗ − ∂ₗgᵢⱼ).
    let mut low = [[[Jet::zero(); DIM]; DIM]; DIM];
    for l in 0..n {
        for i in 0..n {
            for j in i..n {
                let v = (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]) * 0.5;
                low[l][i][j] = v;
                low[l][j][i] = v;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                let mut acc = Jet::zero();
                for l in 0..n {
                    acc += ginv[k][l] * low[l][i][j];
                }
                gamma[k][i][j] = acc;
                gamma[k][j][i] = acc;
            }
        }
    }
    Ok((Christoffel { dim: n, offset: g.offset, gamma }, ginv))
}

pub fn christoffel(g: &MetricJets) -> Result<Christoffel> {
    Ok(christoffel_with_inverse(g)?.0)
}

/// Christoffel symbols of a metric family member at a point.
pub fn christoffel_at(spec: &MetricSpec, p: &Point) -> Result<Christoffel> {
    christoffel(&metric_at(spec, &p.seeded())?)
}

/// Dense rank-4 array of jets over `dim` indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor4 {
    pub dim: usize,
    data: Vec<Jet>,
}

impl Tensor4 {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Jet::zero(); dim.pow(4)] }
    }

    #[inline]
    fn idx(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        ((a * self.dim + b) * self.dim + c) * self.dim + d
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> &Jet {
        &self.data[self.idx(a, b, c, d)]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, c: usize, d: usize, v: Jet) {
        let i = self.idx(a, b, c, d);
        self.data[i] = v;
    }

    pub fn value(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.get(a, b, c, d).value
    }

    /// Largest absolute component value.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|j| j.value.abs()).fold(0.0, f64::max)
    }

    /// Euclidean norm of the component values.
    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|j| j.value * j.value).sum::<f64>().sqrt()
    }

    pub fn values(&self) -> Vec<f64> {
        self.data.iter().map(|j| j.value).collect()
    }

    pub fn jets(&self) -> &[Jet] {
        &self.data
    }
}

/// Everything derived from one metric jet evaluation.
#[derive(Debug, Clone)]
pub struct CurvatureBundle {
    pub metric: MetricJets,
    pub ginv: JetMatrix,
    pub christoffel: Christoffel,
    /// `Rˡₖᵢⱼ` stored as `(l, k, i, j)`.
    pub riemann: Tensor4,
    /// `R_abcd`.
    pub riemann_down: Tensor4,
    pub ricci: JetMatrix,
    pub scalar: Jet,
    /// Weyl tensor with all indices lowered.
    pub weyl: Tensor4,
}

impl CurvatureBundle {
    pub fn dim(&self) -> usize {
        self.metric.dim
    }

    pub fn ricci_value(&self) -> [[f64; DIM]; DIM] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.ricci[i][j].value))
    }

    pub fn ricci_max_abs(&self) -> f64 {
        let n = self.dim();
        let mut m: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                m = m.max(self.ricci[i][j].value.abs());
            }
        }
        m
    }
}

/// Full curvature from a metric jet of order ≥ 2.
pub fn curvature(g: &MetricJets) -> Result<CurvatureBundle> {
    let n = g.dim;
    let ord = g.order().get();
    if ord < 2 {
        return Err(Error::Order { requested: 2, available: ord });
    }
    let (chr, ginv) = christoffel_with_inverse(g)?;
    let gm = &chr.gamma;
    // dgamma[i][l][j][k] = ∂ᵢ Γˡⱼₖ
    let mut riemann = Tensor4::zeros(n);
    let mut dgam = vec![Jet::zero(); n * n * n * n];
    let di = |i: usize, l: usize, j: usize, k: usize| ((i * n + l) * n + j) * n + k;
    for i in 0..n {
        for l in 0..n {
            for j in 0..n {
                for k in j..n {
                    let d = g.d(&gm[l][j][k], i);
                    dgam[di(i, l, j, k)] = d;
                    dgam[di(i, l, k, j)] = d;
                }
            }
        }
    }
    for l in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in (i + 1)..n {
                    let mut v = dgam[di(i, l, j, k)] - dgam[di(j, l, i, k)];
                    for m in 0..n {
                        v += gm[l][i][m] * gm[m][j][k] - gm[l][j][m] * gm[m][i][k];
                    }
                    riemann.set(l, k, i, j, v);
                    riemann.set(l, k, j, i, -v);
                }
            }
        }
    }
    let mut down = Tensor4::zeros(n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in (c + 1)..n {
                    let mut acc = Jet::zero();
                    for l in 0..n {
                        acc += g.g[a][l] * *riemann.get(l, b, c, d);
                    }
                    down.set(a, b, c, d, acc);
                    down.set(a, b, d, c, -acc);
                }
            }
        }
    }
    let mut ricci = [[Jet::zero(); DIM]; DIM];
    for k in 0..n {
        for j in 0..n {
            let mut acc = Jet::zero();
            for i in 0..n {
                acc += *riemann.get(i, k, i, j);
            }
            ricci[k][j] = acc;
        }
    }
    let mut scalar = Jet::zero();
    for i in 0..n {
        for j in 0..n {
            scalar += ginv[i][j] * ricci[i][j];
        }
    }
    let weyl = weyl_from(g, &down, &ricci, &scalar);
    Ok(CurvatureBundle { metric: *g, ginv, christoffel: chr, riemann, riemann_down: down, ricci, scalar, weyl })
}

fn weyl_from(g: &MetricJets, down: &Tensor4, ric: &JetMatrix, scalar: &Jet) -> Tensor4 {
    let n = g.dim;
    let nf = n as f64;
    let c1 = 1.0 / (nf - 2.0);
    let c2 = 1.0 / ((nf - 1.0) * (nf - 2.0));
    let gg = &g.g;
    let mut w = Tensor4::zeros(n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let kulkarni_ric =
                        gg[a][c] * ric[b][d] - gg[a][d] * ric[b][c] - gg[b][c] * ric[a][d] + gg[b][d] * ric[a][c];
                    let kulkarni_g = gg[a][c] * gg[b][d] - gg[a][d] * gg[b][c];
                    let v = *down.get(a, b, c, d) - kulkarni_ric * c1 + *scalar * kulkarni_g * c2;
                    w.set(a, b, c, d, v);
                }
            }
        }
    }
    w
}

/// Curvature of a metric family member at a point, from one order-3 evaluation.
pub fn curvature_at(spec: &MetricSpec, p: &Point) -> Result<CurvatureBundle> {
    let g = metric_at(spec, &p.seeded())?;
    curvature(&g)
}

/// Curvature values only (metric truncated to order 2 for speed).
pub fn curvature_values_at(spec: &MetricSpec, p: &Point) -> Result<CurvatureBundle> {
    let g = metric_at(spec, &p.seeded())?.truncate(JetOrder::new(2)?);
    curvature(&g)
}

pub fn riemann(spec: &MetricSpec, p: &Point) -> Result<Tensor4> {
    Ok(curvature_values_at(spec, p)?.riemann)
}

pub fn ricci(spec: &MetricSpec, p: &Point) -> Result<JetMatrix> {
    Ok(curvature_values_at(spec, p)?.ricci)
}

pub fn scalar(spec: &MetricSpec, p: &Point) -> Result<f64> {
    Ok(curvature_values_at(spec, p)?.scalar.value)
}

pub fn weyl(spec: &MetricSpec, p: &Point) -> Result<Tensor4> {
    Ok(curvature_values_at(spec, p)?.weyl)
}

/// Frame vectors with their signature, for connection-form computations.
#[derive(Debug, Clone, Copy)]
pub struct FrameJets {
    pub dim: usize,
    pub eps: [f64; DIM],
    /// `v[i][m]` is component `m` of frame vector `i`.
    pub v: [VectorJet; DIM],
}

impl FrameJets {
    pub fn values(&self) -> [[f64; DIM]; DIM] {
        std::array::from_fn(|i| std::array::from_fn(|m| self.v[i][m].value))
    }
}

/// Gram matrix `g(eᵢ, eⱼ)` values.
pub fn gram(frame: &FrameJets, g: &MetricJets) -> [[f64; DIM]; DIM] {
    let vals = frame.values();
    let mut out = [[0.0; DIM]; DIM];
    for i in 0..frame.dim {
        for j in 0..frame.dim {
            out[i][j] = g.pair_value(&vals[i], &vals[j]);
        }
    }
    out
}

/// Maximal deviation of the Gram matrix from `diag(ε)`.
pub fn gram_residual(frame: &FrameJets, g: &MetricJets) -> f64 {
    let gm = gram(frame, g);
    let mut worst: f64 = 0.0;
    for i in 0..frame.dim {
        for j in 0..frame.dim {
            let e = if i == j { frame.eps[i] } else { 0.0 };
            worst = worst.max((gm[i][j] - e).abs());
        }
    }
    worst
}

/// Connection and curvature forms of an orthonormal frame.
#[derive(Debug, Clone)]
pub struct ConnectionForms {
    pub dim: usize,
    pub eps: [f64; DIM],
    /// `omega[i][j][k] = ωⁱⱼ(e_k)`.
    pub omega: [[[f64; DIM]; DIM]; DIM],
    /// Coordinate components `ωⁱⱼ(∂_m)` as jets.
    pub omega_cov: [[VectorJet; DIM]; DIM],
    /// `curvature[i][j][a][b] = Ωⁱⱼ(e_a, e_b)` assembled from the Riemann tensor.
    pub curvature: Option<Vec<f64>>,
}

impl ConnectionForms {
    pub fn curv(&self, i: usize, j: usize, a: usize, b: usize) -> Option<f64> {
        let n = self.dim;
        self.curvature.as_ref().map(|c| c[((i * n + j) * n + a) * n + b])
    }
}

/// `∇_{∂_m} X` components: `(∇X)[m][p] = ∂_m Xᵖ + Γᵖ_ms Xˢ`.
pub fn covariant_derivative(x: &VectorJet, chr: &Christoffel) -> [VectorJet; DIM] {
    let n = chr.dim;
    let mut out = [[Jet::zero(); DIM]; DIM];
    for m in 0..n {
        for p in 0..n {
            let mut acc = x[p].partial(m + chr.offset);
            for s in 0..n {
                acc += chr.gamma[p][m][s] * x[s];
            }
            out[m][p] = acc;
        }
    }
    out
}

/// `ωⁱⱼ(e_k)` as jets from the Koszul formula in the frame,
/// `2ωⁱⱼ(e_k) = εⱼθʲ([e_k,e_i]) − ε_kθᵏ([e_i,e_j]) + εᵢθⁱ([e_j,e_k])`,
/// with `θ` the dual coframe. Unlike `g(∇e_i, e_j)` it never forms Christoffel
/// symbols, whose large terms cancel badly where the metric is ill-conditioned.
/// The jets have one order less than the frame.
pub fn koszul_omega_jets(frame: &FrameJets, offset: usize) -> Result<[[[Jet; DIM]; DIM]; DIM]> {
    let n = frame.dim;
    // Column j of `vt` is e_j, so row i of its inverse is θⁱ.
    let mut vt = [[Jet::zero(); DIM]; DIM];
    for (m, row) in vt.iter_mut().enumerate().take(n) {
        for (j, entry) in row.iter_mut().enumerate().take(n) {
            *entry = frame.v[j][m];
        }
    }
    let theta = invert_jets(&vt, n).map_err(|_| Error::Domain("frame vectors are linearly dependent".into()))?;
    let mut c = vec![Jet::zero(); n * n * n];
    for a in 0..n {
        for b in (a + 1)..n {
            let br = lie_bracket(&frame.v[a], &frame.v[b], n, offset);
            for k in 0..n {
                let mut acc = Jet::zero();
                for m in 0..n {
                    acc += theta[k][m] * br[m];
                }
                c[(a * n + b) * n + k] = acc;
                c[(b * n + a) * n + k] = -acc;
            }
        }
    }
    let c = |a: usize, b: usize, k: usize| c[(a * n + b) * n + k];
    let e = frame.eps;
    let mut omega = [[[Jet::zero(); DIM]; DIM]; DIM];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                omega[i][j][k] = (c(k, i, j) * e[j] - c(i, j, k) * e[k] + c(j, k, i) * e[i]) * 0.5;
            }
        }
    }
    Ok(omega)
}

/// Values of `koszul_omega_jets`.
pub fn koszul_omega(frame: &FrameJets, offset: usize) -> Result<[[[f64; DIM]; DIM]; DIM]> {
    let w = koszul_omega_jets(frame, offset)?;
    Ok(w.map(|a| a.map(|b| b.map(|j| j.value))))
}

/// `X(f)` at the point for a frame vector `X`.
fn along(x: &VectorJet, f: &Jet, n: usize, offset: usize) -> f64 {
    (0..n).map(|m| x[m].value * f.grad[m + offset]).sum()
}

/// Connection and curvature of an orthonormal frame from the structure
/// equations alone, without coordinate Christoffel symbols.
#[derive(Debug, Clone)]
pub struct FrameCurvature {
    pub dim: usize,
    pub eps: [f64; DIM],
    /// `omega[i][j][k] = ωⁱⱼ(e_k)`.
    pub omega: [[[Jet; DIM]; DIM]; DIM],
    /// `curvature[i][j][a][b] = Ωⁱⱼ(e_a, e_b)`.
    pub curvature: Vec<f64>,
}

impl FrameCurvature {
    pub fn curv(&self, i: usize, j: usize, a: usize, b: usize) -> f64 {
        let n = self.dim;
        self.curvature[((i * n + j) * n + a) * n + b]
    }

    /// `Ric(e_b, e_d) = Σₐ εₐ Ωᵈₐ(e_a, e_b)`.
    pub fn ricci(&self) -> [[f64; DIM]; DIM] {
        let n = self.dim;
        let mut out = [[0.0; DIM]; DIM];
        for (b, row) in out.iter_mut().enumerate().take(n) {
            for (d, entry) in row.iter_mut().enumerate().take(n) {
                *entry = (0..n).map(|a| self.eps[a] * self.curv(d, a, a, b)).sum();
            }
        }
        out
    }
}

/// Curvature forms by the second structure equation,
/// `Ωⁱⱼ(X,Y) = X(ωⁱⱼ(Y)) − Y(ωⁱⱼ(X)) − ωⁱⱼ([X,Y]) − Σₖ εₖ(ωⁱₖ(X)ωᵏⱼ(Y) − ωⁱₖ(Y)ωᵏⱼ(X))`,
/// with the connection from `koszul_omega_jets`. Needs frame jets of order ≥ 2.
pub fn cartan_curvature(frame: &FrameJets, offset: usize) -> Result<FrameCurvature> {
    let n = frame.dim;
    let order = frame.v[0][0].order().get();
    if order < 2 {
        return Err(Error::Order { requested: 2, available: order });
    }
    let omega = koszul_omega_jets(frame, offset)?;
    let mut brackets = vec![[0.0; DIM]; n * n];
    let vals = frame.values();
    let vt = nalgebra::DMatrix::from_fn(n, n, |m, j| vals[j][m]);
    let theta = vt.try_inverse().ok_or_else(|| Error::Domain("frame vectors are linearly dependent".into()))?;
    for a in 0..n {
        for b in 0..n {
            let br = lie_bracket(&frame.v[a], &frame.v[b], n, offset);
            for k in 0..n {
                brackets[a * n + b][k] = (0..n).map(|m| theta[(k, m)] * br[m].value).sum();
            }
        }
    }
    let e = frame.eps;
    let mut curvature = vec![0.0; n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let mut v =
                        along(&frame.v[a], &omega[i][j][b], n, offset) - along(&frame.v[b], &omega[i][j][a], n, offset);
                    v -= (0..n).map(|k| brackets[a * n + b][k] * omega[i][j][k].value).sum::<f64>();
                    for k in 0..n {
                        v -= e[k]
                            * (omega[i][k][a].value * omega[k][j][b].value
                                - omega[i][k][b].value * omega[k][j][a].value);
                    }
                    curvature[((i * n + j) * n + a) * n + b] = v;
                }
            }
        }
    }
    Ok(FrameCurvature { dim: n, eps: e, omega, curvature })
}

/// `Hess(u)(e_a, e_b) = e_a(e_b(u)) − Σⱼ εⱼ ωᵇⱼ(e_a) e_j(u)`.
pub fn frame_hessian(u: &Jet, frame: &FrameJets, fc: &FrameCurvature, offset: usize) -> [[f64; DIM]; DIM] {
    let n = frame.dim;
    let du: Vec<Jet> = (0..n)
        .map(|b| {
            let mut acc = Jet::zero();
            for m in 0..n {
                acc += frame.v[b][m] * u.partial(m + offset);
            }
            acc
        })
        .collect();
    let mut out = [[0.0; DIM]; DIM];
    for a in 0..n {
        for b in 0..n {
            let mut v = along(&frame.v[a], &du[b], n, offset);
            for j in 0..n {
                v -= fc.eps[j] * fc.omega[b][j][a].value * du[j].value;
            }
            out[a][b] = v;
        }
    }
    out
}

/// Trace-free part of frame components with respect to `diag(ε)`.
pub fn trace_free_frame(t: &[[f64; DIM]; DIM], eps: &[f64; DIM], n: usize) -> [[f64; DIM]; DIM] {
    let tr: f64 = (0..n).map(|a| eps[a] * t[a][a]).sum();
    let mut out = *t;
    for a in 0..n {
        out[a][a] -= tr / n as f64 * eps[a];
    }
    out
}

/// Connection forms `ωⁱⱼ` of `frame`; curvature forms are included when `curv` is given.
///
/// The values `ωⁱⱼ(e_k)` come from `koszul_omega`; the coordinate jets
/// `omega_cov` come from the Levi-Civita connection, so the two routes are
/// independent.
pub fn connection_forms(
    frame: &FrameJets,
    g: &MetricJets,
    chr: &Christoffel,
    curv: Option<&CurvatureBundle>,
) -> Result<ConnectionForms> {
    let n = frame.dim;
    if g.dim != n {
        return Err(Error::Dimension { expected: g.dim, got: n });
    }
    let res = gram_residual(frame, g);
    let scale = 1.0 + (0..n).map(|i| g.g[i][i].value.abs()).fold(0.0, f64::max);
    if res > 1e-8 * scale {
        return Err(Error::FrameMismatch {
            expected: "orthonormal frame".into(),
            got: format!("Gram residual {res:.3e}"),
        });
    }
    let nabla: Vec<[VectorJet; DIM]> = (0..n).map(|i| covariant_derivative(&frame.v[i], chr)).collect();
    let mut omega_cov = [[[Jet::zero(); DIM]; DIM]; DIM];
    for i in 0..n {
        for j in 0..n {
            for m in 0..n {
                let mut acc = Jet::zero();
                for p in 0..n {
                    for l in 0..n {
                        acc += g.g[p][l] * nabla[i][m][p] * frame.v[j][l];
                    }
                }
                omega_cov[i][j][m] = acc;
            }
        }
    }
    let omega = koszul_omega(frame, g.offset)?;
    let curvature = curv.map(|cb| {
        let fv = frame.values();
        let mut out = vec![0.0; n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        let mut acc = 0.0;
                        for p in 0..n {
                            for q in 0..n {
                                for k in 0..n {
                                    for s in 0..n {
                                        let c = fv[a][p] * fv[b][q] * fv[i][k] * fv[j][s];
                                        if c != 0.0 {
                                            acc += c * cb.riemann_down.value(s, k, p, q);
                                        }
                                    }
                                }
                            }
                        }
                        out[((i * n + j) * n + a) * n + b] = acc;
                    }
                }
            }
        }
        out
    });
    Ok(ConnectionForms { dim: n, eps: frame.eps, omega, omega_cov, curvature })
}

/// Lie bracket `[X, Y]` of two vector fields given as jets.
pub fn lie_bracket(x: &VectorJet, y: &VectorJet, dim: usize, offset: usize) -> VectorJet {
    let mut out = [Jet::zero(); DIM];
    for m in 0..dim {
        let mut acc = Jet::zero();
        for k in 0..dim {
            acc += x[k] * y[m].partial(k + offset) - y[k] * x[m].partial(k + offset);
        }
        out[m] = acc;
    }
    out
}

/// Maximal residuals of both structure equations for an orthonormal frame.
///
/// First: `dfⁱ(e_a,e_b) = εᵢ(ωⁱ_b(e_a) − ωⁱ_a(e_b))`, with the left side from
/// Lie brackets. Second: `Ωⁱⱼ = dωⁱⱼ − Σₖ εₖ ωⁱₖ ∧ ωᵏⱼ`, with the left side from
/// the Riemann tensor and `dω` from jets of the coordinate components.
pub fn structure_equation_residuals(frame: &FrameJets, g: &MetricJets, forms: &ConnectionForms) -> (f64, f64) {
    let n = frame.dim;
    let off = g.offset;
    let fv = frame.values();
    let mut first: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let br = lie_bracket(&frame.v[a], &frame.v[b], n, off);
            let brv: [f64; DIM] = std::array::from_fn(|m| br[m].value);
            for i in 0..n {
                let lhs = -frame.eps[i] * g.pair_value(&brv, &fv[i]);
                let rhs = frame.eps[i] * (forms.omega[i][b][a] - forms.omega[i][a][b]);
                first = first.max((lhs - rhs).abs());
            }
        }
    }
    let mut second: f64 = 0.0;
    if forms.curvature.is_some() {
        for i in 0..n {
            for j in 0..n {
                let c = &forms.omega_cov[i][j];
                for a in 0..n {
                    for b in 0..n {
                        let mut dw = 0.0;
                        for p in 0..n {
                            for q in 0..n {
                                let coef = fv[a][p] * fv[b][q];
                                if coef != 0.0 {
                                    dw += coef * (c[q].partial(p + off).value - c[p].partial(q + off).value);
                                }
                            }
                        }
                        let mut wedge = 0.0;
                        for k in 0..n {
                            wedge += forms.eps[k]
                                * (forms.omega[i][k][a] * forms.omega[k][j][b]
                                    - forms.omega[i][k][b] * forms.omega[k][j][a]);
                        }
                        let omega_ij = forms.curv(i, j, a, b).unwrap_or(0.0);
                        second = second.max((omega_ij - (dw - wedge)).abs());
                    }
                }
            }
        }
    }
    (first, second)
}

/// Index pairs spanning Λ² in four dimensions.
pub const PAIRS4: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Hodge star on Λ² of an oriented orthonormal 4-frame, in the `PAIRS4` basis.
pub fn hodge4() -> [[f64; 6]; 6] {
    // ⋆e01 = e23, ⋆e02 = −e13, ⋆e03 = e12 and ⋆⋆ = 1.
    let mut s = [[0.0; 6]; 6];
    let map = [(0, 5, 1.0), (1, 4, -1.0), (2, 3, 1.0), (3, 2, 1.0), (4, 1, -1.0), (5, 0, 1.0)];
    for (from, to, sign) in map {
        s[to][from] = sign;
    }
    s
}

/// Anti-self-dual basis `λ¹₋ = e¹∧e² − e³∧e⁴`, `λ²₋ = e¹∧e³ − e⁴∧e²`, `λ³₋ = e¹∧e⁴ − e²∧e³`.
pub fn asd_basis() -> [[f64; 6]; 3] {
    [[1.0, 0.0, 0.0, 0.0, 0.0, -1.0], [0.0, 1.0, 0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 1.0, -1.0, 0.0, 0.0]]
}

/// Weyl halves of a four-dimensional curvature operator.
#[derive(Debug, Clone)]
pub struct AsdSplit {
    pub w_plus: [[f64; 6]; 6],
    pub w_minus: [[f64; 6]; 6],
    pub norm_plus: f64,
    pub norm_minus: f64,
}

fn mat6_mul(a: &[[f64; 6]; 6], b: &[[f64; 6]; 6]) -> [[f64; 6]; 6] {
    let mut out = [[0.0; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            out[i][j] = (0..6).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn traceless_block(m: &[[f64; 6]; 6], proj: &[[f64; 6]; 6]) -> ([[f64; 6]; 6], f64) {
    let mut block = mat6_mul(proj, &mat6_mul(m, proj));
    let tr: f64 = (0..6).map(|i| block[i][i]).sum();
    for i in 0..6 {
        for j in 0..6 {
            block[i][j] -= tr / 3.0 * proj[i][j];
        }
    }
    let norm = block.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
    (block, norm)
}

/// Sign of the frame relative to the coordinate orientation `dx¹∧…∧dxⁿ`.
pub fn frame_orientation(frame: &FrameJets) -> f64 {
    let n = frame.dim;
    let vals = frame.values();
    let m = nalgebra::DMatrix::from_fn(n, n, |i, j| vals[i][j]);
    m.determinant().signum()
}

/// Splits the curvature operator `M[(ij)][(ab)] = Ωⁱⱼ(e_a, e_b)` of a
/// four-dimensional orthonormal frame into self-dual and anti-self-dual Weyl parts.
///
/// `orientation` is +1 when duality is taken in the frame orientation and −1
/// for the opposite one, so `frame_orientation` selects the coordinate orientation.
pub fn asd_split(forms: &ConnectionForms, orientation: f64) -> Result<AsdSplit> {
    if forms.dim != 4 {
        return Err(Error::Dimension { expected: 4, got: forms.dim });
    }
    let mut m = [[0.0; 6]; 6];
    for (r, &(i, j)) in PAIRS4.iter().enumerate() {
        for (c, &(a, b)) in PAIRS4.iter().enumerate() {
            m[r][c] =
                forms.curv(i, j, a, b).ok_or_else(|| Error::Domain("curvature forms were not computed".into()))?;
        }
    }
    let s = hodge4();
    let mut pp = [[0.0; 6]; 6];
    let mut pm = [[0.0; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            let id = if i == j { 1.0 } else { 0.0 };
            pp[i][j] = 0.5 * (id + orientation * s[i][j]);
            pm[i][j] = 0.5 * (id - orientation * s[i][j]);
        }
    }
    let (w_plus, norm_plus) = traceless_block(&m, &pp);
    let (w_minus, norm_minus) = traceless_block(&m, &pm);
    Ok(AsdSplit { w_plus, w_minus, norm_plus, norm_minus })
}

/// `(L_X g)ᵢⱼ = Xᵏ∂ₖgᵢⱼ + gₖⱼ∂ᵢXᵏ + gᵢₖ∂ⱼXᵏ` as values.
pub fn lie_derivative_metric(x: &VectorJet, g: &MetricJets) -> [[f64; DIM]; DIM] {
    let n = g.dim;
    let mut out = [[0.0; DIM]; DIM];
    let dx: Vec<[f64; DIM]> =
        (0..n).map(|k| std::array::from_fn(|i| if i < n { g.d(&x[k], i).value } else { 0.0 })).collect();
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for k in 0..n {
                acc += x[k].value * g.d(&g.g[i][j], k).value;
                acc += g.g[k][j].value * dx[k][i] + g.g[i][k].value * dx[k][j];
            }
            out[i][j] = acc;
        }
    }
    out
}

/// `div X = ∂_μXᵘ + Γᵘ_μν Xᵛ` as a jet.
pub fn divergence(x: &VectorJet, chr: &Christoffel) -> Jet {
    let n = chr.dim;
    let mut acc = Jet::zero();
    for m in 0..n {
        acc += x[m].partial(m + chr.offset);
        for v in 0..n {
            acc += chr.gamma[m][m][v] * x[v];
        }
    }
    acc
}

/// `grad f = g⁻¹ df` as values.
pub fn gradient(f: &Jet, ginv: &JetMatrix, dim: usize, offset: usize) -> [f64; DIM] {
    let mut out = [0.0; DIM];
    for i in 0..dim {
        out[i] = (0..dim).map(|j| ginv[i][j].value * f.grad[j + offset]).sum();
    }
    out
}

/// `Hess(u)ᵢⱼ = ∂ᵢ∂ⱼu − Γᵏᵢⱼ∂ₖu` as values.
pub fn hessian_scalar(u: &Jet, chr: &Christoffel) -> [[f64; DIM]; DIM] {
    let n = chr.dim;
    let o = chr.offset;
    let mut h = [[0.0; DIM]; DIM];
    for i in 0..n {
        for j in 0..n {
            let mut v = u.d2(i + o, j + o);
            for k in 0..n {
                v -= chr.value(k, i, j) * u.grad[k + o];
            }
            h[i][j] = v;
        }
    }
    h
}

/// `g^{ij} Tᵢⱼ`.
pub fn metric_trace(t: &[[f64; DIM]; DIM], ginv: &JetMatrix, dim: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            acc += ginv[i][j].value * t[i][j];
        }
    }
    acc
}

pub fn laplacian_scalar(u: &Jet, chr: &Christoffel, ginv: &JetMatrix) -> f64 {
    metric_trace(&hessian_scalar(u, chr), ginv, chr.dim)
}

/// `T − (tr_g T / n) g`.
pub fn trace_free(t: &[[f64; DIM]; DIM], g: &MetricJets, ginv: &JetMatrix) -> [[f64; DIM]; DIM] {
    let n = g.dim;
    let tr = metric_trace(t, ginv, n);
    let mut out = *t;
    for i in 0..n {
        for j in 0..n {
            out[i][j] -= tr / n as f64 * g.g[i][j].value;
        }
    }
    out
}

/// Residual matrix of the conformal Ricci identity for `g = e^{2μ} ĝ` with
/// `ĝ` Ricci-flat: `Ric^g + (n−2)(Hess^ĝ μ − dμ²) + (Δ^ĝ μ + (n−2)|dμ|²_ĝ) ĝ`.
///
/// Returns `(lhs, rhs)` as value matrices.
pub fn conformal_ricci_sides(
    g: &MetricJets,
    ghat: &MetricJets,
    mu: &Jet,
    ricci_hat: Option<&[[f64; DIM]; DIM]>,
) -> Result<SidePair> {
    let n = g.dim;
    let nf = n as f64;
    let cb = curvature(&g.truncate(JetOrder::new(2)?))?;
    let (chr_hat, ginv_hat) = christoffel_with_inverse(&ghat.truncate(JetOrder::new(1)?))?;
    let hess = hessian_scalar(mu, &chr_hat);
    let lap = metric_trace(&hess, &ginv_hat, n);
    let dmu: Vec<f64> = (0..n).map(|i| mu.grad[i + g.offset]).collect();
    let mut dmu2 = 0.0;
    for i in 0..n {
        for j in 0..n {
            dmu2 += ginv_hat[i][j].value * dmu[i] * dmu[j];
        }
    }
    let lhs = cb.ricci_value();
    let mut rhs = [[0.0; DIM]; DIM];
    for i in 0..n {
        for j in 0..n {
            let ric_hat = ricci_hat.map(|r| r[i][j]).unwrap_or(0.0);
            rhs[i][j] =
                ric_hat - (nf - 2.0) * (hess[i][j] - dmu[i] * dmu[j]) - (lap + (nf - 2.0) * dmu2) * ghat.g[i][j].value;
        }
    }
    Ok((lhs, rhs))
}

/// Both sides of the conformal Ricci identity for `g_a = e^{2μ} g̃_a`, `μ = ln|r² − x₀²|`.
pub fn conformal_ricci_check(p: &Point, a: f64) -> Result<[[f64; DIM]; DIM]> {
    let (lhs, rhs) = conformal_ricci_pair(p, a)?;
    let mut out = [[0.0; DIM]; DIM];
    for i in 0..DIM {
        for j in 0..DIM {
            out[i][j] = lhs[i][j] - rhs[i][j];
        }
    }
    Ok(out)
}

pub fn conformal_ricci_pair(p: &Point, a: f64) -> Result<SidePair> {
    let x = p.seeded();
    let q = crate::geometry::cone_q(&x);
    if q.value == 0.0 {
        return Err(Error::Singular("μ = ln|r² − x₀²| is singular on L_o".into()));
    }
    let g = metric_at(&MetricSpec::ga(a), &x)?;
    let ght = metric_at(&MetricSpec::ga_tilde(a), &x)?;
    let mu = q.ln_abs()?;
    conformal_ricci_sides(&g, &ght, &mu, None)
}

/// Least-squares slope of `ln w` against `ln d` after dropping the two
/// smallest distances.
pub fn fit_decay_exponent(dist: &[f64], w: &[f64]) -> Result<f64> {
    let mut pairs: Vec<(f64, f64)> =
        dist.iter().zip(w).filter(|(d, v)| **d > 0.0 && **v > 0.0).map(|(d, v)| (*d, *v)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    if pairs.len() < 8 {
        return Err(Error::Domain(format!("decay fit needs ≥ 8 positive samples, got {}", pairs.len())));
    }
    let used = &pairs[2..];
    let m = used.len() as f64;
    let (sx, sy) = used.iter().fold((0.0, 0.0), |(a, b), (d, v)| (a + d.ln(), b + v.ln()));
    let (mx, my) = (sx / m, sy / m);
    let (mut num, mut den) = (0.0, 0.0);
    for (d, v) in used {
        num += (d.ln() - mx) * (v.ln() - my);
        den += (d.ln() - mx).powi(2);
    }
    Ok(num / den)
}

/// Result of probing the Weyl tensor of `g_a` along a sequence approaching `L_o`.
#[derive(Debug, Clone)]
pub struct WeylProbe {
    pub ro: Vec<f64>,
    pub weyl_max: Vec<f64>,
    pub exponent: f64,
}

/// Largest coordinate component of the lowered Weyl tensor of `g_a` at points
/// approaching `L_o`, and the fitted exponent in `r_o`.
pub fn weyl_extension_probe(points: &[Point], a: f64) -> Result<WeylProbe> {
    let spec = MetricSpec::ga(a);
    let mut ro = Vec::with_capacity(points.len());
    let mut wm = Vec::with_capacity(points.len());
    for p in points {
        if p.q() == 0.0 {
            return Err(Error::Singular("Weyl probe point lies on L_o".into()));
        }
        let w = weyl(&spec, p)?;
        ro.push(p.ro());
        wm.push(w.max_abs());
    }
    let exponent = fit_decay_exponent(&ro, &wm)?;
    Ok(WeylProbe { ro, weyl_max: wm, exponent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use approx::assert_relative_eq;

    fn round_sphere_like() -> MetricJets {
        // Conformally flat metric e^{2f} δ on R⁴ with f = −ln(1 + |y|²/4): the round 4-sphere.
        let x = Point::new([0.0, 0.3, -0.2, 0.5, 0.1]).seeded();
        let y2 = x[1].square() + x[2].square() + x[3].square() + x[4].square();
        let conf = (1.0 + y2 * 0.25).powi(-2).unwrap();
        MetricJets::euclidean4().scale(&conf)
    }

    #[test]
    fn minkowski_is_flat() {
        let p = Point::new([0.2, 0.4, 0.1, -0.3, 0.7]);
        let cb = curvature_at(&MetricSpec::minkowski(), &p).unwrap();
        assert_eq!(cb.riemann.max_abs(), 0.0);
        for k in 0..5 {
            for i in 0..5 {
                for j in 0..5 {
                    assert_eq!(cb.christoffel.value(k, i, j), 0.0);
                }
            }
        }
    }

    #[test]
    fn sphere_has_constant_positive_curvature() {
        let g = round_sphere_like();
        let cb = curvature(&g).unwrap();
        // Unit sphere: Ric = 3 g, scalar = 12.
        assert_relative_eq!(cb.scalar.value, 12.0, epsilon = 1e-10);
        for i in 0..4 {
            for j in 0..4 {
                assert_relative_eq!(cb.ricci[i][j].value, 3.0 * g.g[i][j].value, epsilon = 1e-10);
            }
        }
        assert!(cb.weyl.max_abs() < 1e-10);
    }

    #[test]
    fn inverse_jets_match_analytic_inverse() {
        let g = round_sphere_like();
        let inv = invert_jets(&g.g, 4).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = Jet::zero();
                for k in 0..4 {
                    acc += g.g[i][k] * inv[k][j];
                }
                let e = if i == j { 1.0 } else { 0.0 };
                assert_relative_eq!(acc.value, e, epsilon = 1e-14);
                for v in 0..5 {
                    assert!(acc.grad[v].abs() < 1e-13);
                    for w in 0..5 {
                        assert!(acc.d2(v, w).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn singular_metric_is_rejected() {
        let mut g = MetricJets::minkowski();
        g.g[2][2] = Jet::zero();
        assert!(matches!(christoffel(&g), Err(Error::SingularMetric)));
    }

    #[test]
    fn hessian_of_x0_squared() {
        let x = Point::new([0.3, 0.1, 0.2, 0.0, 0.0]).seeded();
        let u = x[0].square();
        let chr = christoffel(&MetricJets::minkowski()).unwrap();
        let h = hessian_scalar(&u, &chr);
        assert_eq!(h[0][0], 2.0);
        assert_eq!(h.iter().flatten().filter(|v| **v != 0.0).count(), 1);
    }

    #[test]
    fn trace_free_is_trace_free() {
        let g = MetricJets::minkowski();
        let ginv = invert_jets(&g.g, 5).unwrap();
        let t: [[f64; 5]; 5] =
            std::array::from_fn(|i| std::array::from_fn(|j| (i * 5 + j) as f64 * 0.1 + (i + j) as f64));
        let tf = trace_free(&t, &g, &ginv);
        assert!(metric_trace(&tf, &ginv, 5).abs() < 1e-12);
    }

    #[test]
    fn translation_is_killing_for_minkowski() {
        let x = Point::new([0.3, 0.1, 0.2, 0.0, 0.4]).seeded();
        let _ = x;
        let t = [Jet::one(), Jet::constant(2.0), Jet::zero(), Jet::zero(), Jet::constant(-1.0)];
        let l = lie_derivative_metric(&t, &MetricJets::minkowski());
        assert!(l.iter().flatten().all(|v| *v == 0.0));
    }

    #[test]
    fn decay_fit_recovers_power() {
        let d: Vec<f64> = (0..10).map(|k| 0.1 * 0.5f64.powi(k)).collect();
        let w: Vec<f64> = d.iter().map(|x| 3.0 * x * x).collect();
        assert_relative_eq!(fit_decay_exponent(&d, &w).unwrap(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn asd_basis_is_anti_self_dual() {
        let s = hodge4();
        for l in asd_basis() {
            for i in 0..6 {
                let star: f64 = (0..6).map(|j| s[i][j] * l[j]).sum();
                assert_eq!(star, -l[i]);
            }
        }
    }
}
