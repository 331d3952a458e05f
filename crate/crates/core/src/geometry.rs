//! Points, cone regions and the scalar and one-form building blocks of the
//! metric family, plus evaluation of every family member as a matrix of jets.
//!
//! Conventions: coordinates are `(x₀, x₁, x₂, x₃, x₄)`, `r = |(x₁,…,x₄)|`,
//! `q = r² − x₀²`. The cone `L` is `r ≤ |x₀|` and its boundary `L_o` is
//! `r = |x₀|`. Four-dimensional metrics (`h_a`, `g_EH`) live on the spatial
//! coordinates `x₁…x₄`; their matrix index `i` refers to jet variable `i + 1`.

use nalgebra::{DMatrix, Matrix5};
use serde::{Deserialize, Serialize};

use crate::jets::{seed, Jet, JetOrder, DIM};
use crate::{Error, Result};

/// Cartesian components of a vector field, one jet per coordinate.
pub type VectorJet = [Jet; DIM];
/// Cartesian components of a one-form, one jet per coordinate.
pub type CovectorJet = [Jet; DIM];

/// Signature of the Minkowski metric in the standard coordinates.
pub const ETA: [f64; DIM] = [-1.0, 1.0, 1.0, 1.0, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: [f64; DIM],
}

impl Point {
    pub fn new(x: [f64; DIM]) -> Self {
        Self { x }
    }

    pub fn r(&self) -> f64 {
        self.r2().sqrt()
    }

    pub fn r2(&self) -> f64 {
        self.x[1..].iter().map(|v| v * v).sum()
    }

    pub fn x0(&self) -> f64 {
        self.x[0]
    }

    /// `r² − x₀²`.
    pub fn q(&self) -> f64 {
        self.r2() - self.x[0] * self.x[0]
    }

    /// `r_o`, with the extension by zero on `L`.
    pub fn ro(&self) -> f64 {
        let q = self.q();
        if q <= 0.0 {
            0.0
        } else {
            q / self.r()
        }
    }

    pub fn norm(&self) -> f64 {
        self.x.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().all(|v| v.is_finite())
    }

    pub fn seeded(&self) -> [Jet; DIM] {
        seed(self.x)
    }

    pub fn add_scaled(&self, d: &[f64; DIM], t: f64) -> Point {
        Point::new(std::array::from_fn(|i| self.x[i] + t * d[i]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionTag {
    LInterior,
    LBoundary,
    Ba,
    OutsideClosure,
    /// Used for the origin only; other axis points are tagged `LInterior`.
    AxisRzero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Region {
    pub tag: RegionTag,
    pub on_axis_r0: bool,
    pub at_origin: bool,
}

/// Exact classification of a point against the cone and `B_a`.
pub fn classify(p: &Point, a: f64) -> Region {
    let r = p.r();
    let ax0 = p.x0().abs();
    let on_axis_r0 = r == 0.0;
    let at_origin = on_axis_r0 && ax0 == 0.0;
    let tag = if at_origin {
        RegionTag::AxisRzero
    } else if r < ax0 {
        RegionTag::LInterior
    } else if r == ax0 {
        RegionTag::LBoundary
    } else if p.ro() * a < 1.0 {
        RegionTag::Ba
    } else {
        RegionTag::OutsideClosure
    };
    Region { tag, on_axis_r0, at_origin }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MetricFamily {
    Minkowski,
    Ga,
    GaTilde,
    Ha,
    EguchiHanson,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSpec {
    pub family: MetricFamily,
    pub a: Option<f64>,
}

impl MetricSpec {
    pub fn new(family: MetricFamily, a: Option<f64>) -> Result<Self> {
        match (family, a) {
            (MetricFamily::Minkowski, None) => Ok(Self { family, a }),
            (MetricFamily::Minkowski, Some(_)) => Err(Error::Config("the Minkowski metric takes no parameter".into())),
            (_, Some(v)) if v > 0.0 && v.is_finite() => Ok(Self { family, a }),
            _ => Err(Error::Config(format!("{family:?} needs a parameter a > 0"))),
        }
    }

    pub fn minkowski() -> Self {
        Self { family: MetricFamily::Minkowski, a: None }
    }

    pub fn ga(a: f64) -> Self {
        Self { family: MetricFamily::Ga, a: Some(a) }
    }

    pub fn ga_tilde(a: f64) -> Self {
        Self { family: MetricFamily::GaTilde, a: Some(a) }
    }

    pub fn ha(a: f64) -> Self {
        Self { family: MetricFamily::Ha, a: Some(a) }
    }

    pub fn eguchi_hanson(a: f64) -> Self {
        Self { family: MetricFamily::EguchiHanson, a: Some(a) }
    }

    pub fn dim(&self) -> usize {
        match self.family {
            MetricFamily::Ha | MetricFamily::EguchiHanson => 4,
            _ => 5,
        }
    }

    fn param(&self) -> f64 {
        self.a.unwrap_or(0.0)
    }
}

/// Symmetric matrix of metric jets.
///
/// Only the leading `dim × dim` block is used. Matrix index `i` differentiates
/// along jet variable `i + offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricJets {
    pub dim: usize,
    pub offset: usize,
    pub g: [[Jet; DIM]; DIM],
}

impl MetricJets {
    pub fn zero(dim: usize) -> Self {
        Self { dim, offset: DIM - dim, g: [[Jet::zero(); DIM]; DIM] }
    }

    pub fn minkowski() -> Self {
        let mut m = Self::zero(5);
        for i in 0..5 {
            m.g[i][i] = Jet::constant(ETA[i]);
        }
        m
    }

    pub fn euclidean4() -> Self {
        let mut m = Self::zero(4);
        for i in 0..4 {
            m.g[i][i] = Jet::one();
        }
        m
    }

    #[inline]
    pub fn var(&self, i: usize) -> usize {
        i + self.offset
    }

    /// Derivative of a jet along matrix index `i`.
    #[inline]
    pub fn d(&self, f: &Jet, i: usize) -> Jet {
        f.partial(self.var(i))
    }

    pub fn order(&self) -> JetOrder {
        let mut o = JetOrder::MAX;
        for i in 0..self.dim {
            for j in 0..self.dim {
                o = o.min(self.g[i][j].order());
            }
        }
        o
    }

    pub fn truncate(mut self, order: JetOrder) -> Self {
        for row in self.g.iter_mut() {
            for e in row.iter_mut() {
                *e = e.truncate(order);
            }
        }
        self
    }

    pub fn scale(mut self, s: &Jet) -> Self {
        for i in 0..self.dim {
            for j in 0..self.dim {
                self.g[i][j] *= *s;
            }
        }
        self
    }

    pub fn plus(mut self, other: &MetricJets) -> Self {
        for i in 0..self.dim {
            for j in 0..self.dim {
                self.g[i][j] += other.g[i][j];
            }
        }
        self
    }

    pub fn minus(mut self, other: &MetricJets) -> Self {
        for i in 0..self.dim {
            for j in 0..self.dim {
                self.g[i][j] -= other.g[i][j];
            }
        }
        self
    }

    pub fn value(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.g[i][j].value)
    }

    /// `g(u, v)` as a jet.
    pub fn pair(&self, u: &VectorJet, v: &VectorJet) -> Jet {
        let mut acc = Jet::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += self.g[i][j] * u[i] * v[j];
            }
        }
        acc
    }

    /// `g(u, v)` using values only.
    pub fn pair_value(&self, u: &[f64; DIM], v: &[f64; DIM]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += self.g[i][j].value * u[i] * v[j];
            }
        }
        acc
    }

    /// Pulls the metric back along a Jacobian: `g'_ab = J_ca g_cd J_db`.
    pub fn pullback(&self, jac: &[[Jet; DIM]; DIM]) -> MetricJets {
        let n = self.dim;
        let mut tmp = [[Jet::zero(); DIM]; DIM];
        for c in 0..n {
            for b in 0..n {
                let mut acc = Jet::zero();
                for d in 0..n {
                    acc += self.g[c][d] * jac[d][b];
                }
                tmp[c][b] = acc;
            }
        }
        let mut out = MetricJets::zero(n);
        out.offset = self.offset;
        for a in 0..n {
            for b in a..n {
                let mut acc = Jet::zero();
                for c in 0..n {
                    acc += jac[c][a] * tmp[c][b];
                }
                out.g[a][b] = acc;
                out.g[b][a] = acc;
            }
        }
        out
    }
}

fn spatial_r2(x: &[Jet; DIM]) -> Jet {
    x[1].square() + x[2].square() + x[3].square() + x[4].square()
}

/// `q = r² − x₀²` as a jet; smooth everywhere.
pub fn cone_q(x: &[Jet; DIM]) -> Jet {
    spatial_r2(x) - x[0].square()
}

/// Jet of `r`.
pub fn radial_r(x: &[Jet; DIM]) -> Result<Jet> {
    let r2 = spatial_r2(x);
    if r2.value <= 0.0 {
        return Err(Error::Domain("r is not differentiable on the axis r = 0".into()));
    }
    r2.sqrt()
}

/// Jet of `r_o`: identically zero on `L∖L_o`, `(r² − x₀²)/r` off `L`.
pub fn radial_ro(x: &[Jet; DIM]) -> Result<Jet> {
    let q = cone_q(x);
    if q.value < 0.0 {
        return Ok(Jet::zero());
    }
    if q.value == 0.0 {
        return Err(Error::Ambiguous("r_o has one-sided derivatives on L_o; sample off the cone".into()));
    }
    Ok(q / radial_r(x)?)
}

/// Jet of `r_o²`, which is C¹ across `L_o`; on `L_o` it is the zero jet of order 1.
pub fn ro_squared(x: &[Jet; DIM]) -> Result<Jet> {
    let q = cone_q(x);
    if q.value < 0.0 {
        return Ok(Jet::zero());
    }
    if q.value == 0.0 {
        return Ok(Jet::zero().truncate(JetOrder::new(1)?));
    }
    Ok(q.square() / spatial_r2(x))
}

/// The three dual fields `∂/∂σᵢ` as Cartesian vectors, `Xᵢ(x)`; linear in `x`.
pub fn sigma_duals(x: &[Jet; DIM]) -> [VectorJet; 3] {
    let z = Jet::zero();
    [[z, -x[2], x[1], -x[4], x[3]], [z, -x[3], x[4], x[1], -x[2]], [z, -x[4], -x[3], x[2], x[1]]]
}

/// Cartesian components of `σ₁, σ₂, σ₃`.
pub fn sigma_forms(x: &[Jet; DIM]) -> Result<[CovectorJet; 3]> {
    let r2 = spatial_r2(x);
    if r2.value <= 0.0 {
        return Err(Error::Domain("σ-forms are singular on the axis r = 0".into()));
    }
    let inv = r2.recip()?;
    let duals = sigma_duals(x);
    Ok(duals.map(|v| v.map(|c| c * inv)))
}

/// Cartesian components of `α = (r² + x₀²) dr − 2 x₀ r dx₀`.
pub fn alpha_form(x: &[Jet; DIM]) -> Result<CovectorJet> {
    let r = radial_r(x)?;
    let r2 = spatial_r2(x);
    let w = (r2 + x[0].square()) / r;
    Ok([x[0] * r * -2.0, w * x[1], w * x[2], w * x[3], w * x[4]])
}

/// Jet of `β = √(1 − (a r_o)⁴)`; the constant 1 on `L`.
pub fn beta(x: &[Jet; DIM], a: f64) -> Result<Jet> {
    let q = cone_q(x);
    if q.value <= 0.0 {
        return Ok(Jet::one());
    }
    let ro2 = ro_squared(x)?;
    let arg = 1.0 - ro2.square() * a.powi(4);
    if arg.value <= 0.0 {
        return Err(Error::Domain(format!("β needs a·r_o < 1, got a·r_o = {:.6}", a * ro2.value.sqrt())));
    }
    arg.sqrt()
}

/// The vector field `T = −(r² + x₀²) ∂_r − 2 r x₀ ∂_{x₀}`.
pub fn field_t(x: &[Jet; DIM]) -> Result<VectorJet> {
    let r = radial_r(x)?;
    let r2 = spatial_r2(x);
    let w = (r2 + x[0].square()) / r;
    Ok([r * x[0] * -2.0, -(w * x[1]), -(w * x[2]), -(w * x[3]), -(w * x[4])])
}

/// The vector field `V = −2 x₀ r ∂_r − (r² + x₀²) ∂_{x₀}`; smooth everywhere.
pub fn field_v(x: &[Jet; DIM]) -> VectorJet {
    let r2 = spatial_r2(x);
    let m = x[0] * -2.0;
    [-(r2 + x[0].square()), m * x[1], m * x[2], m * x[3], m * x[4]]
}

/// `∂_r` as a Cartesian vector.
pub fn field_dr(x: &[Jet; DIM]) -> Result<VectorJet> {
    let inv = radial_r(x)?.recip()?;
    Ok([Jet::zero(), x[1] * inv, x[2] * inv, x[3] * inv, x[4] * inv])
}

fn outer(u: &CovectorJet, v: &CovectorJet, dim: usize) -> [[Jet; DIM]; DIM] {
    let mut m = [[Jet::zero(); DIM]; DIM];
    for i in 0..dim {
        for j in i..dim {
            let e = u[i] * v[j];
            m[i][j] = e;
            m[j][i] = e;
        }
    }
    m
}

/// The three summands of `g_a = g₀ − ω_a + ρ_a` at a jet point.
#[derive(Debug, Clone, Copy)]
pub struct GaParts {
    pub g0: MetricJets,
    pub omega: MetricJets,
    pub rho: MetricJets,
}

fn ga_parts_at(x: &[Jet; DIM], a: f64) -> Result<GaParts> {
    let g0 = MetricJets::minkowski();
    let q = cone_q(x);
    if q.value <= 0.0 {
        // g₀ branch. On L_o and at the origin the metric is only C¹.
        let order = if q.value == 0.0 { JetOrder::new(1)? } else { JetOrder::MAX };
        let g0 = g0.truncate(order);
        let zero = MetricJets::zero(5).truncate(order);
        return Ok(GaParts { g0, omega: zero, rho: zero });
    }
    let r2 = spatial_r2(x);
    let ro2 = q.square() / r2;
    let aro4 = ro2.square() * a.powi(4);
    let beta2 = 1.0 - aro4;
    if beta2.value <= 0.0 {
        return Err(Error::Domain(format!("g_a is defined only for r_o < 1/a, got r_o = {:.6}", ro2.value.sqrt())));
    }
    // (r σ₃)² = n₃ ⊗ n₃ / r².
    let z = Jet::zero();
    let n3 = [z, -x[4], -x[3], x[2], x[1]];
    let wcoef = aro4 / r2;
    let mut omega = MetricJets::zero(5);
    omega.g = outer(&n3, &n3, 5);
    omega = omega.scale(&wcoef);
    // α / r = −2x₀ dx₀ + ((r² + x₀²)/r²) Σ xᵢ dxᵢ.
    let w = (r2 + x[0].square()) / r2;
    let al = [x[0] * -2.0, w * x[1], w * x[2], w * x[3], w * x[4]];
    let rcoef = ro2 * a.powi(4) / beta2;
    let mut rho = MetricJets::zero(5);
    rho.g = outer(&al, &al, 5);
    rho = rho.scale(&rcoef);
    Ok(GaParts { g0, omega, rho })
}

/// Decomposition `(g₀, ω_a, ρ_a)` at a point of `B̃_a`.
pub fn decompose_ga(p: &Point, a: f64) -> Result<GaParts> {
    ga_parts_at(&p.seeded(), a)
}

fn ha_at(x: &[Jet; DIM], a: f64) -> Result<MetricJets> {
    let r2 = spatial_r2(x);
    let a4 = a.powi(4);
    let den = 1.0 - r2.square() * a4;
    if den.value <= 0.0 {
        return Err(Error::Domain("h_a is defined only for r < 1/a".into()));
    }
    let y = [x[1], x[2], x[3], x[4], Jet::zero()];
    let z = Jet::zero();
    let n3 = [-x[4], -x[3], x[2], x[1], z];
    let radial = outer(&y, &y, 4);
    let twist = outer(&n3, &n3, 4);
    let c1 = r2 * a4 / den;
    let c2 = r2 * a4;
    let mut m = MetricJets::euclidean4();
    for i in 0..4 {
        for j in 0..4 {
            m.g[i][j] = m.g[i][j] + c1 * radial[i][j] - c2 * twist[i][j];
        }
    }
    Ok(m)
}

fn eh_at(x: &[Jet; DIM], a: f64) -> Result<MetricJets> {
    let r2 = spatial_r2(x);
    if r2.value.sqrt() <= a {
        return Err(Error::Domain(format!("g_EH is defined only for R > a, got R = {:.6}", r2.value.sqrt())));
    }
    let a4 = a.powi(4);
    let r4 = r2.square();
    let y = [x[1], x[2], x[3], x[4], Jet::zero()];
    let z = Jet::zero();
    let n3 = [-x[4], -x[3], x[2], x[1], z];
    let radial = outer(&y, &y, 4);
    let twist = outer(&n3, &n3, 4);
    let c1 = ((r4 - a4) * r2).recip()? * a4;
    let c2 = (r4 * r2).recip()? * a4;
    let mut m = MetricJets::euclidean4();
    for i in 0..4 {
        for j in 0..4 {
            m.g[i][j] = m.g[i][j] + c1 * radial[i][j] - c2 * twist[i][j];
        }
    }
    Ok(m)
}

/// Metric of the given family at a jet point (the jets may themselves be
/// functions of other coordinates).
pub fn metric_at(spec: &MetricSpec, x: &[Jet; DIM]) -> Result<MetricJets> {
    let a = spec.param();
    match spec.family {
        MetricFamily::Minkowski => Ok(MetricJets::minkowski()),
        MetricFamily::Ga => {
            let p = ga_parts_at(x, a)?;
            Ok(p.g0.minus(&p.omega).plus(&p.rho))
        }
        MetricFamily::GaTilde => {
            let q = cone_q(x);
            if q.value == 0.0 {
                return Err(Error::Singular("g̃_a is singular on L_o".into()));
            }
            let p = ga_parts_at(x, a)?;
            let g = p.g0.minus(&p.omega).plus(&p.rho);
            Ok(g.scale(&q.square().recip()?))
        }
        MetricFamily::Ha => ha_at(x, a),
        MetricFamily::EguchiHanson => eh_at(x, a),
    }
}

/// Metric of the given family at a point, as jets in the standard coordinates.
pub fn metric_components(spec: &MetricSpec, p: &Point) -> Result<MetricJets> {
    metric_at(spec, &p.seeded())
}

/// Jets of `Ψ(x) = (−x₀, x₁, …, x₄)/(r² − x₀²)` in terms of the input jets.
pub fn psi_jets(x: &[Jet; DIM]) -> Result<[Jet; DIM]> {
    let q = cone_q(x);
    if q.value == 0.0 {
        return Err(Error::Singular("Ψ is singular on L_o".into()));
    }
    let inv = q.recip()?;
    Ok([-(x[0] * inv), x[1] * inv, x[2] * inv, x[3] * inv, x[4] * inv])
}

/// `Ψ(p)`; the map is an involution off `L_o`.
pub fn psi_map(p: &Point) -> Result<Point> {
    let q = p.q();
    if q == 0.0 {
        return Err(Error::Singular("Ψ is singular on L_o".into()));
    }
    Ok(Point::new([-p.x[0] / q, p.x[1] / q, p.x[2] / q, p.x[3] / q, p.x[4] / q]))
}

/// Jacobian `∂Ψᵃ/∂xᵇ` as jets at the jet point `x`.
pub fn psi_jacobian_at(x: &[Jet; DIM]) -> Result<[[Jet; DIM]; DIM]> {
    let q = cone_q(x);
    if q.value == 0.0 {
        return Err(Error::Singular("Ψ is singular on L_o".into()));
    }
    let inv = q.recip()?;
    let inv2 = inv.square();
    let mut j = [[Jet::zero(); DIM]; DIM];
    for a in 0..DIM {
        for b in 0..DIM {
            let mut e = x[a] * x[b] * inv2 * (-2.0 * ETA[a] * ETA[b]);
            if a == b {
                e += inv * ETA[a];
            }
            j[a][b] = e;
        }
    }
    Ok(j)
}

/// Jacobian of `Ψ` at `p` as jets in `x`.
pub fn psi_pushforward(p: &Point) -> Result<[[Jet; DIM]; DIM]> {
    psi_jacobian_at(&p.seeded())
}

/// Pulls a metric given in the standard coordinates back to `Ψ`-coordinates,
/// evaluated at `y = Ψ(x)`. Returned jets are functions of `y`.
pub fn metric_in_psi_coords(spec: &MetricSpec, y: &Point) -> Result<MetricJets> {
    let yj = y.seeded();
    let x = psi_jets(&yj)?;
    let jac: [[Jet; DIM]; DIM] = std::array::from_fn(|a| std::array::from_fn(|b| x[a].partial(b)));
    let g = metric_at(spec, &x)?;
    Ok(g.pullback(&jac))
}

/// Signature counts `(negative, positive)` of a symmetric value matrix.
pub fn signature(m: &DMatrix<f64>) -> (usize, usize) {
    let eig = m.clone().symmetric_eigen();
    let neg = eig.eigenvalues.iter().filter(|&&v| v < 0.0).count();
    let pos = eig.eigenvalues.iter().filter(|&&v| v > 0.0).count();
    (neg, pos)
}

/// Value matrix of a five-dimensional metric.
pub fn value5(m: &MetricJets) -> Matrix5<f64> {
    Matrix5::from_fn(|i, j| m.g[i][j].value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pt(x: [f64; 5]) -> Point {
        Point::new(x)
    }

    #[test]
    fn classify_examples() {
        let r = classify(&pt([0.5, 0.0, 0.0, 0.0, 0.0]), 1.0);
        assert_eq!(r.tag, RegionTag::LInterior);
        assert!(r.on_axis_r0 && !r.at_origin);
        assert_eq!(classify(&pt([1.0, 1.0, 0.0, 0.0, 0.0]), 1.0).tag, RegionTag::LBoundary);
        assert_eq!(classify(&pt([0.0, 0.5, 0.0, 0.0, 0.0]), 1.0).tag, RegionTag::Ba);
        assert_eq!(classify(&pt([0.0, 2.0, 0.0, 0.0, 0.0]), 1.0).tag, RegionTag::OutsideClosure);
        let o = classify(&pt([0.0; 5]), 1.0);
        assert!(o.at_origin && o.on_axis_r0);
        assert_eq!(o.tag, RegionTag::AxisRzero);
    }

    #[test]
    fn radial_examples() {
        let r = radial_r(&seed([0.0, 3.0, 4.0, 0.0, 0.0])).unwrap();
        assert_eq!(r.value, 5.0);
        let r = radial_r(&seed([0.0, 1.0, 0.0, 0.0, 0.0])).unwrap();
        assert_eq!(r.grad[1], 1.0);
        assert_relative_eq!(r.d2(2, 2), 1.0, epsilon = 1e-14);
        assert!(radial_r(&seed([1.0, 0.0, 0.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn ro_examples() {
        assert_eq!(radial_ro(&seed([0.0, 1.0, 0.0, 0.0, 0.0])).unwrap().value, 1.0);
        assert_eq!(radial_ro(&seed([1.0, 2.0, 0.0, 0.0, 0.0])).unwrap().value, 1.5);
        let inside = radial_ro(&seed([2.0, 1.0, 0.5, 0.0, 0.0])).unwrap();
        assert_eq!(inside.value, 0.0);
        assert!(inside.grad.iter().all(|&g| g == 0.0));
        assert!(matches!(radial_ro(&seed([1.0, 1.0, 0.0, 0.0, 0.0])), Err(Error::Ambiguous(_))));
    }

    #[test]
    fn sigma_one_at_unit_x1() {
        let s = sigma_forms(&seed([0.0, 1.0, 0.0, 0.0, 0.0])).unwrap();
        let v: Vec<f64> = s[0].iter().map(|j| j.value).collect();
        assert_eq!(v, vec![0.0, 0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn alpha_at_x0_zero() {
        let x = seed([0.0, 0.6, 0.8, 0.0, 0.0]);
        let al = alpha_form(&x).unwrap();
        let dr = field_dr(&x).unwrap();
        assert_eq!(al[0].value, 0.0);
        for i in 1..5 {
            assert_relative_eq!(al[i].value, dr[i].value, epsilon = 1e-15);
        }
    }

    #[test]
    fn beta_examples() {
        assert_eq!(beta(&seed([2.0, 1.0, 0.0, 0.0, 0.0]), 1.0).unwrap().value, 1.0);
        let b = beta(&seed([0.0, 0.5, 0.0, 0.0, 0.0]), 1.0).unwrap();
        assert_relative_eq!(b.value, 0.9375f64.sqrt(), epsilon = 1e-15);
        assert!(beta(&seed([0.0, 1.5, 0.0, 0.0, 0.0]), 1.0).is_err());
    }

    #[test]
    fn ga_on_l_is_minkowski() {
        let g = metric_components(&MetricSpec::ga(1.0), &pt([2.0, 0.3, 0.4, 0.1, -0.2])).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let e = if i == j { ETA[i] } else { 0.0 };
                assert_eq!(g.g[i][j].value, e);
            }
        }
    }

    #[test]
    fn ga_v_length_example() {
        let x = seed([0.0, 0.5, 0.0, 0.0, 0.0]);
        let g = metric_at(&MetricSpec::ga(1.0), &x).unwrap();
        let v = field_v(&x);
        assert_relative_eq!(g.pair(&v, &v).value, -0.0625, epsilon = 1e-15);
    }

    #[test]
    fn psi_example_and_involution() {
        let p = pt([1.0, 2.0, 0.0, 0.0, 0.0]);
        let y = psi_map(&p).unwrap();
        assert_relative_eq!(y.x[0], -1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(y.r(), 2.0 / 3.0, epsilon = 1e-15);
        let back = psi_map(&y).unwrap();
        for i in 0..5 {
            assert_relative_eq!(back.x[i], p.x[i], epsilon = 1e-14);
        }
        assert!(psi_map(&pt([1.0, 1.0, 0.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn ga_tilde_singular_on_cone() {
        assert!(matches!(
            metric_components(&MetricSpec::ga_tilde(1.0), &pt([1.0, 0.0, 1.0, 0.0, 0.0])),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn spec_validation() {
        assert!(MetricSpec::new(MetricFamily::Ga, Some(-1.0)).is_err());
        assert!(MetricSpec::new(MetricFamily::Minkowski, Some(1.0)).is_err());
        assert!(MetricSpec::new(MetricFamily::Ha, Some(0.5)).is_ok());
    }
}
