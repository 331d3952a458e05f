//! Numerical smoothness classes across the light cone `L_o`.
//!
//! A field is probed along curves that cross `L_o` (or pass through the
//! origin) by comparing all jet partials of a given order at the two points
//! `x(±h)` for a geometric sequence of spacings `h`. The gap sequence is
//! classified as continuous (gap → 0), jump (gap → positive constant) or
//! divergent (gap grows). This is a surrogate for the class along the tested
//! curves, not a proof of the class on an open set.

use serde::{Deserialize, Serialize};

use crate::curvature::curvature;
use crate::geometry::{cone_q, metric_at, radial_r, ro_squared, MetricSpec, Point};
use crate::jets::{Jet, DIM};
use crate::{Error, Result};

/// Highest derivative order carried by the jets.
pub const MAX_ORDER: usize = 3;

/// `r_oᵐ · f_l` with `f_l = r^{−l_r} x₀^{l₀} ⋯ x₄^{l₄}`, extended by zero to `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialSpec {
    pub m: u32,
    /// `(l_r, l₀, …, l₄)`.
    pub l: [u32; 6],
}

impl MonomialSpec {
    pub fn new(m: u32, l: [u32; 6]) -> Result<Self> {
        if m == 0 {
            return Err(Error::Config("the power of r_o must be positive".into()));
        }
        Ok(Self { m, l })
    }

    /// `s_l = −l_r + Σ lᵢ`.
    pub fn s_l(&self) -> i32 {
        -(self.l[0] as i32) + self.l[1..].iter().map(|&v| v as i32).sum::<i32>()
    }

    /// `k = min(m, m + s_l)`; the monomial is `C^{k−1}` but not `C^k`.
    pub fn predicted_k(&self) -> i32 {
        let m = self.m as i32;
        m.min(m + self.s_l())
    }

    pub fn predicted_class(&self) -> i32 {
        self.predicted_k() - 1
    }

    /// Jet of `f_l` alone; needs `r > 0`.
    pub fn fl_jet(&self, x: &[Jet; DIM]) -> Result<Jet> {
        let r = radial_r(x)?;
        let mut out = r.powi(-(self.l[0] as i32))?;
        for i in 0..DIM {
            if self.l[i + 1] > 0 {
                out *= x[i].powi(self.l[i + 1] as i32)?;
            }
        }
        Ok(out)
    }

    /// Jet of `r_oᵐ · f_l`; the zero jet on `L∖L_o`.
    pub fn jet(&self, x: &[Jet; DIM]) -> Result<Jet> {
        let q = cone_q(x);
        if q.value < 0.0 {
            return Ok(Jet::zero());
        }
        if q.value == 0.0 {
            return Err(Error::Ambiguous("monomials are probed off L_o only".into()));
        }
        let r = radial_r(x)?;
        let ro = q / r;
        Ok(ro.powi(self.m as i32)? * self.fl_jet(x)?)
    }
}

/// Scalar fields whose smoothness across `L_o` can be probed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ScalarField {
    Monomial(MonomialSpec),
    /// `r_o²`, C¹ across `L_o`.
    RoSquared,
    /// Component `(i, j)` of `g_a`.
    GaComponent {
        i: usize,
        j: usize,
    },
    /// Lowered Weyl component `W_{abcd}` of `g_a`; first derivatives only.
    WeylComponent {
        idx: [usize; 4],
    },
}

impl ScalarField {
    pub fn max_order(&self) -> usize {
        match self {
            ScalarField::WeylComponent { .. } => 1,
            _ => MAX_ORDER,
        }
    }

    pub fn eval(&self, p: &Point, a: f64) -> Result<Jet> {
        let x = p.seeded();
        match *self {
            ScalarField::Monomial(spec) => spec.jet(&x),
            ScalarField::RoSquared => ro_squared(&x),
            ScalarField::GaComponent { i, j } => {
                if i >= DIM || j >= DIM {
                    return Err(Error::Domain(format!("component ({i}, {j}) out of range")));
                }
                Ok(metric_at(&MetricSpec::ga(a), &x)?.g[i][j])
            }
            ScalarField::WeylComponent { idx } => {
                if idx.iter().any(|&v| v >= DIM) {
                    return Err(Error::Domain(format!("component {idx:?} out of range")));
                }
                let g = metric_at(&MetricSpec::ga(a), &x)?;
                let cb = curvature(&g)?;
                Ok(*cb.weyl.get(idx[0], idx[1], idx[2], idx[3]))
            }
        }
    }
}

/// A curve meeting `L_o` once at `base`: `x(h) = base + h·plus` on the `B_a`
/// side and `x(−h) = base + h·minus` on the `L` side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingCurve {
    pub base: Point,
    pub plus: [f64; DIM],
    pub minus: [f64; DIM],
    /// Largest spacing.
    pub h0: f64,
    /// Number of spacings `h0·2^{−j}`.
    pub halvings: usize,
}

fn side(p: &Point) -> f64 {
    p.r() - p.x0().abs()
}

impl CrossingCurve {
    /// Straight line through `base ∈ L_o∖{0}` along `dir`, oriented so that
    /// positive parameters lie on the `B_a` side.
    pub fn straight(base: Point, dir: [f64; DIM], h0: f64, halvings: usize) -> Result<Self> {
        let r = base.r();
        if r == 0.0 {
            return Err(Error::NonTransversal("base point is the origin".into()));
        }
        if (r - base.x0().abs()).abs() > 1e-12 * r {
            return Err(Error::NonTransversal(format!("base point is off L_o by {:.3e}", r - base.x0().abs())));
        }
        let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        let spatial: f64 = (1..DIM).map(|i| base.x[i] * dir[i]).sum::<f64>() / r;
        let slope = spatial - base.x0().signum() * dir[0];
        if norm == 0.0 || slope.abs() < 1e-6 * norm {
            return Err(Error::NonTransversal(format!("direction is tangent to L_o (slope {slope:.3e})")));
        }
        let s = slope.signum();
        let plus = dir.map(|v| s * v);
        let minus = plus.map(|v| -v);
        Self::checked(base, plus, minus, h0, halvings)
    }

    /// Kinked curve through the origin: `h·inside ∈ B_a`, `h·outside ∈ L`.
    pub fn through_origin(inside: [f64; DIM], outside: [f64; DIM], h0: f64, halvings: usize) -> Result<Self> {
        Self::checked(Point::new([0.0; DIM]), inside, outside, h0, halvings)
    }

    fn checked(base: Point, plus: [f64; DIM], minus: [f64; DIM], h0: f64, halvings: usize) -> Result<Self> {
        if h0.is_nan() || h0 <= 0.0 || halvings < 4 {
            return Err(Error::Config("crossing curves need h0 > 0 and at least 4 spacings".into()));
        }
        let c = Self { base, plus, minus, h0, halvings };
        for h in c.spacings() {
            let (p, m) = c.points(h);
            if !(side(&p) > 0.0 && side(&m) < 0.0) {
                return Err(Error::NonTransversal(format!("no sign change of r − |x₀| at spacing {h:.3e}")));
            }
        }
        Ok(c)
    }

    pub fn spacings(&self) -> Vec<f64> {
        (0..self.halvings).map(|j| self.h0 * 0.5f64.powi(j as i32)).collect()
    }

    /// The pair `(x(h), x(−h))`.
    pub fn points(&self, h: f64) -> (Point, Point) {
        (self.base.add_scaled(&self.plus, h), self.base.add_scaled(&self.minus, h))
    }
}

/// Behaviour of the one-sided gap of a derivative order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderVerdict {
    Continuous,
    Jump,
    Divergent,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderProbe {
    pub order: usize,
    pub verdict: OrderVerdict,
    /// `max_I |∂_I F(x(h)) − ∂_I F(x(−h))|` for each spacing.
    pub gaps: Vec<f64>,
}

/// Smoothness class along a curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SmoothnessClass {
    /// `C^k` but not `C^{k+1}`; `−1` means discontinuous.
    Exactly(i32),
    /// Continuous through every probed order.
    AtLeast(i32),
    Indeterminate,
}

impl SmoothnessClass {
    /// The smaller of two classes along different curves.
    pub fn min(self, other: SmoothnessClass) -> SmoothnessClass {
        use SmoothnessClass::*;
        match (self, other) {
            (Indeterminate, _) | (_, Indeterminate) => Indeterminate,
            (Exactly(a), Exactly(b)) => Exactly(a.min(b)),
            (Exactly(a), AtLeast(b)) | (AtLeast(b), Exactly(a)) => {
                if a <= b {
                    Exactly(a)
                } else {
                    Indeterminate
                }
            }
            (AtLeast(a), AtLeast(b)) => AtLeast(a.min(b)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessReport {
    pub orders: Vec<OrderProbe>,
}

impl SmoothnessReport {
    pub fn class(&self) -> SmoothnessClass {
        for o in &self.orders {
            match o.verdict {
                OrderVerdict::Continuous => {}
                OrderVerdict::Jump | OrderVerdict::Divergent => {
                    return SmoothnessClass::Exactly(o.order as i32 - 1);
                }
                OrderVerdict::Indeterminate => return SmoothnessClass::Indeterminate,
            }
        }
        SmoothnessClass::AtLeast(self.orders.len() as i32 - 1)
    }
}

/// Nondecreasing multi-indices of the given order.
pub fn multi_indices(order: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..order {
        let mut next = Vec::new();
        for idx in &out {
            let start = idx.last().copied().unwrap_or(0);
            for i in start..DIM {
                let mut v = idx.clone();
                v.push(i);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Classifies a gap sequence taken at halving spacings.
///
/// Continuous: below `floor` or decreasing by at least 5% per halving over the
/// last three steps. Jump: the last three gaps agree within 5%. Divergent: the
/// gap grows by more than 1.5 per halving over the last three steps.
pub fn classify_gaps(gaps: &[f64], floor: f64) -> OrderVerdict {
    let n = gaps.len();
    if n < 4 || gaps.iter().any(|g| !g.is_finite()) {
        return OrderVerdict::Indeterminate;
    }
    let last = gaps[n - 1];
    if last <= floor {
        return OrderVerdict::Continuous;
    }
    let ratios: Vec<f64> = (n - 3..n).map(|i| gaps[i] / gaps[i - 1]).collect();
    if ratios.iter().all(|&q| q > 1.5) {
        return OrderVerdict::Divergent;
    }
    let tail = &gaps[n - 3..];
    let hi = tail.iter().cloned().fold(f64::MIN, f64::max);
    let lo = tail.iter().cloned().fold(f64::MAX, f64::min);
    if hi <= 1.05 * lo {
        return OrderVerdict::Jump;
    }
    if ratios.iter().all(|&q| q < 0.95) {
        return OrderVerdict::Continuous;
    }
    OrderVerdict::Indeterminate
}

/// Probes the derivative orders `0..=max_order` of `field` along `curve`.
pub fn smoothness_probe(
    field: &ScalarField,
    curve: &CrossingCurve,
    max_order: usize,
    a: f64,
) -> Result<SmoothnessReport> {
    if max_order > field.max_order() {
        return Err(Error::Order { requested: max_order, available: field.max_order() });
    }
    let indices: Vec<Vec<Vec<usize>>> = (0..=max_order).map(multi_indices).collect();
    let mut gaps = vec![Vec::new(); max_order + 1];
    let mut scale = vec![0.0f64; max_order + 1];
    for h in curve.spacings() {
        let (p, m) = curve.points(h);
        let jp = field.eval(&p, a)?;
        let jm = field.eval(&m, a)?;
        for (k, idx_k) in indices.iter().enumerate() {
            let mut gap: f64 = 0.0;
            for idx in idx_k {
                let u = jp.extract(idx)?;
                let v = jm.extract(idx)?;
                scale[k] = scale[k].max(u.abs()).max(v.abs());
                gap = gap.max((u - v).abs());
            }
            gaps[k].push(gap);
        }
    }
    // The floor is relative to the size of the partials of the same order.
    let orders = gaps
        .into_iter()
        .enumerate()
        .map(|(order, g)| OrderProbe { order, verdict: classify_gaps(&g, 1e-11 * (1.0 + scale[order])), gaps: g })
        .collect();
    Ok(SmoothnessReport { orders })
}

/// Smoothness class of `g_a` along `curve`: the smallest class over its components.
pub fn ga_class(curve: &CrossingCurve, a: f64) -> Result<SmoothnessClass> {
    let mut class = SmoothnessClass::AtLeast(MAX_ORDER as i32);
    for i in 0..DIM {
        for j in i..DIM {
            let rep = smoothness_probe(&ScalarField::GaComponent { i, j }, curve, MAX_ORDER, a)?;
            class = class.min(rep.class());
        }
    }
    Ok(class)
}

/// Default direction into `B_a` for origin probes; all coordinates nonzero.
pub const ORIGIN_INSIDE: [f64; DIM] = [0.21, 0.62, -0.47, 0.38, 0.55];
/// Default direction into `L` for origin probes; all coordinates nonzero.
pub const ORIGIN_OUTSIDE: [f64; DIM] = [0.93, 0.17, 0.29, -0.13, 0.11];

/// A generic cone point with every coordinate nonzero and a transversal direction.
pub fn default_cone_curve() -> Result<CrossingCurve> {
    let sp = [0.3, -0.4, 0.5, 0.2];
    let r = sp.iter().map(|v: &f64| v * v).sum::<f64>().sqrt();
    let base = Point::new([0.8 * r, sp[0] * 0.8, sp[1] * 0.8, sp[2] * 0.8, sp[3] * 0.8]);
    let base = Point::new([base.r(), base.x[1], base.x[2], base.x[3], base.x[4]]);
    CrossingCurve::straight(base, [-0.6, 0.3, 0.1, -0.2, 0.4], 0.02, 12)
}

/// Class of a monomial: the smaller of the classes across `L_o∖{0}` and
/// through the origin.
pub fn monomial_class(spec: &MonomialSpec, a: f64) -> Result<SmoothnessClass> {
    let field = ScalarField::Monomial(*spec);
    let cone = smoothness_probe(&field, &default_cone_curve()?, MAX_ORDER, a)?.class();
    let origin = CrossingCurve::through_origin(ORIGIN_INSIDE, ORIGIN_OUTSIDE, 0.02, 12)?;
    let at_origin = smoothness_probe(&field, &origin, MAX_ORDER, a)?.class();
    Ok(cone.min(at_origin))
}

/// The class a probe limited to `MAX_ORDER` should report for `spec`.
pub fn expected_probe_class(spec: &MonomialSpec) -> SmoothnessClass {
    let k = spec.predicted_class();
    if k >= MAX_ORDER as i32 {
        SmoothnessClass::AtLeast(MAX_ORDER as i32)
    } else {
        SmoothnessClass::Exactly(k)
    }
}

/// Sampled supremum of `|f_l|` over points of `B_a^t = B_a ∩ {r ≤ t}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundednessEstimate {
    pub sup: f64,
    /// `t^{s_l}`, the bound for `s_l ≥ 0`.
    pub bound: f64,
    pub count: usize,
}

impl BoundednessEstimate {
    pub fn holds(&self) -> bool {
        self.sup <= self.bound * (1.0 + 1e-9)
    }
}

/// Evaluates `|f_l|` on the points of `points` lying in `B_a^t`.
pub fn boundedness_probe(spec: &MonomialSpec, t: f64, a: f64, points: &[Point]) -> Result<BoundednessEstimate> {
    let mut sup: f64 = 0.0;
    let mut count = 0;
    for p in points {
        let r = p.r();
        if r > t || r <= p.x0().abs() || p.ro() * a >= 1.0 {
            continue;
        }
        sup = sup.max(spec.fl_jet(&p.seeded())?.value.abs());
        count += 1;
    }
    if count == 0 {
        return Err(Error::EmptyRegion(format!("no sample lies in B_a^t for t = {t}")));
    }
    Ok(BoundednessEstimate { sup, bound: t.powi(spec.s_l()), count })
}

/// Coefficients of `dr_o` in the standard coordinates at a point of `B_a`.
pub fn dro_coefficients(p: &Point) -> Result<[f64; DIM]> {
    let x = p.seeded();
    let q = cone_q(&x);
    if q.value <= 0.0 {
        return Err(Error::Domain("dr_o is evaluated on B_a only".into()));
    }
    let ro = q / radial_r(&x)?;
    Ok(ro.grad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ro_squared_is_c1() {
        let c = default_cone_curve().unwrap();
        let rep = smoothness_probe(&ScalarField::RoSquared, &c, 3, 1.0).unwrap();
        assert_eq!(rep.orders[1].verdict, OrderVerdict::Continuous);
        assert_eq!(rep.orders[2].verdict, OrderVerdict::Jump);
        assert_eq!(rep.class(), SmoothnessClass::Exactly(1));
    }

    #[test]
    fn ro_times_order_zero_is_c0() {
        let spec = MonomialSpec::new(1, [1, 1, 0, 0, 0, 0]).unwrap();
        assert_eq!(spec.s_l(), 0);
        assert_eq!(monomial_class(&spec, 1.0).unwrap(), SmoothnessClass::Exactly(0));
    }

    #[test]
    fn negative_order_is_discontinuous_at_origin() {
        let spec = MonomialSpec::new(1, [2, 0, 1, 0, 0, 0]).unwrap();
        assert_eq!(spec.s_l(), -1);
        assert_eq!(monomial_class(&spec, 1.0).unwrap(), SmoothnessClass::Exactly(-1));
    }

    #[test]
    fn ga_is_c1_not_c2() {
        let c = default_cone_curve().unwrap();
        assert_eq!(ga_class(&c, 1.0).unwrap(), SmoothnessClass::Exactly(1));
    }

    #[test]
    fn tangent_direction_is_rejected() {
        let base = Point::new([1.0, 1.0, 0.0, 0.0, 0.0]);
        let err = CrossingCurve::straight(base, [1.0, 1.0, 0.0, 0.0, 0.0], 0.01, 8).unwrap_err();
        assert!(matches!(err, Error::NonTransversal(_)));
        let off = Point::new([0.5, 1.0, 0.0, 0.0, 0.0]);
        assert!(CrossingCurve::straight(off, [1.0, 0.0, 0.0, 0.0, 0.0], 0.01, 8).is_err());
    }

    #[test]
    fn gap_classification() {
        let cont: Vec<f64> = (0..8).map(|j| 0.5f64.powi(j)).collect();
        let jump: Vec<f64> = (0..8).map(|j| 1.0 + 0.5f64.powi(j + 6)).collect();
        let div: Vec<f64> = (0..8).map(|j| 2f64.powi(j)).collect();
        assert_eq!(classify_gaps(&cont, 1e-12), OrderVerdict::Continuous);
        assert_eq!(classify_gaps(&jump, 1e-12), OrderVerdict::Jump);
        assert_eq!(classify_gaps(&div, 1e-12), OrderVerdict::Divergent);
        assert_eq!(classify_gaps(&[1.0, 2.0], 1e-12), OrderVerdict::Indeterminate);
    }

    #[test]
    fn multi_index_counts() {
        assert_eq!(multi_indices(0).len(), 1);
        assert_eq!(multi_indices(1).len(), 5);
        assert_eq!(multi_indices(2).len(), 15);
        assert_eq!(multi_indices(3).len(), 35);
    }
}
