//! Truncated multivariate Taylor arithmetic over R⁵.
//!
//! A [`Jet3`] carries the value of a scalar field together with all of its
//! partial derivatives through order three at one point. Arithmetic on jets
//! applies the Leibniz and Faà di Bruno rules, so any composite built from
//! seeded coordinates carries exact derivatives of the composite.
//!
//! Storage convention: entries are plain partial derivatives, never divided
//! by factorials. `hess[{i,j}] = ∂ᵢ∂ⱼf`, `third[{i,j,k}] = ∂ᵢ∂ⱼ∂ₖf`, each
//! stored once per unordered index multiset.
//!
//! Every jet also records the order through which its entries are valid.
//! Taking a partial derivative lowers that order by one, binary operations
//! keep the minimum, and [`Jet3::extract`] refuses to read past it.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::Error;

/// Number of independent variables.
pub const DIM: usize = 5;
const N2: usize = 15;
const N3: usize = 35;

const fn build_h2() -> [[usize; DIM]; DIM] {
    let mut t = [[0usize; DIM]; DIM];
    let mut n = 0;
    let mut i = 0;
    while i < DIM {
        let mut j = i;
        while j < DIM {
            t[i][j] = n;
            t[j][i] = n;
            n += 1;
            j += 1;
        }
        i += 1;
    }
    t
}

const fn build_h3() -> [[[usize; DIM]; DIM]; DIM] {
    let mut t = [[[0usize; DIM]; DIM]; DIM];
    let mut n = 0;
    let mut i = 0;
    while i < DIM {
        let mut j = i;
        while j < DIM {
            let mut k = j;
            while k < DIM {
                t[i][j][k] = n;
                t[i][k][j] = n;
                t[j][i][k] = n;
                t[j][k][i] = n;
                t[k][i][j] = n;
                t[k][j][i] = n;
                n += 1;
                k += 1;
            }
            j += 1;
        }
        i += 1;
    }
    t
}

const fn build_pairs() -> [(usize, usize); N2] {
    let mut out = [(0usize, 0usize); N2];
    let mut n = 0;
    let mut i = 0;
    while i < DIM {
        let mut j = i;
        while j < DIM {
            out[n] = (i, j);
            n += 1;
            j += 1;
        }
        i += 1;
    }
    out
}

const fn build_triples() -> [(usize, usize, usize); N3] {
    let mut out = [(0usize, 0usize, 0usize); N3];
    let mut n = 0;
    let mut i = 0;
    while i < DIM {
        let mut j = i;
        while j < DIM {
            let mut k = j;
            while k < DIM {
                out[n] = (i, j, k);
                n += 1;
                k += 1;
            }
            j += 1;
        }
        i += 1;
    }
    out
}

const H2: [[usize; DIM]; DIM] = build_h2();
const H3: [[[usize; DIM]; DIM]; DIM] = build_h3();
const PAIRS: [(usize, usize); N2] = build_pairs();
const TRIPLES: [(usize, usize, usize); N3] = build_triples();

/// Scalar field a jet is built over: `f64` or `Complex64`.
pub trait Scalar:
    Copy
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    fn modulus(self) -> f64;
    fn conj(self) -> Self;
    /// `Some(x)` when the scalar is a real number (imaginary part exactly 0).
    fn as_real(self) -> Option<f64>;
    fn is_finite(self) -> bool;
}

impl Scalar for f64 {
    #[inline]
    fn zero() -> Self {
        0.0
    }
    #[inline]
    fn one() -> Self {
        1.0
    }
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn modulus(self) -> f64 {
        self.abs()
    }
    #[inline]
    fn conj(self) -> Self {
        self
    }
    #[inline]
    fn as_real(self) -> Option<f64> {
        Some(self)
    }
    #[inline]
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl Scalar for Complex64 {
    #[inline]
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    #[inline]
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    #[inline]
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    #[inline]
    fn modulus(self) -> f64 {
        self.norm()
    }
    #[inline]
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    #[inline]
    fn as_real(self) -> Option<f64> {
        (self.im == 0.0).then_some(self.re)
    }
    #[inline]
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Truncation order through which a jet's entries are meaningful.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JetOrder(u8);

impl JetOrder {
    pub const MAX: JetOrder = JetOrder(3);

    pub fn new(order: u8) -> Result<Self, Error> {
        if order > 3 {
            return Err(Error::Order { requested: order as usize, available: 3 });
        }
        Ok(JetOrder(order))
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }
}

/// Value and partial derivatives through order three of a scalar field on R⁵.
#[derive(Clone, Copy, PartialEq)]
pub struct Jet3<S: Scalar> {
    order: JetOrder,
    pub value: S,
    pub grad: [S; DIM],
    hess: [S; N2],
    third: [S; N3],
}

/// Real jet.
pub type Jet = Jet3<f64>;
/// Complex jet.
pub type CJet = Jet3<Complex64>;

impl<S: Scalar> fmt::Debug for Jet3<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet3")
            .field("order", &self.order.0)
            .field("value", &self.value)
            .field("grad", &self.grad)
            .finish_non_exhaustive()
    }
}

/// Elementary operations accepted by [`jet_apply`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Elementary {
    Add,
    Sub,
    Mul,
    Div,
    Sqrt,
    Ln,
    PowInt(i32),
}

impl<S: Scalar> Jet3<S> {
    /// Constant jet: all partials zero, valid to full order.
    pub fn constant(value: S) -> Self {
        Self { order: JetOrder::MAX, value, grad: [S::zero(); DIM], hess: [S::zero(); N2], third: [S::zero(); N3] }
    }

    pub fn zero() -> Self {
        Self::constant(S::zero())
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    /// The coordinate function `x_i` evaluated at `at`.
    pub fn variable(i: usize, at: f64) -> Self {
        let mut j = Self::constant(S::from_f64(at));
        j.grad[i] = S::one();
        j
    }

    pub fn order(&self) -> JetOrder {
        self.order
    }

    /// Same jet with a reduced validity order (entries past it are zeroed).
    pub fn truncate(mut self, order: JetOrder) -> Self {
        if order < self.order {
            self.order = order;
            self.clear_above();
        }
        self
    }

    fn clear_above(&mut self) {
        let o = self.order.get();
        if o < 3 {
            self.third = [S::zero(); N3];
        }
        if o < 2 {
            self.hess = [S::zero(); N2];
        }
        if o < 1 {
            self.grad = [S::zero(); DIM];
        }
    }

    #[inline]
    pub fn d2(&self, i: usize, j: usize) -> S {
        self.hess[H2[i][j]]
    }

    #[inline]
    pub fn d3(&self, i: usize, j: usize, k: usize) -> S {
        self.third[H3[i][j][k]]
    }

    pub fn set_d2(&mut self, i: usize, j: usize, v: S) {
        self.hess[H2[i][j]] = v;
    }

    pub fn set_d3(&mut self, i: usize, j: usize, k: usize, v: S) {
        self.third[H3[i][j][k]] = v;
    }

    /// Reads the stored partial derivative for `multi_index` (order = its length).
    pub fn extract(&self, multi_index: &[usize]) -> Result<S, Error> {
        let n = multi_index.len();
        if n > 3 || n > self.order.get() {
            return Err(Error::Order { requested: n, available: self.order.get() });
        }
        if let Some(&bad) = multi_index.iter().find(|&&i| i >= DIM) {
            return Err(Error::Domain(format!("jet variable index {bad} out of range")));
        }
        Ok(match multi_index {
            [] => self.value,
            [i] => self.grad[*i],
            [i, j] => self.d2(*i, *j),
            [i, j, k] => self.d3(*i, *j, *k),
            _ => unreachable!(),
        })
    }

    /// The jet of `∂f/∂x_k`, valid to one order less.
    pub fn partial(&self, k: usize) -> Self {
        let order = JetOrder(self.order.0.saturating_sub(1));
        let mut out = Self::constant(self.grad[k]);
        out.order = order;
        for i in 0..DIM {
            out.grad[i] = self.d2(k, i);
        }
        for (n, &(i, j)) in PAIRS.iter().enumerate() {
            out.hess[n] = self.d3(k, i, j);
        }
        out.clear_above();
        out
    }

    /// Directional derivative `Σ vᵢ ∂ᵢ f` as a jet.
    pub fn directional(&self, v: &[Jet3<S>; DIM]) -> Self {
        let mut acc = Self::zero();
        for k in 0..DIM {
            acc += v[k] * self.partial(k);
        }
        acc
    }

    pub fn scale(mut self, s: S) -> Self {
        self.value *= s;
        for g in &mut self.grad {
            *g *= s;
        }
        for h in &mut self.hess {
            *h *= s;
        }
        for t in &mut self.third {
            *t *= s;
        }
        self
    }

    pub fn conj(mut self) -> Self {
        self.value = self.value.conj();
        for g in &mut self.grad {
            *g = g.conj();
        }
        for h in &mut self.hess {
            *h = h.conj();
        }
        for t in &mut self.third {
            *t = t.conj();
        }
        self
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
            && self.grad.iter().all(|s| s.is_finite())
            && self.hess.iter().all(|s| s.is_finite())
            && self.third.iter().all(|s| s.is_finite())
    }

    /// Composition `φ ∘ self` given `φ` and its first three derivatives at `self.value`.
    pub fn compose(&self, d0: S, d1: S, d2: S, d3: S) -> Self {
        let o = self.order.get();
        let mut out = Self::constant(d0);
        out.order = self.order;
        if o >= 1 {
            for i in 0..DIM {
                out.grad[i] = d1 * self.grad[i];
            }
        }
        if o >= 2 {
            for (n, &(i, j)) in PAIRS.iter().enumerate() {
                out.hess[n] = d2 * self.grad[i] * self.grad[j] + d1 * self.hess[n];
            }
        }
        if o >= 3 {
            let g = &self.grad;
            for (n, &(i, j, k)) in TRIPLES.iter().enumerate() {
                let hij = self.d2(i, j);
                let hik = self.d2(i, k);
                let hjk = self.d2(j, k);
                out.third[n] =
                    d3 * g[i] * g[j] * g[k] + d2 * (hij * g[k] + hik * g[j] + hjk * g[i]) + d1 * self.third[n];
            }
        }
        out
    }

    /// `1/f` without a domain check; a zero value yields non-finite entries.
    pub fn recip_unchecked(&self) -> Self {
        let one = S::one();
        let inv = one / self.value;
        let inv2 = inv * inv;
        self.compose(inv, -inv2, S::from_f64(2.0) * inv2 * inv, S::from_f64(-6.0) * inv2 * inv2)
    }

    pub fn recip(&self) -> Result<Self, Error> {
        if self.value.modulus() == 0.0 {
            return Err(Error::Domain("division by a jet with zero value".into()));
        }
        Ok(self.recip_unchecked())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, Error> {
        Ok(*self * rhs.recip()?)
    }

    fn positive_real(&self, what: &str) -> Result<f64, Error> {
        match self.value.as_real() {
            Some(x) if x > 0.0 => Ok(x),
            _ => Err(Error::Domain(format!("{what} needs a positive real argument, got {:?}", self.value))),
        }
    }

    pub fn sqrt(&self) -> Result<Self, Error> {
        let x = self.positive_real("sqrt")?;
        let s = x.sqrt();
        Ok(self.compose(
            S::from_f64(s),
            S::from_f64(0.5 / s),
            S::from_f64(-0.25 / (x * s)),
            S::from_f64(0.375 / (x * x * s)),
        ))
    }

    pub fn ln(&self) -> Result<Self, Error> {
        let x = self.positive_real("ln")?;
        Ok(self.compose(
            S::from_f64(x.ln()),
            S::from_f64(1.0 / x),
            S::from_f64(-1.0 / (x * x)),
            S::from_f64(2.0 / (x * x * x)),
        ))
    }

    pub fn exp(&self) -> Result<Self, Error> {
        let x = self.value.as_real().ok_or_else(|| Error::Domain("exp of a complex jet".into()))?;
        let e = S::from_f64(x.exp());
        Ok(self.compose(e, e, e, e))
    }

    /// Integer power; negative exponents need a non-zero value.
    pub fn powi(&self, n: i32) -> Result<Self, Error> {
        if n < 0 && self.value.modulus() == 0.0 {
            return Err(Error::Domain("negative power of a jet with zero value".into()));
        }
        let p = |k: i32| -> S {
            let e = n - k;
            if e == 0 {
                return S::one();
            }
            if e > 0 {
                let mut acc = S::one();
                for _ in 0..e {
                    acc *= self.value;
                }
                acc
            } else {
                let mut acc = S::one();
                for _ in 0..(-e) {
                    acc *= self.value;
                }
                S::one() / acc
            }
        };
        let nf = n as f64;
        let c1 = if n == 0 { S::zero() } else { S::from_f64(nf) * p(1) };
        let c2 = if n == 0 || n == 1 { S::zero() } else { S::from_f64(nf * (nf - 1.0)) * p(2) };
        let c3 = if (0..=2).contains(&n) { S::zero() } else { S::from_f64(nf * (nf - 1.0) * (nf - 2.0)) * p(3) };
        Ok(self.compose(p(0), c1, c2, c3))
    }

    pub fn square(&self) -> Self {
        *self * *self
    }
}

impl Jet {
    /// Lift a real jet into a complex one.
    pub fn to_complex(&self) -> CJet {
        let mut out = CJet::constant(Complex64::new(self.value, 0.0));
        out.order = self.order;
        for i in 0..DIM {
            out.grad[i] = Complex64::new(self.grad[i], 0.0);
        }
        for n in 0..N2 {
            out.hess[n] = Complex64::new(self.hess[n], 0.0);
        }
        for n in 0..N3 {
            out.third[n] = Complex64::new(self.third[n], 0.0);
        }
        out
    }

    /// `ln|f|`.
    pub fn ln_abs(&self) -> Result<Self, Error> {
        if self.value > 0.0 {
            self.ln()
        } else {
            (-*self).ln()
        }
    }
}

impl CJet {
    pub fn re(&self) -> Jet {
        let mut out = Jet::constant(self.value.re);
        out.order = self.order;
        for i in 0..DIM {
            out.grad[i] = self.grad[i].re;
        }
        for n in 0..N2 {
            out.hess[n] = self.hess[n].re;
        }
        for n in 0..N3 {
            out.third[n] = self.third[n].re;
        }
        out
    }

    pub fn im(&self) -> Jet {
        (*self * CJet::constant(Complex64::new(0.0, -1.0))).re()
    }
}

/// The five coordinate jets of R⁵ seeded at `point`.
pub fn seed(point: [f64; DIM]) -> [Jet; DIM] {
    std::array::from_fn(|i| Jet::variable(i, point[i]))
}

/// Generic entry point for the elementary operations.
pub fn jet_apply<S: Scalar>(f: Elementary, args: &[Jet3<S>]) -> Result<Jet3<S>, Error> {
    let arity = match f {
        Elementary::Add | Elementary::Sub | Elementary::Mul | Elementary::Div => 2,
        _ => 1,
    };
    if args.len() != arity {
        return Err(Error::Domain(format!("{f:?} expects {arity} argument(s), got {}", args.len())));
    }
    match f {
        Elementary::Add => Ok(args[0] + args[1]),
        Elementary::Sub => Ok(args[0] - args[1]),
        Elementary::Mul => Ok(args[0] * args[1]),
        Elementary::Div => args[0].checked_div(&args[1]),
        Elementary::Sqrt => args[0].sqrt(),
        Elementary::Ln => args[0].ln(),
        Elementary::PowInt(n) => args[0].powi(n),
    }
}

impl<S: Scalar> Add for Jet3<S> {
    type Output = Self;
    #[inline]
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl<S: Scalar> AddAssign for Jet3<S> {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        self.order = self.order.min(rhs.order);
        self.value += rhs.value;
        for i in 0..DIM {
            self.grad[i] += rhs.grad[i];
        }
        for n in 0..N2 {
            self.hess[n] += rhs.hess[n];
        }
        for n in 0..N3 {
            self.third[n] += rhs.third[n];
        }
        self.clear_above();
    }
}

impl<S: Scalar> Sub for Jet3<S> {
    type Output = Self;
    #[inline]
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl<S: Scalar> SubAssign for Jet3<S> {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        self.order = self.order.min(rhs.order);
        self.value -= rhs.value;
        for i in 0..DIM {
            self.grad[i] -= rhs.grad[i];
        }
        for n in 0..N2 {
            self.hess[n] -= rhs.hess[n];
        }
        for n in 0..N3 {
            self.third[n] -= rhs.third[n];
        }
        self.clear_above();
    }
}

impl<S: Scalar> Neg for Jet3<S> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        self.scale(-S::one())
    }
}

impl<S: Scalar> Mul for Jet3<S> {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let a = self;
        let order = a.order.min(b.order);
        let o = order.get();
        let mut out = Self::constant(a.value * b.value);
        out.order = order;
        if o >= 1 {
            for i in 0..DIM {
                out.grad[i] = a.grad[i] * b.value + a.value * b.grad[i];
            }
        }
        if o >= 2 {
            for (n, &(i, j)) in PAIRS.iter().enumerate() {
                out.hess[n] = a.hess[n] * b.value + a.grad[i] * b.grad[j] + a.grad[j] * b.grad[i] + a.value * b.hess[n];
            }
        }
        if o >= 3 {
            for (n, &(i, j, k)) in TRIPLES.iter().enumerate() {
                out.third[n] = a.third[n] * b.value
                    + a.d2(i, j) * b.grad[k]
                    + a.d2(i, k) * b.grad[j]
                    + a.d2(j, k) * b.grad[i]
                    + a.grad[i] * b.d2(j, k)
                    + a.grad[j] * b.d2(i, k)
                    + a.grad[k] * b.d2(i, j)
                    + a.value * b.third[n];
            }
        }
        out
    }
}

impl<S: Scalar> MulAssign for Jet3<S> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

/// Unchecked division; see [`Jet3::checked_div`] for the guarded form.
impl<S: Scalar> Div for Jet3<S> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip_unchecked()
    }
}

impl<S: Scalar> Add<f64> for Jet3<S> {
    type Output = Self;
    fn add(mut self, rhs: f64) -> Self {
        self.value += S::from_f64(rhs);
        self
    }
}

impl<S: Scalar> Sub<f64> for Jet3<S> {
    type Output = Self;
    fn sub(mut self, rhs: f64) -> Self {
        self.value -= S::from_f64(rhs);
        self
    }
}

impl<S: Scalar> Mul<f64> for Jet3<S> {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(S::from_f64(rhs))
    }
}

impl<S: Scalar> Div<f64> for Jet3<S> {
    type Output = Self;
    fn div(self, rhs: f64) -> Self {
        self.scale(S::from_f64(1.0 / rhs))
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs.scale(self)
    }
}

impl Add<Jet> for f64 {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        rhs + self
    }
}

impl Sub<Jet> for f64 {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        -rhs + self
    }
}

impl Mul<Complex64> for Jet3<Complex64> {
    type Output = Self;
    fn mul(self, rhs: Complex64) -> Self {
        self.scale(rhs)
    }
}

impl std::iter::Sum for Jet {
    fn sum<I: Iterator<Item = Jet>>(iter: I) -> Jet {
        iter.fold(Jet::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn r_jet(p: [f64; 5]) -> Jet {
        let x = seed(p);
        (x[1].square() + x[2].square() + x[3].square() + x[4].square()).sqrt().unwrap()
    }

    #[test]
    fn seed_is_coordinate_jet() {
        let x = seed([1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(x[0].value, 1.0);
        assert_eq!(x[0].grad, [1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(x[0].d2(0, 0), 0.0);
        let y = seed([0.0, 2.0, 0.0, 0.0, 0.0]);
        assert_eq!(y[1].value, 2.0);
        assert_eq!(y[1].grad, [0.0, 1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn product_of_coordinates() {
        let x = seed([0.0, 3.0, 5.0, 0.0, 0.0]);
        let p = x[1] * x[2];
        assert_eq!(p.value, 15.0);
        assert_eq!(p.grad[1], 5.0);
        assert_eq!(p.grad[2], 3.0);
        assert_eq!(p.d2(1, 2), 1.0);
        assert_eq!(p.d2(1, 1), 0.0);
        assert_eq!(p.extract(&[1, 2]).unwrap(), 1.0);
    }

    #[test]
    fn sqrt_of_constant() {
        let j = Jet::constant(4.0).sqrt().unwrap();
        assert_eq!(j.value, 2.0);
        assert!(j.grad.iter().all(|&g| g == 0.0));
    }

    #[test]
    fn ln_r_squared_gradient() {
        let x = seed([0.0, 1.0, 0.0, 0.0, 0.0]);
        let r2 = x[1].square() + x[2].square() + x[3].square() + x[4].square();
        assert_eq!(r2.ln().unwrap().grad[1], 2.0);
    }

    #[test]
    fn r_fourth_third_derivative() {
        let x = seed([0.0, 1.0, 0.0, 0.0, 0.0]);
        let r2 = x[1].square() + x[2].square() + x[3].square() + x[4].square();
        let r4 = r2.square();
        assert_relative_eq!(r4.extract(&[1, 1, 1]).unwrap(), 24.0, epsilon = 1e-12);
    }

    #[test]
    fn inverse_r_second_derivative_matches_fd() {
        let p = [0.0, 2.0, 0.0, 0.0, 0.0];
        let inv = r_jet(p).recip().unwrap();
        let f = |t: f64| {
            let mut q = p;
            q[1] += t;
            1.0 / (q[1] * q[1] + q[2] * q[2] + q[3] * q[3] + q[4] * q[4]).sqrt()
        };
        let h = 1e-4;
        let fd = (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
        assert!((inv.d2(1, 1) - fd).abs() / fd.abs() < 1e-6);
        assert_relative_eq!(inv.d2(1, 1), 2.0 / 8.0, epsilon = 1e-14);
    }

    #[test]
    fn extract_rejects_order_four() {
        let x = seed([1.0; 5]);
        assert!(matches!(x[0].extract(&[0, 0, 0, 0]), Err(Error::Order { .. })));
        assert_eq!(x[0].extract(&[0]).unwrap(), 1.0);
    }

    #[test]
    fn partial_lowers_order() {
        let x = seed([0.3, 1.0, 2.0, 0.0, 0.0]);
        let f = x[1] * x[1] * x[2];
        let d = f.partial(1);
        assert_eq!(d.order().get(), 2);
        assert_relative_eq!(d.value, 2.0 * 1.0 * 2.0);
        assert_relative_eq!(d.grad[2], 2.0);
        assert!(d.extract(&[1, 1, 2]).is_err());
        assert!(d.partial(2).partial(1).partial(1).extract(&[]).is_ok());
    }

    #[test]
    fn domain_errors() {
        assert!(Jet::constant(-1.0).sqrt().is_err());
        assert!(Jet::constant(0.0).ln().is_err());
        assert!(Jet::constant(0.0).recip().is_err());
        assert!(jet_apply(Elementary::Div, &[Jet::one(), Jet::zero()]).is_err());
        assert!(CJet::constant(Complex64::new(1.0, 1.0)).sqrt().is_err());
    }

    #[test]
    fn powi_matches_repeated_product() {
        let x = seed([0.0, 0.7, -0.4, 0.2, 1.1]);
        let s = x[1] * 2.0 + x[2] * x[3] - x[4];
        let cube = s * s * s;
        let p = s.powi(3).unwrap();
        for n in 0..N3 {
            assert_relative_eq!(p.third[n], cube.third[n], epsilon = 1e-12);
        }
        let inv2 = s.powi(-2).unwrap();
        let direct = (s * s).recip().unwrap();
        for n in 0..N2 {
            assert_relative_eq!(inv2.hess[n], direct.hess[n], epsilon = 1e-10, max_relative = 1e-12);
        }
    }

    #[test]
    fn complex_jets_follow_real_rules() {
        let x = seed([0.5, 1.0, 2.0, -1.0, 0.3]);
        let i = Complex64::new(0.0, 1.0);
        let z = x[1].to_complex() + x[2].to_complex() * i;
        let w = z * z.conj();
        let real = x[1].square() + x[2].square();
        assert_relative_eq!(w.re().d2(1, 1), real.d2(1, 1));
        assert_relative_eq!(w.im().value, 0.0);
    }
}
