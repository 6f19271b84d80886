//! Truncated Laurent series in the nome `q` with exact rational coefficients.
//!
//! A [`TruncatedSeries`] is a value `q^v (c_0 + c_1 q + ...)` known modulo
//! `q^order`. Every operation propagates the validity order of its operands
//! and never extends it, so any coefficient that can be read back is exact.

mod classical;

pub use classical::{
    delta_series, delta_unit, eisenstein_series, gamma_k, j_series, j_unit, sigma,
};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, Rational};

/// Below this many terms inversion uses plain long division.
const NEWTON_CUTOFF: usize = 16;

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct TruncatedSeries {
    valuation: i64,
    coeffs: Vec<Rational>,
    order: i64,
}

impl TruncatedSeries {
    /// Builds `q^valuation * (coeffs[0] + coeffs[1] q + ...) + O(q^order)`.
    ///
    /// `coeffs.len()` must equal `order - valuation`. Leading zeros are
    /// stripped, moving the valuation up.
    pub fn new(valuation: i64, coeffs: Vec<Rational>, order: i64) -> Result<Self> {
        let expected = order - valuation;
        if expected < 0 || coeffs.len() as i64 != expected {
            return Err(Error::LengthMismatch {
                expected: expected.max(0) as usize,
                found: coeffs.len(),
            });
        }
        Ok(Self::normalized(valuation, coeffs, order))
    }

    /// Series whose coefficients are given by `coeffs` starting at
    /// `q^valuation`, known exactly up to the last supplied term.
    pub fn from_coeffs(valuation: i64, coeffs: Vec<Rational>) -> Self {
        let order = valuation + coeffs.len() as i64;
        Self::normalized(valuation, coeffs, order)
    }

    pub fn from_integers(valuation: i64, coeffs: &[i64]) -> Self {
        Self::from_coeffs(valuation, coeffs.iter().map(|&c| exact::int(c)).collect())
    }

    pub fn zero(order: i64) -> Self {
        TruncatedSeries {
            valuation: order,
            coeffs: Vec::new(),
            order,
        }
    }

    /// The constant 1 modulo `q^order` (zero if `order <= 0`).
    pub fn one(order: i64) -> Self {
        Self::monomial(Rational::one(), 0, order)
    }

    /// `c * q^power + O(q^order)`.
    pub fn monomial(c: Rational, power: i64, order: i64) -> Self {
        if power >= order {
            return Self::zero(order);
        }
        let mut coeffs = vec![Rational::zero(); (order - power) as usize];
        coeffs[0] = c;
        Self::normalized(power, coeffs, order)
    }

    fn normalized(mut valuation: i64, mut coeffs: Vec<Rational>, order: i64) -> Self {
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(0) => {}
            Some(n) => {
                coeffs.drain(..n);
                valuation += n as i64;
            }
            None => {
                coeffs.clear();
                valuation = order;
            }
        }
        TruncatedSeries {
            valuation,
            coeffs,
            order,
        }
    }

    /// Lowest power of `q` present; equals `order` for the zero series.
    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    /// The series is known modulo `q^order`.
    pub fn order(&self) -> i64 {
        self.order
    }

    /// Coefficients from `q^valuation` up to `q^(order-1)`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Number of known terms after the leading one, `order - valuation`.
    pub fn precision(&self) -> usize {
        (self.order - self.valuation) as usize
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `q^n`, or `None` when `n` is beyond the known order.
    pub fn coeff(&self, n: i64) -> Option<Rational> {
        if n >= self.order {
            None
        } else if n < self.valuation {
            Some(Rational::zero())
        } else {
            Some(self.coeffs[(n - self.valuation) as usize].clone())
        }
    }

    /// Coefficients of `q^from .. q^(to-1)`. Panics if `to > order`.
    pub fn window(&self, from: i64, to: i64) -> Vec<Rational> {
        assert!(to <= self.order, "window beyond series order");
        (from..to).map(|n| self.coeff(n).unwrap()).collect()
    }

    /// Drops every term of degree `>= order`. Never raises the order.
    pub fn truncate(&self, order: i64) -> Self {
        if order >= self.order {
            return self.clone();
        }
        if order <= self.valuation {
            return Self::zero(order);
        }
        let keep = (order - self.valuation) as usize;
        TruncatedSeries {
            valuation: self.valuation,
            coeffs: self.coeffs[..keep].to_vec(),
            order,
        }
    }

    /// Multiplication by `q^n`.
    pub fn shift(&self, n: i64) -> Self {
        TruncatedSeries {
            valuation: self.valuation + n,
            coeffs: self.coeffs.clone(),
            order: self.order + n,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.order);
        }
        TruncatedSeries {
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            order: self.order,
        }
    }

    /// `(q^-v * self, v)`: the unit part and the valuation it was divided by.
    pub fn unit_part(&self) -> (Self, i64) {
        (self.shift(-self.valuation), self.valuation)
    }

    /// Exact product. The result is known modulo
    /// `q^min(a.order + b.valuation, b.order + a.valuation)`.
    pub fn mul(&self, other: &Self) -> Self {
        let order = (self.order + other.valuation).min(other.order + self.valuation);
        let valuation = self.valuation + other.valuation;
        if self.is_zero() || other.is_zero() || order <= valuation {
            return Self::zero(order);
        }
        let len = (order - valuation) as usize;
        Self::normalized(
            valuation,
            mul_trunc(&self.coeffs, &other.coeffs, len),
            order,
        )
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        let order = self.order.min(other.order);
        let valuation = self.valuation.min(other.valuation).min(order);
        let mut coeffs = vec![Rational::zero(); (order - valuation) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            let n = self.valuation + i as i64;
            if n >= order {
                break;
            }
            coeffs[(n - valuation) as usize] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            let n = other.valuation + i as i64;
            if n >= order {
                break;
            }
            let slot = &mut coeffs[(n - valuation) as usize];
            if negate {
                *slot -= c;
            } else {
                *slot += c;
            }
        }
        Self::normalized(valuation, coeffs, order)
    }

    /// `self^n` by binary exponentiation. `self^0` is 1 to the relative
    /// precision of `self`.
    pub fn pow(&self, mut n: u64) -> Self {
        let mut result = Self::one(self.precision() as i64);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Multiplicative inverse known modulo `q^order`, capped by the precision
    /// that the input supports: the result order is at most
    /// `-valuation + precision`. The result has valuation `-self.valuation()`.
    pub fn inv(&self, order: i64) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NonInvertible);
        }
        let v = self.valuation;
        let available = self.precision() as i64;
        let terms = (order + v).min(available);
        if terms <= 0 {
            return Ok(Self::zero(order.min(-v + available)));
        }
        let inv = inverse_unit(&self.coeffs, terms as usize);
        Ok(Self::normalized(-v, inv, -v + terms))
    }

    /// Inverse to the full precision of `self`.
    pub fn inverse(&self) -> Result<Self> {
        self.inv(i64::MAX / 4)
    }
}

/// Product of two coefficient vectors, keeping `len` terms.
pub(crate) fn mul_trunc(a: &[Rational], b: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// First `len` coefficients of `1 / a` where `a[0] != 0`.
fn inverse_unit(a: &[Rational], len: usize) -> Vec<Rational> {
    if len <= NEWTON_CUTOFF {
        return inverse_long_division(a, len);
    }
    // Newton: b <- b (2 - a b), doubling the number of correct terms.
    let mut b = inverse_long_division(a, NEWTON_CUTOFF);
    let mut have = NEWTON_CUTOFF;
    let two = exact::int(2);
    while have < len {
        let next = (2 * have).min(len);
        let ab = mul_trunc(&a[..next.min(a.len())], &b, next);
        let correction: Vec<Rational> = ab
            .iter()
            .enumerate()
            .map(|(i, c)| if i == 0 { &two - c } else { -c })
            .collect();
        b = mul_trunc(&b, &correction, next);
        have = next;
    }
    b
}

fn inverse_long_division(a: &[Rational], len: usize) -> Vec<Rational> {
    let inv0 = a[0].recip();
    let mut b: Vec<Rational> = Vec::with_capacity(len);
    b.push(inv0.clone());
    for n in 1..len {
        let mut acc = Rational::zero();
        for i in 1..=n.min(a.len() - 1) {
            if !a[i].is_zero() {
                acc += &a[i] * &b[n - i];
            }
        }
        b.push(-acc * &inv0);
    }
    b
}

impl<'a> Mul<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        TruncatedSeries::mul(self, rhs)
    }
}

impl<'a> Add<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.add_impl(rhs, false)
    }
}

impl<'a> Sub<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.add_impl(rhs, true)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            order: self.order,
        }
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let n = self.valuation + i as i64;
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*q")?,
                _ => write!(f, "{c}*q^{n}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.order)
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    valuation: i64,
    order: i64,
    #[serde(with = "exact::vec_string")]
    coeffs: Vec<Rational>,
}

impl From<TruncatedSeries> for SeriesRepr {
    fn from(s: TruncatedSeries) -> Self {
        SeriesRepr {
            valuation: s.valuation,
            order: s.order,
            coeffs: s.coeffs,
        }
    }
}

impl TryFrom<SeriesRepr> for TruncatedSeries {
    type Error = Error;
    fn try_from(r: SeriesRepr) -> Result<Self> {
        TruncatedSeries::new(r.valuation, r.coeffs, r.order)
    }
}
