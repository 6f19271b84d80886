//! Weights, the leading window of a modular form, and the Miller basis.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::qseries::{delta_series, delta_unit, eisenstein_series, TruncatedSeries};

/// `k = 12 ell + k'` with `k'` in `{0, 4, 6, 8, 10, 14}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct WeightDecomposition {
    pub k: u64,
    pub ell: u64,
    pub k_prime: u32,
}

pub fn decompose_weight(k: i64) -> Result<WeightDecomposition> {
    if k < 0 || k % 2 != 0 {
        return Err(Error::domain(format!(
            "weight must be even and non-negative, got {k}"
        )));
    }
    if k == 2 {
        return Err(Error::domain("weight 2 has no nonzero modular forms"));
    }
    let k = k as u64;
    let k_prime = match k % 12 {
        2 => 14,
        r => r as u32,
    };
    Ok(WeightDecomposition {
        k,
        ell: (k - k_prime as u64) / 12,
        k_prime,
    })
}

/// A form `f = q^m (y(0) + y(1) q + ... + y(D) q^D) + O(q^(ell+1))` of weight `k`,
/// described by the `D + 1 = ell - m + 1` coefficients that determine its
/// Faber polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpecRepr", into = "SpecRepr")]
pub struct ModularFormSpec {
    weight: WeightDecomposition,
    m: u64,
    unit_coeffs: Vec<Rational>,
}

impl ModularFormSpec {
    /// General constructor: `unit_coeffs` are `y(0..=D)` with `y(0) != 0`.
    pub fn new(k: i64, m: u64, unit_coeffs: Vec<Rational>) -> Result<Self> {
        let weight = decompose_weight(k)?;
        if m > weight.ell {
            return Err(Error::domain(format!(
                "vanishing order {m} exceeds ell = {} for weight {k}",
                weight.ell
            )));
        }
        let d = (weight.ell - m) as usize;
        if unit_coeffs.len() != d + 1 {
            return Err(Error::LengthMismatch {
                expected: d + 1,
                found: unit_coeffs.len(),
            });
        }
        if unit_coeffs[0].is_zero() {
            return Err(Error::domain("leading coefficient y(0) must be nonzero"));
        }
        Ok(ModularFormSpec {
            weight,
            m,
            unit_coeffs,
        })
    }

    /// Reads `m = ord_inf(f)` and `y(0..=D)` from an expansion of a weight-`k` form.
    /// The series must be known through `q^ell`.
    pub fn from_series(k: i64, f: &TruncatedSeries) -> Result<Self> {
        let weight = decompose_weight(k)?;
        let top = weight.ell as i64 + 1;
        if f.order() < top {
            return Err(Error::domain(format!(
                "expansion known to q^{} but Faber extraction needs q^{}",
                f.order(),
                top
            )));
        }
        if f.is_zero() || f.valuation() >= top || f.valuation() < 0 {
            return Err(Error::domain(
                "not a nonzero holomorphic form of this weight",
            ));
        }
        let m = f.valuation();
        Self::new(k, m as u64, f.window(m, top))
    }

    pub fn weight(&self) -> WeightDecomposition {
        self.weight
    }

    pub fn k(&self) -> u64 {
        self.weight.k
    }

    pub fn ell(&self) -> u64 {
        self.weight.ell
    }

    /// `ord_inf(f)`.
    pub fn m(&self) -> u64 {
        self.m
    }

    /// Degree of the Faber polynomial, `ell - m`.
    pub fn degree(&self) -> usize {
        (self.weight.ell - self.m) as usize
    }

    pub fn unit_coeffs(&self) -> &[Rational] {
        &self.unit_coeffs
    }

    /// The unit coefficients as a series `y(0) + ... + y(D) q^D + O(q^(D+1))`.
    pub fn unit_series(&self) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(0, self.unit_coeffs.clone())
    }

    /// The window of `Delta * f`, a form of weight `k + 12` vanishing to order `m + 1`.
    pub fn times_delta(&self) -> Self {
        let len = self.unit_coeffs.len() as i64;
        let y = self.unit_series().mul(&delta_unit(len));
        ModularFormSpec::new(self.weight.k as i64 + 12, self.m + 1, y.window(0, len))
            .expect("Delta * f keeps the degree and a nonzero leading term")
    }
}

/// The Miller basis element `f_{k,m} = q^m + O(q^(ell+1))`. Its window is
/// `(1, 0, ..., 0)` by definition, so no series work is needed.
pub fn miller_form_spec(k: i64, m: u64) -> Result<ModularFormSpec> {
    let weight = decompose_weight(k)?;
    if m > weight.ell {
        return Err(Error::domain(format!(
            "Miller index m = {m} out of range 0..={} for weight {k}",
            weight.ell
        )));
    }
    let mut y = vec![Rational::zero(); (weight.ell - m) as usize + 1];
    y[0] = Rational::one();
    ModularFormSpec::new(k, m, y)
}

/// `f = q^m (1 + a(1) q + ... + a(D) q^D) + O(q^(ell+1))`; `a` has length `D`.
pub fn custom_form_spec(k: i64, m: u64, a: &[Rational]) -> Result<ModularFormSpec> {
    let mut y = Vec::with_capacity(a.len() + 1);
    y.push(Rational::one());
    y.extend_from_slice(a);
    ModularFormSpec::new(k, m, y)
}

/// The full Miller basis of `M_k` modulo `q^order`, element `i` equal to
/// `q^i + O(q^(ell+1))`.
///
/// Spans `M_k` with `Delta^j E_4^a E_6^b` (`4a + 6b = k - 12j`, `b` in `{0,1}`)
/// and reduces the `(ell+1) x (ell+1)` block of leading coefficients with
/// exact Gauss-Jordan elimination.
pub fn miller_basis_series(k: i64, order: i64) -> Result<Vec<TruncatedSeries>> {
    let weight = decompose_weight(k)?;
    let ell = weight.ell as i64;
    if order < ell + 1 {
        return Err(Error::domain(format!(
            "order {order} too small for the Miller basis of weight {k} (needs >= {})",
            ell + 1
        )));
    }
    let delta = delta_series(order);
    let e4 = eisenstein_series(4, order)?;
    let e6 = eisenstein_series(6, order)?;

    let mut rows: Vec<TruncatedSeries> = (0..=ell)
        .map(|j| {
            let w = weight.k as i64 - 12 * j;
            let b = if w % 4 == 0 { 0 } else { 1 };
            let a = (w - 6 * b) / 4;
            let mut s = e4.pow(a as u64);
            if b == 1 {
                s = s.mul(&e6);
            }
            if j > 0 {
                s = s.mul(&delta.pow(j as u64));
            }
            s.truncate(order)
        })
        .collect();

    let n = rows.len();
    for col in 0..n {
        let c = col as i64;
        let pivot = (col..n)
            .find(|&r| !rows[r].coeff(c).unwrap().is_zero())
            .expect("spanning set of M_k is linearly independent");
        rows.swap(col, pivot);
        let lead = rows[col].coeff(c).unwrap();
        rows[col] = rows[col].scale(&lead.recip());
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = rows[r].coeff(c).unwrap();
            if !factor.is_zero() {
                rows[r] = &rows[r] - &rows[col].scale(&factor);
            }
        }
    }
    Ok(rows)
}

#[derive(Serialize, Deserialize)]
struct SpecRepr {
    k: u64,
    m: u64,
    #[serde(with = "exact::vec_string")]
    unit_coeffs: Vec<Rational>,
}

impl From<ModularFormSpec> for SpecRepr {
    fn from(s: ModularFormSpec) -> Self {
        SpecRepr {
            k: s.weight.k,
            m: s.m,
            unit_coeffs: s.unit_coeffs,
        }
    }
}

impl TryFrom<SpecRepr> for ModularFormSpec {
    type Error = Error;
    fn try_from(r: SpecRepr) -> Result<Self> {
        ModularFormSpec::new(r.k as i64, r.m, r.unit_coeffs)
    }
}
