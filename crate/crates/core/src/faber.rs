//! Faber polynomials: the unique `F_f` with `f = Delta^ell E_k' F_f(j)`.
//!
//! The principal part of `f / (Delta^ell E_k')` depends only on the window
//! `y(0..=D)` of `f`, so every computation here runs modulo `q^(D+1)` and the
//! cost does not grow with the weight beyond the `log(ell)` squarings of the
//! eta product.
//!
//! Matching principal parts gives the unitriangular system
//!
//! ```text
//! sum_{r=s}^{D} c(r,s) x(D-r) = A(D-s),   s = 0..=D
//! ```
//!
//! where `j^r = sum_s c(r,s) q^-s + O(q)` and `A` are the principal-part
//! coefficients. It is solved from `s = D` (giving `x(0) = y(0)`) downwards.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::modforms::{decompose_weight, ModularFormSpec, WeightDecomposition};
use crate::qseries::{delta_unit, eisenstein_series, j_series, j_unit, TruncatedSeries};

/// `c(r, s)`: coefficient of `q^-s` in `j^r`, for `0 <= s <= r <= D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JPowerTable {
    rows: Vec<Vec<BigInt>>,
}

impl JPowerTable {
    pub fn degree(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, r: usize, s: usize) -> &BigInt {
        &self.rows[r][s]
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.rows[r]
    }
}

pub fn j_power_table(degree: usize) -> JPowerTable {
    let len = degree as i64 + 1;
    let unit = j_unit(len);
    let mut power = TruncatedSeries::one(len);
    let mut rows = Vec::with_capacity(degree + 1);
    for r in 0..=degree {
        // j^r = q^-r * unit^r, so c(r, s) is the coefficient of q^(r-s) in unit^r
        let row: Vec<BigInt> = (0..=r)
            .map(|s| {
                let c = power.coeff((r - s) as i64).expect("window long enough");
                debug_assert!(c.is_integer());
                c.to_integer()
            })
            .collect();
        rows.push(row);
        power = power.mul(&unit);
    }
    JPowerTable { rows }
}

/// `A(0..=D)`: `f / (Delta^ell E_k') = q^-D (A(0) + A(1) q + ... + A(D) q^D) + O(q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrincipalPart {
    pub a: Vec<Rational>,
}

/// `1 / (prod (1 - q^n)^(24 ell) * E_k')` modulo `q^len`.
pub fn inverse_leading_factor(weight: WeightDecomposition, len: i64) -> TruncatedSeries {
    let e = eisenstein_series(weight.k_prime, len).expect("k' is always tabulated");
    delta_unit(len)
        .pow(weight.ell)
        .mul(&e)
        .inverse()
        .expect("leading factor is a unit")
}

pub fn principal_part(spec: &ModularFormSpec) -> PrincipalPart {
    let len = spec.degree() as i64 + 1;
    let a = spec
        .unit_series()
        .mul(&inverse_leading_factor(spec.weight(), len))
        .window(0, len);
    PrincipalPart { a }
}

/// Monic (for Miller input) polynomial `x(0) t^D + x(1) t^(D-1) + ... + x(D)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FaberRepr", into = "FaberRepr")]
pub struct FaberPoly {
    k: u64,
    m: u64,
    coeffs: Vec<Rational>,
}

impl FaberPoly {
    pub fn new(k: u64, m: u64, coeffs_desc: Vec<Rational>) -> Result<Self> {
        if coeffs_desc.is_empty() || coeffs_desc[0].is_zero() {
            return Err(Error::domain(
                "Faber polynomial needs a nonzero leading coefficient",
            ));
        }
        Ok(FaberPoly {
            k,
            m,
            coeffs: coeffs_desc,
        })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `x(0), ..., x(D)`, highest power first.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    /// `F(j)` as a Laurent series modulo `q^order`.
    pub fn compose_j(&self, order: i64) -> TruncatedSeries {
        let d = self.degree() as i64;
        let j = j_series(order + d.max(1));
        let mut acc = TruncatedSeries::zero(order);
        let mut power = TruncatedSeries::one(order + d + 1);
        for x in self.coeffs.iter().rev() {
            acc = &acc + &power.scale(x);
            power = power.mul(&j);
        }
        acc.truncate(order)
    }
}

impl std::fmt::Display for FaberPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let d = self.degree();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() && d > 0 {
                continue;
            }
            let p = d - i;
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_mag = !mag.is_one() || p == 0;
            match (show_mag, p) {
                (true, 0) => write!(f, "{mag}")?,
                (true, 1) => write!(f, "{mag} t")?,
                (true, _) => write!(f, "{mag} t^{p}")?,
                (false, 1) => f.write_str("t")?,
                (false, _) => write!(f, "t^{p}")?,
            }
        }
        Ok(())
    }
}

/// Solves the principal-part system for the coefficients of `F_f`.
pub fn faber_polynomial(spec: &ModularFormSpec) -> FaberPoly {
    let d = spec.degree();
    let table = j_power_table(d);
    let principal = principal_part(spec);
    let coeffs = solve_faber_system(&table, &principal);
    FaberPoly {
        k: spec.k(),
        m: spec.m(),
        coeffs,
    }
}

pub fn solve_faber_system(table: &JPowerTable, principal: &PrincipalPart) -> Vec<Rational> {
    let d = principal.a.len() - 1;
    assert!(table.degree() >= d, "j power table too small");
    let mut x: Vec<Rational> = Vec::with_capacity(d + 1);
    for i in 0..=d {
        let s = d - i;
        let mut rhs = principal.a[i].clone();
        for r in (s + 1)..=d {
            let c = table.get(r, s);
            if !c.is_zero() {
                rhs -= &x[d - r] * Rational::from_integer(c.clone());
            }
        }
        x.push(rhs);
    }
    x
}

/// The closed forms of `F_{12 ell, ell - D}` for `D = 1, 2, 3`.
pub fn closed_form_faber(k: u64, m: u64) -> Result<Vec<Rational>> {
    let weight = decompose_weight(k as i64)?;
    if weight.k_prime != 0 {
        return Err(Error::domain(format!(
            "closed forms need k = 12 ell, got k = {k}"
        )));
    }
    let ell = weight.ell as i64;
    let d = ell - m as i64;
    let r = |v: i64| exact::int(v);
    Ok(match d {
        1 => vec![r(1), r(2 * k as i64 - 744)],
        2 => vec![
            r(1),
            r(24 * (ell - 62)),
            r(36 * (8 * ell * ell - 495 * ell + 4438)),
        ],
        3 => vec![
            r(1),
            r(24 * (ell - 93)),
            r(36 * (29721 - 991 * ell + 8 * ell * ell)),
            r(32 * (-1152093 + 118990 * ell - 6669 * ell * ell + 72 * ell * ell * ell)),
        ],
        _ => {
            return Err(Error::domain(format!(
                "closed forms exist for m in {{ell-1, ell-2, ell-3}}, got m = {m} with ell = {ell}"
            )))
        }
    })
}

/// Whether the computed `F_{k,m}` equals its closed form exactly.
pub fn closed_form_check(k: u64, m: u64) -> Result<bool> {
    let expected = closed_form_faber(k, m)?;
    let spec = crate::modforms::miller_form_spec(k as i64, m)?;
    Ok(faber_polynomial(&spec).coeffs == expected)
}

/// `x(s) / ((2k)^s / s!) - 1` for `s = 0..=D`: exact relative deviations from
/// the truncated exponential.
pub fn renormalized_coeffs(f: &FaberPoly) -> Vec<Rational> {
    let two_k = Rational::from_integer(BigInt::from(2 * f.k));
    let mut limit = Rational::one();
    let mut out = Vec::with_capacity(f.coeffs.len());
    for (s, x) in f.coeffs.iter().enumerate() {
        if s > 0 {
            limit = limit * &two_k / Rational::from_integer(BigInt::from(s));
        }
        out.push(x / &limit - Rational::one());
    }
    out
}

/// `k * |x(s) s! / (2k)^s - 1|` for each `s`, the quantity that stays bounded
/// when the renormalized polynomial converges at rate `1/k`.
pub fn scaled_deviations(f: &FaberPoly) -> Vec<Rational> {
    let k = Rational::from_integer(BigInt::from(f.k));
    renormalized_coeffs(f)
        .into_iter()
        .map(|r| r.abs() * &k)
        .collect()
}

/// Whether every coefficient is an integer.
pub fn is_integral(f: &FaberPoly) -> bool {
    f.coeffs.iter().all(|c| c.denom().is_one())
}

#[derive(Serialize, Deserialize)]
struct FaberRepr {
    k: u64,
    m: u64,
    #[serde(rename = "D")]
    degree: usize,
    #[serde(with = "exact::vec_string")]
    coeffs_desc: Vec<Rational>,
}

impl From<FaberPoly> for FaberRepr {
    fn from(f: FaberPoly) -> Self {
        FaberRepr {
            k: f.k,
            m: f.m,
            degree: f.degree(),
            coeffs_desc: f.coeffs,
        }
    }
}

impl TryFrom<FaberRepr> for FaberPoly {
    type Error = Error;
    fn try_from(r: FaberRepr) -> Result<Self> {
        if r.coeffs_desc.len() != r.degree + 1 {
            return Err(Error::LengthMismatch {
                expected: r.degree + 1,
                found: r.coeffs_desc.len(),
            });
        }
        FaberPoly::new(r.k, r.m, r.coeffs_desc)
    }
}
