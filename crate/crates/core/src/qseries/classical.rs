//! The classical expansions: divisor sums, Eisenstein series, the
//! discriminant and Klein's invariant.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use super::TruncatedSeries;
use crate::error::{Error, Result};
use crate::exact::{frac, int, Rational};

/// Divisor power sum `sum_{d | n} d^s`.
pub fn sigma(n: i64, s: u32) -> Result<BigInt> {
    if n <= 0 {
        return Err(Error::domain(format!("sigma needs n >= 1, got {n}")));
    }
    let mut total = BigInt::zero();
    let mut d: i64 = 1;
    while d * d <= n {
        if n % d == 0 {
            total += BigInt::from(d).pow(s);
            let e = n / d;
            if e != d {
                total += BigInt::from(e).pow(s);
            }
        }
        d += 1;
    }
    Ok(total)
}

/// `2k / B_k` for the weights that occur as `k'` (and for 12).
/// `gamma_k(0) = 0`, so that `E_0 = 1`.
pub fn gamma_k(k: u32) -> Result<Rational> {
    Ok(match k {
        0 => int(0),
        4 => int(-240),
        6 => int(504),
        8 => int(-480),
        10 => int(264),
        12 => frac(-65520, 691),
        14 => int(24),
        _ => {
            return Err(Error::domain(format!(
                "gamma(k) is tabulated for k in {{0,4,6,8,10,12,14}}, got {k}"
            )))
        }
    })
}

/// `E_k = 1 - gamma(k) sum sigma_{k-1}(n) q^n` modulo `q^order`.
pub fn eisenstein_series(k: u32, order: i64) -> Result<TruncatedSeries> {
    let gamma = gamma_k(k)?;
    if order <= 0 {
        return Ok(TruncatedSeries::zero(order));
    }
    let mut coeffs = Vec::with_capacity(order as usize);
    coeffs.push(Rational::one());
    for n in 1..order {
        let s = if k == 0 {
            BigInt::zero()
        } else {
            sigma(n, k - 1)?
        };
        coeffs.push(-(&gamma) * Rational::from_integer(s));
    }
    TruncatedSeries::new(0, coeffs, order)
}

/// `prod_{n >= 1} (1 - q^n)^24` modulo `q^len`.
pub fn delta_unit(len: i64) -> TruncatedSeries {
    if len <= 0 {
        return TruncatedSeries::zero(len);
    }
    let n_terms = len as usize;
    let mut eta = vec![Rational::zero(); n_terms];
    eta[0] = Rational::one();
    // multiply by (1 - q^n) in place, highest degree first
    for n in 1..n_terms {
        for i in (n..n_terms).rev() {
            let lower = eta[i - n].clone();
            if !lower.is_zero() {
                eta[i] -= lower;
            }
        }
    }
    let eta = TruncatedSeries::from_coeffs(0, eta);
    eta.pow(24)
}

/// `Delta = q prod (1 - q^n)^24` modulo `q^order`.
pub fn delta_series(order: i64) -> TruncatedSeries {
    if order <= 1 {
        return TruncatedSeries::zero(order);
    }
    delta_unit(order - 1).shift(1)
}

/// `q * j = E_4^3 / prod (1 - q^n)^24` modulo `q^len`.
pub fn j_unit(len: i64) -> TruncatedSeries {
    if len <= 0 {
        return TruncatedSeries::zero(len);
    }
    let e4 = eisenstein_series(4, len).expect("weight 4 is tabulated");
    let u = delta_unit(len);
    e4.pow(3).mul(&u.inverse().expect("eta product is a unit"))
}

/// Klein's `j = E_4^3 / Delta = 1/q + 744 + 196884 q + ...` modulo `q^order`.
pub fn j_series(order: i64) -> TruncatedSeries {
    j_unit(order + 1).shift(-1)
}
