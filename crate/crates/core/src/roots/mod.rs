//! Polynomial roots in double precision: the general solver, the inverse
//! zeros of the truncated exponential, and the zeros of Faber polynomials.

mod aberth;
mod dd;
mod matching;

pub use matching::{match_roots, ostrowski_bound, Matching};

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{to_f64, Rational};
use crate::faber::FaberPoly;

/// Residual tolerance used when callers have no specific requirement.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Imaginary parts below this fraction of the modulus are zeroed for real input.
const REAL_SNAP: f64 = 1e-12;

/// Monic polynomial with complex coefficients, highest power first.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl ComplexPoly {
    /// Divides through by the leading coefficient.
    pub fn monic(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::domain("polynomial must have degree >= 1"));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("polynomial coefficients must be finite"));
        }
        let lead = coeffs[0];
        if lead == Complex64::zero() {
            return Err(Error::domain("leading coefficient is zero"));
        }
        let mut coeffs: Vec<Complex64> = coeffs.into_iter().map(|c| c / lead).collect();
        coeffs[0] = Complex64::one();
        Ok(ComplexPoly { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::monic(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Exact division by the leading coefficient, then rounding to nearest.
    pub fn from_exact(coeffs: &[Rational]) -> Result<Self> {
        if coeffs.is_empty() || coeffs[0].is_zero() {
            return Err(Error::domain("leading coefficient is zero"));
        }
        let lead = &coeffs[0];
        Self::monic(
            coeffs
                .iter()
                .map(|c| Complex64::new(to_f64(&(c / lead)), 0.0))
                .collect(),
        )
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        aberth::eval_with_derivative(&self.coeffs, z).0
    }

    /// `p(z)` accumulated in double-double precision.
    pub fn eval_extended(&self, z: Complex64) -> Complex64 {
        dd::horner(&self.coeffs, z)
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `2^-(e D) p(2^e z)`, exact in binary floating point.
    fn rescaled(&self, e: i32) -> ComplexPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * pow2(-e * i as i32))
            .collect();
        ComplexPoly { coeffs }
    }
}

fn pow2(e: i32) -> f64 {
    2f64.powi(e)
}

/// Roots of a polynomial with the largest `|p(root)|` among them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    #[serde(with = "complex_obj::vec")]
    pub roots: Vec<Complex64>,
    pub residual: f64,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

/// Serde adapter writing a complex number as `{"re": .., "im": ..}`.
pub(crate) mod complex_obj {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Point {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        Point { re: z.re, im: z.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let p = Point::deserialize(d)?;
        Ok(Complex64::new(p.re, p.im))
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(|z| Point { re: z.re, im: z.im }))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
            let v = Vec::<Point>::deserialize(d)?;
            Ok(v.into_iter().map(|p| Complex64::new(p.re, p.im)).collect())
        }
    }
}

/// `arg(z)` taken in `[-pi, pi)`.
pub fn arg_half_open(z: Complex64) -> f64 {
    let a = z.im.atan2(z.re);
    if a >= PI {
        -PI
    } else {
        a
    }
}

/// Orders roots by argument in `[-pi, pi)`, then by modulus.
pub fn sort_by_argument(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| {
        arg_half_open(*a)
            .total_cmp(&arg_half_open(*b))
            .then(a.norm().total_cmp(&b.norm()))
    });
}

/// All roots of `p` by Aberth-Ehrlich iteration.
///
/// The polynomial is first rescaled by a power of two so that its roots have
/// modulus near one; the iteration, the final Newton polish (evaluated in
/// double-double) and the residual check all happen on that balanced
/// polynomial, where `residual <= tol * max|coeff|` is required. Roots are
/// returned in the original variable, sorted by [`sort_by_argument`].
pub fn find_roots(p: &ComplexPoly, tol: f64) -> Result<RootSet> {
    let d = p.degree();
    let c = p.coeffs();
    let cauchy = (1..=d)
        .map(|i| c[i].norm().powf(1.0 / i as f64))
        .fold(0.0, f64::max);
    let e = if cauchy > 0.0 {
        cauchy.log2().round() as i32
    } else {
        0
    };
    let e = e.clamp(-1000 / d as i32, 1000 / d as i32);
    let balanced = p.rescaled(e);

    let outcome = aberth::iterate(balanced.coeffs());
    let mut roots = outcome.roots;
    for z in roots.iter_mut() {
        let (_, dp) = aberth::eval_with_derivative(balanced.coeffs(), *z);
        let step = balanced.eval_extended(*z) / dp;
        if step.is_finite() {
            *z -= step;
        }
    }
    if p.is_real() {
        for z in roots.iter_mut() {
            if z.im.abs() <= REAL_SNAP * z.norm() {
                *z = Complex64::new(z.re, 0.0);
            }
        }
    }
    let residual = roots
        .iter()
        .map(|z| balanced.eval_extended(*z).norm())
        .fold(0.0, f64::max);
    let scale = pow2(e);
    let mut roots: Vec<Complex64> = roots.into_iter().map(|z| z * scale).collect();
    sort_by_argument(&mut roots);

    if !outcome.converged || residual.is_nan() || residual > tol * balanced.max_coeff() {
        return Err(Error::NumericalFailure {
            what: "Aberth-Ehrlich root finder",
            iterations: outcome.iterations,
            residual,
            best: roots,
        });
    }
    Ok(RootSet { roots, residual })
}

/// `z^D + z^(D-1) + z^(D-2)/2! + ... + 1/D!`, the reversal of the truncated
/// exponential; its roots are the inverse zeros `z_{D,r}`.
pub fn reversed_truncated_exp(d: usize) -> Result<ComplexPoly> {
    let mut coeffs = Vec::with_capacity(d + 1);
    let mut fact = BigInt::one();
    for i in 0..=d {
        if i > 0 {
            fact *= i;
        }
        coeffs.push(Rational::new(BigInt::one(), fact.clone()));
    }
    ComplexPoly::from_exact(&coeffs)
}

/// `z_{D,1..D}` with `1 + t + ... + t^D/D! = prod (1 - z_r t)`, sorted by argument.
pub fn truncated_exp_inverse_zeros(d: usize) -> Result<RootSet> {
    if d == 0 {
        return Err(Error::domain("truncated exponential needs degree >= 1"));
    }
    find_roots(&reversed_truncated_exp(d)?, DEFAULT_TOL)
}

/// Zeros `t_r` of a Faber polynomial together with `z_r = t_r / 2k`.
#[derive(Debug, Clone, PartialEq)]
pub struct FaberRoots {
    pub k: u64,
    /// Zeros of `F_f`, sorted by argument.
    pub t: Vec<Complex64>,
    /// The same zeros divided by `2k`.
    pub z: Vec<Complex64>,
    /// Residual of the rescaled polynomial `F_f(2k z) / (2k)^D` (made monic).
    pub residual: f64,
}

/// The monic polynomial `F_f(2k z) / (x(0) (2k)^D)` with exact coefficients
/// `x(s) / (x(0) (2k)^s)` rounded once.
pub fn rescaled_faber(f: &FaberPoly) -> Result<ComplexPoly> {
    let two_k = Rational::from_integer(BigInt::from(2 * f.k()));
    let mut power = Rational::one();
    let mut coeffs = Vec::with_capacity(f.coeffs().len());
    for (s, x) in f.coeffs().iter().enumerate() {
        if s > 0 {
            power *= &two_k;
        }
        coeffs.push(x / &power);
    }
    ComplexPoly::from_exact(&coeffs)
}

/// Faber zeros computed on the rescaled polynomial and multiplied back by `2k`.
pub fn scaled_faber_roots(f: &FaberPoly, tol: f64) -> Result<FaberRoots> {
    if f.degree() == 0 {
        return Ok(FaberRoots {
            k: f.k(),
            t: Vec::new(),
            z: Vec::new(),
            residual: 0.0,
        });
    }
    let g = rescaled_faber(f)?;
    let set = find_roots(&g, tol)?;
    let two_k = 2.0 * f.k() as f64;
    Ok(FaberRoots {
        k: f.k(),
        t: set.roots.iter().map(|z| z * two_k).collect(),
        z: set.roots,
        residual: set.residual,
    })
}
