//! Faber polynomials of modular forms for `SL(2, Z)` and the location of their
//! zeros at large weight.
//!
//! Exact parts (q-series, the Miller basis, Faber polynomials) work over
//! `BigRational`; the root finding and the upper half-plane live in `f64`.

pub mod error;
pub mod exact;
pub mod faber;
pub mod halfplane;
pub mod modforms;
pub mod qseries;
pub mod roots;

pub use error::{Error, Result};
pub use exact::Rational;
pub use faber::{faber_polynomial, FaberPoly};
pub use halfplane::{
    invert_j, predicted_zero, reduce_to_fundamental_domain, verify_theorem1, HalfPlanePoint,
    ZeroReport,
};
pub use modforms::{decompose_weight, miller_form_spec, ModularFormSpec, WeightDecomposition};
pub use num_complex::Complex64;
pub use qseries::TruncatedSeries;
pub use roots::{find_roots, truncated_exp_inverse_zeros, ComplexPoly, RootSet};
