//! The upper half-plane side: evaluating and inverting `j`, reduction to the
//! fundamental domain, predicted zero locations and comparison reports.

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::to_f64;
use crate::faber::{faber_polynomial, scaled_deviations};
use crate::modforms::{miller_form_spec, ModularFormSpec};
use crate::qseries::j_series;
use crate::roots::{
    arg_half_open, complex_obj, match_roots, scaled_faber_roots, truncated_exp_inverse_zeros,
};

/// Smallest `|t|` handed to [`invert_j`].
///
/// Newton from `q = 1/t` stops working only for `|t| < 4` or so, near the
/// critical value `j(rho) = 0`; at `1728 = j(i)` it degrades to linear
/// convergence and `tau` is accurate to about `sqrt(tol)`.
pub const INVERSION_THRESHOLD: f64 = 100.0;

/// Smallest imaginary part accepted by [`evaluate_j`].
pub const MIN_EVAL_IM: f64 = 0.8;

/// Label written in report columns for zeros that were not inverted.
pub const OUTSIDE_REGIME: &str = "outside inversion regime";

/// Number of `j` coefficients kept in double precision (`q^-1` through `q^78`).
const J_TABLE_LEN: usize = 80;

const NEWTON_MAX_ITERATIONS: usize = 100;

/// Rotation of the first Newton iterate away from `1/t`.
const START_TILT: f64 = 0.05;

const BACKTRACK_LIMIT: usize = 40;

const REDUCTION_MAX_STEPS: usize = 10_000;

/// Relative slack within which `|tau|^2` counts as lying on the unit circle.
const ARC_SLACK: f64 = 8.0 * f64::EPSILON;

/// The same slack for points produced by [`invert_j`], which carry the error
/// of the Newton solve.
const INVERTED_ARC_SLACK: f64 = 1e-9;

fn j_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        j_series(J_TABLE_LEN as i64 - 1)
            .coeffs()
            .iter()
            .map(to_f64)
            .collect()
    })
}

/// A point of the upper half-plane, flagged when it lies in the fundamental
/// domain `Re in [-1/2, 1/2)`, `|tau| >= 1`, `Re <= 0` on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlanePoint {
    #[serde(flatten, with = "complex_obj")]
    pub tau: Complex64,
    pub reduced: bool,
}

impl HalfPlanePoint {
    pub fn new(tau: Complex64) -> Result<Self> {
        if !tau.is_finite() || tau.im <= 0.0 {
            return Err(Error::domain(format!(
                "{tau} is not in the upper half-plane"
            )));
        }
        Ok(HalfPlanePoint {
            tau,
            reduced: in_fundamental_domain(tau),
        })
    }

    pub fn re(&self) -> f64 {
        self.tau.re
    }

    pub fn im(&self) -> f64 {
        self.tau.im
    }
}

pub fn re_in_strip(tau: Complex64) -> bool {
    (-0.5..0.5).contains(&tau.re)
}

pub fn outside_unit_disc(tau: Complex64) -> bool {
    tau.norm_sqr() >= 1.0
}

/// On the unit circle only the left half belongs to the domain.
pub fn arc_convention(tau: Complex64) -> bool {
    tau.norm_sqr() != 1.0 || tau.re <= 0.0
}

pub fn in_fundamental_domain(tau: Complex64) -> bool {
    tau.im > 0.0 && re_in_strip(tau) && outside_unit_disc(tau) && arc_convention(tau)
}

/// `x` shifted by an integer into `[-1/2, 1/2)`.
pub fn normalize_re(x: f64) -> f64 {
    let mut y = x - (x + 0.5).floor();
    if y >= 0.5 {
        y -= 1.0;
    }
    if y < -0.5 {
        y += 1.0;
    }
    y
}

/// Distance between two points after identifying `tau` with `tau + 1`.
pub fn periodic_distance(a: Complex64, b: Complex64) -> f64 {
    let dre = a.re - b.re;
    (dre - dre.round()).hypot(a.im - b.im)
}

/// `j(tau)` from the first `terms` coefficients of its q-expansion, with an
/// estimate of the discarded tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JValue {
    pub value: Complex64,
    pub tail: f64,
}

pub fn nome(tau: Complex64) -> Complex64 {
    (Complex64::new(0.0, TAU) * tau).exp()
}

pub fn evaluate_j(tau: Complex64, terms: usize) -> Result<JValue> {
    if !tau.is_finite() || tau.im < MIN_EVAL_IM {
        return Err(Error::domain(format!(
            "j is evaluated only for Im(tau) >= {MIN_EVAL_IM}; reduce {tau} first"
        )));
    }
    let table = j_table();
    if !(2..=table.len()).contains(&terms) {
        return Err(Error::domain(format!(
            "terms must lie in 2..={}",
            table.len()
        )));
    }
    let q = nome(tau);
    let (value, _) = j_and_derivative(q, terms);
    Ok(JValue {
        value,
        tail: tail_estimate(q.norm(), terms),
    })
}

/// `sum_{n >= N} c(n) |q|^n` with `N = terms - 1`, bounded geometrically:
/// `c(n+1)/c(n) <= exp(2 pi / sqrt(n))` for the coefficients of `j`.
fn tail_estimate(q_abs: f64, terms: usize) -> f64 {
    let table = j_table();
    let last = terms as i32 - 2;
    let ratio = q_abs * (TAU / (last.max(1) as f64).sqrt()).exp();
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    table[terms - 1] * q_abs.powi(last) * ratio / (1.0 - ratio)
}

/// Fewest terms whose tail estimate is at most `target`.
fn terms_for(q_abs: f64, target: f64) -> usize {
    let n = j_table().len();
    (2..=n)
        .find(|&t| tail_estimate(q_abs, t) <= target)
        .unwrap_or(n)
}

/// `(j(q), dj/dq)` truncated to `terms` coefficients.
fn j_and_derivative(q: Complex64, terms: usize) -> (Complex64, Complex64) {
    let c = &j_table()[1..terms];
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * q + p;
        p = p * q + a;
    }
    let inv = q.inv();
    (inv + p, dp - inv * inv)
}

/// `tau` in the fundamental domain with `j(tau) = t`, to relative accuracy `tol`.
///
/// Newton's method runs on the nome from `q = 1/t`; the series length follows
/// the current `|q|` so that the tail stays below `tol |t| / 1000`.
pub fn invert_j(t: Complex64, tol: f64) -> Result<HalfPlanePoint> {
    if !t.is_finite() {
        return Err(Error::domain("cannot invert j at a non-finite value"));
    }
    if t.norm() < INVERSION_THRESHOLD {
        return Err(Error::OutsideInversionRegime {
            modulus: t.norm(),
            threshold: INVERSION_THRESHOLD,
        });
    }
    let target = tol * t.norm();
    let eval = |q: Complex64| {
        let (value, deriv) = j_and_derivative(q, terms_for(q.norm(), 1e-3 * target));
        (value - t, deriv)
    };
    // real starting points stay real and cannot reach the arc, where j is
    // real but the nome is not
    let mut q = t.inv() * Complex64::from_polar(1.0, START_TILT);
    let (mut r, mut deriv) = eval(q);
    for iteration in 1..=NEWTON_MAX_ITERATIONS {
        let converged = r.norm() <= target;
        // Each trial iterate is moved back into the fundamental domain, which
        // leaves j unchanged and keeps |q| <= exp(-pi sqrt 3). The step is
        // halved until the residual drops.
        let mut step = r / deriv;
        let mut accepted = None;
        for _ in 0..BACKTRACK_LIMIT {
            if let Some(next) = reduced_nome(q - step) {
                let (rn, dn) = eval(next);
                if converged || rn.norm() < r.norm() {
                    accepted = Some((next, rn, dn));
                    break;
                }
            }
            step *= 0.5;
        }
        let Some((next, rn, dn)) = accepted else {
            return Err(newton_failure(iteration, r.norm(), q));
        };
        (q, r, deriv) = (next, rn, dn);
        // one step past the tolerance to settle the last digits
        if converged {
            return from_nome(q);
        }
    }
    Err(newton_failure(NEWTON_MAX_ITERATIONS, r.norm(), q))
}

/// The nome of the reduced point equivalent to `q`, if `0 < |q| < 1`.
fn reduced_nome(q: Complex64) -> Option<Complex64> {
    let abs = q.norm();
    if !(abs > 0.0 && abs < 1.0) {
        return None;
    }
    from_nome(q).ok().map(|p| nome(p.tau))
}

fn newton_failure(iterations: usize, residual: f64, q: Complex64) -> Error {
    Error::NumericalFailure {
        what: "Newton iteration for j(tau) = t",
        iterations,
        residual,
        best: vec![q],
    }
}

fn from_nome(q: Complex64) -> Result<HalfPlanePoint> {
    let tau = Complex64::new(normalize_re(q.arg() / TAU), -q.norm().ln() / TAU);
    reduce_with_slack(tau, INVERTED_ARC_SLACK)
}

/// The `SL(2, Z)`-equivalent point of the fundamental domain.
///
/// Points within rounding of the unit circle are placed on it, on the left
/// half, with the imaginary part nudged so the domain predicates hold in
/// floating point.
pub fn reduce_to_fundamental_domain(tau: Complex64) -> Result<HalfPlanePoint> {
    reduce_with_slack(tau, ARC_SLACK)
}

fn reduce_with_slack(tau: Complex64, slack: f64) -> Result<HalfPlanePoint> {
    if !tau.is_finite() || tau.im <= 0.0 {
        return Err(Error::domain(format!(
            "{tau} is not in the upper half-plane"
        )));
    }
    let mut z = tau;
    for _ in 0..REDUCTION_MAX_STEPS {
        z.re = normalize_re(z.re);
        let n2 = z.norm_sqr();
        if n2 < 1.0 - slack {
            z = -z.conj() / n2;
            continue;
        }
        if n2 <= 1.0 + slack {
            z = snap_to_arc(z);
        }
        return HalfPlanePoint::new(z);
    }
    Err(Error::NumericalFailure {
        what: "fundamental domain reduction",
        iterations: REDUCTION_MAX_STEPS,
        residual: f64::NAN,
        best: vec![z],
    })
}

fn snap_to_arc(z: Complex64) -> Complex64 {
    // -1/tau = -conj(tau) on the circle
    let re = if z.re > 0.0 { -z.re } else { z.re };
    let mut im = (1.0 - re * re).sqrt();
    while re * re + im * im < 1.0 {
        im = im.next_up();
    }
    Complex64::new(re, im)
}

/// `-arg(z)/2pi + i log(2k|z|)/2pi` with `arg` in `[-pi, pi)`, the real part
/// moved into `[-1/2, 1/2)`.
pub fn predicted_zero(k: u64, z: Complex64) -> Result<HalfPlanePoint> {
    if z == Complex64::new(0.0, 0.0) || !z.is_finite() {
        return Err(Error::domain("predicted zero needs a finite non-zero z"));
    }
    let height = 2.0 * k as f64 * z.norm();
    if height <= 1.0 {
        return Err(Error::domain(format!("2k|z| = {height} must exceed 1")));
    }
    let re = normalize_re(-arg_half_open(z) / TAU);
    HalfPlanePoint::new(Complex64::new(re, height.ln() / TAU))
}

/// A zero `t` of a Faber polynomial and, when inverted, the point with `j(tau) = t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NontrivialZero {
    #[serde(with = "complex_obj")]
    pub t: Complex64,
    pub tau: Option<HalfPlanePoint>,
}

/// The zeros of `f` not shared with `E_{k'}`: pullbacks of the Faber roots.
pub fn nontrivial_zeros(spec: &ModularFormSpec, tol: f64) -> Result<Vec<NontrivialZero>> {
    let f = faber_polynomial(spec);
    let roots = scaled_faber_roots(&f, tol)?;
    roots
        .t
        .iter()
        .map(|&t| {
            let tau = invert_if_in_regime(t, tol)?;
            Ok(NontrivialZero { t, tau })
        })
        .collect()
}

fn invert_if_in_regime(t: Complex64, tol: f64) -> Result<Option<HalfPlanePoint>> {
    match invert_j(t, tol) {
        Ok(p) => Ok(Some(p)),
        Err(Error::OutsideInversionRegime { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroRow {
    /// 1-based label of the matched `z_{D,r}`.
    pub r: usize,
    #[serde(with = "complex_obj")]
    pub z: Complex64,
    #[serde(with = "complex_obj")]
    pub t: Complex64,
    pub tau: Option<HalfPlanePoint>,
    pub predicted: HalfPlanePoint,
    pub abs_err: Option<f64>,
    pub k_times_err: Option<f64>,
    /// `|t - 2k z_{D,r}|`.
    pub t_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroReport {
    pub k: u64,
    pub m: u64,
    #[serde(rename = "D")]
    pub d: usize,
    pub rows: Vec<ZeroRow>,
}

impl ZeroReport {
    pub const CSV_HEADER: [&'static str; 12] = [
        "k",
        "m",
        "D",
        "r",
        "t_re",
        "t_im",
        "tau_re",
        "tau_im",
        "pred_re",
        "pred_im",
        "abs_err",
        "k_times_err",
    ];

    /// `max_r |t_r - 2k z_{D,r}|`, zero for an empty report.
    pub fn max_t_gap(&self) -> f64 {
        self.rows.iter().map(|r| r.t_gap).fold(0.0, f64::max)
    }

    /// `max_r k |tau_r - tau_hat_r|`, or `None` when some zero was not inverted.
    pub fn max_k_times_err(&self) -> Option<f64> {
        self.rows
            .iter()
            .map(|r| r.k_times_err)
            .try_fold(0.0, |acc, e| e.map(|e| f64::max(acc, e)))
    }

    pub fn all_inverted(&self) -> bool {
        self.rows.iter().all(|r| r.tau.is_some())
    }

    pub fn csv_records(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|row| {
                let opt = |x: Option<f64>| x.map_or_else(|| OUTSIDE_REGIME.to_string(), fmt_float);
                vec![
                    self.k.to_string(),
                    self.m.to_string(),
                    self.d.to_string(),
                    row.r.to_string(),
                    fmt_float(row.t.re),
                    fmt_float(row.t.im),
                    opt(row.tau.map(|p| p.re())),
                    opt(row.tau.map(|p| p.im())),
                    fmt_float(row.predicted.re()),
                    fmt_float(row.predicted.im()),
                    opt(row.abs_err),
                    opt(row.k_times_err),
                ]
            })
            .collect()
    }
}

/// Seventeen significant digits in scientific notation.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Actual zeros against `(i/2pi) log(2k z_{D,r})`, labeled by optimal matching
/// of `t_r / 2k` with `z_{D,r}`.
pub fn verify_theorem1(spec: &ModularFormSpec, tol: f64) -> Result<ZeroReport> {
    let d = spec.degree();
    let k = spec.k();
    let mut report = ZeroReport {
        k,
        m: spec.m(),
        d,
        rows: Vec::with_capacity(d),
    };
    if d == 0 {
        return Ok(report);
    }
    let roots = scaled_faber_roots(&faber_polynomial(spec), tol)?;
    let limit = truncated_exp_inverse_zeros(d)?.roots;
    let matching = match_roots(&limit, &roots.z)?;
    let two_k = 2.0 * k as f64;
    for (r, j) in matching.pairs() {
        let z = limit[r];
        let t = roots.t[j];
        let predicted = predicted_zero(k, z)?;
        let tau = invert_if_in_regime(t, tol)?;
        let abs_err = tau.map(|p| periodic_distance(p.tau, predicted.tau));
        report.rows.push(ZeroRow {
            r: r + 1,
            z,
            t,
            tau,
            predicted,
            abs_err,
            k_times_err: abs_err.map(|e| k as f64 * e),
            t_gap: (t - z * two_k).norm(),
        });
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictedPoint {
    pub k: u64,
    /// 1-based index into the argument-sorted `z_{D,r}`.
    pub r: usize,
    #[serde(with = "complex_obj")]
    pub z: Complex64,
    pub predicted: HalfPlanePoint,
}

/// The predicted zero of every `z_{D,r}` at every weight of `ks`, ordered by
/// weight and then by `r`.
pub fn predicted_cloud(d: usize, ks: &[u64]) -> Result<Vec<PredictedPoint>> {
    let z = truncated_exp_inverse_zeros(d)?.roots;
    let mut out = Vec::with_capacity(ks.len() * d);
    for &k in ks {
        for (r, &zr) in z.iter().enumerate() {
            out.push(PredictedPoint {
                k,
                r: r + 1,
                z: zr,
                predicted: predicted_zero(k, zr)?,
            });
        }
    }
    Ok(out)
}

/// Convergence measurements for the Miller form `f_{k, l - D}` at one weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub k: u64,
    /// `k |x(s) s! / (2k)^s - 1|` for `s = 1..=D`.
    pub deviations: Vec<f64>,
    /// `max_r k |tau_r - tau_hat_r|`, absent when some zero was not inverted.
    pub max_k_times_err: Option<f64>,
    /// `max_r |t_r - 2k z_{D,r}|`.
    pub max_t_gap: f64,
}

/// The Miller form of weight `k` whose Faber polynomial has degree `d`.
pub fn miller_form_of_degree(k: u64, d: usize) -> Result<ModularFormSpec> {
    let ell = crate::modforms::decompose_weight(k as i64)?.ell;
    let m = ell.checked_sub(d as u64).ok_or_else(|| {
        Error::domain(format!(
            "weight {k} has l = {ell}, too small for degree {d}"
        ))
    })?;
    miller_form_spec(k as i64, m)
}

pub fn convergence_row(k: u64, d: usize, tol: f64) -> Result<ConvergenceRow> {
    let spec = miller_form_of_degree(k, d)?;
    let deviations = scaled_deviations(&faber_polynomial(&spec))[1..]
        .iter()
        .map(to_f64)
        .collect();
    let report = verify_theorem1(&spec, tol)?;
    Ok(ConvergenceRow {
        k,
        deviations,
        max_k_times_err: report.max_k_times_err(),
        max_t_gap: report.max_t_gap(),
    })
}

/// Whether every monitored sequence stays within `factor` times its first
/// entry. Missing zero errors count as unbounded.
pub fn sequences_bounded(rows: &[ConvergenceRow], factor: f64) -> bool {
    let Some(first) = rows.first() else {
        return true;
    };
    let dev_ok = (0..first.deviations.len()).all(|s| {
        rows.iter()
            .all(|row| row.deviations[s] <= factor * first.deviations[s])
    });
    let err_ok = match first.max_k_times_err {
        Some(e0) => rows
            .iter()
            .all(|row| row.max_k_times_err.is_some_and(|e| e <= factor * e0)),
        None => false,
    };
    dev_ok && err_ok
}

/// The arguments `-arg(z)/2pi` of the lines on which the zeros cluster.
pub fn line_positions(d: usize) -> Result<Vec<f64>> {
    Ok(truncated_exp_inverse_zeros(d)?
        .roots
        .iter()
        .map(|&z| normalize_re(-arg_half_open(z) / (2.0 * PI)))
        .collect())
}
