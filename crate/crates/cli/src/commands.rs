use std::fmt::Write as _;

use faberzeros::exact::to_exact_string;
use faberzeros::faber::faber_polynomial;
use faberzeros::halfplane::{
    convergence_row, fmt_float, predicted_cloud, sequences_bounded, verify_theorem1,
    ConvergenceRow, PredictedPoint, ZeroReport, OUTSIDE_REGIME,
};
use faberzeros::modforms::{decompose_weight, miller_basis_series, miller_form_spec};
use faberzeros::roots::{find_roots, reversed_truncated_exp};
use faberzeros::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{Command, FormArgs, Format, OutputArgs};
use crate::output::{csv, emit, json};
use crate::{CliError, Outcome};

/// Largest degree accepted by `verify`.
const MAX_VERIFY_DEGREE: usize = 8;

/// Factor over the first grid entry that a monitored sequence may reach.
const BOUND_FACTOR: f64 = 1.5;

pub fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Faber { form, output } => faber(&form, &output),
        Command::Zeros { form, tol, output } => zeros(&form, checked_tol(tol.tol)?, &output),
        Command::ExpZeros { d, tol, output } => exp_zeros(d, checked_tol(tol.tol)?, &output),
        Command::Predict { k, d, output } => cloud(d, &[k], &output, Format::Json),
        Command::Figure { d, grid, output } => cloud(d, &grid.weights()?, &output, Format::Csv),
        Command::Verify {
            d,
            grid,
            tol,
            output,
        } => verify(d, &grid.weights()?, checked_tol(tol.tol)?, &output),
        Command::Basis { k, order, output } => basis(k, order, &output),
    }
}

fn checked_tol(tol: f64) -> Result<f64, CliError> {
    if tol.is_finite() && tol > 0.0 {
        Ok(tol)
    } else {
        Err(CliError::Invalid(format!(
            "tolerance must be positive, got {tol}"
        )))
    }
}

fn finish(text: String, output: &OutputArgs) -> Result<Outcome, CliError> {
    emit(&text, output.out.as_deref())?;
    Ok(Outcome::Success)
}

fn form_spec(form: &FormArgs) -> Result<faberzeros::ModularFormSpec, CliError> {
    let ell = decompose_weight(form.k)?.ell;
    let m = form.m.resolve(ell)?;
    Ok(miller_form_spec(form.k, m)?)
}

fn faber(form: &FormArgs, output: &OutputArgs) -> Result<Outcome, CliError> {
    let f = faber_polynomial(&form_spec(form)?);
    let text = match output.format.unwrap_or(Format::Json) {
        Format::Json => json(&f)?,
        Format::Csv => csv(
            &["k", "m", "D", "s", "coeff"],
            f.coeffs().iter().enumerate().map(|(s, c)| {
                vec![
                    f.k().to_string(),
                    f.m().to_string(),
                    f.degree().to_string(),
                    s.to_string(),
                    to_exact_string(c),
                ]
            }),
        )?,
        Format::Pretty => format!("F_{{{},{}}}(t) = {f}\n", f.k(), f.m()),
    };
    finish(text, output)
}

fn zeros(form: &FormArgs, tol: f64, output: &OutputArgs) -> Result<Outcome, CliError> {
    let report = verify_theorem1(&form_spec(form)?, tol)?;
    let text = match output.format.unwrap_or(Format::Json) {
        Format::Json => json(&report)?,
        Format::Csv => csv(&ZeroReport::CSV_HEADER, report.csv_records())?,
        Format::Pretty => pretty_zeros(&report),
    };
    finish(text, output)
}

fn complex(z: Complex64) -> String {
    format!(
        "{:.10} {} {:.10}i",
        z.re,
        if z.im < 0.0 { '-' } else { '+' },
        z.im.abs()
    )
}

fn pretty_zeros(report: &ZeroReport) -> String {
    let mut s = format!("k = {}, m = {}, D = {}\n", report.k, report.m, report.d);
    for row in &report.rows {
        let tau = row
            .tau
            .map_or(OUTSIDE_REGIME.to_string(), |p| complex(p.tau));
        let err = row
            .k_times_err
            .map_or(OUTSIDE_REGIME.to_string(), |e| format!("{e:.6}"));
        writeln!(
            s,
            "r = {}\n  t      = {}\n  tau    = {tau}\n  pred   = {}\n  k*err  = {err}\n  t gap  = {:.6}",
            row.r,
            complex(row.t),
            complex(row.predicted.tau),
            row.t_gap
        )
        .unwrap();
    }
    s
}

fn exp_zeros(d: usize, tol: f64, output: &OutputArgs) -> Result<Outcome, CliError> {
    let set = find_roots(&reversed_truncated_exp(d)?, tol)?;
    let text = match output.format.unwrap_or(Format::Json) {
        Format::Json => json(&set)?,
        Format::Csv => csv(
            &["D", "r", "re", "im"],
            set.roots.iter().enumerate().map(|(r, z)| {
                vec![
                    d.to_string(),
                    (r + 1).to_string(),
                    fmt_float(z.re),
                    fmt_float(z.im),
                ]
            }),
        )?,
        Format::Pretty => {
            let mut s = String::new();
            for (r, z) in set.roots.iter().enumerate() {
                writeln!(s, "z_{{{d},{}}} = {}", r + 1, complex(*z)).unwrap();
            }
            writeln!(s, "residual = {:e}", set.residual).unwrap();
            s
        }
    };
    finish(text, output)
}

fn cloud(d: usize, ks: &[u64], output: &OutputArgs, default: Format) -> Result<Outcome, CliError> {
    let points = predicted_cloud(d, ks)?;
    let text = match output.format.unwrap_or(default) {
        Format::Json => json(&points)?,
        Format::Csv => csv(
            &["k", "D", "r", "z_re", "z_im", "pred_re", "pred_im"],
            points.iter().map(|p: &PredictedPoint| {
                vec![
                    p.k.to_string(),
                    d.to_string(),
                    p.r.to_string(),
                    fmt_float(p.z.re),
                    fmt_float(p.z.im),
                    fmt_float(p.predicted.re()),
                    fmt_float(p.predicted.im()),
                ]
            }),
        )?,
        Format::Pretty => {
            let mut s = String::new();
            for p in &points {
                writeln!(
                    s,
                    "k = {:>6}  r = {}  tau = {}",
                    p.k,
                    p.r,
                    complex(p.predicted.tau)
                )
                .unwrap();
            }
            s
        }
    };
    finish(text, output)
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    #[serde(rename = "D")]
    d: usize,
    factor: f64,
    bounded: bool,
    rows: &'a [ConvergenceRow],
}

fn verify(d: usize, ks: &[u64], tol: f64, output: &OutputArgs) -> Result<Outcome, CliError> {
    if d == 0 || d > MAX_VERIFY_DEGREE {
        return Err(CliError::Invalid(format!(
            "verify needs 1 <= D <= {MAX_VERIFY_DEGREE}, got {d}"
        )));
    }
    let rows = ks
        .par_iter()
        .map(|&k| convergence_row(k, d, tol))
        .collect::<Result<Vec<_>, _>>()?;
    let bounded = sequences_bounded(&rows, BOUND_FACTOR);
    let report = VerifyReport {
        d,
        factor: BOUND_FACTOR,
        bounded,
        rows: &rows,
    };
    let optional = |x: Option<f64>| x.map_or(OUTSIDE_REGIME.to_string(), fmt_float);
    let text = match output.format.unwrap_or(Format::Json) {
        Format::Json => json(&report)?,
        Format::Csv => {
            let mut header = vec!["k".to_string()];
            header.extend((1..=d).map(|s| format!("dev_{s}")));
            header.extend(["max_k_times_err".to_string(), "max_t_gap".to_string()]);
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            csv(
                &header,
                rows.iter().map(|row| {
                    let mut rec = vec![row.k.to_string()];
                    rec.extend(row.deviations.iter().map(|&x| fmt_float(x)));
                    rec.push(optional(row.max_k_times_err));
                    rec.push(fmt_float(row.max_t_gap));
                    rec
                }),
            )?
        }
        Format::Pretty => {
            let mut s = format!("D = {d}\n");
            for row in &rows {
                let devs: Vec<String> = row.deviations.iter().map(|x| format!("{x:.4}")).collect();
                let err = row
                    .max_k_times_err
                    .map_or(OUTSIDE_REGIME.to_string(), |e| format!("{e:.4}"));
                writeln!(
                    s,
                    "k = {:>7}  k*dev = [{}]  max k*err = {err}  max t gap = {:.4}",
                    row.k,
                    devs.join(", "),
                    row.max_t_gap
                )
                .unwrap();
            }
            writeln!(s, "bounded by {BOUND_FACTOR} x first entry: {bounded}").unwrap();
            s
        }
    };
    emit(&text, output.out.as_deref())?;
    Ok(if bounded {
        Outcome::Success
    } else {
        Outcome::VerificationFailed
    })
}

#[derive(Serialize)]
struct BasisReport<'a> {
    k: i64,
    series: &'a [faberzeros::TruncatedSeries],
}

fn basis(k: i64, order: Option<i64>, output: &OutputArgs) -> Result<Outcome, CliError> {
    let ell = decompose_weight(k)?.ell as i64;
    let order = order.unwrap_or(ell + 1);
    let series = miller_basis_series(k, order)?;
    let text = match output.format.unwrap_or(Format::Json) {
        Format::Json => json(&BasisReport { k, series: &series })?,
        Format::Csv => csv(
            &["k", "m", "n", "coeff"],
            series.iter().enumerate().flat_map(|(m, f)| {
                (0..order).map(move |n| {
                    let c = f.coeff(n).unwrap_or_default();
                    vec![
                        k.to_string(),
                        m.to_string(),
                        n.to_string(),
                        to_exact_string(&c),
                    ]
                })
            }),
        )?,
        Format::Pretty => {
            let mut s = String::new();
            for (m, f) in series.iter().enumerate() {
                writeln!(s, "f_{{{k},{m}}} = {f}").unwrap();
            }
            s
        }
    };
    finish(text, output)
}
