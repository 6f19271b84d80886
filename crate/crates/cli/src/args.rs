use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "faberzeros",
    version,
    about = "Faber polynomials of modular forms and the zeros of Miller basis elements"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact Faber polynomial of the Miller basis form f_{k,m}
    Faber {
        #[command(flatten)]
        form: FormArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Zeros of f_{k,m} against their predicted positions
    Zeros {
        #[command(flatten)]
        form: FormArgs,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Inverse zeros z_{D,r} of the truncated exponential
    ExpZeros {
        #[arg(long = "D")]
        d: usize,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Predicted zeros (i/2pi) log(2k z_{D,r}) at one weight
    Predict {
        #[arg(long)]
        k: u64,
        #[arg(long = "D")]
        d: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Predicted zeros over a grid of weights, one row per point
    Figure {
        #[arg(long = "D")]
        d: usize,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Convergence table over a grid of weights; exits 1 if a monitored
    /// sequence exceeds 1.5 times its first value
    Verify {
        #[arg(long = "D")]
        d: usize,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// q-expansions of the Miller basis of weight k
    Basis {
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        /// Expansions are exact modulo q^order [default: l + 1]
        #[arg(long)]
        order: Option<i64>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
pub struct FormArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub k: i64,
    /// Index m in 0..=l, or last, last-1, last-2, ... counted from l
    #[arg(long)]
    pub m: MArg,
}

#[derive(Debug, Args)]
pub struct TolArgs {
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub k_min: u64,
    #[arg(long)]
    pub k_max: u64,
    /// Step between weights; without it the weights double from k-min
    #[arg(long)]
    pub k_step: Option<u64>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

/// `--m` as given on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MArg {
    Index(u64),
    /// `l - n`
    FromTop(u64),
}

impl FromStr for MArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("expected an integer, `last` or `last-N`, got `{s}`");
        if let Some(rest) = s.strip_prefix("last") {
            if rest.is_empty() {
                return Ok(MArg::FromTop(0));
            }
            let n = rest.strip_prefix('-').ok_or_else(bad)?;
            return n.parse().map(MArg::FromTop).map_err(|_| bad());
        }
        s.parse().map(MArg::Index).map_err(|_| bad())
    }
}

impl MArg {
    pub fn resolve(self, ell: u64) -> Result<u64, CliError> {
        match self {
            MArg::Index(m) => Ok(m),
            MArg::FromTop(n) => ell
                .checked_sub(n)
                .ok_or_else(|| CliError::Invalid(format!("last-{n} is negative for l = {ell}"))),
        }
    }
}

impl GridArgs {
    pub fn weights(&self) -> Result<Vec<u64>, CliError> {
        let invalid = |msg: String| Err(CliError::Invalid(msg));
        if self.k_min == 0 || self.k_min > self.k_max {
            return invalid(format!(
                "need 0 < k-min <= k-max, got {}..{}",
                self.k_min, self.k_max
            ));
        }
        if !self.k_min.is_multiple_of(2) || !self.k_max.is_multiple_of(2) {
            return invalid("grid bounds must be even".into());
        }
        let mut ks = vec![self.k_min];
        match self.k_step {
            Some(0) => return invalid("k-step must be positive".into()),
            Some(step) if step % 2 != 0 => return invalid("k-step must be even".into()),
            Some(step) => {
                while let Some(next) = ks.last().and_then(|k| k.checked_add(step)) {
                    if next > self.k_max {
                        break;
                    }
                    ks.push(next);
                }
            }
            None => {
                while let Some(next) = ks.last().and_then(|k| k.checked_mul(2)) {
                    if next > self.k_max {
                        break;
                    }
                    ks.push(next);
                }
            }
        }
        Ok(ks)
    }
}
