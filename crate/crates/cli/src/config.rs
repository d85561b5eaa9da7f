//! Parsed command-line values shared by the subcommands.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::ValueEnum;
use num_bigint::BigInt;
use polylcm::{Error, IntPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

/// Ascending coefficient list, e.g. `-2,0,0,1` for `x^3 − 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coeffs(pub IntPoly);

impl FromStr for Coeffs {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let f: IntPoly = s.parse()?;
        if f.is_zero() {
            return Err(Error::Parse("f0 must not be the zero polynomial".into()));
        }
        if s.split(',').count() != f.coeffs().len() {
            return Err(Error::Parse(format!("{s:?} has a zero leading coefficient")));
        }
        Ok(Coeffs(f))
    }
}

impl fmt::Display for Coeffs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Signed decimal integer of any size.
pub fn parse_bigint(s: &str) -> Result<BigInt, String> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("{s:?} is not a decimal integer"));
    }
    s.parse().map_err(|e| format!("{e}"))
}

/// Every value a run can depend on. `Display` prints the flags that
/// reproduce it.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub f0: Option<Coeffs>,
    pub a: Option<BigInt>,
    pub n: Option<u64>,
    pub t: Option<u64>,
    pub b: Option<u64>,
    pub seed: u64,
    pub n_samples: Option<u64>,
    pub epsilon: Option<f64>,
    pub threads: Option<usize>,
    pub format: Format,
    pub allow_reducible: bool,
    pub out_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(format: Format, seed: u64, threads: Option<usize>, out_path: Option<PathBuf>) -> Self {
        RunConfig {
            f0: None,
            a: None,
            n: None,
            t: None,
            b: None,
            seed,
            n_samples: None,
            epsilon: None,
            threads,
            format,
            allow_reducible: false,
            out_path,
        }
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "--format {} --seed {}", self.format, self.seed)?;
        if let Some(t) = self.threads {
            write!(f, " --threads {t}")?;
        }
        if let Some(c) = &self.f0 {
            write!(f, " --f0={c}")?;
        }
        if let Some(a) = &self.a {
            write!(f, " --a={a}")?;
        }
        if let Some(n) = self.n {
            write!(f, " --N {n}")?;
        }
        if let Some(t) = self.t {
            write!(f, " --T {t}")?;
        }
        if let Some(b) = self.b {
            write!(f, " --B {b}")?;
        }
        if let Some(k) = self.n_samples {
            write!(f, " --samples {k}")?;
        }
        if let Some(e) = self.epsilon {
            write!(f, " --epsilon {e}")?;
        }
        if self.allow_reducible {
            write!(f, " --allow-reducible")?;
        }
        if let Some(p) = &self.out_path {
            write!(f, " --out {}", p.display())?;
        }
        Ok(())
    }
}
