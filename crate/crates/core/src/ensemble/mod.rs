//! Averages over the shift family `f0 − a`, `|a| <= T`, restricted to the
//! shifts that are irreducible over Q.
//!
//! Per-shift work runs on the rayon pool; every reduction happens afterwards
//! in ascending `a`, so floating results do not depend on the thread count.

mod bounds;
mod sampling;
mod theorem;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::decomp::{decomposition_report_with, shift_is_irreducible, DecompositionReport, ReportOptions};
use crate::error::{Error, Result};
use crate::modroots;
use crate::ntkernel::{sieve_primes, PrimeTable};
use crate::IntPoly;

pub use bounds::{EmpiricalConstants, EMPIRICAL};
pub use sampling::LazyPermutation;
pub use theorem::{summarize, theorem_check, TheoremBands, TheoremReport, WindowSpec};

/// Quantile levels reported for every statistic.
pub const QUANTILE_LEVELS: [f64; 7] = [0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0];

/// Default number of random samples.
pub const DEFAULT_SAMPLES: u64 = 200;

/// Above this `T` random sampling is the default.
pub const EXHAUSTIVE_MAX_T: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistic {
    Bad,
    B1,
    B2,
    Delta,
    CN,
    /// `(C_N − ln N)²`
    CnDeviationSq,
    EN,
    DN,
    /// `log L / ((d − 1) N ln N)`
    LogLRatio,
}

impl Statistic {
    pub const ALL: [Statistic; 9] = [
        Statistic::Bad,
        Statistic::B1,
        Statistic::B2,
        Statistic::Delta,
        Statistic::CN,
        Statistic::CnDeviationSq,
        Statistic::EN,
        Statistic::DN,
        Statistic::LogLRatio,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Statistic::Bad => "bad",
            Statistic::B1 => "b1",
            Statistic::B2 => "b2",
            Statistic::Delta => "delta",
            Statistic::CN => "cn",
            Statistic::CnDeviationSq => "cn_dev_sq",
            Statistic::EN => "en",
            Statistic::DN => "dn",
            Statistic::LogLRatio => "loglratio",
        }
    }

    /// Value of the statistic for one report of a degree-`d` polynomial.
    pub fn of(self, r: &DecompositionReport, d: usize) -> f64 {
        let n = r.n as f64;
        match self {
            Statistic::Bad => r.bad,
            Statistic::B1 => r.b1,
            Statistic::B2 => r.b2,
            Statistic::Delta => r.delta,
            Statistic::CN => r.c_n,
            Statistic::CnDeviationSq => (r.c_n - n.ln()).powi(2),
            Statistic::EN => r.e_n,
            Statistic::DN => r.d_n,
            Statistic::LogLRatio => r.log_l / ((d as f64 - 1.0) * n * n.ln()),
        }
    }
}

impl std::str::FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Statistic::ALL
            .into_iter()
            .find(|st| st.name() == s.to_ascii_lowercase())
            .ok_or_else(|| {
                let names: Vec<_> = Statistic::ALL.iter().map(|s| s.name()).collect();
                Error::Parse(format!("unknown statistic {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

impl Serialize for Statistic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Sampling {
    Exhaustive,
    Random { n_samples: u64 },
}

impl Sampling {
    /// Exhaustive up to `EXHAUSTIVE_MAX_T`, otherwise `DEFAULT_SAMPLES` draws.
    pub fn default_for(t: u64) -> Self {
        if t <= EXHAUSTIVE_MAX_T {
            Sampling::Exhaustive
        } else {
            Sampling::Random { n_samples: DEFAULT_SAMPLES }
        }
    }
}

/// Summary of one statistic over the accepted shifts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleStats {
    #[serde(rename = "T")]
    pub t: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub f0: IntPoly,
    pub statistic_name: Statistic,
    /// Shifts examined: `2T + 1` when exhaustive, draws made when random.
    pub count_total: u64,
    pub count_irreducible: u64,
    pub count_reducible: u64,
    pub mean: f64,
    /// Population variance.
    pub variance: f64,
    pub quantiles: Vec<(f64, f64)>,
    pub seed: u64,
    pub sampling: Sampling,
    pub in_window: bool,
}

/// Per-shift reports in ascending `a`, plus the counts of the selection.
#[derive(Debug, Clone)]
pub struct EnsembleRun {
    pub f0: IntPoly,
    pub t: u64,
    pub n: u64,
    pub seed: u64,
    pub sampling: Sampling,
    pub count_total: u64,
    pub count_reducible: u64,
    pub reports: Vec<DecompositionReport>,
}

impl EnsembleRun {
    pub fn degree(&self) -> usize {
        self.f0.degree().unwrap_or(0)
    }

    pub fn values(&self, st: Statistic) -> Vec<f64> {
        let d = self.degree();
        self.reports.iter().map(|r| st.of(r, d)).collect()
    }

    pub fn stats(&self, st: Statistic) -> Result<EnsembleStats> {
        if st == Statistic::LogLRatio && self.n < 2 {
            return Err(Error::Domain("the log L ratio needs N >= 2".into()));
        }
        let values = self.values(st);
        let (mean, variance) = mean_variance(&values);
        Ok(EnsembleStats {
            t: self.t,
            n: self.n,
            f0: self.f0.clone(),
            statistic_name: st,
            count_total: self.count_total,
            count_irreducible: self.reports.len() as u64,
            count_reducible: self.count_reducible,
            mean,
            variance,
            quantiles: QUANTILE_LEVELS.iter().map(|&q| (q, quantile(&values, q))).collect(),
            seed: self.seed,
            sampling: self.sampling,
            in_window: WindowSpec { t: self.t, n: self.n, d: self.degree() }.in_window(),
        })
    }

    /// One CSV row per accepted shift, ascending `a`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(DecompositionReport::CSV_HEADER);
        out.push('\n');
        for r in &self.reports {
            out.push_str(&r.to_csv_row());
            out.push('\n');
        }
        out
    }
}

/// Mean and population variance, summed in the given order.
pub fn mean_variance(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var)
}

/// Linear-interpolation quantile (`h = (n − 1) q`).
pub fn quantile(values: &[f64], q: f64) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let h = (v.len() - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    v[lo] + (h - lo as f64) * (v[hi] - v[lo])
}

fn shift_value(t: u64, pos: u64) -> i64 {
    pos as i64 - t as i64
}

fn check_monic(f0: &IntPoly) -> Result<usize> {
    match f0.degree() {
        Some(d) if d >= 2 && f0.is_monic() => Ok(d),
        _ => Err(Error::Domain("f0 must be monic of degree >= 2".into())),
    }
}

fn irreducible_shift(f0: &IntPoly, a: i64) -> Result<bool> {
    let f = f0.shift(BigInt::from(a));
    if f.discriminant()?.is_zero() {
        return Ok(false);
    }
    shift_is_irreducible(&f)
}

/// `mask[a + T]` is true when `f0 − a` is irreducible over Q.
pub fn irreducible_mask(f0: &IntPoly, t: u64) -> Result<Vec<bool>> {
    check_monic(f0)?;
    (0..=2 * t)
        .into_par_iter()
        .map(|pos| irreducible_shift(f0, shift_value(t, pos)))
        .collect()
}

/// Number of `a` in `[−T, T]` with `f0 − a` reducible over Q.
pub fn reducible_count(f0: &IntPoly, t: u64) -> Result<u64> {
    Ok(irreducible_mask(f0, t)?.iter().filter(|&&irr| !irr).count() as u64)
}

/// Select shifts and compute a decomposition report for each.
pub fn ensemble_run(
    f0: &IntPoly,
    t: u64,
    n: u64,
    sampling: Sampling,
    seed: u64,
) -> Result<EnsembleRun> {
    let table = sieve_primes(n.max(2))?;
    ensemble_run_with(f0, t, n, sampling, seed, &table)
}

/// As [`ensemble_run`] with a caller-supplied prime table reaching `N`.
pub fn ensemble_run_with(
    f0: &IntPoly,
    t: u64,
    n: u64,
    sampling: Sampling,
    seed: u64,
    table: &PrimeTable,
) -> Result<EnsembleRun> {
    let d = check_monic(f0)?;
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let window = WindowSpec { t, n, d };
    if !window.in_window() {
        log::warn!("(T, N, d) = ({t}, {n}, {d}) is outside T^(1/(d-1)) < N < T/ln T");
    }
    let (mut shifts, count_total) = match sampling {
        Sampling::Exhaustive => {
            let mask = irreducible_mask(f0, t)?;
            let shifts: Vec<i64> = mask
                .iter()
                .enumerate()
                .filter(|(_, &irr)| irr)
                .map(|(pos, _)| shift_value(t, pos as u64))
                .collect();
            (shifts, 2 * t + 1)
        }
        Sampling::Random { n_samples } => sampling::draw_irreducible(f0, t, n_samples, seed)?,
    };
    if shifts.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    shifts.sort_unstable();
    let count_reducible = count_total - shifts.len() as u64;

    let opts = ReportOptions { allow_reducible: false, cross_check: true, timings: false };
    let reports = shifts
        .par_iter()
        .map(|&a| decomposition_report_with(f0, &BigInt::from(a), n, &opts, table))
        .collect::<Result<Vec<_>>>()?;
    Ok(EnsembleRun { f0: f0.clone(), t, n, seed, sampling, count_total, count_reducible, reports })
}

/// Mean, variance and quantiles of one statistic.
pub fn ensemble_average(
    f0: &IntPoly,
    t: u64,
    n: u64,
    statistic: Statistic,
    sampling: Sampling,
    seed: u64,
) -> Result<EnsembleStats> {
    ensemble_run(f0, t, n, sampling, seed)?.stats(statistic)
}

/// `ρ(a; p)` for every residue `a mod p`: the number of `x mod p` with
/// `f0(x) = a`.
pub fn rho_by_residue(f0: &IntPoly, p: u64) -> Vec<u64> {
    let fp = f0.reduce_mod(p);
    let mut counts = vec![0u64; p as usize];
    for x in 0..p {
        counts[fp.eval(x) as usize] += 1;
    }
    counts
}

fn residue(a: i64, p: u64) -> usize {
    a.rem_euclid(p as i64) as usize
}

/// `<σ(·;p) σ(·;q)>` over irreducible shifts `|a| <= T`.
pub fn covariance_sigma(f0: &IntPoly, p: u64, q: u64, t: u64) -> Result<f64> {
    let mask = irreducible_mask(f0, t)?;
    covariance_sigma_with_mask(f0, p, q, t, Some(&mask))
}

/// As [`covariance_sigma`]; `mask = None` averages over every shift without
/// the irreducibility filter.
pub fn covariance_sigma_with_mask(
    f0: &IntPoly,
    p: u64,
    q: u64,
    t: u64,
    mask: Option<&[bool]>,
) -> Result<f64> {
    let d = check_monic(f0)?;
    if p == q {
        return Err(Error::Domain("covariance needs distinct primes".into()));
    }
    for r in [p, q] {
        if !crate::ntkernel::is_prime_u64(r) {
            return Err(Error::NotPrime(r as u128));
        }
        if r <= d as u64 {
            return Err(Error::Domain(format!("prime {r} must exceed the degree {d}")));
        }
    }
    if let Some(m) = mask {
        if m.len() as u64 != 2 * t + 1 {
            return Err(Error::Domain("mask length must be 2T + 1".into()));
        }
    }
    // σ depends only on a mod p: cache it per residue
    let sp: Vec<i64> = rho_by_residue(f0, p).into_iter().map(|r| r as i64 - 1).collect();
    let sq: Vec<i64> = rho_by_residue(f0, q).into_iter().map(|r| r as i64 - 1).collect();
    let (mut total, mut count) = (0i64, 0u64);
    for pos in 0..=2 * t {
        if mask.is_some_and(|m| !m[pos as usize]) {
            continue;
        }
        let a = shift_value(t, pos);
        total += sp[residue(a, p)] * sq[residue(a, q)];
        count += 1;
    }
    if count == 0 {
        return Err(Error::EmptyEnsemble);
    }
    Ok(total as f64 / count as f64)
}

/// `(1/π(x)) Σ_{p<=x} ρ_f(p)` for irreducible `f`.
pub fn mean_rho(f: &IntPoly, x: u64) -> Result<f64> {
    if x < 2 {
        return Err(Error::Domain("mean_rho needs x >= 2".into()));
    }
    let g = f.div_exact_scalar(&f.content());
    if !crate::polyring::is_irreducible_over_q(&g)? {
        return Err(Error::Domain(format!("mean_rho needs an irreducible polynomial, got {f}")));
    }
    let table = sieve_primes(x)?;
    let primes = table.up_to(x)?;
    let counts = primes
        .par_iter()
        .map(|&p| modroots::rho(&g, p))
        .collect::<Result<Vec<u64>>>()?;
    Ok(counts.iter().sum::<u64>() as f64 / primes.len() as f64)
}

/// Fraction of `values` strictly above `threshold`.
pub fn fraction_above(values: &[f64], threshold: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().filter(|&&v| v > threshold).count() as f64 / values.len() as f64
}
