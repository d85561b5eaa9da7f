//! Almost-all check of `log L_a(N) ~ (d − 1) N ln N` on a seeded sample of
//! irreducible shifts inside the window `T^(1/(d−1)) < N < T / ln T`.

use serde::Serialize;

use super::{ensemble_run, quantile, EnsembleRun, Sampling, Statistic, EMPIRICAL};
use crate::error::{Error, Result};
use crate::IntPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WindowSpec {
    #[serde(rename = "T")]
    pub t: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub d: usize,
}

impl WindowSpec {
    /// `(T^(1/(d−1)), T / ln T)`; empty when `T < 2` or `d < 2`.
    pub fn bounds(&self) -> (f64, f64) {
        if self.t < 2 || self.d < 2 {
            return (f64::INFINITY, f64::NEG_INFINITY);
        }
        let t = self.t as f64;
        (t.powf(1.0 / (self.d as f64 - 1.0)), t / t.ln())
    }

    pub fn in_window(&self) -> bool {
        let (lo, hi) = self.bounds();
        let n = self.n as f64;
        lo < n && n < hi
    }
}

/// Tolerances of the component checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoremBands {
    /// `|C_N / ln N − 1| < cn_rel`.
    pub cn_rel: f64,
    /// `Bad_N <= bad_const N ln ln N`.
    pub bad_const: f64,
    /// `Δ_N <= delta_const N ln ln N`.
    pub delta_const: f64,
}

impl Default for TheoremBands {
    fn default() -> Self {
        TheoremBands { cn_rel: 0.5, bad_const: EMPIRICAL.bad_mean, delta_const: EMPIRICAL.delta_mean }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    pub window: WindowSpec,
    pub window_bounds: (f64, f64),
    pub in_window: bool,
    pub seed: u64,
    pub epsilon: f64,
    pub bands: TheoremBands,
    pub n_samples: u64,
    pub count_examined: u64,
    /// Fraction with `|log L / ((d−1) N ln N) − 1| < epsilon`.
    pub ratio_pass_fraction: f64,
    pub ratio_median: f64,
    pub ratio_mean: f64,
    pub ratio_quantiles: Vec<(f64, f64)>,
    pub cn_pass_fraction: f64,
    pub bad_pass_fraction: f64,
    pub delta_pass_fraction: f64,
}

fn fraction(values: &[f64], pass: impl Fn(f64) -> bool) -> f64 {
    values.iter().filter(|&&v| pass(v)).count() as f64 / values.len() as f64
}

/// Sample `n_samples` irreducible shifts and report the pass fractions.
/// Outside the window this is an error unless `allow_outside_window`.
#[allow(clippy::too_many_arguments)]
pub fn theorem_check(
    f0: &IntPoly,
    t: u64,
    n: u64,
    n_samples: u64,
    seed: u64,
    epsilon: f64,
    bands: TheoremBands,
    allow_outside_window: bool,
) -> Result<TheoremReport> {
    let d = f0.degree().unwrap_or(0);
    let window = WindowSpec { t, n, d };
    let in_window = window.in_window();
    if !in_window && !allow_outside_window {
        return Err(Error::WindowViolation { t, n, d });
    }
    if n < 2 {
        return Err(Error::Domain("the theorem check needs N >= 2".into()));
    }
    let run = ensemble_run(f0, t, n, Sampling::Random { n_samples }, seed)?;
    Ok(summarize(&run, window, epsilon, bands))
}

/// Pass fractions for an existing run.
pub fn summarize(run: &EnsembleRun, window: WindowSpec, epsilon: f64, bands: TheoremBands) -> TheoremReport {
    let n = run.n as f64;
    let lnln = n.ln().ln();
    let ratios = run.values(Statistic::LogLRatio);
    let cn = run.values(Statistic::CN);
    let bad = run.values(Statistic::Bad);
    let delta = run.values(Statistic::Delta);
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    TheoremReport {
        window,
        window_bounds: window.bounds(),
        in_window: window.in_window(),
        seed: run.seed,
        epsilon,
        bands,
        n_samples: run.reports.len() as u64,
        count_examined: run.count_total,
        ratio_pass_fraction: fraction(&ratios, |r| (r - 1.0).abs() < epsilon),
        ratio_median: quantile(&ratios, 0.5),
        ratio_mean: mean,
        ratio_quantiles: super::QUANTILE_LEVELS.iter().map(|&q| (q, quantile(&ratios, q))).collect(),
        cn_pass_fraction: fraction(&cn, |c| (c / n.ln() - 1.0).abs() < bands.cn_rel),
        bad_pass_fraction: fraction(&bad, |b| b <= bands.bad_const * n * lnln),
        delta_pass_fraction: fraction(&delta, |x| x <= bands.delta_const * n * lnln),
    }
}
