//! Empirical constants for the asymptotic bounds checked at desk scale.
//!
//! The underlying statements only assert `≪` with unspecified constants.
//! Each multiplier below was frozen after running the brute-force oracles
//! and is the single place to change it; every test and the acceptance
//! suite reads it from here.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmpiricalConstants {
    /// Mean of `Bad_N` over shifts is at most `bad_mean * N ln ln N`.
    pub bad_mean: f64,
    /// Mean of `Δ_N` over shifts is at most `delta_mean * N ln ln N`.
    pub delta_mean: f64,
    /// Mean of `|C_N − ln N|²` is at most `cn_variance * (ln ln N)²`.
    pub cn_variance: f64,
    /// `|<σ_p σ_q>| <= covariance * (sqrt(pq) ln(pq) / T + 1 / sqrt(T))`.
    pub covariance: f64,
    /// Reducible shifts `|a| <= T` number at most `reducible_sqrt * sqrt(T)`.
    pub reducible_sqrt: f64,
    /// `|Σ_{p<=N} ln p / p − ln N| <= mertens_gap`.
    pub mertens_gap: f64,
    /// `Σ_{p|k} ln p / p <= divisor_logsum.0 * ln ln k + divisor_logsum.1`.
    pub divisor_logsum: (f64, f64),
    /// Same shape for `E_N <= e_n.0 * ln ln |D| + e_n.1`.
    pub e_n: (f64, f64),
    /// `|C_N − (Σ_{p<=N} ln p / p − E_N + D_N)| <= cn_split_gap`.
    pub cn_split_gap: f64,
    /// Accepted range of `(1/π(x)) Σ_{p<=x} ρ(p)`.
    pub nagell_band: (f64, f64),
    /// Accepted range for the median of `log L / ((d−1) N ln N)`.
    pub ratio_median_band: (f64, f64),
}

pub const EMPIRICAL: EmpiricalConstants = EmpiricalConstants {
    bad_mean: 10.0,
    delta_mean: 10.0,
    cn_variance: 10.0,
    covariance: 20.0,
    reducible_sqrt: 5.0,
    mertens_gap: 2.0,
    divisor_logsum: (3.0, 3.0),
    e_n: (3.0, 3.0),
    cn_split_gap: 2.0,
    nagell_band: (0.85, 1.15),
    ratio_median_band: (0.55, 1.05),
};

fn lnln(x: f64) -> f64 {
    x.ln().ln()
}

impl EmpiricalConstants {
    pub fn bad_mean_bound(&self, n: u64) -> f64 {
        self.bad_mean * n as f64 * lnln(n as f64)
    }

    pub fn delta_mean_bound(&self, n: u64) -> f64 {
        self.delta_mean * n as f64 * lnln(n as f64)
    }

    pub fn cn_variance_bound(&self, n: u64) -> f64 {
        self.cn_variance * lnln(n as f64).powi(2)
    }

    pub fn covariance_bound(&self, p: u64, q: u64, t: u64) -> f64 {
        let pq = (p * q) as f64;
        let t = t as f64;
        self.covariance * (pq.sqrt() * pq.ln() / t + 1.0 / t.sqrt())
    }

    pub fn reducible_bound(&self, t: u64) -> f64 {
        self.reducible_sqrt * (t as f64).sqrt()
    }

    pub fn divisor_logsum_bound(&self, k: f64) -> f64 {
        self.divisor_logsum.0 * lnln(k) + self.divisor_logsum.1
    }

    pub fn e_n_bound(&self, abs_disc: f64) -> f64 {
        self.e_n.0 * lnln(abs_disc) + self.e_n.1
    }
}
