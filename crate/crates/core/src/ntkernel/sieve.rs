use serde::Serialize;

use crate::error::{Error, Result};

/// Largest limit accepted by [`sieve_primes`]. About 51 million primes, or
/// ~400 MiB for the table itself.
pub const DEFAULT_SIEVE_BUDGET: u64 = 1_000_000_000;

const SEGMENT_LEN: usize = 1 << 18;

/// Immutable ascending table of every prime `<= limit`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Primes `<= bound`. Fails if the table does not reach `bound`.
    pub fn up_to(&self, bound: u64) -> Result<&[u64]> {
        if bound > self.limit {
            return Err(Error::TableTooSmall { have: self.limit, need: bound });
        }
        let end = self.primes.partition_point(|&p| p <= bound);
        Ok(&self.primes[..end])
    }

    /// Primes in `(lo, hi]`.
    pub fn range(&self, lo: u64, hi: u64) -> Result<&[u64]> {
        let upper = self.up_to(hi)?;
        let start = upper.partition_point(|&p| p <= lo);
        Ok(&upper[start..])
    }

    /// `π(bound)` for `bound <= limit`.
    pub fn count_up_to(&self, bound: u64) -> Result<usize> {
        self.up_to(bound).map(<[u64]>::len)
    }

    pub fn contains(&self, n: u64) -> bool {
        self.primes.binary_search(&n).is_ok()
    }
}

/// All primes up to `limit` with the default memory budget.
pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    sieve_primes_with_budget(limit, DEFAULT_SIEVE_BUDGET)
}

/// Segmented sieve of Eratosthenes over odd numbers.
pub fn sieve_primes_with_budget(limit: u64, budget: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(Error::SieveLimitTooSmall { limit });
    }
    if limit > budget {
        return Err(Error::ResourceLimit { limit, budget });
    }

    let root = isqrt(limit);
    let base = simple_sieve(root);
    let mut primes = Vec::with_capacity(estimate_pi(limit));
    primes.push(2);

    // Segment covers odd numbers lo, lo+2, ..., index i <-> lo + 2i.
    let mut marks = vec![false; SEGMENT_LEN];
    let mut lo = 3u64;
    while lo <= limit {
        let span = (((limit - lo) / 2) + 1).min(SEGMENT_LEN as u64) as usize;
        let hi = lo + 2 * (span as u64 - 1);
        marks[..span].iter_mut().for_each(|m| *m = false);
        for &p in base.iter().skip(1) {
            let sq = p * p;
            if sq > hi {
                break;
            }
            let mut start = if sq >= lo { sq } else { lo.div_ceil(p) * p };
            if start % 2 == 0 {
                start += p;
            }
            let mut idx = ((start - lo) / 2) as usize;
            while idx < span {
                marks[idx] = true;
                idx += p as usize;
            }
        }
        primes.extend(
            marks[..span]
                .iter()
                .enumerate()
                .filter(|(_, &m)| !m)
                .map(|(i, _)| lo + 2 * i as u64),
        );
        lo = hi + 2;
    }

    Ok(PrimeTable { limit, primes })
}

fn simple_sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

fn estimate_pi(limit: u64) -> usize {
    let x = limit as f64;
    if x < 17.0 {
        8
    } else {
        (1.26 * x / x.ln()) as usize
    }
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}
