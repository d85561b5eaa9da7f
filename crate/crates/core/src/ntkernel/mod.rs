//! Prime tables, p-adic valuations, integer factorization and the prime
//! log-sums `Σ ln p / p` that recur throughout the decomposition.

mod primality;
mod sieve;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub use primality::{
    gcd_u128, integer_root, is_prime_u128, is_prime_u64, mul_mod, perfect_power, pollard_brent,
    pow_mod,
};
pub use sieve::{sieve_primes, sieve_primes_with_budget, PrimeTable, DEFAULT_SIEVE_BUDGET};

/// Trial division bound used before Pollard-rho.
pub const TRIAL_DIVISION_BOUND: u64 = 100_000;

fn trial_primes() -> &'static PrimeTable {
    static TABLE: OnceLock<PrimeTable> = OnceLock::new();
    TABLE.get_or_init(|| sieve_primes(TRIAL_DIVISION_BOUND).expect("static bound"))
}

/// Complete factorization of a nonzero integer `|value| < 2^128`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    #[serde(serialize_with = "crate::serde_util::bigint_str")]
    pub value: BigInt,
    /// `(prime, exponent)`, strictly increasing primes.
    pub factors: Vec<(u128, u32)>,
}

impl Factorization {
    pub fn distinct_primes(&self) -> impl Iterator<Item = u128> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Rebuilds `|value|` from the factor list.
    pub fn product(&self) -> BigInt {
        self.factors
            .iter()
            .fold(BigInt::from(1), |acc, &(p, e)| acc * BigInt::from(p).pow(e))
    }

    /// Number of positive divisors.
    pub fn divisor_count(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<u128> {
        let mut out = vec![1u128];
        for &(p, e) in &self.factors {
            let len = out.len();
            let mut pk = 1u128;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    out.push(out[i] * pk);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

pub(crate) fn bigint_to_u128_abs(m: &BigInt) -> Result<u128> {
    m.magnitude()
        .to_u128()
        .ok_or_else(|| Error::UnsupportedSize { value: m.clone() })
}

/// `ν_p(m)`, the exponent of the prime `p` in `m`.
pub fn nu(p: u64, m: &BigInt) -> Result<u32> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p as u128));
    }
    if m.is_zero() {
        return Err(Error::UndefinedValuation);
    }
    if let Some(v) = m.magnitude().to_u128() {
        return Ok(nu_u128(p as u128, v));
    }
    let pb = BigInt::from(p);
    let mut rest = m.clone();
    let mut k = 0;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&rest, &pb);
        if !r.is_zero() {
            return Ok(k);
        }
        rest = q;
        k += 1;
    }
}

/// `ν_p(m)` for machine integers; `m > 0`.
#[inline]
pub fn nu_u128(p: u128, mut m: u128) -> u32 {
    debug_assert!(m != 0);
    let mut k = 0;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    k
}

/// Factor `m`, with `0 < |m| < 2^128`.
pub fn factor(m: &BigInt) -> Result<Factorization> {
    if m.is_zero() {
        return Err(Error::Domain("cannot factor 0".into()));
    }
    let n = bigint_to_u128_abs(m)?;
    Ok(Factorization { value: m.clone(), factors: factor_u128(n) })
}

/// Factor `n >= 1`: trial division to [`TRIAL_DIVISION_BOUND`], then
/// Pollard-rho on what remains.
pub fn factor_u128(n: u128) -> Vec<(u128, u32)> {
    let mut acc = BTreeMap::new();
    let mut rest = n;
    for &p in trial_primes().primes() {
        let p = p as u128;
        if p * p > rest {
            break;
        }
        let e = if rest % p == 0 { nu_u128(p, rest) } else { 0 };
        if e > 0 {
            rest /= p.pow(e);
            acc.insert(p, e);
        }
    }
    if rest > 1 {
        split_into(rest, 1, &mut acc);
    }
    acc.into_iter().collect()
}

/// Factor `n >= 1` assumed free of small primes, skipping trial division.
pub fn factor_rough(n: u128) -> Vec<(u128, u32)> {
    let mut acc = BTreeMap::new();
    let mut rest = n;
    for p in [2u128, 3, 5, 7] {
        let e = if rest % p == 0 { nu_u128(p, rest) } else { 0 };
        if e > 0 {
            rest /= p.pow(e);
            acc.insert(p, e);
        }
    }
    if rest > 1 {
        split_into(rest, 1, &mut acc);
    }
    acc.into_iter().collect()
}

fn split_into(n: u128, mult: u32, acc: &mut BTreeMap<u128, u32>) {
    if n == 1 {
        return;
    }
    if is_prime_u128(n) {
        *acc.entry(n).or_insert(0) += mult;
        return;
    }
    if let Some((r, k)) = perfect_power(n) {
        split_into(r, mult * k, acc);
        return;
    }
    let d = pollard_brent(n)
        .or_else(|| trial_split(n))
        .expect("composite below 2^128 must split");
    split_into(d, mult, acc);
    split_into(n / d, mult, acc);
}

// Last resort when every rho polynomial cycles without a split.
fn trial_split(n: u128) -> Option<u128> {
    let mut d = 2u128;
    while d * d <= n {
        if n % d == 0 {
            return Some(d);
        }
        d += 1;
    }
    None
}

/// `Σ_{p <= n} ln p / p`, summed in ascending prime order.
pub fn mertens_sum(n: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("mertens_sum needs N >= 2, got {n}")));
    }
    let table = sieve_primes(n)?;
    mertens_sum_in(&table, n)
}

/// As [`mertens_sum`] with a caller-supplied table.
pub fn mertens_sum_in(table: &PrimeTable, n: u64) -> Result<f64> {
    Ok(table.up_to(n)?.iter().map(|&p| (p as f64).ln() / p as f64).fold(0.0, |acc, x| acc + x))
}

/// `Σ_{p | k} ln p / p` over the distinct primes dividing `k`, `|k| > 1`.
pub fn divisor_logsum(k: &BigInt) -> Result<f64> {
    if k.magnitude() <= &1u8.into() {
        return Err(Error::Domain(format!("divisor_logsum needs |k| > 1, got {k}")));
    }
    let f = factor(k)?;
    Ok(f.distinct_primes()
        .map(|p| {
            let p = p as f64;
            p.ln() / p
        })
        .sum())
}

/// Signed divisors `±d` of a nonzero integer, ascending by absolute value.
pub(crate) fn signed_divisors(m: &BigInt) -> Result<Vec<BigInt>> {
    let f = factor(m)?;
    Ok(f.divisors()
        .into_iter()
        .flat_map(|d| [BigInt::from(d), BigInt::from_biguint(Sign::Minus, d.into())])
        .collect())
}
