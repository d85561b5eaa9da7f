//! Exact valuation ledgers of the value sequence `f_a(1), ..., f_a(N)`.
//!
//! `alpha_p` is the total exponent of `p` in the product of the values and
//! `beta_p` the largest exponent in a single value, i.e. the exponent of `p`
//! in their lcm. Small primes (`p <= B`) are handled by a root sieve that
//! strips `p` from each value in the residue classes of the roots mod `p`;
//! whatever survives is a product of primes above `B` and is factored.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::modroots::{self, valuation_by_lifting};
use crate::ntkernel::{bigint_to_u128_abs, factor_rough, nu, sieve_primes, PrimeTable};
use crate::polyring::discriminant;
use crate::{IntPoly, ShiftedIntPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LedgerKind {
    Alpha,
    Beta,
}

/// Exact map prime -> positive exponent for one `(f0, a, N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationLedger {
    pub kind: LedgerKind,
    pub n: u64,
    pub f0: IntPoly,
    pub shift: BigInt,
    pub entries: BTreeMap<u128, u64>,
}

impl ValuationLedger {
    pub fn get(&self, p: u128) -> u64 {
        self.entries.get(&p).copied().unwrap_or(0)
    }

    /// `Σ e_p ln p`, ascending in `p`.
    pub fn log_sum(&self) -> f64 {
        // an empty float sum would be -0.0
        self.entries.iter().map(|(&p, &e)| e as f64 * (p as f64).ln()).fold(0.0, |acc, x| acc + x)
    }

    /// `Π p^{e_p}` as an exact integer.
    pub fn product(&self) -> BigInt {
        self.entries
            .iter()
            .fold(BigInt::from(1), |acc, (&p, &e)| acc * BigInt::from(p).pow(e as u32))
    }
}

// Entries serialize as {"p": e} in ascending prime order (not string order).
struct Entries<'a>(&'a BTreeMap<u128, u64>);

impl Serialize for Entries<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (p, e) in self.0 {
            map.serialize_entry(&p.to_string(), e)?;
        }
        map.end()
    }
}

impl Serialize for ValuationLedger {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ValuationLedger", 5)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("f0", &self.f0)?;
        st.serialize_field("a", &self.shift.to_string())?;
        st.serialize_field("N", &self.n)?;
        st.serialize_field("entries", &Entries(&self.entries))?;
        st.end()
    }
}

/// Everything the root sieve learns about one `(f0, a, N)`.
#[derive(Debug, Clone)]
pub struct LedgerSet {
    pub n: u64,
    pub small_limit: u64,
    pub alpha: BTreeMap<u128, u64>,
    pub beta: BTreeMap<u128, u64>,
    /// `#{n <= N : p | f_a(n)}`, the first-level (`k = 1`) events inside
    /// `alpha_p`.
    pub count1: BTreeMap<u128, u64>,
    /// `|f_a(n)|` with every prime `<= small_limit` removed, indexed by `n - 1`.
    pub cofactors: Vec<u128>,
    /// `max_n |f_a(n)|`.
    pub max_abs: u128,
}

impl LedgerSet {
    pub fn alpha(&self, p: u128) -> u64 {
        self.alpha.get(&p).copied().unwrap_or(0)
    }

    pub fn beta(&self, p: u128) -> u64 {
        self.beta.get(&p).copied().unwrap_or(0)
    }

    pub fn count1(&self, p: u128) -> u64 {
        self.count1.get(&p).copied().unwrap_or(0)
    }
}

/// `|f(n)|` for `1 <= n <= N`; errors on a zero value or one beyond 128 bits.
pub fn abs_values(f: &IntPoly, n_max: u64) -> Result<Vec<u128>> {
    (1..=n_max)
        .map(|n| {
            let v = f.eval(&BigInt::from(n));
            if v.is_zero() {
                return Err(Error::ZeroValue { n });
            }
            bigint_to_u128_abs(&v)
        })
        .collect()
}

/// `α_p(N) = Σ_{n <= N} ν_p(f(n))` via root lifting.
pub fn alpha_p(f: &IntPoly, n_max: u64, p: u64) -> Result<u64> {
    Ok(valuation_by_lifting(f, n_max, p)?.0)
}

/// `β_p(N) = max_{n <= N} ν_p(f(n))` via root lifting.
pub fn beta_p(f: &IntPoly, n_max: u64, p: u64) -> Result<u64> {
    Ok(valuation_by_lifting(f, n_max, p)?.1)
}

/// `(α_p, β_p)` by the direct loop over `n`; the oracle for the lifting path.
pub fn valuations_direct(f: &IntPoly, n_max: u64, p: u64) -> Result<(u64, u64)> {
    let (mut alpha, mut beta) = (0u64, 0u64);
    for n in 1..=n_max {
        let v = f.eval(&BigInt::from(n));
        if v.is_zero() {
            return Err(Error::ZeroValue { n });
        }
        let e = nu(p, &v)? as u64;
        alpha += e;
        beta = beta.max(e);
    }
    Ok((alpha, beta))
}

/// Root sieve over `p <= b` plus factoring of the cofactors, using a prime
/// table that must reach `b`.
pub fn sieve_ledgers(f: &IntPoly, n_max: u64, b: u64, table: &PrimeTable) -> Result<LedgerSet> {
    if b < 2 {
        return Err(Error::Domain(format!("small-prime bound must be >= 2, got {b}")));
    }
    let mut cof = abs_values(f, n_max)?;
    let max_abs = cof.iter().copied().max().unwrap_or(1);
    let mut alpha = BTreeMap::new();
    let mut beta = BTreeMap::new();
    let mut count1 = BTreeMap::new();

    for &p in table.up_to(b)? {
        if p as u128 > max_abs {
            break;
        }
        let roots: Vec<u64> = match modroots::roots_mod_p(f, p) {
            Ok(r) => r.roots.into_iter().map(|r| r as u64).collect(),
            Err(Error::DegenerateModP { .. }) => (0..p).collect(),
            Err(e) => return Err(e),
        };
        let pw = p as u128;
        let (mut a, mut bmax, mut c1) = (0u64, 0u64, 0u64);
        for r in roots {
            let mut n = if r == 0 { p } else { r };
            while n <= n_max {
                let slot = &mut cof[(n - 1) as usize];
                let mut e = 0u64;
                while *slot % pw == 0 {
                    *slot /= pw;
                    e += 1;
                }
                debug_assert!(e >= 1, "root class member not divisible by p");
                a += e;
                bmax = bmax.max(e);
                c1 += 1;
                n += p;
            }
        }
        if a > 0 {
            alpha.insert(pw, a);
            beta.insert(pw, bmax);
            count1.insert(pw, c1);
        }
    }

    let factored: Vec<Vec<(u128, u32)>> = cof
        .par_iter()
        .map(|&c| if c > 1 { factor_rough(c) } else { Vec::new() })
        .collect();
    for fs in &factored {
        for &(q, e) in fs {
            let e = e as u64;
            *alpha.entry(q).or_insert(0) += e;
            let bq = beta.entry(q).or_insert(0);
            *bq = (*bq).max(e);
            *count1.entry(q).or_insert(0) += 1;
        }
    }
    Ok(LedgerSet { n: n_max, small_limit: b, alpha, beta, count1, cofactors: cof, max_abs })
}

fn ledgers_for(f: &ShiftedIntPoly, n_max: u64, b: u64) -> Result<LedgerSet> {
    let table = sieve_primes(b.max(2))?;
    sieve_ledgers(f.as_poly(), n_max, b, &table)
}

fn wrap(f: &ShiftedIntPoly, n: u64, kind: LedgerKind, entries: BTreeMap<u128, u64>) -> ValuationLedger {
    ValuationLedger { kind, n, f0: f.base().clone(), shift: f.shift().clone(), entries }
}

/// Complete α ledger and the cofactors left after removing primes `<= b`.
pub fn alpha_ledger(f: &ShiftedIntPoly, n_max: u64, b: u64) -> Result<(ValuationLedger, Vec<u128>)> {
    let set = ledgers_for(f, n_max, b)?;
    Ok((wrap(f, n_max, LedgerKind::Alpha, set.alpha), set.cofactors))
}

/// Complete β ledger; its product is `L_a(N)`.
pub fn beta_ledger(f: &ShiftedIntPoly, n_max: u64, b: u64) -> Result<ValuationLedger> {
    let set = ledgers_for(f, n_max, b)?;
    Ok(wrap(f, n_max, LedgerKind::Beta, set.beta))
}

/// Both ledgers from a single sieve pass.
pub fn ledgers(f: &ShiftedIntPoly, n_max: u64, b: u64) -> Result<(ValuationLedger, ValuationLedger)> {
    let set = ledgers_for(f, n_max, b)?;
    Ok((
        wrap(f, n_max, LedgerKind::Alpha, set.alpha),
        wrap(f, n_max, LedgerKind::Beta, set.beta),
    ))
}

/// `log P(N) = Σ_{n <= N} ln |f(n)|`, ascending in `n`.
#[allow(non_snake_case)]
pub fn log_P(f: &IntPoly, n_max: u64) -> Result<f64> {
    let mut total = 0.0;
    for n in 1..=n_max {
        let v = f.eval(&BigInt::from(n));
        if v.is_zero() {
            return Err(Error::ZeroValue { n });
        }
        total += crate::scalar::ln_abs(&v);
    }
    Ok(total)
}

/// `α_p(N) - N ρ(p) / (p - 1)`; requires `p ∤ disc(f)`.
pub fn alpha_approx_residual(f: &IntPoly, n_max: u64, p: u64) -> Result<f64> {
    let disc = discriminant(f)?;
    if (&disc % BigInt::from(p)).is_zero() {
        return Err(Error::Domain(format!("p = {p} divides the discriminant {disc}")));
    }
    let alpha = alpha_p(f, n_max, p)?;
    let rho = modroots::rho(f, p)?;
    Ok(alpha as f64 - n_max as f64 * rho as f64 / (p - 1) as f64)
}

/// `ln max_{n <= N} |f(n)|`.
pub fn log_max_abs(f: &IntPoly, n_max: u64) -> Result<f64> {
    let mut best = BigInt::zero();
    for n in 1..=n_max {
        let v = f.eval(&BigInt::from(n));
        if v.is_zero() {
            return Err(Error::ZeroValue { n });
        }
        let v = num_traits::Signed::abs(&v);
        if v > best {
            best = v;
        }
    }
    Ok(crate::scalar::ln_abs(&best))
}

/// `log_p x` for `x = e^{ln_x}`.
pub fn log_base(p: u128, ln_x: f64) -> f64 {
    ln_x / (p.to_f64().unwrap()).ln()
}
