//! Roots of integer polynomials modulo `p` and `p^k`, the root count
//! `rho(a;p)` and its fluctuation `sigma = rho - 1`, and complete
//! exponential sums.
//!
//! Every function here takes the polynomial to be solved directly; for a
//! shift family pass [`ShiftedPoly::as_poly`](crate::ShiftedPoly::as_poly).

mod expsum;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::inv_mod;
use crate::ntkernel::is_prime_u64;
use crate::polyring::{discriminant, Poly};
use crate::scalar::IntScalar;
use crate::IntPoly;

pub use expsum::{sigma_via_expsum, sigma_via_expsum_complex, weil_bound, weil_sum};

/// Below this, roots mod `p` are found by evaluating at every residue.
pub const BRUTE_FORCE_LIMIT: u64 = 1 << 14;

/// Seed for equal-degree splitting when the caller does not supply one.
/// The root set does not depend on it; only the work done to find it does.
pub const DEFAULT_ROOT_SEED: u64 = 0x005e_ed0f_2007;

/// Complete, sorted, duplicate-free set of roots modulo `p^k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootSetModPk {
    pub p: u64,
    pub k: u32,
    pub modulus: u128,
    pub roots: Vec<u128>,
}

impl RootSetModPk {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

/// `sigma(a;p) = rho(a;p) - 1` for `f0 - a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaValue {
    #[serde(serialize_with = "crate::serde_util::bigint_str")]
    pub a: BigInt,
    pub p: u64,
    pub rho: u64,
    pub sigma: i64,
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime_u64(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p as u128))
    }
}

pub(crate) fn prime_power(p: u64, k: u32) -> Result<u128> {
    (p as u128).checked_pow(k).ok_or(Error::ModulusOverflow { p, k })
}

/// Roots of `f` modulo the prime `p`.
pub fn roots_mod_p<T: IntScalar>(f: &Poly<T>, p: u64) -> Result<RootSetModPk> {
    roots_mod_p_seeded(f, p, DEFAULT_ROOT_SEED)
}

/// As [`roots_mod_p`], with an explicit seed for the randomized splitting
/// used when `p >= BRUTE_FORCE_LIMIT`.
pub fn roots_mod_p_seeded<T: IntScalar>(f: &Poly<T>, p: u64, seed: u64) -> Result<RootSetModPk> {
    check_prime(p)?;
    let fp = f.reduce_mod(p);
    if fp.is_zero() {
        return Err(Error::DegenerateModP { p });
    }
    let roots = if p < BRUTE_FORCE_LIMIT {
        (0..p).filter(|&x| fp.eval(x) == 0).collect::<Vec<_>>()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p.rotate_left(17));
        fp.roots(&mut rng)
    };
    Ok(RootSetModPk { p, k: 1, modulus: p as u128, roots: roots.into_iter().map(u128::from).collect() })
}

/// `rho(f; p)`, the number of roots modulo `p`.
pub fn rho<T: IntScalar>(f: &Poly<T>, p: u64) -> Result<u64> {
    Ok(roots_mod_p(f, p)?.len() as u64)
}

/// `sigma(a;p) = rho(a;p) - 1` for `f0 - a`.
pub fn sigma(f0: &IntPoly, a: &BigInt, p: u64) -> Result<SigmaValue> {
    let rho = rho(f0.shift(a.clone()).as_poly(), p)?;
    Ok(SigmaValue { a: a.clone(), p, rho, sigma: rho as i64 - 1 })
}

/// `(f(r) / p^j) mod p` and `f'(r) mod p`, given `p^j | f(r)`.
fn lift_data(f: &IntPoly, df: &IntPoly, r: u128, p: u64, pj: u128) -> (u64, u64) {
    let rb = BigInt::from(r);
    let pb = BigInt::from(p);
    let q = f.eval(&rb) / BigInt::from(pj);
    let c = q.mod_floor(&pb).to_u64().unwrap();
    let s = df.eval(&rb).mod_floor(&pb).to_u64().unwrap();
    (c, s)
}

/// Children of the root `r mod p^j` (`j >= 1`) modulo `p^(j+1)`: the `t` in
/// `[0, p)` with `f(r + p^j t) = 0 mod p^(j+1)`. Because `j >= 1`,
/// `f(r + p^j t) = f(r) + p^j t f'(r) mod p^(j+1)`.
fn lift_children(f: &IntPoly, df: &IntPoly, r: u128, p: u64, pj: u128, out: &mut Vec<u128>) {
    let (c, s) = lift_data(f, df, r, p, pj);
    if s != 0 {
        // c + t s = 0 mod p
        let t = ((p - c) % p) as u128 * inv_mod(s, p) as u128 % p as u128;
        out.push(r + pj * t);
    } else if c == 0 {
        out.extend((0..p as u128).map(|t| r + pj * t));
    }
}

fn level_one(f: &IntPoly, p: u64) -> Vec<u128> {
    let fp = f.reduce_mod(p);
    if fp.is_zero() {
        (0..p as u128).collect()
    } else {
        (0..p).filter(|&x| fp.eval(x) == 0).map(u128::from).collect()
    }
}

/// Lift every simple root modulo `p` to `p^k`. Requires `p` not dividing
/// `disc(f)`, so every root lifts uniquely.
pub fn hensel_lift<T: IntScalar>(f: &Poly<T>, p: u64, k: u32) -> Result<RootSetModPk> {
    check_prime(p)?;
    if k == 0 {
        return Err(Error::Domain("hensel_lift needs k >= 1".into()));
    }
    let f = f.to_bigint();
    if f.degree().unwrap_or(0) >= 2 && (discriminant(&f)? % BigInt::from(p)).is_zero() {
        return Err(Error::SingularRoot { p });
    }
    let modulus = prime_power(p, k)?;
    let df = f.derivative();
    let mut roots: Vec<u128> = roots_mod_p(&f, p)?.roots;
    let mut pj = p as u128;
    for _ in 1..k {
        let mut next = Vec::with_capacity(roots.len());
        for &r in &roots {
            let before = next.len();
            lift_children(&f, &df, r, p, pj, &mut next);
            if next.len() != before + 1 {
                return Err(Error::SingularRoot { p });
            }
        }
        roots = next;
        pj *= p as u128;
    }
    roots.sort_unstable();
    Ok(RootSetModPk { p, k, modulus, roots })
}

/// All roots modulo `p^k`, singular ones included, by recursive lifting.
pub fn roots_mod_pk<T: IntScalar>(f: &Poly<T>, p: u64, k: u32) -> Result<RootSetModPk> {
    check_prime(p)?;
    if k == 0 {
        return Err(Error::Domain("roots modulo p^k need k >= 1".into()));
    }
    let modulus = prime_power(p, k)?;
    let f = f.to_bigint();
    let mb = BigInt::from(modulus);
    if f.coeffs().iter().all(|c| (c % &mb).is_zero()) {
        return Err(Error::DegenerateModP { p });
    }
    let df = f.derivative();
    let mut roots = level_one(&f, p);
    let mut pj = p as u128;
    for _ in 1..k {
        let mut next = Vec::new();
        for &r in &roots {
            lift_children(&f, &df, r, p, pj, &mut next);
        }
        roots = next;
        pj *= p as u128;
    }
    roots.sort_unstable();
    Ok(RootSetModPk { p, k, modulus, roots })
}

/// Number of roots modulo `p^k`, handling primes dividing the
/// discriminant.
pub fn count_roots_mod_pk<T: IntScalar>(f: &Poly<T>, p: u64, k: u32) -> Result<u64> {
    Ok(roots_mod_pk(f, p, k)?.len() as u64)
}

/// `(alpha, beta)`: total and maximal `p`-adic valuation of `f(n)` over
/// `1 <= n <= N`, by counting lattice points in the root classes modulo
/// `p^j`. Classes with no representative in `[1, N]` are pruned, and once
/// `p^j > N` the surviving classes hold a single `n` each, whose valuation
/// is read off exactly.
pub(crate) fn valuation_by_lifting(f: &IntPoly, n_max: u64, p: u64) -> Result<(u64, u64)> {
    check_prime(p)?;
    let n = n_max as u128;
    let df = f.derivative();
    let occupied = |r: u128, pj: u128| if r == 0 { pj <= n } else { r <= n };

    let mut pj = p as u128;
    let mut j = 1u64;
    let mut roots: Vec<u128> = level_one(f, p).into_iter().filter(|&r| occupied(r, pj)).collect();
    let (mut alpha, mut beta) = (0u64, 0u64);
    loop {
        if pj > n {
            for &r in &roots {
                // r in [1, N] is the only member of its class
                let v = f.eval(&BigInt::from(r));
                if v.is_zero() {
                    return Err(Error::ZeroValue { n: r as u64 });
                }
                let nu = crate::ntkernel::nu(p, &v)? as u64;
                debug_assert!(nu >= j);
                alpha += nu - j + 1;
                beta = beta.max(nu);
            }
            return Ok((alpha, beta));
        }
        let count: u128 = roots
            .iter()
            .map(|&r| if r == 0 { n / pj } else { (n - r) / pj + 1 })
            .sum();
        if count > 0 {
            alpha += count as u64;
            beta = j;
        }
        let mut next = Vec::new();
        for &r in &roots {
            lift_children(f, &df, r, p, pj, &mut next);
        }
        pj = pj.checked_mul(p as u128).ok_or(Error::ModulusOverflow { p, k: j as u32 + 1 })?;
        j += 1;
        roots = next.into_iter().filter(|&r| occupied(r, pj)).collect();
    }
}
