//! Exact irreducibility over Q for primitive integer polynomials of
//! degree <= 10.
//!
//! 1. rational-root test (settles degree <= 3);
//! 2. factor-degree patterns modulo up to 20 good primes, intersecting the
//!    possible degrees of a rational factor;
//! 3. Kronecker search for a factor of each surviving degree, pruned by the
//!    Mignotte bound. This stage is complete, so the answer is never
//!    probabilistic.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{discriminant, Poly};
use crate::error::{Error, Result};
use crate::ntkernel::{factor, is_prime_u64, signed_divisors};
use crate::scalar::IntScalar;

pub const MAX_DEGREE: usize = 10;
const PATTERN_PRIMES: usize = 20;
const POINT_SCAN: i64 = 40;
const VERIFY_POINTS: usize = 6;

pub fn is_irreducible_over_q<T: IntScalar>(f: &Poly<T>) -> Result<bool> {
    let f = f.to_bigint();
    let d = match f.degree() {
        None | Some(0) => {
            return Err(Error::Domain("irreducibility needs degree >= 1".into()));
        }
        Some(d) => d,
    };
    if !f.is_primitive()? {
        return Err(Error::Domain(format!("{f} is not primitive")));
    }
    if d > MAX_DEGREE {
        return Err(Error::UnsupportedDegree {
            degree: d,
            reason: "irreducibility is decided only up to degree 10",
        });
    }
    if d == 1 {
        return Ok(true);
    }
    if f.coeff(0).is_zero() {
        return Ok(false);
    }
    if has_rational_root(&f)? {
        return Ok(false);
    }
    if d <= 3 {
        return Ok(true);
    }
    let disc = discriminant(&f)?;
    if disc.is_zero() {
        // gcd(f, f') is a proper factor of positive degree
        return Ok(false);
    }

    // A linear factor is excluded, hence so is one of degree d - 1.
    let mut possible: BTreeSet<usize> = (2..=d - 2).collect();
    let lc = f.leading().unwrap().clone();
    let mut used = 0;
    let mut p = 2u64;
    while used < PATTERN_PRIMES && !possible.is_empty() {
        p += 1;
        if !is_prime_u64(p) {
            continue;
        }
        let pb = BigInt::from(p);
        if (&lc % &pb).is_zero() || (&disc % &pb).is_zero() {
            continue;
        }
        used += 1;
        let degs = f.reduce_mod(p).factor_degrees();
        if degs.len() == 1 {
            return Ok(true);
        }
        let sums = subset_sums(&degs);
        possible.retain(|k| sums.contains(k));
    }
    if possible.is_empty() {
        return Ok(true);
    }

    for k in possible.into_iter().filter(|&k| 2 * k <= d) {
        if kronecker_factor(&f, k)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn subset_sums(parts: &[usize]) -> BTreeSet<usize> {
    let mut sums = BTreeSet::from([0usize]);
    for &p in parts {
        let next: Vec<usize> = sums.iter().map(|s| s + p).collect();
        sums.extend(next);
    }
    sums
}

/// Any root `u/v` has `u | c0`, `v | lc` and `|u/v| <= 1 + max|c_i/lc|`.
fn has_rational_root(f: &Poly<BigInt>) -> Result<bool> {
    let d = f.degree().unwrap();
    let c0 = f.coeff(0);
    let lc = f.leading().unwrap().clone();
    let bound = 1 + f.coeffs()[..d].iter().map(|c| c.abs()).max().unwrap_or_default();
    let nums = match factor(&c0) {
        Ok(fc) => fc.divisors(),
        // constant term beyond 2^128: fall back on the complete stage 3
        Err(Error::UnsupportedSize { .. }) => return Ok(false),
        Err(e) => return Err(e),
    };
    let dens = factor(&lc)?.divisors();
    for &v in &dens {
        let vb = BigInt::from(v);
        for &u in &nums {
            let ub = BigInt::from(u);
            if ub > &bound * &vb {
                break;
            }
            if !ub.gcd(&vb).is_one() {
                continue;
            }
            for u in [ub.clone(), -ub.clone()] {
                if homogeneous_eval(f, &u, &vb).is_zero() {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

fn homogeneous_eval(f: &Poly<BigInt>, u: &BigInt, v: &BigInt) -> BigInt {
    let d = f.degree().unwrap();
    let mut acc = BigInt::zero();
    let mut upow = BigInt::one();
    for (i, c) in f.coeffs().iter().enumerate() {
        acc += c * &upow * v.pow((d - i) as u32);
        upow *= u;
    }
    acc
}

struct EvalPoint {
    x: BigInt,
    divisors: Vec<BigInt>,
}

/// Search for a factor of exact degree `k` with positive leading
/// coefficient. Returns it if one exists.
pub(crate) fn kronecker_factor(f: &Poly<BigInt>, k: usize) -> Result<Option<Poly<BigInt>>> {
    let d = f.degree().unwrap();
    let lc = f.leading().unwrap().abs();

    // Evaluation points with the fewest divisors make the search cheapest.
    let mut points = Vec::new();
    for x in (0..=POINT_SCAN).flat_map(|i| if i == 0 { vec![0] } else { vec![i, -i] }) {
        let xb = BigInt::from(x);
        let y = f.eval(&xb);
        if y.is_zero() {
            return Ok(Some(Poly::new(vec![-xb, BigInt::one()])));
        }
        let Ok(fy) = factor(&y) else { continue };
        points.push((fy.divisor_count(), xb, y));
    }
    points.sort_by_key(|a| a.0);
    if points.len() < k {
        return Err(Error::Internal("too few usable evaluation points".into()));
    }
    let nodes: Vec<EvalPoint> = points[..k]
        .iter()
        .map(|(_, x, y)| {
            Ok(EvalPoint { x: x.clone(), divisors: signed_divisors(y)? })
        })
        .collect::<Result<_>>()?;
    let checks: Vec<(BigInt, BigInt)> = points[k..]
        .iter()
        .take(VERIFY_POINTS)
        .map(|(_, x, y)| (x.clone(), y.clone()))
        .collect();

    let norm_sq: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let binom_sq: Vec<BigInt> = (0..=k).map(|j| binomial(k, j).pow(2)).collect();
    let lead_choices: Vec<BigInt> = factor(&lc)?.divisors().into_iter().map(BigInt::from).collect();

    let mut idx = vec![0usize; k];
    loop {
        let values: Vec<&BigInt> = nodes.iter().zip(&idx).map(|(n, &i)| &n.divisors[i]).collect();
        for l in &lead_choices {
            if let Some(g) = interpolate_with_leading(&nodes, &values, l, k) {
                let within_bound = g
                    .coeffs()
                    .iter()
                    .zip(&binom_sq)
                    .all(|(c, b2)| c * c <= b2 * &norm_sq);
                if !within_bound {
                    continue;
                }
                let passes = checks.iter().all(|(x, y)| {
                    let gx = g.eval(x);
                    !gx.is_zero() && (y % &gx).is_zero()
                });
                if passes && g.degree() == Some(k) && k < d {
                    if let Some(_q) = f.div_exact(&g) {
                        return Ok(Some(g));
                    }
                }
            }
        }
        // odometer over divisor choices
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(None);
            }
            idx[pos] += 1;
            if idx[pos] < nodes[pos].divisors.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// The unique `g = l x^k + h`, `deg h < k`, with `g(x_i) = values[i]`, if
/// it has integer coefficients.
fn interpolate_with_leading(
    nodes: &[EvalPoint],
    values: &[&BigInt],
    l: &BigInt,
    k: usize,
) -> Option<Poly<BigInt>> {
    let mut dd: Vec<BigInt> = nodes
        .iter()
        .zip(values)
        .map(|(n, &v)| v - l * n.x.pow(k as u32))
        .collect();
    // Newton divided differences; integrality is necessary for Z[x].
    for j in 1..k {
        for i in (j..k).rev() {
            let num = &dd[i] - &dd[i - 1];
            let den = &nodes[i].x - &nodes[i - j].x;
            let (q, r) = num.div_rem(&den);
            if !r.is_zero() {
                return None;
            }
            dd[i] = q;
        }
    }
    let mut h = Poly::constant(dd[k - 1].clone());
    for i in (0..k - 1).rev() {
        let lin = Poly::new(vec![-nodes[i].x.clone(), BigInt::one()]);
        h = h.mul(&lin).add(&Poly::constant(dd[i].clone()));
    }
    Some(h.add(&Poly::monomial(l.clone(), k)))
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}
