//! Complete exponential sums `S(b, p) = Σ_{x mod p} e(b f0(x) / p)` and the
//! exponential-sum expression for `sigma(a;p)`.
//!
//! Residues are reduced exactly in integer arithmetic before any floating
//! point is involved, so the only rounding is in the `cos`/`sin` calls and
//! the accumulation.

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::polyring::Poly;
use crate::scalar::{IntScalar, RealScalar};

/// `e(k / p)` for an exact residue `k` in `[0, p)`.
fn unit_root<F: RealScalar>(k: u64, p: u64) -> Complex<F> {
    let theta = F::TAU() * F::from_u64(k).unwrap() / F::from_u64(p).unwrap();
    Complex::new(theta.cos(), theta.sin())
}

/// `counts[v]` = number of `x mod p` with `f0(x) = v mod p`.
fn value_counts<T: IntScalar>(f0: &Poly<T>, p: u64) -> Vec<u64> {
    let fp = f0.reduce_mod(p);
    let mut counts = vec![0u64; p as usize];
    for x in 0..p {
        counts[fp.eval(x) as usize] += 1;
    }
    counts
}

/// `S(b, p) = Σ_{x=0}^{p-1} e(b f0(x) / p)` by direct summation.
pub fn weil_sum<T: IntScalar, F: RealScalar>(f0: &Poly<T>, b: u64, p: u64) -> Complex<F> {
    let fp = f0.reduce_mod(p);
    let b = b % p;
    (0..p).fold(Complex::new(F::zero(), F::zero()), |acc, x| {
        let k = (b as u128 * fp.eval(x) as u128 % p as u128) as u64;
        acc + unit_root::<F>(k, p)
    })
}

/// `(d - 1) sqrt(p)`.
pub fn weil_bound(d: usize, p: u64) -> f64 {
    (d as f64 - 1.0) * (p as f64).sqrt()
}

/// `(1/p) Σ_{t != 0} e(-a t / p) S(t, p)` as a complex number. Its real
/// part is `sigma(a;p)` and its imaginary part vanishes up to rounding.
pub fn sigma_via_expsum_complex<T: IntScalar, F: RealScalar>(
    f0: &Poly<T>,
    a: &BigInt,
    p: u64,
) -> Complex<F> {
    let counts = value_counts(f0, p);
    let a_mod = a.mod_floor(&BigInt::from(p)).to_u64().unwrap();
    let mut total = Complex::new(F::zero(), F::zero());
    for t in 1..p {
        // S(t, p) grouped by value class
        let mut s = Complex::new(F::zero(), F::zero());
        for (v, &c) in counts.iter().enumerate() {
            if c > 0 {
                let k = (t as u128 * v as u128 % p as u128) as u64;
                s = s + unit_root::<F>(k, p) * F::from_u64(c).unwrap();
            }
        }
        let k = (p - (t as u128 * a_mod as u128 % p as u128) as u64) % p;
        total = total + unit_root::<F>(k, p) * s;
    }
    total / F::from_u64(p).unwrap()
}

/// Real part of [`sigma_via_expsum_complex`] in double precision.
pub fn sigma_via_expsum<T: IntScalar>(f0: &Poly<T>, a: &BigInt, p: u64) -> f64 {
    sigma_via_expsum_complex::<T, f64>(f0, a, p).re
}
