//! Dense polynomials over the prime field F_p, `p < 2^63`.
//!
//! Only what root extraction and degree-pattern irreducibility screening
//! need: division, gcd, modular powering, distinct-degree and equal-degree
//! splitting.

use rand::Rng;

use crate::ntkernel::pow_mod;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpPoly {
    p: u64,
    /// Ascending; no trailing zeros. Empty means zero.
    coeffs: Vec<u64>,
}

#[inline]
fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
fn addm(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
fn subm(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a as u128, (p - 2) as u128, p as u128) as u64
}

impl FpPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        let mut f = FpPoly { p, coeffs };
        f.trim();
        f
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        FpPoly::new(p, vec![1])
    }

    /// `x + c`
    pub fn linear(p: u64, c: u64) -> Self {
        FpPoly::new(p, vec![c, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| addm(mulm(acc, x, p), c, p))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.leading(), self.p);
        FpPoly::new(self.p, self.coeffs.iter().map(|&c| mulm(c, inv, self.p)).collect())
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulm(c, i as u64 % p, p))
            .collect();
        FpPoly::new(p, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                subm(a, b, self.p)
            })
            .collect();
        FpPoly::new(self.p, coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return FpPoly::zero(self.p);
        }
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = addm(out[i + j], mulm(a, b, p), p);
            }
        }
        FpPoly::new(p, out)
    }

    /// `(q, r)` with `self = q * d + r`, `deg r < deg d`. `d` nonzero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (FpPoly::zero(p), self.clone());
        }
        let inv = inv_mod(d.leading(), p);
        let mut r = self.coeffs.clone();
        let mut q = vec![0u64; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = mulm(r[i], inv, p);
            if c == 0 {
                continue;
            }
            q[i - dd] = c;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                let k = i - dd + j;
                r[k] = subm(r[k], mulm(c, dc, p), p);
            }
        }
        r.truncate(dd);
        (FpPoly::new(p, q), FpPoly::new(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u128, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = FpPoly::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// `x^e mod self`.
    pub fn x_pow_mod(&self, e: u128) -> Self {
        FpPoly::new(self.p, vec![0, 1]).pow_mod(e, self)
    }

    /// Product of the distinct linear factors: `gcd(x^p - x, self)`.
    pub fn linear_part(&self) -> Self {
        let xp = self.x_pow_mod(self.p as u128);
        let x = FpPoly::new(self.p, vec![0, 1]);
        self.gcd(&xp.sub(&x))
    }

    /// Distinct roots in ascending order. `self` nonzero.
    pub fn roots<R: Rng>(&self, rng: &mut R) -> Vec<u64> {
        let g = self.linear_part();
        let mut out = Vec::new();
        split_linear(&g, rng, &mut out);
        out.sort_unstable();
        out
    }

    /// Distinct-degree factorization of a squarefree monic polynomial:
    /// `(k, product of all irreducible factors of degree k)`.
    pub fn distinct_degree(&self) -> Vec<(usize, FpPoly)> {
        let p = self.p;
        let x = FpPoly::new(p, vec![0, 1]);
        let mut rest = self.monic();
        let mut h = x.clone();
        let mut out = Vec::new();
        let mut k = 0;
        while rest.degree().unwrap_or(0) >= 2 * (k + 1) {
            k += 1;
            h = h.pow_mod(p as u128, &rest);
            let g = rest.gcd(&h.sub(&x));
            if g.degree().unwrap_or(0) > 0 {
                rest = rest.div_rem(&g).0;
                h = h.rem(&rest);
                out.push((k, g));
            }
        }
        if let Some(d) = rest.degree() {
            if d > 0 {
                out.push((d, rest));
            }
        }
        out
    }

    /// Degrees of the irreducible factors of a squarefree polynomial,
    /// ascending with multiplicity.
    pub fn factor_degrees(&self) -> Vec<usize> {
        let mut degs = Vec::new();
        for (k, g) in self.distinct_degree() {
            let count = g.degree().unwrap_or(0) / k;
            degs.extend(std::iter::repeat_n(k, count));
        }
        degs.sort_unstable();
        degs
    }
}

// Equal-degree splitting of a monic product of distinct linear factors.
fn split_linear<R: Rng>(g: &FpPoly, rng: &mut R, out: &mut Vec<u64>) {
    let p = g.p;
    match g.degree() {
        None | Some(0) => {}
        Some(1) => {
            let m = g.monic();
            out.push((p - m.coeffs[0]) % p);
        }
        Some(_) if p == 2 => {
            out.extend((0..2).filter(|&r| g.eval(r) == 0));
        }
        Some(d) => loop {
            let shift = rng.gen_range(0..p);
            let t = FpPoly::linear(p, shift).pow_mod(((p - 1) / 2) as u128, g);
            let h = g.gcd(&t.sub(&FpPoly::one(p)));
            let hd = h.degree().unwrap_or(0);
            if hd > 0 && hd < d {
                let (q, _) = g.div_rem(&h);
                split_linear(&h, rng, out);
                split_linear(&q, rng, out);
                return;
            }
        },
    }
}
