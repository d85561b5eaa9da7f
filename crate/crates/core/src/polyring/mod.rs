//! Exact polynomial arithmetic over the integers.
//!
//! [`Poly`] is generic over the coefficient type; the crate root aliases
//! `IntPoly = Poly<BigInt>` for the arbitrary-precision case.

mod irreducible;
mod resultant;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::FpPoly;
use crate::scalar::IntScalar;

pub use irreducible::is_irreducible_over_q;
pub use resultant::{discriminant, pseudo_remainder, resultant};

/// Dense univariate polynomial, coefficients in ascending degree.
///
/// Canonical: empty for the zero polynomial, otherwise the last coefficient
/// is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: IntScalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(
            coeffs
                .iter()
                .map(|&c| T::from_i64(c).expect("i64 fits every coefficient type"))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::from_usize(i).expect("degree fits"))
                .collect(),
        )
    }

    /// Nonnegative gcd of the coefficients; zero for the zero polynomial.
    pub fn content(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |g, c| g.gcd(c))
    }

    /// True when no prime divides every coefficient.
    pub fn is_primitive(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::Domain("the zero polynomial has no content".into()));
        }
        Ok(self.content().is_one())
    }

    pub fn neg(&self) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    /// Divide every coefficient by `c`; the caller guarantees exactness.
    pub fn div_exact_scalar(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|x| x.clone() / c.clone()).collect())
    }

    /// `self / d` in `Z[x]` if the quotient is integral, else `None`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let dd = d.degree()?;
        let lc = d.leading()?.clone();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return if self.is_zero() { Some(Poly::zero()) } else { None };
        }
        let mut q = vec![T::zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            if r[i].is_zero() {
                continue;
            }
            let (c, rem) = r[i].div_rem(&lc);
            if !rem.is_zero() {
                return None;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let k = i - dd + j;
                r[k] = r[k].clone() - c.clone() * dc.clone();
            }
            q[i - dd] = c;
        }
        r.iter().all(Zero::is_zero).then(|| Poly::new(q))
    }

    /// Reduce coefficients modulo the prime `p`.
    pub fn reduce_mod(&self, p: u64) -> FpPoly {
        let pb = BigInt::from(p);
        FpPoly::new(
            p,
            self.coeffs
                .iter()
                .map(|c| {
                    let c: BigInt = c.clone().into();
                    let r = ((c % &pb) + &pb) % &pb;
                    num_traits::ToPrimitive::to_u64(&r).expect("residue below p")
                })
                .collect(),
        )
    }

    pub fn to_bigint(&self) -> Poly<BigInt> {
        Poly { coeffs: self.coeffs.iter().map(|c| c.clone().into()).collect() }
    }

    /// `f0(x) - a`
    pub fn shift(&self, a: T) -> ShiftedPoly<T> {
        ShiftedPoly::new(self.clone(), a)
    }

    /// Exact divided difference `G(m,n) = (f(m) - f(n)) / (m - n)`, computed
    /// as `Σ_j c_j (m^{j-1} + m^{j-2} n + ... + n^{j-1})` without division.
    pub fn divided_difference(&self, m: u64, n: u64) -> Result<T> {
        if m == n {
            return Err(Error::Domain("divided difference needs m != n".into()));
        }
        let mt = T::from_u64(m).ok_or_else(|| Error::Domain("m out of range".into()))?;
        let nt = T::from_u64(n).ok_or_else(|| Error::Domain("n out of range".into()))?;
        // h_j = Σ_{i<j} m^i n^{j-1-i}; h_1 = 1, h_{j+1} = m h_j + n^j
        let mut total = T::zero();
        let mut h = T::one();
        let mut n_pow = T::one();
        for (j, c) in self.coeffs.iter().enumerate().skip(1) {
            if j > 1 {
                n_pow = n_pow * nt.clone();
                h = mt.clone() * h + n_pow.clone();
            }
            total = total + c.clone() * h.clone();
        }
        Ok(total)
    }

    /// Zero-set bound for the divided difference of a monic polynomial.
    pub fn find_c1(&self, scan_limit: u64) -> Result<C1Bound> {
        let d = match self.degree() {
            Some(d) if d >= 2 => d,
            _ => return Err(Error::Domain("find_c1 needs degree >= 2".into())),
        };
        if !self.is_monic() {
            return Err(Error::Domain("find_c1 needs a monic polynomial".into()));
        }
        let analytic = analytic_c1(&self.to_bigint(), d);

        let mut scanned = 0u64;
        let mut zeros = 0u64;
        for n in 2..=scan_limit {
            for m in 1..n {
                if self.divided_difference(m, n)?.is_zero() {
                    zeros += 1;
                    scanned = scanned.max(n);
                    if n >= analytic {
                        return Err(Error::Internal(format!(
                            "G({m},{n}) = 0 but the analytic bound is {analytic}"
                        )));
                    }
                }
            }
        }
        Ok(C1Bound { scanned, analytic, scan_limit, zeros })
    }
}

// smallest n >= 1 with n^{d-1} > Σ_{j=1}^{d-1} |c_j| j n^{j-1}
fn analytic_c1(f: &Poly<BigInt>, d: usize) -> u64 {
    let mut n = 1u64;
    loop {
        let nb = BigInt::from(n);
        let lhs = nb.pow(d as u32 - 1);
        let rhs: BigInt = (1..d)
            .map(|j| f.coeff(j).abs() * BigInt::from(j) * nb.pow(j as u32 - 1))
            .sum();
        if lhs > rhs {
            return n;
        }
        n += 1;
    }
}

/// Result of [`Poly::find_c1`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct C1Bound {
    /// Smallest `C` with `G(m,n) != 0` whenever `n > C`, within the scan.
    pub scanned: u64,
    /// Smallest `n` with `n^{d-1} > Σ |c_j| j n^{j-1}`; zeros of `G` need
    /// `max(m,n)` below it.
    pub analytic: u64,
    pub scan_limit: u64,
    /// Number of pairs `m < n <= scan_limit` with `G(m,n) = 0`.
    pub zeros: u64,
}

impl<T: IntScalar> fmt::Display for Poly<T> {
    /// Comma-separated ascending coefficients, `"0"` for the zero polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl<T: IntScalar> FromStr for Poly<T> {
    type Err = Error;

    /// Parses `"c0,c1,...,cd"` (signed decimal integers).
    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                let digits = tok.strip_prefix('-').unwrap_or(tok);
                if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(Error::Parse(format!("bad coefficient {tok:?} in {s:?}")));
                }
                T::from_str_radix(tok, 10)
                    .map_err(|_| Error::Parse(format!("coefficient {tok:?} out of range")))
            })
            .collect::<Result<Vec<T>>>()?;
        Ok(Poly::new(coeffs))
    }
}

impl<T: IntScalar> Serialize for Poly<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

/// `f_a(x) = f0(x) - a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftedPoly<T> {
    base: Poly<T>,
    shift: T,
    expanded: Poly<T>,
}

impl<T: IntScalar> ShiftedPoly<T> {
    pub fn new(base: Poly<T>, shift: T) -> Self {
        let expanded = base.sub(&Poly::constant(shift.clone()));
        ShiftedPoly { base, shift, expanded }
    }

    pub fn base(&self) -> &Poly<T> {
        &self.base
    }

    pub fn shift(&self) -> &T {
        &self.shift
    }

    /// The polynomial `f0 - a` itself.
    pub fn as_poly(&self) -> &Poly<T> {
        &self.expanded
    }

    /// Degree of `f0`; the shift does not change it when `deg f0 >= 1`.
    pub fn degree(&self) -> Option<usize> {
        self.base.degree()
    }

    pub fn eval(&self, n: &T) -> T {
        self.base.eval(n) - self.shift.clone()
    }

    pub fn discriminant(&self) -> Result<T> {
        discriminant(&self.expanded)
    }

    pub fn is_irreducible_over_q(&self) -> Result<bool> {
        is_irreducible_over_q(&self.expanded)
    }
}
