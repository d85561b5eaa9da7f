//! `L_a(N) = lcm(f_a(1), ..., f_a(N))` computed two ways, and the exact
//! decomposition
//!
//! ```text
//! log L = log P + Σ_{p<=N} β_p ln p − Bad − Σ_{p<=N, p∤D} α_p ln p − Δ
//! ```
//!
//! with `Bad = Σ_{p<=N, p|D} α_p ln p`, `Δ = Σ_{p>N} (α_p − β_p) ln p`, and the
//! density terms `C_N`, `E_N`, `D_N`.

use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modroots;
use crate::ntkernel::{sieve_primes, PrimeTable};
use crate::scalar::ln_abs;
use crate::valengine::{self, LedgerKind, LedgerSet, ValuationLedger};
use crate::{IntPoly, ShiftedIntPoly};

/// Above this `N` the bigint lcm oracle is skipped by default.
pub const CROSS_CHECK_MAX_N: u64 = 2000;

/// Relative tolerance of the decomposition identity.
pub const IDENTITY_TOLERANCE: f64 = 1e-6;

/// Exact `L_a(N)` by the gcd chain `L <- L |v| / gcd(L, |v|)`.
pub fn lcm_bigint(f: &IntPoly, n_max: u64) -> Result<BigInt> {
    let mut l = BigInt::one();
    for n in 1..=n_max {
        let v = f.eval(&BigInt::from(n)).abs();
        if v.is_zero() {
            return Err(Error::ZeroValue { n });
        }
        // gcd(L, v) = gcd(L mod v, v) keeps the big operand out of the gcd
        let g = (&l % &v).gcd(&v);
        l *= v / g;
    }
    Ok(l)
}

/// Complete β ledger with the small-prime bound at `N`; `Π p^β = L_a(N)`.
pub fn lcm_ledger(f: &ShiftedIntPoly, n_max: u64) -> Result<ValuationLedger> {
    valengine::beta_ledger(f, n_max, n_max.max(2))
}

/// `Bad_N` and its split into first-level (`b1`) and higher (`b2`) events.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BadSplit {
    pub bad: f64,
    pub b1: f64,
    pub b2: f64,
}

/// Every term of the decomposition for one `(f0, a, N)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub f0: IntPoly,
    #[serde(serialize_with = "crate::serde_util::bigint_str")]
    pub a: BigInt,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "log_L")]
    pub log_l: f64,
    #[serde(rename = "log_P")]
    pub log_p: f64,
    pub bad: f64,
    pub delta: f64,
    #[serde(rename = "c_N")]
    pub c_n: f64,
    #[serde(rename = "e_N")]
    pub e_n: f64,
    #[serde(rename = "d_N")]
    pub d_n: f64,
    pub b1: f64,
    pub b2: f64,
    pub beta_small_logsum: f64,
    pub alpha_small_nondisc_logsum: f64,
    /// `log L − (d N ln N − Bad − Δ − N C_N)`.
    pub residual: f64,
    pub irreducible: bool,
    #[serde(serialize_with = "crate::serde_util::bigint_str")]
    pub discriminant: BigInt,
    /// `|lhs − rhs| / max(1, |log L|, |log P|)` for the identity above.
    pub identity_rel_error: f64,
    /// Whether `log_L` came from the bigint oracle, which was then matched
    /// exactly against the ledger.
    pub cross_checked: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

/// Wall-clock milliseconds per engine. Only filled on request, because it
/// makes otherwise deterministic output vary between runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Timings {
    pub ledger_ms: f64,
    pub bigint_ms: f64,
    pub terms_ms: f64,
}

impl DecompositionReport {
    pub const CSV_HEADER: &'static str =
        "a,N,log_L,log_P,bad,b1,b2,delta,c_N,e_N,d_N,residual,irreducible";

    pub fn identity_holds(&self) -> bool {
        self.identity_rel_error <= IDENTITY_TOLERANCE
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.a,
            self.n,
            self.log_l,
            self.log_p,
            self.bad,
            self.b1,
            self.b2,
            self.delta,
            self.c_n,
            self.e_n,
            self.d_n,
            self.residual,
            self.irreducible
        )
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ReportOptions {
    /// Permit shifts with `f_a` reducible over Q.
    pub allow_reducible: bool,
    /// Run the bigint oracle when `N <= CROSS_CHECK_MAX_N`.
    pub cross_check: bool,
    pub timings: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { allow_reducible: false, cross_check: true, timings: false }
    }
}

fn nonzero_discriminant(f: &ShiftedIntPoly) -> Result<BigInt> {
    let d = f.discriminant()?;
    if d.is_zero() {
        return Err(Error::DiscriminantZero { a: f.shift().clone() });
    }
    Ok(d)
}

fn divides(p: u64, d: &BigInt) -> bool {
    (d % BigInt::from(p)).is_zero()
}

fn table_for(n: u64) -> Result<PrimeTable> {
    sieve_primes(n.max(2))
}

/// Whether `f_a` is irreducible over Q (content removed first).
pub fn shift_is_irreducible(f: &ShiftedIntPoly) -> Result<bool> {
    let g = f.as_poly();
    crate::polyring::is_irreducible_over_q(&g.div_exact_scalar(&g.content()))
}

fn bad_from(set: &LedgerSet, disc: &BigInt, n: u64) -> BadSplit {
    let (mut b1, mut b2) = (0.0, 0.0);
    for (&p, &alpha) in set.alpha.range(..=n as u128) {
        if divides(p as u64, disc) {
            let lp = (p as f64).ln();
            let c1 = set.count1(p);
            b1 += c1 as f64 * lp;
            b2 += (alpha - c1) as f64 * lp;
        }
    }
    BadSplit { bad: b1 + b2, b1, b2 }
}

fn delta_from(set: &LedgerSet, n: u64) -> f64 {
    set.alpha
        .range(n as u128 + 1..)
        .map(|(&p, &a)| (a - set.beta(p)) as f64 * (p as f64).ln())
        .fold(0.0, |acc, x| acc + x)
}

/// `(C_N, E_N, D_N)` over the primes of `table` up to `n`.
fn density_terms(f: &IntPoly, disc: &BigInt, n: u64, table: &PrimeTable) -> Result<(f64, f64, f64)> {
    let (mut c, mut e, mut d) = (0.0, 0.0, 0.0);
    for &p in table.up_to(n)? {
        let lp = (p as f64).ln();
        if divides(p, disc) {
            e += lp / p as f64;
        } else {
            let rho = modroots::rho(f, p)? as f64;
            c += lp / (p - 1) as f64 * rho;
            d += lp / p as f64 * (rho - 1.0);
        }
    }
    Ok((c, e, d))
}

/// `Bad_N(a)` with its `(B1, B2)` split. Requires `D(a) != 0`.
#[allow(non_snake_case)]
pub fn bad_N(f0: &IntPoly, a: &BigInt, n: u64) -> Result<BadSplit> {
    let f = f0.shift(a.clone());
    let disc = nonzero_discriminant(&f)?;
    let table = table_for(n)?;
    let set = valengine::sieve_ledgers(f.as_poly(), n, n.max(2), &table)?;
    Ok(bad_from(&set, &disc, n))
}

/// `Δ_N(a) = Σ_{p>N} (α_p − β_p) ln p`.
#[allow(non_snake_case)]
pub fn delta_N(f0: &IntPoly, a: &BigInt, n: u64) -> Result<f64> {
    let f = f0.shift(a.clone());
    let table = table_for(n)?;
    let set = valengine::sieve_ledgers(f.as_poly(), n, n.max(2), &table)?;
    Ok(delta_from(&set, n))
}

/// `C_N(a) = Σ_{p<=N, p∤D} ln p / (p−1) · ρ(a;p)`.
#[allow(non_snake_case)]
pub fn c_N(f0: &IntPoly, a: &BigInt, n: u64) -> Result<f64> {
    let f = f0.shift(a.clone());
    let disc = nonzero_discriminant(&f)?;
    Ok(density_terms(f.as_poly(), &disc, n, &table_for(n)?)?.0)
}

/// `(E_N, D_N)`: `Σ_{p<=N, p|D} ln p / p` and `Σ_{p<=N, p∤D} (ln p / p) σ(a;p)`.
#[allow(non_snake_case)]
pub fn e_N_d_N(f0: &IntPoly, a: &BigInt, n: u64) -> Result<(f64, f64)> {
    let f = f0.shift(a.clone());
    let disc = nonzero_discriminant(&f)?;
    let (_, e, d) = density_terms(f.as_poly(), &disc, n, &table_for(n)?)?;
    Ok((e, d))
}

/// Full report with default options except `allow_reducible`.
pub fn decomposition_report(
    f0: &IntPoly,
    a: &BigInt,
    n: u64,
    allow_reducible: bool,
) -> Result<DecompositionReport> {
    let opts = ReportOptions { allow_reducible, ..ReportOptions::default() };
    decomposition_report_with(f0, a, n, &opts, &table_for(n)?)
}

/// Full report; `table` must cover the primes up to `max(N, 2)`.
pub fn decomposition_report_with(
    f0: &IntPoly,
    a: &BigInt,
    n: u64,
    opts: &ReportOptions,
    table: &PrimeTable,
) -> Result<DecompositionReport> {
    let d = match f0.degree() {
        Some(d) if d >= 2 => d,
        _ => return Err(Error::Domain("f0 must have degree >= 2".into())),
    };
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let f = f0.shift(a.clone());
    let disc = nonzero_discriminant(&f)?;
    let irreducible = shift_is_irreducible(&f)?;
    if !irreducible && !opts.allow_reducible {
        return Err(Error::IrreducibilityRequired { a: a.clone() });
    }

    let t0 = Instant::now();
    let set = valengine::sieve_ledgers(f.as_poly(), n, n.max(2), table)?;
    let ledger_ms = t0.elapsed().as_secs_f64() * 1e3;

    let t1 = Instant::now();
    let ledger_log_l = set.beta.iter().map(|(&p, &b)| b as f64 * (p as f64).ln()).fold(0.0, |acc, x| acc + x);
    let cross_checked = opts.cross_check && n <= CROSS_CHECK_MAX_N;
    let log_l = if cross_checked {
        let exact = lcm_bigint(f.as_poly(), n)?;
        let from_ledger = set
            .beta
            .iter()
            .fold(BigInt::one(), |acc, (&p, &b)| acc * BigInt::from(p).pow(b as u32));
        if exact != from_ledger {
            return Err(Error::Internal(format!(
                "lcm engines disagree for a = {a}, N = {n}"
            )));
        }
        ln_abs(&exact)
    } else {
        ledger_log_l
    };
    let bigint_ms = t1.elapsed().as_secs_f64() * 1e3;

    let t2 = Instant::now();
    let log_p = valengine::log_P(f.as_poly(), n)?;
    let split = bad_from(&set, &disc, n);
    let delta = delta_from(&set, n);
    let mut beta_small = 0.0;
    let mut alpha_small_nondisc = 0.0;
    for &p in table.up_to(n)? {
        let lp = (p as f64).ln();
        beta_small += set.beta(p as u128) as f64 * lp;
        if !divides(p, &disc) {
            alpha_small_nondisc += set.alpha(p as u128) as f64 * lp;
        }
    }
    let (c_n, e_n, d_n) = density_terms(f.as_poly(), &disc, n, table)?;
    let terms_ms = t2.elapsed().as_secs_f64() * 1e3;

    let nf = n as f64;
    let rhs = log_p + beta_small - split.bad - alpha_small_nondisc - delta;
    let scale = 1f64.max(log_l.abs()).max(log_p.abs());
    let identity_rel_error = (log_l - rhs).abs() / scale;
    let residual = log_l - (d as f64 * nf * nf.ln() - split.bad - delta - nf * c_n);

    Ok(DecompositionReport {
        f0: f0.clone(),
        a: a.clone(),
        n,
        log_l,
        log_p,
        bad: split.bad,
        delta,
        c_n,
        e_n,
        d_n,
        b1: split.b1,
        b2: split.b2,
        beta_small_logsum: beta_small,
        alpha_small_nondisc_logsum: alpha_small_nondisc,
        residual,
        irreducible,
        discriminant: disc,
        identity_rel_error,
        cross_checked,
        timings: opts.timings.then_some(Timings { ledger_ms, bigint_ms, terms_ms }),
    })
}

/// The β ledger of a report's inputs, for export.
pub fn report_ledger(f0: &IntPoly, a: &BigInt, n: u64, kind: LedgerKind) -> Result<ValuationLedger> {
    let f = f0.shift(a.clone());
    let (alpha, beta) = valengine::ledgers(&f, n, n.max(2))?;
    Ok(match kind {
        LedgerKind::Alpha => alpha,
        LedgerKind::Beta => beta,
    })
}
