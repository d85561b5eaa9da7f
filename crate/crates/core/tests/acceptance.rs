//! Acceptance suite: one line per criterion, `PASS` or `FAIL`, with the
//! measured quantity and the wall time. Exits non-zero if anything fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polylcm::decomp::{decomposition_report, lcm_bigint, lcm_ledger};
use polylcm::ensemble::{
    covariance_sigma, ensemble_run, mean_rho, reducible_count, summarize, EnsembleRun, TheoremBands,
    WindowSpec, EMPIRICAL,
};
use polylcm::modroots::{rho, weil_bound, weil_sum};
use polylcm::ntkernel::{divisor_logsum, mertens_sum, sieve_primes};
use polylcm::polyring::{discriminant, is_irreducible_over_q};
use polylcm::scalar::ln_abs;
use polylcm::valengine::{alpha_approx_residual, log_max_abs, log_P, log_base, sieve_ledgers, valuations_direct};
use polylcm::{IntPoly, Sampling, Statistic};

const SEED: u64 = 20_240_601;
const ENSEMBLE_T: u64 = 200_000;
const ENSEMBLE_SAMPLES: u64 = 200;

type Outcome = Result<String, String>;

fn p(c: &[i64]) -> IntPoly {
    IntPoly::from_i64(c)
}

fn cube() -> IntPoly {
    p(&[0, 0, 0, 1])
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Engine equivalence on random irreducible cases.
fn c1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut done = 0;
    let mut largest_bits = 0;
    while done < 30 {
        let d = rng.gen_range(3..=5usize);
        let mut coeffs: Vec<i64> = (0..d).map(|_| rng.gen_range(-6..=6)).collect();
        coeffs.push(1);
        let f0 = p(&coeffs);
        let a = BigInt::from(rng.gen_range(-100..=100i64));
        let n = rng.gen_range(1..=1000u64);
        let f = f0.shift(a.clone());
        if discriminant(f.as_poly()).map_err(|e| e.to_string())?.is_zero()
            || !is_irreducible_over_q(f.as_poly()).map_err(|e| e.to_string())?
        {
            continue;
        }
        let ledger = lcm_ledger(&f, n).map_err(|e| e.to_string())?.product();
        let oracle = lcm_bigint(f.as_poly(), n).map_err(|e| e.to_string())?;
        if ledger != oracle {
            return Err(format!("mismatch for f = {} at N = {n}", f.as_poly()));
        }
        largest_bits = largest_bits.max(oracle.bits());
        done += 1;
    }
    Ok(format!("30/30 bit-identical, largest L has {largest_bits} bits"))
}

/// Decomposition identity with every term recomputed independently:
/// `log L` from the bigint lcm, `log P` from the values, the small-prime
/// sums from the direct valuation loop, `Δ` from the factoring ledger.
fn c2() -> Outcome {
    let f0 = p(&[0, 2, 0, 1]);
    let n = 500u64;
    let table = sieve_primes(n).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    let mut count = 0;
    for a in -30i64..=30 {
        let a = BigInt::from(a);
        let f = f0.shift(a.clone());
        if !is_irreducible_over_q(f.as_poly()).map_err(|e| e.to_string())? {
            continue;
        }
        let r = decomposition_report(&f0, &a, n, false).map_err(|e| e.to_string())?;
        let disc = discriminant(f.as_poly()).map_err(|e| e.to_string())?;
        let log_l = ln_abs(&lcm_bigint(f.as_poly(), n).map_err(|e| e.to_string())?);
        let lp = log_P(f.as_poly(), n).map_err(|e| e.to_string())?;
        let (mut beta_small, mut bad, mut alpha_nondisc) = (0.0, 0.0, 0.0);
        for &q in table.up_to(n).map_err(|e| e.to_string())? {
            let (al, be) = valuations_direct(f.as_poly(), n, q).map_err(|e| e.to_string())?;
            let lq = (q as f64).ln();
            beta_small += be as f64 * lq;
            if (&disc % BigInt::from(q)).is_zero() {
                bad += al as f64 * lq;
            } else {
                alpha_nondisc += al as f64 * lq;
            }
        }
        let rhs = lp + beta_small - bad - alpha_nondisc - r.delta;
        let rel = (log_l - rhs).abs() / 1f64.max(log_l.abs()).max(lp.abs());
        let agree = [(r.log_l, log_l), (r.log_p, lp), (r.bad, bad), (r.beta_small_logsum, beta_small)]
            .iter()
            .all(|(x, y)| (x - y).abs() <= 1e-9 * 1f64.max(y.abs()));
        if !agree || !r.identity_holds() {
            return Err(format!("a = {a}: report terms disagree with the independent path"));
        }
        worst = worst.max(rel).max(r.identity_rel_error);
        count += 1;
    }
    check(worst <= 1e-6 && count > 0, format!("{count} shifts, worst relative error {worst:.2e}"))
}

/// Weil bound for every `b` and every prime `d < p <= 199`.
fn c3() -> Outcome {
    let polys = [p(&[0, 0, 0, 1]), p(&[0, 2, 0, 1]), p(&[0, -3, 0, 1]), p(&[0, 1, 0, 0, 1]), p(&[1, 1, 0, 0, 0, 1])];
    let table = sieve_primes(199).map_err(|e| e.to_string())?;
    let mut checked = 0u64;
    let mut tightest = f64::INFINITY;
    for f0 in &polys {
        let d = f0.degree().unwrap();
        for &q in table.primes().iter().filter(|&&q| q as usize > d) {
            let bound = weil_bound(d, q);
            for b in 1..q {
                let s = weil_sum::<BigInt, f64>(f0, b, q).norm();
                if s > bound {
                    return Err(format!("|S| = {s} > {bound} for f0 = {f0}, p = {q}, b = {b}"));
                }
                tightest = tightest.min(bound - s);
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} sums within the bound, smallest margin {tightest:.3e}"))
}

/// Hensel approximation of `α_p` for `x^3 − a`, checked on the root-lifting
/// path and against the sieve ledger. `x^3 − 1` vanishes at `n = 1`, so for
/// that shift the values `n = 2..=N` are used, i.e. `(m + 1)^3 − 1` for
/// `m <= N − 1`; the discriminant and the root counts are unchanged.
fn c4() -> Outcome {
    let n = 10_000u64;
    let table = sieve_primes(n).map_err(|e| e.to_string())?;
    let mut checked = 0;
    let mut worst = f64::NEG_INFINITY;
    for a in [1i64, 2, 5] {
        let f = cube().shift(BigInt::from(a));
        let (g, len) = if a == 1 { (p(&[0, 3, 3, 1]), n - 1) } else { (f.as_poly().clone(), n) };
        let g = &g;
        let disc = discriminant(g).map_err(|e| e.to_string())?;
        let ln_max = log_max_abs(g, len).map_err(|e| e.to_string())?;
        let set = sieve_ledgers(g, len, n, &table).map_err(|e| e.to_string())?;
        for &q in table.up_to(n).map_err(|e| e.to_string())? {
            if (&disc % BigInt::from(q)).is_zero() {
                continue;
            }
            let res = alpha_approx_residual(g, len, q).map_err(|e| e.to_string())?;
            let r = rho(g, q).map_err(|e| e.to_string())?;
            let sieve_res = set.alpha(q as u128) as f64 - len as f64 * r as f64 / (q - 1) as f64;
            if (res - sieve_res).abs() > 1e-9 {
                return Err(format!("a = {a}, p = {q}: lifting and sieve disagree"));
            }
            let bound = 3.0 * (log_base(q as u128, ln_max) + 2.0);
            if res.abs() > bound {
                return Err(format!("a = {a}, p = {q}: |residual| = {} > {bound}", res.abs()));
            }
            worst = worst.max(res.abs() / bound);
            checked += 1;
        }
    }
    Ok(format!("{checked} (a, p) pairs, worst |residual| / bound = {worst:.3} (a = 1 over n = 2..N)"))
}

/// Mertens at every `N` in range and the divisor log-sum for every `k`.
fn c5() -> Outcome {
    let limit = 1_000_000u64;
    let table = sieve_primes(limit).map_err(|e| e.to_string())?;
    let mut sum = 0.0f64;
    let mut next = table.primes().iter().peekable();
    let mut worst_gap = 0.0f64;
    for m in 2..=limit {
        while next.peek().is_some_and(|&&q| q <= m) {
            let q = *next.next().unwrap() as f64;
            sum += q.ln() / q;
        }
        if m >= 10 {
            worst_gap = worst_gap.max((sum - (m as f64).ln()).abs());
        }
        if m.is_power_of_two() || m == limit {
            let direct = mertens_sum(m).map_err(|e| e.to_string())?;
            if (direct - sum).abs() > 1e-9 {
                return Err(format!("mertens_sum({m}) = {direct} but the running sum is {sum}"));
            }
        }
    }
    if worst_gap > EMPIRICAL.mertens_gap {
        return Err(format!("Mertens gap {worst_gap} exceeds {}", EMPIRICAL.mertens_gap));
    }
    use rayon::prelude::*;
    let worst_k = (3..=limit)
        .into_par_iter()
        .map(|k| {
            let s = divisor_logsum(&BigInt::from(k)).unwrap();
            (s - EMPIRICAL.divisor_logsum_bound(k as f64), k)
        })
        .reduce(|| (f64::NEG_INFINITY, 0), |x, y| if y.0 > x.0 { y } else { x });
    check(
        worst_k.0 <= 0.0,
        format!("max Mertens gap {worst_gap:.4}; divisor log-sum slack at worst k = {}: {:.4}", worst_k.1, -worst_k.0),
    )
}

fn cube_run(n: u64) -> Result<EnsembleRun, String> {
    ensemble_run(&cube(), ENSEMBLE_T, n, Sampling::Random { n_samples: ENSEMBLE_SAMPLES }, SEED)
        .map_err(|e| e.to_string())
}

/// JSON for the averaged bounds; also what the determinism check compares.
fn c6_json(run: &EnsembleRun) -> Result<String, String> {
    let stats = [Statistic::Bad, Statistic::Delta, Statistic::CnDeviationSq]
        .iter()
        .map(|&s| run.stats(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    serde_json::to_string(&stats).map_err(|e| e.to_string())
}

fn c6(run: &EnsembleRun) -> Outcome {
    let n = run.n;
    let mean = |s| run.stats(s).map(|st| st.mean).map_err(|e| e.to_string());
    let (bad, delta, cn) = (mean(Statistic::Bad)?, mean(Statistic::Delta)?, mean(Statistic::CnDeviationSq)?);
    let (bb, db, cb) = (EMPIRICAL.bad_mean_bound(n), EMPIRICAL.delta_mean_bound(n), EMPIRICAL.cn_variance_bound(n));
    check(
        run.reports.len() as u64 == ENSEMBLE_SAMPLES && bad <= bb && delta <= db && cn <= cb,
        format!(
            "{} shifts; <Bad> = {bad:.1} <= {bb:.1}, <Delta> = {delta:.1} <= {db:.1}, <|C_N - ln N|^2> = {cn:.3} <= {cb:.3}",
            run.reports.len()
        ),
    )
}

fn c7_json(hi: &EnsembleRun, lo: &EnsembleRun) -> Result<String, String> {
    let reports: Vec<_> = [hi, lo]
        .iter()
        .map(|r| {
            let w = WindowSpec { t: r.t, n: r.n, d: 3 };
            summarize(r, w, 0.5, TheoremBands::default())
        })
        .collect();
    serde_json::to_string(&reports).map_err(|e| e.to_string())
}

fn c7(hi: &EnsembleRun, lo: &EnsembleRun) -> Outcome {
    let w = WindowSpec { t: ENSEMBLE_T, n: hi.n, d: 3 };
    let (wlo, whi) = w.bounds();
    let bands = TheoremBands::default();
    let m_hi = summarize(hi, w, 0.5, bands).ratio_median;
    let m_lo = summarize(lo, WindowSpec { t: ENSEMBLE_T, n: lo.n, d: 3 }, 0.5, bands).ratio_median;
    let (blo, bhi) = EMPIRICAL.ratio_median_band;
    check(
        w.in_window() && (blo..=bhi).contains(&m_hi) && m_hi > m_lo,
        format!("window {wlo:.1} < {} < {whi:.1}; median ratio {m_hi:.4} at N = {}, {m_lo:.4} at N = {}", hi.n, hi.n, lo.n),
    )
}

const COV_PAIRS: [(u64, u64); 3] = [(11, 13), (17, 19), (11, 31)];
const COV_T: u64 = 100_000;

fn c8_values() -> Result<Vec<f64>, String> {
    COV_PAIRS
        .iter()
        .map(|&(a, b)| covariance_sigma(&cube(), a, b, COV_T).map_err(|e| e.to_string()))
        .collect()
}

fn c8(values: &[f64]) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (&(a, b), v) in COV_PAIRS.iter().zip(values) {
        let bound = EMPIRICAL.covariance_bound(a, b, COV_T);
        ok &= v.abs() <= bound;
        parts.push(format!("({a},{b}): {v:.3e} vs {bound:.5}"));
    }
    check(ok, parts.join("; "))
}

/// `x^4 − a` is reducible exactly when `a` is a square or `a = −4c^4`.
fn quartic_reducible_oracle(t: i64) -> u64 {
    (-t..=t)
        .filter(|&a| {
            let square = a >= 0 && {
                let r = (a as f64).sqrt().round() as i64;
                r * r == a
            };
            let four_c4 = a < 0 && (1..).take_while(|c: &i64| 4 * c.pow(4) <= -a).any(|c| 4 * c.pow(4) == -a);
            square || four_c4
        })
        .count() as u64
}

fn c9() -> Outcome {
    let quartic = p(&[0, 0, 0, 0, 1]);
    let mut parts = Vec::new();
    let mut ok = true;
    for t in [100u64, 1000, 10_000] {
        let c = reducible_count(&quartic, t).map_err(|e| e.to_string())?;
        let oracle = quartic_reducible_oracle(t as i64);
        let bound = EMPIRICAL.reducible_bound(t);
        ok &= c == oracle && (c as f64) <= bound;
        parts.push(format!("T = {t}: {c} (oracle {oracle}) <= {bound:.0}"));
    }
    ok &= reducible_count(&quartic, 100).map_err(|e| e.to_string())? == 13;
    check(ok, parts.join("; "))
}

fn c10() -> Outcome {
    let m = mean_rho(&p(&[-2, 0, 0, 1]), 100_000).map_err(|e| e.to_string())?;
    let (lo, hi) = EMPIRICAL.nagell_band;
    check((lo..=hi).contains(&m), format!("mean rho = {m:.5}, band [{lo}, {hi}]"))
}

struct Criterion {
    label: &'static str,
    limit: Duration,
    outcome: Outcome,
    elapsed: Duration,
}

fn run(label: &'static str, limit_secs: u64, f: impl FnOnce() -> Outcome) -> Criterion {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    Criterion { label, limit: Duration::from_secs(limit_secs), outcome, elapsed: start.elapsed() }
}

fn main() {
    // `cargo test -- --list` and filters should not trigger a full run
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }

    let mut results = vec![
        run("1  engine equivalence", 120, c1),
        run("2  decomposition identity", 300, c2),
        run("3  Weil bound", 60, c3),
        run("4  Hensel alpha approximation", 120, c4),
        run("5  Mertens and divisor log-sum", 60, c5),
    ];

    let start = Instant::now();
    let runs = catch_unwind(|| (cube_run(2000), cube_run(500)));
    let ensemble_time = start.elapsed();
    let (hi, lo) = match runs {
        Ok((Ok(hi), Ok(lo))) => (Some(hi), Some(lo)),
        Ok((Err(e), _)) | Ok((_, Err(e))) => {
            eprintln!("ensemble failed: {e}");
            (None, None)
        }
        Err(_) => (None, None),
    };
    let missing = || Err::<String, String>("ensemble run failed".into());
    let mut c6r = run("6  averaged bounds", 900, || hi.as_ref().map_or_else(missing, c6));
    c6r.elapsed += ensemble_time;
    results.push(c6r);
    results.push(run("7  log L ratio in the window", 900, || match (&hi, &lo) {
        (Some(h), Some(l)) => c7(h, l),
        _ => missing(),
    }));
    let cov = c8_values();
    results.push(run("8  sigma covariance", 120, || cov.clone().and_then(|v| c8(&v))));
    results.push(run("9  reducible shift count", 120, c9));
    results.push(run("10 Nagell mean value", 60, c10));

    // rerun 6-8 on a single thread and compare the serialized output
    results.push(run("11 determinism", 1800, || {
        let (hi, lo) = (hi.as_ref().ok_or("no ensemble")?, lo.as_ref().ok_or("no ensemble")?);
        let first = [c6_json(hi)?, c7_json(hi, lo)?, serde_json::to_string(cov.as_ref()?).unwrap()];
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(|e| e.to_string())?;
        let second = pool.install(|| -> Result<[String; 3], String> {
            let (h2, l2) = (cube_run(2000)?, cube_run(500)?);
            Ok([c6_json(&h2)?, c7_json(&h2, &l2)?, serde_json::to_string(&c8_values()?).unwrap()])
        })?;
        let same: Vec<bool> = first.iter().zip(&second).map(|(a, b)| a == b).collect();
        check(
            same.iter().all(|&s| s),
            format!("criteria 6/7/8 JSON identical across thread counts: {same:?} ({} bytes)", first.iter().map(String::len).sum::<usize>()),
        )
    }));

    let mut failed = 0;
    println!();
    for c in &results {
        let in_time = c.elapsed <= c.limit;
        let (status, detail) = match (&c.outcome, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over the {}s budget", c.limit.as_secs())),
            (Err(d), _) => ("FAIL", d.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{status} criterion {} [{:.1}s]: {detail}", c.label, c.elapsed.as_secs_f64());
    }
    println!("\n{} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
