//! Cross-module properties, each checked against a path that does not share
//! code with the one under test where that is practical.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polylcm::decomp::{decomposition_report, e_N_d_N, lcm_bigint, report_ledger};
use polylcm::ensemble::{
    covariance_sigma_with_mask, ensemble_average, ensemble_run, irreducible_mask, rho_by_residue, EMPIRICAL,
};
use polylcm::modroots::{count_roots_mod_pk, hensel_lift, roots_mod_p, sigma, sigma_via_expsum};
use polylcm::ntkernel::{mertens_sum, nu, sieve_primes};
use polylcm::polyring::{discriminant, is_irreducible_over_q};
use polylcm::valengine::{alpha_p, log_P, sieve_ledgers};
use polylcm::{IntPoly, LedgerKind, Sampling, Statistic};

fn p(c: &[i64]) -> IntPoly {
    IntPoly::from_i64(c)
}

/// The fixed test set of base polynomials.
fn test_set() -> Vec<IntPoly> {
    vec![p(&[0, 0, 0, 1]), p(&[0, 2, 0, 1]), p(&[0, -3, 0, 1]), p(&[0, 1, 0, 0, 1]), p(&[1, 1, 0, 0, 0, 1])]
}

fn small_primes(limit: u64) -> Vec<u64> {
    sieve_primes(limit).unwrap().primes().to_vec()
}

/// A random irreducible `f0 − a` with a monic base of degree 3..=5.
fn random_irreducible(rng: &mut ChaCha8Rng, a_max: i64) -> (IntPoly, BigInt) {
    loop {
        let d = rng.gen_range(3..=5usize);
        let mut c: Vec<i64> = (0..d).map(|_| rng.gen_range(-5..=5)).collect();
        c.push(1);
        let f0 = p(&c);
        let a = BigInt::from(rng.gen_range(-a_max..=a_max));
        if is_irreducible_over_q(f0.shift(a.clone()).as_poly()).unwrap() {
            return (f0, a);
        }
    }
}

fn eval_mod(f: &IntPoly, x: u64, m: u64) -> u64 {
    f.eval(&BigInt::from(x)).mod_floor(&BigInt::from(m)).to_u64().unwrap()
}

// ---------------------------------------------------------------- ntkernel

proptest! {
    #[test]
    fn nu_is_the_exact_exponent(m in (1i64..i64::MAX).prop_union(i64::MIN + 1..-1), idx in 0usize..25) {
        let primes = small_primes(100);
        let q = primes[idx];
        let mb = BigInt::from(m);
        let e = nu(q, &mb).unwrap();
        let pe = BigInt::from(q).pow(e);
        prop_assert!((&mb % &pe).is_zero());
        prop_assert!(!(&mb % (pe * q)).is_zero());
    }
}

#[test]
fn mertens_within_two_at_powers_of_ten() {
    for k in 1..=6 {
        let n = 10u64.pow(k);
        let gap = (mertens_sum(n).unwrap() - (n as f64).ln()).abs();
        assert!(gap <= EMPIRICAL.mertens_gap, "N = {n}: gap {gap}");
    }
}

// ---------------------------------------------------------------- polyring

#[test]
fn discriminant_closed_forms() {
    let cube = p(&[0, 0, 0, 1]);
    let cubic = p(&[0, -3, 0, 1]);
    for a in -100i64..=100 {
        let a2 = BigInt::from(a);
        assert_eq!(cube.shift(a2.clone()).discriminant().unwrap(), BigInt::from(-27 * a * a));
        assert_eq!(cubic.shift(a2).discriminant().unwrap(), BigInt::from(-27 * (a - 2) * (a + 2)));
    }
}

type Q = BigRational;

/// Degree of `gcd(f, f')` over Q, by the rational Euclidean algorithm.
fn gcd_with_derivative_degree(c: &[i64]) -> usize {
    let trim = |mut v: Vec<Q>| {
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        v
    };
    let mut a: Vec<Q> = trim(c.iter().map(|&x| Q::from_integer(x.into())).collect());
    let mut b: Vec<Q> =
        trim(c.iter().enumerate().skip(1).map(|(i, &x)| Q::from_integer((x * i as i64).into())).collect());
    while !b.is_empty() {
        while a.len() >= b.len() {
            let top = a.last().unwrap() / b.last().unwrap();
            let shift = a.len() - b.len();
            for (i, bc) in b.iter().enumerate() {
                a[shift + i] -= &top * bc;
            }
            a = trim(a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len() - 1
}

#[test]
fn zero_discriminant_iff_repeated_factor() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut zeros = 0;
    for i in 0..1000 {
        let d = rng.gen_range(3..=4usize);
        let c: Vec<i64> = if i % 5 == 0 {
            // (x − r)^2 g(x) so the zero case is well represented
            let r = rng.gen_range(-4..=4i64);
            let g: Vec<i64> = (0..d - 2).map(|_| rng.gen_range(-3..=3)).chain([1]).collect();
            let sq = [r * r, -2 * r, 1];
            let mut out = vec![0i64; d + 1];
            for (i, &s) in sq.iter().enumerate() {
                for (j, &t) in g.iter().enumerate() {
                    out[i + j] += s * t;
                }
            }
            out
        } else {
            let mut c: Vec<i64> = (0..=d).map(|_| rng.gen_range(-20..=20)).collect();
            if c[d] == 0 {
                c[d] = 1;
            }
            c
        };
        let f = p(&c);
        let disc_zero = discriminant(&f).unwrap().is_zero();
        assert_eq!(disc_zero, gcd_with_derivative_degree(&c) > 0, "{f}");
        zeros += disc_zero as u32;
    }
    assert!(zeros >= 150);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn divided_difference_times_gap(
        c in prop::collection::vec(-50i64..=50, 2..=6),
        m in 1u64..1_000_000,
        n in 1u64..1_000_000,
    ) {
        prop_assume!(m != n);
        let f = p(&c);
        let g = f.divided_difference(m, n).unwrap();
        let (mb, nb) = (BigInt::from(m), BigInt::from(n));
        prop_assert_eq!((&mb - &nb) * g, f.eval(&mb) - f.eval(&nb));
    }
}

// ---------------------------------------------------------------- modroots

#[test]
fn rho_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let primes = small_primes(101);
    for _ in 0..100 {
        let f0 = &test_set()[rng.gen_range(0..5)];
        let a = BigInt::from(rng.gen_range(-1000..=1000i64));
        let f = f0.shift(a).as_poly().clone();
        for &q in &primes {
            let brute = (0..q).filter(|&x| eval_mod(&f, x, q) == 0).count();
            assert_eq!(roots_mod_p(&f, q).unwrap().len(), brute, "{f} mod {q}");
        }
    }
}

#[test]
fn hensel_counts_are_stable_for_good_primes() {
    for f0 in test_set() {
        for a in [-7i64, -1, 2, 3, 10] {
            let f = f0.shift(BigInt::from(a));
            let g = f.as_poly();
            let disc = f.discriminant().unwrap();
            for q in small_primes(101) {
                if (&disc % BigInt::from(q)).is_zero() {
                    continue;
                }
                let rho = roots_mod_p(g, q).unwrap().len() as u64;
                for k in 1..=5 {
                    assert_eq!(count_roots_mod_pk(g, q, k).unwrap(), rho, "{g} mod {q}^{k}");
                }
                let lifted = hensel_lift(g, q, 5).unwrap();
                let m = BigInt::from(lifted.modulus);
                assert_eq!(lifted.roots.len() as u64, rho);
                for &r in &lifted.roots {
                    assert!((g.eval(&BigInt::from(r)) % &m).is_zero());
                }
            }
        }
    }
}

#[test]
fn sigma_bounds_and_exponential_sum_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let primes = small_primes(199);
    for _ in 0..1000 {
        let f0 = &test_set()[rng.gen_range(0..5)];
        let d = f0.degree().unwrap() as i64;
        let a = BigInt::from(rng.gen_range(-10_000..=10_000i64));
        let q = primes[rng.gen_range(0..primes.len())];
        let s = sigma(f0, &a, q).unwrap();
        assert!(-1 <= s.sigma && s.sigma <= d - 1);
        let via = sigma_via_expsum(f0, &a, q);
        assert!((via - s.sigma as f64).abs() < 1e-6, "{f0}, a = {a}, p = {q}: {via} vs {}", s.sigma);
    }
}

#[test]
fn sigma_is_periodic_in_a() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let primes = small_primes(199);
    for _ in 0..1000 {
        let f0 = &test_set()[rng.gen_range(0..5)];
        let q = primes[rng.gen_range(0..primes.len())];
        let a = rng.gen_range(-1_000_000..=1_000_000i64);
        let r = a.rem_euclid(q as i64);
        let s = sigma(f0, &BigInt::from(a), q).unwrap().sigma;
        assert_eq!(s, sigma(f0, &BigInt::from(r), q).unwrap().sigma);
        assert_eq!(s, rho_by_residue(f0, q)[r as usize] as i64 - 1);
    }
}

// ---------------------------------------------------------------- valengine

#[test]
fn ledgers_against_direct_valuations() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let table = sieve_primes(1000).unwrap();
    for case in 0..50 {
        let (f0, a) = random_irreducible(&mut rng, 100);
        let n = rng.gen_range(1..=1000u64);
        let f = f0.shift(a).as_poly().clone();
        let d = f.degree().unwrap() as u64;
        let values: Vec<u128> =
            (1..=n).map(|k| f.eval(&BigInt::from(k)).abs().to_u128().unwrap()).collect();
        let max_abs = *values.iter().max().unwrap();
        let ln_max = (max_abs as f64).ln();
        let set = sieve_ledgers(&f, n, n.max(2), &table).unwrap();

        for &q in table.primes() {
            let qq = q as u128;
            let (mut al, mut be) = (0u64, 0u64);
            for &v in &values {
                let mut v = v;
                let mut e = 0;
                while v % qq == 0 {
                    v /= qq;
                    e += 1;
                }
                al += e;
                be = be.max(e);
            }
            assert_eq!(set.alpha(qq), al, "case {case}: alpha_{q} of {f}, N = {n}");
            assert_eq!(set.beta(qq), be, "case {case}: beta_{q} of {f}, N = {n}");
            if case % 10 == 0 && q < 200 {
                assert_eq!(alpha_p(&f, n, q).unwrap(), al);
            }
        }

        let mut log_sum = 0.0;
        for (&q, &al) in &set.alpha {
            let be = set.beta(q);
            let lq = (q as f64).ln();
            log_sum += al as f64 * lq;
            assert!(be <= al);
            assert!(be as f64 * lq <= ln_max + 1e-9);
            if q > n as u128 && n <= 500 {
                let floor_log = (ln_max / lq + 1e-12).floor() as u64;
                assert!(al <= d * (floor_log + 1), "alpha_{q} = {al} for {f}, N = {n}");
            }
        }
        let lp = log_P(&f, n).unwrap();
        assert!((log_sum - lp).abs() <= 1e-6 * lp.max(1.0), "{log_sum} vs {lp}");
    }
}

// ---------------------------------------------------------------- decomp

#[test]
fn report_terms_are_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..40 {
        let (f0, a) = random_irreducible(&mut rng, 100);
        let n = rng.gen_range(2..=400u64);
        let r = decomposition_report(&f0, &a, n, false).unwrap();
        assert!(r.identity_holds(), "{f0} − {a}, N = {n}: {}", r.identity_rel_error);
        assert!(r.bad >= 0.0 && r.delta >= 0.0 && r.b1 >= 0.0 && r.b2 >= 0.0);
        assert!((r.b1 + r.b2 - r.bad).abs() <= 1e-9 * r.bad.max(1.0));
        let split = mertens_sum(n).unwrap() - r.e_n + r.d_n;
        assert!((r.c_n - split).abs() <= EMPIRICAL.cn_split_gap, "C_N split gap at {f0}, N = {n}");
        let (e, dd) = e_N_d_N(&f0, &a, n).unwrap();
        assert_eq!((e, dd), (r.e_n, r.d_n));
        let abs_disc = r.discriminant.abs();
        if abs_disc >= BigInt::from(3) {
            assert!(r.e_n <= EMPIRICAL.e_n_bound(abs_disc.to_f64().unwrap()));
        }
    }
}

#[test]
fn lcm_divides_the_next_lcm() {
    let f0 = p(&[0, 2, 0, 1]);
    for a in [-5i64, 1, 7] {
        let a = BigInt::from(a);
        let mut prev = report_ledger(&f0, &a, 1, LedgerKind::Beta).unwrap();
        let mut prev_l = lcm_bigint(f0.shift(a.clone()).as_poly(), 1).unwrap();
        for n in 2..=120 {
            let cur = report_ledger(&f0, &a, n, LedgerKind::Beta).unwrap();
            for (&q, &e) in &prev.entries {
                assert!(cur.get(q) >= e);
            }
            let cur_l = lcm_bigint(f0.shift(a.clone()).as_poly(), n).unwrap();
            assert!((&cur_l % &prev_l).is_zero());
            assert_eq!(cur.product(), cur_l);
            prev = cur;
            prev_l = cur_l;
        }
    }
}

// ---------------------------------------------------------------- ensemble

#[test]
fn exhaustive_average_normalizes_by_irreducible_count() {
    let f0 = p(&[0, 0, 0, 1]);
    let (t, n) = (40u64, 30u64);
    let stats = ensemble_average(&f0, t, n, Statistic::Delta, Sampling::Exhaustive, 0).unwrap();
    let mask = irreducible_mask(&f0, t).unwrap();
    let mut total = 0.0;
    let mut count = 0u64;
    for (pos, &irr) in mask.iter().enumerate() {
        if irr {
            let a = BigInt::from(pos as i64 - t as i64);
            total += decomposition_report(&f0, &a, n, false).unwrap().delta;
            count += 1;
        }
    }
    assert_eq!(stats.count_irreducible, count);
    assert_eq!(stats.count_irreducible + stats.count_reducible, 2 * t + 1);
    assert!((stats.mean - total / count as f64).abs() <= 1e-12 * stats.mean.abs().max(1.0));
}

#[test]
fn markov_fraction_is_consistent() {
    let run = ensemble_run(&p(&[0, 2, 0, 1]), 300, 60, Sampling::Exhaustive, 0).unwrap();
    for st in [Statistic::Bad, Statistic::Delta, Statistic::CnDeviationSq, Statistic::EN] {
        let values = run.values(st);
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        for lambda in [2.0, 5.0, 10.0] {
            let frac = polylcm::ensemble::fraction_above(&values, lambda * mean);
            assert!(frac <= (1.0 / lambda) * (1.0 + 1e-9), "{st:?} at {lambda}: {frac}");
        }
    }
}

#[test]
fn e_n_bound_over_an_ensemble() {
    let run = ensemble_run(&p(&[0, -3, 0, 1]), 200, 100, Sampling::Exhaustive, 0).unwrap();
    for r in &run.reports {
        let abs_disc = r.discriminant.abs().to_f64().unwrap();
        if abs_disc >= 3.0 {
            assert!(r.e_n <= EMPIRICAL.e_n_bound(abs_disc), "a = {}: E_N = {}", r.a, r.e_n);
        }
    }
}

#[test]
fn unfiltered_covariance_differs_only_by_the_mask() {
    let f0 = p(&[0, 0, 0, 1]);
    let t = 500;
    let all = covariance_sigma_with_mask(&f0, 7, 13, t, None).unwrap();
    let mask = irreducible_mask(&f0, t).unwrap();
    let filtered = covariance_sigma_with_mask(&f0, 7, 13, t, Some(&mask)).unwrap();
    let brute = |use_mask: bool| {
        let (mut total, mut count) = (0i64, 0i64);
        for a in -(t as i64)..=t as i64 {
            if use_mask && !mask[(a + t as i64) as usize] {
                continue;
            }
            let s7 = sigma(&f0, &BigInt::from(a), 7).unwrap().sigma;
            let s13 = sigma(&f0, &BigInt::from(a), 13).unwrap().sigma;
            total += s7 * s13;
            count += 1;
        }
        total as f64 / count as f64
    };
    assert_eq!(all, brute(false));
    assert_eq!(filtered, brute(true));
}

#[test]
fn seeded_runs_serialize_identically() {
    let f0 = p(&[0, 0, 0, 1]);
    let json = || {
        let stats = ensemble_average(&f0, 50_000, 200, Statistic::LogLRatio, Sampling::Random { n_samples: 30 }, 4)
            .unwrap();
        serde_json::to_string(&stats).unwrap()
    };
    assert_eq!(json(), json());
}
