mod config;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use polylcm::decomp::{decomposition_report_with, report_ledger, ReportOptions};
use polylcm::ensemble::{ensemble_run, theorem_check, TheoremBands, WindowSpec};
use polylcm::modroots::{hensel_lift, roots_mod_pk, weil_bound, weil_sum};
use polylcm::ntkernel::{is_prime_u64, sieve_primes};
use polylcm::{Error, LedgerKind, Sampling, Statistic};

use config::{parse_bigint, Coeffs, Format, RunConfig};

const EXIT_USAGE: u8 = 2;
const EXIT_IDENTITY: u8 = 3;
const EXIT_IRREDUCIBILITY: u8 = 4;
const EXIT_EMPTY_ENSEMBLE: u8 = 5;
const EXIT_BOUND_VIOLATION: u8 = 6;

/// Exact LCM of shifted polynomial values, its logarithmic decomposition,
/// and averages over shifts.
///
/// Every option marked [env] can also be set through the named POLYLCM_*
/// variable; an explicit flag wins.
#[derive(Parser, Debug)]
#[command(name = "polylcm", version, about, long_about = None)]
struct Cli {
    /// Output format (json for everything; csv where a table makes sense).
    #[arg(long, global = true, value_enum, env = "POLYLCM_FORMAT")]
    format: Option<Format>,

    /// Write the result here instead of stdout.
    #[arg(long, global = true, env = "POLYLCM_OUT")]
    out: Option<PathBuf>,

    /// Worker threads; defaults to the available parallelism. Results do not
    /// depend on it.
    #[arg(long, global = true, env = "POLYLCM_THREADS")]
    threads: Option<usize>,

    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 1, env = "POLYLCM_SEED")]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Shift {
    /// Ascending coefficients of f0, e.g. --f0=-2,0,0,1 for x^3 - 2.
    #[arg(long, allow_hyphen_values = true)]
    f0: Coeffs,
    /// The shift a in f0(x) - a.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_bigint)]
    a: BigInt,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count the primes up to a limit.
    Primes {
        #[arg(long)]
        limit: u64,
        /// Also list the primes.
        #[arg(long)]
        list: bool,
    },
    /// Full decomposition of log L_a(N) for one shift.
    Decompose {
        #[command(flatten)]
        shift: Shift,
        #[arg(long = "N", alias = "n")]
        n: u64,
        /// Accept a reducible f0 - a.
        #[arg(long)]
        allow_reducible: bool,
        /// Skip the independent bigint LCM (it runs by default up to N = 2000).
        #[arg(long)]
        no_cross_check: bool,
        /// Include wall-clock timings (makes the output vary between runs).
        #[arg(long)]
        timings: bool,
    },
    /// Average one statistic over the irreducible shifts |a| <= T.
    Ensemble {
        #[arg(long, allow_hyphen_values = true)]
        f0: Coeffs,
        #[arg(long = "T", alias = "t")]
        t: u64,
        #[arg(long = "N", alias = "n")]
        n: u64,
        /// One of bad, b1, b2, delta, cn, cn_dev_sq, en, dn, loglratio.
        #[arg(long)]
        stat: String,
        /// Random sampling with this many accepted shifts.
        #[arg(long, conflicts_with = "exhaustive", env = "POLYLCM_SAMPLES")]
        samples: Option<u64>,
        /// Use every shift in [-T, T].
        #[arg(long)]
        exhaustive: bool,
        /// Also write one CSV row per accepted shift.
        #[arg(long)]
        shifts_csv: Option<PathBuf>,
    },
    /// Almost-all check of log L ~ (d - 1) N ln N on sampled shifts.
    Theorem {
        #[arg(long, allow_hyphen_values = true)]
        f0: Coeffs,
        #[arg(long = "T", alias = "t")]
        t: u64,
        #[arg(long = "N", alias = "n")]
        n: u64,
        #[arg(long, default_value_t = 200, env = "POLYLCM_SAMPLES")]
        samples: u64,
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        /// Fail instead of warning when (T, N) lies outside the window.
        #[arg(long)]
        strict_window: bool,
    },
    /// Complete exponential sums S(b, p) against (d - 1) sqrt(p).
    Weil {
        #[arg(long, allow_hyphen_values = true)]
        f0: Coeffs,
        #[arg(long)]
        p: u64,
        #[arg(long, conflicts_with = "all_b")]
        b: Option<u64>,
        /// Every b in [0, p).
        #[arg(long)]
        all_b: bool,
        /// Warn when the bound does not apply (p <= d).
        #[arg(long)]
        strict: bool,
    },
    /// Roots of f0 - a modulo p^k.
    Roots {
        #[command(flatten)]
        shift: Shift,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Lift the roots mod p by Hensel (requires p not dividing the
        /// discriminant) instead of the general lifting search.
        #[arg(long)]
        hensel: bool,
    },
    /// Exact valuation ledger of P_a(N) (alpha) or L_a(N) (beta).
    Ledger {
        #[command(flatten)]
        shift: Shift,
        #[arg(long = "N", alias = "n")]
        n: u64,
        #[arg(long, value_enum, default_value_t = KindArg::Beta)]
        kind: KindArg,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Alpha,
    Beta,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::IrreducibilityRequired { .. } | Error::DiscriminantZero { .. } => EXIT_IRREDUCIBILITY,
            Error::EmptyEnsemble => EXIT_EMPTY_ENSEMBLE,
            Error::Internal(_) => EXIT_BOUND_VIOLATION,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

/// What a subcommand produced: the text to emit and the exit code.
struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn csv_line<I: IntoIterator<Item = String>>(fields: I) -> String {
    let mut s = fields.into_iter().collect::<Vec<_>>().join(",");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct PrimesReport {
    limit: u64,
    count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    primes: Option<Vec<u64>>,
}

#[derive(Serialize)]
struct WeilRow {
    b: u64,
    abs: f64,
    bound: f64,
    margin: f64,
    /// The bound is claimed only for p > d and b not divisible by p.
    applicable: bool,
}

#[derive(Serialize)]
struct WeilReport {
    f0: polylcm::IntPoly,
    p: u64,
    d: usize,
    bound: f64,
    violations: u64,
    rows: Vec<WeilRow>,
}

#[derive(Serialize)]
struct RootsReport {
    f0: polylcm::IntPoly,
    #[serde(serialize_with = "ser_display")]
    a: BigInt,
    p: u64,
    k: u32,
    modulus: u128,
    count: usize,
    roots: Vec<u128>,
}

fn ser_display<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn run(cli: &Cli, cfg: &mut RunConfig) -> Result<Output, Failure> {
    let format = cfg.format;
    match &cli.command {
        Command::Primes { limit, list } => {
            if *limit < 2 {
                return Err(usage(format!("--limit must be at least 2, got {limit}")));
            }
            let table = sieve_primes(*limit)?;
            let text = match cli.format {
                None => {
                    let mut s = format!("{}\n", table.len());
                    if *list {
                        for q in table.primes() {
                            s.push_str(&format!("{q}\n"));
                        }
                    }
                    s
                }
                Some(Format::Json) => json(&PrimesReport {
                    limit: *limit,
                    count: table.len(),
                    primes: list.then(|| table.primes().to_vec()),
                }),
                Some(Format::Csv) => {
                    let mut s = String::from("p\n");
                    for q in table.primes() {
                        s.push_str(&format!("{q}\n"));
                    }
                    s
                }
            };
            Ok(Output::ok(text))
        }

        Command::Decompose { shift, n, allow_reducible, no_cross_check, timings } => {
            cfg.f0 = Some(shift.f0.clone());
            cfg.a = Some(shift.a.clone());
            cfg.n = Some(*n);
            cfg.allow_reducible = *allow_reducible;
            if *n == 0 {
                return Err(usage("--N must be at least 1"));
            }
            let opts = ReportOptions {
                allow_reducible: *allow_reducible,
                cross_check: !no_cross_check,
                timings: *timings,
            };
            let table = sieve_primes((*n).max(2))?;
            let report = decomposition_report_with(&shift.f0.0, &shift.a, *n, &opts, &table)?;
            let text = match format {
                Format::Json => json(&report),
                Format::Csv => format!("{}\n{}\n", polylcm::DecompositionReport::CSV_HEADER, report.to_csv_row()),
            };
            let code = if report.identity_holds() {
                0
            } else {
                log::error!("identity violated: relative error {}", report.identity_rel_error);
                EXIT_IDENTITY
            };
            Ok(Output { text, code })
        }

        Command::Ensemble { f0, t, n, stat, samples, exhaustive, shifts_csv } => {
            cfg.f0 = Some(f0.clone());
            cfg.t = Some(*t);
            cfg.n = Some(*n);
            cfg.n_samples = *samples;
            let statistic: Statistic = stat.parse()?;
            let sampling = match (samples, exhaustive) {
                (Some(k), _) => Sampling::Random { n_samples: *k },
                (None, true) => Sampling::Exhaustive,
                (None, false) => Sampling::default_for(*t),
            };
            let run = ensemble_run(&f0.0, *t, *n, sampling, cfg.seed)?;
            let stats = run.stats(statistic)?;
            if let Some(path) = shifts_csv {
                fs::write(path, run.to_csv())?;
            }
            let text = match format {
                Format::Json => json(&stats),
                Format::Csv => {
                    let mut header = vec![
                        "T".to_string(),
                        "N".into(),
                        "statistic".into(),
                        "count_total".into(),
                        "count_irreducible".into(),
                        "count_reducible".into(),
                        "mean".into(),
                        "variance".into(),
                    ];
                    header.extend(stats.quantiles.iter().map(|(q, _)| format!("q{q}")));
                    let mut row = vec![
                        stats.t.to_string(),
                        stats.n.to_string(),
                        statistic.name().to_string(),
                        stats.count_total.to_string(),
                        stats.count_irreducible.to_string(),
                        stats.count_reducible.to_string(),
                        stats.mean.to_string(),
                        stats.variance.to_string(),
                    ];
                    row.extend(stats.quantiles.iter().map(|(_, v)| v.to_string()));
                    csv_line(header) + &csv_line(row)
                }
            };
            Ok(Output::ok(text))
        }

        Command::Theorem { f0, t, n, samples, epsilon, strict_window } => {
            cfg.f0 = Some(f0.clone());
            cfg.t = Some(*t);
            cfg.n = Some(*n);
            cfg.n_samples = Some(*samples);
            cfg.epsilon = Some(*epsilon);
            let d = f0.0.degree().unwrap_or(0);
            let window = WindowSpec { t: *t, n: *n, d };
            if !window.in_window() && !strict_window {
                let (lo, hi) = window.bounds();
                log::warn!("N = {n} is outside the window {lo:.1} < N < {hi:.1}; results are outside the theorem's range");
            }
            let report = theorem_check(&f0.0, *t, *n, *samples, cfg.seed, *epsilon, TheoremBands::default(), !strict_window)?;
            let text = match format {
                Format::Json => json(&report),
                Format::Csv => {
                    csv_line(
                        [
                            "T", "N", "in_window", "n_samples", "ratio_median", "ratio_mean",
                            "ratio_pass_fraction", "cn_pass_fraction", "bad_pass_fraction",
                            "delta_pass_fraction",
                        ]
                        .map(String::from),
                    ) + &csv_line([
                        t.to_string(),
                        n.to_string(),
                        report.in_window.to_string(),
                        report.n_samples.to_string(),
                        report.ratio_median.to_string(),
                        report.ratio_mean.to_string(),
                        report.ratio_pass_fraction.to_string(),
                        report.cn_pass_fraction.to_string(),
                        report.bad_pass_fraction.to_string(),
                        report.delta_pass_fraction.to_string(),
                    ])
                }
            };
            Ok(Output::ok(text))
        }

        Command::Weil { f0, p, b, all_b, strict } => {
            cfg.f0 = Some(f0.clone());
            if !is_prime_u64(*p) {
                return Err(usage(format!("{p} is not prime")));
            }
            let d = f0.0.degree().unwrap_or(0);
            let bound = weil_bound(d, *p);
            if *p as usize <= d && *strict {
                log::warn!("p = {p} <= d = {d}: the bound (d - 1) sqrt(p) is not claimed here");
            }
            let bs: Vec<u64> = match (b, all_b) {
                (Some(b), _) => vec![*b],
                (None, true) => (0..*p).collect(),
                (None, false) => return Err(usage("pass --b B or --all-b")),
            };
            let rows: Vec<WeilRow> = bs
                .into_iter()
                .map(|b| {
                    let abs = weil_sum::<BigInt, f64>(&f0.0, b, *p).norm();
                    WeilRow { b, abs, bound, margin: bound - abs, applicable: *p as usize > d && b % p != 0 }
                })
                .collect();
            let violations = rows.iter().filter(|r| r.applicable && r.abs > r.bound).count() as u64;
            let text = match format {
                Format::Json => json(&WeilReport { f0: f0.0.clone(), p: *p, d, bound, violations, rows }),
                Format::Csv => {
                    let mut s = String::from("b,abs,bound,margin,applicable\n");
                    for r in &rows {
                        s.push_str(&format!("{},{},{},{},{}\n", r.b, r.abs, r.bound, r.margin, r.applicable));
                    }
                    s
                }
            };
            let code = if violations > 0 {
                log::error!("{violations} value(s) of b violate the bound");
                EXIT_BOUND_VIOLATION
            } else {
                0
            };
            Ok(Output { text, code })
        }

        Command::Roots { shift, p, k, hensel } => {
            cfg.f0 = Some(shift.f0.clone());
            cfg.a = Some(shift.a.clone());
            let f = shift.f0.0.shift(shift.a.clone());
            let roots = if *hensel { hensel_lift(f.as_poly(), *p, *k)? } else { roots_mod_pk(f.as_poly(), *p, *k)? };
            let text = match format {
                Format::Json => json(&RootsReport {
                    f0: shift.f0.0.clone(),
                    a: shift.a.clone(),
                    p: roots.p,
                    k: roots.k,
                    modulus: roots.modulus,
                    count: roots.len(),
                    roots: roots.roots.clone(),
                }),
                Format::Csv => {
                    let mut s = String::from("root\n");
                    for r in &roots.roots {
                        s.push_str(&format!("{r}\n"));
                    }
                    s
                }
            };
            Ok(Output::ok(text))
        }

        Command::Ledger { shift, n, kind } => {
            cfg.f0 = Some(shift.f0.clone());
            cfg.a = Some(shift.a.clone());
            cfg.n = Some(*n);
            let kind = match kind {
                KindArg::Alpha => LedgerKind::Alpha,
                KindArg::Beta => LedgerKind::Beta,
            };
            let ledger = report_ledger(&shift.f0.0, &shift.a, *n, kind)?;
            let text = match format {
                Format::Json => json(&ledger),
                Format::Csv => {
                    let mut s = String::from("p,e\n");
                    for (q, e) in &ledger.entries {
                        s.push_str(&format!("{q},{e}\n"));
                    }
                    s
                }
            };
            Ok(Output::ok(text))
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();

    if let Some(k) = cli.threads {
        if k == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }

    let mut cfg = RunConfig::new(cli.format.unwrap_or(Format::Json), cli.seed, cli.threads, cli.out.clone());
    let result = run(&cli, &mut cfg);
    log::debug!("run configuration: {cfg}");
    match result {
        Ok(out) => {
            if let Err(e) = emit(&out.text, cfg.out_path.as_ref()) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
