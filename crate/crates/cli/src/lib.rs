//! Command-line surface over `primegap`. Every subcommand parses its flags,
//! calls one library operation and renders the result.
//!
//! Exit codes: 0 established, 1 established false or rejected, 2 undecided,
//! 3 usage or input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use primegap::certify::{certify_run, evaluate_general, verify_certificate, Certificate, CertifyOptions, PrimorialBound, Verdict, VerifyOutcome};
use primegap::gsweep::{sweep, SweepMode, SweepOptions, SweepReport, DEFAULT_EVENT_BUDGET};
use primegap::numtheory::{check_legendre, check_pi_bound, check_primorial_bound, check_stirling, interval_prime_count, PrimeSet};
use primegap::ratioconfig::{compile_prime_set, preset, ConfigLiteral, RatioConfig, PRESET_NAMES};
use primegap::reference::{compare, published_case};
use primegap::search::{default_base, search, SearchBudget};
use primegap::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub report_path: Option<PathBuf>,
}

impl RunOutcome {
    fn code(exit_code: i32) -> Self {
        RunOutcome {
            exit_code,
            report_path: None,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "primegap", version, about = "Certifier for factorial-ratio prime interval bounds")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_parser = parse_count)]
    threads: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Csv,
}

#[derive(Args, Debug)]
struct Output {
    /// Write the JSON document here (atomically) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify the condition for a compiled prime set.
    Certify {
        #[arg(long, value_parser = parse_count)]
        k: u64,
        #[arg(long, value_parser = parse_primes)]
        primes: PrimeSet,
        /// First scan limit D for bounded sweeps.
        #[arg(long, value_parser = parse_count)]
        scan_limit: Option<u64>,
        /// Largest D reached by doubling.
        #[arg(long, value_parser = parse_count)]
        max_scan_limit: Option<u64>,
        /// Largest event count swept exhaustively.
        #[arg(long, value_parser = parse_count)]
        event_budget: Option<u64>,
        /// Primorial base: 4 for (1/8, 4), 3.4 for (1, 17/5).
        #[arg(long, default_value = "4")]
        theta_bound: String,
        #[command(flatten)]
        output: Output,
    },
    /// Re-check a certificate file.
    Verify {
        path: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// List the first-crossing thresholds of a configuration.
    Sweep {
        #[arg(long, value_parser = parse_count, requires = "primes")]
        k: Option<u64>,
        #[arg(long, value_parser = parse_primes, requires = "k")]
        primes: Option<PrimeSet>,
        #[arg(long, conflicts_with_all = ["k", "config"])]
        preset: Option<String>,
        /// JSON literal: {"k":3,"primes":[2,3]} or {"k":2,"a":[6,1],"b":[4,3]}.
        #[arg(long, conflicts_with = "k")]
        config: Option<String>,
        /// Bounded sweep to this D instead of one full period.
        #[arg(long, value_parser = parse_count)]
        scan_limit: Option<u64>,
        #[arg(long, value_parser = parse_count)]
        event_budget: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Run the lemma checkers.
    Lemmas {
        #[arg(long, value_parser = parse_count, default_value = "10000")]
        pi_max: u64,
        #[arg(long, value_parser = parse_count, default_value = "10000")]
        primorial_max: u64,
        #[arg(long, value_parser = parse_count, default_value = "1000")]
        stirling_max: u64,
        #[arg(long, value_parser = parse_count, default_value = "500")]
        legendre_max: u64,
        #[arg(long, value_parser = parse_count, default_value = "50")]
        legendre_p_max: u64,
        /// Check only this primorial base; both are checked by default.
        #[arg(long)]
        theta_bound: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Count primes in (k a n, (k+1) a n].
    Count {
        #[arg(long, value_parser = parse_count)]
        k: u64,
        #[arg(long, value_parser = parse_count)]
        n: u64,
        #[arg(long, value_parser = parse_count, default_value = "1")]
        a: u64,
    },
    /// Augment a prime set until the condition holds.
    Search {
        #[arg(long, value_parser = parse_count)]
        k: u64,
        /// Starting set (default: primes up to k).
        #[arg(long, value_parser = parse_primes)]
        base: Option<PrimeSet>,
        #[arg(long, value_parser = parse_count)]
        max_depth: Option<u64>,
        #[arg(long, value_parser = parse_count)]
        max_primes: Option<u64>,
        #[arg(long, value_parser = parse_count)]
        max_scan_limit: Option<u64>,
        #[arg(long, default_value = "4")]
        theta_bound: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Published single-level configurations and their condition.
    Presets {
        #[arg(long)]
        name: Option<String>,
        #[arg(long, default_value = "4")]
        theta_bound: String,
        #[command(flatten)]
        output: Output,
    },
}

/// Integer with optional `_` separators.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let cleaned: String = s.chars().filter(|&c| c != '_').collect();
    if cleaned.is_empty() || !cleaned.chars().all(|c| c.is_ascii_digit()) {
        return Err(format!("{s:?} is not a nonnegative integer"));
    }
    cleaned.parse().map_err(|e| format!("{s:?}: {e}"))
}

fn parse_primes(s: &str) -> Result<PrimeSet, String> {
    let values = s.split(',').map(|p| parse_count(p.trim())).collect::<Result<Vec<_>, _>>()?;
    PrimeSet::new(values).map_err(|e| e.to_string())
}

struct Io<'a> {
    out: &'a mut (dyn Write + Send),
    err: &'a mut (dyn Write + Send),
}

/// Failure inside a subcommand, carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Budget(_) | Error::NoThreshold(_) | Error::DeadEnd(_) => EXIT_UNDECIDED,
            Error::Integrity(_) => EXIT_FALSE,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

/// Parses `argv` (including the program name) and runs it against the
/// process stdout and stderr.
pub fn run<I, T>(argv: I) -> RunOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout(), &mut std::io::stderr())
}

pub fn run_with<I, T>(argv: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> RunOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let (sink, code): (&mut (dyn Write + Send), i32) = if e.use_stderr() { (err, EXIT_USAGE) } else { (out, EXIT_OK) };
            let _ = write!(sink, "{}", e.render());
            return RunOutcome::code(code);
        }
    };
    let mut io = Io { out, err };
    let result = match cli.threads {
        Some(0) => Err(usage("--threads must be positive")),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n as usize).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command, &mut io)),
            Err(e) => Err(usage(e.to_string())),
        },
        None => dispatch(cli.command, &mut io),
    };
    match result {
        Ok(outcome) => outcome,
        Err(f) => {
            let _ = writeln!(io.err, "error: {}", f.message);
            RunOutcome::code(f.code)
        }
    }
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Holds => EXIT_OK,
        Verdict::ConditionFalse => EXIT_FALSE,
        Verdict::Undecided => EXIT_UNDECIDED,
    }
}

fn bound_from(text: &str) -> Result<PrimorialBound, Failure> {
    PrimorialBound::from_base(text).map_err(Failure::from)
}

/// Writes `text` atomically: temp file in the target directory, then rename.
pub fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Sends a document to `--out` or stdout.
fn emit(io: &mut Io, out: &Option<PathBuf>, text: &str, code: i32) -> Result<RunOutcome, Failure> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(path) => {
            write_atomic(path, &text)?;
            Ok(RunOutcome {
                exit_code: code,
                report_path: Some(path.clone()),
            })
        }
        None => {
            io.out.write_all(text.as_bytes())?;
            Ok(RunOutcome::code(code))
        }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable output")
}

fn table(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
}

fn no_csv(format: Format, what: &str) -> Result<(), Failure> {
    if format == Format::Csv {
        return Err(usage(format!("--format csv applies to sweep only, not {what}")));
    }
    Ok(())
}

fn dispatch(command: Command, io: &mut Io) -> Result<RunOutcome, Failure> {
    match command {
        Command::Certify {
            k,
            primes,
            scan_limit,
            max_scan_limit,
            event_budget,
            theta_bound,
            output,
        } => {
            no_csv(output.format, "certify")?;
            let defaults = CertifyOptions::default();
            let initial_d = scan_limit.unwrap_or(defaults.initial_d);
            let opts = CertifyOptions {
                bound: bound_from(&theta_bound)?,
                initial_d,
                max_d: max_scan_limit.unwrap_or(defaults.max_d.max(initial_d)),
                sweep: SweepOptions {
                    event_budget: event_budget.unwrap_or(DEFAULT_EVENT_BUDGET),
                    ..SweepOptions::default()
                },
            };
            let run = certify_run(k, &primes, &opts)?;
            let cert = run.certificate;
            if let Some(case) = published_case(k, primes.primes()) {
                for d in compare(&case, &cert)? {
                    let line = serde_json::json!({ "warning": "published-value-mismatch", "detail": d });
                    writeln!(io.err, "{line}")?;
                }
            }
            let text = match output.format {
                Format::Table => certificate_table(&cert),
                _ => cert.to_json(),
            };
            emit(io, &output.out, &text, verdict_code(cert.verdict))
        }
        Command::Verify { path, output } => {
            no_csv(output.format, "verify")?;
            let text = std::fs::read_to_string(&path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let cert = Certificate::from_json(&text)?;
            let outcome = verify_certificate(&cert);
            let code = if outcome.is_accept() { EXIT_OK } else { EXIT_FALSE };
            let text = match (output.format, &outcome) {
                (Format::Table, VerifyOutcome::Accept) => "accept\n".to_string(),
                (Format::Table, VerifyOutcome::Reject(r)) => format!("reject  {r}\n"),
                _ => json(&outcome),
            };
            emit(io, &output.out, &text, code)
        }
        Command::Sweep {
            k,
            primes,
            preset: name,
            config,
            scan_limit,
            event_budget,
            output,
        } => {
            let cfg: RatioConfig = match (k, primes, name, config) {
                (Some(k), Some(p), None, None) => compile_prime_set(k, &p)?,
                (None, None, Some(n), None) => preset(&n)?,
                (None, None, None, Some(c)) => ConfigLiteral::parse(&c)?.to_config()?,
                _ => return Err(usage("sweep needs exactly one of --k/--primes, --preset, --config")),
            };
            let mode = scan_limit.map_or(SweepMode::Exhaustive, SweepMode::Bounded);
            let opts = SweepOptions {
                event_budget: event_budget.unwrap_or(DEFAULT_EVENT_BUDGET),
                ..SweepOptions::default()
            };
            let report = primegap::gsweep::sweep_with(&cfg, mode, &opts)?;
            let text = match output.format {
                Format::Json => json(&report),
                Format::Csv => sweep_csv(&report),
                Format::Table => sweep_table(&report),
            };
            emit(io, &output.out, &text, EXIT_OK)
        }
        Command::Lemmas {
            pi_max,
            primorial_max,
            stirling_max,
            legendre_max,
            legendre_p_max,
            theta_bound,
            output,
        } => {
            no_csv(output.format, "lemmas")?;
            let bounds = match theta_bound {
                Some(t) => vec![bound_from(&t)?],
                None => vec![PrimorialBound::elementary(), PrimorialBound::sharper()],
            };
            let pi = check_pi_bound(pi_max)?;
            let primorial = bounds
                .iter()
                .map(|b| check_primorial_bound(primorial_max, &b.c, &b.beta))
                .collect::<primegap::Result<Vec<_>>>()?;
            let stirling = check_stirling(stirling_max)?;
            let legendre = check_legendre(legendre_max, legendre_p_max)?;
            let passed = pi.passed && primorial.iter().all(|r| r.passed) && stirling.passed && legendre.passed;
            let text = match output.format {
                Format::Table => {
                    let mut rows = vec![("pi(x) <= x/3", pass_text(pi.passed))];
                    for r in &primorial {
                        rows.push(("primorial bound", format!("{} (C = {}, beta = {})", pass_text(r.passed), r.constant, r.base)));
                    }
                    rows.push(("stirling", pass_text(stirling.passed)));
                    rows.push(("legendre", pass_text(legendre.passed)));
                    table(&rows)
                }
                _ => json(&serde_json::json!({
                    "pi_bound": pi,
                    "primorial_bound": primorial,
                    "stirling": stirling,
                    "legendre": legendre,
                    "passed": passed,
                })),
            };
            emit(io, &output.out, &text, if passed { EXIT_OK } else { EXIT_FALSE })
        }
        Command::Count { k, n, a } => {
            let count = interval_prime_count(k, a, n)?;
            emit(io, &None, &count.to_string(), EXIT_OK)
        }
        Command::Search {
            k,
            base,
            max_depth,
            max_primes,
            max_scan_limit,
            theta_bound,
            out,
        } => {
            let mut budget = SearchBudget::default();
            budget.certify.bound = bound_from(&theta_bound)?;
            if let Some(d) = max_depth {
                budget.max_depth = d as usize;
            }
            if let Some(m) = max_primes {
                budget.max_primes = m as usize;
            }
            if let Some(d) = max_scan_limit {
                budget.certify.max_d = d.max(budget.certify.initial_d);
            }
            let base = match base {
                Some(b) => b,
                None => default_base(k)?,
            };
            let trace = search(k, &base, &budget)?;
            let code = if trace.succeeded() { EXIT_OK } else { EXIT_FALSE };
            emit(io, &out, &trace.to_json_lines(), code)
        }
        Command::Presets {
            name,
            theta_bound,
            output,
        } => {
            no_csv(output.format, "presets")?;
            let bound = bound_from(&theta_bound)?;
            let names: Vec<String> = match name {
                Some(n) => vec![n],
                None => PRESET_NAMES.iter().map(|s| s.to_string()).collect(),
            };
            let mut entries = Vec::new();
            for n in &names {
                let cfg = preset(n)?;
                let report = sweep(&cfg, SweepMode::Exhaustive)?;
                let condition = evaluate_general(&cfg, &report, &bound)?;
                entries.push(PresetEntry {
                    name: n.clone(),
                    k: cfg.k(),
                    a: cfg.a_list().to_vec(),
                    b: cfg.b_list().to_vec(),
                    m: report.m_found,
                    c: report.c_found.to_string(),
                    lhs: condition.lhs.clone(),
                    rhs: condition.rhs.clone(),
                    verdict: condition.verdict,
                });
            }
            let text = match output.format {
                Format::Table => entries
                    .iter()
                    .map(|e| format!("{:<10} k={:<2} M={} c={:<6} {}\n", e.name, e.k, e.m, e.c, e.verdict))
                    .collect(),
                _ => json(&entries),
            };
            emit(io, &output.out, &text, EXIT_OK)
        }
    }
}

#[derive(Serialize)]
struct PresetEntry {
    name: String,
    k: u64,
    a: Vec<u128>,
    b: Vec<u128>,
    #[serde(rename = "M")]
    m: usize,
    c: String,
    lhs: primegap::exactmath::DecimalInterval,
    rhs: primegap::exactmath::DecimalInterval,
    verdict: Verdict,
}

fn pass_text(ok: bool) -> String {
    if ok { "pass" } else { "FAIL" }.to_string()
}

fn certificate_table(c: &Certificate) -> String {
    table(&[
        ("k", c.k.to_string()),
        ("primes", format!("{:?}", c.primes)),
        ("Q", c.q.clone()),
        ("phi(Q)", c.phi_q.clone()),
        ("bound", format!("C = {}, beta = {}", c.primorial_bound.c, c.primorial_bound.beta)),
        ("scan limit D", c.scan_limit_d.clone()),
        ("exhaustive", c.exhaustive.to_string()),
        ("thresholds", c.thresholds.join(" ")),
        ("M found", c.m_found.to_string()),
        ("M cap", c.m_cap.clone()),
        ("c upper", c.c_upper.to_string()),
        ("lhs", format!("[{}, {}]", c.lhs.lo, c.lhs.hi)),
        ("rhs", format!("[{}, {}]", c.rhs.lo, c.rhs.hi)),
        ("verdict", c.verdict.to_string()),
    ])
}

fn reciprocals(report: &SweepReport) -> Vec<(usize, u64, String, String)> {
    report
        .crossing_points()
        .iter()
        .zip(&report.thresholds)
        .enumerate()
        .map(|(i, (x, &d))| {
            let r = x.recip().expect("crossing points are positive");
            (i + 1, d, r.numer().to_string(), r.denom().to_string())
        })
        .collect()
}

fn sweep_csv(report: &SweepReport) -> String {
    let mut out = String::from("level,d,c_reciprocal_num,c_reciprocal_den\n");
    for (level, d, num, den) in reciprocals(report) {
        out.push_str(&format!("{level},{d},{num},{den}\n"));
    }
    out
}

fn sweep_table(report: &SweepReport) -> String {
    let mut out = table(&[
        ("scale", report.scale.to_string()),
        ("scan limit D", report.scan_limit_d.to_string()),
        ("exhaustive", report.exhaustive.to_string()),
        ("M found", report.m_found.to_string()),
        ("c found", report.c_found.to_string()),
    ]);
    for (level, d, num, den) in reciprocals(report) {
        out.push_str(&format!("d_{level:<3} {d:>12}  1/c = {num}/{den}\n"));
    }
    out
}
