//! Command-line front end.
//!
//! ```text
//! addbasis build  --config <file> [--out <file>]
//! addbasis verify <certificate>
//! addbasis useq   --config <file> --count <K>
//! addbasis count  --set <a,b,...> --order <h> (--n <int> | --histogram)
//! ```
//!
//! Exit codes: 0 on success, 1 when a certificate fails verification, 2 on
//! usage, config or I/O errors.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{ArgGroup, Parser, Subcommand};
use num_bigint::BigInt;
use thiserror::Error;

use crate::builder::{self, parse_certificate, verify, BuildError, BuilderConfig, Certificate};
use crate::repcount::{self, FiniteSet, RepCounts};
use crate::targetfn::{TargetConfig, TargetError, TargetFunction};
use crate::useq::{u_bound, UStream};

#[derive(Debug, Error)]
pub enum CliError {
    /// `--help` or `--version` output; not a failure.
    #[error("{0}")]
    Help(String),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Config { path: PathBuf, source: BuildError },
}

#[derive(Parser, Debug)]
#[command(
    name = "addbasis",
    version,
    about = "Build and verify additive bases with a prescribed representation function"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build stages A_1..A_K from a config and emit a certificate.
    Build {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay every check recorded in a certificate file.
    Verify { certificate: PathBuf },
    /// Print the first K terms of the enumeration U with their bounds.
    Useq {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        count: usize,
    },
    /// Representation counts of a finite set.
    #[command(group(ArgGroup::new("query").required(true).args(["n", "histogram"])))]
    Count {
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long)]
        order: usize,
        #[arg(long, allow_hyphen_values = true)]
        n: Option<String>,
        #[arg(long)]
        histogram: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CountQuery {
    Point(BigInt),
    Histogram,
}

/// A parsed and validated invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunConfig {
    Build {
        config: BuilderConfig,
        out: Option<PathBuf>,
    },
    Verify {
        certificate: PathBuf,
    },
    Useq {
        f: TargetFunction,
        count: usize,
    },
    Count {
        set: FiniteSet,
        order: usize,
        query: CountQuery,
    },
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })
}

fn parse_int(flag: &str, s: &str) -> Result<BigInt, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("--{flag}: malformed integer `{s}`")))
}

/// Parses arguments (without the program name). Config files named by
/// `--config` are read and validated here.
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv = std::iter::once(OsString::from("addbasis")).chain(argv.into_iter().map(Into::into));
    let args = Args::try_parse_from(argv).map_err(|e| match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliError::Help(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    })?;
    match args.command {
        Command::Build { config, out } => {
            let text = read(&config)?;
            let parsed = BuilderConfig::parse(&text).map_err(|source| CliError::Config {
                path: config.clone(),
                source,
            })?;
            Ok(RunConfig::Build {
                config: parsed,
                out,
            })
        }
        Command::Verify { certificate } => Ok(RunConfig::Verify { certificate }),
        Command::Useq { config, count } => {
            let text = read(&config)?;
            let target = TargetConfig::parse(&text).map_err(|e: TargetError| CliError::Config {
                path: config.clone(),
                source: e.into(),
            })?;
            Ok(RunConfig::Useq { f: target.f, count })
        }
        Command::Count {
            set,
            order,
            n,
            histogram,
        } => {
            if order == 0 {
                return Err(CliError::Usage("--order: h must be ≥ 1".into()));
            }
            let elements = set
                .split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| parse_int("set", t))
                .collect::<Result<Vec<_>, _>>()?;
            let query = match (n, histogram) {
                (Some(n), false) => CountQuery::Point(parse_int("n", &n)?),
                _ => CountQuery::Histogram,
            };
            Ok(RunConfig::Count {
                set: FiniteSet::new(elements),
                order,
                query,
            })
        }
    }
}

fn write_checks(out: &mut dyn Write, cert: &Certificate) -> io::Result<()> {
    for c in &cert.checks {
        writeln!(
            out,
            "check\t{}\t{}\t{}",
            c.name,
            if c.passed { "pass" } else { "fail" },
            c.witness.as_deref().unwrap_or("-")
        )?;
    }
    writeln!(
        out,
        "verdict\t{}",
        if cert.passed() { "pass" } else { "fail" }
    )
}

fn counts_row(out: &mut dyn Write, n: &BigInt, c: &RepCounts) -> io::Result<()> {
    writeln!(
        out,
        "{n}\t{}\t{}\t{}\t{}",
        c.unordered, c.ordered, c.restricted, c.restricted_ordered
    )
}

fn execute(config: RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let io_err = |path: &str| {
        let path = PathBuf::from(path);
        move |source| CliError::Io { path, source }
    };
    match config {
        RunConfig::Build { config, out: path } => {
            let (set, cert) = builder::build(&config).map_err(|source| CliError::Config {
                path: PathBuf::from("<build>"),
                source,
            })?;
            let text = cert.render();
            match path {
                Some(path) => {
                    fs::write(&path, &text).map_err(|source| CliError::Io {
                        path: path.clone(),
                        source,
                    })?;
                    writeln!(
                        out,
                        "verdict\t{}\t|A|={}\t{}",
                        if cert.passed() { "pass" } else { "fail" },
                        set.len(),
                        path.display()
                    )
                    .map_err(io_err("<stdout>"))?;
                }
                None => out.write_all(text.as_bytes()).map_err(io_err("<stdout>"))?,
            }
            Ok(if cert.passed() { 0 } else { 1 })
        }
        RunConfig::Verify { certificate } => {
            let text = read(&certificate)?;
            let file = parse_certificate(&text).map_err(|source| CliError::Config {
                path: certificate.clone(),
                source,
            })?;
            let cert = verify(&file.set, &file.history, &file.config);
            write_checks(out, &cert).map_err(io_err("<stdout>"))?;
            Ok(if cert.passed() { 0 } else { 1 })
        }
        RunConfig::Useq { f, count } => {
            let delta = f.delta();
            writeln!(out, "k\tu_k\tbound").map_err(io_err("<stdout>"))?;
            for (k, u) in (1u64..).zip(UStream::new(f).take(count)) {
                writeln!(out, "{k}\t{u}\t{}", u_bound(k, delta)).map_err(io_err("<stdout>"))?;
            }
            Ok(0)
        }
        RunConfig::Count { set, order, query } => {
            writeln!(out, "n\tr\tR\tr_hat\tR_hat").map_err(io_err("<stdout>"))?;
            match query {
                CountQuery::Point(n) => {
                    let counts = RepCounts {
                        unordered: repcount::count_unordered(&set, order, &n),
                        ordered: repcount::count_ordered(&set, order, &n),
                        restricted: repcount::count_restricted(&set, order, &n),
                        restricted_ordered: repcount::count_restricted_ordered(&set, order, &n),
                    };
                    counts_row(out, &n, &counts).map_err(io_err("<stdout>"))?;
                }
                CountQuery::Histogram => {
                    let table = repcount::rep_table(&set, order)
                        .map_err(|e| CliError::Usage(format!("--set: {e}")))?;
                    for (n, counts) in &table {
                        counts_row(out, n, counts).map_err(io_err("<stdout>"))?;
                    }
                }
            }
            Ok(0)
        }
    }
}

/// Runs a parsed invocation, writing results to `out` and diagnostics to
/// `err`. Returns the process exit code.
pub fn run_with(config: RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(config, out) {
        Ok(code) => code,
        Err(
            e @ CliError::Config {
                source: BuildError::InvariantViolation { .. },
                ..
            },
        ) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

pub fn run(config: RunConfig) -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(config, &mut stdout.lock(), &mut stderr.lock())
}

/// Parses and runs, mapping usage errors to exit code 2.
pub fn main_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match parse_args(argv) {
        Ok(config) => run_with(config, out, err),
        Err(CliError::Help(text)) => {
            let _ = write!(out, "{text}");
            0
        }
        Err(CliError::Usage(text)) => {
            let _ = write!(err, "{text}");
            2
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
