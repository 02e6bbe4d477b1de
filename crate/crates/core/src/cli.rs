//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when a certificate fails verification, a
//! search ends without a witness, or a requested strategy does not apply,
//! and 2 on malformed input. Errors go to stderr as one line starting with
//! `error:`.

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{error::ErrorKind, Parser, Subcommand, ValueEnum};

use crate::cert::{CertError, Certificate, Recount};
use crate::count::{count_brute, count_ideal_dp, CountError};
use crate::dot::to_dot;
use crate::poset::{parse_poset, write_poset, Poset};
use crate::search::{
    compare_reference, format_table_row, lambda_exact, lambda_table, parse_reference,
    LambdaOutcome, SearchError, TableRecord,
};
use crate::synth::{certify, sqrt_ceil, SynthError, Synthesizer};

#[derive(Debug, Parser)]
#[command(
    name = "linext",
    version,
    about = "Small posets with a prescribed number of linear extensions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a certified poset with exactly N linear extensions
    Synth {
        n: u64,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
        /// Divisor for the linear strategy (default ⌈√n⌉)
        #[arg(long)]
        d: Option<u64>,
        #[arg(long, value_enum, default_value_t = Emit::Cert)]
        emit: Emit,
    },
    /// Count the linear extensions of a poset file (`-` or no file reads stdin)
    Count {
        file: Option<String>,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Compute λ(N) exactly by exhaustive search
    Lambda {
        n: u64,
        #[arg(long, default_value_t = 7)]
        max_size: usize,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Tabulate λ(n) for n = 1..=MAX_N
    Table {
        #[arg(long)]
        max_n: u64,
        #[arg(long, default_value_t = 5)]
        max_size: usize,
        /// Reference values (b-file format) to compare against
        #[arg(long)]
        oeis: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = TableFormat::Text)]
        format: TableFormat,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Check a certificate
    Verify {
        cert_file: String,
        #[arg(long, value_enum, default_value_t = RecountArg::Dp)]
        recount: RecountArg,
    },
    /// Print the Hasse diagram of a poset file as DOT
    Dot { file: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Auto,
    Linear,
    Factor,
    Special,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Cert,
    Covers,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Auto,
    Brute,
    Dp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RecountArg {
    Dp,
    Brute,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Text,
    Json,
}

/// `--method auto` uses brute force up to this size.
const AUTO_BRUTE_MAX: usize = 8;

enum Failure {
    /// Exit 1.
    Rejected(String),
    /// Exit 2.
    Input(String),
}

impl From<SynthError> for Failure {
    fn from(e: SynthError) -> Self {
        match e {
            SynthError::SelfCheck { .. } => Failure::Rejected(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<CountError> for Failure {
    fn from(e: CountError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(String, Option<Failure>), Failure>;

/// Runs one invocation. `argv[0]` is the program name.
pub fn run<I, S>(
    argv: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    let (out, failure) = match dispatch(cli.command, stdin) {
        Ok(pair) => pair,
        Err(f) => (String::new(), Some(f)),
    };
    let _ = stdout.write_all(out.as_bytes());
    match failure {
        None => 0,
        Some(Failure::Rejected(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
        Some(Failure::Input(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}

fn dispatch(command: Command, stdin: &mut dyn Read) -> Outcome {
    match command {
        Command::Synth {
            n,
            strategy,
            d,
            emit,
        } => synth(n, strategy, d, emit),
        Command::Count { file, method } => {
            let p = read_poset(file.as_deref().unwrap_or("-"), stdin)?;
            let count = match method {
                Method::Brute => count_brute(&p)?,
                Method::Dp => count_ideal_dp(&p)?,
                Method::Auto if p.size() <= AUTO_BRUTE_MAX => count_brute(&p)?,
                Method::Auto => count_ideal_dp(&p)?,
            };
            Ok((format!("{count}\n"), None))
        }
        Command::Lambda { n, max_size, jobs } => {
            if n == 0 {
                return Err(Failure::Input("n must be at least 1".into()));
            }
            let outcome = with_jobs(jobs, || lambda_exact(n, max_size))??;
            Ok(match outcome {
                LambdaOutcome::Exact(r) => (
                    format!(
                        "n: {}\nlambda: {}\nexhausted_through: {}\nwitness {{\n{}}}\n",
                        r.n,
                        r.lambda,
                        r.exhausted_through,
                        write_poset(&r.witness)
                    ),
                    None,
                ),
                LambdaOutcome::ExceedsBound { n, exhausted_through } => (
                    format!("n: {n}\nlambda: >{exhausted_through}\nexhausted_through: {exhausted_through}\n"),
                    Some(Failure::Rejected(format!(
                        "no poset with at most {exhausted_through} elements has {n} linear extensions"
                    ))),
                ),
            })
        }
        Command::Table {
            max_n,
            max_size,
            oeis,
            format,
            jobs,
        } => {
            if max_n == 0 {
                return Err(Failure::Input("--max-n must be at least 1".into()));
            }
            let reference = match &oeis {
                Some(path) => {
                    let text = fs::read_to_string(path)
                        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                    Some(parse_reference(&text)?)
                }
                None => None,
            };
            let table = with_jobs(jobs, || lambda_table(max_n, max_size))??;
            let mut out = match format {
                TableFormat::Text => table.iter().map(|o| format_table_row(o) + "\n").collect(),
                TableFormat::Json => {
                    let records: Vec<TableRecord> = table.iter().map(TableRecord::from).collect();
                    serde_json::to_string_pretty(&records).expect("records serialize") + "\n"
                }
            };
            let mut failure = table
                .iter()
                .find(|o| o.lambda().is_none())
                .map(|o| Failure::Rejected(format!("λ({}) exceeds --max-size {max_size}", o.n())));
            if let Some(reference) = reference {
                let mismatches = compare_reference(&table, &reference);
                if let Some(&(n, expected, computed)) = mismatches.first() {
                    let computed =
                        computed.map_or_else(|| format!(">{max_size}"), |v| v.to_string());
                    failure = Some(Failure::Rejected(format!(
                        "reference mismatch at n={n}: expected {expected}, computed {computed} ({} mismatches)",
                        mismatches.len()
                    )));
                } else if format == TableFormat::Text {
                    let checked = reference.iter().filter(|(n, _)| *n <= max_n).count();
                    out.push_str(&format!("# reference agrees on {checked} entries\n"));
                }
            }
            Ok((out, failure))
        }
        Command::Verify { cert_file, recount } => {
            let text = read_text(&cert_file, stdin)?;
            let cert = Certificate::parse(&text).map_err(|e| Failure::Input(e.to_string()))?;
            let recount = match recount {
                RecountArg::Dp => Recount::IdealDp,
                RecountArg::Brute => Recount::BruteForce,
                RecountArg::None => Recount::None,
            };
            match cert.verify(recount) {
                Ok(()) => Ok((
                    format!(
                        "ok: n={} size={} bound={} strategy={}\n",
                        cert.n, cert.size, cert.bound, cert.strategy
                    ),
                    None,
                )),
                Err(CertError::Count(e)) => Err(Failure::Input(e.to_string())),
                Err(e) => Err(Failure::Rejected(e.to_string())),
            }
        }
        Command::Dot { file } => {
            let p = read_poset(&file, stdin)?;
            Ok((to_dot(&p), None))
        }
    }
}

fn synth(n: u64, strategy: StrategyArg, d: Option<u64>, emit: Emit) -> Outcome {
    if d.is_some() && strategy != StrategyArg::Linear {
        return Err(Failure::Input(
            "--d applies only to --strategy linear".into(),
        ));
    }
    let mut synth = Synthesizer::new();
    let plan = match strategy {
        StrategyArg::Auto => synth.plan_best(n)?,
        StrategyArg::Linear => synth.plan_linear(n, d.unwrap_or_else(|| sqrt_ceil(n)))?,
        StrategyArg::Factor => {
            let pair = (1..=n.isqrt())
                .rev()
                .filter(|&a| n.is_multiple_of(a))
                .map(|a| (a, n / a))
                .find(|(a, b)| a < b);
            match pair {
                Some((a, b)) => synth.plan_factor(a, b)?,
                None => {
                    return Err(Failure::Rejected(format!(
                        "{n} has no factorization ab with a < b"
                    )));
                }
            }
        }
        StrategyArg::Special => match synth.plan_special(n)? {
            Some(plan) => plan,
            None => {
                return Err(Failure::Rejected(format!(
                    "{n} has no factorization ab with 2√b < a <= b"
                )));
            }
        },
    };
    let cert = certify(plan)?;
    let out = match emit {
        Emit::Cert => cert.serialize(),
        Emit::Covers => write_poset(&cert.witness),
        Emit::Dot => to_dot(&cert.witness),
    };
    Ok((out, None))
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    match jobs {
        None => Ok(f()),
        Some(0) => Err(Failure::Input("--jobs must be at least 1".into())),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| Failure::Input(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn read_text(path: &str, stdin: &mut dyn Read) -> Result<String, Failure> {
    let mut text = String::new();
    if path == "-" {
        stdin
            .read_to_string(&mut text)
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
    } else {
        text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
    }
    Ok(text)
}

fn read_poset(path: &str, stdin: &mut dyn Read) -> Result<Poset, Failure> {
    let text = read_text(path, stdin)?;
    parse_poset(&text).map_err(|e| Failure::Input(e.to_string()))
}
