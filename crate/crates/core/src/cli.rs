//! Command-line front end. [`run_cli`] takes the argument vector and output
//! streams explicitly so it can be driven from tests.
//!
//! Exit codes: 0 success, 1 domain failure (invalid matrix, overflow, or a
//! failed `--strict` verdict), 2 usage or parse error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::consistency::{complete_from_generators, reduce, GeneratorSet, ReductionOptions, ReductionStep};
use crate::error::Error;
use crate::experiments::{constant_offset_table, monte_carlo_comparison, stick_example, ConvergenceRow};
use crate::indicators::{kii_matrix_with_tolerance, matrix_kii, TriadRecord, DEFAULT_TOLERANCE};
use crate::io::{parse_matrix, render_matrix, AnalysisDocument, AnalysisParameters, IoError, MatrixFormat};
use crate::matrix::PcMatrix;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "pcii",
    version,
    about = "Inconsistency analysis for pairwise-comparison matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputKind {
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    CsvFull,
    CsvUpper,
}

impl From<FormatArg> for MatrixFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::CsvFull => MatrixFormat::CsvFull,
            FormatArg::CsvUpper => MatrixFormat::CsvUpper,
        }
    }
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Matrix file
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "csv-full")]
    format: FormatArg,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "text")]
    output: OutputKind,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Kii, per-triad indicators, CI and a verdict for a matrix file
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        /// Exit with status 1 when the matrix is not consistent at the tolerance
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// List every triad of a matrix file
    Triads {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Consistent matrix from the n-1 entries above the diagonal
    Reconstruct {
        #[arg(long)]
        n: Option<usize>,
        /// Comma-separated generators a_12, a_23, ...
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        generators: Vec<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Greedy inconsistency reduction toward a tolerance
    Reduce {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        #[arg(long, default_value_t = 1000)]
        max_iter: usize,
        #[arg(long, default_value_t = 1.0)]
        blend: f64,
        /// Exit with status 1 when the tolerance is not reached
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// The (x^n, x^2n + c, x^n) sequence: constant distance, vanishing error
    Counterexample {
        #[arg(long, default_value_t = 2.0, value_parser = parse_number)]
        x: f64,
        #[arg(long, default_value_t = 10)]
        nmax: u32,
        /// Constant offset; accepts `a^b`, e.g. 2^64
        #[arg(long, default_value_t = 1.0, value_parser = parse_number)]
        c: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Triads (1,2,1) and (10,101,10): same distance, different relative error
    Sticks {
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Rank agreement of Kii, distance and CI with the maximum relative error
    Montecarlo {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 3.0)]
        perturbation: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Parses a float, or `base^exponent` for values like `2^64`.
fn parse_number(s: &str) -> Result<f64, String> {
    if let Some((base, exp)) = s.split_once('^') {
        let base: f64 = base.trim().parse().map_err(|_| format!("bad base in `{s}`"))?;
        let exp: f64 = exp.trim().parse().map_err(|_| format!("bad exponent in `{s}`"))?;
        Ok(base.powf(exp))
    } else {
        s.trim().parse().map_err(|_| format!("`{s}` is not a number"))
    }
}

enum Failure {
    Domain(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Read { .. } | IoError::Parse { .. } => Failure::Usage(e.to_string()),
            IoError::Validation { .. } | IoError::Matrix(_) => Failure::Domain(e.to_string()),
        }
    }
}

struct Outcome {
    body: String,
    code: i32,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Self { body, code: EXIT_OK }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn load(input: &InputArgs) -> Result<PcMatrix, Failure> {
    Ok(parse_matrix(&input.input, input.format.into())?)
}

/// Runs the CLI with `argv` (including the program name). Returns the exit code.
pub fn run_cli<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(outcome) => {
            let _ = out.write_all(outcome.body.as_bytes());
            outcome.code
        }
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_DOMAIN
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Analyze {
            input,
            tolerance,
            strict,
            output,
        } => {
            let m = load(&input)?;
            let report = kii_matrix_with_tolerance(&m, tolerance)?;
            let doc = AnalysisDocument::new(
                &m,
                &report,
                AnalysisParameters {
                    input: Some(input.input.display().to_string()),
                    format: Some(input.format.into()),
                    tolerance,
                },
            );
            let body = match output.output {
                OutputKind::Structured => {
                    let mut s = doc.to_json();
                    s.push('\n');
                    s
                }
                OutputKind::Text => doc.to_text(),
            };
            let code = if strict && !report.consistent {
                EXIT_DOMAIN
            } else {
                EXIT_OK
            };
            Ok(Outcome { body, code })
        }
        Command::Triads { input, output } => {
            let m = load(&input)?;
            triads_output(&m, output.output)
        }
        Command::Reconstruct { n, generators, output } => {
            let g = GeneratorSet::new(generators)?;
            if let Some(n) = n {
                if n != g.n() {
                    return Err(Failure::Usage(format!(
                        "--n {n} needs {} generators, got {}",
                        n.saturating_sub(1),
                        g.generators().len()
                    )));
                }
            }
            let m = complete_from_generators(&g);
            let kii = if m.n() >= 3 { Some(matrix_kii(&m)?.0) } else { None };
            Ok(Outcome::ok(match output.output {
                OutputKind::Structured => json(&ReconstructDoc {
                    n: m.n(),
                    generators: g.generators().to_vec(),
                    matrix: m.to_rows(),
                    matrix_kii: kii,
                }),
                OutputKind::Text => {
                    let mut s = format!("{}\n", render_matrix(&m.to_rows()));
                    if let Some(k) = kii {
                        let _ = writeln!(s, "matrix kii {k:e}");
                    }
                    s
                }
            }))
        }
        Command::Reduce {
            input,
            tolerance,
            max_iter,
            blend,
            strict,
            output,
        } => {
            let m = load(&input)?;
            let trace = reduce(
                &m,
                ReductionOptions {
                    tolerance,
                    max_iter,
                    blend,
                },
            )?;
            let code = if strict && !trace.converged {
                EXIT_DOMAIN
            } else {
                EXIT_OK
            };
            let body = match output.output {
                OutputKind::Structured => json(&ReduceDoc {
                    tolerance,
                    max_iter,
                    blend,
                    initial_kii: trace.initial_kii,
                    final_kii: trace.final_kii,
                    converged: trace.converged,
                    steps: &trace.steps,
                    matrix: trace.matrix.to_rows(),
                }),
                OutputKind::Text => {
                    let mut s = String::new();
                    let _ = writeln!(
                        s,
                        "{:>5} {:>11} {:>3} {:>14} {:>14} {:>14}",
                        "step", "triad", "el", "old", "new", "kii after"
                    );
                    for st in &trace.steps {
                        let (i, j, k) = st.worst_triad;
                        let _ = writeln!(
                            s,
                            "{:>5} {:>11} {:>3} {:>14.6} {:>14.6} {:>14.10}",
                            st.step,
                            format!("({i},{j},{k})"),
                            format!("{:?}", st.element).to_lowercase(),
                            st.old_value,
                            st.new_value,
                            st.matrix_kii_after
                        );
                    }
                    let _ = writeln!(s, "initial kii {:.10}", trace.initial_kii);
                    let _ = writeln!(s, "final kii   {:.10}", trace.final_kii);
                    let _ = writeln!(s, "converged   {}", trace.converged);
                    let _ = writeln!(s, "{}", render_matrix(&trace.matrix.to_rows()));
                    s
                }
            };
            Ok(Outcome { body, code })
        }
        Command::Counterexample { x, nmax, c, output } => {
            let rows = constant_offset_table(x, c, nmax)?;
            Ok(Outcome::ok(match output.output {
                OutputKind::Structured => json(&CounterexampleDoc {
                    x,
                    c,
                    nmax,
                    rows: &rows,
                }),
                OutputKind::Text => counterexample_text(&rows),
            }))
        }
        Command::Sticks { output } => {
            let s = stick_example();
            Ok(Outcome::ok(match output.output {
                OutputKind::Structured => json(&s),
                OutputKind::Text => {
                    let mut t = String::new();
                    let _ = writeln!(
                        t,
                        "{:>14} {:>10} {:>16} {:>16} {:>10}",
                        "triad", "distance", "rel_err (/y)", "rel_err (/true)", "kii"
                    );
                    for r in [&s.coarse, &s.fine] {
                        let (x, y, z) = r.triad;
                        let _ = writeln!(
                            t,
                            "{:>14} {:>10} {:>15.4}% {:>15.4}% {:>10.6}",
                            format!("({x},{y},{z})"),
                            r.distance,
                            100.0 * r.relative_error,
                            100.0 * r.true_value_relative_error,
                            r.kii
                        );
                    }
                    t
                }
            }))
        }
        Command::Montecarlo {
            n,
            trials,
            perturbation,
            seed,
            output,
        } => {
            let summary = monte_carlo_comparison(n, trials, perturbation, seed)?;
            Ok(Outcome::ok(match output.output {
                OutputKind::Structured => json(&summary),
                OutputKind::Text => {
                    let mut t = String::new();
                    let _ = writeln!(
                        t,
                        "n = {n}, trials = {trials}, perturbation = {perturbation}, seed = {seed}"
                    );
                    let _ = writeln!(
                        t,
                        "{:>20} {:>14} {:>14} {:>16}",
                        "indicator", "mean", "max", "spearman vs re"
                    );
                    for s in std::iter::once(&summary.max_relative_error).chain(&summary.indicators) {
                        let rho = s.rank_correlation.map_or("-".to_string(), |r| format!("{r:.6}"));
                        let _ = writeln!(t, "{:>20} {:>14.6e} {:>14.6e} {:>16}", s.name, s.mean, s.max, rho);
                    }
                    t
                }
            }))
        }
    }
}

fn triads_output(m: &PcMatrix, output: OutputKind) -> Result<Outcome, Failure> {
    let records: Vec<TriadRecord> = if m.n() >= 3 {
        kii_matrix_with_tolerance(m, DEFAULT_TOLERANCE)?.per_triad
    } else {
        Vec::new()
    };
    Ok(Outcome::ok(match output {
        OutputKind::Structured => json(&TriadsDoc {
            n: m.n(),
            triads: &records,
        }),
        OutputKind::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "{:>11} {:>14} {:>14} {:>14} {:>12}", "triad", "x", "y", "z", "kii");
            for r in &records {
                let (i, j, k) = r.indices;
                let _ = writeln!(
                    s,
                    "{:>11} {:>14.6} {:>14.6} {:>14.6} {:>12.8}",
                    format!("({i},{j},{k})"),
                    r.x,
                    r.y,
                    r.z,
                    r.kii
                );
            }
            s
        }
    }))
}

fn counterexample_text(rows: &[ConvergenceRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>4} {:>24} {:>12} {:>16} {:>16} {:>6}",
        "n", "y = x^2n + c", "distance", "relative_error", "kii", "exact"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:>4} {:>24} {:>12} {:>16.6e} {:>16.6e} {:>6}",
            r.n,
            r.triad.1,
            r.distance,
            r.relative_error,
            r.kii,
            if r.exact { "yes" } else { "no" }
        );
    }
    s
}

#[derive(Serialize)]
struct TriadsDoc<'a> {
    n: usize,
    triads: &'a [TriadRecord],
}

#[derive(Serialize)]
struct ReconstructDoc {
    n: usize,
    generators: Vec<f64>,
    matrix: Vec<Vec<f64>>,
    matrix_kii: Option<f64>,
}

#[derive(Serialize)]
struct ReduceDoc<'a> {
    tolerance: f64,
    max_iter: usize,
    blend: f64,
    initial_kii: f64,
    final_kii: f64,
    converged: bool,
    steps: &'a [ReductionStep],
    matrix: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct CounterexampleDoc<'a> {
    x: f64,
    c: f64,
    nmax: u32,
    rows: &'a [ConvergenceRow],
}
