//! Command-line driver. Every command renders a deterministic document for a
//! given configuration and build; nothing time-dependent is recorded.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::basis::StructureConstants;
use crate::bundles::{
    conjugated_rho, connection_form_from_rho, curvature_forms, flatness_report, line_connection, FlatnessReport,
};
use crate::cohomology::{ce_oracle, cohomology_table, LieAlgebra, DEFAULT_DEGREE_CAP};
use crate::error::Error;
use crate::json::ConstantsJson;
use crate::matrix::GradedMatrix;
use crate::report::VerificationReport;
use crate::scalar::Scalar;
use crate::suites::{run_all, SuiteConfig};

/// Identifier of the source revision this binary was built from.
pub const BUILD_ID: &str = env!("SUPERGEOM_BUILD_ID");

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "supergeom", version, about = "Exact graded differential calculus on M(n|m)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Basis table and structure constants c, d, g, K.
    Constants(RunArgs),
    /// Run every verification suite.
    Verify(RunArgs),
    /// Dimensions, ranks and Betti numbers of the form complex.
    Cohomology(RunArgs),
    /// Flat and curved line-bundle connections.
    Flat(RunArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone, Debug)]
pub struct RunArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    /// Highest form degree examined.
    #[arg(long, default_value_t = 3)]
    pub max_degree: usize,
    /// Largest form degree that may be built; `d_p` needs degree `p + 1`.
    #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
    pub degree_cap: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// The configuration echoed into every report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub n: usize,
    pub m: usize,
    pub max_degree: usize,
    pub degree_cap: usize,
    pub seed: u64,
    pub format: Format,
    pub build: &'static str,
}

impl RunConfig {
    fn new(command: &'static str, a: &RunArgs) -> RunConfig {
        RunConfig {
            command,
            n: a.n,
            m: a.m,
            max_degree: a.max_degree,
            degree_cap: a.degree_cap,
            seed: a.seed,
            format: a.format,
            build: BUILD_ID,
        }
    }
}

/// A rendered document and the exit code it implies.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub body: String,
    pub code: i32,
}

#[derive(Serialize)]
struct ConstantsDoc<'a> {
    config: &'a RunConfig,
    #[serde(flatten)]
    constants: ConstantsJson,
}

#[derive(Serialize)]
struct VerifyDoc<'a> {
    config: &'a RunConfig,
    passed: bool,
    partial: bool,
    suites: &'a [VerificationReport],
}

#[derive(Serialize)]
struct CohomologyDoc<'a> {
    config: &'a RunConfig,
    partial: bool,
    degrees: Vec<crate::cohomology::DegreeSummary>,
    betti: Vec<usize>,
    oracle: Vec<usize>,
    matches_oracle: bool,
}

#[derive(Serialize)]
struct FlatDoc<'a> {
    config: &'a RunConfig,
    theta: &'static str,
    scaled_2x: &'static str,
    conjugated: &'static str,
    experiments: Vec<FlatnessReport>,
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

fn to_csv(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn constants(a: &RunArgs, k: &StructureConstants) -> Outcome {
    let config = RunConfig::new("constants", a);
    let c = ConstantsJson::new(k);
    let body = match a.format {
        Format::Json => to_json(&ConstantsDoc { config: &config, constants: c }),
        Format::Csv => {
            let mut rows = Vec::new();
            for (name, entries) in [("c", &c.c), ("d", &c.d), ("g", &c.g), ("killing", &c.killing)] {
                for e in entries {
                    let mut r = vec![name.to_string()];
                    r.extend((0..3).map(|i| e.index.get(i).map(|x| x.to_string()).unwrap_or_default()));
                    r.push(e.value.to_string());
                    rows.push(r);
                }
            }
            to_csv(&["tensor", "i", "j", "k", "value"], rows)
        }
    };
    Outcome { body, code: EXIT_OK }
}

fn verify(a: &RunArgs, k: &StructureConstants) -> Result<Outcome, Error> {
    let config = RunConfig::new("verify", a);
    let cfg = SuiteConfig { max_degree: a.max_degree, ..SuiteConfig::new(a.seed, a.degree_cap) };
    let suites = run_all(k, &cfg)?;
    let passed = suites.iter().all(|s| s.passed);
    let partial = cfg.is_truncated();
    let body = match a.format {
        Format::Json => to_json(&VerifyDoc { config: &config, passed, partial, suites: &suites }),
        Format::Csv => {
            let rows = suites
                .iter()
                .flat_map(|s| {
                    s.entries.iter().map(|e| {
                        vec![
                            s.suite.clone(),
                            e.name.clone(),
                            e.passed.to_string(),
                            e.checked.to_string(),
                            e.counterexample.clone().unwrap_or_default(),
                            e.note.clone().unwrap_or_default(),
                        ]
                    })
                })
                .collect();
            to_csv(&["suite", "check", "passed", "checked", "counterexample", "note"], rows)
        }
    };
    let code = if !passed {
        EXIT_FAILURE
    } else if partial {
        EXIT_CAP
    } else {
        EXIT_OK
    };
    Ok(Outcome { body, code })
}

fn cohomology(a: &RunArgs, k: &StructureConstants) -> Result<Outcome, Error> {
    let config = RunConfig::new("cohomology", a);
    let partial = a.max_degree + 1 > a.degree_cap;
    let degrees = if a.degree_cap == 0 {
        Vec::new()
    } else {
        cohomology_table(a.max_degree.min(a.degree_cap - 1), k, a.degree_cap)?
    };
    let betti: Vec<usize> = degrees.iter().map(|d| d.betti).collect();
    let body_size = k.n().max(k.m());
    let oracle = if betti.is_empty() { Vec::new() } else { ce_oracle(&LieAlgebra::sl(body_size)?, betti.len() - 1) };
    let matches_oracle = betti == oracle;
    let body = match a.format {
        Format::Json => to_json(&CohomologyDoc {
            config: &config,
            partial,
            degrees: degrees.clone(),
            betti,
            oracle,
            matches_oracle,
        }),
        Format::Csv => {
            let rows = degrees
                .iter()
                .zip(&oracle)
                .map(|(d, o)| [d.p, d.dim, d.rank, d.kernel_dim, d.betti, *o].iter().map(|x| x.to_string()).collect())
                .collect();
            to_csv(&["p", "dim", "rank", "kernel_dim", "betti", "oracle"], rows)
        }
    };
    let code = if !matches_oracle {
        EXIT_FAILURE
    } else if partial {
        EXIT_CAP
    } else {
        EXIT_OK
    };
    Ok(Outcome { body, code })
}

fn flat(a: &RunArgs, k: &StructureConstants) -> Result<Outcome, Error> {
    let config = RunConfig::new("flat", a);
    // α = Θ − Σ ρ_A θ^A: ρ = 0 gives Θ, ρ_A = −E_A gives 2Θ
    let zero = vec![GradedMatrix::zero(k.n(), k.m()); k.dim()];
    let scaled: Vec<GradedMatrix> = k.basis().elements().iter().map(|e| e.scale(&Scalar::int(-1))).collect();
    let mut diag = vec![Scalar::ONE; k.n() + k.m()];
    diag[1] = Scalar::int(2);
    let g = GradedMatrix::diagonal(k.n(), k.m(), &diag)?;
    let conjugated = conjugated_rho(&g, k)?;
    let mut experiments = Vec::new();
    let mut consistent = true;
    for (label, rho) in [("theta", &zero), ("scaled_2x", &scaled), ("conjugated", &conjugated)] {
        let report = flatness_report(label, rho, k)?;
        let conn = line_connection(connection_form_from_rho(rho, k)?, k)?;
        consistent &= curvature_forms(&conn, k)?.is_zero() == report.flat;
        experiments.push(report);
    }
    let word = |r: &FlatnessReport| if r.flat { "flat" } else { "nonflat" };
    let body = match a.format {
        Format::Json => to_json(&FlatDoc {
            config: &config,
            theta: word(&experiments[0]),
            scaled_2x: word(&experiments[1]),
            conjugated: word(&experiments[2]),
            experiments: experiments.clone(),
        }),
        Format::Csv => {
            let rows = experiments
                .iter()
                .map(|r| vec![r.label.clone(), word(r).to_string(), r.nonzero_coefficients.to_string()])
                .collect();
            to_csv(&["experiment", "curvature", "nonzero_coefficients"], rows)
        }
    };
    let expected = [true, false, true];
    let ok = consistent && experiments.iter().zip(expected).all(|(r, e)| r.flat == e);
    Ok(Outcome { body, code: if ok { EXIT_OK } else { EXIT_FAILURE } })
}

/// Runs a parsed command. Errors in the arguments map to [`EXIT_USAGE`].
pub fn execute(cmd: &Command) -> Result<Outcome, (i32, String)> {
    let (Command::Constants(a) | Command::Verify(a) | Command::Cohomology(a) | Command::Flat(a)) = cmd;
    let k = StructureConstants::canonical(a.n, a.m).map_err(|e| (EXIT_USAGE, e.to_string()))?;
    let result = match cmd {
        Command::Constants(a) => Ok(constants(a, &k)),
        Command::Verify(a) => verify(a, &k),
        Command::Cohomology(a) => cohomology(a, &k),
        Command::Flat(a) => flat(a, &k),
    };
    result.map_err(|e| match e {
        Error::DegreeCapExceeded { .. } => (EXIT_CAP, e.to_string()),
        _ => (EXIT_FAILURE, e.to_string()),
    })
}

/// Parses the process arguments, runs the command and writes the output.
/// Returns the process exit code.
pub fn main_with_args(args: impl IntoIterator<Item = std::ffi::OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let (Command::Constants(a) | Command::Verify(a) | Command::Cohomology(a) | Command::Flat(a)) = &cli.command;
    match execute(&cli.command) {
        Ok(out) => {
            let written = match &a.out {
                Some(path) => std::fs::write(path, &out.body),
                None => std::io::stdout().lock().write_all(out.body.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return EXIT_FAILURE;
            }
            out.code
        }
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}
