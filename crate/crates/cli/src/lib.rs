//! `finmarkov` command-line tool: reads kernel documents, runs an analysis,
//! and writes a JSON report.
//!
//! Exit codes: 0 when the analysis completed with a positive answer, 1 when
//! it completed with a negative one, 2 when the input could not be used.

pub mod paper;

use std::ffi::OsString;
use std::io::Read;

use clap::{Parser, Subcommand, ValueEnum};
use finmarkov::asrel::{abs_cont, ase, refute_abs_cont, AcRefutation, AseQuery};
use finmarkov::document::{parse_kernel, parse_kernel_unvalidated};
use finmarkov::envelope::{env_cell, env_check_markov_laws, Flavor};
use finmarkov::functors::{conditional, upsilon};
use finmarkov::idempotent::{cauchy_schwarz, classify};
use finmarkov::split::{blackwell_split, search_split, SearchDomain, SearchOutcome, DEFAULT_CANDIDATE_BOUND};
use finmarkov::support::{split_support, support, SupportData};
use finmarkov::{validate, Error, Kernel, Kind};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "finmarkov", version, about = "Exact analysis of finite Markov kernels")]
pub struct Cli {
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest splitting object tried by exhaustive search (defaults to |X|).
    #[arg(long, global = true)]
    pub max_size: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Pretty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FlavorArg {
    Karoubi,
    Blackwell,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the column law of a kernel document.
    Validate { kernel: String },
    /// Idempotent type: static, strong, balanced.
    Classify { kernel: String },
    /// Split an idempotent (recurrent classes for stoch, exhaustive search otherwise).
    Split {
        kernel: String,
        /// Candidate bound for exhaustive search.
        #[arg(long, default_value_t = DEFAULT_CANDIDATE_BOUND as u64)]
        bound: u64,
        /// Entry grid denominator for searching stochastic splittings.
        #[arg(long)]
        grid: Option<u32>,
    },
    /// Support of a kernel.
    Support { kernel: String },
    /// Support together with its deterministic retraction.
    SplitSupport { kernel: String },
    /// Absolute continuity q >> p.
    Abscont { q: String, p: String },
    /// Almost-sure equality f =_p g, with optional parameter wire of the given size.
    Ase {
        p: String,
        f: String,
        g: String,
        #[arg(long, default_value_t = 1)]
        param_size: usize,
    },
    /// Input-output relation of a stochastic kernel.
    Upsilon { kernel: String },
    /// Conditional of a joint A -> X ⊗ Y given X.
    Conditional {
        kernel: String,
        /// Size of the conditioned factor X.
        #[arg(long)]
        x_size: usize,
    },
    /// Markov laws of the envelope cell (X, e).
    EnvelopeCheck {
        kernel: String,
        #[arg(long, value_enum, default_value_t = FlavorArg::Blackwell)]
        flavor: FlavorArg,
    },
    /// One instance of the Cauchy–Schwarz implication.
    CauchySchwarz { f: String, g: String, h: String },
    /// Golden checks on the worked examples.
    VerifyPaper,
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] Error),
}

struct Report {
    value: Value,
    positive: bool,
    table: Option<String>,
}

impl Report {
    fn new(value: Value, positive: bool) -> Self {
        Report {
            value,
            positive,
            table: None,
        }
    }
}

/// Failures of a mathematical precondition count as negative answers, not
/// as unusable input.
fn is_negative_answer(e: &Error) -> bool {
    matches!(
        e,
        Error::NotIdempotent | Error::NotBalanced | Error::NotAbsolutelyContinuous(_) | Error::NotAse
    )
}

struct Inputs<'a> {
    stdin: &'a mut dyn Read,
    stdin_used: bool,
}

impl Inputs<'_> {
    fn text(&mut self, path: &str) -> Result<String, CliError> {
        if path == "-" {
            if self.stdin_used {
                return Err(CliError::Input("stdin can be read only once".into()));
            }
            self.stdin_used = true;
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
            Ok(s)
        } else {
            std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))
        }
    }

    fn kernel(&mut self, path: &str) -> Result<Kernel, CliError> {
        let text = self.text(path)?;
        parse_kernel(&text).map_err(|e| CliError::Input(format!("{path}: {e}")))
    }
}

fn support_json(sd: &SupportData) -> Value {
    let mut v = json!({
        "object": sd.object,
        "inclusion": sd.inclusion,
        "factorization": sd.factorization,
    });
    if let Some(p) = &sd.projection {
        v["projection"] = json!(p);
    }
    v
}

fn execute(cli: &Cli, inputs: &mut Inputs) -> Result<Report, CliError> {
    Ok(match &cli.command {
        Command::Validate { kernel } => {
            let text = inputs.text(kernel)?;
            let k = parse_kernel_unvalidated(&text).map_err(|e| CliError::Input(format!("{kernel}: {e}")))?;
            match validate(&k) {
                Ok(()) => Report::new(json!({"valid": true}), true),
                Err(v) => Report::new(json!({"valid": false, "violation": v}), false),
            }
        }
        Command::Classify { kernel } => {
            let r = classify(&inputs.kernel(kernel)?)?;
            let idempotent = r.idempotent;
            Report::new(json!(r), idempotent)
        }
        Command::Split { kernel, bound, grid } => {
            let e = inputs.kernel(kernel)?;
            if e.kind() == Kind::Stoch && grid.is_none() {
                Report::new(json!(blackwell_split(&e)?), true)
            } else {
                let domain = SearchDomain::for_kind(e.kind(), grid.unwrap_or(2))?;
                let max_t = cli.max_size.unwrap_or(e.dom().len());
                let out = search_split(&e, max_t, domain, *bound as u128)?;
                let found = matches!(out, SearchOutcome::Split(_));
                Report::new(json!(out), found)
            }
        }
        Command::Support { kernel } => Report::new(support_json(&support(&inputs.kernel(kernel)?)?), true),
        Command::SplitSupport { kernel } => {
            Report::new(support_json(&split_support(&inputs.kernel(kernel)?)?), true)
        }
        Command::Abscont { q, p } => {
            let (q, p) = (inputs.kernel(q)?, inputs.kernel(p)?);
            let holds = abs_cont(&q, &p)?;
            let mut v = json!({"abs_cont": holds});
            if let AcRefutation::Witness(w) = refute_abs_cont(&q, &p)? {
                v["witness"] = json!({"element": w.element, "f": w.f, "g": w.g});
            }
            Report::new(v, holds)
        }
        Command::Ase { p, f, g, param_size } => {
            let (p, f, g) = (inputs.kernel(p)?, inputs.kernel(f)?, inputs.kernel(g)?);
            let holds = ase(&AseQuery::with_parameter(p, f, g, *param_size)?);
            Report::new(json!({"ase": holds}), holds)
        }
        Command::Upsilon { kernel } => Report::new(json!(upsilon(&inputs.kernel(kernel)?)?), true),
        Command::Conditional { kernel, x_size } => {
            Report::new(json!(conditional(&inputs.kernel(kernel)?, *x_size)?), true)
        }
        Command::EnvelopeCheck { kernel, flavor } => {
            let e = inputs.kernel(kernel)?;
            let flavor = match flavor {
                FlavorArg::Karoubi => Flavor::Karoubi,
                FlavorArg::Blackwell => Flavor::Blackwell,
            };
            match env_cell(e.dom(), &e, flavor) {
                Ok(cell) => {
                    let laws = env_check_markov_laws(&cell, cli.seed)?;
                    Report::new(json!({"accepted": true, "flavor": flavor, "laws": laws}), laws.all_pass())
                }
                Err(err) if is_negative_answer(&err) => Report::new(
                    json!({"accepted": false, "flavor": flavor, "reason": err.to_string()}),
                    false,
                ),
                Err(err) => return Err(err.into()),
            }
        }
        Command::CauchySchwarz { f, g, h } => {
            let (f, g, h) = (inputs.kernel(f)?, inputs.kernel(g)?, inputs.kernel(h)?);
            let imp = cauchy_schwarz(&f, &g, &h)?;
            Report::new(json!(imp), imp.implication_ok)
        }
        Command::VerifyPaper => {
            let checks = paper::verify_paper();
            let all = checks.iter().all(|c| c.passed);
            Report {
                table: Some(paper::render_table(&checks)),
                value: json!({"passed": all, "checks": checks}),
                positive: all,
            }
        }
    })
}

pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stderr: text,
                    ..Default::default()
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    ..Default::default()
                }
            };
        }
    };
    let mut inputs = Inputs {
        stdin,
        stdin_used: false,
    };
    match execute(&cli, &mut inputs) {
        Ok(report) => {
            let mut stdout = match (cli.format, &report.table) {
                (Format::Pretty, Some(table)) => table.clone(),
                (Format::Pretty, None) => serde_json::to_string_pretty(&report.value).expect("json values serialize"),
                (Format::Json, _) => report.value.to_string(),
            };
            if !stdout.ends_with('\n') {
                stdout.push('\n');
            }
            Outcome {
                code: if report.positive { 0 } else { 1 },
                stdout,
                stderr: String::new(),
            }
        }
        Err(CliError::Core(e)) if is_negative_answer(&e) => Outcome {
            code: 1,
            stdout: format!("{}\n", json!({"error": e.to_string()})),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture(name: &str) -> String {
        format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
    }

    fn run_args(args: &[&str]) -> Outcome {
        let mut argv = vec!["finmarkov".to_string()];
        argv.extend(args.iter().map(|s| s.to_string()));
        run(argv, &mut std::io::empty())
    }

    #[test]
    fn classify_static_example() {
        let out = run_args(&["classify", &fixture("e_static.json")]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["idempotent"], true);
        assert_eq!(v["static"], true);
        assert_eq!(v["strong"], false);
        assert_eq!(v["balanced"], true);
    }

    #[test]
    fn split_balanced_example() {
        let out = run_args(&["split", &fixture("e_balanced4.json")]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["classes"], json!([["1", "2"], ["3"]]));
        assert_eq!(v["transient"], json!(["4"]));
    }

    #[test]
    fn multi_split_search_is_negative() {
        let out = run_args(&["split", "--max-size", "2", &fixture("multi_upset.json")]);
        assert_eq!(out.code, 1);
        assert!(out.stdout.contains("no_split_up_to"), "{}", out.stdout);
    }

    #[test]
    fn negative_answers_exit_one() {
        let out = run_args(&["abscont", &fixture("multi_upset.json"), &fixture("e_static.json")]);
        assert_eq!(out.code, 2, "kind mismatch is an input error");
        let out = run_args(&["envelope-check", &fixture("multi_upset.json")]);
        assert_eq!(out.code, 1);
        assert!(out.stdout.contains("\"accepted\":false"));
        let m = fixture("multi_upset.json");
        let out = run_args(&["cauchy-schwarz", &m, &m, &m]);
        assert_eq!(out.code, 1);
    }

    #[test]
    fn input_errors_exit_two() {
        let out = run_args(&["classify", "/nonexistent.json"]);
        assert_eq!(out.code, 2);
        let out = run_args(&["frobnicate"]);
        assert_eq!(out.code, 2);
        let mut stdin = "{\"kind\":\"stoch\"".as_bytes();
        let out = run(["finmarkov", "classify", "-"], &mut stdin);
        assert_eq!(out.code, 2);
        assert!(out.stderr.contains("line 1"), "{}", out.stderr);
    }

    #[test]
    fn validate_reports_violation() {
        let mut stdin = r#"{"kind":"stoch","dom":["a"],"cod":["x","y"],"matrix":[["1/2"],["1/4"]]}"#.as_bytes();
        let out = run(["finmarkov", "validate", "-"], &mut stdin);
        assert_eq!(out.code, 1);
        assert!(out.stdout.contains("3/4"), "{}", out.stdout);
    }

    #[test]
    fn verify_paper_passes() {
        let out = run_args(&["verify-paper", "--format", "pretty"]);
        assert_eq!(out.code, 0, "{}", out.stdout);
        assert!(out.stdout.contains("checks passed"));
    }
}
