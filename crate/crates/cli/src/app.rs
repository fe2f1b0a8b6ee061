//! Argument parsing and dispatch. Exit codes: 0 success, 1 domain error,
//! 2 usage or parse error.

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use convexqe_core::classify::{check_pluslike, classify, f_valuational, normalize_monotone, pluslike_from_unary};
use convexqe_core::convex::{qe_model_with, skolemize_with, SkolemDefinition};
use convexqe_core::lab::{choice_violation, obstruction_find, verify_skolem, ChoiceCandidate};
use convexqe_core::model::{eval_formula, oracle_truth, ModelDescriptor, DEFAULT_BUDGET_BITS};
use convexqe_core::pl::{PlBinary, PlUnary};
use convexqe_core::qe::Budget;
use convexqe_core::syntax::{parse_formula, Formula};
use serde_json::{json, Value};

use crate::fixtures::{load_model, read, LoadError};
use crate::format::{self, FormatError};
use crate::fuzz::{fuzz, FuzzConfig};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Human,
    Json,
}

#[derive(Parser, Debug)]
#[command(
    name = "convexqe",
    version,
    about = "Quantifier elimination and cut experiments for ordered groups with a convex predicate"
)]
pub struct Cli {
    /// Model file, or the name of a shipped fixture.
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// Precision budget in bits for deciding irrational comparisons.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET_BITS, value_parser = clap::value_parser!(u32).range(1..))]
    pub precision: u32,
    /// Sampled assignments per check.
    #[arg(long, global = true, default_value_t = 500, value_parser = positive)]
    pub samples: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Maximum DNF clauses per eliminated quantifier.
    #[arg(long, global = true, default_value_t = Budget::default().dnf_clauses, value_parser = positive)]
    pub budget_dnf: usize,
    /// Maximum quantifier depth accepted by elimination.
    #[arg(long, global = true, default_value_t = Budget::default().depth, value_parser = positive)]
    pub budget_depth: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Human)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a formula and print it canonically.
    Parse { formula: String },
    /// Eliminate the quantifiers of a formula over the model's class.
    Eliminate { formula: String },
    /// Classify the cut of U.
    Classify,
    /// Synthesize a Skolem function for the target variable.
    Skolemize {
        #[arg(long, default_value = "y")]
        target: String,
        formula: String,
    },
    /// Check a Skolem definition on sampled parameters.
    VerifySkolem {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        sk: String,
        /// Target of a definition given as a bare list of cases.
        #[arg(long, default_value = "y")]
        target: String,
    },
    /// Find why a unary function is no Skolem function for `x < y & U(y)`.
    Obstruct {
        #[arg(long = "fn")]
        function: String,
    },
    /// Show that a candidate does not choose from the fibers of `I(x - y)`;
    /// without `--fn`, the synthesized Skolem function is used.
    ChoiceDemo {
        #[arg(long = "fn")]
        function: Option<String>,
    },
    /// Make a piecewise-monotone function increasing by reflection.
    NormalizeMonotone {
        #[arg(long = "fn")]
        function: String,
    },
    /// Check whether a binary function is pluslike, and with a model,
    /// whether the cut is valuational for it.
    CheckPluslike {
        #[arg(long = "fn")]
        function: String,
    },
    /// Evaluate a formula at an assignment such as `--at x=1,0`.
    Eval {
        formula: String,
        #[arg(long = "at")]
        at: Vec<String>,
    },
    /// Compare elimination against the truth oracle on random formulas.
    Fuzz {
        #[arg(long, default_value_t = 500)]
        formulas: usize,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Negate one elimination rule; discrepancies are then expected.
        #[arg(long)]
        inject_bug: bool,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Domain(_) => 1,
            AppError::Usage(_) => 2,
        }
    }
}

impl From<LoadError> for AppError {
    fn from(e: LoadError) -> Self {
        AppError::Usage(e.to_string())
    }
}

impl From<FormatError> for AppError {
    fn from(e: FormatError) -> Self {
        AppError::Usage(e.to_string())
    }
}

fn domain(e: impl ToString) -> AppError {
    AppError::Domain(e.to_string())
}

fn formula(text: &str) -> Result<Formula, AppError> {
    parse_formula(text).map_err(|e| AppError::Usage(format!("{text:?}: {e}")))
}

/// A command's result: the JSON report, a human rendering, and whether it
/// is a negative verdict that should exit with 1.
struct Output {
    json: Value,
    human: String,
    failed: bool,
}

impl Output {
    fn ok(json: Value, human: String) -> Self {
        Self { json, human, failed: false }
    }
}

impl Cli {
    fn budget(&self) -> Budget {
        Budget { dnf_clauses: self.budget_dnf, depth: self.budget_depth }
    }

    fn model(&self) -> Result<ModelDescriptor, AppError> {
        let arg = self.model.as_deref().ok_or_else(|| AppError::Usage("--model is required".into()))?;
        Ok(load_model(arg)?)
    }

    fn config_json(&self) -> Value {
        json!({
            "model": self.model,
            "precision": self.precision,
            "samples": self.samples,
            "seed": self.seed,
            "budget_dnf": self.budget_dnf,
            "budget_depth": self.budget_depth,
        })
    }

    fn execute(&self) -> Result<Output, AppError> {
        match &self.command {
            Command::Parse { formula: text } => {
                let f = formula(text)?;
                Ok(Output::ok(json!({ "formula": f.to_string() }), f.to_string()))
            }
            Command::Eliminate { formula: text } => {
                let f = formula(text)?;
                let m = self.model()?;
                let out = qe_model_with(&f, &m, &self.budget()).map_err(domain)?;
                Ok(Output::ok(json!({ "input": f.to_string(), "output": out.to_string() }), out.to_string()))
            }
            Command::Classify => {
                let m = self.model()?;
                let report = classify(&m);
                let json = format::classification_json(&m, &report);
                let human = human_lines(&json);
                Ok(Output::ok(json, human))
            }
            Command::Skolemize { target, formula: text } => {
                let f = formula(text)?;
                let m = self.model()?;
                let sk = skolemize_with(&f, target, &m, &self.budget()).map_err(domain)?;
                let json = json!({ "target": target, "definition": format::skolem_cases_json(&sk) });
                Ok(Output::ok(json, skolem_text(&sk)))
            }
            Command::VerifySkolem { phi, sk, target } => {
                let f = formula(phi)?;
                let m = self.model()?;
                let sk = format::skolem_from_str(&read(sk.as_ref())?, target)?;
                let report = verify_skolem(&m, &f, &sk, self.samples, self.seed).map_err(domain)?;
                let json = format::skolem_report_json(&report);
                let human = if report.passed {
                    format!("passed on {} samples ({} solvable)", report.samples, report.solvable)
                } else {
                    format!("failed: {}", json["counterexample"])
                };
                Ok(Output { json, human, failed: !report.passed })
            }
            Command::Obstruct { function } => {
                let m = self.model()?;
                let f = unary(function)?;
                let w = obstruction_find(&m, &f).map_err(domain)?;
                let json = format::obstruction_json(&w);
                let human = format!("{:?} at {}: f = {}", w.violation, w.point, w.image);
                Ok(Output::ok(json, human))
            }
            Command::ChoiceDemo { function } => {
                let m = self.model()?;
                let (v, candidate) = match function {
                    Some(path) => {
                        let f = unary(path)?;
                        (choice_violation(&m, &ChoiceCandidate::Pl(&f)).map_err(domain)?, format::pl_unary_json(&f))
                    }
                    None => {
                        let phi = formula("I(x - y)")?;
                        let sk = skolemize_with(&phi, "y", &m, &self.budget()).map_err(domain)?;
                        let c = ChoiceCandidate::Skolem { definition: &sk, param: "x" };
                        (choice_violation(&m, &c).map_err(domain)?, format::skolem_cases_json(&sk))
                    }
                };
                let json = json!({ "candidate": candidate, "violation": format::choice_json(&v) });
                let human = human_lines(&json["violation"]);
                Ok(Output::ok(json, human))
            }
            Command::NormalizeMonotone { function } => {
                let f = unary(function)?;
                let g = normalize_monotone(&f).map_err(domain)?;
                Ok(Output::ok(json!({ "function": format::pl_unary_json(&g) }), g.to_string()))
            }
            Command::CheckPluslike { function } => {
                let f = binary(function)?;
                let verdict = check_pluslike(&f);
                let mut json = json!({ "pluslike": format::pluslike_json(&verdict) });
                let mut human = human_lines(&json["pluslike"]);
                if self.model.is_some() {
                    let m = self.model()?;
                    let v = f_valuational(&m, &f).map_err(domain)?;
                    json["f_valuational"] = format::f_valuational_json(&v);
                    human.push('\n');
                    human.push_str(&human_lines(&json["f_valuational"]));
                }
                Ok(Output::ok(json, human))
            }
            Command::Eval { formula: text, at } => {
                let f = formula(text)?;
                let m = self.model()?;
                let asgn = format::assignment_from_pairs(at)?;
                let value = if f.is_quantifier_free() {
                    eval_formula(&m, &f, &asgn, self.precision).map_err(domain)?
                } else {
                    oracle_truth(&m, &f, &asgn).map_err(domain)?
                };
                let json =
                    json!({ "formula": f.to_string(), "assignment": format::assignment_json(&asgn), "value": value });
                Ok(Output::ok(json, value.to_string()))
            }
            Command::Fuzz { formulas, depth, inject_bug } => {
                let m = self.model()?;
                let config = FuzzConfig {
                    formulas: *formulas,
                    samples: self.samples,
                    seed: self.seed,
                    max_quantifier_depth: *depth,
                    budget: self.budget(),
                    precision: self.precision,
                    inject_bug: *inject_bug,
                };
                let report = fuzz(&m, &config).map_err(domain)?;
                let mut human = format!(
                    "{} formulas checked, {} skipped (oracle budget), {} discrepancies",
                    report.checked,
                    report.oracle_skipped,
                    report.discrepancies.len()
                );
                for d in &report.discrepancies {
                    human.push_str(&format!("\n#{}: {}\n  minimized: {}", d.index, d.formula, d.minimized));
                }
                Ok(Output::ok(report.to_json(), human))
            }
        }
    }
}

fn unary(path: &str) -> Result<PlUnary, AppError> {
    Ok(format::pl_unary_from_str(&read(path.as_ref())?)?)
}

fn binary(path: &str) -> Result<PlBinary, AppError> {
    if let Ok(f) = format::pl_binary_from_str(&read(path.as_ref())?) {
        return Ok(f);
    }
    // A unary `H` stands for `H(x + y)`.
    Ok(pluslike_from_unary(&unary(path)?))
}

fn skolem_text(sk: &SkolemDefinition) -> String {
    if sk.cases.is_empty() {
        return format!("{} is never defined", sk.target);
    }
    sk.cases.iter().map(|c| format!("if {} then {} = {}", c.guard, sk.target, c.witness)).collect::<Vec<_>>().join("\n")
}

/// `key: value` lines for the fields of a JSON object.
fn human_lines(v: &Value) -> String {
    match v.as_object() {
        Some(map) => map
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}: {s}"),
                other => format!("{k}: {other}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        None => v.to_string(),
    }
}

/// Runs the command line `args` (program name first), writing the report to
/// `out` and diagnostics to `err`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match cli.execute() {
        Ok(output) => {
            let written = match cli.format {
                OutputFormat::Human => writeln!(out, "{}", output.human),
                OutputFormat::Json => {
                    let mut report = output.json;
                    if let Value::Object(map) = &mut report {
                        map.entry("config").or_insert_with(|| cli.config_json());
                    } else {
                        report = json!({ "config": cli.config_json(), "result": report });
                    }
                    writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("reports serialize"))
                }
            };
            if written.is_err() {
                return 1;
            }
            i32::from(output.failed)
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
