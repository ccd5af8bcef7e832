mod tables;

use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use qpb_core::braided::Braided;
use qpb_core::calculus::calculus_by_tag;
use qpb_core::expr::{Evaluator, Value as Expr};
use qpb_core::gauge::{Gauge, GaugePotential};
use qpb_core::json::{elem_to_json, gamma_to_json, key_to_json, mono_to_json, parse_json, potential_from_json, scalar_to_json, tensor_to_json, tensorial_to_json};
use qpb_core::verify::{run_suite, SuiteReport, VerifyOptions};
use qpb_core::{MuParam, QpbError};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "qpb", version, about = "Exact computations on quantum SU(2) bundles")]
struct Cli {
    /// Output format (default: text for verify and eval, json for table and curvature)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Specialize to mu = -1
    #[arg(long, global = true)]
    mu_minus_one: bool,
    /// Seed for randomized checks
    #[arg(long, global = true, env = "QPB_SEED", default_value_t = 1)]
    seed: u64,
    /// Calculus: minimal, 4d or mu-minus-one
    #[arg(long, global = true)]
    calculus: Option<String>,
    /// Print Unicode names (α, γ*, ⊗)
    #[arg(long, global = true, conflicts_with = "ascii")]
    unicode: bool,
    /// Print ASCII names (the default)
    #[arg(long, global = true)]
    ascii: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Random potentials per chart dimension in the gauge suite
        #[arg(long, default_value_t = 20)]
        potentials: usize,
    },
    /// Emit a table: sigma, s2inv, circ, curvature, jacobi or zeta
    Table {
        kind: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        m: Option<i64>,
    },
    /// Evaluate an expression
    Eval { expr: String },
    /// Curvature of a gauge potential read from a JSON file
    Curvature {
        #[arg(long)]
        potential: std::path::PathBuf,
    },
}

enum Failure {
    Input(String),
    Verification,
}

impl From<QpbError> for Failure {
    fn from(e: QpbError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("qpb: {}", msg);
            ExitCode::from(2)
        }
    }
}

fn calculus_tag(cli: &Cli, default: &str) -> Result<String, Failure> {
    let tag = match (&cli.calculus, cli.mu_minus_one) {
        (Some(t), _) => t.clone(),
        (None, true) => "mu-minus-one".into(),
        (None, false) => default.into(),
    };
    let tag = if tag == "minimal-mu-minus-one" { "mu-minus-one".into() } else { tag };
    if cli.mu_minus_one && tag != "mu-minus-one" {
        return Err(Failure::Input(format!("calculus '{}' is not defined at mu = -1", tag)));
    }
    Ok(tag)
}

fn print(format: Format, json: &Value, text: &str) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(json).expect("serializable")),
        Format::Text => print!("{}", text),
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let unicode = cli.unicode && !cli.ascii;
    match &cli.command {
        Command::Verify { suite, potentials } => {
            let opts = VerifyOptions {
                calculus: cli.calculus.clone(),
                mu_minus_one: cli.mu_minus_one,
                seed: cli.seed,
                potentials: *potentials,
            };
            let report = run_suite(suite, &opts)?;
            print(cli.format.unwrap_or(Format::Text), &report.to_json(), &report.to_text());
            verdict(&report)
        }
        Command::Table { kind, k, m } => {
            let default = if kind == "sigma" || kind == "s2inv" || kind == "curvature" { "4d" } else { "minimal" };
            let args = tables::TableArgs { calculus: calculus_tag(cli, default)?, k: *k, m: *m, unicode };
            let t = tables::emit(kind, &args)?;
            print(cli.format.unwrap_or(Format::Json), &t.json, &t.text());
            Ok(())
        }
        Command::Eval { expr } => {
            let param = if cli.mu_minus_one { MuParam::MinusOne } else { MuParam::Generic };
            let tag = calculus_tag(cli, "minimal")?;
            let mut ev = Evaluator::new(param, &tag);
            let v = ev.eval(expr)?;
            let text = format!("{}\n", v.to_text(unicode));
            print(cli.format.unwrap_or(Format::Text), &json!({"kind": v.kind(), "value": value_json(&v)}), &text);
            Ok(())
        }
        Command::Curvature { potential } => {
            let text = std::fs::read_to_string(potential)
                .map_err(|e| Failure::Input(format!("{}: {}", potential.display(), e)))?;
            let (file_tag, a) = potential_from_json(&parse_json(&text)?)?;
            let tag = match &cli.calculus {
                Some(t) if *t != file_tag => {
                    return Err(Failure::Input(format!("potential is for calculus '{}', not '{}'", file_tag, t)));
                }
                _ => file_tag,
            };
            if cli.mu_minus_one && tag != "mu-minus-one" {
                return Err(Failure::Input(format!("calculus '{}' is not defined at mu = -1", tag)));
            }
            let c = Arc::new(calculus_by_tag(&tag)?);
            let pot = GaugePotential::new(&c, a)?;
            let b = Braided::new(c)?;
            let f = Gauge::new(&b).curvature(pot.form())?;
            let mut lines = String::new();
            for (k, form) in f.table() {
                lines.push_str(&format!("F({}) = {}\n", k.to_text(unicode), form));
            }
            print(cli.format.unwrap_or(Format::Json), &tensorial_to_json(&tag, &f), &lines);
            Ok(())
        }
    }
}

fn verdict(report: &SuiteReport) -> Result<(), Failure> {
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn value_json(v: &Expr) -> Value {
    match v {
        Expr::Scalar(c) => scalar_to_json(c),
        Expr::Alg(e) => elem_to_json(e),
        Expr::Tensor(t) => tensor_to_json(t),
        Expr::Inv(tag, x) => gamma_to_json(tag, x),
        Expr::InvA(tag, x) => json!({
            "calculus": tag,
            "terms": x.iter().map(|((k, m), c)| json!([key_to_json(*k), mono_to_json(*m), scalar_to_json(c)])).collect::<Vec<_>>(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qpb_core::verify::CheckResult;

    #[test]
    fn failing_check_maps_to_verification_failure() {
        let mut report = SuiteReport { suite: "hopf".into(), checks: vec![] };
        assert!(verdict(&report).is_ok());
        report.checks.push(CheckResult { id: "hopf.counit".into(), passed: false, witness: Some("a".into()) });
        assert!(matches!(verdict(&report), Err(Failure::Verification)));
        assert_eq!(report.to_json()["checks"][0]["status"], "fail");
    }
}
