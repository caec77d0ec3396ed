use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pradic::bbn::{infer_marginal, run_pipeline};
use pradic::ccf::{expand_all, expand_ccf, score_sheet};
use pradic::et::{compare_models, solve_event_tree, EtOptions};
use pradic::ft::{minimal_cut_sets, quantify, Method, QuantOptions, SolveOptions, DEFAULT_TRUNCATION};
use pradic::io::fixtures::resolve_text;
use pradic::io::reports::{
    beta_report, comparison_csv, cut_set_csv, marginal_csv, parse_inline_scores, read_score_csv,
    read_sequence_csv, sequence_csv, sfp_report,
};
use pradic::io::{resolve_model, serialize_model, FIXTURES};
use pradic::model::{BetaTable, ScoreSheet, TableKind};
use pradic::{validate, Diagnostic, Model, TRUNCATION_ENV};

#[derive(Parser)]
#[command(name = "pradic", version, about = "Fault trees, event trees, CCF betas and software failure probabilities for digital I&C")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate a beta factor from a defence score sheet.
    Beta {
        #[arg(long)]
        table: TableKind,
        /// CSV file of `subfactor,grade` rows, or inline `Sub=Grade,...`.
        #[arg(long)]
        scores: String,
    },
    /// Common-cause failure operations.
    #[command(subcommand)]
    Ccf(CcfCommand),
    /// Fault-tree operations.
    #[command(subcommand)]
    Ft(FtCommand),
    /// Event-tree operations.
    #[command(subcommand)]
    Et(EtCommand),
    /// Compare two sequence result files.
    Compare {
        baseline: String,
        improved: String,
        /// Keep only sequences with this end state.
        #[arg(long)]
        end_state: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bayesian-network operations.
    #[command(subcommand)]
    Bbn(BbnCommand),
    /// Specific software failure probability from a network and a generic calibration.
    Sfp {
        model: String,
        #[arg(long)]
        network: String,
        #[arg(long)]
        group: Option<String>,
        /// Generic SFP and generic P(faults).
        #[arg(long, num_args = 2, value_names = ["SFP_G", "PF_G"], required = true)]
        phi_from: Vec<f64>,
    },
    /// Check a model and list its diagnostics.
    Validate { model: String },
    /// Print a bundled fixture, or list them.
    Fixture { name: Option<String> },
}

#[derive(Subcommand)]
enum CcfCommand {
    /// Rewrite component failures into independent and CCF basic events.
    Expand {
        model: String,
        #[arg(long)]
        out: PathBuf,
        /// Expand only this group (repeatable); default is every group.
        #[arg(long)]
        group: Vec<String>,
    },
}

#[derive(Subcommand)]
enum FtCommand {
    /// Minimal cut sets and top-event probability.
    Solve {
        model: String,
        #[arg(long)]
        top: String,
        #[command(flatten)]
        truncation: Truncation,
        #[arg(long, value_enum, default_value_t = MethodArg::Sum)]
        method: MethodArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum EtCommand {
    /// Sequence frequencies of an event tree.
    Solve {
        model: String,
        #[arg(long)]
        tree: String,
        #[command(flatten)]
        truncation: Truncation,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum BbnCommand {
    /// Posterior marginal of one node.
    Infer {
        model: String,
        #[arg(long)]
        network: String,
        #[arg(long)]
        query: String,
        /// Observed state as `node=state` (repeatable).
        #[arg(long, num_args = 1..)]
        evidence: Vec<String>,
    },
}

#[derive(Args)]
struct Truncation {
    #[arg(long, env = TRUNCATION_ENV, default_value_t = DEFAULT_TRUNCATION)]
    truncation: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Sum,
    Mcub,
    Exact,
    All,
}

type Outcome = Result<(), Vec<Diagnostic>>;

fn fail(rule: &'static str, entity: &str, err: impl ToString) -> Vec<Diagnostic> {
    vec![Diagnostic::error(rule, entity, err.to_string())]
}

fn emit(text: &str, out: Option<&PathBuf>) -> Outcome {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| fail("io", &path.display().to_string(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn beta(table: TableKind, scores: &str) -> Outcome {
    let grades = if std::path::Path::new(scores).exists() {
        let text = std::fs::read_to_string(scores).map_err(|e| fail("io", scores, e))?;
        read_score_csv(&text)
    } else {
        parse_inline_scores(scores)
    }
    .map_err(|e| fail("scores", scores, e))?;
    let sheet = ScoreSheet { name: "cli".into(), table, grades };
    let est = score_sheet(&BetaTable::builtin(table), &sheet).map_err(|e| fail("ccf", scores, e))?;
    emit(&beta_report(&est), None)
}

fn ccf_expand(model: &str, out: &PathBuf, groups: &[String]) -> Outcome {
    let m = resolve_model(model)?;
    let exp = if groups.is_empty() {
        expand_all(&m)
    } else {
        let mut acc = expand_ccf(&m, &groups[0]);
        for g in &groups[1..] {
            acc = acc.and_then(|prev| {
                let mut next = expand_ccf(&prev.model, g)?;
                next.created_events.splice(0..0, prev.created_events);
                next.diagnostics.splice(0..0, prev.diagnostics);
                Ok(next)
            });
        }
        acc
    }
    .map_err(|e| fail("ccf", model, e))?;
    for d in &exp.diagnostics {
        eprintln!("{d}");
    }
    emit(&serialize_model(&exp.model), Some(out))?;
    println!("created {} basic events", exp.created_events.len());
    for id in &exp.created_events {
        let p = exp.model.basic_event(id).map(|e| e.probability).unwrap_or_default();
        println!("{id},{}", pradic::io::sci(p));
    }
    Ok(())
}

fn ft_solve(model: &str, top: &str, truncation: f64, method: MethodArg, out: Option<&PathBuf>) -> Outcome {
    let m = resolve_model(model)?;
    let sol = minimal_cut_sets(&m, top, &SolveOptions::with_truncation(truncation)).map_err(|e| fail("ft", top, e))?;
    let (headline, methods) = match method {
        MethodArg::Sum => (Method::Sum, vec![Method::Sum]),
        MethodArg::Mcub => (Method::Mcub, vec![Method::Mcub, Method::Sum]),
        MethodArg::Exact => (Method::Exact, vec![Method::Exact, Method::Sum]),
        MethodArg::All => (Method::Sum, vec![Method::Sum, Method::Mcub, Method::Exact]),
    };
    let q = quantify(&sol, &m, &QuantOptions { headline, ..QuantOptions::default() }).map_err(|e| fail("ft", top, e))?;
    emit(&cut_set_csv(&q, &methods), out)
}

fn et_solve(model: &str, tree: &str, truncation: f64, out: Option<&PathBuf>) -> Outcome {
    let m = resolve_model(model)?;
    let sol = solve_event_tree(&m, tree, &EtOptions::with_truncation(truncation)).map_err(|e| fail("et", tree, e))?;
    emit(&sequence_csv(&sol), out)
}

fn compare(baseline: &str, improved: &str, end_state: Option<&str>, out: Option<&PathBuf>) -> Outcome {
    let read = |arg: &str| -> Result<_, Vec<Diagnostic>> {
        let text = resolve_text(arg).map_err(|d| vec![d])?;
        let mut rows = read_sequence_csv(&text).map_err(|e| fail("csv", arg, e))?;
        if let Some(es) = end_state {
            rows.retain(|r| r.end_state == es);
        }
        Ok(rows)
    };
    let c = compare_models(&read(baseline)?, &read(improved)?);
    emit(&comparison_csv(&c), out)
}

fn bbn_infer(model: &str, network: &str, query: &str, evidence: &[String]) -> Outcome {
    let m = resolve_model(model)?;
    let net = m.network(network).ok_or_else(|| fail("bbn", network, "network is not declared"))?;
    let mut ev = BTreeMap::new();
    for item in evidence {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| fail("evidence", item, "expected node=state"))?;
        ev.insert(k.trim().to_string(), v.trim().to_string());
    }
    let marginal = infer_marginal(net, query, &ev).map_err(|e| fail("bbn", query, e))?;
    emit(&marginal_csv(&marginal), None)
}

fn sfp(model: &str, network: &str, group: Option<&str>, phi_from: &[f64]) -> Outcome {
    let m = resolve_model(model)?;
    let r = run_pipeline(&m, network, group, phi_from[0], phi_from[1]).map_err(|e| fail("sfp", network, e))?;
    emit(&sfp_report(&r), None)
}

fn validate_cmd(model: &str) -> Outcome {
    let text = resolve_text(model).map_err(|d| vec![d])?;
    let m: Model = pradic::io::parse_model(&text).map_err(|d| vec![d])?;
    let diags = validate(&m);
    if diags.iter().any(Diagnostic::is_error) {
        return Err(diags);
    }
    for d in &diags {
        eprintln!("{d}");
    }
    println!("ok");
    Ok(())
}

fn fixture(name: Option<&str>) -> Outcome {
    match name {
        None => {
            for (n, _) in FIXTURES {
                println!("{n}");
            }
            Ok(())
        }
        Some(n) => {
            let text = pradic::io::fixture(n).ok_or_else(|| fail("io", n, "no such bundled fixture"))?;
            emit(text, None)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Beta { table, scores } => beta(table, &scores),
        Command::Ccf(CcfCommand::Expand { model, out, group }) => ccf_expand(&model, &out, &group),
        Command::Ft(FtCommand::Solve { model, top, truncation, method, out }) => {
            ft_solve(&model, &top, truncation.truncation, method, out.as_ref())
        }
        Command::Et(EtCommand::Solve { model, tree, truncation, out }) => {
            et_solve(&model, &tree, truncation.truncation, out.as_ref())
        }
        Command::Compare { baseline, improved, end_state, out } => {
            compare(&baseline, &improved, end_state.as_deref(), out.as_ref())
        }
        Command::Bbn(BbnCommand::Infer { model, network, query, evidence }) => {
            bbn_infer(&model, &network, &query, &evidence)
        }
        Command::Sfp { model, network, group, phi_from } => sfp(&model, &network, group.as_deref(), &phi_from),
        Command::Validate { model } => validate_cmd(&model),
        Command::Fixture { name } => fixture(name.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(diags) => {
            for d in diags {
                eprintln!("{d}");
            }
            ExitCode::from(1)
        }
    }
}
