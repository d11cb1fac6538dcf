//! `sstl` command-line front end.

mod report;

use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use sstl::automata::{verify, Budget, Outcome, DEFAULT_MAX_DEPTH, DEFAULT_MAX_STATES};
use sstl::system::{builtin_source, parse_model, simulate, TransitionSystem, BUILTIN_NAMES};
use sstl::table::{run_table, Expected, CASE_STUDIES, DISEASE_VARIANTS};
use sstl::time::{format_real, parse_real, DEFAULT_QUANTIZATION};
use sstl::translate::{translate_with, Encoding, ObligationRegistry};
use sstl::{
    discretize_formula, eval_all, eval_at, load_trace, parse_formula, parse_formula_with_signals, Dialect, Formula,
    Real, Verdict,
};

use report::{outcome_exit, verdicts_exit, Inputs, RunReport, TableReport, EXIT_LIMIT, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE};

#[derive(Parser)]
#[command(name = "sstl", version, about = "Monitor, translate and model-check SSTL properties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum DialectArg {
    Stl,
    Sstl,
}

#[derive(Clone, Copy, ValueEnum)]
enum EncodingArg {
    Conceptual,
    Impl,
}

impl EncodingArg {
    fn encoding(self) -> Encoding {
        match self {
            EncodingArg::Conceptual => Encoding::Conceptual,
            EncodingArg::Impl => Encoding::Impl,
        }
    }

    fn name(self) -> &'static str {
        match self {
            EncodingArg::Conceptual => "conceptual",
            EncodingArg::Impl => "impl",
        }
    }
}

#[derive(clap::Args)]
struct FormulaArgs {
    /// Formula text, or a path to a file containing it.
    #[arg(long)]
    formula: String,
    /// Input dialect. STL intervals are in seconds and need `--dt`; SSTL
    /// intervals are already in ticks.
    #[arg(long, value_enum, default_value = "sstl")]
    dialect: DialectArg,
    /// Tick period in seconds (STL only).
    #[arg(long)]
    dt: Option<String>,
}

#[derive(clap::Args)]
struct BudgetArgs {
    #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
    max_states: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
    max_depth: usize,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget {
            max_states: self.max_states,
            max_depth: self.max_depth,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula on a trace.
    Check {
        #[command(flatten)]
        formula: FormulaArgs,
        /// CSV trace with a `tick` column followed by signal columns.
        #[arg(long)]
        trace: String,
        /// Only evaluate at this tick.
        #[arg(long)]
        tick: Option<u64>,
        /// Write per-tick verdicts as CSV.
        #[arg(long)]
        dump_eval: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Print the LTL_P translation of a formula.
    Translate {
        #[command(flatten)]
        formula: FormulaArgs,
        #[arg(long, value_enum, default_value = "impl")]
        encoding: EncodingArg,
        #[arg(long)]
        json: bool,
    },
    /// Model-check a formula against a model.
    Verify {
        /// Built-in model name or path to a model file.
        #[arg(long)]
        model: String,
        #[command(flatten)]
        formula: FormulaArgs,
        #[arg(long, value_enum, default_value = "impl")]
        encoding: EncodingArg,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Write the counterexample as JSON to this path.
        #[arg(long)]
        counterexample: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Simulate a model and write the trace as CSV.
    Simulate {
        #[arg(long)]
        model: String,
        #[arg(long, default_value_t = 100)]
        ticks: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path; standard output when absent.
        #[arg(long)]
        out: Option<String>,
    },
    /// Run the built-in case-study table.
    Table {
        #[arg(long, value_enum, default_value = "impl")]
        encoding: EncodingArg,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        json: bool,
    },
    /// List the built-in models.
    Models,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::Check {
            formula,
            trace,
            tick,
            dump_eval,
            json,
        } => cmd_check(&formula, &trace, tick, dump_eval.as_deref(), json),
        Command::Translate { formula, encoding, json } => cmd_translate(&formula, encoding, json),
        Command::Verify {
            model,
            formula,
            encoding,
            budget,
            counterexample,
            json,
        } => cmd_verify(&model, &formula, encoding, &budget, counterexample.as_deref(), json),
        Command::Simulate { model, ticks, seed, out } => cmd_simulate(&model, ticks, seed, out.as_deref()),
        Command::Table { encoding, budget, json } => cmd_table(encoding, &budget, json),
        Command::Models => {
            for name in BUILTIN_NAMES {
                println!("{name}");
            }
            Ok(EXIT_OK)
        }
    }
}

fn formula_text(arg: &str) -> Result<String> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
        Ok(text.trim().to_string())
    } else {
        Ok(arg.to_string())
    }
}

/// Parses the formula and projects it to ticks. Returns the SSTL formula
/// and the tick period it refers to (1 for SSTL input).
fn load_formula(args: &FormulaArgs, signals: Option<&[String]>) -> Result<(Formula, Real, String)> {
    let text = formula_text(&args.formula)?;
    let dialect = match args.dialect {
        DialectArg::Stl => Dialect::Stl,
        DialectArg::Sstl => Dialect::Sstl,
    };
    let phi = match signals {
        Some(s) => parse_formula_with_signals(&text, dialect, s),
        None => parse_formula(&text, dialect),
    }
    .with_context(|| format!("parsing formula `{text}`"))?;
    match (dialect, &args.dt) {
        (Dialect::Stl, Some(dt)) => {
            let dt = parse_real(dt).with_context(|| format!("parsing --dt `{dt}`"))?;
            let sstl = discretize_formula(&phi, dt).context("discretizing the formula")?;
            Ok((sstl, dt, text))
        }
        (Dialect::Stl, None) => bail!("--dt is required for STL formulas"),
        (_, Some(_)) => bail!("--dt is only allowed with --dialect stl; SSTL intervals are already in ticks"),
        (_, None) => Ok((phi, Real::from_integer(1), text)),
    }
}

fn dialect_name(d: DialectArg) -> String {
    match d {
        DialectArg::Stl => "stl".into(),
        DialectArg::Sstl => "sstl".into(),
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn cmd_check(args: &FormulaArgs, trace: &str, tick: Option<u64>, dump: Option<&str>, json: bool) -> Result<i32> {
    let (phi, dt, text) = load_formula(args, None)?;
    let w = load_trace(trace, dt, DEFAULT_QUANTIZATION).with_context(|| format!("loading trace {trace}"))?;
    let all = eval_all(&phi, &w)?;
    if let Some(path) = dump {
        let mut out = String::from("tick,verdict\n");
        for (k, v) in all.iter().enumerate() {
            out.push_str(&format!("{k},{v}\n"));
        }
        fs::write(path, out).with_context(|| format!("writing {path}"))?;
    }
    let inputs = Inputs {
        formula: Some(text),
        dialect: Some(dialect_name(args.dialect)),
        trace: Some(trace.to_string()),
        dt: args.dt.clone(),
        tick,
        ..Inputs::default()
    };
    let (report, code) = match tick {
        Some(t) => {
            let v = eval_at(&phi, &w, t)?;
            (RunReport::new("check", inputs, v.to_string()), verdicts_exit(&[v]))
        }
        None => {
            let overall = if all.iter().all(|v| *v == Verdict::True) {
                Verdict::True
            } else if all.contains(&Verdict::False) {
                Verdict::False
            } else {
                Verdict::Inconclusive
            };
            let mut r = RunReport::new("check", inputs, overall.to_string());
            r.verdicts = Some(all.clone());
            (r, verdicts_exit(&all))
        }
    };
    if json {
        print_json(&report)?;
    } else if let Some(t) = tick {
        println!("tick {t}: {}", report.verdict);
    } else {
        for (k, v) in all.iter().enumerate() {
            println!("tick {k}: {v}");
        }
    }
    Ok(code)
}

fn cmd_translate(args: &FormulaArgs, encoding: EncodingArg, json: bool) -> Result<i32> {
    let (phi, _, text) = load_formula(args, None)?;
    let psi = translate_with(&phi, encoding.encoding())?;
    let bound = ObligationRegistry::from_formula(&psi).bound();
    if json {
        let inputs = Inputs {
            formula: Some(text),
            dialect: Some(dialect_name(args.dialect)),
            dt: args.dt.clone(),
            encoding: Some(encoding.name().into()),
            ..Inputs::default()
        };
        let mut r = RunReport::new("translate", inputs, "True");
        r.property = Some(psi.to_string());
        r.obligation_bound = Some(bound);
        print_json(&r)?;
    } else {
        println!("{psi}");
    }
    Ok(EXIT_OK)
}

fn load_model(name: &str) -> Result<TransitionSystem> {
    let src = match builtin_source(name) {
        Some(src) => src,
        None => fs::read_to_string(name)
            .with_context(|| format!("`{name}` is neither a built-in model nor a readable file"))?,
    };
    parse_model(&src).with_context(|| format!("parsing model {name}"))
}

fn cmd_verify(
    model: &str,
    args: &FormulaArgs,
    encoding: EncodingArg,
    budget: &BudgetArgs,
    cex_path: Option<&str>,
    json: bool,
) -> Result<i32> {
    let sys = load_model(model)?;
    let signals: Vec<String> = sys.variables().iter().map(|v| v.name.clone()).collect();
    let (phi, dt, text) = load_formula(args, Some(&signals))?;
    if matches!(args.dialect, DialectArg::Stl) && dt != sys.dt() {
        bail!(
            "--dt {} does not match the model's tick period {}",
            format_real(&dt),
            format_real(&sys.dt())
        );
    }
    let vr = verify(&sys, &phi, encoding.encoding(), budget.budget())?;
    let inputs = Inputs {
        formula: Some(text),
        dialect: Some(dialect_name(args.dialect)),
        model: Some(model.to_string()),
        dt: args.dt.clone(),
        encoding: Some(encoding.name().into()),
        max_states: Some(budget.max_states),
        max_depth: Some(budget.max_depth),
        ..Inputs::default()
    };
    let summary = vr.summary();
    let mut r = RunReport::new("verify", inputs, summary.verdict.clone());
    r.property = Some(summary.property);
    r.automaton_states = Some(summary.automaton_states);
    r.states_explored = Some(summary.states_explored);
    r.limit = summary.limit;
    if let Outcome::Violated(cex) = &vr.outcome {
        if let Some(path) = cex_path {
            fs::write(path, serde_json::to_string_pretty(cex)? + "\n").with_context(|| format!("writing {path}"))?;
            r.counterexample_path = Some(path.to_string());
        }
        r.counterexample = Some(cex.clone());
    }
    if json {
        print_json(&r)?;
    } else {
        println!("{}: {}", sys.name(), r.verdict);
        println!("property: {}", vr.property);
        println!(
            "automaton states: {}, product states explored: {}",
            vr.automaton_states, vr.states_explored
        );
        match &vr.outcome {
            Outcome::Violated(cex) => print!("counterexample\n{cex}"),
            Outcome::ResourceLimit(l) => println!("stopped by the {l}"),
            Outcome::Satisfied => {}
        }
    }
    Ok(outcome_exit(&vr.outcome))
}

fn cmd_simulate(model: &str, ticks: usize, seed: u64, out: Option<&str>) -> Result<i32> {
    let sys = load_model(model)?;
    let w = simulate(&sys, ticks, seed)?;
    match out {
        Some(path) => {
            let file = fs::File::create(path).with_context(|| format!("creating {path}"))?;
            w.write_csv(file)?;
        }
        None => w.write_csv(io::stdout().lock())?,
    }
    Ok(EXIT_OK)
}

fn cmd_table(encoding: EncodingArg, budget: &BudgetArgs, json: bool) -> Result<i32> {
    let entries: Vec<_> = CASE_STUDIES.iter().chain(&DISEASE_VARIANTS).copied().collect();
    let results = run_table(&entries, encoding.encoding(), budget.budget());
    let mut rows = Vec::with_capacity(entries.len());
    let mut code = EXIT_OK;
    for (e, res) in entries.iter().zip(results) {
        let expected = match e.expected {
            Expected::Satisfied => "Satisfied",
            Expected::Violated => "Violated",
        };
        let row = match res {
            Ok(row) => {
                if let Outcome::ResourceLimit(_) = row.report.outcome {
                    code = code.max(EXIT_LIMIT);
                } else if !row.matches() {
                    code = code.max(EXIT_NEGATIVE);
                }
                TableReport {
                    model: e.model.into(),
                    property: e.property.into(),
                    formula: e.formula.into(),
                    expected: expected.into(),
                    verdict: row.report.outcome.name().into(),
                    matches: row.matches(),
                    counterexample_replays: row.replay_ok,
                    automaton_states: row.report.automaton_states,
                    states_explored: row.report.states_explored,
                    error: None,
                }
            }
            Err(err) => {
                code = EXIT_USAGE;
                TableReport {
                    model: e.model.into(),
                    property: e.property.into(),
                    formula: e.formula.into(),
                    expected: expected.into(),
                    verdict: "Error".into(),
                    matches: false,
                    counterexample_replays: None,
                    automaton_states: 0,
                    states_explored: 0,
                    error: Some(err.to_string()),
                }
            }
        };
        rows.push(row);
    }
    if json {
        print_json(&rows)?;
    } else {
        println!(
            "{:<26} {:<16} {:<10} {:<14} {:>8} {:>10}  ok",
            "model", "property", "expected", "verdict", "aut", "explored"
        );
        for r in &rows {
            println!(
                "{:<26} {:<16} {:<10} {:<14} {:>8} {:>10}  {}",
                r.model,
                r.property,
                r.expected,
                r.verdict,
                r.automaton_states,
                r.states_explored,
                if r.matches { "yes" } else { "NO" }
            );
        }
        let ok = rows.iter().filter(|r| r.matches).count();
        println!("{ok}/{} rows match", rows.len());
    }
    Ok(code)
}
