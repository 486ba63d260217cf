//! Command-line front end for checking RTM-style process models.
//!
//! Every subcommand returns an [`Outcome`] holding the exit code and the
//! text for stdout and stderr; `main` only prints it.

pub mod names;
pub mod report;
pub mod table;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use parx_core::eval::evaluate_operator;
use parx_core::model::{Interdependency, ModelConfig, ProcessOperator};
use parx_core::verify::{check_data_availability, check_units, resolve_bindings, UnitScope};
use parx_core::vocab::AliasTable;
use parx_core::{load_sources, ProcessModel, Source, Term};

use names::Prefixes;
use report::{
    availability_rows, availability_table, evaluation_rows, key, tick, unit_label, unit_row, unit_table,
    EvaluationStatus, Report, Verdict,
};
use table::Table;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "parx-verify", version, about = "Consistency checks for ontology-based process models")]
pub struct Cli {
    /// Alias file: one `FROM TO` IRI pair per line, `#` starts a comment.
    #[arg(long, global = true, value_name = "PATH")]
    pub aliases: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Variable to data element bindings of a process, with the context filter.
    Filter {
        #[arg(long, value_name = "IRI")]
        process: String,
        #[arg(long, value_name = "IRI")]
        formula: Option<String>,
        /// Also list bindings from outside the process context.
        #[arg(long)]
        unfiltered: bool,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Expected units against the units of bound data elements.
    CheckUnits {
        #[arg(long, value_name = "IRI")]
        process: Option<String>,
        /// Also report variables without an expected unit.
        #[arg(long)]
        strict: bool,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Variables without in-context data.
    CheckData {
        #[arg(long, value_name = "IRI")]
        process: Option<String>,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// All checks over all process operators.
    Verify {
        /// Write the JSON report here.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Evaluate the interdependencies of a process.
    Evaluate {
        #[arg(long, value_name = "IRI")]
        process: String,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Outcome { code, stdout, stderr: String::new() }
    }

    fn error(code: i32, message: impl std::fmt::Display) -> Self {
        Outcome { code, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

pub struct Session {
    pub model: ProcessModel,
    pub prefixes: Prefixes,
    pub inputs: Vec<String>,
}

/// Reads, merges and normalizes the input files.
pub fn load_session(files: &[PathBuf], aliases: Option<&Path>) -> Result<Session, Outcome> {
    let mut table = AliasTable::builtin();
    if let Some(path) = aliases {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Outcome::error(EXIT_INPUT, format!("cannot read {}: {e}", path.display())))?;
        table.extend_from_str(&text).map_err(|e| Outcome::error(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    }
    let mut sources = Vec::with_capacity(files.len());
    for path in files {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Outcome::error(EXIT_INPUT, format!("cannot read {}: {e}", path.display())))?;
        sources.push(Source::new(path.display().to_string(), text));
    }
    let loaded = load_sources(&sources, &table, ModelConfig::default()).map_err(|e| Outcome::error(EXIT_INPUT, e))?;
    Ok(Session {
        model: loaded.model,
        prefixes: Prefixes::new(loaded.prefixes),
        inputs: files.iter().map(|p| p.display().to_string()).collect(),
    })
}

impl Session {
    fn operator(&self, name: &str) -> Result<&ProcessOperator, Outcome> {
        let iri = self.prefixes.expand(name).map_err(|e| Outcome::error(EXIT_UNKNOWN, e))?;
        self.model
            .operator(&Term::iri(&iri))
            .ok_or_else(|| Outcome::error(EXIT_UNKNOWN, format!("unknown process operator {name}")))
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let aliases = cli.aliases.as_deref();
    let result = match &cli.command {
        Command::Filter { process, formula, unfiltered, files } => {
            load_session(files, aliases).and_then(|s| cmd_filter(&s, process, formula.as_deref(), *unfiltered))
        }
        Command::CheckUnits { process, strict, files } => {
            load_session(files, aliases).and_then(|s| cmd_check_units(&s, process.as_deref(), *strict))
        }
        Command::CheckData { process, files } => {
            load_session(files, aliases).and_then(|s| cmd_check_data(&s, process.as_deref()))
        }
        Command::Verify { json, files } => return cmd_verify(files, aliases, json.as_deref()),
        Command::Evaluate { process, files } => load_session(files, aliases).and_then(|s| cmd_evaluate(&s, process)),
    };
    result.unwrap_or_else(|e| e)
}

pub fn cmd_filter(s: &Session, process: &str, formula: Option<&str>, unfiltered: bool) -> Result<Outcome, Outcome> {
    let op = s.operator(process)?;
    let deps: Vec<&Interdependency> = match formula {
        Some(f) => {
            let iri = s.prefixes.expand(f).map_err(|e| Outcome::error(EXIT_UNKNOWN, e))?;
            let dep = op
                .interdependency(&Term::iri(iri))
                .ok_or_else(|| Outcome::error(EXIT_UNKNOWN, format!("{f} is not an interdependency of {process}")))?;
            vec![dep]
        }
        None => op.interdependencies.iter().collect(),
    };
    if deps.is_empty() {
        return Ok(Outcome::ok(EXIT_OK, format!("no interdependencies for {}\n", s.prefixes.compact(&key(&op.iri)))));
    }
    let mut out = String::new();
    for (i, dep) in deps.iter().enumerate() {
        let rows = resolve_bindings(&s.model, &op.iri, &dep.expression, !unfiltered)
            .map_err(|e| Outcome::error(EXIT_UNKNOWN, e))?;
        let mut t = Table::new(["Variable", "Data Element", "Filtered"]);
        for b in &rows {
            t.row([
                s.prefixes.compact(&key(&b.variable)),
                s.prefixes.compact(&key(&b.data_element)),
                tick(b.in_context).into(),
            ]);
        }
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("formula {}\n", s.prefixes.compact(&key(&dep.root))));
        out.push_str(&t.render());
    }
    Ok(Outcome::ok(EXIT_OK, out))
}

pub fn cmd_check_units(s: &Session, process: Option<&str>, strict: bool) -> Result<Outcome, Outcome> {
    let scope = match process {
        Some(p) => UnitScope::Operator(s.operator(p)?.iri.clone()),
        None => UnitScope::All,
    };
    let findings = check_units(&s.model, &scope, strict).map_err(|e| Outcome::error(EXIT_UNKNOWN, e))?;
    let rows: Vec<_> = findings.iter().map(unit_row).collect();
    let code = if rows.is_empty() { EXIT_OK } else { EXIT_FINDINGS };
    Ok(Outcome::ok(code, unit_table(&rows, &s.prefixes).render()))
}

pub fn cmd_check_data(s: &Session, process: Option<&str>) -> Result<Outcome, Outcome> {
    let ops: Vec<Term> = match process {
        Some(p) => vec![s.operator(p)?.iri.clone()],
        None => s.model.operators().map(|o| o.iri.clone()).collect(),
    };
    let (mut rows, mut warnings) = (Vec::new(), Vec::new());
    for op in &ops {
        let report = check_data_availability(&s.model, op).map_err(|e| Outcome::error(EXIT_UNKNOWN, e))?;
        rows.extend(availability_rows(&report));
        warnings.extend(report::availability_warnings(&report));
    }
    let stderr: String = warnings.iter().map(|w| report::warning_line(w, &s.prefixes)).collect();
    let code = if rows.is_empty() { EXIT_OK } else { EXIT_FINDINGS };
    Ok(Outcome { code, stdout: availability_table(&rows, &s.prefixes).render(), stderr })
}

pub fn cmd_verify(files: &[PathBuf], aliases: Option<&Path>, json: Option<&Path>) -> Outcome {
    let inputs: Vec<String> = files.iter().map(|p| p.display().to_string()).collect();
    let (report, mut outcome) = match load_session(files, aliases) {
        Ok(s) => {
            let report = Report::build(&s.model, s.inputs, &s.prefixes);
            let code = match report.verdict {
                Verdict::Consistent => EXIT_OK,
                Verdict::Inconsistent => EXIT_FINDINGS,
                Verdict::Error => EXIT_INPUT,
            };
            let stdout = report.render();
            (report, Outcome::ok(code, stdout))
        }
        Err(failure) => {
            let message = failure.stderr.trim_end().trim_start_matches("error: ").to_owned();
            (Report::failed(inputs, message), failure)
        }
    };
    if let Some(path) = json {
        let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
        if let Err(e) = std::fs::write(path, text) {
            outcome.code = EXIT_INPUT;
            outcome.stderr.push_str(&format!("error: cannot write {}: {e}\n", path.display()));
        }
    }
    outcome
}

pub fn cmd_evaluate(s: &Session, process: &str) -> Result<Outcome, Outcome> {
    let op = s.operator(process)?;
    let ev = evaluate_operator::<f64>(&s.model, &op.iri).map_err(|e| Outcome::error(EXIT_UNKNOWN, e))?;
    let rows = evaluation_rows(&ev);
    let p = &s.prefixes;
    let mut out = String::new();
    if rows.iter().all(|r| r.status == EvaluationStatus::Skipped) {
        out.push_str(&format!("no evaluable interdependencies for {}\n", p.compact(&key(&op.iri))));
    }
    let mut code = EXIT_OK;
    for r in &rows {
        let detail = report::evaluation_detail(r, p);
        match r.status {
            EvaluationStatus::Ok => {
                out.push_str(&detail);
                out.push('\n');
                for i in &r.inputs {
                    let unit = i.unit.as_deref().map(|u| format!(" [{}]", unit_label(u, p))).unwrap_or_default();
                    out.push_str(&format!(
                        "  {} = {}{unit} from {}\n",
                        p.compact(&i.variable),
                        report::format_value(i.value),
                        p.compact(&i.data_element)
                    ));
                }
            }
            EvaluationStatus::Refused | EvaluationStatus::Failed => {
                code = EXIT_FINDINGS;
                let verb = if r.status == EvaluationStatus::Refused { "refused" } else { "failed" };
                out.push_str(&format!("{} {verb}: {detail}\n", p.compact(&r.formula)));
            }
            EvaluationStatus::Skipped => {
                out.push_str(&format!("{} skipped: {detail}\n", p.compact(&r.formula)));
            }
        }
    }
    Ok(Outcome::ok(code, out))
}
