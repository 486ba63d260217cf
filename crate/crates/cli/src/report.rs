//! The machine-readable verification report and its text rendering.
//!
//! Rows hold full IRIs; rendering compacts them with the prefixes stored in
//! the report itself, so a report read back from JSON renders identically.

use std::collections::BTreeMap;

use parx_core::eval::{evaluate_operator, EvalError, Refusal, SkipReason};
use parx_core::model::ModelWarning;
use parx_core::verify::{
    check_data_availability, check_units, resolve_bindings, AvailabilityReport, UnitFinding, UnitScope,
};
use parx_core::vocab::UNECE;
use parx_core::{ProcessModel, Term};
use serde::{Deserialize, Serialize};

use crate::names::Prefixes;
use crate::table::Table;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Consistent,
    Inconsistent,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: String,
    /// Creation time; the only field that differs between identical runs.
    pub generated_at: String,
    pub inputs: Vec<String>,
    pub prefixes: BTreeMap<String, String>,
    pub verdict: Verdict,
    pub operators: Vec<String>,
    pub context_bindings: Vec<ContextSection>,
    pub unit_findings: Vec<UnitRow>,
    pub availability_findings: Vec<AvailabilityRow>,
    pub warnings: Vec<WarningRow>,
    pub evaluations: Vec<EvaluationRow>,
    pub errors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextSection {
    pub process: String,
    pub formula: String,
    pub bindings: Vec<BindingRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BindingRow {
    pub variable: String,
    pub data_element: String,
    pub in_context: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitRow {
    /// `unit-mismatch`, `unit-unknown` or `no-expected-unit`.
    pub code: String,
    pub variable: String,
    pub expected_unit: Option<String>,
    pub actual_unit: Option<String>,
    pub actual_units: Vec<String>,
    pub actual_type: Option<String>,
    pub data_element: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AvailabilityRow {
    pub missing_variable: String,
    pub process: String,
    pub formula: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WarningRow {
    pub code: String,
    pub subject: String,
    pub related: Vec<String>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvaluationStatus {
    Ok,
    Refused,
    Failed,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRow {
    pub process: String,
    pub formula: String,
    pub status: EvaluationStatus,
    pub target: Option<String>,
    pub value: Option<f64>,
    pub unit: Option<String>,
    pub inputs: Vec<InputRow>,
    pub reasons: Vec<Reason>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputRow {
    pub variable: String,
    pub data_element: String,
    pub value: f64,
    pub unit: Option<String>,
}

/// Why an evaluation did not produce a value: a code plus the nodes involved.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reason {
    pub code: String,
    pub nodes: Vec<String>,
    pub note: Option<String>,
}

pub fn key(term: &Term) -> String {
    match term.as_iri() {
        Some(iri) => iri.to_owned(),
        None => term.to_string(),
    }
}

pub fn tool_name() -> String {
    format!("parx-verify {}", env!("CARGO_PKG_VERSION"))
}

/// RFC 3339 time, honouring `SOURCE_DATE_EPOCH` for reproducible output.
pub fn timestamp() -> String {
    let now = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.parse::<u64>().ok())
        .map(|secs| std::time::UNIX_EPOCH + std::time::Duration::from_secs(secs))
        .unwrap_or_else(std::time::SystemTime::now);
    humantime::format_rfc3339_seconds(now).to_string()
}

impl Report {
    pub fn empty(inputs: Vec<String>, prefixes: &Prefixes) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            tool: tool_name(),
            generated_at: timestamp(),
            inputs,
            prefixes: prefixes.as_map().clone(),
            verdict: Verdict::Consistent,
            operators: vec![],
            context_bindings: vec![],
            unit_findings: vec![],
            availability_findings: vec![],
            warnings: vec![],
            evaluations: vec![],
            errors: vec![],
        }
    }

    /// A report for inputs that could not be loaded.
    pub fn failed(inputs: Vec<String>, error: String) -> Self {
        let mut r = Report::empty(inputs, &Prefixes::default());
        r.verdict = Verdict::Error;
        r.errors.push(error);
        r
    }

    /// Runs every check on every operator of `model`.
    pub fn build(model: &ProcessModel, inputs: Vec<String>, prefixes: &Prefixes) -> Self {
        let mut r = Report::empty(inputs, prefixes);
        r.warnings.extend(model.warnings().iter().map(model_warning_row));
        match check_units(model, &UnitScope::All, false) {
            Ok(findings) => r.unit_findings = findings.iter().map(unit_row).collect(),
            Err(e) => r.errors.push(e.to_string()),
        }
        // operators are checked on scoped threads and joined in model order
        let ops: Vec<&Term> = model.operators().map(|o| &o.iri).collect();
        let sections: Vec<OperatorSection> = std::thread::scope(|scope| {
            let handles: Vec<_> = ops.iter().map(|op| scope.spawn(|| operator_section(model, op))).collect();
            handles.into_iter().map(|h| h.join().expect("operator check panicked")).collect()
        });
        for (op, sec) in ops.iter().zip(sections) {
            r.operators.push(key(op));
            r.context_bindings.extend(sec.context_bindings);
            r.availability_findings.extend(sec.availability_findings);
            r.warnings.extend(sec.warnings);
            r.evaluations.extend(sec.evaluations);
            r.errors.extend(sec.errors);
        }
        r.verdict = if !r.errors.is_empty() {
            Verdict::Error
        } else if r.unit_findings.iter().any(|u| u.code == "unit-mismatch") || !r.availability_findings.is_empty() {
            Verdict::Inconsistent
        } else {
            Verdict::Consistent
        };
        r
    }

    pub fn mismatch_count(&self) -> usize {
        self.unit_findings.iter().filter(|u| u.code == "unit-mismatch").count()
    }

    /// Human-readable summary; depends only on the report's contents.
    pub fn render(&self) -> String {
        let p = Prefixes::new(self.prefixes.clone());
        let mut out = String::new();
        out.push_str(&format!(
            "{}: {} input file(s), {} process operator(s)\n",
            self.tool,
            self.inputs.len(),
            self.operators.len()
        ));
        for e in &self.errors {
            out.push_str(&format!("error: {e}\n"));
        }
        if !self.context_bindings.is_empty() {
            let mut t = Table::new(["Process", "Formula", "Variable", "Data Element", "Filtered"]);
            for s in &self.context_bindings {
                for b in &s.bindings {
                    t.row([
                        p.compact(&s.process),
                        p.compact(&s.formula),
                        p.compact(&b.variable),
                        p.compact(&b.data_element),
                        tick(b.in_context).to_owned(),
                    ]);
                }
            }
            section(&mut out, "Context bindings", &t);
        }
        section(&mut out, "Unit consistency", &unit_table(&self.unit_findings, &p));
        section(&mut out, "Data availability", &availability_table(&self.availability_findings, &p));
        if !self.evaluations.is_empty() {
            let mut t = Table::new(["Process", "Formula", "Status", "Result"]);
            for e in &self.evaluations {
                t.row([
                    p.compact(&e.process),
                    p.compact(&e.formula),
                    status_str(e.status).to_owned(),
                    evaluation_detail(e, &p),
                ]);
            }
            section(&mut out, "Evaluation", &t);
        }
        if !self.warnings.is_empty() {
            section(&mut out, "Warnings", &warning_table(&self.warnings, &p));
        }
        let verdict = match self.verdict {
            Verdict::Consistent => "consistent",
            Verdict::Inconsistent => "inconsistent",
            Verdict::Error => "error",
        };
        out.push_str(&format!(
            "\nverdict: {verdict} ({} unit mismatch(es), {} availability finding(s), {} error(s))\n",
            self.mismatch_count(),
            self.availability_findings.len(),
            self.errors.len()
        ));
        out
    }
}

#[derive(Default)]
struct OperatorSection {
    context_bindings: Vec<ContextSection>,
    availability_findings: Vec<AvailabilityRow>,
    warnings: Vec<WarningRow>,
    evaluations: Vec<EvaluationRow>,
    errors: Vec<String>,
}

fn operator_section(model: &ProcessModel, op: &Term) -> OperatorSection {
    let mut sec = OperatorSection::default();
    let Some(operator) = model.operator(op) else {
        sec.errors.push(format!("unknown process operator {op}"));
        return sec;
    };
    for dep in &operator.interdependencies {
        match resolve_bindings(model, op, &dep.expression, false) {
            Ok(rows) => sec.context_bindings.push(ContextSection {
                process: key(op),
                formula: key(&dep.root),
                bindings: rows
                    .iter()
                    .map(|b| BindingRow {
                        variable: key(&b.variable),
                        data_element: key(&b.data_element),
                        in_context: b.in_context,
                    })
                    .collect(),
            }),
            Err(e) => sec.errors.push(e.to_string()),
        }
    }
    match check_data_availability(model, op) {
        Ok(avail) => {
            sec.availability_findings.extend(availability_rows(&avail));
            sec.warnings.extend(availability_warnings(&avail));
        }
        Err(e) => sec.errors.push(e.to_string()),
    }
    match evaluate_operator::<f64>(model, op) {
        Ok(ev) => sec.evaluations.extend(evaluation_rows(&ev)),
        Err(e) => sec.errors.push(e.to_string()),
    }
    sec
}

fn section(out: &mut String, title: &str, table: &Table) {
    out.push('\n');
    out.push_str(title);
    out.push('\n');
    if table.is_empty() {
        out.push_str("(none)\n");
    } else {
        out.push_str(&table.render());
    }
}

pub fn tick(in_context: bool) -> &'static str {
    if in_context {
        "✓"
    } else {
        "✗"
    }
}

fn status_str(s: EvaluationStatus) -> &'static str {
    match s {
        EvaluationStatus::Ok => "ok",
        EvaluationStatus::Refused => "refused",
        EvaluationStatus::Failed => "failed",
        EvaluationStatus::Skipped => "skipped",
    }
}

/// `SEC` for UNECE codes, the compact name otherwise.
pub fn unit_label(iri: &str, p: &Prefixes) -> String {
    match iri.strip_prefix(UNECE) {
        Some(code) if !code.is_empty() => code.to_owned(),
        _ => p.compact(iri),
    }
}

pub fn format_value(v: f64) -> String {
    format!("{v}")
}

/// `ex:t = 20 [SEC]`
pub fn result_line(target: &str, value: f64, unit: Option<&str>, p: &Prefixes) -> String {
    match unit {
        Some(u) => format!("{} = {} [{}]", p.compact(target), format_value(value), unit_label(u, p)),
        None => format!("{} = {}", p.compact(target), format_value(value)),
    }
}

fn reason_text(r: &Reason, p: &Prefixes) -> String {
    let mut parts = vec![r.code.clone()];
    parts.extend(r.nodes.iter().map(|n| p.compact(n)));
    if let Some(note) = &r.note {
        parts.push(format!("({note})"));
    }
    parts.join(" ")
}

pub fn evaluation_detail(e: &EvaluationRow, p: &Prefixes) -> String {
    match (e.status, &e.target, e.value) {
        (EvaluationStatus::Ok, Some(t), Some(v)) => result_line(t, v, e.unit.as_deref(), p),
        _ => e.reasons.iter().map(|r| reason_text(r, p)).collect::<Vec<_>>().join("; "),
    }
}

pub fn unit_table(rows: &[UnitRow], p: &Prefixes) -> Table {
    let mut t = Table::new(["Variable", "Expected Unit", "Actual Unit", "Data Element", "Finding"]);
    let opt = |s: &Option<String>| s.as_deref().map(|i| p.compact(i)).unwrap_or_else(|| "-".to_owned());
    for u in rows {
        t.row([
            p.compact(&u.variable),
            opt(&u.expected_unit),
            opt(&u.actual_unit),
            opt(&u.data_element),
            u.code.clone(),
        ]);
    }
    t
}

pub fn availability_table(rows: &[AvailabilityRow], p: &Prefixes) -> Table {
    let mut t = Table::new(["Missing Data for Variable", "Process Context", "Formula"]);
    for a in rows {
        t.row([p.compact(&a.missing_variable), p.compact(&a.process), p.compact(&a.formula)]);
    }
    t
}

fn warning_detail(w: &WarningRow, p: &Prefixes) -> String {
    let mut detail: Vec<String> = w.related.iter().map(|r| p.compact(r)).collect();
    detail.extend(w.note.clone());
    detail.join(" ")
}

pub fn warning_table(rows: &[WarningRow], p: &Prefixes) -> Table {
    let mut t = Table::new(["Warning", "Subject", "Detail"]);
    for w in rows {
        t.row([w.code.clone(), p.compact(&w.subject), warning_detail(w, p)]);
    }
    t
}

/// `warning: no-output-state ex:InjectionHP`
pub fn warning_line(w: &WarningRow, p: &Prefixes) -> String {
    let detail = warning_detail(w, p);
    let mut line = format!("warning: {} {}", w.code, p.compact(&w.subject));
    if !detail.is_empty() {
        line.push(' ');
        line.push_str(&detail);
    }
    line + "\n"
}

pub fn unit_row(f: &UnitFinding) -> UnitRow {
    match f {
        UnitFinding::Mismatch { variable, expected_unit, actual_type, actual_unit, actual_units, data_element } => {
            UnitRow {
                code: f.code().to_owned(),
                variable: key(variable),
                expected_unit: Some(expected_unit.clone()),
                actual_unit: Some(actual_unit.clone()),
                actual_units: actual_units.iter().cloned().collect(),
                actual_type: Some(key(actual_type)),
                data_element: Some(key(data_element)),
            }
        }
        UnitFinding::UnitUnknown { variable, expected_unit, actual_type, data_element } => UnitRow {
            code: f.code().to_owned(),
            variable: key(variable),
            expected_unit: Some(expected_unit.clone()),
            actual_unit: None,
            actual_units: vec![],
            actual_type: actual_type.as_ref().map(key),
            data_element: Some(key(data_element)),
        },
        UnitFinding::NoExpectedUnit { variable } => UnitRow {
            code: f.code().to_owned(),
            variable: key(variable),
            expected_unit: None,
            actual_unit: None,
            actual_units: vec![],
            actual_type: None,
            data_element: None,
        },
    }
}

pub fn availability_rows(a: &AvailabilityReport) -> Vec<AvailabilityRow> {
    a.findings
        .iter()
        .map(|f| AvailabilityRow {
            missing_variable: key(&f.missing_variable),
            process: key(&f.process),
            formula: key(&f.formula),
        })
        .collect()
}

pub fn availability_warnings(a: &AvailabilityReport) -> Vec<WarningRow> {
    let mut out: Vec<WarningRow> = a
        .structural
        .iter()
        .map(|s| WarningRow {
            code: s.code.as_str().to_owned(),
            subject: key(&s.process),
            related: s.formula.iter().map(key).collect(),
            note: None,
        })
        .collect();
    out.extend(a.ambiguities.iter().map(|w| WarningRow {
        code: "ambiguous-binding".to_owned(),
        subject: key(&w.process),
        related: std::iter::once(&w.variable).chain(&w.data_elements).map(key).collect(),
        note: None,
    }));
    out
}

pub fn model_warning_row(w: &ModelWarning) -> WarningRow {
    let (related, note) = match w {
        ModelWarning::DanglingReference { predicate, to, .. } => (vec![predicate.clone(), key(to)], None),
        ModelWarning::UndecodableInterdependency { root, error, .. } => (vec![key(root)], Some(error.clone())),
        _ => (vec![], None),
    };
    WarningRow { code: w.code().to_owned(), subject: key(w.subject()), related, note }
}

fn refusal_reason(r: &Refusal) -> Reason {
    match r {
        Refusal::MissingData(f) => {
            Reason { code: "missing-data".into(), nodes: vec![key(&f.missing_variable)], note: None }
        }
        Refusal::Structural(s) => Reason { code: s.code.as_str().into(), nodes: vec![key(&s.process)], note: None },
        Refusal::Unit(u) => {
            let row = unit_row(u);
            Reason {
                code: row.code,
                nodes: std::iter::once(row.variable).chain(row.data_element).collect(),
                note: None,
            }
        }
        Refusal::Ambiguous(a) => Reason {
            code: "ambiguous-binding".into(),
            nodes: std::iter::once(&a.variable).chain(&a.data_elements).map(key).collect(),
            note: None,
        },
    }
}

fn error_reasons(e: &EvalError) -> Vec<Reason> {
    let simple = |code: &str, nodes: Vec<String>| Reason { code: code.into(), nodes, note: None };
    match e {
        EvalError::Refused(rs) => rs.iter().map(refusal_reason).collect(),
        EvalError::MissingValue { variable, data_element } => {
            vec![simple("missing-value", vec![key(variable), key(data_element)])]
        }
        EvalError::MissingBinding(v) => vec![simple("missing-data", vec![key(v)])],
        EvalError::AmbiguousBinding { variable, data_elements } => {
            vec![simple("ambiguous-binding", std::iter::once(variable).chain(data_elements).map(key).collect())]
        }
        EvalError::NonNumericValue { data_element, lexical } => vec![Reason {
            code: "non-numeric-value".into(),
            nodes: vec![key(data_element)],
            note: Some(lexical.clone()),
        }],
        EvalError::UnboundVariable(v) => vec![simple("unbound-variable", vec![key(v)])],
        other => vec![Reason { code: "evaluation-error".into(), nodes: vec![], note: Some(other.to_string()) }],
    }
}

pub fn evaluation_rows(ev: &parx_core::OperatorEvaluation) -> Vec<EvaluationRow> {
    let process = key(&ev.operator);
    let mut rows = Vec::new();
    for r in &ev.results {
        rows.push(EvaluationRow {
            process: process.clone(),
            formula: r.formula.as_ref().map(key).unwrap_or_default(),
            status: EvaluationStatus::Ok,
            target: Some(key(&r.target)),
            value: Some(r.value),
            unit: r.unit.clone(),
            inputs: r
                .inputs
                .iter()
                .map(|(v, b)| InputRow {
                    variable: key(v),
                    data_element: key(&b.data_element),
                    value: b.value,
                    unit: b.unit.clone(),
                })
                .collect(),
            reasons: vec![],
        });
    }
    for f in &ev.failures {
        let status =
            if matches!(f.error, EvalError::Refused(_)) { EvaluationStatus::Refused } else { EvaluationStatus::Failed };
        rows.push(EvaluationRow {
            process: process.clone(),
            formula: key(&f.formula),
            status,
            target: None,
            value: None,
            unit: None,
            inputs: vec![],
            reasons: error_reasons(&f.error),
        });
    }
    for (formula, why) in &ev.skipped {
        let reason = match why {
            SkipReason::NotAnEquation => Reason { code: "not-an-equation".into(), nodes: vec![], note: None },
            SkipReason::UnknownSymbols(s) => Reason {
                code: "unknown-symbols".into(),
                nodes: s.iter().map(|c| c.iri().to_owned()).collect(),
                note: None,
            },
        };
        rows.push(EvaluationRow {
            process: process.clone(),
            formula: key(formula),
            status: EvaluationStatus::Skipped,
            target: None,
            value: None,
            unit: None,
            inputs: vec![],
            reasons: vec![reason],
        });
    }
    rows.sort_by(|a, b| a.formula.cmp(&b.formula));
    rows
}
