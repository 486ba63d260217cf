//! Consistency checks over a loaded process model: context filtering of data
//! bindings, unit consistency, and data availability for interdependencies.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::model::{OmExpression, ProcessModel};
use crate::rdf::Term;
use crate::vocab::iri;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("unknown process operator {0}")]
    UnknownOperator(Term),
}

/// The four ways a data element can belong to an operator's context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ContextBranch {
    Output,
    Input,
    AssignedResource,
    Operator,
}

/// Data elements reachable from one process operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessContext {
    pub operator: Term,
    /// Each member with the branches that admit it.
    pub members: BTreeMap<Term, BTreeSet<ContextBranch>>,
}

impl ProcessContext {
    pub fn contains(&self, data_element: &Term) -> bool {
        self.members.contains_key(data_element)
    }

    pub fn data_elements(&self) -> BTreeSet<Term> {
        self.members.keys().cloned().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Collects the data elements of the operator's outputs, inputs, assigned
/// resources and of the operator itself. Nothing else is admitted.
pub fn filter_context_data(model: &ProcessModel, operator: &Term) -> Result<ProcessContext, VerifyError> {
    let op = model.operator(operator).ok_or_else(|| VerifyError::UnknownOperator(operator.clone()))?;
    let g = model.graph();
    let has_de = Term::iri(iri::HAS_DATA_ELEMENT);
    let mut members: BTreeMap<Term, BTreeSet<ContextBranch>> = BTreeMap::new();
    let mut admit = |holder: &Term, branch: ContextBranch| {
        for de in g.objects(holder, &has_de) {
            members.entry(de.clone()).or_default().insert(branch);
        }
    };
    for s in &op.outputs {
        admit(s, ContextBranch::Output);
    }
    for s in &op.inputs {
        admit(s, ContextBranch::Input);
    }
    for r in &op.resources {
        admit(r, ContextBranch::AssignedResource);
    }
    admit(operator, ContextBranch::Operator);
    Ok(ProcessContext { operator: operator.clone(), members })
}

/// One `ParX:isDataFor` link between a data element and a formula variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct VariableBinding {
    pub variable: Term,
    pub data_element: Term,
    pub in_context: bool,
}

/// Binding rows for every variable of `formula`, sorted by variable then data
/// element. With `filtered`, only in-context rows are kept.
pub fn resolve_bindings(
    model: &ProcessModel,
    operator: &Term,
    formula: &OmExpression,
    filtered: bool,
) -> Result<Vec<VariableBinding>, VerifyError> {
    let context = filter_context_data(model, operator)?;
    let mut rows = Vec::new();
    for variable in formula.variables() {
        for de in model.data_elements_for(&variable) {
            let in_context = context.contains(de);
            if filtered && !in_context {
                continue;
            }
            rows.push(VariableBinding { variable: variable.clone(), data_element: de.clone(), in_context });
        }
    }
    rows.sort();
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnitScope {
    All,
    Operator(Term),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum UnitFinding {
    /// The data element's unit classes do not include the expected unit.
    Mismatch {
        variable: Term,
        expected_unit: String,
        actual_type: Term,
        actual_unit: String,
        /// All most-specific unit classes found, `actual_unit` being the first.
        actual_units: BTreeSet<String>,
        data_element: Term,
    },
    /// The data element has no type description with a unit classification.
    UnitUnknown { variable: Term, expected_unit: String, actual_type: Option<Term>, data_element: Term },
    /// Strict mode only: the variable declares no expected unit.
    NoExpectedUnit { variable: Term },
}

impl UnitFinding {
    pub fn variable(&self) -> &Term {
        match self {
            UnitFinding::Mismatch { variable, .. }
            | UnitFinding::UnitUnknown { variable, .. }
            | UnitFinding::NoExpectedUnit { variable } => variable,
        }
    }

    pub fn data_element(&self) -> Option<&Term> {
        match self {
            UnitFinding::Mismatch { data_element, .. } | UnitFinding::UnitUnknown { data_element, .. } => {
                Some(data_element)
            }
            UnitFinding::NoExpectedUnit { .. } => None,
        }
    }

    pub fn is_mismatch(&self) -> bool {
        matches!(self, UnitFinding::Mismatch { .. })
    }

    pub fn code(&self) -> &'static str {
        match self {
            UnitFinding::Mismatch { .. } => "unit-mismatch",
            UnitFinding::UnitUnknown { .. } => "unit-unknown",
            UnitFinding::NoExpectedUnit { .. } => "no-expected-unit",
        }
    }

    fn sort_key(&self) -> (&Term, Option<&Term>, &'static str) {
        (self.variable(), self.data_element(), self.code())
    }
}

/// Outcome of comparing one (variable, data element) pair.
pub fn classify_unit_pair(
    model: &ProcessModel,
    variable: &Term,
    expected_unit: &str,
    data_element: &Term,
) -> Option<UnitFinding> {
    let tds: Vec<&Term> =
        model.data_element(data_element).map(|de| de.type_descriptions.iter().collect()).unwrap_or_default();
    let units = model.unit_classes_of(data_element);
    if units.is_empty() {
        return Some(UnitFinding::UnitUnknown {
            variable: variable.clone(),
            expected_unit: expected_unit.to_owned(),
            actual_type: tds.first().map(|t| (*t).clone()),
            data_element: data_element.clone(),
        });
    }
    if units.contains(expected_unit) {
        return None;
    }
    let actual_units = model.types().most_specific(&units);
    let actual_unit = actual_units.iter().next().expect("non-empty unit set").clone();
    let actual_type = tds
        .iter()
        .find(|td| model.type_description(td).is_some_and(|d| d.unit_classes.contains(&actual_unit)))
        .map(|t| (*t).clone())
        .expect("unit class comes from a type description");
    Some(UnitFinding::Mismatch {
        variable: variable.clone(),
        expected_unit: expected_unit.to_owned(),
        actual_type,
        actual_unit,
        actual_units,
        data_element: data_element.clone(),
    })
}

/// Compares each variable's expected unit with the unit classes of the data
/// elements bound to it.
///
/// With [`UnitScope::All`] every `ParX:isDataFor` pair in the graph is checked.
/// With an operator scope only the variables of that operator's
/// interdependencies and the data elements in its context are considered.
/// `strict` additionally reports variables that declare no expected unit.
pub fn check_units(model: &ProcessModel, scope: &UnitScope, strict: bool) -> Result<Vec<UnitFinding>, VerifyError> {
    let (variables, context) = match scope {
        UnitScope::All => {
            let g = model.graph();
            let mut vars: BTreeSet<Term> = g
                .matching(None, Some(&Term::iri(iri::EXPECTS_UNIT)), None)
                .into_iter()
                .map(|t| t.subject.clone())
                .collect();
            vars.extend(
                g.subjects(&Term::iri(crate::rdf::vocab_rdf::TYPE), &Term::iri(iri::VARIABLE)).into_iter().cloned(),
            );
            for op in model.operators() {
                for dep in &op.interdependencies {
                    vars.extend(dep.expression.variables());
                }
            }
            (vars, None)
        }
        UnitScope::Operator(op_iri) => {
            let op = model.operator(op_iri).ok_or_else(|| VerifyError::UnknownOperator(op_iri.clone()))?;
            let vars: BTreeSet<Term> = op.interdependencies.iter().flat_map(|d| d.expression.variables()).collect();
            (vars, Some(filter_context_data(model, op_iri)?))
        }
    };
    let mut findings = Vec::new();
    for variable in &variables {
        let Some(expected) = model.expected_unit(variable) else {
            if strict {
                findings.push(UnitFinding::NoExpectedUnit { variable: variable.clone() });
            }
            continue;
        };
        for de in model.data_elements_for(variable) {
            if context.as_ref().is_some_and(|c| !c.contains(de)) {
                continue;
            }
            findings.extend(classify_unit_pair(model, variable, &expected, de));
        }
    }
    findings.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()).then_with(|| a.cmp(b)));
    Ok(findings)
}

/// A formula variable with no in-context data element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct AvailabilityFinding {
    pub process: Term,
    pub missing_variable: Term,
    pub formula: Term,
}

/// The step of the availability workflow that could not be completed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum StructuralCode {
    /// Step 1: the operator has no output state.
    NoOutputState,
    /// Step 2: no output state carries a data element.
    OutputWithoutDataElement,
    /// Step 3: no output data element is bound to a result variable of the formula.
    NoResultBinding,
}

impl StructuralCode {
    pub fn as_str(self) -> &'static str {
        match self {
            StructuralCode::NoOutputState => "no-output-state",
            StructuralCode::OutputWithoutDataElement => "output-without-data-element",
            StructuralCode::NoResultBinding => "no-result-binding",
        }
    }

    pub fn step(self) -> u8 {
        match self {
            StructuralCode::NoOutputState => 1,
            StructuralCode::OutputWithoutDataElement => 2,
            StructuralCode::NoResultBinding => 3,
        }
    }
}

impl fmt::Display for StructuralCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct StructuralFinding {
    pub process: Term,
    /// `None` when the failure concerns the operator as a whole (steps 1–2).
    pub formula: Option<Term>,
    pub code: StructuralCode,
}

/// Several in-context data elements for one variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct AmbiguityWarning {
    pub process: Term,
    pub formula: Term,
    pub variable: Term,
    pub data_elements: Vec<Term>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AvailabilityReport {
    pub findings: Vec<AvailabilityFinding>,
    pub structural: Vec<StructuralFinding>,
    pub ambiguities: Vec<AmbiguityWarning>,
}

impl AvailabilityReport {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn blocks(&self, formula: &Term) -> bool {
        self.findings.iter().any(|f| &f.formula == formula)
            || self.structural.iter().any(|s| s.formula.as_ref().is_none_or(|f| f == formula))
            || self.ambiguities.iter().any(|a| &a.formula == formula)
    }
}

/// Checks that every variable of each interdependency of `operator` has
/// in-context data.
///
/// Follows the output-driven workflow: the operator must have output states
/// (step 1) carrying data elements (step 2) that are bound to the formula's
/// result variable (step 3); only then is every variable of the formula tree
/// checked against the operator's context (step 4).
pub fn check_data_availability(model: &ProcessModel, operator: &Term) -> Result<AvailabilityReport, VerifyError> {
    let op = model.operator(operator).ok_or_else(|| VerifyError::UnknownOperator(operator.clone()))?;
    let mut report = AvailabilityReport::default();
    if op.interdependencies.is_empty() {
        return Ok(report);
    }
    let structural =
        |formula: Option<&Term>, code| StructuralFinding { process: operator.clone(), formula: formula.cloned(), code };
    if op.outputs.is_empty() {
        report.structural.push(structural(None, StructuralCode::NoOutputState));
        return Ok(report);
    }
    let has_de = Term::iri(iri::HAS_DATA_ELEMENT);
    let output_des: BTreeSet<&Term> = op.outputs.iter().flat_map(|s| model.graph().objects(s, &has_de)).collect();
    if output_des.is_empty() {
        report.structural.push(structural(None, StructuralCode::OutputWithoutDataElement));
        return Ok(report);
    }
    let context = filter_context_data(model, operator)?;
    let is_data_for = Term::iri(iri::IS_DATA_FOR);
    for dep in &op.interdependencies {
        let results = dep.result_variables();
        let bound = output_des
            .iter()
            .any(|de| model.graph().objects(de, &is_data_for).into_iter().any(|v| results.contains(v)));
        if !bound {
            report.structural.push(structural(Some(&dep.root), StructuralCode::NoResultBinding));
            continue;
        }
        for variable in dep.expression.variables() {
            let in_context: Vec<Term> =
                model.data_elements_for(&variable).into_iter().filter(|de| context.contains(de)).cloned().collect();
            match in_context.len() {
                0 => report.findings.push(AvailabilityFinding {
                    process: operator.clone(),
                    missing_variable: variable,
                    formula: dep.root.clone(),
                }),
                1 => {}
                _ => report.ambiguities.push(AmbiguityWarning {
                    process: operator.clone(),
                    formula: dep.root.clone(),
                    variable,
                    data_elements: in_context,
                }),
            }
        }
    }
    report.findings.sort();
    report.findings.dedup();
    report.structural.sort();
    report.ambiguities.sort();
    Ok(report)
}
