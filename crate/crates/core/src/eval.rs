//! Numeric evaluation of `eq(target, rhs)` interdependencies against the
//! in-context data bindings of a process operator.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::model::{ArithOp, CdSymbol, Interdependency, OmExpression, ProcessModel};
use crate::rdf::Term;
use crate::scalar::Scalar;
use crate::verify::{
    check_data_availability, check_units, filter_context_data, AmbiguityWarning, AvailabilityFinding,
    StructuralFinding, UnitFinding, UnitScope, VerifyError,
};

/// Value loaded for one variable from its data element.
#[derive(Debug, Clone, PartialEq)]
pub struct Binding<T> {
    pub value: T,
    pub unit: Option<String>,
    pub data_element: Term,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BindingEnvironment<T> {
    entries: BTreeMap<Term, Binding<T>>,
}

impl<T> Default for BindingEnvironment<T> {
    fn default() -> Self {
        BindingEnvironment { entries: BTreeMap::new() }
    }
}

impl<T: Scalar> BindingEnvironment<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds or replaces the binding of `variable`.
    pub fn bind(&mut self, variable: Term, binding: Binding<T>) {
        self.entries.insert(variable, binding);
    }

    /// Binds a bare value with a synthetic data element (tests, ad-hoc use).
    pub fn bind_value(&mut self, variable: Term, value: T) {
        let data_element = Term::BlankNode(format!("value-of-{variable}"));
        self.bind(variable, Binding { value, unit: None, data_element });
    }

    pub fn get(&self, variable: &Term) -> Option<&Binding<T>> {
        self.entries.get(variable)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Term, &Binding<T>)> + '_ {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationResult<T> {
    pub formula: Option<Term>,
    pub target: Term,
    pub value: T,
    /// The target variable's expected unit, passed through unchanged.
    pub unit: Option<String>,
    pub inputs: Vec<(Term, Binding<T>)>,
}

/// Why a formula was not evaluated although it is well-formed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Refusal {
    MissingData(AvailabilityFinding),
    Structural(StructuralFinding),
    Unit(UnitFinding),
    Ambiguous(AmbiguityWarning),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EvalError {
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("variable {variable} is bound to several in-context data elements: {data_elements:?}")]
    AmbiguousBinding { variable: Term, data_elements: Vec<Term> },
    #[error("variable {0} has no in-context data element")]
    MissingBinding(Term),
    #[error("data element {data_element} (for {variable}) carries no value")]
    MissingValue { variable: Term, data_element: Term },
    #[error("data element {data_element} has non-numeric value {lexical:?}")]
    NonNumericValue { data_element: Term, lexical: String },
    #[error("constant {0:?} is not numeric")]
    NonNumericConstant(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("symbol {0} cannot be evaluated")]
    UnknownSymbol(CdSymbol),
    #[error("{symbol} expects {expected} arguments, found {found}")]
    Arity { symbol: CdSymbol, expected: &'static str, found: usize },
    #[error("variable {0} is unbound")]
    UnboundVariable(Term),
    #[error("formula is not of the form eq(variable, expression)")]
    NotAnEquation,
    #[error("evaluation produced a non-finite value")]
    NonFinite,
    #[error("evaluation refused: {} blocking finding(s)", .0.len())]
    Refused(Vec<Refusal>),
}

/// Loads the unique in-context value for every non-target variable of `formula`.
pub fn build_environment<T: Scalar>(
    model: &ProcessModel,
    operator: &Term,
    formula: &OmExpression,
) -> Result<BindingEnvironment<T>, EvalError> {
    let context = filter_context_data(model, operator)?;
    let target = formula.as_assignment().and_then(|(t, _)| t.node()).cloned();
    let mut env = BindingEnvironment::new();
    for variable in formula.variables() {
        if Some(&variable) == target.as_ref() {
            continue;
        }
        let candidates: Vec<Term> =
            model.data_elements_for(&variable).into_iter().filter(|d| context.contains(d)).cloned().collect();
        let de = match candidates.as_slice() {
            [de] => de.clone(),
            [] => return Err(EvalError::MissingBinding(variable)),
            _ => return Err(EvalError::AmbiguousBinding { variable, data_elements: candidates }),
        };
        let lexical = model
            .data_element(&de)
            .and_then(|d| d.value.as_ref())
            .map(|l| l.lexical.clone())
            .ok_or_else(|| EvalError::MissingValue { variable: variable.clone(), data_element: de.clone() })?;
        let value = T::parse_lexical(&lexical)
            .ok_or_else(|| EvalError::NonNumericValue { data_element: de.clone(), lexical })?;
        let units = model.unit_classes_of(&de);
        let unit = match model.expected_unit(&variable) {
            Some(u) if units.contains(&u) => Some(u),
            _ => model.types().most_specific(&units).into_iter().next(),
        };
        env.bind(variable, Binding { value, unit, data_element: de });
    }
    Ok(env)
}

/// Evaluates `eq(target, rhs)` by computing `rhs` in `T`.
pub fn evaluate<T: Scalar>(
    formula: &OmExpression,
    env: &BindingEnvironment<T>,
) -> Result<EvaluationResult<T>, EvalError> {
    let (target, rhs) = formula.as_assignment().ok_or(EvalError::NotAnEquation)?;
    let OmExpression::Variable { node: target, expected_unit } = target else {
        return Err(EvalError::NotAnEquation);
    };
    let value = eval_expr(rhs, env)?;
    let used: BTreeSet<Term> = rhs.variables();
    let inputs = used.into_iter().filter_map(|v| env.get(&v).map(|b| (v.clone(), b.clone()))).collect();
    Ok(EvaluationResult {
        formula: formula.node().cloned(),
        target: target.clone(),
        value,
        unit: expected_unit.clone(),
        inputs,
    })
}

fn finite<T: Scalar>(v: T) -> Result<T, EvalError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite)
    }
}

fn eval_expr<T: Scalar>(expr: &OmExpression, env: &BindingEnvironment<T>) -> Result<T, EvalError> {
    match expr {
        OmExpression::Constant(lit) => {
            T::parse_lexical(&lit.lexical).ok_or_else(|| EvalError::NonNumericConstant(lit.lexical.clone()))
        }
        OmExpression::Variable { node, .. } => {
            env.get(node).map(|b| b.value).ok_or_else(|| EvalError::UnboundVariable(node.clone()))
        }
        OmExpression::Application { operator, arguments, .. } => {
            let op = operator.op().ok_or_else(|| EvalError::UnknownSymbol(operator.clone()))?;
            let args = arguments.iter().map(|a| eval_expr(a, env)).collect::<Result<Vec<T>, _>>()?;
            let arity =
                |expected: &'static str| EvalError::Arity { symbol: operator.clone(), expected, found: args.len() };
            let v = match op {
                ArithOp::Plus | ArithOp::Times if args.is_empty() => return Err(arity("at least 1")),
                ArithOp::Plus => args.iter().skip(1).fold(args[0], |acc, &x| acc + x),
                ArithOp::Times => args.iter().skip(1).fold(args[0], |acc, &x| acc * x),
                ArithOp::Minus | ArithOp::Divide | ArithOp::Power if args.len() != 2 => return Err(arity("2")),
                ArithOp::Minus => args[0] - args[1],
                ArithOp::Divide => {
                    if args[1].is_zero() {
                        return Err(EvalError::DivisionByZero);
                    }
                    args[0] / args[1]
                }
                ArithOp::Power => args[0].powf(args[1]),
                ArithOp::Eq => return Err(EvalError::UnknownSymbol(operator.clone())),
            };
            finite(v)
        }
    }
}

/// Why a formula was not attempted at all.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SkipReason {
    NotAnEquation,
    UnknownSymbols(Vec<CdSymbol>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormulaFailure {
    pub formula: Term,
    pub error: EvalError,
}

/// Everything that happened while evaluating one operator's interdependencies.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorEvaluation<T> {
    pub operator: Term,
    pub results: Vec<EvaluationResult<T>>,
    pub skipped: Vec<(Term, SkipReason)>,
    pub failures: Vec<FormulaFailure>,
}

impl<T> OperatorEvaluation<T> {
    pub fn is_refused(&self) -> bool {
        !self.failures.is_empty()
    }
}

/// Findings that stop `dep` from being evaluated for `operator`.
fn blocking_findings(
    dep: &Interdependency,
    availability: &crate::verify::AvailabilityReport,
    units: &[UnitFinding],
) -> Vec<Refusal> {
    let mut out = Vec::new();
    out.extend(availability.findings.iter().filter(|f| f.formula == dep.root).cloned().map(Refusal::MissingData));
    out.extend(
        availability
            .structural
            .iter()
            .filter(|s| s.formula.as_ref().is_none_or(|f| f == &dep.root))
            .cloned()
            .map(Refusal::Structural),
    );
    out.extend(availability.ambiguities.iter().filter(|a| a.formula == dep.root).cloned().map(Refusal::Ambiguous));
    let vars = dep.expression.variables();
    out.extend(units.iter().filter(|u| vars.contains(u.variable())).cloned().map(Refusal::Unit));
    out
}

/// Runs the availability and unit checks for `operator`, then evaluates each
/// of its eq-rooted interdependencies that has no blocking finding.
pub fn evaluate_operator<T: Scalar>(
    model: &ProcessModel,
    operator: &Term,
) -> Result<OperatorEvaluation<T>, VerifyError> {
    let op = model.operator(operator).ok_or_else(|| VerifyError::UnknownOperator(operator.clone()))?;
    let availability = check_data_availability(model, operator)?;
    let units = check_units(model, &UnitScope::Operator(operator.clone()), false)?;
    let mut out = OperatorEvaluation { operator: operator.clone(), results: vec![], skipped: vec![], failures: vec![] };
    for dep in &op.interdependencies {
        if dep.expression.as_assignment().is_none() {
            out.skipped.push((dep.root.clone(), SkipReason::NotAnEquation));
            continue;
        }
        let unknown = dep.expression.unknown_symbols();
        if !unknown.is_empty() {
            out.skipped.push((dep.root.clone(), SkipReason::UnknownSymbols(unknown.into_iter().cloned().collect())));
            continue;
        }
        let blocking = blocking_findings(dep, &availability, &units);
        if !blocking.is_empty() {
            out.failures.push(FormulaFailure { formula: dep.root.clone(), error: EvalError::Refused(blocking) });
            continue;
        }
        match build_environment::<T>(model, operator, &dep.expression).and_then(|env| evaluate(&dep.expression, &env)) {
            Ok(r) => out.results.push(r),
            Err(error) => out.failures.push(FormulaFailure { formula: dep.root.clone(), error }),
        }
    }
    Ok(out)
}
