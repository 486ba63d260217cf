//! Typed views over a normalized process-model graph: process operators,
//! states, technical resources, data elements, type descriptions and the
//! decoded interdependency formulas.

mod expr;

pub use expr::{collect_variables, decode_expression, ArithOp, CdSymbol, ExprError, OmExpression};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::rdf::{Graph, Literal, Term};
use crate::vocab::{iri, TypeIndex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelConfig {
    /// Predicate carrying the numeric value of a data element (or its type description).
    pub value_predicate: String,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig { value_predicate: iri::VALUE.to_owned() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum StateKind {
    Product,
    Energy,
    Information,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interdependency {
    pub root: Term,
    pub expression: OmExpression,
}

impl Interdependency {
    /// Evaluable formulas are `eq(Variable, rhs)` over registered symbols only.
    pub fn is_evaluable(&self) -> bool {
        self.expression.as_assignment().is_some() && self.expression.unknown_symbols().is_empty()
    }

    /// Variable whose data element an output state is expected to carry.
    pub fn result_variables(&self) -> BTreeSet<Term> {
        match self.expression.as_assignment().and_then(|(target, _)| target.node()) {
            Some(target) => [target.clone()].into_iter().collect(),
            None => self.expression.variables(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessOperator {
    pub iri: Term,
    pub inputs: BTreeSet<Term>,
    pub outputs: BTreeSet<Term>,
    pub resources: BTreeSet<Term>,
    pub interdependencies: Vec<Interdependency>,
    pub data_elements: BTreeSet<Term>,
}

impl ProcessOperator {
    pub fn interdependency(&self, root: &Term) -> Option<&Interdependency> {
        self.interdependencies.iter().find(|i| &i.root == root)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pub iri: Term,
    pub kind: Option<StateKind>,
    pub data_elements: BTreeSet<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TechnicalResource {
    pub iri: Term,
    pub data_elements: BTreeSet<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataElement {
    pub iri: Term,
    pub type_descriptions: BTreeSet<Term>,
    pub bound_variables: BTreeSet<Term>,
    pub owners: BTreeSet<Term>,
    pub value: Option<Literal>,
}

impl DataElement {
    /// The type description, when there is exactly one.
    pub fn type_description(&self) -> Option<&Term> {
        match self.type_descriptions.len() {
            1 => self.type_descriptions.iter().next(),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeDescription {
    pub iri: Term,
    pub unit_classes: BTreeSet<String>,
    pub value: Option<Literal>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ModelWarning {
    DanglingReference { from: Term, predicate: String, to: Term },
    UnknownStateKind { state: Term },
    AmbiguousStateKind { state: Term },
    MultipleTypeDescriptions { data_element: Term },
    UndecodableInterdependency { operator: Term, root: Term, error: String },
    MultipleExpectedUnits { variable: Term },
}

impl ModelWarning {
    pub fn code(&self) -> &'static str {
        match self {
            ModelWarning::DanglingReference { .. } => "dangling-reference",
            ModelWarning::UnknownStateKind { .. } => "unknown-state-kind",
            ModelWarning::AmbiguousStateKind { .. } => "ambiguous-state-kind",
            ModelWarning::MultipleTypeDescriptions { .. } => "multiple-type-descriptions",
            ModelWarning::UndecodableInterdependency { .. } => "undecodable-interdependency",
            ModelWarning::MultipleExpectedUnits { .. } => "multiple-expected-units",
        }
    }

    /// The node the warning is about.
    pub fn subject(&self) -> &Term {
        match self {
            ModelWarning::DanglingReference { from, .. } => from,
            ModelWarning::UnknownStateKind { state } | ModelWarning::AmbiguousStateKind { state } => state,
            ModelWarning::MultipleTypeDescriptions { data_element } => data_element,
            ModelWarning::UndecodableInterdependency { operator, .. } => operator,
            ModelWarning::MultipleExpectedUnits { variable } => variable,
        }
    }
}

impl fmt::Display for ModelWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelWarning::DanglingReference { from, predicate, to } => {
                write!(f, "{from} <{predicate}> {to}: target does not exist in the graph")
            }
            ModelWarning::UnknownStateKind { state } => {
                write!(f, "{state} is not typed Product, Energy or Information")
            }
            ModelWarning::AmbiguousStateKind { state } => write!(f, "{state} has more than one state kind"),
            ModelWarning::MultipleTypeDescriptions { data_element } => {
                write!(f, "{data_element} has more than one type description")
            }
            ModelWarning::UndecodableInterdependency { operator, root, error } => {
                write!(f, "interdependency {root} of {operator} cannot be decoded: {error}")
            }
            ModelWarning::MultipleExpectedUnits { variable } => {
                write!(f, "{variable} declares more than one expected unit")
            }
        }
    }
}

/// All typed views of one normalized graph.
#[derive(Debug, Clone)]
pub struct ProcessModel {
    graph: Graph,
    types: TypeIndex,
    config: ModelConfig,
    operators: BTreeMap<Term, ProcessOperator>,
    states: BTreeMap<Term, State>,
    resources: BTreeMap<Term, TechnicalResource>,
    data_elements: BTreeMap<Term, DataElement>,
    type_descriptions: BTreeMap<Term, TypeDescription>,
    warnings: Vec<ModelWarning>,
}

/// Builds the model with the default configuration.
pub fn load_model(graph: Graph) -> ProcessModel {
    ProcessModel::load(graph, ModelConfig::default())
}

impl ProcessModel {
    pub fn load(graph: Graph, config: ModelConfig) -> ProcessModel {
        let types = TypeIndex::build(&graph);
        let mut warnings = Vec::new();
        let p = |s: &str| Term::iri(s);

        let data_elements_of = |node: &Term| -> BTreeSet<Term> {
            graph.objects(node, &p(iri::HAS_DATA_ELEMENT)).into_iter().cloned().collect()
        };
        let check_exists = |from: &Term, predicate: &str, to: &Term, warnings: &mut Vec<ModelWarning>| {
            if !graph.has_subject(to) {
                warnings.push(ModelWarning::DanglingReference {
                    from: from.clone(),
                    predicate: predicate.to_owned(),
                    to: to.clone(),
                });
            }
        };

        let mut operators = BTreeMap::new();
        let mut state_iris = BTreeSet::new();
        let mut resource_iris = BTreeSet::new();
        for node in graph.nodes().into_iter().filter(|n| n.is_resource()) {
            if !types.has_type(node, iri::PROCESS_OPERATOR) {
                continue;
            }
            let linked = |predicate: &str, warnings: &mut Vec<ModelWarning>| -> BTreeSet<Term> {
                let targets: BTreeSet<Term> = graph.objects(node, &p(predicate)).into_iter().cloned().collect();
                for t in &targets {
                    check_exists(node, predicate, t, warnings);
                }
                targets
            };
            let inputs = linked(iri::HAS_INPUT, &mut warnings);
            let outputs = linked(iri::HAS_OUTPUT, &mut warnings);
            let resources = linked(iri::IS_ASSIGNED_TO, &mut warnings);
            state_iris.extend(inputs.iter().chain(&outputs).filter(|s| graph.has_subject(s)).cloned());
            resource_iris.extend(resources.iter().filter(|r| graph.has_subject(r)).cloned());

            let mut interdependencies = Vec::new();
            for root in graph.objects(node, &p(iri::HAS_INTERDEPENDENCY)) {
                match decode_expression(&graph, root) {
                    Ok(expression) => interdependencies.push(Interdependency { root: root.clone(), expression }),
                    Err(e) => warnings.push(ModelWarning::UndecodableInterdependency {
                        operator: node.clone(),
                        root: root.clone(),
                        error: e.to_string(),
                    }),
                }
            }
            operators.insert(
                node.clone(),
                ProcessOperator {
                    iri: node.clone(),
                    inputs,
                    outputs,
                    resources,
                    interdependencies,
                    data_elements: data_elements_of(node),
                },
            );
        }
        // typed states and resources that no operator references are still views
        for node in graph.nodes() {
            if types.has_type(node, iri::TECHNICAL_RESOURCE) {
                resource_iris.insert(node.clone());
            } else if [iri::STATE, iri::PRODUCT, iri::ENERGY, iri::INFORMATION].iter().any(|c| types.has_type(node, c))
            {
                state_iris.insert(node.clone());
            }
        }

        let mut states = BTreeMap::new();
        for s in state_iris {
            let kinds: Vec<StateKind> = [
                (iri::PRODUCT, StateKind::Product),
                (iri::ENERGY, StateKind::Energy),
                (iri::INFORMATION, StateKind::Information),
            ]
            .into_iter()
            .filter(|(class, _)| types.has_type(&s, class))
            .map(|(_, k)| k)
            .collect();
            let kind = match kinds.as_slice() {
                [k] => Some(*k),
                [] => {
                    warnings.push(ModelWarning::UnknownStateKind { state: s.clone() });
                    None
                }
                _ => {
                    warnings.push(ModelWarning::AmbiguousStateKind { state: s.clone() });
                    None
                }
            };
            states.insert(s.clone(), State { data_elements: data_elements_of(&s), iri: s, kind });
        }
        let resources = resource_iris
            .into_iter()
            .map(|r| (r.clone(), TechnicalResource { data_elements: data_elements_of(&r), iri: r }))
            .collect();

        let mut de_iris: BTreeSet<Term> =
            graph.matching(None, Some(&p(iri::HAS_DATA_ELEMENT)), None).into_iter().map(|t| t.object.clone()).collect();
        de_iris.extend(graph.matching(None, Some(&p(iri::IS_DATA_FOR)), None).into_iter().map(|t| t.subject.clone()));
        de_iris.extend(graph.nodes().into_iter().filter(|n| types.has_type(n, iri::DATA_ELEMENT)).cloned());

        let value_pred = p(&config.value_predicate);
        let first_literal = |node: &Term| -> Option<Literal> {
            graph.objects(node, &value_pred).into_iter().find_map(|t| t.as_literal().cloned())
        };

        let mut type_descriptions = BTreeMap::new();
        let mut data_elements = BTreeMap::new();
        for de in de_iris.into_iter().filter(|d| d.is_resource()) {
            let tds: BTreeSet<Term> = graph.objects(&de, &p(iri::HAS_TYPE_DESCRIPTION)).into_iter().cloned().collect();
            if tds.len() > 1 {
                warnings.push(ModelWarning::MultipleTypeDescriptions { data_element: de.clone() });
            }
            for td in &tds {
                type_descriptions.entry(td.clone()).or_insert_with(|| TypeDescription {
                    iri: td.clone(),
                    unit_classes: types.unit_classes(td),
                    value: first_literal(td),
                });
            }
            let bound_variables = graph.objects(&de, &p(iri::IS_DATA_FOR)).into_iter().cloned().collect();
            let owners = graph.subjects(&p(iri::HAS_DATA_ELEMENT), &de).into_iter().cloned().collect();
            let value = first_literal(&de).or_else(|| {
                if tds.len() == 1 {
                    first_literal(tds.iter().next().unwrap())
                } else {
                    None
                }
            });
            data_elements
                .insert(de.clone(), DataElement { iri: de, type_descriptions: tds, bound_variables, owners, value });
        }

        let mut variables: BTreeSet<Term> = BTreeSet::new();
        for op in operators.values() {
            for dep in &op.interdependencies {
                variables.extend(dep.expression.variables());
            }
        }
        for v in variables {
            if graph.objects(&v, &p(iri::EXPECTS_UNIT)).len() > 1 {
                warnings.push(ModelWarning::MultipleExpectedUnits { variable: v });
            }
        }

        warnings.sort();
        warnings.dedup();
        ProcessModel { graph, types, config, operators, states, resources, data_elements, type_descriptions, warnings }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn types(&self) -> &TypeIndex {
        &self.types
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn operators(&self) -> impl Iterator<Item = &ProcessOperator> + '_ {
        self.operators.values()
    }

    pub fn operator(&self, iri: &Term) -> Option<&ProcessOperator> {
        self.operators.get(iri)
    }

    pub fn state(&self, iri: &Term) -> Option<&State> {
        self.states.get(iri)
    }

    pub fn states(&self) -> impl Iterator<Item = &State> + '_ {
        self.states.values()
    }

    pub fn resource(&self, iri: &Term) -> Option<&TechnicalResource> {
        self.resources.get(iri)
    }

    pub fn data_element(&self, iri: &Term) -> Option<&DataElement> {
        self.data_elements.get(iri)
    }

    pub fn data_elements(&self) -> impl Iterator<Item = &DataElement> + '_ {
        self.data_elements.values()
    }

    pub fn type_description(&self, iri: &Term) -> Option<&TypeDescription> {
        self.type_descriptions.get(iri)
    }

    pub fn warnings(&self) -> &[ModelWarning] {
        &self.warnings
    }

    /// Data elements with `ParX:isDataFor variable`, sorted.
    pub fn data_elements_for(&self, variable: &Term) -> Vec<&Term> {
        self.graph.subjects(&Term::iri(iri::IS_DATA_FOR), variable)
    }

    /// The declared expected unit of `variable`, first in IRI order.
    pub fn expected_unit(&self, variable: &Term) -> Option<String> {
        self.graph
            .objects(variable, &Term::iri(iri::EXPECTS_UNIT))
            .into_iter()
            .find_map(|t| t.as_iri().map(str::to_owned))
    }

    /// Unit classes over all type descriptions of a data element.
    pub fn unit_classes_of(&self, data_element: &Term) -> BTreeSet<String> {
        self.data_elements
            .get(data_element)
            .map(|de| {
                de.type_descriptions
                    .iter()
                    .filter_map(|td| self.type_descriptions.get(td))
                    .flat_map(|td| td.unit_classes.iter().cloned())
                    .collect()
            })
            .unwrap_or_default()
    }
}
