//! OpenMath-RDF expression trees.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::rdf::{decode_list, vocab_rdf, Graph, Literal, RdfError, Term};
use crate::vocab::{iri, CD};

/// Arithmetic and relational symbols the evaluator understands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Eq,
    Plus,
    Minus,
    Times,
    Divide,
    Power,
}

impl ArithOp {
    pub const ALL: [ArithOp; 6] =
        [ArithOp::Eq, ArithOp::Plus, ArithOp::Minus, ArithOp::Times, ArithOp::Divide, ArithOp::Power];

    pub fn cd_and_name(self) -> (&'static str, &'static str) {
        match self {
            ArithOp::Eq => ("relation1", "eq"),
            ArithOp::Plus => ("arith1", "plus"),
            ArithOp::Minus => ("arith1", "minus"),
            ArithOp::Times => ("arith1", "times"),
            ArithOp::Divide => ("arith1", "divide"),
            ArithOp::Power => ("arith1", "power"),
        }
    }

    pub fn symbol(self) -> CdSymbol {
        let (cd, name) = self.cd_and_name();
        CdSymbol::new(format!("{CD}{cd}#{name}"))
    }
}

/// A content-dictionary symbol, identified by its IRI
/// (`http://www.openmath.org/cd/<cd>#<name>` or `.../cd/<cd>/<name>`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CdSymbol {
    iri: String,
}

impl CdSymbol {
    pub fn new(iri: impl Into<String>) -> Self {
        CdSymbol { iri: iri.into() }
    }

    pub fn iri(&self) -> &str {
        &self.iri
    }

    /// `(content dictionary, symbol name)` when the IRI is in the CD namespace.
    pub fn parts(&self) -> Option<(&str, &str)> {
        let rest = self.iri.strip_prefix(CD)?;
        let (cd, name) = rest.split_once('#').or_else(|| rest.split_once('/'))?;
        if cd.is_empty() || name.is_empty() {
            return None;
        }
        Some((cd, name))
    }

    /// The registered operation, or `None` for symbols outside the registry.
    pub fn op(&self) -> Option<ArithOp> {
        let parts = self.parts()?;
        ArithOp::ALL.into_iter().find(|op| op.cd_and_name() == parts)
    }
}

impl fmt::Display for CdSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.parts() {
            Some((cd, name)) => write!(f, "{cd}/{name}"),
            None => write!(f, "<{}>", self.iri),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OmExpression {
    Application { node: Term, operator: CdSymbol, arguments: Vec<OmExpression> },
    Variable { node: Term, expected_unit: Option<String> },
    Constant(Literal),
}

impl OmExpression {
    /// Variable leaves at any depth.
    pub fn variables(&self) -> BTreeSet<Term> {
        let mut out = BTreeSet::new();
        self.walk(&mut |e| {
            if let OmExpression::Variable { node, .. } = e {
                out.insert(node.clone());
            }
        });
        out
    }

    fn walk<'a>(&'a self, f: &mut impl FnMut(&'a OmExpression)) {
        f(self);
        if let OmExpression::Application { arguments, .. } = self {
            for a in arguments {
                a.walk(f);
            }
        }
    }

    /// The graph node this expression was decoded from (constants have none).
    pub fn node(&self) -> Option<&Term> {
        match self {
            OmExpression::Application { node, .. } | OmExpression::Variable { node, .. } => Some(node),
            OmExpression::Constant(_) => None,
        }
    }

    /// `(target, rhs)` for `eq(Variable, rhs)`.
    pub fn as_assignment(&self) -> Option<(&OmExpression, &OmExpression)> {
        match self {
            OmExpression::Application { operator, arguments, .. } if operator.op() == Some(ArithOp::Eq) => {
                match arguments.as_slice() {
                    [target @ OmExpression::Variable { .. }, rhs] => Some((target, rhs)),
                    _ => None,
                }
            }
            _ => None,
        }
    }

    /// Symbols anywhere in the tree that are not in the registry.
    pub fn unknown_symbols(&self) -> Vec<&CdSymbol> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let OmExpression::Application { operator, .. } = e {
                if operator.op().is_none() {
                    out.push(operator);
                }
            }
        });
        out
    }
}

/// Variable leaves of `expr`, deduplicated.
pub fn collect_variables(expr: &OmExpression) -> BTreeSet<Term> {
    expr.variables()
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ExprError {
    #[error("application {0} has no OM:operator")]
    MissingOperator(Term),
    #[error("application {0} has several OM:operator values")]
    AmbiguousOperator(Term),
    #[error("operator of {0} is not an IRI")]
    OperatorNotIri(Term),
    #[error("application {0} has no OM:arguments")]
    MissingArguments(Term),
    #[error("argument list of {node}: {source}")]
    MalformedArguments { node: Term, source: RdfError },
    #[error("expression cycle through {0}")]
    Cycle(Term),
    #[error("{0} is not an OM:Application, OM:Variable or literal")]
    NotAnExpression(Term),
}

/// Decodes the expression rooted at `root`.
pub fn decode_expression(graph: &Graph, root: &Term) -> Result<OmExpression, ExprError> {
    let mut ancestors = Vec::new();
    decode(graph, root, &mut ancestors)
}

fn has_type(graph: &Graph, node: &Term, class: &str) -> bool {
    graph.contains(&crate::rdf::Triple {
        subject: node.clone(),
        predicate: Term::iri(vocab_rdf::TYPE),
        object: Term::iri(class),
    })
}

fn decode(graph: &Graph, node: &Term, ancestors: &mut Vec<Term>) -> Result<OmExpression, ExprError> {
    if let Term::Literal(lit) = node {
        return Ok(OmExpression::Constant(lit.clone()));
    }
    let operators = graph.objects(node, &Term::iri(iri::OPERATOR));
    if has_type(graph, node, iri::APPLICATION) || !operators.is_empty() {
        if ancestors.contains(node) {
            return Err(ExprError::Cycle(node.clone()));
        }
        let operator = match operators.as_slice() {
            [Term::Iri(op)] => CdSymbol::new(op.clone()),
            [_] => return Err(ExprError::OperatorNotIri(node.clone())),
            [] => return Err(ExprError::MissingOperator(node.clone())),
            _ => return Err(ExprError::AmbiguousOperator(node.clone())),
        };
        let list = match graph.objects(node, &Term::iri(iri::ARGUMENTS)).as_slice() {
            [head] => (*head).clone(),
            [] => return Err(ExprError::MissingArguments(node.clone())),
            _ => {
                return Err(ExprError::MalformedArguments {
                    node: node.clone(),
                    source: RdfError::MalformedList { cell: node.clone(), reason: "several OM:arguments lists".into() },
                })
            }
        };
        let items =
            decode_list(graph, &list).map_err(|source| ExprError::MalformedArguments { node: node.clone(), source })?;
        ancestors.push(node.clone());
        let arguments = items.iter().map(|item| decode(graph, item, ancestors)).collect::<Result<Vec<_>, _>>();
        ancestors.pop();
        return Ok(OmExpression::Application { node: node.clone(), operator, arguments: arguments? });
    }
    if has_type(graph, node, iri::VARIABLE) {
        let expected_unit =
            graph.objects(node, &Term::iri(iri::EXPECTS_UNIT)).into_iter().find_map(|t| t.as_iri().map(str::to_owned));
        return Ok(OmExpression::Variable { node: node.clone(), expected_unit });
    }
    if has_type(graph, node, iri::LITERAL) {
        if let Some(Term::Literal(lit)) = graph.objects(node, &Term::iri(iri::OM_VALUE)).first() {
            return Ok(OmExpression::Constant(lit.clone()));
        }
    }
    Err(ExprError::NotAnExpression(node.clone()))
}
