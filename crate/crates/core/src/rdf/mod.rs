//! In-memory RDF substrate: terms, an indexed graph, a Turtle reader,
//! N-Triples output and `rdf:List` decoding.

mod graph;
mod list;
mod term;
mod turtle;

pub use graph::Graph;
pub use list::{decode_list, encode_list};
pub use term::*;
pub use turtle::{parse_turtle, TurtleDocument, TurtleParser};

use thiserror::Error;

pub mod vocab_rdf {
    pub const NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
    pub const TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    pub const FIRST: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#first";
    pub const REST: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#rest";
    pub const NIL: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#nil";
    pub const LIST: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#List";
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RdfError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("undefined prefix '{prefix}:' at {line}:{column}")]
    UndefinedPrefix { prefix: String, line: usize, column: usize },
    #[error("relative IRI <{iri}> at {line}:{column} with no base IRI")]
    RelativeIri { iri: String, line: usize, column: usize },
    #[error("malformed rdf:List at {cell}: {reason}")]
    MalformedList { cell: Term, reason: String },
}

/// Canonical N-Triples, one triple per line, lines sorted.
pub fn serialize_ntriples(graph: &Graph) -> String {
    let mut lines: Vec<String> = graph.iter().map(ToString::to_string).collect();
    lines.sort();
    let mut out = String::with_capacity(lines.iter().map(|l| l.len() + 1).sum());
    for line in lines {
        out.push_str(&line);
        out.push('\n');
    }
    out
}
