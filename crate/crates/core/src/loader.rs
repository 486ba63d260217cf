//! Reading one or more Turtle documents into a normalized process model.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::model::{ModelConfig, ProcessModel};
use crate::rdf::{Graph, RdfError, TurtleParser};
use crate::vocab::{input_prefixes, normalize, AliasTable};

#[derive(Debug, Clone)]
pub struct Source {
    /// File name or other label used in diagnostics.
    pub name: String,
    pub text: String,
    pub base_iri: Option<String>,
}

impl Source {
    pub fn new(name: impl Into<String>, text: impl Into<String>) -> Self {
        Source { name: name.into(), text: text.into(), base_iri: None }
    }
}

#[derive(Debug, Error)]
#[error("{name}: {error}")]
pub struct LoadError {
    pub name: String,
    #[source]
    pub error: RdfError,
}

#[derive(Debug, Clone)]
pub struct LoadedModel {
    pub model: ProcessModel,
    /// Canonical prefixes plus every `@prefix` declared by the inputs.
    pub prefixes: BTreeMap<String, String>,
}

/// Parses every source, merges them (blank nodes kept apart), normalizes
/// aliases and builds the model.
pub fn load_sources(sources: &[Source], aliases: &AliasTable, config: ModelConfig) -> Result<LoadedModel, LoadError> {
    let predefined = input_prefixes();
    let mut graphs = Vec::with_capacity(sources.len());
    let mut prefixes: BTreeMap<String, String> =
        crate::vocab::NAMESPACES.iter().map(|ns| (ns.prefix.to_owned(), ns.base_iri.to_owned())).collect();
    for src in sources {
        let doc = TurtleParser::new(&src.text)
            .with_base(src.base_iri.as_deref())
            .with_prefixes(&predefined)
            .parse()
            .map_err(|error| LoadError { name: src.name.clone(), error })?;
        for (p, ns) in doc.prefixes {
            prefixes.insert(p, aliases.canonical(&ns));
        }
        graphs.push(doc.graph);
    }
    let merged = Graph::merge(&graphs);
    let model = ProcessModel::load(normalize(&merged, aliases), config);
    Ok(LoadedModel { model, prefixes })
}
