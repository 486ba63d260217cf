//! Consistency verification for ontology-based manufacturing process models.
//!
//! Models are RDF graphs combining the VDI 3682 process description,
//! DIN EN 61360 data elements, UNECE unit classes and OpenMath-RDF formulas
//! linked through ParX. The crate loads such graphs ([`rdf`], [`vocab`]),
//! exposes typed views ([`model`]), checks them ([`verify`]) and evaluates
//! their interdependency formulas ([`eval`]).

#![allow(clippy::result_large_err)]

pub mod eval;
pub mod fixtures;
pub mod loader;
pub mod model;
pub mod rdf;
pub mod scalar;
pub mod verify;
pub mod vocab;

pub use loader::{load_sources, LoadError, LoadedModel, Source};
pub use model::{load_model, ProcessModel};
pub use rdf::{Graph, Term, Triple};
pub use scalar::Scalar;

/// Evaluation in 64-bit floating point, the default precision.
pub type BindingEnvironment = eval::BindingEnvironment<f64>;
pub type Binding = eval::Binding<f64>;
pub type EvaluationResult = eval::EvaluationResult<f64>;
pub type OperatorEvaluation = eval::OperatorEvaluation<f64>;

/// Single-precision variants.
pub type BindingEnvironmentF32 = eval::BindingEnvironment<f32>;
pub type EvaluationResultF32 = eval::EvaluationResult<f32>;
