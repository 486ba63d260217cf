//! Bundled RTM injection models.
//!
//! | name | content |
//! |------|---------|
//! | [`RTM`] | three injection processes sharing the fill-time formula; one unit mismatch, one gap |
//! | [`RTM_UNITS_FIXED`] | as [`RTM`], tool B volume typed `UNECE:CMQ` |
//! | [`RTM_CONSISTENT`] | units fixed, every variable bound, values attached |
//! | [`VOCABULARY`] | state and unit class axioms |

use crate::loader::{load_sources, LoadedModel, Source};
use crate::model::ModelConfig;
use crate::vocab::AliasTable;

pub const RTM: &str = include_str!("../fixtures/rtm.ttl");
pub const RTM_UNITS_FIXED: &str = include_str!("../fixtures/rtm_units_fixed.ttl");
pub const RTM_CONSISTENT: &str = include_str!("../fixtures/rtm_consistent.ttl");
pub const VOCABULARY: &str = include_str!("../fixtures/vocabulary.ttl");

/// Every bundled fixture with its file name.
pub const ALL: [(&str, &str); 4] = [
    ("rtm.ttl", RTM),
    ("rtm_units_fixed.ttl", RTM_UNITS_FIXED),
    ("rtm_consistent.ttl", RTM_CONSISTENT),
    ("vocabulary.ttl", VOCABULARY),
];

/// Loads a fixture together with [`VOCABULARY`] using the builtin aliases.
pub fn load(name: &str, text: &str) -> LoadedModel {
    let sources = [Source::new(name, text), Source::new("vocabulary.ttl", VOCABULARY)];
    load_sources(&sources, &AliasTable::builtin(), ModelConfig::default())
        .unwrap_or_else(|e| panic!("bundled fixture does not load: {e}"))
}

pub fn rtm() -> LoadedModel {
    load("rtm.ttl", RTM)
}

pub fn rtm_units_fixed() -> LoadedModel {
    load("rtm_units_fixed.ttl", RTM_UNITS_FIXED)
}

pub fn rtm_consistent() -> LoadedModel {
    load("rtm_consistent.ttl", RTM_CONSISTENT)
}
