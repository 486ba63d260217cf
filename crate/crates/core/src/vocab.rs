//! Namespaces, alias normalization and the rdf:type / rdfs:subClassOf closure.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::rdf::{vocab_rdf, Graph, Term};

pub const VDI3682: &str = "http://www.w3id.org/hsu-aut/VDI3682#";
pub const DINEN61360: &str = "http://www.w3id.org/hsu-aut/DINEN61360#";
pub const DIN61360: &str = "http://www.w3id.org/hsu-aut/DIN61360#";
pub const UNECE: &str = "http://www.w3id.org/hsu-aut/UNECE#";
pub const PARX: &str = "http://www.hsu-hh.de/aut/ParX#";
pub const OM: &str = "http://openmath.org/vocab/math#";
pub const CD: &str = "http://www.openmath.org/cd/";
pub const RDF: &str = vocab_rdf::NS;
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";

pub const RDFS_SUBCLASS_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subClassOf";

/// Well-known IRIs of the process-model vocabularies.
pub mod iri {
    macro_rules! term {
        ($name:ident, $ns:ident, $local:literal) => {
            pub const $name: &str = concat_ns!($ns, $local);
        };
    }
    macro_rules! concat_ns {
        (VDI3682, $l:literal) => {
            concat!("http://www.w3id.org/hsu-aut/VDI3682#", $l)
        };
        (DINEN61360, $l:literal) => {
            concat!("http://www.w3id.org/hsu-aut/DINEN61360#", $l)
        };
        (UNECE, $l:literal) => {
            concat!("http://www.w3id.org/hsu-aut/UNECE#", $l)
        };
        (PARX, $l:literal) => {
            concat!("http://www.hsu-hh.de/aut/ParX#", $l)
        };
        (OM, $l:literal) => {
            concat!("http://openmath.org/vocab/math#", $l)
        };
    }

    term!(PROCESS_OPERATOR, VDI3682, "ProcessOperator");
    term!(STATE, VDI3682, "State");
    term!(PRODUCT, VDI3682, "Product");
    term!(ENERGY, VDI3682, "Energy");
    term!(INFORMATION, VDI3682, "Information");
    term!(TECHNICAL_RESOURCE, VDI3682, "TechnicalResource");
    term!(HAS_INPUT, VDI3682, "hasInput");
    term!(HAS_OUTPUT, VDI3682, "hasOutput");
    term!(IS_ASSIGNED_TO, VDI3682, "isAssignedTo");

    term!(DATA_ELEMENT, DINEN61360, "DataElement");
    term!(TYPE_DESCRIPTION, DINEN61360, "Type_Description");
    term!(HAS_DATA_ELEMENT, DINEN61360, "has_Data_Element");
    term!(HAS_TYPE_DESCRIPTION, DINEN61360, "has_Type_Description");
    term!(VALUE, DINEN61360, "Value");

    term!(UNIT, UNECE, "Unit");

    term!(IS_DATA_FOR, PARX, "isDataFor");
    term!(EXPECTS_UNIT, PARX, "expectsUnit");
    term!(HAS_INTERDEPENDENCY, PARX, "hasInterdependency");

    term!(APPLICATION, OM, "Application");
    term!(VARIABLE, OM, "Variable");
    term!(LITERAL, OM, "Literal");
    term!(OPERATOR, OM, "operator");
    term!(ARGUMENTS, OM, "arguments");
    term!(OM_VALUE, OM, "value");
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Namespace {
    pub prefix: &'static str,
    pub base_iri: &'static str,
}

/// Canonical prefixes, registered for CLI IRI expansion and display.
pub const NAMESPACES: &[Namespace] = &[
    Namespace { prefix: "VDI3682", base_iri: VDI3682 },
    Namespace { prefix: "DINEN61360", base_iri: DINEN61360 },
    Namespace { prefix: "UNECE", base_iri: UNECE },
    Namespace { prefix: "ParX", base_iri: PARX },
    Namespace { prefix: "OM", base_iri: OM },
    Namespace { prefix: "rdf", base_iri: RDF },
    Namespace { prefix: "rdfs", base_iri: RDFS },
    Namespace { prefix: "xsd", base_iri: XSD },
    Namespace { prefix: "arith1", base_iri: "http://www.openmath.org/cd/arith1#" },
    Namespace { prefix: "relation1", base_iri: "http://www.openmath.org/cd/relation1#" },
];

/// Prefixes pre-registered for Turtle input; includes the non-canonical
/// spellings that appear in hand-written models.
pub fn input_prefixes() -> BTreeMap<String, String> {
    let mut map: BTreeMap<String, String> =
        NAMESPACES.iter().map(|ns| (ns.prefix.to_owned(), ns.base_iri.to_owned())).collect();
    map.insert("DIN61360".into(), DIN61360.into());
    map.insert("om".into(), OM.into());
    map.insert("RDF".into(), RDF.into());
    map
}

#[derive(Debug, Error)]
pub enum AliasError {
    #[error("alias file line {line}: expected two IRIs, found {found:?}")]
    BadLine { line: usize, found: String },
    #[error("alias file line {line}: <{iri}> is not an absolute IRI")]
    NotAbsolute { line: usize, iri: String },
}

/// Non-canonical → canonical IRI rewrites.
///
/// Namespace aliases rewrite any IRI starting with the alias namespace; exact
/// aliases then rewrite whole IRIs. Lookups follow chains to the end, so the
/// result is always a fixed point.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AliasTable {
    namespaces: BTreeMap<String, String>,
    exact: BTreeMap<String, String>,
}

impl AliasTable {
    pub fn empty() -> Self {
        AliasTable::default()
    }

    /// Reconciles the spellings used across the DIN EN 61360 and OpenMath
    /// pattern documents.
    pub fn builtin() -> Self {
        let mut t = AliasTable::empty();
        t.insert(DIN61360, DINEN61360);
        for (from, to) in [
            ("hasDataElement", "has_Data_Element"),
            ("hasTypeDescription", "has_Type_Description"),
            ("TypeDescription", "Type_Description"),
        ] {
            t.insert(&format!("{DINEN61360}{from}"), &format!("{DINEN61360}{to}"));
        }
        t
    }

    /// Adds a rule; IRIs ending in `#` or `/` on both sides form a namespace rule.
    pub fn insert(&mut self, from: &str, to: &str) {
        let is_ns = |s: &str| s.ends_with('#') || s.ends_with('/');
        if is_ns(from) && is_ns(to) {
            self.namespaces.insert(from.to_owned(), to.to_owned());
        } else {
            self.exact.insert(from.to_owned(), to.to_owned());
        }
    }

    /// Reads override pairs (`noncanonical canonical`, `#` comments) on top of `self`.
    pub fn extend_from_str(&mut self, text: &str) -> Result<(), AliasError> {
        for (i, raw) in text.lines().enumerate() {
            let line = strip_comment(raw);
            let fields: Vec<&str> = line.split_whitespace().map(|f| f.trim_matches(['<', '>'])).collect();
            match fields.as_slice() {
                [] => continue,
                [from, to] => {
                    for iri in [from, to] {
                        if !iri.contains(':') {
                            return Err(AliasError::NotAbsolute { line: i + 1, iri: iri.to_string() });
                        }
                    }
                    self.insert(from, to);
                }
                _ => return Err(AliasError::BadLine { line: i + 1, found: raw.to_owned() }),
            }
        }
        Ok(())
    }

    fn rewrite_once(&self, iri: &str) -> String {
        let mut out = iri.to_owned();
        // longest namespace match wins
        if let Some((from, to)) =
            self.namespaces.iter().filter(|(from, _)| iri.starts_with(from.as_str())).max_by_key(|(from, _)| from.len())
        {
            out = format!("{to}{}", &iri[from.len()..]);
        }
        if let Some(to) = self.exact.get(&out) {
            out = to.clone();
        }
        out
    }

    /// Canonical form of `iri`; canonical IRIs map to themselves.
    pub fn canonical(&self, iri: &str) -> String {
        let mut current = iri.to_owned();
        // bounded: each step must change the IRI, cycles stop at the first repeat
        let mut seen = BTreeSet::new();
        loop {
            let next = self.rewrite_once(&current);
            if next == current || !seen.insert(current.clone()) {
                return current;
            }
            current = next;
        }
    }

    pub fn is_empty(&self) -> bool {
        self.namespaces.is_empty() && self.exact.is_empty()
    }
}

/// Cuts a `#` comment that starts a line or follows whitespace; `#` inside
/// an IRI is kept.
fn strip_comment(line: &str) -> &str {
    let mut prev_ws = true;
    for (i, c) in line.char_indices() {
        if c == '#' && prev_ws {
            return &line[..i];
        }
        prev_ws = c.is_whitespace();
    }
    line
}

/// Rewrites every aliased IRI (including literal datatypes) to canonical form.
pub fn normalize(graph: &Graph, aliases: &AliasTable) -> Graph {
    if aliases.is_empty() {
        return graph.clone();
    }
    graph.map_terms(|t| match t {
        Term::Iri(iri) => Term::Iri(aliases.canonical(iri)),
        Term::Literal(lit) => {
            let mut lit = lit.clone();
            lit.datatype = aliases.canonical(&lit.datatype);
            Term::Literal(lit)
        }
        other => other.clone(),
    })
}

/// Instance typing closed under `rdfs:subClassOf`.
#[derive(Debug, Clone, Default)]
pub struct TypeIndex {
    instance_types: HashMap<Term, BTreeSet<String>>,
    superclasses: HashMap<String, BTreeSet<String>>,
}

impl TypeIndex {
    pub fn build(graph: &Graph) -> Self {
        let mut instance_types: HashMap<Term, BTreeSet<String>> = HashMap::new();
        for t in graph.matching(None, Some(&Term::iri(vocab_rdf::TYPE)), None) {
            if let Term::Iri(class) = &t.object {
                instance_types.entry(t.subject.clone()).or_default().insert(class.clone());
            }
        }
        let mut edges: HashMap<String, BTreeSet<String>> = HashMap::new();
        for t in graph.matching(None, Some(&Term::iri(RDFS_SUBCLASS_OF)), None) {
            if let (Term::Iri(sub), Term::Iri(sup)) = (&t.subject, &t.object) {
                edges.entry(sub.clone()).or_default().insert(sup.clone());
            }
        }
        // eager transitive closure; a class on a cycle simply reaches itself
        let mut superclasses = HashMap::new();
        for class in edges.keys() {
            let mut reach = BTreeSet::new();
            let mut stack: Vec<&String> = edges[class].iter().collect();
            while let Some(c) = stack.pop() {
                if reach.insert(c.clone()) {
                    if let Some(next) = edges.get(c) {
                        stack.extend(next.iter());
                    }
                }
            }
            reach.remove(class);
            superclasses.insert(class.clone(), reach);
        }
        TypeIndex { instance_types, superclasses }
    }

    /// Direct types of `node` plus all their transitive superclasses.
    pub fn all_types(&self, node: &Term) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        if let Some(direct) = self.instance_types.get(node) {
            for class in direct {
                out.insert(class.clone());
                out.extend(self.superclasses_of(class).iter().cloned());
            }
        }
        out
    }

    pub fn has_type(&self, node: &Term, class: &str) -> bool {
        self.all_types(node).contains(class)
    }

    /// Strict transitive superclasses of `class`.
    pub fn superclasses_of(&self, class: &str) -> &BTreeSet<String> {
        static EMPTY: BTreeSet<String> = BTreeSet::new();
        self.superclasses.get(class).unwrap_or(&EMPTY)
    }

    /// True for `UNECE:Unit`, its transitive subclasses, and any IRI in the
    /// UNECE namespace.
    pub fn is_unit_class(&self, class: &str) -> bool {
        class == iri::UNIT || class.starts_with(UNECE) || self.superclasses_of(class).contains(iri::UNIT)
    }

    /// Unit classes among the types of `node`.
    pub fn unit_classes(&self, node: &Term) -> BTreeSet<String> {
        self.all_types(node).into_iter().filter(|c| self.is_unit_class(c)).collect()
    }

    /// Drops every class that is a strict superclass of another member.
    pub fn most_specific(&self, classes: &BTreeSet<String>) -> BTreeSet<String> {
        classes
            .iter()
            .filter(|c| !classes.iter().any(|other| other != *c && self.superclasses_of(other).contains(c.as_str())))
            .cloned()
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::{parse_turtle, Triple};

    fn graph(body: &str) -> Graph {
        let src = format!(
            "@prefix ex: <http://ex.org/> . @prefix rdfs: <{RDFS}> . @prefix UNECE: <{UNECE}> .
             @prefix DINEN61360: <{DINEN61360}> . @prefix DIN61360: <{DIN61360}> .\n{body}"
        );
        parse_turtle(&src, None).unwrap()
    }

    #[test]
    fn figure_spelling_normalized() {
        let g = graph("ex:s DIN61360:hasDataElement ex:d .");
        let n = normalize(&g, &AliasTable::builtin());
        let t = n.iter().next().unwrap();
        assert_eq!(t.predicate, Term::iri(iri::HAS_DATA_ELEMENT));
    }

    #[test]
    fn unaliased_graph_identical_and_idempotent() {
        let g = graph("ex:a ex:p ex:b . ex:b a DINEN61360:DataElement .");
        let aliases = AliasTable::builtin();
        assert_eq!(normalize(&g, &aliases), g);
        let messy = graph("ex:a DINEN61360:hasTypeDescription ex:t . ex:t a DIN61360:TypeDescription .");
        let once = normalize(&messy, &aliases);
        assert_eq!(normalize(&once, &aliases), once);
    }

    #[test]
    fn alias_collapse_merges_triples() {
        let g = graph("ex:a DIN61360:hasDataElement ex:d . ex:a DINEN61360:has_Data_Element ex:d .");
        assert_eq!(g.len(), 2);
        assert_eq!(normalize(&g, &AliasTable::builtin()).len(), 1);
    }

    #[test]
    fn canonical_iris_are_fixed_points() {
        let t = AliasTable::builtin();
        for target in [iri::HAS_DATA_ELEMENT, iri::HAS_TYPE_DESCRIPTION, iri::TYPE_DESCRIPTION, DINEN61360] {
            assert_eq!(t.canonical(target), target);
        }
        assert_eq!(t.canonical(&format!("{DIN61360}hasTypeDescription")), iri::HAS_TYPE_DESCRIPTION);
    }

    #[test]
    fn override_file() {
        let mut t = AliasTable::empty();
        t.extend_from_str(
            "# comment\n\nhttp://a.org/x http://a.org/y\n<http://old.org/ns#> <http://new.org/ns#>  # trailing\n",
        )
        .unwrap();
        assert_eq!(t.canonical("http://a.org/x"), "http://a.org/y");
        assert_eq!(t.canonical("http://old.org/ns#z"), "http://new.org/ns#z");
        assert!(matches!(
            AliasTable::empty().extend_from_str("one two three"),
            Err(AliasError::BadLine { line: 1, .. })
        ));
        assert!(matches!(
            AliasTable::empty().extend_from_str("relative http://x.org/a"),
            Err(AliasError::NotAbsolute { .. })
        ));
    }

    #[test]
    fn alias_cycle_terminates() {
        let mut t = AliasTable::empty();
        t.insert("http://a/x", "http://a/y");
        t.insert("http://a/y", "http://a/x");
        let c = t.canonical("http://a/x");
        assert!(c == "http://a/x" || c == "http://a/y");
    }

    #[test]
    fn unit_typing() {
        let g = graph(
            "UNECE:CMQ rdfs:subClassOf UNECE:Unit .
             ex:VolumeCMQ a DINEN61360:Type_Description, UNECE:CMQ .",
        );
        let idx = TypeIndex::build(&g);
        let types = idx.all_types(&Term::iri("http://ex.org/VolumeCMQ"));
        assert!(types.contains(iri::UNIT) && types.contains(&format!("{UNECE}CMQ")));
        assert_eq!(
            idx.unit_classes(&Term::iri("http://ex.org/VolumeCMQ")),
            [format!("{UNECE}CMQ"), iri::UNIT.to_owned()].into_iter().collect()
        );
        assert!(idx.all_types(&Term::iri("http://ex.org/nothing")).is_empty());
        assert!(idx.is_unit_class(&format!("{UNECE}CMQ")));
        assert!(!idx.is_unit_class(iri::TYPE_DESCRIPTION));
        assert!(idx.is_unit_class(&format!("{UNECE}LTR")));
    }

    #[test]
    fn unit_subclass_outside_namespace() {
        let g = graph("ex:Furlong rdfs:subClassOf ex:LengthUnit . ex:LengthUnit rdfs:subClassOf UNECE:Unit .");
        let idx = TypeIndex::build(&g);
        assert!(idx.is_unit_class("http://ex.org/Furlong"));
        assert!(!idx.is_unit_class("http://ex.org/Other"));
    }

    #[test]
    fn diamond_and_cycle() {
        let g = graph(
            "ex:A rdfs:subClassOf ex:B, ex:C . ex:B rdfs:subClassOf ex:D . ex:C rdfs:subClassOf ex:D .
             ex:n a ex:A . ex:X rdfs:subClassOf ex:Y . ex:Y rdfs:subClassOf ex:X . ex:m a ex:X .",
        );
        let idx = TypeIndex::build(&g);
        let want: BTreeSet<String> = ["A", "B", "C", "D"].iter().map(|c| format!("http://ex.org/{c}")).collect();
        assert_eq!(idx.all_types(&Term::iri("http://ex.org/n")), want);
        let cyc: BTreeSet<String> = ["X", "Y"].iter().map(|c| format!("http://ex.org/{c}")).collect();
        assert_eq!(idx.all_types(&Term::iri("http://ex.org/m")), cyc);
    }

    #[test]
    fn most_specific_drops_ancestors() {
        let g = graph("UNECE:LTR rdfs:subClassOf UNECE:Unit .");
        let idx = TypeIndex::build(&g);
        let set: BTreeSet<String> = [format!("{UNECE}LTR"), iri::UNIT.to_owned()].into_iter().collect();
        assert_eq!(idx.most_specific(&set), [format!("{UNECE}LTR")].into_iter().collect());
    }

    #[test]
    fn literal_datatypes_normalized() {
        let g: Graph = vec![Triple::new(
            Term::iri("http://ex.org/a"),
            Term::iri("http://ex.org/p"),
            Term::from(crate::rdf::Literal::typed("1", format!("{DIN61360}Real"))),
        )]
        .into_iter()
        .collect();
        let n = normalize(&g, &AliasTable::builtin());
        assert_eq!(n.iter().next().unwrap().object.as_literal().unwrap().datatype, format!("{DINEN61360}Real"));
    }
}
