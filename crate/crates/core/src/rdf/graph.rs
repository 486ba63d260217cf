//! Immutable indexed triple set.

use std::collections::{BTreeSet, HashMap};

use super::term::{Term, Triple};

/// A set of triples with subject, predicate and object indexes.
///
/// Graphs are built once (from an iterator or by merging documents) and never
/// mutated afterwards, so shared references can be handed to any number of
/// readers.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    triples: Vec<Triple>,
    by_subject: HashMap<Term, Vec<u32>>,
    by_predicate: HashMap<Term, Vec<u32>>,
    by_object: HashMap<Term, Vec<u32>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.triples == other.triples
    }
}

impl Eq for Graph {}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let set: BTreeSet<Triple> = iter.into_iter().collect();
        Graph::from_sorted(set.into_iter().collect())
    }
}

impl Graph {
    pub fn new() -> Self {
        Graph::default()
    }

    fn from_sorted(triples: Vec<Triple>) -> Self {
        let mut by_subject: HashMap<Term, Vec<u32>> = HashMap::new();
        let mut by_predicate: HashMap<Term, Vec<u32>> = HashMap::new();
        let mut by_object: HashMap<Term, Vec<u32>> = HashMap::new();
        for (i, t) in triples.iter().enumerate() {
            let i = i as u32;
            by_subject.entry(t.subject.clone()).or_default().push(i);
            by_predicate.entry(t.predicate.clone()).or_default().push(i);
            by_object.entry(t.object.clone()).or_default().push(i);
        }
        Graph { triples, by_subject, by_predicate, by_object }
    }

    /// Number of distinct triples.
    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Triples in sorted order.
    pub fn iter(&self) -> impl Iterator<Item = &Triple> + '_ {
        self.triples.iter()
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.binary_search(triple).is_ok()
    }

    /// Every triple agreeing with the bound positions.
    pub fn matching<'a>(&'a self, s: Option<&Term>, p: Option<&Term>, o: Option<&Term>) -> Vec<&'a Triple> {
        let mut best: Option<&[u32]> = None;
        for (key, index) in [(s, &self.by_subject), (p, &self.by_predicate), (o, &self.by_object)] {
            if let Some(key) = key {
                let postings = index.get(key).map(Vec::as_slice).unwrap_or(&[]);
                if best.is_none_or(|b| postings.len() < b.len()) {
                    best = Some(postings);
                }
            }
        }
        let accept = |t: &Triple| {
            s.is_none_or(|s| &t.subject == s) && p.is_none_or(|p| &t.predicate == p) && o.is_none_or(|o| &t.object == o)
        };
        match best {
            Some(postings) => postings.iter().map(|&i| &self.triples[i as usize]).filter(|t| accept(t)).collect(),
            None => self.triples.iter().collect(),
        }
    }

    /// Objects of `(subject, predicate, ?)`, sorted.
    pub fn objects<'a>(&'a self, subject: &Term, predicate: &Term) -> Vec<&'a Term> {
        self.matching(Some(subject), Some(predicate), None).into_iter().map(|t| &t.object).collect()
    }

    /// Subjects of `(?, predicate, object)`, sorted.
    pub fn subjects<'a>(&'a self, predicate: &Term, object: &Term) -> Vec<&'a Term> {
        let mut out: Vec<&Term> =
            self.matching(None, Some(predicate), Some(object)).into_iter().map(|t| &t.subject).collect();
        out.sort();
        out
    }

    pub fn has_subject(&self, term: &Term) -> bool {
        self.by_subject.contains_key(term)
    }

    /// True when the term occurs anywhere in the graph.
    pub fn mentions(&self, term: &Term) -> bool {
        self.by_subject.contains_key(term) || self.by_object.contains_key(term) || self.by_predicate.contains_key(term)
    }

    pub fn subjects_distinct(&self) -> impl Iterator<Item = &Term> + '_ {
        self.by_subject.keys()
    }

    /// Distinct subject and object terms.
    pub fn nodes(&self) -> BTreeSet<&Term> {
        self.triples.iter().flat_map(|t| [&t.subject, &t.object]).collect()
    }

    /// Returns a new graph with every term mapped through `f`.
    pub fn map_terms(&self, mut f: impl FnMut(&Term) -> Term) -> Graph {
        self.triples
            .iter()
            .map(|t| Triple { subject: f(&t.subject), predicate: f(&t.predicate), object: f(&t.object) })
            .collect()
    }

    /// Union of several documents. Blank nodes of document `i` are prefixed
    /// with `d{i}_` so labels from different documents never collide.
    pub fn merge<'a>(graphs: impl IntoIterator<Item = &'a Graph>) -> Graph {
        let mut all = BTreeSet::new();
        for (i, g) in graphs.into_iter().enumerate() {
            let relabel = |t: &Term| match t {
                Term::BlankNode(label) => Term::BlankNode(format!("d{i}_{label}")),
                other => other.clone(),
            };
            for t in &g.triples {
                all.insert(Triple {
                    subject: relabel(&t.subject),
                    predicate: t.predicate.clone(),
                    object: relabel(&t.object),
                });
            }
        }
        Graph::from_sorted(all.into_iter().collect())
    }

    /// Verifies that every index agrees with the triple set.
    pub fn audit(&self) -> Result<(), String> {
        if self.triples.windows(2).any(|w| w[0] >= w[1]) {
            return Err("triples not strictly sorted".into());
        }
        let check = |name: &str, index: &HashMap<Term, Vec<u32>>, key: fn(&Triple) -> &Term| -> Result<(), String> {
            let mut seen = 0usize;
            for (term, postings) in index {
                for &i in postings {
                    let t = self.triples.get(i as usize).ok_or(format!("{name}: dangling posting {i}"))?;
                    if key(t) != term {
                        return Err(format!("{name}: posting {i} filed under {term}"));
                    }
                }
                seen += postings.len();
            }
            if seen != self.triples.len() {
                return Err(format!("{name}: {seen} postings for {} triples", self.triples.len()));
            }
            Ok(())
        };
        check("subject", &self.by_subject, |t| &t.subject)?;
        check("predicate", &self.by_predicate, |t| &t.predicate)?;
        check("object", &self.by_object, |t| &t.object)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str, p: &str, o: &str) -> Triple {
        Triple::new(Term::iri(s), Term::iri(p), Term::iri(o))
    }

    #[test]
    fn duplicates_collapse() {
        let g: Graph = vec![t("s:a", "s:p", "s:b"), t("s:a", "s:p", "s:b")].into_iter().collect();
        assert_eq!(g.len(), 1);
        g.audit().unwrap();
    }

    #[test]
    fn match_uses_bound_positions() {
        let g: Graph =
            vec![t("s:a", "s:p", "s:b"), t("s:a", "s:q", "s:c"), t("s:d", "s:p", "s:b")].into_iter().collect();
        assert_eq!(g.matching(Some(&Term::iri("s:a")), None, None).len(), 2);
        assert_eq!(g.matching(None, Some(&Term::iri("s:p")), Some(&Term::iri("s:b"))).len(), 2);
        assert_eq!(g.matching(None, None, None).len(), 3);
        assert!(g.matching(Some(&Term::iri("s:zz")), None, None).is_empty());
        assert_eq!(g.matching(Some(&Term::iri("s:a")), Some(&Term::iri("s:q")), Some(&Term::iri("s:c"))).len(), 1);
    }

    #[test]
    fn merge_relabels_blank_nodes() {
        let a: Graph = vec![Triple::new(Term::blank("b0"), Term::iri("s:p"), Term::iri("s:x"))].into_iter().collect();
        let b: Graph = vec![Triple::new(Term::blank("b0"), Term::iri("s:p"), Term::iri("s:y"))].into_iter().collect();
        let m = Graph::merge([&a, &b]);
        assert_eq!(m.len(), 2);
        let subjects: BTreeSet<_> = m.iter().map(|t| t.subject.clone()).collect();
        assert_eq!(subjects.len(), 2);
        m.audit().unwrap();
    }
}
