use std::collections::HashSet;

use super::vocab_rdf::{FIRST, NIL, REST};
use super::{Graph, RdfError, Term, Triple};

/// Members of the `rdf:List` starting at `head`, in order.
///
/// Each cell must carry exactly one `rdf:first` and one `rdf:rest`; revisiting
/// a cell is reported as a cycle.
pub fn decode_list(graph: &Graph, head: &Term) -> Result<Vec<Term>, RdfError> {
    let first = Term::iri(FIRST);
    let rest = Term::iri(REST);
    let nil = Term::iri(NIL);
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut cell = head.clone();
    while cell != nil {
        let malformed = |reason: &str| RdfError::MalformedList { cell: cell.clone(), reason: reason.to_owned() };
        if !seen.insert(cell.clone()) {
            return Err(malformed("cycle in rdf:rest chain"));
        }
        let firsts = graph.objects(&cell, &first);
        let member = match firsts.as_slice() {
            [m] => (*m).clone(),
            [] => return Err(malformed("cell has no rdf:first")),
            _ => return Err(malformed("cell has several rdf:first values")),
        };
        let next = match graph.objects(&cell, &rest).as_slice() {
            [n] => (*n).clone(),
            [] => return Err(malformed("cell has no rdf:rest")),
            _ => return Err(malformed("rdf:rest fans out")),
        };
        out.push(member);
        cell = next;
    }
    Ok(out)
}

/// Emits a first/rest chain over fresh blank cells `{prefix}{i}`; returns the
/// head and the triples.
pub fn encode_list(items: &[Term], prefix: &str) -> (Term, Vec<Triple>) {
    let mut head = Term::iri(NIL);
    let mut triples = Vec::with_capacity(items.len() * 2);
    for (i, item) in items.iter().enumerate().rev() {
        let cell = Term::BlankNode(format!("{prefix}{i}"));
        triples.push(Triple::new(cell.clone(), Term::iri(FIRST), item.clone()));
        triples.push(Triple::new(cell.clone(), Term::iri(REST), head));
        head = cell;
    }
    (head, triples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::parse_turtle;
    use proptest::prelude::*;

    #[test]
    fn nil_is_empty() {
        assert_eq!(decode_list(&Graph::new(), &Term::iri(NIL)).unwrap(), vec![]);
    }

    #[test]
    fn named_cells() {
        let g = parse_turtle(
            "@prefix ex: <http://ex.org/> . @prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .
             ex:TimeAttribute1 rdf:first ex:VCavity ; rdf:rest ex:TimeAttribute2 .
             ex:TimeAttribute2 rdf:first ex:Q ; rdf:rest rdf:nil .",
            None,
        )
        .unwrap();
        let items = decode_list(&g, &Term::iri("http://ex.org/TimeAttribute1")).unwrap();
        assert_eq!(items, vec![Term::iri("http://ex.org/VCavity"), Term::iri("http://ex.org/Q")]);
    }

    #[test]
    fn self_cycle_names_cell() {
        let g = parse_turtle(
            "@prefix ex: <http://ex.org/> . @prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .
             ex:c rdf:first ex:x ; rdf:rest ex:c .",
            None,
        )
        .unwrap();
        let err = decode_list(&g, &Term::iri("http://ex.org/c")).unwrap_err();
        assert_eq!(
            err,
            RdfError::MalformedList { cell: Term::iri("http://ex.org/c"), reason: "cycle in rdf:rest chain".into() }
        );
    }

    #[test]
    fn missing_first_and_fanout() {
        let g = parse_turtle(
            "@prefix ex: <http://ex.org/> . @prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .
             ex:a rdf:rest rdf:nil .
             ex:b rdf:first ex:x ; rdf:rest ex:a, rdf:nil .",
            None,
        )
        .unwrap();
        let err = decode_list(&g, &Term::iri("http://ex.org/a")).unwrap_err();
        assert!(err.to_string().contains("no rdf:first"));
        let err = decode_list(&g, &Term::iri("http://ex.org/b")).unwrap_err();
        assert!(err.to_string().contains("fans out"));
    }

    fn arb_term() -> impl Strategy<Value = Term> {
        prop_oneof![
            "[a-z]{1,6}".prop_map(|s| Term::iri(format!("http://ex.org/{s}"))),
            "[a-z]{1,6}".prop_map(|s| Term::from(crate::rdf::Literal::simple(s))),
        ]
    }

    proptest! {
        #[test]
        fn encode_decode_inverse(items in prop::collection::vec(arb_term(), 0..12)) {
            let (head, triples) = encode_list(&items, "cell");
            let g: Graph = triples.into_iter().collect();
            prop_assert_eq!(decode_list(&g, &head).unwrap(), items);
        }
    }
}
