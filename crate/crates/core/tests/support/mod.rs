//! Independent oracles and random model generators shared by the integration
//! tests of this crate and the acceptance suite of the CLI crate.
//!
//! Every check returns `Err(description)` on the first disagreement so callers
//! can either assert or print a verdict line.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use parx_core::eval::{evaluate, evaluate_operator, BindingEnvironment, EvalError};
use parx_core::model::{decode_expression, load_model, ProcessModel};
use parx_core::rdf::{decode_list, encode_list, parse_turtle, serialize_ntriples, vocab_rdf, Literal};
use parx_core::verify::{check_data_availability, check_units, filter_context_data, UnitFinding, UnitScope};
use parx_core::vocab::iri;
use parx_core::{fixtures, Graph, Term, Triple};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

const EX: &str = "http://example.org/gen#";

fn ex(local: impl AsRef<str>) -> Term {
    Term::iri(format!("{EX}{}", local.as_ref()))
}

fn p(iri: &str) -> Term {
    Term::iri(iri)
}

fn rdf_type() -> Term {
    Term::iri(vocab_rdf::TYPE)
}

fn unece(code: &str) -> String {
    format!("{}{code}", parx_core::vocab::UNECE)
}

// ---------------------------------------------------------------------------
// Blank-node isomorphism

/// Exhaustive search for a blank-node bijection mapping `a` onto `b`.
pub fn isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let blanks = |g: &Graph| -> Vec<Term> {
        let mut v: Vec<Term> = g.nodes().into_iter().filter(|t| t.is_blank()).cloned().collect();
        v.sort();
        v
    };
    let (ba, bb) = (blanks(a), blanks(b));
    if ba.len() != bb.len() {
        return false;
    }
    let ground = |g: &Graph| -> BTreeSet<Triple> {
        g.iter().filter(|t| !t.subject.is_blank() && !t.object.is_blank()).cloned().collect()
    };
    if ground(a) != ground(b) {
        return false;
    }
    // degree signature prunes candidates
    let signature = |g: &Graph, n: &Term| -> (usize, usize) {
        (g.matching(Some(n), None, None).len(), g.matching(None, None, Some(n)).len())
    };
    let candidates: Vec<Vec<Term>> =
        ba.iter().map(|x| bb.iter().filter(|y| signature(a, x) == signature(b, y)).cloned().collect()).collect();
    let mut mapping: HashMap<Term, Term> = HashMap::new();
    let mut used: BTreeSet<Term> = BTreeSet::new();
    search(a, b, &ba, &candidates, 0, &mut mapping, &mut used)
}

fn search(
    a: &Graph,
    b: &Graph,
    order: &[Term],
    candidates: &[Vec<Term>],
    i: usize,
    mapping: &mut HashMap<Term, Term>,
    used: &mut BTreeSet<Term>,
) -> bool {
    if i == order.len() {
        return true;
    }
    for cand in &candidates[i] {
        if used.contains(cand) {
            continue;
        }
        mapping.insert(order[i].clone(), cand.clone());
        used.insert(cand.clone());
        if consistent(a, b, &order[i], mapping) && search(a, b, order, candidates, i + 1, mapping, used) {
            return true;
        }
        used.remove(cand);
        mapping.remove(&order[i]);
    }
    false
}

/// Every fully mapped triple touching `node` must exist in `b`.
fn consistent(a: &Graph, b: &Graph, node: &Term, mapping: &HashMap<Term, Term>) -> bool {
    let map = |t: &Term| -> Option<Term> {
        if t.is_blank() {
            mapping.get(t).cloned()
        } else {
            Some(t.clone())
        }
    };
    let touching = a.matching(Some(node), None, None).into_iter().chain(a.matching(None, None, Some(node)));
    for t in touching {
        if let (Some(s), Some(o)) = (map(&t.subject), map(&t.object)) {
            if !b.contains(&Triple::new(s, t.predicate.clone(), o)) {
                return false;
            }
        }
    }
    true
}

/// Serializes every bundled fixture, reparses it and compares up to blank
/// node relabeling.
pub fn check_fixture_round_trips() -> Result<usize, String> {
    for (name, text) in fixtures::ALL {
        let g = parse_turtle(text, None).map_err(|e| format!("{name}: {e}"))?;
        let nt = serialize_ntriples(&g);
        let back = parse_turtle(&nt, None).map_err(|e| format!("{name} reparse: {e}"))?;
        if !isomorphic(&g, &back) {
            return Err(format!("{name}: reparsed graph is not isomorphic"));
        }
    }
    Ok(fixtures::ALL.len())
}

// ---------------------------------------------------------------------------
// rdf:List

pub fn check_list_inverse(seed: u64, cases: usize) -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(seed);
    for case in 0..cases {
        let n = rng.gen_range(0..12);
        let items: Vec<Term> = (0..n)
            .map(|i| match rng.gen_range(0..3) {
                0 => ex(format!("item{}", rng.gen_range(0..5))),
                1 => Term::Literal(Literal::simple(format!("s{i}"))),
                _ => Term::blank(format!("m{i}")),
            })
            .collect();
        let (head, triples) = encode_list(&items, "c");
        let g: Graph = triples.into_iter().collect();
        let decoded = decode_list(&g, &head).map_err(|e| format!("case {case}: {e}"))?;
        if decoded != items {
            return Err(format!("case {case}: {items:?} decoded as {decoded:?}"));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Context filter

/// Random process graph with up to `max_ops` operators and distractor edges.
pub fn random_process_graph(rng: &mut StdRng, max_ops: usize) -> Vec<Triple> {
    let n_ops = rng.gen_range(1..=max_ops);
    let n_states = rng.gen_range(1..=2 * n_ops + 2);
    let n_res = rng.gen_range(0..=n_ops + 1);
    let n_de = rng.gen_range(0..=3 * n_ops + 4);
    let op = |i: usize| ex(format!("op{i}"));
    let st = |i: usize| ex(format!("state{i}"));
    let rs = |i: usize| ex(format!("res{i}"));
    let de = |i: usize| ex(format!("de{i}"));
    let mut t = Vec::new();
    for i in 0..n_ops {
        t.push(Triple::new(op(i), rdf_type(), p(iri::PROCESS_OPERATOR)));
    }
    for i in 0..n_states {
        let kind = [iri::PRODUCT, iri::ENERGY, iri::INFORMATION].choose(rng).unwrap();
        t.push(Triple::new(st(i), rdf_type(), p(kind)));
    }
    for i in 0..n_res {
        t.push(Triple::new(rs(i), rdf_type(), p(iri::TECHNICAL_RESOURCE)));
    }
    for i in 0..n_de {
        t.push(Triple::new(de(i), rdf_type(), p(iri::DATA_ELEMENT)));
    }
    for i in 0..n_ops {
        for _ in 0..rng.gen_range(0..3) {
            t.push(Triple::new(op(i), p(iri::HAS_INPUT), st(rng.gen_range(0..n_states))));
        }
        for _ in 0..rng.gen_range(0..3) {
            t.push(Triple::new(op(i), p(iri::HAS_OUTPUT), st(rng.gen_range(0..n_states))));
        }
        if n_res > 0 && rng.gen_bool(0.7) {
            t.push(Triple::new(op(i), p(iri::IS_ASSIGNED_TO), rs(rng.gen_range(0..n_res))));
        }
    }
    if n_de > 0 {
        for _ in 0..rng.gen_range(0..=2 * n_de) {
            let d = de(rng.gen_range(0..n_de));
            let holder = match rng.gen_range(0..5) {
                0 => op(rng.gen_range(0..n_ops)),
                1 if n_res > 0 => rs(rng.gen_range(0..n_res)),
                // nested data element: not a context member through the holder
                2 => de(rng.gen_range(0..n_de)),
                // holder unrelated to any operator
                3 => ex("orphan"),
                _ => st(rng.gen_range(0..n_states)),
            };
            t.push(Triple::new(holder, p(iri::HAS_DATA_ELEMENT), d));
        }
        // distractor predicates that must not widen the context
        for _ in 0..rng.gen_range(0..3) {
            let d = de(rng.gen_range(0..n_de));
            t.push(Triple::new(op(rng.gen_range(0..n_ops)), ex("relatedTo"), d));
        }
    }
    t
}

/// The four membership branches evaluated by scanning the raw triple list.
pub fn context_oracle(triples: &[Triple], operator: &Term) -> BTreeSet<Term> {
    let objects = |s: &Term, pred: &str| -> Vec<Term> {
        triples
            .iter()
            .filter(|t| &t.subject == s && t.predicate.as_iri() == Some(pred))
            .map(|t| t.object.clone())
            .collect()
    };
    let mut out = BTreeSet::new();
    for branch in [iri::HAS_OUTPUT, iri::HAS_INPUT, iri::IS_ASSIGNED_TO] {
        for holder in objects(operator, branch) {
            out.extend(objects(&holder, iri::HAS_DATA_ELEMENT));
        }
    }
    out.extend(objects(operator, iri::HAS_DATA_ELEMENT));
    out
}

/// Compares `filter_context_data` with [`context_oracle`] on `graphs` random
/// graphs. Returns the number of operator contexts compared.
pub fn check_context_oracle(seed: u64, graphs: usize, max_ops: usize) -> Result<usize, String> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut compared = 0;
    for gi in 0..graphs {
        let triples = random_process_graph(&mut rng, max_ops);
        let model = load_model(triples.iter().cloned().collect());
        let ops: BTreeSet<Term> = triples
            .iter()
            .filter(|t| t.predicate == rdf_type() && t.object == p(iri::PROCESS_OPERATOR))
            .map(|t| t.subject.clone())
            .collect();
        if ops.len() > max_ops {
            return Err(format!("graph {gi}: generator produced {} operators", ops.len()));
        }
        for op in &ops {
            let got = filter_context_data(&model, op).map_err(|e| format!("graph {gi}: {e}"))?.data_elements();
            let want = context_oracle(&triples, op);
            if got != want {
                return Err(format!("graph {gi}, {op}: filter gave {got:?}, oracle {want:?}"));
            }
            compared += 1;
        }
    }
    Ok(compared)
}

// ---------------------------------------------------------------------------
// Expression evaluation

#[derive(Debug, Clone)]
pub enum Tree {
    Var(usize),
    Const(f64),
    Op(&'static str, Vec<Tree>),
}

const VARS: usize = 5;

pub fn random_tree(rng: &mut StdRng, depth: usize) -> Tree {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.7) {
            Tree::Var(rng.gen_range(0..VARS))
        } else {
            Tree::Const(rng.gen_range(-20..=20) as f64 / 4.0)
        };
    }
    match rng.gen_range(0..5) {
        0 => Tree::Op("plus", (0..rng.gen_range(2..=3)).map(|_| random_tree(rng, depth - 1)).collect()),
        1 => Tree::Op("times", (0..rng.gen_range(2..=3)).map(|_| random_tree(rng, depth - 1)).collect()),
        2 => Tree::Op("minus", vec![random_tree(rng, depth - 1), random_tree(rng, depth - 1)]),
        3 => Tree::Op("divide", vec![random_tree(rng, depth - 1), random_tree(rng, depth - 1)]),
        _ => Tree::Op("power", vec![random_tree(rng, depth - 1), Tree::Const(rng.gen_range(0..=3) as f64)]),
    }
}

pub fn tree_depth(tree: &Tree) -> usize {
    match tree {
        Tree::Op(_, args) => 1 + args.iter().map(tree_depth).max().unwrap_or(0),
        _ => 0,
    }
}

/// Straightforward recursive evaluation; `None` for division by zero or a
/// non-finite intermediate.
pub fn naive_eval(tree: &Tree, values: &[f64]) -> Option<f64> {
    let v = match tree {
        Tree::Var(i) => values[*i],
        Tree::Const(c) => *c,
        Tree::Op(name, args) => {
            let xs: Vec<f64> = args.iter().map(|a| naive_eval(a, values)).collect::<Option<_>>()?;
            match *name {
                "plus" => xs.iter().skip(1).fold(xs[0], |a, b| a + b),
                "times" => xs.iter().skip(1).fold(xs[0], |a, b| a * b),
                "minus" => xs[0] - xs[1],
                "divide" if xs[1] == 0.0 => return None,
                "divide" => xs[0] / xs[1],
                "power" => xs[0].powf(xs[1]),
                other => unreachable!("{other}"),
            }
        }
    };
    v.is_finite().then_some(v)
}

/// Writes `eq(result, tree)` as OpenMath-RDF triples rooted at `ex:F`.
pub fn tree_to_triples(tree: &Tree) -> Vec<Triple> {
    let mut out = Vec::new();
    let mut counter = 0usize;
    let rhs = emit(tree, &mut out, &mut counter);
    let result = ex("result");
    out.push(Triple::new(result.clone(), rdf_type(), p(iri::VARIABLE)));
    application(&ex("F"), "relation1", "eq", &[result, rhs], &mut out, &mut counter);
    out
}

fn application(node: &Term, cd: &str, name: &str, args: &[Term], out: &mut Vec<Triple>, counter: &mut usize) {
    *counter += 1;
    let (head, cells) = encode_list(args, &format!("l{counter}_"));
    out.push(Triple::new(node.clone(), rdf_type(), p(iri::APPLICATION)));
    out.push(Triple::new(node.clone(), p(iri::OPERATOR), Term::iri(format!("{}{cd}#{name}", parx_core::vocab::CD))));
    out.push(Triple::new(node.clone(), p(iri::ARGUMENTS), head));
    out.extend(cells);
}

fn emit(tree: &Tree, out: &mut Vec<Triple>, counter: &mut usize) -> Term {
    match tree {
        Tree::Var(i) => {
            let v = ex(format!("x{i}"));
            out.push(Triple::new(v.clone(), rdf_type(), p(iri::VARIABLE)));
            v
        }
        Tree::Const(c) => Term::Literal(Literal::typed(format!("{c:?}"), parx_core::rdf::XSD_DOUBLE)),
        Tree::Op(name, args) => {
            let terms: Vec<Term> = args.iter().map(|a| emit(a, out, counter)).collect();
            *counter += 1;
            let node = ex(format!("app{counter}"));
            application(&node, "arith1", name, &terms, out, counter);
            node
        }
    }
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// Decodes and evaluates `trees` random formulas and compares with
/// [`naive_eval`]. Returns the number of numeric agreements.
pub fn check_expression_oracle(seed: u64, trees: usize, max_depth: usize, tol: f64) -> Result<usize, String> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut numeric = 0;
    for i in 0..trees {
        let tree = random_tree(&mut rng, max_depth);
        assert!(tree_depth(&tree) <= max_depth);
        let values: Vec<f64> = (0..VARS).map(|_| rng.gen_range(-50..=50) as f64 / 8.0).collect();
        let graph: Graph = tree_to_triples(&tree).into_iter().collect();
        let expr = decode_expression(&graph, &ex("F")).map_err(|e| format!("tree {i}: decode failed: {e}"))?;
        let mut env = BindingEnvironment::<f64>::new();
        for (k, v) in values.iter().enumerate() {
            env.bind_value(ex(format!("x{k}")), *v);
        }
        let want = naive_eval(&tree, &values);
        match (evaluate(&expr, &env), want) {
            (Ok(r), Some(w)) if rel_close(r.value, w, tol) => numeric += 1,
            (Ok(r), w) => return Err(format!("tree {i} {tree:?}: evaluator {} vs oracle {w:?}", r.value)),
            (Err(EvalError::DivisionByZero | EvalError::NonFinite), None) => {}
            (Err(e), w) => return Err(format!("tree {i} {tree:?}: evaluator error {e} vs oracle {w:?}")),
        }
    }
    Ok(numeric)
}

// ---------------------------------------------------------------------------
// Random interdependency models

const UNITS: [&str; 4] = ["CMQ", "LTR", "2J", "SEC"];

/// Operators sharing `t = x0 ∘ (x1 ∘ x2)` with randomly placed, typed and
/// valued data elements.
pub fn random_formula_model(rng: &mut StdRng) -> Vec<Triple> {
    let mut t = Vec::new();
    let ops = ["plus", "minus", "times", "divide"];
    let inner = Tree::Op(ops.choose(rng).unwrap(), vec![Tree::Var(1), Tree::Var(2)]);
    let tree = Tree::Op(ops.choose(rng).unwrap(), vec![Tree::Var(0), inner]);
    t.extend(tree_to_triples(&tree));
    let vars: Vec<Term> = vec![ex("result"), ex("x0"), ex("x1"), ex("x2")];
    let mut expected: HashMap<Term, &str> = HashMap::new();
    for v in &vars {
        if rng.gen_bool(0.8) {
            let u = *UNITS.choose(rng).unwrap();
            expected.insert(v.clone(), u);
            t.push(Triple::new(v.clone(), p(iri::EXPECTS_UNIT), Term::iri(unece(u))));
        }
    }
    let n_ops = rng.gen_range(1..=3);
    let mut de_count = 0;
    let mut new_de = |t: &mut Vec<Triple>, rng: &mut StdRng, holder: Term, var: &Term| {
        de_count += 1;
        let d = ex(format!("de{de_count}"));
        t.push(Triple::new(holder, p(iri::HAS_DATA_ELEMENT), d.clone()));
        t.push(Triple::new(d.clone(), rdf_type(), p(iri::DATA_ELEMENT)));
        t.push(Triple::new(d.clone(), p(iri::IS_DATA_FOR), var.clone()));
        if rng.gen_bool(0.85) {
            let td = ex(format!("td{de_count}"));
            t.push(Triple::new(d.clone(), p(iri::HAS_TYPE_DESCRIPTION), td.clone()));
            t.push(Triple::new(td.clone(), rdf_type(), p(iri::TYPE_DESCRIPTION)));
            // mostly the expected unit, so that some formulas evaluate
            let unit = match expected.get(var) {
                Some(u) if rng.gen_bool(0.75) => Some(*u),
                _ if rng.gen_bool(0.2) => None,
                _ => UNITS.choose(rng).copied(),
            };
            if let Some(u) = unit {
                t.push(Triple::new(td.clone(), rdf_type(), Term::iri(unece(u))));
                if rng.gen_bool(0.1) {
                    t.push(Triple::new(td.clone(), rdf_type(), Term::iri(unece(UNITS.choose(rng).unwrap()))));
                }
            }
        }
        if rng.gen_bool(0.9) {
            let v = rng.gen_range(-4..=40) as f64 / 2.0;
            t.push(Triple::new(
                d,
                p(iri::VALUE),
                Term::Literal(Literal::typed(format!("{v:?}"), parx_core::rdf::XSD_DOUBLE)),
            ));
        }
    };
    for i in 0..n_ops {
        let op = ex(format!("op{i}"));
        let (input, output, tool) = (ex(format!("in{i}")), ex(format!("out{i}")), ex(format!("tool{i}")));
        t.push(Triple::new(op.clone(), rdf_type(), p(iri::PROCESS_OPERATOR)));
        t.push(Triple::new(op.clone(), p(iri::HAS_INTERDEPENDENCY), ex("F")));
        t.push(Triple::new(op.clone(), p(iri::HAS_INPUT), input.clone()));
        t.push(Triple::new(input.clone(), rdf_type(), p(iri::INFORMATION)));
        t.push(Triple::new(op.clone(), p(iri::IS_ASSIGNED_TO), tool.clone()));
        t.push(Triple::new(tool.clone(), rdf_type(), p(iri::TECHNICAL_RESOURCE)));
        if rng.gen_bool(0.85) {
            t.push(Triple::new(op.clone(), p(iri::HAS_OUTPUT), output.clone()));
            t.push(Triple::new(output.clone(), rdf_type(), p(iri::INFORMATION)));
            if rng.gen_bool(0.85) {
                new_de(&mut t, rng, output, &vars[0]);
            }
        }
        for v in &vars[1..] {
            for _ in 0..[0, 1, 1, 1, 1, 1, 1, 2].choose(rng).copied().unwrap() {
                let holder = if rng.gen_bool(0.5) { input.clone() } else { tool.clone() };
                new_de(&mut t, rng, holder, v);
            }
        }
    }
    t
}

/// Every checked (variable, data element) pair yields exactly one outcome:
/// consistent (no finding), mismatch, or unknown unit, as decided by reading
/// the raw triples.
pub fn check_unit_partition(seed: u64, models: usize) -> Result<usize, String> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut pairs = 0;
    for mi in 0..models {
        let triples = random_formula_model(&mut rng);
        let model = load_model(triples.iter().cloned().collect());
        let findings = check_units(&model, &UnitScope::All, false).map_err(|e| e.to_string())?;
        let objects = |s: &Term, pred: &str| -> BTreeSet<Term> {
            triples
                .iter()
                .filter(|t| &t.subject == s && t.predicate.as_iri() == Some(pred))
                .map(|t| t.object.clone())
                .collect()
        };
        let mut per_pair: BTreeMap<(Term, Term), Vec<UnitFinding>> = BTreeMap::new();
        for f in &findings {
            let de = f.data_element().ok_or_else(|| format!("model {mi}: unexpected {f:?}"))?;
            per_pair.entry((f.variable().clone(), de.clone())).or_default().push(f.clone());
        }
        for t in triples.iter().filter(|t| t.predicate.as_iri() == Some(iri::IS_DATA_FOR)) {
            let (de, var) = (t.subject.clone(), t.object.clone());
            let Some(expected) = objects(&var, iri::EXPECTS_UNIT).into_iter().next() else {
                continue;
            };
            let expected = expected.as_iri().unwrap().to_owned();
            let units: BTreeSet<String> = objects(&de, iri::HAS_TYPE_DESCRIPTION)
                .iter()
                .flat_map(|td| objects(td, vocab_rdf::TYPE))
                .filter_map(|c| c.as_iri().filter(|i| i.starts_with(parx_core::vocab::UNECE)).map(str::to_owned))
                .collect();
            let got = per_pair.remove(&(var.clone(), de.clone())).unwrap_or_default();
            let ok = match got.as_slice() {
                [] => units.contains(&expected),
                [UnitFinding::Mismatch { actual_unit, .. }] => {
                    !units.is_empty() && !units.contains(&expected) && units.contains(actual_unit)
                }
                [UnitFinding::UnitUnknown { .. }] => units.is_empty(),
                _ => false,
            };
            if !ok {
                return Err(format!("model {mi}: pair ({var}, {de}) units {units:?} expected {expected}: {got:?}"));
            }
            pairs += 1;
        }
        if let Some((k, v)) = per_pair.into_iter().next() {
            return Err(format!("model {mi}: finding for unknown pair {k:?}: {v:?}"));
        }
    }
    Ok(pairs)
}

/// No formula obtains a numeric result while a finding exists for it in the
/// same operator. Returns (results, refusals) seen.
pub fn check_refusal_soundness(seed: u64, models: usize) -> Result<(usize, usize), String> {
    let mut rng = StdRng::seed_from_u64(seed);
    let (mut results, mut refusals) = (0, 0);
    for mi in 0..models {
        let triples = random_formula_model(&mut rng);
        let model = load_model(triples.into_iter().collect());
        for op in model.operators().map(|o| o.iri.clone()).collect::<Vec<_>>() {
            let ev = evaluate_operator::<f64>(&model, &op).map_err(|e| e.to_string())?;
            let avail = check_data_availability(&model, &op).map_err(|e| e.to_string())?;
            let units = check_units(&model, &UnitScope::Operator(op.clone()), false).map_err(|e| e.to_string())?;
            for r in &ev.results {
                let f = r.formula.clone().ok_or("result without formula node")?;
                let vars = model.operator(&op).unwrap().interdependency(&f).unwrap().expression.variables();
                let blocked = avail.findings.iter().any(|x| x.formula == f)
                    || avail.structural.iter().any(|s| s.formula.as_ref().is_none_or(|x| x == &f))
                    || avail.ambiguities.iter().any(|a| a.formula == f)
                    || units.iter().any(|u| vars.contains(u.variable()));
                if blocked {
                    return Err(format!("model {mi}, {op}: numeric result for {f} despite findings"));
                }
                if !r.value.is_finite() {
                    return Err(format!("model {mi}, {op}: non-finite result"));
                }
            }
            results += ev.results.len();
            refusals += ev.failures.len();
        }
    }
    Ok((results, refusals))
}

/// Loads a fixture without the vocabulary file.
pub fn load_bare(text: &str) -> ProcessModel {
    let g = parse_turtle(text, None).expect("fixture parses");
    load_model(parx_core::vocab::normalize(&g, &parx_core::vocab::AliasTable::builtin()))
}
