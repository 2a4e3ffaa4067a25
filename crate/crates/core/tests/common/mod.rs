#![allow(dead_code)]

pub mod named;

use std::collections::BTreeMap;

use dkinterop::casestudy::{mutations, CorpusManifest};
use dkinterop::rewrite::Reducer;
use dkinterop::theories::{corpus, embedded_source};
use dkinterop::{load_corpus, EntryKind, LocalContext, QName, Session, Signature, Term, Typer, DEFAULT_FUEL};

pub const COMPARATOR: &str = include_str!("../data/cmp.dk");

pub fn corpus_session() -> Session {
    load_corpus(DEFAULT_FUEL).unwrap_or_else(|e| panic!("{}", e.render(false)))
}

/// The corpus extended with the computational comparator `cmp.leb`.
pub fn with_comparator() -> Signature {
    let mut s = corpus_session();
    s.admit_source("cmp.dk", COMPARATOR.as_bytes())
        .unwrap_or_else(|e| panic!("{}", e.render(false)));
    s.into_signature()
}

/// Session with every corpus file before `file` admitted.
pub fn prefix_before(file: &str) -> Session {
    let mut s = Session::new(DEFAULT_FUEL);
    for f in CorpusManifest::embedded().files.iter().take_while(|f| *f != file) {
        s.admit_source(f, embedded_source(f).unwrap().as_bytes()).unwrap();
    }
    s
}

/// Outcome of one mutation: its description and whether checking rejected it.
pub struct MutationOutcome {
    pub description: String,
    pub rejected: bool,
}

/// Single-node mutations of the proof terms of the sort development and of
/// the interop file, each checked against the corpus prefix it depends on.
pub fn mutation_suite() -> Vec<MutationOutcome> {
    let plans: [(&str, &[(&str, &str)]); 2] = [
        (
            "sort.dk",
            &[
                ("Logic", "I"),
                ("Datatypes", "true"),
                ("sort", "perm_nil"),
                ("Datatypes", "nil"),
            ],
        ),
        (
            "interop.dk",
            &[("nat", "le"), ("nat", "zero"), ("Logic", "I"), ("interop", "leq")],
        ),
    ];
    let mut out = Vec::new();
    for (file, repl) in plans {
        let prefix = prefix_before(file);
        let theory = corpus().into_iter().find(|f| f.file_name == file).unwrap();
        let items = theory.items().unwrap();
        let repl: Vec<QName> = repl.iter().map(|(m, n)| QName::new(m, n)).collect();
        for m in mutations(&items, prefix.signature(), &repl, 1) {
            let mut sig = prefix.signature().clone();
            let rejected = m.items.iter().any(|it| sig.admit(it, DEFAULT_FUEL).is_err());
            out.push(MutationOutcome {
                description: format!("{file}: {}", m.description),
                rejected,
            });
        }
    }
    out
}

/// Definitions whose body, once weak-head normalized, no longer checks
/// against the declared type.
pub fn subject_reduction_failures(sig: &Signature) -> (usize, Vec<String>) {
    let typer = Typer::new(sig, DEFAULT_FUEL);
    let mut checked = 0;
    let mut failures = Vec::new();
    for (name, e) in sig.iter() {
        let EntryKind::Defined { body } = &e.kind else { continue };
        checked += 1;
        let reduced = match typer.reducer().whnf(body) {
            Ok(r) => r,
            Err(err) => {
                failures.push(format!("{name}: {err}"));
                continue;
            }
        };
        if let Err(err) = Typer::new(sig, DEFAULT_FUEL).check(&mut LocalContext::new(), &reduced, &e.ty) {
            failures.push(format!("{name}: {}", err.render(false)));
        }
    }
    (checked, failures)
}

fn subterms(t: &Term, out: &mut BTreeMap<String, Term>) {
    if !matches!(t, Term::Kind) {
        out.entry(format!("{t:?}")).or_insert_with(|| t.clone());
    }
    match t {
        Term::App(f, a) => {
            subterms(f, out);
            subterms(a, out);
        }
        Term::Lam(_, d, b) => {
            if let Some(d) = d {
                subterms(d, out);
            }
            subterms(b, out);
        }
        Term::Pi(_, d, c) => {
            subterms(d, out);
            subterms(c, out);
        }
        _ => {}
    }
}

/// Distinct subterms, open ones included, of every type and definition body of the
/// signature, in a fixed order.
pub fn corpus_terms(sig: &Signature) -> Vec<Term> {
    let mut all = BTreeMap::new();
    for (_, e) in sig.iter() {
        subterms(&e.ty, &mut all);
        if let EntryKind::Defined { body } = &e.kind {
            subterms(body, &mut all);
        }
        for r in e.rules() {
            subterms(&r.rhs, &mut all);
        }
    }
    all.into_values().collect()
}

/// Terms `t` with `whnf(whnf t) ≠ whnf t`, among the first `n` corpus terms.
pub fn whnf_idempotence_failures(sig: &Signature, n: usize) -> (usize, Vec<String>) {
    let terms = corpus_terms(sig);
    let mut failures = Vec::new();
    let take = terms.len().min(n);
    for t in terms.iter().take(take) {
        let r = Reducer::new(sig, DEFAULT_FUEL);
        let w = r.whnf(t).unwrap();
        if !r.whnf(&w).unwrap().alpha_eq(&w) {
            failures.push(dkinterop::print_term(t));
        }
    }
    (take, failures)
}
