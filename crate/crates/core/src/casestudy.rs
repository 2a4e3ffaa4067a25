//! The sorting case study: manifest handling, theorem statements, the
//! stuckness demonstration, dependency audits and proof mutations.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::parser::{parse_term, ItemKind, SourceItem};
use crate::printer::print_term;
use crate::rewrite::{ReduceError, Reducer};
use crate::signature::{EntryKind, Signature};
use crate::term::{QName, Term};

pub use crate::theories::{corpus_holnat, corpus_interop, corpus_sort};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ManifestError {
    pub line: usize,
    pub message: String,
}

/// Ordered list of files plus expected theorem statements.
///
/// One file name per line; `#` starts a comment. A line
/// `theorem <qname> : <term>` records the expected type of a constant.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CorpusManifest {
    pub files: Vec<String>,
    pub theorems: Vec<(QName, String)>,
}

impl CorpusManifest {
    pub fn parse(text: &str) -> Result<CorpusManifest, ManifestError> {
        let mut m = CorpusManifest::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: &str| ManifestError {
                line: i + 1,
                message: message.to_string(),
            };
            if let Some(rest) = line.strip_prefix("theorem ") {
                let (name, ty) = rest
                    .split_once(" : ")
                    .ok_or_else(|| err("expected `theorem <name> : <type>`"))?;
                let name = QName::parse(name.trim()).ok_or_else(|| err("theorem name must be qualified"))?;
                m.theorems.push((name, ty.trim().to_string()));
            } else if line.split_whitespace().count() == 1 {
                m.files.push(line.to_string());
            } else {
                return Err(err("expected a single file name"));
            }
        }
        Ok(m)
    }

    pub fn embedded() -> CorpusManifest {
        CorpusManifest::parse(crate::theories::MANIFEST).expect("embedded manifest parses")
    }
}

fn q(module: &str, name: &str) -> Term {
    Term::cst(module, name)
}

/// The element type of the instantiated development.
pub fn nat_carrier() -> Term {
    q("interop", "nat_carrier")
}

/// Unary HOL numeral `suc (... (suc zero))`.
pub fn encode_nat(n: u64) -> Term {
    (0..n).fold(q("nat", "zero"), |t, _| Term::app(q("nat", "suc"), t))
}

pub fn decode_nat(t: &Term) -> Option<u64> {
    let mut n = 0;
    let mut cur = t;
    loop {
        let (head, args) = cur.spine();
        match (head.head_const().map(|c| (&*c.module, &*c.name)), args.as_slice()) {
            (Some(("nat", "zero")), []) => return Some(n),
            (Some(("nat", "suc")), [x]) => {
                n += 1;
                cur = x;
            }
            _ => return None,
        }
    }
}

/// A list of numerals as a `Datatypes.list` over `elem`.
pub fn encode_list(elem: &Term, values: &[u64]) -> Term {
    values
        .iter()
        .rev()
        .fold(Term::app(q("Datatypes", "nil"), elem.clone()), |l, v| {
            Term::apps(q("Datatypes", "cons"), [elem.clone(), encode_nat(*v), l])
        })
}

/// Inverse of [`encode_list`] on normal forms.
pub fn decode_list(t: &Term) -> Option<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = t;
    loop {
        let (head, args) = cur.spine();
        match (head.head_const().map(|c| (&*c.module, &*c.name)), args.as_slice()) {
            (Some(("Datatypes", "nil")), [_]) => return Some(out),
            (Some(("Datatypes", "cons")), [_, x, rest]) => {
                out.push(decode_nat(x)?);
                cur = rest;
            }
            _ => return None,
        }
    }
}

/// `sort.insertion_sort <elem> <compare> <list>`.
pub fn sort_term(elem: &Term, compare: &Term, list: &Term) -> Term {
    Term::apps(
        q("sort", "insertion_sort"),
        [elem.clone(), compare.clone(), list.clone()],
    )
}

/// Result of normalizing the sorting of a concrete list.
#[derive(Clone, Debug)]
pub struct StucknessReport {
    pub input: Vec<u64>,
    pub term: Term,
    pub normal_form: Term,
    /// Head symbol of the normal form.
    pub head: Option<QName>,
    /// Innermost subterm that blocks reduction, if the normal form is stuck.
    pub blocked_on: Option<Term>,
    /// Whether the normal form is a `cons` cell.
    pub cons_headed: bool,
    /// The normal form read back as a list of numerals, when it is one.
    pub decoded: Option<Vec<u64>>,
}

impl fmt::Display for StucknessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let input: Vec<String> = self.input.iter().map(u64::to_string).collect();
        writeln!(f, "input: [{}]", input.join(", "))?;
        writeln!(f, "term: {}", print_term(&self.term))?;
        writeln!(f, "normal_form: {}", print_term(&self.normal_form))?;
        let head = self.head.as_ref().map_or("none".to_string(), QName::to_string);
        writeln!(f, "stuck_head: {head}")?;
        let blocked = self.blocked_on.as_ref().map_or("none".to_string(), print_term);
        writeln!(f, "blocked_on: {blocked}")?;
        writeln!(f, "cons_headed: {}", self.cons_headed)?;
        match &self.decoded {
            Some(v) => {
                let v: Vec<String> = v.iter().map(u64::to_string).collect();
                writeln!(f, "decoded: [{}]", v.join(", "))
            }
            None => writeln!(f, "decoded: none"),
        }
    }
}

/// Normalizes `insertion_sort compare ⟦values⟧` and describes where the
/// computation stops.
pub fn sort_report(sig: &Signature, compare: &Term, values: &[u64], fuel: u64) -> Result<StucknessReport, ReduceError> {
    let elem = nat_carrier();
    let term = sort_term(&elem, compare, &encode_list(&elem, values));
    let red = Reducer::new(sig, fuel);
    let nf = red.snf(&term)?;
    let head = nf.head_const().cloned();
    let cons_headed = head
        .as_ref()
        .is_some_and(|h| &*h.module == "Datatypes" && &*h.name == "cons");
    let stuck = head
        .as_ref()
        .is_some_and(|h| sig.get(h).is_some_and(|e| e.is_definable()));
    let blocked_on = if stuck { innermost_block(&red, &nf)? } else { None };
    Ok(StucknessReport {
        input: values.to_vec(),
        term,
        decoded: decode_list(&nf),
        normal_form: nf,
        head,
        blocked_on,
        cons_headed,
    })
}

/// Follows blocking subterms down to one whose head has no rules at all.
fn innermost_block(red: &Reducer, t: &Term) -> Result<Option<Term>, ReduceError> {
    let mut cur = red.blocking_subterm(t)?;
    while let Some(b) = &cur {
        let definable = b
            .head_const()
            .and_then(|h| red.signature().get(h))
            .is_some_and(|e| !e.rules().is_empty());
        if !definable {
            break;
        }
        match red.blocking_subterm(b)? {
            Some(next) => cur = Some(next),
            None => break,
        }
    }
    Ok(cur)
}

/// The demonstration list.
pub const DEMO_LIST: [u64; 4] = [4, 1, 3, 2];

/// Sorting the demonstration list with the comparison of HOL, which has no
/// computational content.
pub fn demo_stuckness(sig: &Signature, fuel: u64) -> Result<StucknessReport, ReduceError> {
    sort_report(sig, &q("interop", "compare"), &DEMO_LIST, fuel)
}

/// Every constant occurring in `t`.
pub fn constants(t: &Term) -> BTreeSet<QName> {
    let mut out = BTreeSet::new();
    t.for_each_const(&mut |c: &QName| {
        out.insert(c.clone());
    });
    out
}

/// Static constants reachable from the body of `name`, unfolding
/// definitions transitively. Types are not followed.
pub fn axioms_used(sig: &Signature, name: &QName) -> BTreeSet<QName> {
    let mut seen = BTreeSet::new();
    let mut axioms = BTreeSet::new();
    let mut todo = vec![name.clone()];
    while let Some(c) = todo.pop() {
        if !seen.insert(c.clone()) {
            continue;
        }
        match sig.get(&c).map(|e| &e.kind) {
            Some(EntryKind::Defined { body }) => todo.extend(constants(body)),
            Some(EntryKind::Static) => {
                axioms.insert(c);
            }
            _ => {}
        }
    }
    axioms
}

/// HOL lemmas the proof of `name` relies on: reachable static constants of
/// the HOL library modules whose type is a proof.
pub fn hol_lemmas_used(sig: &Signature, name: &QName) -> BTreeSet<QName> {
    axioms_used(sig, name)
        .into_iter()
        .filter(|c| matches!(&*c.module, "nat" | "bool"))
        .filter(|c| sig.get(c).is_some_and(|e| is_proof_type(&e.ty)))
        .collect()
}

fn is_proof_type(t: &Term) -> bool {
    let mut cur = t;
    while let Term::Pi(_, _, c) = cur {
        cur = c;
    }
    cur.head_const()
        .is_some_and(|h| &*h.name == "proof" && matches!(&*h.module, "hol" | "coq"))
}

/// Parses a fully qualified term; handy in tests and demos.
pub fn term(text: &str) -> Term {
    parse_term(text, "", &[]).unwrap_or_else(|e| panic!("{text}: {e}"))
}

/// A single-node change to a definition body.
#[derive(Clone, Debug)]
pub struct Mutation {
    pub item: usize,
    pub description: String,
    pub items: Vec<SourceItem>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum MutKind {
    DropArgument,
    SwapArguments,
    ReplaceConstant,
}

/// Generates up to `per_kind` mutations of each kind for every definition
/// of `items`, in source order. Replacement constants are taken from
/// `replacements` and must have a type different from the one replaced.
pub fn mutations(items: &[SourceItem], sig: &Signature, replacements: &[QName], per_def: usize) -> Vec<Mutation> {
    let mut out = Vec::new();
    for (i, item) in items.iter().enumerate() {
        let ItemKind::Definition { name, ty, body } = &item.kind else {
            continue;
        };
        for kind in [MutKind::DropArgument, MutKind::SwapArguments, MutKind::ReplaceConstant] {
            let mut budget = per_def;
            let mut site = 0;
            while budget > 0 {
                let mut counter = site;
                let Some((mutated, what)) = mutate_at(body, kind, &mut counter, sig, replacements) else {
                    break;
                };
                site += 1;
                let mut new_items = items.to_vec();
                new_items[i].kind = ItemKind::Definition {
                    name: name.clone(),
                    ty: ty.clone(),
                    body: mutated,
                };
                out.push(Mutation {
                    item: i,
                    description: format!("{name}: {what}"),
                    items: new_items,
                });
                budget -= 1;
            }
        }
    }
    out
}

/// Applies `kind` at the `n`-th eligible node in prefix order.
fn mutate_at(t: &Term, kind: MutKind, n: &mut usize, sig: &Signature, repl: &[QName]) -> Option<(Term, String)> {
    let here = match (kind, t) {
        (MutKind::DropArgument, Term::App(f, a)) => Some(((**f).clone(), format!("drop argument {}", print_term(a)))),
        (MutKind::SwapArguments, Term::App(f, b)) => match &**f {
            Term::App(g, a) if !a.alpha_eq(b) => Some((
                Term::app(Term::app((**g).clone(), (**b).clone()), (**a).clone()),
                format!("swap {} and {}", print_term(a), print_term(b)),
            )),
            _ => None,
        },
        (MutKind::ReplaceConstant, Term::Const(c)) => {
            let ty = sig.get(c).map(|e| &e.ty);
            repl.iter()
                .find(|r| *r != c && sig.get(r).map(|e| &e.ty) != ty)
                .map(|r| (Term::Const(r.clone()), format!("replace {c} by {r}")))
        }
        _ => None,
    };
    if let Some(m) = here {
        if *n == 0 {
            return Some(m);
        }
        *n -= 1;
    }
    match t {
        Term::App(f, a) => {
            if let Some((f2, d)) = mutate_at(f, kind, n, sig, repl) {
                return Some((Term::app(f2, (**a).clone()), d));
            }
            mutate_at(a, kind, n, sig, repl).map(|(a2, d)| (Term::app((**f).clone(), a2), d))
        }
        Term::Lam(x, d, b) => {
            if let Some(dom) = d {
                if let Some((d2, w)) = mutate_at(dom, kind, n, sig, repl) {
                    return Some((Term::lam(x, Some(d2), (**b).clone()), w));
                }
            }
            mutate_at(b, kind, n, sig, repl).map(|(b2, w)| (Term::lam(x, d.as_deref().cloned(), b2), w))
        }
        Term::Pi(x, d, c) => {
            if let Some((d2, w)) = mutate_at(d, kind, n, sig, repl) {
                return Some((Term::pi(x, d2, (**c).clone()), w));
            }
            mutate_at(c, kind, n, sig, repl).map(|(c2, w)| (Term::pi(x, (**d).clone(), c2), w))
        }
        _ => None,
    }
}
