//! Term syntax of the λΠ-calculus modulo rewriting.
//!
//! Bound variables are de Bruijn indices, global symbols are qualified
//! names. Binder names are kept only for display.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// A qualified global name, `module.name`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QName {
    pub module: Arc<str>,
    pub name: Arc<str>,
}

impl QName {
    pub fn new(module: &str, name: &str) -> Self {
        QName {
            module: module.into(),
            name: name.into(),
        }
    }

    /// Parses `module.name`. Returns `None` when there is no dot.
    pub fn parse(s: &str) -> Option<Self> {
        let (m, n) = s.split_once('.')?;
        if m.is_empty() || n.is_empty() || n.contains('.') {
            return None;
        }
        Some(QName::new(m, n))
    }
}

impl fmt::Display for QName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.module, self.name)
    }
}

pub type Binder = Arc<str>;

#[derive(Clone, Debug)]
pub enum Term {
    Kind,
    Type,
    Const(QName),
    Var(usize),
    App(Arc<Term>, Arc<Term>),
    Lam(Binder, Option<Arc<Term>>, Arc<Term>),
    Pi(Binder, Arc<Term>, Arc<Term>),
}

/// Raised when a downward shift would make a free index negative.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invariant violation: shifting Var({index}) by {amount} underflows")]
pub struct ScopeViolation {
    pub index: usize,
    pub amount: isize,
}

impl Term {
    pub fn constant(q: QName) -> Term {
        Term::Const(q)
    }

    pub fn cst(module: &str, name: &str) -> Term {
        Term::Const(QName::new(module, name))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Arc::new(f), Arc::new(a))
    }

    /// Left-nested application `f a1 ... an`.
    pub fn apps<I: IntoIterator<Item = Term>>(f: Term, args: I) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn lam(x: &str, dom: Option<Term>, body: Term) -> Term {
        Term::Lam(x.into(), dom.map(Arc::new), Arc::new(body))
    }

    pub fn pi(x: &str, dom: Term, cod: Term) -> Term {
        Term::Pi(x.into(), Arc::new(dom), Arc::new(cod))
    }

    /// Non-dependent arrow `dom -> cod`, where `cod` does not see the binder.
    pub fn arrow(dom: Term, cod: Term) -> Term {
        Term::pi("_", dom, cod.lift(1))
    }

    /// Splits `f a1 ... an` into `f` and `[a1, ..., an]`.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut t = self;
        while let Term::App(f, a) = t {
            args.push(&**a);
            t = f;
        }
        args.reverse();
        (t, args)
    }

    /// Head constant of the application spine, if any.
    pub fn head_const(&self) -> Option<&QName> {
        match self.spine().0 {
            Term::Const(q) => Some(q),
            _ => None,
        }
    }

    /// Shifts free indices `>= cutoff` by `amount`.
    pub fn shift(&self, cutoff: usize, amount: isize) -> Result<Term, ScopeViolation> {
        if amount == 0 {
            return Ok(self.clone());
        }
        self.shift_rec(cutoff, amount)
    }

    fn shift_rec(&self, cutoff: usize, amount: isize) -> Result<Term, ScopeViolation> {
        Ok(match self {
            Term::Var(k) if *k >= cutoff => {
                let moved = *k as isize + amount;
                if moved < cutoff as isize {
                    return Err(ScopeViolation { index: *k, amount });
                }
                Term::Var(moved as usize)
            }
            Term::Kind | Term::Type | Term::Const(_) | Term::Var(_) => self.clone(),
            Term::App(f, a) => Term::app(f.shift_rec(cutoff, amount)?, a.shift_rec(cutoff, amount)?),
            Term::Lam(x, d, b) => Term::Lam(
                x.clone(),
                d.as_ref()
                    .map(|d| d.shift_rec(cutoff, amount).map(Arc::new))
                    .transpose()?,
                Arc::new(b.shift_rec(cutoff + 1, amount)?),
            ),
            Term::Pi(x, d, c) => Term::Pi(
                x.clone(),
                Arc::new(d.shift_rec(cutoff, amount)?),
                Arc::new(c.shift_rec(cutoff + 1, amount)?),
            ),
        })
    }

    /// Upward shift of every free index; cannot fail.
    pub fn lift(&self, amount: usize) -> Term {
        if amount == 0 || self.is_closed() {
            return self.clone();
        }
        self.shift_rec(0, amount as isize)
            .expect("upward shift never underflows")
    }

    /// Capture-avoiding substitution of `replacement` for the free index
    /// `target`. Free indices above `target` are decremented; free indices of
    /// `replacement` are read in the context where `target` has been removed.
    pub fn subst(&self, replacement: &Term, target: usize) -> Term {
        self.subst_rec(replacement, target, 0)
    }

    fn subst_rec(&self, r: &Term, target: usize, depth: usize) -> Term {
        match self {
            Term::Var(k) if *k < depth => self.clone(),
            Term::Var(k) => {
                let free = k - depth;
                if free == target {
                    r.lift(depth)
                } else if free > target {
                    Term::Var(k - 1)
                } else {
                    self.clone()
                }
            }
            Term::Kind | Term::Type | Term::Const(_) => self.clone(),
            Term::App(f, a) => Term::app(f.subst_rec(r, target, depth), a.subst_rec(r, target, depth)),
            Term::Lam(x, d, b) => Term::Lam(
                x.clone(),
                d.as_ref().map(|d| Arc::new(d.subst_rec(r, target, depth))),
                Arc::new(b.subst_rec(r, target, depth + 1)),
            ),
            Term::Pi(x, d, c) => Term::Pi(
                x.clone(),
                Arc::new(d.subst_rec(r, target, depth)),
                Arc::new(c.subst_rec(r, target, depth + 1)),
            ),
        }
    }

    /// Substitutes the free indices `0..values.len()` simultaneously:
    /// `Var(i)` becomes `values[i]`, higher indices drop by `values.len()`.
    /// The values live in the outer context.
    pub fn instantiate(&self, values: &[Term]) -> Term {
        self.inst_rec(values, 0)
    }

    fn inst_rec(&self, vals: &[Term], depth: usize) -> Term {
        match self {
            Term::Var(k) if *k < depth => self.clone(),
            Term::Var(k) => {
                let free = k - depth;
                match vals.get(free) {
                    Some(v) => v.lift(depth),
                    None => Term::Var(k - vals.len()),
                }
            }
            Term::Kind | Term::Type | Term::Const(_) => self.clone(),
            Term::App(f, a) => Term::app(f.inst_rec(vals, depth), a.inst_rec(vals, depth)),
            Term::Lam(x, d, b) => Term::Lam(
                x.clone(),
                d.as_ref().map(|d| Arc::new(d.inst_rec(vals, depth))),
                Arc::new(b.inst_rec(vals, depth + 1)),
            ),
            Term::Pi(x, d, c) => Term::Pi(
                x.clone(),
                Arc::new(d.inst_rec(vals, depth)),
                Arc::new(c.inst_rec(vals, depth + 1)),
            ),
        }
    }

    /// α-equivalence: structural equality ignoring binder names.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        match (self, other) {
            (Term::Kind, Term::Kind) | (Term::Type, Term::Type) => true,
            (Term::Const(a), Term::Const(b)) => a == b,
            (Term::Var(a), Term::Var(b)) => a == b,
            (Term::App(f, a), Term::App(g, b)) => f.alpha_eq(g) && a.alpha_eq(b),
            (Term::Lam(_, d1, b1), Term::Lam(_, d2, b2)) => {
                let doms = match (d1, d2) {
                    (None, None) => true,
                    (Some(a), Some(b)) => a.alpha_eq(b),
                    _ => false,
                };
                doms && b1.alpha_eq(b2)
            }
            (Term::Pi(_, d1, c1), Term::Pi(_, d2, c2)) => d1.alpha_eq(d2) && c1.alpha_eq(c2),
            _ => false,
        }
    }

    /// True when the term has no free indices.
    pub fn is_closed(&self) -> bool {
        self.max_free_index(0).is_none()
    }

    /// Largest free index relative to the outside of this term.
    pub fn max_free_index(&self, depth: usize) -> Option<usize> {
        match self {
            Term::Var(k) if *k >= depth => Some(k - depth),
            Term::Kind | Term::Type | Term::Const(_) | Term::Var(_) => None,
            Term::App(f, a) => f.max_free_index(depth).max(a.max_free_index(depth)),
            Term::Lam(_, d, b) => d
                .as_ref()
                .and_then(|d| d.max_free_index(depth))
                .max(b.max_free_index(depth + 1)),
            Term::Pi(_, d, c) => d.max_free_index(depth).max(c.max_free_index(depth + 1)),
        }
    }

    /// Whether free index `idx` occurs in the term.
    pub fn has_free(&self, idx: usize) -> bool {
        self.has_free_rec(idx, 0)
    }

    fn has_free_rec(&self, idx: usize, depth: usize) -> bool {
        match self {
            Term::Var(k) => *k == idx + depth,
            Term::Kind | Term::Type | Term::Const(_) => false,
            Term::App(f, a) => f.has_free_rec(idx, depth) || a.has_free_rec(idx, depth),
            Term::Lam(_, d, b) => {
                d.as_ref().is_some_and(|d| d.has_free_rec(idx, depth)) || b.has_free_rec(idx, depth + 1)
            }
            Term::Pi(_, d, c) => d.has_free_rec(idx, depth) || c.has_free_rec(idx, depth + 1),
        }
    }

    /// Calls `f` on every constant occurrence.
    pub fn for_each_const<F: FnMut(&QName)>(&self, f: &mut F) {
        match self {
            Term::Const(q) => f(q),
            Term::Kind | Term::Type | Term::Var(_) => {}
            Term::App(g, a) => {
                g.for_each_const(f);
                a.for_each_const(f);
            }
            Term::Lam(_, d, b) => {
                if let Some(d) = d {
                    d.for_each_const(f);
                }
                b.for_each_const(f);
            }
            Term::Pi(_, d, c) => {
                d.for_each_const(f);
                c.for_each_const(f);
            }
        }
    }

    pub fn contains_kind(&self) -> bool {
        match self {
            Term::Kind => true,
            Term::Type | Term::Const(_) | Term::Var(_) => false,
            Term::App(f, a) => f.contains_kind() || a.contains_kind(),
            Term::Lam(_, d, b) => d.as_ref().is_some_and(|d| d.contains_kind()) || b.contains_kind(),
            Term::Pi(_, d, c) => d.contains_kind() || c.contains_kind(),
        }
    }

    /// Number of nodes, used by generators and diagnostics.
    pub fn size(&self) -> usize {
        match self {
            Term::Kind | Term::Type | Term::Const(_) | Term::Var(_) => 1,
            Term::App(f, a) => 1 + f.size() + a.size(),
            Term::Lam(_, d, b) => 1 + d.as_ref().map_or(0, |d| d.size()) + b.size(),
            Term::Pi(_, d, c) => 1 + d.size() + c.size(),
        }
    }
}

/// Structural equality up to α-conversion.
impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        self.alpha_eq(other)
    }
}

impl Eq for Term {}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::printer::print_term(self))
    }
}

/// Typing context for inference under binders, innermost entry last.
#[derive(Clone, Debug, Default)]
pub struct LocalContext {
    entries: Vec<(Binder, Term)>,
}

impl LocalContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, name: Binder, ty: Term) {
        self.entries.push((name, ty));
    }

    pub fn pop(&mut self) {
        self.entries.pop();
    }

    /// Type of `Var(index)`, shifted into the current context.
    pub fn lookup(&self, index: usize) -> Option<Term> {
        let pos = self.entries.len().checked_sub(index + 1)?;
        Some(self.entries[pos].1.lift(index + 1))
    }

    /// Display names, outermost first.
    pub fn names(&self) -> Vec<String> {
        self.entries.iter().map(|(n, _)| n.to_string()).collect()
    }

    pub fn entries(&self) -> &[(Binder, Term)] {
        &self.entries
    }
}
