//! Reduction engine: β, δ (unfolding definitions) and signature rewrite
//! rules. Conversion has no η.
//!
//! Rules for a head symbol are tried in declaration order and the first match
//! wins. Matching reduces a subterm one head step at a time, and only until
//! its head exposes the constant the pattern asks for.

use std::cell::Cell;

use thiserror::Error;

use crate::signature::{EntryKind, Pattern, Signature};
use crate::term::{QName, Term};

pub const DEFAULT_FUEL: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("fuel exhausted: more than {0} reduction steps")]
    FuelExhausted(u64),
}

pub type Subst = Vec<Option<Term>>;

/// A reduction session over a signature with a step budget shared by every
/// operation performed through it.
pub struct Reducer<'s> {
    sig: &'s Signature,
    limit: u64,
    used: Cell<u64>,
}

impl<'s> Reducer<'s> {
    pub fn new(sig: &'s Signature, fuel: u64) -> Self {
        Reducer {
            sig,
            limit: fuel,
            used: Cell::new(0),
        }
    }

    pub fn signature(&self) -> &'s Signature {
        self.sig
    }

    pub fn steps(&self) -> u64 {
        self.used.get()
    }

    fn tick(&self) -> Result<(), ReduceError> {
        let n = self.used.get() + 1;
        if n > self.limit {
            return Err(ReduceError::FuelExhausted(self.limit));
        }
        self.used.set(n);
        Ok(())
    }

    /// One head reduction step, or `None` when the term is in weak-head
    /// normal form.
    pub fn head_step(&self, t: &Term) -> Result<Option<Term>, ReduceError> {
        let (head, args) = t.spine();
        match head {
            Term::Lam(_, _, body) if !args.is_empty() => {
                self.tick()?;
                let reduced = body.subst(args[0], 0);
                Ok(Some(Term::apps(reduced, args[1..].iter().map(|a| (*a).clone()))))
            }
            Term::Const(q) => {
                let Some(entry) = self.sig.get(q) else {
                    return Ok(None);
                };
                match &entry.kind {
                    EntryKind::Defined { body } => {
                        self.tick()?;
                        Ok(Some(Term::apps(body.clone(), args.into_iter().cloned())))
                    }
                    EntryKind::Definable { rules } => {
                        for rule in rules {
                            let n = rule.args.len();
                            if args.len() < n {
                                continue;
                            }
                            let mut sub: Subst = vec![None; rule.arity()];
                            if self.match_args(&rule.args, &args[..n], &mut sub)? {
                                self.tick()?;
                                let vals: Vec<Term> = sub
                                    .into_iter()
                                    .map(|v| v.expect("admitted rules bind every variable"))
                                    .collect();
                                let rhs = rule.rhs.instantiate(&vals);
                                return Ok(Some(Term::apps(rhs, args[n..].iter().map(|a| (*a).clone()))));
                            }
                        }
                        Ok(None)
                    }
                    EntryKind::Static => Ok(None),
                }
            }
            _ => Ok(None),
        }
    }

    pub fn whnf(&self, t: &Term) -> Result<Term, ReduceError> {
        let mut cur = t.clone();
        while let Some(next) = self.head_step(&cur)? {
            cur = next;
        }
        Ok(cur)
    }

    /// Strong normal form: weak-head normalizes, then recurses into every
    /// subterm, including under binders.
    pub fn snf(&self, t: &Term) -> Result<Term, ReduceError> {
        let w = self.whnf(t)?;
        Ok(match &w {
            Term::App(..) => {
                let (head, args) = w.spine();
                let head = match head {
                    Term::Var(_) | Term::Const(_) => head.clone(),
                    other => self.snf(other)?,
                };
                let args = args.into_iter().map(|a| self.snf(a)).collect::<Result<Vec<_>, _>>()?;
                Term::apps(head, args)
            }
            Term::Lam(x, d, b) => Term::lam(x, d.as_ref().map(|d| self.snf(d)).transpose()?, self.snf(b)?),
            Term::Pi(x, d, c) => Term::pi(x, self.snf(d)?, self.snf(c)?),
            _ => w,
        })
    }

    pub fn convertible(&self, t: &Term, u: &Term) -> Result<bool, ReduceError> {
        if t.alpha_eq(u) {
            return Ok(true);
        }
        let t = self.whnf(t)?;
        let u = self.whnf(u)?;
        match (&t, &u) {
            (Term::Kind, Term::Kind) | (Term::Type, Term::Type) => Ok(true),
            (Term::Lam(_, _, b1), Term::Lam(_, _, b2)) => self.convertible(b1, b2),
            (Term::Pi(_, d1, c1), Term::Pi(_, d2, c2)) => Ok(self.convertible(d1, d2)? && self.convertible(c1, c2)?),
            _ => {
                let (h1, a1) = t.spine();
                let (h2, a2) = u.spine();
                if a1.len() != a2.len() {
                    return Ok(false);
                }
                let same_head = match (h1, h2) {
                    (Term::Var(i), Term::Var(j)) => i == j,
                    (Term::Const(p), Term::Const(q)) => p == q,
                    _ => false,
                };
                if !same_head {
                    return Ok(false);
                }
                for (a, b) in a1.iter().zip(&a2) {
                    if !self.convertible(a, b)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    fn match_args(&self, pats: &[Pattern], args: &[&Term], sub: &mut Subst) -> Result<bool, ReduceError> {
        for (p, a) in pats.iter().zip(args) {
            if !self.match_pattern(p, a, sub)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Extends `sub` so that the pattern instantiated by it is convertible to
    /// `t`. Returns `false` on mismatch; `sub` may then be partially filled.
    pub fn match_pattern(&self, p: &Pattern, t: &Term, sub: &mut Subst) -> Result<bool, ReduceError> {
        match p {
            Pattern::Var(i) => match &sub[*i] {
                None => {
                    sub[*i] = Some(t.clone());
                    Ok(true)
                }
                Some(prev) => {
                    let prev = prev.clone();
                    self.convertible(&prev, t)
                }
            },
            Pattern::Const(h, pargs) => {
                let saved = sub.clone();
                let mut cur = t.clone();
                loop {
                    match self.match_spine(h, pargs, &cur, sub)? {
                        Some(true) => return Ok(true),
                        Some(false) => *sub = saved.clone(),
                        None => {}
                    }
                    match self.head_step(&cur)? {
                        Some(next) => cur = next,
                        None => return Ok(false),
                    }
                }
            }
        }
    }

    fn match_spine(
        &self,
        h: &QName,
        pargs: &[Pattern],
        t: &Term,
        sub: &mut Subst,
    ) -> Result<Option<bool>, ReduceError> {
        let (head, args) = t.spine();
        match head {
            Term::Const(q) if q == h && args.len() == pargs.len() => Ok(Some(self.match_args(pargs, &args, sub)?)),
            _ => Ok(None),
        }
    }

    /// For a term in weak-head normal form headed by a definable symbol,
    /// finds the argument subterm that blocks the first rule with enough
    /// arguments: the subterm whose head is not the constant the pattern
    /// requires. Returns it in weak-head normal form.
    pub fn blocking_subterm(&self, t: &Term) -> Result<Option<Term>, ReduceError> {
        let Some(q) = t.head_const() else {
            return Ok(None);
        };
        let Some(entry) = self.sig.get(q) else {
            return Ok(None);
        };
        let (_, args) = t.spine();
        for rule in entry.rules() {
            if args.len() < rule.args.len() {
                continue;
            }
            for (p, a) in rule.args.iter().zip(&args) {
                if let Some(b) = self.find_block(p, a)? {
                    return Ok(Some(b));
                }
            }
        }
        Ok(None)
    }

    fn find_block(&self, p: &Pattern, t: &Term) -> Result<Option<Term>, ReduceError> {
        let Pattern::Const(h, pargs) = p else {
            return Ok(None);
        };
        let w = self.whnf(t)?;
        let (head, args) = w.spine();
        match head {
            Term::Const(q) if q == h && args.len() == pargs.len() => {
                for (p, a) in pargs.iter().zip(&args) {
                    if let Some(b) = self.find_block(p, a)? {
                        return Ok(Some(b));
                    }
                }
                Ok(None)
            }
            _ => Ok(Some(w)),
        }
    }
}

pub fn whnf(sig: &Signature, t: &Term) -> Result<Term, ReduceError> {
    Reducer::new(sig, DEFAULT_FUEL).whnf(t)
}

pub fn snf(sig: &Signature, t: &Term) -> Result<Term, ReduceError> {
    Reducer::new(sig, DEFAULT_FUEL).snf(t)
}

pub fn are_convertible(sig: &Signature, t: &Term, u: &Term) -> Result<bool, ReduceError> {
    Reducer::new(sig, DEFAULT_FUEL).convertible(t, u)
}

/// Matches `p` against `t`, returning the substitution indexed by rule
/// variable on success.
pub fn match_pattern(p: &Pattern, t: &Term, sig: &Signature, arity: usize) -> Result<Option<Subst>, ReduceError> {
    let r = Reducer::new(sig, DEFAULT_FUEL);
    let mut sub = vec![None; arity];
    Ok(r.match_pattern(p, t, &mut sub)?.then_some(sub))
}
