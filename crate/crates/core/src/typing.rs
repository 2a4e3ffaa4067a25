//! Bidirectional type checking for λΠ-modulo and admission of signature
//! items.
//!
//! Inference weak-head normalizes only where a Π-type or a sort has to be
//! exposed; everything else goes through conversion.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::parser::{ItemKind, Pos, SourceItem};
use crate::printer::print_term_in;
use crate::rewrite::{ReduceError, Reducer, DEFAULT_FUEL};
use crate::signature::{Entry, EntryKind, Pattern, RewriteRule, Signature};
use crate::term::{LocalContext, QName, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TypeErrorKind {
    Mismatch,
    NotAFunction,
    NotInferable,
    Unbound,
    SortError,
    RuleError,
    Redefinition,
    FuelExhausted,
}

impl fmt::Display for TypeErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TypeErrorKind::Mismatch => "type mismatch",
            TypeErrorKind::NotAFunction => "not a function",
            TypeErrorKind::NotInferable => "not inferable",
            TypeErrorKind::Unbound => "unbound",
            TypeErrorKind::SortError => "sort error",
            TypeErrorKind::RuleError => "rule error",
            TypeErrorKind::Redefinition => "redefinition",
            TypeErrorKind::FuelExhausted => "fuel exhausted",
        })
    }
}

/// A term reported in an error, with the names of its free variables.
#[derive(Clone, Debug)]
pub struct Shown {
    pub raw: Term,
    pub whnf: Option<Term>,
    pub names: Vec<String>,
}

impl Shown {
    fn render(&self, raw: bool) -> String {
        let t = if raw {
            &self.raw
        } else {
            self.whnf.as_ref().unwrap_or(&self.raw)
        };
        print_term_in(t, &self.names)
    }
}

#[derive(Clone, Debug, Error)]
#[error("{}", self.render(false))]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub message: String,
    pub expected: Option<Box<Shown>>,
    pub actual: Option<Box<Shown>>,
    pub location: Option<Pos>,
}

impl TypeError {
    pub fn new(kind: TypeErrorKind, message: impl Into<String>) -> Self {
        TypeError {
            kind,
            message: message.into(),
            expected: None,
            actual: None,
            location: None,
        }
    }

    pub fn at(mut self, pos: Pos) -> Self {
        self.location.get_or_insert(pos);
        self
    }

    /// Renders the error; both terms are shown in weak-head normal form
    /// unless `raw` is set.
    pub fn render(&self, raw: bool) -> String {
        let mut s = String::new();
        if let Some(p) = self.location {
            s.push_str(&format!("{p}: "));
        }
        s.push_str(&format!("{}: {}", self.kind, self.message));
        if let Some(e) = &self.expected {
            s.push_str(&format!("\n  expected: {}", e.render(raw)));
        }
        if let Some(a) = &self.actual {
            s.push_str(&format!("\n  actual:   {}", a.render(raw)));
        }
        s
    }
}

impl From<ReduceError> for TypeError {
    fn from(e: ReduceError) -> Self {
        let ReduceError::FuelExhausted(n) = e;
        TypeError::new(TypeErrorKind::FuelExhausted, format!("more than {n} reduction steps"))
    }
}

pub type TypeResult<T> = Result<T, TypeError>;

/// Checker state: a signature, a reduction budget, and optionally extra
/// opaque constants (used for rule variables while checking a rule).
pub struct Typer<'s> {
    sig: &'s Signature,
    red: Reducer<'s>,
    extra: HashMap<QName, Term>,
}

impl<'s> Typer<'s> {
    pub fn new(sig: &'s Signature, fuel: u64) -> Self {
        Typer {
            sig,
            red: Reducer::new(sig, fuel),
            extra: HashMap::new(),
        }
    }

    pub fn reducer(&self) -> &Reducer<'s> {
        &self.red
    }

    fn const_type(&self, q: &QName) -> Option<Term> {
        self.extra
            .get(q)
            .cloned()
            .or_else(|| self.sig.get(q).map(|e| e.ty.clone()))
    }

    fn shown(&self, t: &Term, ctx: &LocalContext) -> Box<Shown> {
        Box::new(Shown {
            raw: t.clone(),
            whnf: self.red.whnf(t).ok(),
            names: ctx.names(),
        })
    }

    fn mismatch(&self, ctx: &LocalContext, expected: &Term, actual: &Term, msg: String) -> TypeError {
        TypeError {
            kind: TypeErrorKind::Mismatch,
            message: msg,
            expected: Some(self.shown(expected, ctx)),
            actual: Some(self.shown(actual, ctx)),
            location: None,
        }
    }

    fn conv(&self, a: &Term, b: &Term) -> TypeResult<bool> {
        Ok(self.red.convertible(a, b)?)
    }

    /// Infers the sort of `t` and requires it to be `Type` or `Kind`.
    pub fn sort_of(&self, ctx: &mut LocalContext, t: &Term) -> TypeResult<Term> {
        let s = self.infer(ctx, t)?;
        let w = self.red.whnf(&s)?;
        match w {
            Term::Type | Term::Kind => Ok(w),
            _ => Err(TypeError {
                kind: TypeErrorKind::SortError,
                message: format!("`{}` is not a type", print_term_in(t, &ctx.names())),
                expected: None,
                actual: Some(self.shown(&s, ctx)),
                location: None,
            }),
        }
    }

    /// Requires `t : Type`, i.e. `t` may be the domain of a binder.
    fn require_type(&self, ctx: &mut LocalContext, t: &Term) -> TypeResult<()> {
        match self.sort_of(ctx, t)? {
            Term::Type => Ok(()),
            _ => Err(TypeError::new(
                TypeErrorKind::SortError,
                format!(
                    "binder domain `{}` is a kind, not a type",
                    print_term_in(t, &ctx.names())
                ),
            )),
        }
    }

    pub fn infer(&self, ctx: &mut LocalContext, t: &Term) -> TypeResult<Term> {
        match t {
            Term::Kind => Err(TypeError::new(TypeErrorKind::SortError, "`Kind` has no type")),
            Term::Type => Ok(Term::Kind),
            Term::Var(k) => ctx
                .lookup(*k)
                .ok_or_else(|| TypeError::new(TypeErrorKind::Unbound, format!("variable index {k} is out of scope"))),
            Term::Const(q) => self
                .const_type(q)
                .ok_or_else(|| TypeError::new(TypeErrorKind::Unbound, format!("unknown constant `{q}`"))),
            Term::App(f, a) => {
                let tf = self.infer(ctx, f)?;
                match self.red.whnf(&tf)? {
                    Term::Pi(_, dom, cod) => {
                        self.check(ctx, a, &dom)?;
                        Ok(cod.subst(a, 0))
                    }
                    _ => Err(TypeError {
                        kind: TypeErrorKind::NotAFunction,
                        message: format!(
                            "`{}` is applied but its type is not a product",
                            print_term_in(f, &ctx.names())
                        ),
                        expected: None,
                        actual: Some(self.shown(&tf, ctx)),
                        location: None,
                    }),
                }
            }
            Term::Lam(x, Some(dom), body) => {
                self.require_type(ctx, dom)?;
                ctx.push(x.clone(), (**dom).clone());
                let tb = self.infer(ctx, body);
                ctx.pop();
                let tb = tb?;
                if matches!(tb, Term::Kind) {
                    return Err(TypeError::new(
                        TypeErrorKind::SortError,
                        "abstraction body is a type family; only terms may be abstracted",
                    ));
                }
                Ok(Term::Pi(x.clone(), dom.clone(), tb.into()))
            }
            Term::Lam(x, None, _) => Err(TypeError::new(
                TypeErrorKind::NotInferable,
                format!("cannot infer the type of unannotated abstraction over `{x}`"),
            )),
            Term::Pi(x, dom, cod) => {
                self.require_type(ctx, dom)?;
                ctx.push(x.clone(), (**dom).clone());
                let s = self.sort_of(ctx, cod);
                ctx.pop();
                s
            }
        }
    }

    pub fn check(&self, ctx: &mut LocalContext, t: &Term, expected: &Term) -> TypeResult<()> {
        if let Term::Lam(x, dom, body) = t {
            let w = self.red.whnf(expected)?;
            let Term::Pi(_, a, b) = &w else {
                return Err(self.mismatch(
                    ctx,
                    expected,
                    &Term::arrow(dom.as_deref().cloned().unwrap_or(Term::Type), Term::Type),
                    "an abstraction is checked against a non-product type".into(),
                ));
            };
            if let Some(d) = dom {
                self.require_type(ctx, d)?;
                if !self.conv(d, a)? {
                    return Err(self.mismatch(ctx, a, d, format!("domain annotation of `{x}`")));
                }
            }
            ctx.push(x.clone(), (**a).clone());
            let r = self.check(ctx, body, b);
            ctx.pop();
            return r;
        }
        let actual = self.infer(ctx, t)?;
        if self.conv(&actual, expected)? {
            Ok(())
        } else {
            Err(self.mismatch(
                ctx,
                expected,
                &actual,
                format!("`{}` has the wrong type", print_term_in(t, &ctx.names())),
            ))
        }
    }

    /// Type-preservation check for a rewrite rule. Rule variables become
    /// fresh opaque constants whose types are read off the head symbol's type
    /// while walking the pattern spine left to right.
    pub fn check_rule(&mut self, rule: &RewriteRule) -> TypeResult<()> {
        let n = rule.arity();
        let consts: Vec<Term> = (0..n)
            .map(|i| {
                let name = &rule.context[n - 1 - i];
                Term::Const(QName::new("$", &format!("{name}#{i}")))
            })
            .collect();
        let mut assigned: Vec<Option<Term>> = vec![None; n];
        let lhs = Pattern::Const(rule.head.clone(), rule.args.clone());
        let result = self.pattern_type(&lhs, &consts, &mut assigned).and_then(|(_, lhs_ty)| {
            if let Some(i) = assigned.iter().position(Option::is_none) {
                return Err(TypeError::new(
                    TypeErrorKind::RuleError,
                    format!("cannot infer the type of rule variable `{}`", rule.context[n - 1 - i]),
                ));
            }
            let rhs = rule.rhs.instantiate(&consts);
            let mut ctx = LocalContext::new();
            self.check(&mut ctx, &rhs, &lhs_ty).map_err(|e| TypeError {
                kind: TypeErrorKind::RuleError,
                message: format!("right-hand side of rule for `{}`: {}", rule.head, e.message),
                ..e
            })
        });
        self.extra.clear();
        result
    }

    fn pattern_type(
        &mut self,
        p: &Pattern,
        consts: &[Term],
        assigned: &mut Vec<Option<Term>>,
    ) -> TypeResult<(Term, Term)> {
        let Pattern::Const(h, args) = p else {
            unreachable!("pattern_type is only called on constant-headed patterns")
        };
        let mut ty = self
            .const_type(h)
            .ok_or_else(|| TypeError::new(TypeErrorKind::RuleError, format!("unknown symbol `{h}` in pattern")))?;
        let mut cur = Term::Const(h.clone());
        for arg in args {
            let w = self.red.whnf(&ty)?;
            let Term::Pi(_, dom, cod) = w else {
                return Err(TypeError::new(
                    TypeErrorKind::RuleError,
                    format!("`{h}` is applied to too many arguments in pattern"),
                ));
            };
            let arg_term = match arg {
                Pattern::Var(i) => {
                    match &assigned[*i] {
                        None => {
                            assigned[*i] = Some((*dom).clone());
                            if let Term::Const(q) = &consts[*i] {
                                self.extra.insert(q.clone(), (*dom).clone());
                            }
                        }
                        Some(prev) => {
                            if !self.conv(prev, &dom)? {
                                let mut e = self.mismatch(
                                    &LocalContext::new(),
                                    &dom,
                                    prev,
                                    "nonlinear rule variable used at two different types".into(),
                                );
                                e.kind = TypeErrorKind::RuleError;
                                return Err(e);
                            }
                        }
                    }
                    consts[*i].clone()
                }
                Pattern::Const(..) => {
                    let (t, t_ty) = self.pattern_type(arg, consts, assigned)?;
                    if !self.conv(&t_ty, &dom)? {
                        let mut e = self.mismatch(
                            &LocalContext::new(),
                            &dom,
                            &t_ty,
                            format!("ill-typed subpattern `{}`", crate::printer::print_term(&t)),
                        );
                        e.kind = TypeErrorKind::RuleError;
                        return Err(e);
                    }
                    t
                }
            };
            ty = cod.subst(&arg_term, 0);
            cur = Term::app(cur, arg_term);
        }
        Ok((cur, ty))
    }
}

pub fn infer(sig: &Signature, ctx: &mut LocalContext, t: &Term) -> TypeResult<Term> {
    Typer::new(sig, DEFAULT_FUEL).infer(ctx, t)
}

pub fn check(sig: &Signature, ctx: &mut LocalContext, t: &Term, expected: &Term) -> TypeResult<()> {
    Typer::new(sig, DEFAULT_FUEL).check(ctx, t, expected)
}

pub fn check_rule(sig: &Signature, rule: &RewriteRule) -> TypeResult<()> {
    Typer::new(sig, DEFAULT_FUEL).check_rule(rule)
}

impl Signature {
    /// Checks `item` against the current signature and extends it. The
    /// signature is unchanged on error. Commands (`#EVAL`, `#ASSERT`) leave
    /// it unchanged.
    pub fn admit(&mut self, item: &SourceItem, fuel: u64) -> TypeResult<()> {
        self.admit_kind(&item.kind, fuel).map_err(|e| e.at(item.pos))
    }

    fn admit_kind(&mut self, kind: &ItemKind, fuel: u64) -> TypeResult<()> {
        let fresh = |sig: &Signature, q: &QName| {
            if sig.contains(q) {
                Err(TypeError::new(
                    TypeErrorKind::Redefinition,
                    format!("`{q}` is already defined"),
                ))
            } else {
                Ok(())
            }
        };
        match kind {
            ItemKind::StaticDecl { name, ty } | ItemKind::DefinableDecl { name, ty } => {
                fresh(self, name)?;
                Typer::new(self, fuel).sort_of(&mut LocalContext::new(), ty)?;
                let kind = if matches!(kind, ItemKind::StaticDecl { .. }) {
                    EntryKind::Static
                } else {
                    EntryKind::Definable { rules: Vec::new() }
                };
                self.insert(name.clone(), Entry { ty: ty.clone(), kind });
            }
            ItemKind::Definition { name, ty, body } => {
                fresh(self, name)?;
                let typer = Typer::new(self, fuel);
                let mut ctx = LocalContext::new();
                let ty = match ty {
                    Some(ty) => {
                        typer.sort_of(&mut ctx, ty)?;
                        typer.check(&mut ctx, body, ty)?;
                        ty.clone()
                    }
                    None => {
                        let ty = typer.infer(&mut ctx, body)?;
                        if matches!(ty, Term::Kind) {
                            return Err(TypeError::new(
                                TypeErrorKind::SortError,
                                format!("`{name}` would be a definition of a kind"),
                            ));
                        }
                        ty
                    }
                };
                self.insert(
                    name.clone(),
                    Entry {
                        ty,
                        kind: EntryKind::Defined { body: body.clone() },
                    },
                );
            }
            ItemKind::RewriteRule { context, lhs, rhs } => {
                let names = context.iter().map(|(x, _)| x.clone()).collect();
                let rule = RewriteRule::new(names, lhs, rhs.clone())
                    .map_err(|m| TypeError::new(TypeErrorKind::RuleError, m))?;
                match self.get(&rule.head).map(|e| &e.kind) {
                    None => {
                        return Err(TypeError::new(
                            TypeErrorKind::Unbound,
                            format!("unknown constant `{}`", rule.head),
                        ))
                    }
                    Some(EntryKind::Definable { .. }) => {}
                    Some(_) => {
                        return Err(TypeError::new(
                            TypeErrorKind::RuleError,
                            format!("`{}` is not definable; rules cannot be attached to it", rule.head),
                        ))
                    }
                }
                Typer::new(self, fuel).check_rule(&rule)?;
                self.push_rule(rule);
            }
            ItemKind::Eval(_) | ItemKind::Assert(..) => {}
        }
        Ok(())
    }
}

/// Functional form of [`Signature::admit`]: returns the extended signature.
pub fn admit_item(sig: &Signature, item: &SourceItem) -> TypeResult<Signature> {
    let mut next = sig.clone();
    next.admit(item, DEFAULT_FUEL)?;
    Ok(next)
}
