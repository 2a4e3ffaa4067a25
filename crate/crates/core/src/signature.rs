//! Global environment: declarations, definable symbols with their rewrite
//! rules, and definitions, in admission order.

use indexmap::IndexMap;

use crate::term::{QName, Term};

/// Left-hand side argument of a rewrite rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pattern {
    /// Rule variable, identified by its de Bruijn index in the rule context.
    Var(usize),
    Const(QName, Vec<Pattern>),
}

impl Pattern {
    /// Converts a scoped left-hand side term into a pattern. Only first-order
    /// patterns are accepted: rule variables never carry arguments.
    pub fn from_term(t: &Term, arity: usize) -> Result<Pattern, String> {
        let (head, args) = t.spine();
        match head {
            Term::Var(k) if *k < arity => {
                if args.is_empty() {
                    Ok(Pattern::Var(*k))
                } else {
                    Err("rule variable applied to arguments (higher-order pattern)".into())
                }
            }
            Term::Const(q) => Ok(Pattern::Const(
                q.clone(),
                args.into_iter()
                    .map(|a| Pattern::from_term(a, arity))
                    .collect::<Result<_, _>>()?,
            )),
            Term::Var(_) => Err("pattern refers to a variable outside the rule context".into()),
            Term::Lam(..) | Term::Pi(..) => Err("binders are not allowed in patterns".into()),
            Term::Type | Term::Kind => Err("sorts are not allowed in patterns".into()),
            Term::App(..) => unreachable!("spine head is never an application"),
        }
    }

    pub fn to_term(&self) -> Term {
        match self {
            Pattern::Var(i) => Term::Var(*i),
            Pattern::Const(q, args) => Term::apps(Term::Const(q.clone()), args.iter().map(Pattern::to_term)),
        }
    }

    pub fn collect_vars(&self, out: &mut Vec<usize>) {
        match self {
            Pattern::Var(i) => out.push(*i),
            Pattern::Const(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RewriteRule {
    /// Display names of the rule variables, outermost first.
    pub context: Vec<String>,
    pub head: QName,
    pub args: Vec<Pattern>,
    /// Right-hand side; free index `i` is rule variable `i`.
    pub rhs: Term,
}

impl RewriteRule {
    pub fn new(context: Vec<String>, lhs: &Term, rhs: Term) -> Result<RewriteRule, String> {
        let arity = context.len();
        let Pattern::Const(head, args) = Pattern::from_term(lhs, arity)? else {
            return Err("left-hand side must be headed by a constant".into());
        };
        let mut seen = Vec::new();
        for a in &args {
            a.collect_vars(&mut seen);
        }
        if let Some(k) = rhs.max_free_index(0).filter(|k| *k >= arity) {
            return Err(format!("right-hand side has free index {k} outside the rule context"));
        }
        for i in 0..arity {
            if rhs.has_free(i) && !seen.contains(&i) {
                return Err(format!(
                    "variable `{}` occurs on the right-hand side but not in the pattern",
                    context[arity - 1 - i]
                ));
            }
        }
        Ok(RewriteRule {
            context,
            head,
            args,
            rhs,
        })
    }

    pub fn arity(&self) -> usize {
        self.context.len()
    }

    pub fn lhs(&self) -> Term {
        Term::apps(Term::Const(self.head.clone()), self.args.iter().map(Pattern::to_term))
    }
}

#[derive(Clone, Debug)]
pub enum EntryKind {
    Static,
    Definable { rules: Vec<RewriteRule> },
    Defined { body: Term },
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub ty: Term,
    pub kind: EntryKind,
}

impl Entry {
    pub fn rules(&self) -> &[RewriteRule] {
        match &self.kind {
            EntryKind::Definable { rules } => rules,
            _ => &[],
        }
    }

    pub fn is_definable(&self) -> bool {
        matches!(self.kind, EntryKind::Definable { .. })
    }
}

/// Ordered map from qualified names to entries. Extended only through
/// [`crate::typing::admit_item`], which checks every addition.
#[derive(Clone, Debug, Default)]
pub struct Signature {
    entries: IndexMap<QName, Entry>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, q: &QName) -> Option<&Entry> {
        self.entries.get(q)
    }

    pub fn contains(&self, q: &QName) -> bool {
        self.entries.contains_key(q)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&QName, &Entry)> {
        self.entries.iter()
    }

    pub fn rule_count(&self) -> usize {
        self.entries.values().map(|e| e.rules().len()).sum()
    }

    pub(crate) fn insert(&mut self, q: QName, entry: Entry) {
        self.entries.insert(q, entry);
    }

    pub(crate) fn push_rule(&mut self, rule: RewriteRule) {
        if let Some(Entry {
            kind: EntryKind::Definable { rules },
            ..
        }) = self.entries.get_mut(&rule.head)
        {
            rules.push(rule);
        }
    }
}
