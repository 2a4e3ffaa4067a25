//! Pretty-printer producing `.dk` surface syntax that parses back to an
//! α-equivalent term.

use crate::parser::{is_plain_ident, ItemKind, SourceItem};
use crate::term::Term;

pub fn print_term(t: &Term) -> String {
    print_term_in(t, &[])
}

/// Prints an open term whose free variables are named by `names`
/// (outermost first). Free variables without a name print as `#k`.
pub fn print_term_in(t: &Term, names: &[String]) -> String {
    let mut scope: Vec<String> = names.to_vec();
    let mut out = String::new();
    write_term(&mut out, t, &mut scope, 0);
    out
}

fn fresh(base: &str, scope: &[String]) -> String {
    let base = if is_plain_ident(base) && base != "_" {
        base.to_string()
    } else {
        "x".to_string()
    };
    if !scope.contains(&base) {
        return base;
    }
    (0..)
        .map(|i| format!("{base}{i}"))
        .find(|c| !scope.iter().any(|s| s == c))
        .expect("infinite supply of names")
}

// prec 0: anything; 1: application or tighter; 2: atoms only
fn write_term(out: &mut String, t: &Term, scope: &mut Vec<String>, prec: u8) {
    match t {
        Term::Kind => out.push_str("Kind"),
        Term::Type => out.push_str("Type"),
        Term::Const(q) => out.push_str(&q.to_string()),
        Term::Var(k) => match scope.len().checked_sub(k + 1) {
            Some(i) if !scope[i].is_empty() => out.push_str(&scope[i]),
            _ => out.push_str(&format!("#{k}")),
        },
        Term::App(f, a) => {
            paren(out, prec > 1, |out| {
                write_term(out, f, scope, 1);
                out.push(' ');
                write_term(out, a, scope, 2);
            });
        }
        Term::Lam(x, dom, body) => paren(out, prec > 0, |out| {
            let name = if body.has_free(0) {
                fresh(x, scope)
            } else {
                "_".to_string()
            };
            out.push_str(&name);
            if let Some(d) = dom {
                out.push_str(" : ");
                write_term(out, d, scope, 1);
            }
            out.push_str(" => ");
            scope.push(name);
            write_term(out, body, scope, 0);
            scope.pop();
        }),
        Term::Pi(x, dom, cod) => paren(out, prec > 0, |out| {
            let name = if cod.has_free(0) {
                let n = fresh(x, scope);
                out.push_str(&n);
                out.push_str(" : ");
                n
            } else {
                String::new()
            };
            write_term(out, dom, scope, 1);
            out.push_str(" -> ");
            scope.push(name);
            write_term(out, cod, scope, 0);
            scope.pop();
        }),
    }
}

fn paren<F: FnOnce(&mut String)>(out: &mut String, wrap: bool, f: F) {
    if wrap {
        out.push('(');
    }
    f(out);
    if wrap {
        out.push(')');
    }
}

/// Prints one item in concrete syntax, terminated by `.`.
pub fn print_item(item: &SourceItem) -> String {
    match &item.kind {
        ItemKind::StaticDecl { name, ty } => format!("{} : {}.", name.name, print_term(ty)),
        ItemKind::DefinableDecl { name, ty } => format!("def {} : {}.", name.name, print_term(ty)),
        ItemKind::Definition { name, ty, body } => match ty {
            Some(ty) => format!("def {} : {} := {}.", name.name, print_term(ty), print_term(body)),
            None => format!("def {} := {}.", name.name, print_term(body)),
        },
        ItemKind::RewriteRule { context, lhs, rhs } => {
            let mut names: Vec<String> = Vec::new();
            for (x, _) in context {
                let n = fresh(x, &names);
                names.push(n);
            }
            format!(
                "[{}] {} --> {}.",
                names.join(", "),
                print_term_in(lhs, &names),
                print_term_in(rhs, &names)
            )
        }
        ItemKind::Eval(t) => format!("#EVAL {}.", print_term(t)),
        ItemKind::Assert(a, b) => format!("#ASSERT {} == {}.", print_term(a), print_term(b)),
    }
}

/// Prints a whole file, one item per line.
pub fn print_items(items: &[SourceItem]) -> String {
    let mut s = String::new();
    for it in items {
        s.push_str(&print_item(it));
        s.push('\n');
    }
    s
}
