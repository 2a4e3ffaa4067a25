//! Named-variable representation of terms, used as an oracle for de Bruijn
//! substitution and shifting.

use std::collections::HashSet;

use dkinterop::{QName, Term};

/// Terms with explicit variable names.
#[derive(Clone, Debug)]
pub enum Named {
    Type,
    Const(QName),
    Var(String),
    App(Box<Named>, Box<Named>),
    Lam(String, Option<Box<Named>>, Box<Named>),
    Pi(String, Box<Named>, Box<Named>),
}

pub fn free_vars(n: &Named, out: &mut HashSet<String>) {
    match n {
        Named::Type | Named::Const(_) => {}
        Named::Var(x) => {
            out.insert(x.clone());
        }
        Named::App(f, a) => {
            free_vars(f, out);
            free_vars(a, out);
        }
        Named::Lam(x, d, b) => {
            if let Some(d) = d {
                free_vars(d, out);
            }
            let mut inner = HashSet::new();
            free_vars(b, &mut inner);
            inner.remove(x);
            out.extend(inner);
        }
        Named::Pi(x, d, c) => {
            free_vars(d, out);
            let mut inner = HashSet::new();
            free_vars(c, &mut inner);
            inner.remove(x);
            out.extend(inner);
        }
    }
}

pub fn fv(n: &Named) -> HashSet<String> {
    let mut s = HashSet::new();
    free_vars(n, &mut s);
    s
}

pub fn fresh(base: &str, avoid: &HashSet<String>) -> String {
    let mut x = base.to_string();
    while avoid.contains(&x) {
        x.push('\'');
    }
    x
}

/// Textbook capture-avoiding substitution `n[x := r]`, renaming binders
/// that would capture a free variable of `r`.
pub fn named_subst(n: &Named, x: &str, r: &Named) -> Named {
    match n {
        Named::Type | Named::Const(_) => n.clone(),
        Named::Var(y) => {
            if y == x {
                r.clone()
            } else {
                n.clone()
            }
        }
        Named::App(f, a) => Named::App(Box::new(named_subst(f, x, r)), Box::new(named_subst(a, x, r))),
        Named::Lam(y, d, b) => {
            let d = d.as_ref().map(|d| Box::new(named_subst(d, x, r)));
            let (y, b) = binder_subst(y, b, x, r);
            Named::Lam(y, d, Box::new(b))
        }
        Named::Pi(y, d, c) => {
            let d = Box::new(named_subst(d, x, r));
            let (y, c) = binder_subst(y, c, x, r);
            Named::Pi(y, d, Box::new(c))
        }
    }
}

pub fn binder_subst(y: &str, body: &Named, x: &str, r: &Named) -> (String, Named) {
    if y == x {
        return (y.to_string(), body.clone());
    }
    let fr = fv(r);
    let fb = fv(body);
    if fr.contains(y) && fb.contains(x) {
        let mut avoid: HashSet<String> = fr.union(&fb).cloned().collect();
        avoid.insert(x.to_string());
        let z = fresh(y, &avoid);
        let renamed = named_subst(body, y, &Named::Var(z.clone()));
        (z, named_subst(&renamed, x, r))
    } else {
        (y.to_string(), named_subst(body, x, r))
    }
}

/// Names referenced by free indices of `t` below `depth` binders, given the
/// naming environment and the naming of free indices.
pub fn referenced(t: &Term, depth: usize, env: &[String], free: &dyn Fn(usize) -> String, out: &mut HashSet<String>) {
    match t {
        Term::Var(k) if *k >= depth => {
            let k = k - depth;
            out.insert(if k < env.len() {
                env[env.len() - 1 - k].clone()
            } else {
                free(k - env.len())
            });
        }
        Term::App(f, a) => {
            referenced(f, depth, env, free, out);
            referenced(a, depth, env, free, out);
        }
        Term::Lam(_, d, b) => {
            if let Some(d) = d {
                referenced(d, depth, env, free, out);
            }
            referenced(b, depth + 1, env, free, out);
        }
        Term::Pi(_, d, c) => {
            referenced(d, depth, env, free, out);
            referenced(c, depth + 1, env, free, out);
        }
        _ => {}
    }
}

/// Converts to names, keeping display names unless they would capture.
pub fn to_named(t: &Term, env: &mut Vec<String>, free: &dyn Fn(usize) -> String) -> Named {
    match t {
        Term::Kind | Term::Type => Named::Type,
        Term::Const(q) => Named::Const(q.clone()),
        Term::Var(k) => Named::Var(if *k < env.len() {
            env[env.len() - 1 - k].clone()
        } else {
            free(k - env.len())
        }),
        Term::App(f, a) => Named::App(Box::new(to_named(f, env, free)), Box::new(to_named(a, env, free))),
        Term::Lam(x, d, b) => {
            let d = d.as_ref().map(|d| Box::new(to_named(d, env, free)));
            let (y, b) = under_binder(x, b, env, free);
            Named::Lam(y, d, Box::new(b))
        }
        Term::Pi(x, d, c) => {
            let d = Box::new(to_named(d, env, free));
            let (y, c) = under_binder(x, c, env, free);
            Named::Pi(y, d, Box::new(c))
        }
    }
}

pub fn under_binder(x: &str, body: &Term, env: &mut Vec<String>, free: &dyn Fn(usize) -> String) -> (String, Named) {
    let mut avoid = HashSet::new();
    referenced(body, 1, env, free, &mut avoid);
    let y = fresh(x, &avoid);
    env.push(y.clone());
    let b = to_named(body, env, free);
    env.pop();
    (y, b)
}

pub fn from_named(n: &Named, env: &mut Vec<String>, free: &dyn Fn(&str) -> usize) -> Term {
    match n {
        Named::Type => Term::Type,
        Named::Const(q) => Term::Const(q.clone()),
        Named::Var(x) => match env.iter().rev().position(|y| y == x) {
            Some(i) => Term::Var(i),
            None => Term::Var(env.len() + free(x)),
        },
        Named::App(f, a) => Term::app(from_named(f, env, free), from_named(a, env, free)),
        Named::Lam(x, d, b) => {
            let d = d.as_ref().map(|d| from_named(d, env, free));
            env.push(x.clone());
            let b = from_named(b, env, free);
            env.pop();
            Term::lam(x, d, b)
        }
        Named::Pi(x, d, c) => {
            let d = from_named(d, env, free);
            env.push(x.clone());
            let c = from_named(c, env, free);
            env.pop();
            Term::pi(x, d, c)
        }
    }
}

pub fn var_name(k: usize) -> String {
    format!("v{k}")
}

pub fn var_index(x: &str) -> usize {
    x.strip_prefix('v')
        .and_then(|k| k.parse().ok())
        .expect("free names are v<k>")
}

/// `t[target := r]` computed through the named representation.
pub fn oracle_subst(t: &Term, r: &Term, target: usize) -> Term {
    let nt = to_named(t, &mut Vec::new(), &var_name);
    // Free index j of the replacement lives in the context without `target`.
    let nr = to_named(r, &mut Vec::new(), &|j| var_name(if j < target { j } else { j + 1 }));
    let ns = named_subst(&nt, &var_name(target), &nr);
    from_named(&ns, &mut Vec::new(), &|x| {
        let k = var_index(x);
        if k > target {
            k - 1
        } else {
            k
        }
    })
}

/// Random term of depth at most `depth` with binder names that collide with
/// free-variable names.
pub fn random_term<R: rand::Rng>(rng: &mut R, depth: usize) -> Term {
    const BINDERS: [&str; 5] = ["x", "y", "v0", "v1", "v2"];
    let leaf = depth == 0 || rng.gen_bool(0.25);
    if leaf {
        return match rng.gen_range(0..3) {
            0 => Term::Var(rng.gen_range(0..5)),
            1 => Term::cst("m", ["a", "b", "c"][rng.gen_range(0..3)]),
            _ => Term::Type,
        };
    }
    let x = BINDERS[rng.gen_range(0..BINDERS.len())];
    match rng.gen_range(0..3) {
        0 => Term::app(random_term(rng, depth - 1), random_term(rng, depth - 1)),
        1 => {
            let d = rng.gen_bool(0.5).then(|| random_term(rng, depth - 1));
            Term::lam(x, d, random_term(rng, depth - 1))
        }
        _ => Term::pi(x, random_term(rng, depth - 1), random_term(rng, depth - 1)),
    }
}
