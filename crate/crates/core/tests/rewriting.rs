use dkinterop::casestudy::term;
use dkinterop::rewrite::{are_convertible, match_pattern, snf, whnf, Reducer};
use dkinterop::{load_corpus, ReduceError, Session, Signature, Term, DEFAULT_FUEL};

fn sig_of(file: &str, src: &str) -> Signature {
    let mut s = Session::new(DEFAULT_FUEL);
    s.admit_source(file, src.as_bytes())
        .unwrap_or_else(|e| panic!("{}", e.render(false)));
    s.into_signature()
}

fn corpus() -> Signature {
    load_corpus(DEFAULT_FUEL).unwrap().into_signature()
}

const NAT: &str = "
N : Type.
z : N.
s : N -> N.
def plus : N -> N -> N.
[n] plus z n --> n.
[m, n] plus (s m) n --> s (plus m n).
def two : N := s (s z).
def eqn : N -> N -> N.
[x] eqn x x --> z.
def first : N -> N.
[x] first x --> z.
[x] first x --> s z.
def loop : N -> N.
[x] loop x --> loop (s x).
";

#[test]
fn beta_and_rules() {
    let sig = sig_of("m.dk", NAT);
    let id = Term::lam("x", None, Term::Var(0));
    let c = term("m.z");
    assert_eq!(whnf(&sig, &Term::app(id, c.clone())).unwrap(), c);
    let t = term("m.plus m.two m.two");
    assert_eq!(snf(&sig, &t).unwrap(), term("m.s (m.s (m.s (m.s m.z)))"));
}

#[test]
fn whnf_stops_at_head_normal_form() {
    let sig = sig_of("m.dk", NAT);
    let t = term("m.plus (m.s m.z) (m.plus m.z m.z)");
    let w = whnf(&sig, &t).unwrap();
    assert_eq!(w, term("m.s (m.plus m.z (m.plus m.z m.z))"));
}

#[test]
fn matching_reduces_arguments_when_needed() {
    let sig = sig_of("m.dk", NAT);
    // `two` is a definition: the pattern `s m` only matches after unfolding.
    let w = whnf(&sig, &term("m.plus m.two m.z")).unwrap();
    assert_eq!(w, term("m.s (m.plus (m.s m.z) m.z)"));
}

#[test]
fn nonlinear_patterns_use_conversion() {
    let sig = sig_of("m.dk", NAT);
    assert_eq!(whnf(&sig, &term("m.eqn m.two (m.s (m.s m.z))")).unwrap(), term("m.z"));
    let stuck = term("m.eqn m.two m.z");
    assert_eq!(whnf(&sig, &stuck).unwrap(), stuck);
}

#[test]
fn rules_fire_in_declaration_order() {
    let sig = sig_of("m.dk", NAT);
    assert_eq!(whnf(&sig, &term("m.first m.z")).unwrap(), term("m.z"));
}

#[test]
fn divergence_exhausts_fuel() {
    let sig = sig_of("m.dk", NAT);
    let r = Reducer::new(&sig, 1000);
    assert_eq!(r.whnf(&term("m.loop m.z")), Err(ReduceError::FuelExhausted(1000)));
}

#[test]
fn deep_beta_tower() {
    let sig = Signature::new();
    let mut t = term("m.c");
    for _ in 0..20 {
        t = Term::app(Term::lam("x", None, Term::Var(0)), t);
    }
    let under = Term::lam("y", None, t);
    assert_eq!(snf(&sig, &under).unwrap(), Term::lam("y", None, term("m.c")));
}

#[test]
fn bridge_rules_in_the_corpus() {
    let sig = corpus();
    assert_eq!(
        whnf(&sig, &term("hol.type")).unwrap(),
        term("coq.term (coq.s coq.z) holtypes.type")
    );
    let b = Term::Var(0);
    let proof_b = Term::app(term("hol.proof"), b.clone());
    let expected = Term::app(term("coq.proof"), Term::app(term("bridge.istrue"), b));
    assert_eq!(whnf(&sig, &proof_b).unwrap(), expected);
    let a = Term::Var(0);
    assert!(are_convertible(
        &sig,
        &Term::app(term("hol.term"), a.clone()),
        &Term::apps(
            term("coq.term"),
            [
                term("coq.s coq.z"),
                Term::apps(
                    term("coq.lift"),
                    [term("coq.z"), Term::app(term("holtypes.carrier"), a)]
                )
            ]
        ),
    )
    .unwrap());
    assert!(!are_convertible(&sig, &term("hol.bool"), &term("coq.prop")).unwrap());
}

#[test]
fn carrier_projects() {
    let sig = corpus();
    let t = term("holtypes.carrier (holtypes.inhabited Datatypes.bool Datatypes.false)");
    assert_eq!(snf(&sig, &t).unwrap(), term("Datatypes.bool"));
}

#[test]
fn arrow_pattern_matching() {
    let sig = corpus();
    let rule = &sig.get(&dkinterop::QName::new("hol", "arrow")).unwrap().rules()[0];
    let p = dkinterop::Pattern::Const(rule.head.clone(), rule.args.clone());
    let x = term("nat.hol_nat");
    let y = term("hol.bool");
    let t = Term::apps(term("hol.arrow"), [x.clone(), y.clone()]);
    let sub = match_pattern(&p, &t, &sig, 2).unwrap().unwrap();
    // Rule variable `a` is index 1, `b` is index 0.
    assert_eq!(sub[1].as_ref().unwrap(), &x);
    assert_eq!(sub[0].as_ref().unwrap(), &y);
    assert!(match_pattern(&p, &term("hol.bool"), &sig, 2).unwrap().is_none());
    // A β-redex whose reduct is an arrow.
    let redex = Term::app(
        Term::lam("u", None, Term::apps(term("hol.arrow"), [Term::Var(0), y.clone()])),
        x.clone(),
    );
    let sub = match_pattern(&p, &redex, &sig, 2).unwrap().unwrap();
    assert_eq!(sub[1].as_ref().unwrap(), &x);
}

#[test]
fn whnf_is_idempotent_on_corpus_types() {
    let sig = corpus();
    for (_, e) in sig.iter() {
        let w = whnf(&sig, &e.ty).unwrap();
        assert_eq!(whnf(&sig, &w).unwrap(), w);
        assert!(are_convertible(&sig, &e.ty, &snf(&sig, &e.ty).unwrap()).unwrap());
    }
}
