//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::path::Path;
use std::time::{Duration, Instant};

use common::named::{oracle_subst, random_term};
use dkinterop::casestudy::*;
use dkinterop::parser::parse_file;
use dkinterop::printer::print_items;
use dkinterop::rewrite::{are_convertible, Reducer};
use dkinterop::theories::corpus;
use dkinterop::{Session, Term, DEFAULT_FUEL};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn theories_dir() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/theories"))
}

fn run_manifest_from_disk() -> Result<(Session, Duration), String> {
    let text = std::fs::read_to_string(theories_dir().join("manifest.txt")).map_err(|e| e.to_string())?;
    let manifest = CorpusManifest::parse(&text).map_err(|e| e.to_string())?;
    let mut s = Session::new(DEFAULT_FUEL);
    let start = Instant::now();
    s.run_manifest(&manifest, Some(theories_dir()))
        .map_err(|e| e.render(false))?;
    Ok((s, start.elapsed()))
}

fn corpus_acceptance() -> Outcome {
    let (s, elapsed) = run_manifest_from_disk()?;
    ensure(elapsed < Duration::from_secs(10), format!("took {elapsed:?}"))?;
    let files = s.report().iter().filter(|l| l.starts_with("ok ")).count();
    Ok(format!("{files} files admitted in {} ms", elapsed.as_millis()))
}

fn theorem_shapes() -> Outcome {
    let s = common::corpus_session();
    let theorems = CorpusManifest::embedded().theorems;
    ensure(theorems.len() == 2, "expected two theorem lines")?;
    for (name, ty) in &theorems {
        s.check_theorem(name, ty).map_err(|e| e.to_string())?;
    }
    Ok(format!("{} statements convertible", theorems.len()))
}

fn bridge_semantics() -> Outcome {
    let s = common::corpus_session();
    let sig = s.signature();
    let red = Reducer::new(sig, DEFAULT_FUEL);
    let (a, b) = (Term::Var(1), Term::Var(0));
    let cases = [
        (term("hol.type"), term("coq.term (coq.s coq.z) holtypes.type")),
        (
            Term::apps(term("hol.arrow"), [a.clone(), b.clone()]),
            Term::apps(term("holtypes.arrow"), [a.clone(), b.clone()]),
        ),
        (
            Term::app(term("hol.term"), a.clone()),
            Term::apps(
                term("coq.term"),
                [
                    term("coq.s coq.z"),
                    Term::apps(
                        term("coq.lift"),
                        [term("coq.z"), Term::app(term("holtypes.carrier"), a.clone())],
                    ),
                ],
            ),
        ),
        (
            Term::app(term("hol.proof"), b.clone()),
            Term::app(term("coq.proof"), Term::app(term("bridge.istrue"), b.clone())),
        ),
    ];
    for (lhs, rhs) in &cases {
        let step = red.head_step(lhs).map_err(|e| e.to_string())?;
        ensure(
            step.as_ref().is_some_and(|t| t.alpha_eq(rhs)),
            format!("{} does not rewrite to {}", lhs, rhs),
        )?;
        let wl = red.whnf(lhs).map_err(|e| e.to_string())?;
        let wr = red.whnf(rhs).map_err(|e| e.to_string())?;
        ensure(wl.alpha_eq(&wr), format!("whnf mismatch for {lhs}: {wl} vs {wr}"))?;
    }
    ensure(
        !are_convertible(sig, &term("hol.bool"), &term("coq.prop")).map_err(|e| e.to_string())?,
        "hol.bool and coq.prop are convertible",
    )?;
    Ok("4 rules fire, hol.bool and coq.prop stay apart".into())
}

fn stuckness() -> Outcome {
    let s = common::corpus_session();
    let r = demo_stuckness(s.signature(), DEFAULT_FUEL).map_err(|e| e.to_string())?;
    ensure(!r.cons_headed, "normal form is cons-headed with the HOL comparison")?;
    let head = r.head.as_ref().map(ToString::to_string).unwrap_or_default();
    let sig = common::with_comparator();
    let cmp = term("cmp.leb");
    let demo = sort_report(&sig, &cmp, &DEMO_LIST, DEFAULT_FUEL).map_err(|e| e.to_string())?;
    let elem = dkinterop::snf(&sig, &nat_carrier()).map_err(|e| e.to_string())?;
    ensure(
        demo.normal_form.alpha_eq(&encode_list(&elem, &[1, 2, 3, 4])),
        "comparator demo is not [1, 2, 3, 4]",
    )?;
    let mut rng = StdRng::seed_from_u64(2024);
    for _ in 0..100 {
        let len = rng.gen_range(0..=8);
        let values: Vec<u64> = (0..len).map(|_| rng.gen_range(0..10)).collect();
        let mut expected = values.clone();
        expected.sort();
        let r = sort_report(&sig, &cmp, &values, DEFAULT_FUEL).map_err(|e| e.to_string())?;
        ensure(
            r.normal_form.alpha_eq(&encode_list(&elem, &expected)),
            format!("{values:?} sorted to {}", r.normal_form),
        )?;
    }
    Ok(format!("stuck on {head}; 100 random lists match the reference sort"))
}

fn kernel_soundness() -> Outcome {
    let mut rng = StdRng::seed_from_u64(99);
    for i in 0..1000 {
        let t = random_term(&mut rng, 8);
        let r = random_term(&mut rng, 4);
        let target = rng.gen_range(0..3);
        ensure(
            t.subst(&r, target).alpha_eq(&oracle_subst(&t, &r, target)),
            format!("substitution case {i}"),
        )?;
    }
    let s = common::corpus_session();
    let (n, failures) = common::whnf_idempotence_failures(s.signature(), 500);
    ensure(n == 500, format!("only {n} corpus terms"))?;
    ensure(
        failures.is_empty(),
        format!("whnf not idempotent on {}", failures.join(", ")),
    )?;
    let (defs, failures) = common::subject_reduction_failures(s.signature());
    ensure(failures.is_empty(), failures.join("; "))?;
    let outcomes = common::mutation_suite();
    let rejected = outcomes.iter().filter(|o| o.rejected).count();
    ensure(outcomes.len() >= 20, format!("only {} mutations", outcomes.len()))?;
    ensure(
        rejected == outcomes.len(),
        format!(
            "accepted: {}",
            outcomes
                .iter()
                .filter(|o| !o.rejected)
                .map(|o| o.description.as_str())
                .collect::<Vec<_>>()
                .join("; ")
        ),
    )?;
    Ok(format!(
        "1000 substitutions, 500 whnf, {defs} definitions, {rejected}/{} mutations rejected",
        outcomes.len()
    ))
}

fn determinism_and_round_trip() -> Outcome {
    let (a, _) = run_manifest_from_disk()?;
    let (b, _) = run_manifest_from_disk()?;
    ensure(a.report_text() == b.report_text(), "reports differ between runs")?;
    let mut items = 0;
    for f in corpus() {
        let parsed = f.items().map_err(|e| e.to_string())?;
        let back =
            parse_file(print_items(&parsed).as_bytes(), &f.module).map_err(|e| format!("{}: {e}", f.file_name))?;
        ensure(
            parsed.len() == back.len(),
            format!("{}: item count changed", f.file_name),
        )?;
        for (x, y) in parsed.iter().zip(&back) {
            ensure(x.alpha_eq(y), format!("{}: item at {} changed", f.file_name, x.pos))?;
        }
        items += parsed.len();
    }
    Ok(format!("identical reports; {items} items round-trip"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 6] = [
        ("1 corpus acceptance", corpus_acceptance),
        ("2 theorem shapes", theorem_shapes),
        ("3 bridge semantics", bridge_semantics),
        ("4 stuckness demonstration", stuckness),
        ("5 kernel soundness", kernel_soundness),
        ("6 determinism and round trip", determinism_and_round_trip),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
