//! Python bindings for the checking kernel and the embedded corpus.

use std::path::Path;

use dkinterop::casestudy::{self, StucknessReport};
use dkinterop::theories::{corpus, MANIFEST};
use dkinterop::{parse_term, print_term, QName, Reducer, Session, SessionError, DEFAULT_FUEL};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(dkinterop, CheckError, PyException);

fn check_err(e: SessionError) -> PyErr {
    CheckError::new_err(e.to_string())
}

/// Parses a qualified name `module.name`.
pub fn qname(text: &str) -> Result<QName, String> {
    QName::parse(text).ok_or_else(|| format!("`{text}` is not a qualified name"))
}

fn qname_py(text: &str) -> PyResult<QName> {
    qname(text).map_err(PyValueError::new_err)
}

fn names(set: impl IntoIterator<Item = QName>) -> Vec<String> {
    set.into_iter().map(|q| q.to_string()).collect()
}

/// Result of normalizing the sorting of a concrete list of numerals.
#[pyclass(name = "SortReport", get_all, frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PySortReport {
    input: Vec<u64>,
    term: String,
    normal_form: String,
    stuck_head: Option<String>,
    blocked_on: Option<String>,
    cons_headed: bool,
    decoded: Option<Vec<u64>>,
    text: String,
}

impl From<StucknessReport> for PySortReport {
    fn from(r: StucknessReport) -> Self {
        PySortReport {
            text: r.to_string(),
            input: r.input,
            term: print_term(&r.term),
            normal_form: print_term(&r.normal_form),
            stuck_head: r.head.map(|q| q.to_string()),
            blocked_on: r.blocked_on.as_ref().map(print_term),
            cons_headed: r.cons_headed,
            decoded: r.decoded,
        }
    }
}

#[pymethods]
impl PySortReport {
    fn __str__(&self) -> String {
        self.text.clone()
    }
}

/// A checking session: files admitted in order into one signature.
#[pyclass(name = "Session")]
pub struct PySession {
    inner: Session,
}

#[pymethods]
impl PySession {
    #[new]
    #[pyo3(signature = (fuel = DEFAULT_FUEL, standalone_hol = false))]
    fn new(fuel: u64, standalone_hol: bool) -> PyResult<Self> {
        if fuel == 0 {
            return Err(PyValueError::new_err("fuel must be positive"));
        }
        Ok(PySession {
            inner: Session::new(fuel).standalone_hol(standalone_hol),
        })
    }

    #[getter]
    fn fuel(&self) -> u64 {
        self.inner.fuel()
    }

    /// Admits source text as a file; the module is the file stem.
    /// Returns `(declarations, rules, commands)`.
    fn admit(&mut self, file_name: &str, text: &str) -> PyResult<(usize, usize, usize)> {
        let s = self.inner.admit_source(file_name, text.as_bytes()).map_err(check_err)?;
        Ok((s.declarations, s.rules, s.commands))
    }

    /// Reads and admits a file from disk.
    fn admit_path(&mut self, path: &str) -> PyResult<(usize, usize, usize)> {
        let s = self.inner.admit_path(Path::new(path)).map_err(check_err)?;
        Ok((s.declarations, s.rules, s.commands))
    }

    /// Admits the embedded corpus and checks its theorem statements.
    fn load_corpus(&mut self) -> PyResult<()> {
        self.inner
            .run_manifest(&casestudy::CorpusManifest::embedded(), None)
            .map_err(check_err)
    }

    /// Report lines produced so far.
    #[getter]
    fn report(&self) -> Vec<String> {
        self.inner.report().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.signature().len()
    }

    fn __contains__(&self, name: &str) -> bool {
        QName::parse(name).is_some_and(|q| self.inner.signature().contains(&q))
    }

    /// Strong normal form of a closed term written with qualified names.
    /// Returns the normal form and the stuck definable head, if any.
    fn eval(&self, term: &str) -> PyResult<(String, Option<String>)> {
        let ev = self.inner.eval_text(term).map_err(check_err)?;
        Ok((print_term(&ev.normal_form), ev.stuck_head.map(|q| q.to_string())))
    }

    fn convertible(&self, left: &str, right: &str) -> PyResult<bool> {
        let parse = |t: &str| parse_term(t, "", &[]).map_err(|e| PyValueError::new_err(e.to_string()));
        let (l, r) = (parse(left)?, parse(right)?);
        Reducer::new(self.inner.signature(), self.inner.fuel())
            .convertible(&l, &r)
            .map_err(|e| CheckError::new_err(e.to_string()))
    }

    /// Declared type of a symbol.
    fn type_of(&self, name: &str) -> PyResult<String> {
        let q = qname_py(name)?;
        let entry = self
            .inner
            .signature()
            .get(&q)
            .ok_or_else(|| PyValueError::new_err(format!("`{q}` is not declared")))?;
        Ok(print_term(&entry.ty))
    }

    /// Checks that `name` has a type convertible to `statement`.
    fn check_theorem(&self, name: &str, statement: &str) -> PyResult<()> {
        self.inner.check_theorem(&qname_py(name)?, statement).map_err(check_err)
    }

    /// Axioms the definition of `name` depends on, transitively.
    fn axioms_used(&self, name: &str) -> PyResult<Vec<String>> {
        Ok(names(casestudy::axioms_used(self.inner.signature(), &qname_py(name)?)))
    }

    /// HOL-side lemmas the definition of `name` depends on, transitively.
    fn hol_lemmas_used(&self, name: &str) -> PyResult<Vec<String>> {
        Ok(names(casestudy::hol_lemmas_used(
            self.inner.signature(),
            &qname_py(name)?,
        )))
    }

    /// Normalizes `insertion_sort compare ⟦values⟧` over unary numerals.
    #[pyo3(signature = (values, compare = "interop.compare"))]
    fn sort_report(&self, values: Vec<u64>, compare: &str) -> PyResult<PySortReport> {
        let cmp = parse_term(compare, "", &[]).map_err(|e| PyValueError::new_err(e.to_string()))?;
        casestudy::sort_report(self.inner.signature(), &cmp, &values, self.inner.fuel())
            .map(PySortReport::from)
            .map_err(|e| CheckError::new_err(e.to_string()))
    }

    /// Sorting the demonstration list with the HOL comparison.
    fn demo_stuckness(&self) -> PyResult<PySortReport> {
        casestudy::demo_stuckness(self.inner.signature(), self.inner.fuel())
            .map(PySortReport::from)
            .map_err(|e| CheckError::new_err(e.to_string()))
    }
}

/// A session with the whole embedded corpus admitted.
#[pyfunction]
#[pyo3(signature = (fuel = DEFAULT_FUEL))]
fn load_corpus(fuel: u64) -> PyResult<PySession> {
    let mut s = PySession::new(fuel, false)?;
    s.load_corpus()?;
    Ok(s)
}

/// `(file_name, source)` for every embedded corpus file, in admission order.
#[pyfunction]
fn corpus_files() -> Vec<(String, String)> {
    corpus().into_iter().map(|f| (f.file_name, f.source)).collect()
}

/// Text of the corpus manifest.
#[pyfunction]
fn manifest() -> &'static str {
    MANIFEST
}

#[pymodule(name = "dkinterop")]
fn dkinterop_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CheckError", m.py().get_type::<CheckError>())?;
    m.add("DEFAULT_FUEL", DEFAULT_FUEL)?;
    m.add("DEMO_LIST", casestudy::DEMO_LIST.to_vec())?;
    m.add_class::<PySession>()?;
    m.add_class::<PySortReport>()?;
    m.add_function(wrap_pyfunction!(load_corpus, m)?)?;
    m.add_function(wrap_pyfunction!(corpus_files, m)?)?;
    m.add_function(wrap_pyfunction!(manifest, m)?)?;
    Ok(())
}
