//! Checking sessions: files admitted in order into one growing signature,
//! with a line-oriented report.

use std::path::Path;

use thiserror::Error;

use crate::casestudy::{CorpusManifest, ManifestError};
use crate::parser::{parse_term, ItemKind, ParseError, Pos, SourceItem};
use crate::printer::print_term;
use crate::rewrite::Reducer;
use crate::signature::{EntryKind, Signature};
use crate::term::{LocalContext, QName, Term};
use crate::theories::{embedded_source, module_of, standalone_hol, TheoryFile};
use crate::typing::{TypeError, Typer};

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}:{error}")]
    Parse { file: String, error: ParseError },
    #[error("{}", render_type_error(file, error, false))]
    Type { file: String, error: TypeError },
    #[error("{file}:{pos}: assertion failed\n  left:  {lhs}\n  right: {rhs}")]
    AssertionFailed {
        file: String,
        pos: Pos,
        lhs: String,
        rhs: String,
    },
    #[error("{file}: {error}")]
    Manifest { file: String, error: ManifestError },
    #[error("theorem `{name}`: {message}")]
    Theorem { name: String, message: String },
}

impl SessionError {
    /// Process exit status: 1 for rejected input, 2 for unreadable or
    /// malformed input.
    pub fn exit_code(&self) -> i32 {
        match self {
            SessionError::Type { .. } | SessionError::AssertionFailed { .. } | SessionError::Theorem { .. } => 1,
            SessionError::Parse {
                error: ParseError::Scope { .. },
                ..
            } => 1,
            SessionError::Io { .. } | SessionError::Parse { .. } | SessionError::Manifest { .. } => 2,
        }
    }

    /// Renders the error, showing types in weak-head normal form unless
    /// `raw` is set.
    pub fn render(&self, raw: bool) -> String {
        match self {
            SessionError::Type { file, error } => render_type_error(file, error, raw),
            other => other.to_string(),
        }
    }
}

/// Outcome of normalizing a term.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub term: Term,
    pub normal_form: Term,
    /// Head of the normal form when it is a definable symbol none of whose
    /// rules apply.
    pub stuck_head: Option<QName>,
}

#[derive(Clone, Debug)]
pub struct FileSummary {
    pub file: String,
    pub module: String,
    pub declarations: usize,
    pub rules: usize,
    pub commands: usize,
}

pub struct Session {
    sig: Signature,
    fuel: u64,
    standalone_hol: bool,
    report: Vec<String>,
}

impl Session {
    pub fn new(fuel: u64) -> Self {
        Session {
            sig: Signature::new(),
            fuel,
            standalone_hol: false,
            report: Vec::new(),
        }
    }

    /// Loads `hol.dk` with its interpreted symbols declared static.
    pub fn standalone_hol(mut self, on: bool) -> Self {
        self.standalone_hol = on;
        self
    }

    pub fn fuel(&self) -> u64 {
        self.fuel
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn into_signature(self) -> Signature {
        self.sig
    }

    pub fn report(&self) -> &[String] {
        &self.report
    }

    pub fn report_text(&self) -> String {
        let mut s = self.report.join("\n");
        s.push('\n');
        s
    }

    /// Parses and admits one file. The module name is the file stem.
    pub fn admit_source(&mut self, file: &str, text: &[u8]) -> Result<FileSummary, SessionError> {
        self.admit_source_as(file, module_of(file), text)
    }

    /// Parses and admits one file as module `module`.
    pub fn admit_source_as(&mut self, file: &str, module: &str, text: &[u8]) -> Result<FileSummary, SessionError> {
        let mut items = parse_file_as(file, text, module)?;
        if self.standalone_hol && module == "hol" {
            items = standalone_hol(items);
        }
        self.admit_items(file, module, &items)
    }

    pub fn admit_theory(&mut self, theory: &TheoryFile) -> Result<FileSummary, SessionError> {
        self.admit_source(&theory.file_name, theory.source.as_bytes())
    }

    /// Reads and admits a file from disk.
    pub fn admit_path(&mut self, path: &Path) -> Result<FileSummary, SessionError> {
        let shown = path.display().to_string();
        let text = std::fs::read(path).map_err(|source| SessionError::Io {
            path: shown.clone(),
            source,
        })?;
        self.admit_source(&shown, &text)
    }

    pub fn admit_items(&mut self, file: &str, module: &str, items: &[SourceItem]) -> Result<FileSummary, SessionError> {
        let mut summary = FileSummary {
            file: file.to_string(),
            module: module.to_string(),
            declarations: 0,
            rules: 0,
            commands: 0,
        };
        for item in items {
            match &item.kind {
                ItemKind::Eval(t) => {
                    summary.commands += 1;
                    let ev = self.normalize(t).map_err(|e| type_error(file, e.at(item.pos)))?;
                    self.report
                        .push(format!("{file}:{}: eval {}", item.pos, print_term(&ev.normal_form)));
                }
                ItemKind::Assert(l, r) => {
                    summary.commands += 1;
                    self.assert_convertible(l, r)
                        .map_err(|e| type_error(file, e.at(item.pos)))?
                        .then_some(())
                        .ok_or_else(|| SessionError::AssertionFailed {
                            file: file.to_string(),
                            pos: item.pos,
                            lhs: print_term(l),
                            rhs: print_term(r),
                        })?;
                    self.report.push(format!("{file}:{}: assert ok", item.pos));
                }
                kind => {
                    self.sig.admit(item, self.fuel).map_err(|e| type_error(file, e))?;
                    if matches!(kind, ItemKind::RewriteRule { .. }) {
                        summary.rules += 1;
                    } else {
                        summary.declarations += 1;
                    }
                }
            }
        }
        self.report.push(format!(
            "ok {file} module={module} declarations={} rules={} commands={}",
            summary.declarations, summary.rules, summary.commands
        ));
        Ok(summary)
    }

    fn assert_convertible(&self, l: &Term, r: &Term) -> Result<bool, TypeError> {
        let typer = Typer::new(&self.sig, self.fuel);
        typer.infer(&mut LocalContext::new(), l)?;
        typer.infer(&mut LocalContext::new(), r)?;
        Ok(typer.reducer().convertible(l, r)?)
    }

    /// Strong normal form of a closed term, without type checking.
    pub fn normalize(&self, t: &Term) -> Result<Evaluation, TypeError> {
        let red = Reducer::new(&self.sig, self.fuel);
        let nf = red.snf(t)?;
        let stuck_head = nf
            .head_const()
            .filter(|q| matches!(self.sig.get(q).map(|e| &e.kind), Some(EntryKind::Definable { .. })))
            .cloned();
        Ok(Evaluation {
            term: t.clone(),
            normal_form: nf,
            stuck_head,
        })
    }

    /// Parses a term with fully qualified names and normalizes it.
    pub fn eval_text(&self, text: &str) -> Result<Evaluation, SessionError> {
        let t = parse_term(text, "", &[]).map_err(|error| SessionError::Parse {
            file: "<term>".into(),
            error,
        })?;
        self.normalize(&t).map_err(|e| type_error("<term>", e))
    }

    /// Checks that `name` is declared with a type convertible to the term
    /// written in `expected`.
    pub fn check_theorem(&self, name: &QName, expected: &str) -> Result<(), SessionError> {
        let fail = |message: String| SessionError::Theorem {
            name: name.to_string(),
            message,
        };
        let entry = self.sig.get(name).ok_or_else(|| fail("not declared".into()))?;
        let expected = parse_term(expected, &name.module, &[]).map_err(|e| fail(e.to_string()))?;
        let typer = Typer::new(&self.sig, self.fuel);
        typer
            .sort_of(&mut LocalContext::new(), &expected)
            .map_err(|e| fail(e.render(false)))?;
        match typer.reducer().convertible(&entry.ty, &expected) {
            Ok(true) => Ok(()),
            Ok(false) => Err(fail(format!(
                "type is not convertible to the expected statement\n  expected: {}\n  actual:   {}",
                print_term(&expected),
                print_term(&entry.ty)
            ))),
            Err(e) => Err(fail(e.to_string())),
        }
    }

    /// Admits every file of a manifest, then checks its theorem lines.
    /// Files are reported under their manifest names and resolved against
    /// `dir`, falling back to the embedded corpus
    /// when `dir` is `None`.
    pub fn run_manifest(&mut self, manifest: &CorpusManifest, dir: Option<&Path>) -> Result<(), SessionError> {
        for file in &manifest.files {
            match dir {
                Some(d) => {
                    let path = d.join(file);
                    let text = std::fs::read(&path).map_err(|source| SessionError::Io {
                        path: path.display().to_string(),
                        source,
                    })?;
                    self.admit_source(file, &text)?;
                }
                None => {
                    let src = embedded_source(file).ok_or_else(|| SessionError::Io {
                        path: file.clone(),
                        source: std::io::Error::new(std::io::ErrorKind::NotFound, "not in the embedded corpus"),
                    })?;
                    self.admit_source(file, src.as_bytes())?;
                }
            }
        }
        for (name, expected) in &manifest.theorems {
            self.check_theorem(name, expected)?;
            self.report.push(format!("theorem {name} ok"));
        }
        Ok(())
    }
}

fn parse_file_as(file: &str, text: &[u8], module: &str) -> Result<Vec<SourceItem>, SessionError> {
    crate::parser::parse_file(text, module).map_err(|error| SessionError::Parse {
        file: file.to_string(),
        error,
    })
}

fn render_type_error(file: &str, error: &TypeError, raw: bool) -> String {
    let sep = if error.location.is_some() { ":" } else { ": " };
    format!("{file}{sep}{}", error.render(raw))
}

fn type_error(file: &str, error: TypeError) -> SessionError {
    SessionError::Type {
        file: file.to_string(),
        error,
    }
}

/// Loads the whole embedded corpus in manifest order.
pub fn load_corpus(fuel: u64) -> Result<Session, SessionError> {
    let manifest = CorpusManifest::embedded();
    let mut s = Session::new(fuel);
    s.run_manifest(&manifest, None)?;
    Ok(s)
}
