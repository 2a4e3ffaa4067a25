//! Lexer and parser for `.dk` theory files.
//!
//! ```text
//! item ::= ident param* ":" term "."
//!        | "def" ident param* [":" term] [":=" term] "."
//!        | "[" [ctx-var ("," ctx-var)*] "]" term "-->" term "."
//!        | "#EVAL" term "."
//!        | "#ASSERT" term "==" term "."
//! param ::= "(" ident ":" term ")"
//! ctx-var ::= ident [":" term]
//! term ::= ident ":" app "->" term | ident [":" app] "=>" term
//!        | app "->" term | app
//! app  ::= atom atom*
//! atom ::= "Type" | qident | ident | "(" term ")"
//! ```
//!
//! Comments are written `(; ... ;)`. Variables are resolved to de Bruijn
//! indices and constants to qualified names while parsing.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::term::{QName, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{pos}: lexical error: unexpected {bytes:?}")]
    Lex { pos: Pos, bytes: String },
    #[error("{pos}: parse error: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        pos: Pos,
        expected: Vec<String>,
        found: String,
    },
    #[error("{pos}: unknown identifier `{name}`")]
    Scope { pos: Pos, name: String },
}

impl ParseError {
    pub fn pos(&self) -> Pos {
        match self {
            ParseError::Lex { pos, .. } | ParseError::Syntax { pos, .. } | ParseError::Scope { pos, .. } => *pos,
        }
    }
}

/// Rule context entry: variable name and its (ignored) annotation.
pub type RuleVar = (String, Option<Term>);

#[derive(Clone, Debug)]
pub enum ItemKind {
    StaticDecl {
        name: QName,
        ty: Term,
    },
    DefinableDecl {
        name: QName,
        ty: Term,
    },
    Definition {
        name: QName,
        ty: Option<Term>,
        body: Term,
    },
    /// `lhs` and `rhs` are scoped over `context`; the last variable is index 0.
    RewriteRule {
        context: Vec<RuleVar>,
        lhs: Term,
        rhs: Term,
    },
    Eval(Term),
    Assert(Term, Term),
}

#[derive(Clone, Debug)]
pub struct SourceItem {
    pub pos: Pos,
    pub kind: ItemKind,
}

impl SourceItem {
    /// Item-wise α-equivalence, ignoring positions and rule variable names.
    pub fn alpha_eq(&self, other: &SourceItem) -> bool {
        use ItemKind::*;
        match (&self.kind, &other.kind) {
            (StaticDecl { name: a, ty: t }, StaticDecl { name: b, ty: u })
            | (DefinableDecl { name: a, ty: t }, DefinableDecl { name: b, ty: u }) => a == b && t == u,
            (
                Definition {
                    name: a,
                    ty: t,
                    body: x,
                },
                Definition {
                    name: b,
                    ty: u,
                    body: y,
                },
            ) => a == b && t == u && x == y,
            (
                RewriteRule {
                    context: c1,
                    lhs: l1,
                    rhs: r1,
                },
                RewriteRule {
                    context: c2,
                    lhs: l2,
                    rhs: r2,
                },
            ) => c1.len() == c2.len() && l1 == l2 && r1 == r2,
            (Eval(a), Eval(b)) => a == b,
            (Assert(a, b), Assert(c, d)) => a == c && b == d,
            _ => false,
        }
    }

    /// Name introduced by a declaration or definition.
    pub fn declared_name(&self) -> Option<&QName> {
        match &self.kind {
            ItemKind::StaticDecl { name, .. }
            | ItemKind::DefinableDecl { name, .. }
            | ItemKind::Definition { name, .. } => Some(name),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    QIdent(String, String),
    Colon,
    Dot,
    Def,
    Assign,
    Rewrite,
    Arrow,
    FatArrow,
    EqEq,
    LBrack,
    RBrack,
    Comma,
    LParen,
    RParen,
    Type,
    Kind,
    Eval,
    Assert,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::QIdent(m, n) => write!(f, "identifier `{m}.{n}`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Def => f.write_str("`def`"),
            Tok::Assign => f.write_str("`:=`"),
            Tok::Rewrite => f.write_str("`-->`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::FatArrow => f.write_str("`=>`"),
            Tok::EqEq => f.write_str("`==`"),
            Tok::LBrack => f.write_str("`[`"),
            Tok::RBrack => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Type => f.write_str("`Type`"),
            Tok::Kind => f.write_str("`Kind`"),
            Tok::Eval => f.write_str("`#EVAL`"),
            Tok::Assert => f.write_str("`#ASSERT`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

pub fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Whether `s` lexes as a single plain identifier.
pub fn is_plain_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if is_ident_start(c)) && cs.all(is_ident_char) && !matches!(s, "def" | "Type" | "Kind")
}

struct Lexer<'a> {
    chars: Vec<char>,
    i: usize,
    line: usize,
    col: usize,
    _src: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            chars: src.chars().collect(),
            i: 0,
            line: 1,
            col: 1,
            _src: src,
        }
    }

    fn peek(&self, k: usize) -> Option<char> {
        self.chars.get(self.i + k).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek(0)?;
        self.i += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            col: self.col,
        }
    }

    fn skip_trivia(&mut self) -> Result<(), ParseError> {
        loop {
            match self.peek(0) {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('(') if self.peek(1) == Some(';') => {
                    let start = self.pos();
                    self.bump();
                    self.bump();
                    loop {
                        match self.peek(0) {
                            None => {
                                return Err(ParseError::Lex {
                                    pos: start,
                                    bytes: "(;".into(),
                                })
                            }
                            Some(';') if self.peek(1) == Some(')') => {
                                self.bump();
                                self.bump();
                                break;
                            }
                            Some(_) => {
                                self.bump();
                            }
                        }
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn ident(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek(0).filter(|c| is_ident_char(*c)) {
            s.push(c);
            self.bump();
        }
        s
    }

    fn tokens(mut self) -> Result<Vec<(Pos, Tok)>, ParseError> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia()?;
            let pos = self.pos();
            let Some(c) = self.peek(0) else {
                out.push((pos, Tok::Eof));
                return Ok(out);
            };
            let tok = match c {
                c if is_ident_start(c) => {
                    let first = self.ident();
                    if self.peek(0) == Some('.') && self.peek(1).is_some_and(is_ident_start) {
                        self.bump();
                        let second = self.ident();
                        Tok::QIdent(first, second)
                    } else {
                        match first.as_str() {
                            "def" => Tok::Def,
                            "Type" => Tok::Type,
                            "Kind" => Tok::Kind,
                            _ => Tok::Ident(first),
                        }
                    }
                }
                '#' => {
                    self.bump();
                    let word = self.ident();
                    match word.as_str() {
                        "EVAL" => Tok::Eval,
                        "ASSERT" => Tok::Assert,
                        _ => {
                            return Err(ParseError::Lex {
                                pos,
                                bytes: format!("#{word}"),
                            })
                        }
                    }
                }
                _ => {
                    let two: String = [Some(c), self.peek(1)].iter().flatten().collect();
                    let three: String = [Some(c), self.peek(1), self.peek(2)].iter().flatten().collect();
                    let (tok, len) = if three == "-->" {
                        (Tok::Rewrite, 3)
                    } else if two == "->" {
                        (Tok::Arrow, 2)
                    } else if two == "=>" {
                        (Tok::FatArrow, 2)
                    } else if two == "==" {
                        (Tok::EqEq, 2)
                    } else if two == ":=" {
                        (Tok::Assign, 2)
                    } else {
                        let t = match c {
                            ':' => Tok::Colon,
                            '.' => Tok::Dot,
                            '[' => Tok::LBrack,
                            ']' => Tok::RBrack,
                            ',' => Tok::Comma,
                            '(' => Tok::LParen,
                            ')' => Tok::RParen,
                            _ => {
                                return Err(ParseError::Lex {
                                    pos,
                                    bytes: c.to_string(),
                                })
                            }
                        };
                        (t, 1)
                    };
                    for _ in 0..len {
                        self.bump();
                    }
                    tok
                }
            };
            out.push((pos, tok));
        }
    }
}

struct Parser {
    toks: Vec<(Pos, Tok)>,
    i: usize,
    module: String,
    /// Bound variable names, innermost last.
    scope: Vec<String>,
    /// Names declared so far in this module.
    declared: HashSet<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].1
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let j = (self.i + k).min(self.toks.len() - 1);
        &self.toks[j].1
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].1.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(&[&tok.to_string()])
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.error(&["identifier"]),
        }
    }

    fn items(&mut self) -> Result<Vec<SourceItem>, ParseError> {
        let mut items = Vec::new();
        while *self.peek() != Tok::Eof {
            items.push(self.item()?);
        }
        Ok(items)
    }

    fn qualify(&self, name: &str) -> QName {
        QName::new(&self.module, name)
    }

    /// Parses `(x : A)*`, pushing each name onto the scope.
    fn params(&mut self) -> Result<Vec<(String, Term)>, ParseError> {
        let mut params = Vec::new();
        while *self.peek() == Tok::LParen {
            self.bump();
            let x = self.ident()?;
            self.expect(Tok::Colon)?;
            let ty = self.term()?;
            self.expect(Tok::RParen)?;
            self.scope.push(x.clone());
            params.push((x, ty));
        }
        Ok(params)
    }

    fn close_params(&mut self, n: usize) {
        self.scope.truncate(self.scope.len() - n);
    }

    fn item(&mut self) -> Result<SourceItem, ParseError> {
        let pos = self.pos();
        let kind = match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                let params = self.params()?;
                self.expect(Tok::Colon)?;
                let ty = self.term()?;
                self.close_params(params.len());
                self.expect(Tok::Dot)?;
                let ty = wrap_pi(&params, ty);
                self.declared.insert(name.clone());
                ItemKind::StaticDecl {
                    name: self.qualify(&name),
                    ty,
                }
            }
            Tok::Def => {
                self.bump();
                let name = self.ident()?;
                let params = self.params()?;
                let ty = if *self.peek() == Tok::Colon {
                    self.bump();
                    Some(self.term()?)
                } else {
                    None
                };
                let body = if *self.peek() == Tok::Assign {
                    self.bump();
                    Some(self.term()?)
                } else {
                    None
                };
                self.close_params(params.len());
                self.expect(Tok::Dot)?;
                let qname = self.qualify(&name);
                self.declared.insert(name);
                match (ty, body) {
                    (Some(ty), None) => ItemKind::DefinableDecl {
                        name: qname,
                        ty: wrap_pi(&params, ty),
                    },
                    (ty, Some(body)) => ItemKind::Definition {
                        name: qname,
                        ty: ty.map(|t| wrap_pi(&params, t)),
                        body: params
                            .iter()
                            .rev()
                            .fold(body, |b, (x, a)| Term::lam(x, Some(a.clone()), b)),
                    },
                    (None, None) => {
                        return Err(ParseError::Syntax {
                            pos,
                            expected: vec!["`:`".into(), "`:=`".into()],
                            found: "`.`".into(),
                        })
                    }
                }
            }
            Tok::LBrack => {
                self.bump();
                let mut context = Vec::new();
                if *self.peek() != Tok::RBrack {
                    loop {
                        let x = self.ident()?;
                        let ty = if *self.peek() == Tok::Colon {
                            self.bump();
                            Some(self.term()?)
                        } else {
                            None
                        };
                        self.scope.push(x.clone());
                        context.push((x, ty));
                        if *self.peek() == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBrack)?;
                let lhs = self.term()?;
                self.expect(Tok::Rewrite)?;
                let rhs = self.term()?;
                self.close_params(context.len());
                self.expect(Tok::Dot)?;
                ItemKind::RewriteRule { context, lhs, rhs }
            }
            Tok::Eval => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::Dot)?;
                ItemKind::Eval(t)
            }
            Tok::Assert => {
                self.bump();
                let a = self.term()?;
                self.expect(Tok::EqEq)?;
                let b = self.term()?;
                self.expect(Tok::Dot)?;
                ItemKind::Assert(a, b)
            }
            _ => return self.error(&["declaration", "`def`", "`[`", "`#EVAL`", "`#ASSERT`"]),
        };
        Ok(SourceItem { pos, kind })
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        if let Tok::Ident(x) = self.peek().clone() {
            match self.peek_at(1) {
                Tok::Colon => {
                    self.bump();
                    self.bump();
                    let dom = self.app()?;
                    let is_pi = match self.peek() {
                        Tok::Arrow => true,
                        Tok::FatArrow => false,
                        _ => return self.error(&["`->`", "`=>`"]),
                    };
                    self.bump();
                    self.scope.push(x.clone());
                    let body = self.term();
                    self.scope.pop();
                    let body = body?;
                    return Ok(if is_pi {
                        Term::pi(&x, dom, body)
                    } else {
                        Term::lam(&x, Some(dom), body)
                    });
                }
                Tok::FatArrow => {
                    self.bump();
                    self.bump();
                    self.scope.push(x.clone());
                    let body = self.term();
                    self.scope.pop();
                    return Ok(Term::lam(&x, None, body?));
                }
                _ => {}
            }
        }
        let a = self.app()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            // anonymous binder, never resolvable by name
            self.scope.push(String::new());
            let b = self.term();
            self.scope.pop();
            return Ok(Term::pi("_", a, b?));
        }
        Ok(a)
    }

    fn app(&mut self) -> Result<Term, ParseError> {
        let mut t = self.atom()?;
        while matches!(
            self.peek(),
            Tok::Ident(_) | Tok::QIdent(..) | Tok::Type | Tok::LParen | Tok::Kind
        ) {
            let a = self.atom()?;
            t = Term::app(t, a);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Type => {
                self.bump();
                Ok(Term::Type)
            }
            Tok::Ident(x) => {
                self.bump();
                if let Some(k) = self.scope.iter().rev().position(|y| *y == x) {
                    Ok(Term::Var(k))
                } else if self.declared.contains(&x) {
                    Ok(Term::Const(self.qualify(&x)))
                } else {
                    Err(ParseError::Scope { pos, name: x })
                }
            }
            Tok::QIdent(m, n) => {
                self.bump();
                Ok(Term::Const(QName::new(&m, &n)))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => self.error(&["term"]),
        }
    }
}

fn wrap_pi(params: &[(String, Term)], ty: Term) -> Term {
    params.iter().rev().fold(ty, |t, (x, a)| Term::pi(x, a.clone(), t))
}

fn utf8(text: &[u8]) -> Result<&str, ParseError> {
    std::str::from_utf8(text).map_err(|e| {
        let valid = &text[..e.valid_up_to()];
        let valid = std::str::from_utf8(valid).unwrap_or_default();
        let line = valid.matches('\n').count() + 1;
        let col = valid.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        let end = (e.valid_up_to() + e.error_len().unwrap_or(1)).min(text.len());
        ParseError::Lex {
            pos: Pos { line, col },
            bytes: format!("{:x?}", &text[e.valid_up_to()..end]),
        }
    })
}

/// Parses a whole theory file into items, in source order.
pub fn parse_file(text: &[u8], module_name: &str) -> Result<Vec<SourceItem>, ParseError> {
    let src = utf8(text)?;
    let toks = Lexer::new(src).tokens()?;
    let mut p = Parser {
        toks,
        i: 0,
        module: module_name.to_string(),
        scope: Vec::new(),
        declared: HashSet::new(),
    };
    p.items()
}

/// Parses a single closed term. Unqualified names must be bound locally or
/// be listed in `known` (resolved in `module_name`).
pub fn parse_term(text: &str, module_name: &str, known: &[&str]) -> Result<Term, ParseError> {
    parse_term_in(text, module_name, known, &[])
}

/// Like [`parse_term`], with `locals` (outermost first) bound as variables.
pub fn parse_term_in(text: &str, module_name: &str, known: &[&str], locals: &[&str]) -> Result<Term, ParseError> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser {
        toks,
        i: 0,
        module: module_name.to_string(),
        scope: locals.iter().map(|s| s.to_string()).collect(),
        declared: known.iter().map(|s| s.to_string()).collect(),
    };
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return p.error(&["end of input"]);
    }
    Ok(t)
}
