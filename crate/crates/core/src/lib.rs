//! A proof-checking kernel for the λΠ-calculus modulo rewriting, reading a
//! Dedukti-style `.dk` format, together with an embedded theory corpus that
//! combines a HOL encoding and a fragment of the calculus of inductive
//! constructions.

pub mod casestudy;
pub mod parser;
pub mod printer;
pub mod rewrite;
pub mod session;
pub mod signature;
pub mod term;
pub mod theories;
pub mod typing;

pub use parser::{parse_file, parse_term, ItemKind, ParseError, Pos, SourceItem};
pub use printer::{print_item, print_term};
pub use rewrite::{are_convertible, match_pattern, snf, whnf, ReduceError, Reducer, DEFAULT_FUEL};

pub use signature::{Entry, EntryKind, Pattern, RewriteRule, Signature};
pub use term::{LocalContext, QName, Term};

pub use session::{load_corpus, Evaluation, Session, SessionError};
pub use theories::TheoryFile;
pub use typing::{admit_item, check, check_rule, infer, TypeError, TypeErrorKind, Typer};
