//! The embedded theory corpus.
//!
//! Files are listed in admission order by `theories/manifest.txt`. Each file
//! is a module named after its file stem.

use crate::parser::{parse_file, ItemKind, ParseError, SourceItem};
use crate::term::QName;

/// A `.dk` file of the corpus together with the names it declares.
#[derive(Clone, Debug)]
pub struct TheoryFile {
    pub module: String,
    pub file_name: String,
    pub source: String,
    pub exports: Vec<QName>,
}

impl TheoryFile {
    /// Builds a theory file from source text, computing its exports.
    pub fn new(file_name: &str, source: &str) -> Result<TheoryFile, ParseError> {
        let module = module_of(file_name).to_string();
        let items = parse_file(source.as_bytes(), &module)?;
        Ok(TheoryFile {
            exports: items.iter().filter_map(|i| i.declared_name().cloned()).collect(),
            module,
            file_name: file_name.to_string(),
            source: source.to_string(),
        })
    }

    pub fn items(&self) -> Result<Vec<SourceItem>, ParseError> {
        parse_file(self.source.as_bytes(), &self.module)
    }
}

/// Module name of a file: its base name without directories or extension.
pub fn module_of(path: &str) -> &str {
    let base = path.rsplit(['/', '\\']).next().unwrap_or(path);
    base.strip_suffix(".dk").unwrap_or(base)
}

const EMBEDDED: &[(&str, &str)] = &[
    ("coq.dk", include_str!("../theories/coq.dk")),
    ("Logic.dk", include_str!("../theories/Logic.dk")),
    ("Datatypes.dk", include_str!("../theories/Datatypes.dk")),
    ("holtypes.dk", include_str!("../theories/holtypes.dk")),
    ("sort.dk", include_str!("../theories/sort.dk")),
    ("hol.dk", include_str!("../theories/hol.dk")),
    ("bridge.dk", include_str!("../theories/bridge.dk")),
    ("bool.dk", include_str!("../theories/bool.dk")),
    ("nat.dk", include_str!("../theories/nat.dk")),
    ("interop.dk", include_str!("../theories/interop.dk")),
];

/// Text of the corpus manifest.
pub const MANIFEST: &str = include_str!("../theories/manifest.txt");

/// Source text of an embedded corpus file, by file name.
pub fn embedded_source(file_name: &str) -> Option<&'static str> {
    EMBEDDED.iter().find(|(n, _)| *n == file_name).map(|(_, s)| *s)
}

fn embedded(file_name: &str) -> TheoryFile {
    let src = embedded_source(file_name).expect("file is part of the embedded corpus");
    TheoryFile::new(file_name, src).expect("embedded corpus files parse")
}

pub fn corpus_coq() -> TheoryFile {
    embedded("coq.dk")
}

pub fn corpus_logic() -> TheoryFile {
    embedded("Logic.dk")
}

pub fn corpus_datatypes() -> TheoryFile {
    embedded("Datatypes.dk")
}

pub fn corpus_holtypes() -> TheoryFile {
    embedded("holtypes.dk")
}

pub fn corpus_sort() -> TheoryFile {
    embedded("sort.dk")
}

pub fn corpus_hol() -> TheoryFile {
    embedded("hol.dk")
}

pub fn corpus_bridge() -> TheoryFile {
    embedded("bridge.dk")
}

pub fn corpus_bool() -> TheoryFile {
    embedded("bool.dk")
}

pub fn corpus_holnat() -> TheoryFile {
    embedded("nat.dk")
}

pub fn corpus_interop() -> TheoryFile {
    embedded("interop.dk")
}

/// Every corpus file, in manifest order.
pub fn corpus() -> Vec<TheoryFile> {
    EMBEDDED.iter().map(|(n, _)| embedded(n)).collect()
}

/// HOL symbols that the bridge interprets. In standalone mode they are
/// declared static instead. `hol.term` stays definable for its arrow rule.
pub const HOL_BRIDGED_SYMBOLS: [&str; 4] = ["type", "bool", "arrow", "proof"];

/// Turns the items of `hol.dk` into the standalone variant.
pub fn standalone_hol(items: Vec<SourceItem>) -> Vec<SourceItem> {
    items
        .into_iter()
        .map(|item| match item.kind {
            ItemKind::DefinableDecl { name, ty }
                if &*name.module == "hol" && HOL_BRIDGED_SYMBOLS.contains(&&*name.name) =>
            {
                SourceItem {
                    pos: item.pos,
                    kind: ItemKind::StaticDecl { name, ty },
                }
            }
            kind => SourceItem { pos: item.pos, kind },
        })
        .collect()
}
