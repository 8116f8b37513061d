//! The `.dct` text format: monoids, categories, 2-categories, decorations
//! and indexings, with a parser and a canonical serializer.
//!
//! ```text
//! category OmegaZ2 { obj pt; id pt = e; mor g: pt->pt; comp { (g,g)->e; } }
//! twocat B { obj pt; id2 id_pt = 0; cell2 1: id_pt=>id_pt; ... }
//! decorated D = (OmegaZ2, B);
//! indexing Neg on D { g -> { 0->0; 1->2; 2->1 }; }
//! ```

mod lexer;
mod parser;
mod serialize;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::finite::category::FinCategory;
use crate::finite::monoid::FinCommMonoid;
use crate::indexing::Pi2Indexing;
use crate::twocat::{DecoratedTwoCat, Fin2Category};

pub use parser::parse_spec;
pub use serialize::serialize;

/// 1-based line and column (in characters).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParseErrorKind {
    Syntax,
    MissingEntry,
    DuplicateName,
    UnresolvedReference,
    FiberMismatch,
    Semantic,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: Span,
    /// Token descriptions that would have been accepted; syntax errors only.
    pub expected: Vec<String>,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeclKind {
    Monoid,
    Category,
    Twocat,
    Decorated,
    Indexing,
}

impl fmt::Display for DeclKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeclKind::Monoid => "monoid",
            DeclKind::Category => "category",
            DeclKind::Twocat => "twocat",
            DeclKind::Decorated => "decorated",
            DeclKind::Indexing => "indexing",
        })
    }
}

/// Every declaration of a file, keyed by name within its kind. A decorated
/// 2-category refers to entries of `categories` and `twocats` by name, an
/// indexing to an entry of `decorated`. Source positions are kept in `spans`
/// and ignored by equality.
#[derive(Debug, Clone, Default)]
pub struct Workspace {
    pub monoids: BTreeMap<String, FinCommMonoid>,
    pub categories: BTreeMap<String, FinCategory>,
    pub twocats: BTreeMap<String, Fin2Category>,
    pub decorated: BTreeMap<String, Arc<DecoratedTwoCat>>,
    pub indexings: BTreeMap<String, Pi2Indexing>,
    pub spans: BTreeMap<(DeclKind, String), Span>,
}

impl PartialEq for Workspace {
    fn eq(&self, other: &Self) -> bool {
        self.monoids == other.monoids
            && self.categories == other.categories
            && self.twocats == other.twocats
            && self.decorated == other.decorated
            && self.indexings == other.indexings
    }
}

impl Eq for Workspace {}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.monoids.is_empty()
            && self.categories.is_empty()
            && self.twocats.is_empty()
            && self.decorated.is_empty()
            && self.indexings.is_empty()
    }

    pub fn add_monoid(&mut self, m: FinCommMonoid) -> &mut Self {
        self.monoids.insert(m.name.clone(), m);
        self
    }

    /// Adds the decoration together with both of its components.
    pub fn add_decorated(&mut self, d: Arc<DecoratedTwoCat>) -> &mut Self {
        self.categories.insert(d.vertical.name.clone(), d.vertical.clone());
        self.twocats.insert(d.horizontal.name.clone(), d.horizontal.clone());
        self.decorated.insert(d.name.clone(), d);
        self
    }

    /// Adds the indexing and its base decoration.
    pub fn add_indexing(&mut self, phi: Pi2Indexing) -> &mut Self {
        self.add_decorated(phi.base.clone());
        self.indexings.insert(phi.name.clone(), phi);
        self
    }

    pub fn decorated(&self, name: &str) -> Option<&Arc<DecoratedTwoCat>> {
        self.decorated.get(name)
    }

    pub fn indexing(&self, name: &str) -> Option<&Pi2Indexing> {
        self.indexings.get(name)
    }

    pub fn span(&self, kind: DeclKind, name: &str) -> Option<Span> {
        self.spans.get(&(kind, name.to_string())).copied()
    }
}

#[cfg(test)]
mod tests;
