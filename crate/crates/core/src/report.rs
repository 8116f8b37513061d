use std::fmt;

use serde::{Deserialize, Serialize};

/// The law a [`Violation`] witnesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    UnitLaw,
    Associativity,
    Commutativity,
    Closure,
    Boundary,
    UndefinedComposite,
    Interchange,
    IdentityCells,
    EckmannHilton,
    HomUnit,
    HomMultiplicative,
    FiberMismatch,
    NotAHom,
    NotFunctorial,
    FunctorBoundary,
    FunctorIdentity,
    FunctorComposition,
    FrameLaw,
    UnitFunctor,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Law::UnitLaw => "unit law",
            Law::Associativity => "associativity",
            Law::Commutativity => "commutativity",
            Law::Closure => "closure",
            Law::Boundary => "boundary",
            Law::UndefinedComposite => "composite defined on non-composable pair",
            Law::Interchange => "interchange",
            Law::IdentityCells => "identity cells",
            Law::EckmannHilton => "Eckmann-Hilton",
            Law::HomUnit => "hom preserves unit",
            Law::HomMultiplicative => "hom preserves product",
            Law::FiberMismatch => "fiber mismatch",
            Law::NotAHom => "not a hom",
            Law::NotFunctorial => "not functorial",
            Law::FunctorBoundary => "functor preserves boundaries",
            Law::FunctorIdentity => "functor preserves identities",
            Law::FunctorComposition => "functor preserves composition",
            Law::FrameLaw => "frame law",
            Law::UnitFunctor => "unit functor",
        };
        f.write_str(s)
    }
}

/// One failed law instance with the identifiers that witness it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub law: Law,
    pub witnesses: Vec<String>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.law, self.witnesses.join(", "))?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

/// Every violated law instance found by an exhaustive check.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn push<S: Into<String>>(&mut self, law: Law, witnesses: Vec<String>, detail: S) {
        self.violations.push(Violation {
            law,
            witnesses,
            detail: detail.into(),
        });
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    /// Prefix every witness detail with `context`, used when merging reports
    /// of sub-structures.
    pub fn with_context(mut self, context: &str) -> Self {
        for v in &mut self.violations {
            v.detail = if v.detail.is_empty() {
                context.to_string()
            } else {
                format!("{context}: {}", v.detail)
            };
        }
        self
    }

    pub fn has(&self, law: Law) -> bool {
        self.violations.iter().any(|v| v.law == law)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return writeln!(f, "ok: no violations");
        }
        writeln!(f, "{} violation(s):", self.len())?;
        for v in &self.violations {
            writeln!(f, "  - {v}")?;
        }
        Ok(())
    }
}

/// Helper used by exhaustive checkers: stop recording after this many
/// violations of one kind so corrupted inputs do not produce huge reports.
pub(crate) const MAX_PER_LAW: usize = 64;

pub(crate) struct Recorder<'a> {
    report: &'a mut ValidationReport,
    counts: std::collections::HashMap<Law, usize>,
}

impl<'a> Recorder<'a> {
    pub(crate) fn new(report: &'a mut ValidationReport) -> Self {
        Self {
            report,
            counts: Default::default(),
        }
    }

    pub(crate) fn record<S: Into<String>>(&mut self, law: Law, witnesses: Vec<String>, detail: S) {
        let n = self.counts.entry(law).or_insert(0);
        *n += 1;
        if *n <= MAX_PER_LAW {
            self.report.push(law, witnesses, detail);
        }
    }
}
