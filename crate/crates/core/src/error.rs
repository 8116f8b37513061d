use thiserror::Error;

/// Errors raised while building or querying finite structures.
///
/// Law violations are not errors: they are collected into a
/// [`ValidationReport`](crate::report::ValidationReport). Errors signal input
/// that cannot even be checked (dangling references, holes in tables) or an
/// operation applied outside its domain.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("unknown cell `{0}`")]
    UnknownCell(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("missing table entry {table}({second}, {first})")]
    MissingComposite {
        table: &'static str,
        second: String,
        first: String,
    },
    #[error("missing entry: {0}")]
    MissingEntry(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("Eckmann-Hilton violation at `{object}` on ({x}, {y}): {detail}")]
    EckmannHiltonViolation {
        object: String,
        x: String,
        y: String,
        detail: String,
    },
    #[error("object sets differ: only vertical {only_vertical:?}, only horizontal {only_horizontal:?}")]
    ObjectMismatch {
        only_vertical: Vec<String>,
        only_horizontal: Vec<String>,
    },
    #[error("fiber mismatch: {0}")]
    FiberMismatch(String),
    #[error("not a monoid homomorphism: {0}")]
    NotAHom(String),
    #[error("not functorial: {0}")]
    NotFunctorial(String),
    #[error("search budget of {cap} candidates exceeded")]
    SearchBudgetExceeded { cap: u64 },
    #[error("squares not composable: {0}")]
    NotComposable(String),
    #[error("frame mismatch: {0}")]
    FrameMismatch(String),
    #[error("ill-formed square: {0}")]
    IllFormedSquare(String),
    #[error("ill-formed word: {0}")]
    IllFormedWord(String),
    #[error("budget {budget} is smaller than the normal form length {needed}")]
    BudgetTooSmall { budget: usize, needed: usize },
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("not an action by automorphisms: {0}")]
    NotAnAction(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
