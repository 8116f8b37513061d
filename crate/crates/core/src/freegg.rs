//! Vertical words of globular and unit atoms over a decorated 2-category,
//! modulo the two merge rules: adjacent globular cells compose in `B` and
//! adjacent units compose as `U_g ⊟ U_f = U_{gf}`. Identity atoms vanish.
//!
//! Nothing lets a globular cell pass through a unit here, which is exactly
//! what the crossed product adds.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::crossprod::{CrossedProduct, Decomposition, Square};
use crate::error::{Error, Result};
use crate::search::SearchBudget;
use crate::twocat::DecoratedTwoCat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Atom {
    /// A 2-cell of `B`, as a globular square.
    Cell(usize),
    /// The unit square of a morphism of `B*`.
    Unit(usize),
}

/// Layers from top to bottom: `layers[0]` is applied first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FreeWord {
    pub layers: Vec<Atom>,
}

impl FreeWord {
    pub fn new(layers: Vec<Atom>) -> Self {
        Self { layers }
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }
}

/// Horizontal 1-cells on top and bottom, vertical frames on either side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordBoundary {
    pub top: usize,
    pub bottom: usize,
    pub left: usize,
    pub right: usize,
}

fn atom_boundary(d: &DecoratedTwoCat, a: Atom) -> Result<WordBoundary> {
    let (c, b) = (&d.vertical, &d.horizontal);
    match a {
        Atom::Cell(phi) => {
            let cell = b
                .twocells
                .get(phi)
                .ok_or_else(|| Error::IllFormedWord(format!("no 2-cell with index {phi}")))?;
            let obj = |z: usize| c.object(&b.zerocells[z]);
            let left = c.identities[obj(b.onecells[cell.source].source)?];
            let right = c.identities[obj(b.onecells[cell.source].target)?];
            Ok(WordBoundary {
                top: cell.source,
                bottom: cell.target,
                left,
                right,
            })
        }
        Atom::Unit(f) => {
            if f >= c.morphisms.len() {
                return Err(Error::IllFormedWord(format!("no morphism with index {f}")));
            }
            Ok(WordBoundary {
                top: b.id1[d.zerocell_of(c.source(f))],
                bottom: b.id1[d.zerocell_of(c.target(f))],
                left: f,
                right: f,
            })
        }
    }
}

/// Boundary of a word, checking that consecutive layers meet.
pub fn word_boundary(d: &DecoratedTwoCat, w: &FreeWord) -> Result<WordBoundary> {
    let mut layers = w.layers.iter();
    let first = layers
        .next()
        .ok_or_else(|| Error::IllFormedWord("empty word".into()))?;
    let mut acc = atom_boundary(d, *first)?;
    for (i, &a) in layers.enumerate() {
        let next = atom_boundary(d, a)?;
        if next.top != acc.bottom {
            return Err(Error::IllFormedWord(format!(
                "layer {} starts at {} but the previous layer ends at {}",
                i + 1,
                d.horizontal.onecells[next.top].name,
                d.horizontal.onecells[acc.bottom].name
            )));
        }
        let c = &d.vertical;
        acc = WordBoundary {
            top: acc.top,
            bottom: next.bottom,
            left: c.compose(next.left, acc.left).expect("frames meet"),
            right: c.compose(next.right, acc.right).expect("frames meet"),
        };
    }
    Ok(acc)
}

fn is_identity(d: &DecoratedTwoCat, a: Atom) -> bool {
    match a {
        Atom::Cell(phi) => d.horizontal.is_identity_cell(phi),
        Atom::Unit(f) => d.vertical.is_identity(f),
    }
}

fn merge(d: &DecoratedTwoCat, upper: Atom, lower: Atom) -> Option<Atom> {
    match (upper, lower) {
        (Atom::Cell(a), Atom::Cell(b)) => d.horizontal.vcomp(b, a).map(Atom::Cell),
        (Atom::Unit(f), Atom::Unit(g)) => d.vertical.compose(g, f).map(Atom::Unit),
        _ => None,
    }
}

/// Applies the merge rules until none fires. A word that cancels entirely
/// becomes the identity cell on its top 1-cell.
pub fn normalize_word(d: &DecoratedTwoCat, w: &FreeWord) -> Result<FreeWord> {
    let boundary = word_boundary(d, w)?;
    let mut stack: Vec<Atom> = Vec::with_capacity(w.len());
    for &a in &w.layers {
        if is_identity(d, a) {
            continue;
        }
        match stack.last().and_then(|&top| merge(d, top, a)) {
            Some(m) => {
                stack.pop();
                if !is_identity(d, m) {
                    stack.push(m);
                }
            }
            None => stack.push(a),
        }
    }
    if stack.is_empty() {
        stack.push(Atom::Cell(d.horizontal.id2[boundary.top]));
    }
    Ok(FreeWord::new(stack))
}

/// Outcome of [`min_factorization`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub length: usize,
    pub witness: FreeWord,
    pub budget: usize,
    pub examined: u64,
}

/// Shortest word equal to `w` under the merge congruence, searching every
/// well-formed word of length at most `budget` in order of length.
pub fn min_factorization(d: &DecoratedTwoCat, w: &FreeWord, budget: usize, search: &mut SearchBudget) -> Result<Factorization> {
    let target = normalize_word(d, w)?;
    if budget < target.len() {
        return Err(Error::BudgetTooSmall {
            budget,
            needed: target.len(),
        });
    }
    let goal = word_boundary(d, w)?;
    let mut alphabet = Vec::new();
    for phi in 0..d.horizontal.twocells.len() {
        alphabet.push((Atom::Cell(phi), atom_boundary(d, Atom::Cell(phi))?));
    }
    for f in 0..d.vertical.morphisms.len() {
        alphabet.push((Atom::Unit(f), atom_boundary(d, Atom::Unit(f))?));
    }
    let mut examined = 0;
    for len in 1..=budget {
        let mut word = Vec::with_capacity(len);
        let mut ctx = Search {
            d,
            alphabet: &alphabet,
            goal,
            target: &target,
            len,
            search: &mut *search,
            examined: &mut examined,
        };
        if ctx.dfs(&mut word, None)? {
            return Ok(Factorization {
                length: len,
                witness: FreeWord::new(word),
                budget,
                examined,
            });
        }
    }
    unreachable!("the normal form itself is within budget")
}

/// [`min_factorization`] with the default search cap, returning the length.
pub fn min_factorization_length(d: &DecoratedTwoCat, w: &FreeWord, budget: usize) -> Result<usize> {
    Ok(min_factorization(d, w, budget, &mut SearchBudget::default())?.length)
}

struct Search<'a> {
    d: &'a DecoratedTwoCat,
    alphabet: &'a [(Atom, WordBoundary)],
    goal: WordBoundary,
    target: &'a FreeWord,
    len: usize,
    search: &'a mut SearchBudget,
    examined: &'a mut u64,
}

impl Search<'_> {
    fn dfs(&mut self, word: &mut Vec<Atom>, acc: Option<WordBoundary>) -> Result<bool> {
        if word.len() == self.len {
            let acc = acc.expect("nonempty");
            if acc != self.goal {
                return Ok(false);
            }
            self.search.charge()?;
            *self.examined += 1;
            let w = FreeWord::new(word.clone());
            return Ok(normalize_word(self.d, &w)? == *self.target);
        }
        let c = &self.d.vertical;
        for &(a, b) in self.alphabet {
            let next = match acc {
                None if b.top != self.goal.top => continue,
                None => b,
                Some(acc) if acc.bottom != b.top => continue,
                Some(acc) => WordBoundary {
                    top: acc.top,
                    bottom: b.bottom,
                    left: c.compose(b.left, acc.left).expect("frames meet"),
                    right: c.compose(b.right, acc.right).expect("frames meet"),
                },
            };
            word.push(a);
            if self.dfs(word, Some(next))? {
                return Ok(true);
            }
            word.pop();
        }
        Ok(false)
    }
}

/// Evaluates a word in a crossed product.
pub fn evaluate_in(cp: &CrossedProduct, w: &FreeWord) -> Result<Square> {
    let mut acc: Option<Square> = None;
    for &a in &w.layers {
        let s = match a {
            Atom::Cell(phi) => Square::Globular { cell: phi },
            Atom::Unit(f) => cp.unit_square(f)?,
        };
        acc = Some(match acc {
            None => s,
            Some(prev) => cp.vcomp_squares(s, prev)?,
        });
    }
    acc.ok_or_else(|| Error::IllFormedWord("empty word".into()))
}

/// Number of atoms in the canonical decomposition of the word's value in a
/// crossed product: never more than three.
pub fn crossprod_factorization_length(cp: &CrossedProduct, w: &FreeWord) -> Result<usize> {
    let s = evaluate_in(cp, w)?;
    let b = cp.b();
    Ok(match cp.canonical_decomposition(s)? {
        Decomposition::Globular(_) => 1,
        Decomposition::Canonical { up, down, .. } => {
            1 + usize::from(!b.is_identity_cell(up)) + usize::from(!b.is_identity_cell(down))
        }
    })
}

/// Reads `m0 U(alpha) m1 U(beta)`: 2-cell names and `U(f)` units, separated
/// by whitespace or commas.
pub fn parse_word(d: &DecoratedTwoCat, text: &str) -> Result<FreeWord> {
    let layers = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| match t.strip_prefix("U(").and_then(|r| r.strip_suffix(')')) {
            Some(f) => Ok(Atom::Unit(d.vertical.morphism(f)?)),
            None => Ok(Atom::Cell(d.horizontal.twocell(t)?)),
        })
        .collect::<Result<Vec<_>>>()?;
    let w = FreeWord::new(layers);
    word_boundary(d, &w)?;
    Ok(w)
}

/// A word together with the decoration that names its atoms.
pub struct DisplayWord<'a>(pub &'a DecoratedTwoCat, pub &'a FreeWord);

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.1.layers.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match *a {
                Atom::Cell(phi) => f.write_str(&self.0.horizontal.twocells[phi].name)?,
                Atom::Unit(m) => write!(f, "U({})", self.0.vertical.morphisms[m].name)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::free_length4_decoration;

    #[test]
    fn units_merge_and_cells_merge() {
        let d = free_length4_decoration();
        let w = parse_word(&d, "U(alpha) U(beta)").unwrap();
        assert_eq!(normalize_word(&d, &w).unwrap(), parse_word(&d, "U(beta_alpha)").unwrap());
        let w = parse_word(&d, "m0 m0 U(alpha)").unwrap();
        assert_eq!(normalize_word(&d, &w).unwrap(), parse_word(&d, "U(alpha)").unwrap());
        let w = parse_word(&d, "m0 m0").unwrap();
        assert_eq!(normalize_word(&d, &w).unwrap().len(), 1);
    }

    #[test]
    fn designated_word_is_already_normal() {
        let d = free_length4_decoration();
        let w = parse_word(&d, "m0 U(alpha) m1 U(beta)").unwrap();
        assert_eq!(normalize_word(&d, &w).unwrap(), w);
        let f = min_factorization(&d, &w, 6, &mut SearchBudget::default()).unwrap();
        assert_eq!(f.length, 4);
        assert_eq!(f.witness, w);
        assert_eq!(DisplayWord(&d, &w).to_string(), "m0 U(alpha) m1 U(beta)");
    }

    #[test]
    fn small_words() {
        let d = free_length4_decoration();
        let ua = parse_word(&d, "U(alpha)").unwrap();
        assert_eq!(min_factorization_length(&d, &ua, 1).unwrap(), 1);
        let w = parse_word(&d, "m0 U(alpha)").unwrap();
        assert_eq!(min_factorization_length(&d, &w, 4).unwrap(), 2);
        assert!(matches!(
            min_factorization_length(&d, &w, 1),
            Err(Error::BudgetTooSmall { budget: 1, needed: 2 })
        ));
    }

    #[test]
    fn ill_formed_words_are_rejected() {
        let d = free_length4_decoration();
        assert!(matches!(parse_word(&d, "U(alpha) m0"), Err(Error::IllFormedWord(_))));
        assert!(matches!(parse_word(&d, ""), Err(Error::IllFormedWord(_))));
        assert!(parse_word(&d, "U(nope)").is_err());
    }
}
