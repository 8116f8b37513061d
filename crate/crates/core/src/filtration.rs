//! The globularly generated piece of a finite double category and its
//! vertical filtration.
//!
//! Generators are the globular squares and the unit squares, marked 0.
//! `V^1` is their closure under `⊟`, `H^1` the closure of `V^1` under `⊡`,
//! `V^2` the closure of `H^1` under `⊟`, and so on until nothing new
//! appears. A square first reached in `V^k` is marked `k`, one first reached
//! in `H^k` is marked `k + ½`. Markings are stored in half-units.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::crossprod::{DoubleCatModel, SquareShape};

/// How a square was first reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Derivation {
    Generator,
    /// `lower ⊟ upper`.
    Vertical { upper: usize, lower: usize },
    /// `left ⊡ right`.
    Horizontal { left: usize, right: usize },
}

/// Which end of a word new atoms are attached to during closure. Both
/// orders reach the same squares; comparing them checks confluence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClosureOrder {
    /// New atoms go below (vertical) or to the right (horizontal).
    #[default]
    Forward,
    Reverse,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkingReport {
    /// Marking of each square in half-units; `None` outside `γ`.
    pub half_markings: Vec<Option<u32>>,
    pub length: u32,
    pub globularly_generated: bool,
    pub derivations: Vec<Option<Derivation>>,
    /// Number of closure rounds (`V` and `H` each count one) until stable.
    pub rounds: u32,
}

impl MarkingReport {
    pub fn marking(&self, s: usize) -> Option<f64> {
        self.half_markings[s].map(|h| f64::from(h) / 2.0)
    }

    /// The witness of `s` as an expression over generator names.
    pub fn expression(&self, m: &DoubleCatModel, s: usize) -> Option<Expr> {
        Some(match self.derivations[s]? {
            Derivation::Generator => Expr::Atom(m.squares[s].name.clone()),
            Derivation::Vertical { upper, lower } => Expr::Vertical(
                Box::new(self.expression(m, upper)?),
                Box::new(self.expression(m, lower)?),
            ),
            Derivation::Horizontal { left, right } => Expr::Horizontal(
                Box::new(self.expression(m, left)?),
                Box::new(self.expression(m, right)?),
            ),
        })
    }
}

/// A witness tree. `Vertical(upper, lower)`, `Horizontal(left, right)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Atom(String),
    Vertical(Box<Expr>, Box<Expr>),
    Horizontal(Box<Expr>, Box<Expr>),
}

impl Expr {
    /// Atoms in a maximal vertical stack, top to bottom, if the expression
    /// uses no horizontal composition.
    pub fn vertical_atoms(&self) -> Option<Vec<&str>> {
        match self {
            Expr::Atom(a) => Some(vec![a.as_str()]),
            Expr::Vertical(u, l) => {
                let mut out = u.vertical_atoms()?;
                out.extend(l.vertical_atoms()?);
                Some(out)
            }
            Expr::Horizontal(..) => None,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Atom(a) => f.write_str(a),
            Expr::Vertical(u, l) => write!(f, "({l} ⊟ {u})"),
            Expr::Horizontal(l, r) => write!(f, "({l} ⊡ {r})"),
        }
    }
}

/// Globular squares and unit squares, in square order.
pub fn generators(m: &DoubleCatModel) -> Vec<usize> {
    let mut gen = vec![false; m.squares.len()];
    for s in 0..m.squares.len() {
        gen[s] = m.is_globular(s);
    }
    for &u in &m.unit {
        gen[u] = true;
    }
    (0..m.squares.len()).filter(|&s| gen[s]).collect()
}

/// Closes `atoms` under one composition. Newly reached squares are
/// returned with their derivations in discovery order.
fn close(
    m: &DoubleCatModel,
    atoms: &[usize],
    vertical: bool,
    order: ClosureOrder,
    known: &[bool],
) -> Vec<(usize, Derivation)> {
    let mut seen = known.to_vec();
    let mut out = Vec::new();
    let mut queue: VecDeque<usize> = atoms.iter().copied().collect();
    while let Some(w) = queue.pop_front() {
        for &a in atoms {
            // (word, atom) in the requested order
            let (first, second) = match order {
                ClosureOrder::Forward => (w, a),
                ClosureOrder::Reverse => (a, w),
            };
            let (result, derivation) = if vertical {
                let r = if m.v_composable(second, first) { m.vcomp(second, first) } else { None };
                (r, Derivation::Vertical { upper: first, lower: second })
            } else {
                let r = if m.h_composable(first, second) { m.hcomp(first, second) } else { None };
                (r, Derivation::Horizontal { left: first, right: second })
            };
            if let Some(r) = result {
                if !seen[r] {
                    seen[r] = true;
                    out.push((r, derivation));
                    queue.push_back(r);
                }
            }
        }
    }
    out
}

pub fn vertical_filtration(m: &DoubleCatModel) -> MarkingReport {
    vertical_filtration_with(m, ClosureOrder::Forward)
}

pub fn vertical_filtration_with(m: &DoubleCatModel, order: ClosureOrder) -> MarkingReport {
    let n = m.squares.len();
    let mut half = vec![None; n];
    let mut derivations = vec![None; n];
    let mut current = generators(m);
    for &g in &current {
        half[g] = Some(0);
        derivations[g] = Some(Derivation::Generator);
    }
    let mut rounds = 0;
    let mut stable_streak = 0;
    // alternate V and H rounds until two consecutive rounds add nothing
    while stable_streak < 2 {
        let vertical = rounds % 2 == 0;
        rounds += 1;
        let known: Vec<bool> = half.iter().map(Option::is_some).collect();
        let found = close(m, &current, vertical, order, &known);
        if found.is_empty() {
            stable_streak += 1;
            continue;
        }
        stable_streak = 0;
        // round r is V^k (marked 2k half-units) for odd r = 2k - 1 and H^k
        // (marked 2k + 1) for even r = 2k
        let mark = rounds as u32 + 1;
        for (s, d) in found {
            half[s] = Some(mark);
            derivations[s] = Some(d);
            current.push(s);
        }
    }
    let length = half.iter().flatten().map(|&h| h.div_ceil(2)).max().unwrap_or(0).max(1);
    MarkingReport {
        globularly_generated: half.iter().all(Option::is_some),
        half_markings: half,
        length,
        derivations,
        rounds: rounds as u32,
    }
}

/// `ℓ` of the globularly generated piece.
pub fn length(m: &DoubleCatModel) -> u32 {
    vertical_filtration(m).length
}

/// The sub-model on the squares generated by globular and unit squares.
pub fn globularly_generated_piece(m: &DoubleCatModel) -> DoubleCatModel {
    let report = vertical_filtration(m);
    let keep: Vec<usize> = (0..m.squares.len()).filter(|&s| report.half_markings[s].is_some()).collect();
    let mut new_index = vec![usize::MAX; m.squares.len()];
    for (i, &s) in keep.iter().enumerate() {
        new_index[s] = i;
    }
    let k = keep.len();
    let n = m.squares.len();
    let restrict = |table: &[Option<usize>]| -> Vec<Option<usize>> {
        (0..k * k)
            .map(|i| table[keep[i / k] * n + keep[i % k]].map(|r| new_index[r]))
            .collect()
    };
    DoubleCatModel {
        name: format!("gamma({})", m.name),
        squares: keep
            .iter()
            .map(|&s| {
                let mut e = m.squares[s].clone();
                e.shape = match e.shape {
                    SquareShape::Globular { cell } => SquareShape::Globular { cell: new_index[cell] },
                    SquareShape::Framed { up, frame, down } => SquareShape::Framed {
                        up: new_index[up],
                        frame,
                        down: new_index[down],
                    },
                    SquareShape::Other => SquareShape::Other,
                };
                e
            })
            .collect(),
        square_identity: m.square_identity.iter().map(|&s| new_index[s]).collect(),
        vcomp: restrict(&m.vcomp),
        hcomp: restrict(&m.hcomp),
        unit: m.unit.iter().map(|&s| new_index[s]).collect(),
        ..m.clone()
    }
}

/// Fewest generators whose vertical composite is each square, using `⊟`
/// only; `None` where no vertical word reaches the square.
pub fn vertical_word_lengths(m: &DoubleCatModel) -> Vec<Option<usize>> {
    let atoms = generators(m);
    let mut best = vec![None; m.squares.len()];
    let mut level: Vec<usize> = Vec::new();
    for &a in &atoms {
        best[a] = Some(1);
        level.push(a);
    }
    let mut len = 1;
    while !level.is_empty() {
        len += 1;
        let mut next = Vec::new();
        for &w in &level {
            for &a in &atoms {
                if !m.v_composable(a, w) {
                    continue;
                }
                if let Some(r) = m.vcomp(a, w) {
                    if best[r].is_none() {
                        best[r] = Some(len);
                        next.push(r);
                    }
                }
            }
        }
        level = next;
    }
    best
}

/// Square names with markings, for reports.
pub fn named_markings(m: &DoubleCatModel, r: &MarkingReport) -> BTreeMap<String, Option<f64>> {
    (0..m.squares.len())
        .map(|s| (m.squares[s].name.clone(), r.marking(s)))
        .collect()
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;
    use std::sync::Arc;

    use super::*;
    use crate::crossprod::{build_crossprod, check_double_axioms};
    use crate::finite::category::CategoryBuilder;
    use crate::finite::monoid::{FinCommMonoid, MonoidHom};
    use crate::gallery::synthetic::{length_two_model, with_orphan};
    use crate::indexing::{Pi2Indexing, Variance};
    use crate::twocat::{DecoratedTwoCat, Fin2Category};

    fn running_model() -> DoubleCatModel {
        let v = CategoryBuilder::new("OmegaZ2")
            .object("pt")
            .identity_name("pt", "e")
            .morphism("g", "pt", "pt")
            .compose("g", "g", "e")
            .build()
            .unwrap();
        let h = Fin2Category::double_delooping(&FinCommMonoid::cyclic("Z3", 3), "pt", "id_pt");
        let d = Arc::new(DecoratedTwoCat {
            name: "D".into(),
            vertical: v,
            horizontal: h,
        });
        let fib = d.fibers().unwrap()[0].monoid.clone();
        let neg = MonoidHom {
            source: fib.clone(),
            target: fib,
            map: vec![0, 2, 1],
        };
        let phi = Pi2Indexing::new("Neg", d, Variance::Covariant, BTreeMap::from([("g".into(), neg)])).unwrap();
        build_crossprod(&phi).unwrap()
    }

    #[test]
    fn crossed_product_has_length_one() {
        let m = running_model();
        let r = vertical_filtration(&m);
        assert!(r.globularly_generated);
        assert_eq!(r.length, 1);
        assert!(r.half_markings.iter().all(|h| h.unwrap() <= 2));
        assert_eq!(globularly_generated_piece(&m).squares, m.squares);
        assert!(vertical_word_lengths(&m).iter().all(|l| l.unwrap() <= 3));
    }

    #[test]
    fn vertically_trivial_model() {
        let v = CategoryBuilder::new("pt").object("pt").build().unwrap();
        let h = Fin2Category::double_delooping(&FinCommMonoid::cyclic("Z3", 3), "pt", "id_pt");
        let d = Arc::new(DecoratedTwoCat {
            name: "D".into(),
            vertical: v,
            horizontal: h,
        });
        let phi = Pi2Indexing::new("Id", d, Variance::Covariant, BTreeMap::new()).unwrap();
        let m = build_crossprod(&phi).unwrap();
        let r = vertical_filtration(&m);
        assert!(r.half_markings.iter().all(|&h| h == Some(0)));
        assert_eq!(r.length, 1);
        assert_eq!(globularly_generated_piece(&m), DoubleCatModel { name: format!("gamma({})", m.name), ..m.clone() });
    }

    #[test]
    fn half_marking_forces_length_two() {
        let m = length_two_model();
        assert!(check_double_axioms(&m).is_empty());
        let r = vertical_filtration(&m);
        let c = m.square("h|1,1").unwrap();
        assert_eq!(r.marking(c), Some(1.5));
        assert_eq!(r.length, 2);
        assert!(matches!(r.derivations[c], Some(Derivation::Horizontal { .. })));
        let rev = vertical_filtration_with(&m, ClosureOrder::Reverse);
        assert_eq!(rev.half_markings, r.half_markings);
    }

    #[test]
    fn orphan_square_is_excluded() {
        let m = with_orphan(&length_two_model());
        assert!(check_double_axioms(&m).is_empty());
        let r = vertical_filtration(&m);
        assert!(!r.globularly_generated);
        let z = m.square("Z").unwrap();
        assert_eq!(r.half_markings[z], None);
        let g = globularly_generated_piece(&m);
        assert!(g.square("Z").is_err());
        assert!(check_double_axioms(&g).is_empty());
        assert_eq!(length(&g), length(&m));
    }
}
