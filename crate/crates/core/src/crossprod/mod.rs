//! The crossed-product double category of a π₂-indexing.
//!
//! A framed square is a triple `(up, f, down)` standing for
//! `down ⊟ U_f ⊟ up`, where `up: α ⇒ id_a` and `down: id_b ⇒ β` are 2-cells
//! of `B` and `f: a → b` is a non-identity morphism of `B*`. Triples are
//! identified along the sliding relation and stored as the least `(up, down)`
//! pair of their class. Squares over identity frames are 2-cells of `B`.

mod json;
mod model;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indexing::{Pi2Indexing, Variance};
use crate::twocat::Fin2Category;

pub use json::{export_model, import_model, ModelDocument};
pub use model::{
    check_double_axioms, decorated_horizontalization, DoubleCatModel, Edge, SquareEntry, SquareShape,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Square {
    Globular { cell: usize },
    Framed { up: usize, frame: usize, down: usize },
}

/// Which way fiber elements pass through a unit square.
///
/// `Down`: `(ν ⊟ u, f, d) ≡ (u, f, d ⊟ Φ(f)ν)` for `ν ∈ π₂(a)`, the rule for
/// indexings. `Up`: `(u, f, d ⊟ ν) ≡ (Φ(f)ν ⊟ u, f, d)` for `ν ∈ π₂(b)`, the
/// rule for opindexings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Slide {
    Down,
    Up,
}

impl Slide {
    pub fn for_variance(v: Variance) -> Self {
        match v {
            Variance::Covariant => Slide::Down,
            Variance::Contravariant => Slide::Up,
        }
    }
}

/// The three factors `down ⊟ U_f ⊟ up` of a square, or the cell itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decomposition {
    Globular(usize),
    Canonical { up: usize, frame: usize, down: usize },
}

/// Square arithmetic for one indexing. Holds the sliding classes of every
/// frame, computed once.
#[derive(Debug, Clone)]
pub struct CrossedProduct {
    pub phi: Pi2Indexing,
    pub slide: Slide,
    obj_to_zero: Vec<usize>,
    zero_to_obj: Vec<usize>,
    classes: HashMap<(usize, usize, usize), (usize, usize)>,
}

impl CrossedProduct {
    pub fn new(phi: &Pi2Indexing) -> Result<Self> {
        Self::with_slide(phi, Slide::for_variance(phi.variance))
    }

    /// Uses the given sliding rule regardless of variance. Fails if the
    /// action homs do not have the fibers the rule needs.
    pub fn with_slide(phi: &Pi2Indexing, slide: Slide) -> Result<Self> {
        let c = &phi.base.vertical;
        for f in 0..c.morphisms.len() {
            let (a, b) = (c.source(f), c.target(f));
            let (from, to) = match slide {
                Slide::Down => (a, b),
                Slide::Up => (b, a),
            };
            let hom = &phi.action[f];
            if hom.source.op != phi.fibers[from].monoid.op
                || hom.target.op != phi.fibers[to].monoid.op
                || hom.source.elements != phi.fibers[from].monoid.elements
                || hom.target.elements != phi.fibers[to].monoid.elements
            {
                return Err(Error::Mismatch(format!(
                    "action of {} does not go the way {:?} sliding needs",
                    c.morphisms[f].name, slide
                )));
            }
        }
        let obj_to_zero: Vec<usize> = (0..c.objects.len()).map(|a| phi.base.zerocell_of(a)).collect();
        let mut zero_to_obj = vec![0; obj_to_zero.len()];
        for (a, &z) in obj_to_zero.iter().enumerate() {
            zero_to_obj[z] = a;
        }
        let mut cp = Self {
            phi: phi.clone(),
            slide,
            obj_to_zero,
            zero_to_obj,
            classes: HashMap::new(),
        };
        cp.compute_classes();
        Ok(cp)
    }

    pub fn b(&self) -> &Fin2Category {
        &self.phi.base.horizontal
    }

    fn id_edge(&self, a: usize) -> usize {
        let b = self.b();
        b.id1[self.obj_to_zero[a]]
    }

    /// `2-cells α ⇒ id_a` over every endo-1-cell `α` of `a`, grouped by `α`.
    fn ups(&self, a: usize) -> Vec<Vec<usize>> {
        let b = self.b();
        let ida = self.id_edge(a);
        b.endo_onecells(self.obj_to_zero[a])
            .map(|alpha| b.cells_between(alpha, ida).collect())
            .collect()
    }

    fn downs(&self, a: usize) -> Vec<Vec<usize>> {
        let b = self.b();
        let ida = self.id_edge(a);
        b.endo_onecells(self.obj_to_zero[a])
            .map(|beta| b.cells_between(ida, beta).collect())
            .collect()
    }

    fn fiber_cell(&self, a: usize, x: usize) -> usize {
        self.phi.fibers[a].embedding[x]
    }

    fn fiber_element(&self, a: usize, cell: usize) -> usize {
        self.phi.fibers[a]
            .element_of_cell(cell)
            .expect("cell lies in the fiber")
    }

    fn v(&self, second: usize, first: usize) -> usize {
        self.b().vcomp(second, first).expect("vertically composable cells")
    }

    /// The two triples identified by one sliding step with `ν`, built from
    /// `(u, f, d)`.
    fn step(&self, (u, f, d): (usize, usize, usize), nu: usize) -> ((usize, usize), (usize, usize)) {
        let c = &self.phi.base.vertical;
        match self.slide {
            Slide::Down => {
                let a = c.source(f);
                let b = c.target(f);
                let nu_cell = self.fiber_cell(a, nu);
                let moved = self.fiber_cell(b, self.phi.apply(f, nu));
                ((self.v(nu_cell, u), d), (u, self.v(d, moved)))
            }
            Slide::Up => {
                let a = c.source(f);
                let b = c.target(f);
                let nu_cell = self.fiber_cell(b, nu);
                let moved = self.fiber_cell(a, self.phi.apply(f, nu));
                ((u, self.v(d, nu_cell)), (self.v(moved, u), d))
            }
        }
    }

    /// The fiber whose elements slide for frame `f`.
    fn sliding_fiber(&self, f: usize) -> usize {
        let c = &self.phi.base.vertical;
        match self.slide {
            Slide::Down => c.source(f),
            Slide::Up => c.target(f),
        }
    }

    fn compute_classes(&mut self) {
        let c = &self.phi.base.vertical;
        let mut classes = HashMap::new();
        for f in 0..c.morphisms.len() {
            if c.is_identity(f) {
                continue;
            }
            let (a, b) = (c.source(f), c.target(f));
            let nus = self.phi.fibers[self.sliding_fiber(f)].monoid.len();
            for ups in self.ups(a) {
                for downs in self.downs(b) {
                    let pairs: Vec<(usize, usize)> = ups
                        .iter()
                        .flat_map(|&u| downs.iter().map(move |&d| (u, d)))
                        .collect();
                    let index: HashMap<(usize, usize), usize> =
                        pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
                    let mut adjacency = vec![Vec::new(); pairs.len()];
                    for &(u, d) in &pairs {
                        for nu in 0..nus {
                            let (l, r) = self.step((u, f, d), nu);
                            let (i, j) = (index[&l], index[&r]);
                            adjacency[i].push(j);
                            adjacency[j].push(i);
                        }
                    }
                    let mut seen = vec![false; pairs.len()];
                    for start in 0..pairs.len() {
                        if seen[start] {
                            continue;
                        }
                        let mut orbit = vec![start];
                        seen[start] = true;
                        let mut k = 0;
                        while k < orbit.len() {
                            for &j in &adjacency[orbit[k]] {
                                if !seen[j] {
                                    seen[j] = true;
                                    orbit.push(j);
                                }
                            }
                            k += 1;
                        }
                        let rep = orbit.iter().map(|&i| pairs[i]).min().unwrap();
                        for &i in &orbit {
                            classes.insert((pairs[i].0, f, pairs[i].1), rep);
                        }
                    }
                }
            }
        }
        self.classes = classes;
    }

    fn check_framed(&self, up: usize, f: usize, down: usize) -> Result<()> {
        let c = &self.phi.base.vertical;
        let b = self.b();
        let ill = |msg: &str| Err(Error::IllFormedSquare(msg.to_string()));
        if f >= c.morphisms.len() || up >= b.twocells.len() || down >= b.twocells.len() {
            return ill("index out of range");
        }
        let (a, t) = (c.source(f), c.target(f));
        let (u, d) = (&b.twocells[up], &b.twocells[down]);
        if u.target != self.id_edge(a) {
            return ill("up-cell does not end at the identity of the frame's source");
        }
        if d.source != self.id_edge(t) {
            return ill("down-cell does not start at the identity of the frame's target");
        }
        let endo = |e: usize, z: usize| b.onecells[e].source == z && b.onecells[e].target == z;
        if !endo(u.source, self.obj_to_zero[a]) || !endo(d.target, self.obj_to_zero[t]) {
            return ill("outer 1-cells are not endo-1-cells");
        }
        Ok(())
    }

    /// Checks a raw square and turns identity-framed triples into cells,
    /// leaving other triples as given.
    fn reduce(&self, s: Square) -> Result<Square> {
        match s {
            Square::Globular { cell } if cell < self.b().twocells.len() => Ok(s),
            Square::Globular { cell } => Err(Error::IllFormedSquare(format!("no 2-cell {cell}"))),
            Square::Framed { up, frame, down } => {
                self.check_framed(up, frame, down)?;
                if self.phi.base.vertical.is_identity(frame) {
                    Ok(Square::Globular { cell: self.v(down, up) })
                } else {
                    Ok(s)
                }
            }
        }
    }

    /// The canonical representative of a square's class. Triples over an
    /// identity frame become the globular cell `down ⊟ up`.
    pub fn canonicalize(&self, s: Square) -> Result<Square> {
        match s {
            Square::Globular { cell } if cell < self.b().twocells.len() => Ok(s),
            Square::Globular { cell } => Err(Error::IllFormedSquare(format!("no 2-cell {cell}"))),
            Square::Framed { up, frame, down } => {
                self.check_framed(up, frame, down)?;
                if self.phi.base.vertical.is_identity(frame) {
                    return Ok(Square::Globular {
                        cell: self.v(down, up),
                    });
                }
                let (up, down) = self.classes[&(up, frame, down)];
                Ok(Square::Framed { up, frame, down })
            }
        }
    }

    pub fn square_equal(&self, s: Square, t: Square) -> bool {
        match (self.canonicalize(s), self.canonicalize(t)) {
            (Ok(x), Ok(y)) => x == y,
            _ => false,
        }
    }

    /// Both sides of the generating identification obtained from `s` and
    /// the fiber element `nu`, uncanonicalized.
    pub fn slide_pair(&self, s: Square, nu: usize) -> Result<(Square, Square)> {
        let Square::Framed { up, frame, down } = s else {
            return Err(Error::IllFormedSquare("only framed squares slide".into()));
        };
        self.check_framed(up, frame, down)?;
        if nu >= self.phi.fibers[self.sliding_fiber(frame)].monoid.len() {
            return Err(Error::UnknownElement(nu.to_string()));
        }
        let ((u1, d1), (u2, d2)) = self.step((up, frame, down), nu);
        Ok((
            Square::Framed { up: u1, frame, down: d1 },
            Square::Framed { up: u2, frame, down: d2 },
        ))
    }

    pub fn top(&self, s: Square) -> usize {
        match s {
            Square::Globular { cell } => self.b().twocells[cell].source,
            Square::Framed { up, .. } => self.b().twocells[up].source,
        }
    }

    pub fn bottom(&self, s: Square) -> usize {
        match s {
            Square::Globular { cell } => self.b().twocells[cell].target,
            Square::Framed { down, .. } => self.b().twocells[down].target,
        }
    }

    pub fn left(&self, s: Square) -> usize {
        match s {
            Square::Globular { cell } => {
                let z = self.b().cell_source0(cell);
                self.phi.base.vertical.identities[self.zero_to_obj[z]]
            }
            Square::Framed { frame, .. } => frame,
        }
    }

    pub fn right(&self, s: Square) -> usize {
        match s {
            Square::Globular { cell } => {
                let z = self.b().cell_target0(cell);
                self.phi.base.vertical.identities[self.zero_to_obj[z]]
            }
            Square::Framed { frame, .. } => frame,
        }
    }

    /// `second ⊟ first`: `first` on top, `second` below it.
    pub fn vcomp_squares(&self, second: Square, first: Square) -> Result<Square> {
        let (second, first) = (self.reduce(second)?, self.reduce(first)?);
        if self.bottom(first) != self.top(second) {
            return Err(Error::NotComposable(format!(
                "bottom 1-cell {} of the upper square differs from top 1-cell {} of the lower",
                self.b().onecells[self.bottom(first)].name,
                self.b().onecells[self.top(second)].name
            )));
        }
        let c = &self.phi.base.vertical;
        let composite = match (second, first) {
            (Square::Globular { cell: psi }, Square::Globular { cell: phi }) => Square::Globular {
                cell: self.v(psi, phi),
            },
            (Square::Framed { up, frame, down }, Square::Globular { cell }) => Square::Framed {
                up: self.v(up, cell),
                frame,
                down,
            },
            (Square::Globular { cell }, Square::Framed { up, frame, down }) => Square::Framed {
                up,
                frame,
                down: self.v(cell, down),
            },
            (
                Square::Framed { up: yu, frame: g, down: yd },
                Square::Framed { up: xu, frame: f, down: xd },
            ) => {
                let gf = c.compose(g, f).expect("frames composable");
                let mid = self.fiber_element(c.target(f), self.v(yu, xd));
                match self.slide {
                    Slide::Down => {
                        let moved = self.fiber_cell(c.target(g), self.phi.apply(g, mid));
                        Square::Framed {
                            up: xu,
                            frame: gf,
                            down: self.v(yd, moved),
                        }
                    }
                    Slide::Up => {
                        let moved = self.fiber_cell(c.source(f), self.phi.apply(f, mid));
                        Square::Framed {
                            up: self.v(moved, xu),
                            frame: gf,
                            down: yd,
                        }
                    }
                }
            }
        };
        self.canonicalize(composite)
    }

    /// `left ⊡ right`.
    pub fn hcomp_squares(&self, left: Square, right: Square) -> Result<Square> {
        let (left, right) = (self.reduce(left)?, self.reduce(right)?);
        if self.right(left) != self.left(right) {
            let name = |f: usize| self.phi.base.vertical.morphisms[f].name.clone();
            return Err(Error::FrameMismatch(format!(
                "right frame {} of the left square differs from left frame {} of the right",
                name(self.right(left)),
                name(self.left(right))
            )));
        }
        let b = self.b();
        let h = |second: usize, first: usize| b.hcomp(second, first).expect("horizontally composable cells");
        let composite = match (left, right) {
            (Square::Globular { cell: x }, Square::Globular { cell: y }) => Square::Globular { cell: h(y, x) },
            (
                Square::Framed { up: xu, frame, down: xd },
                Square::Framed { up: yu, down: yd, .. },
            ) => Square::Framed {
                up: h(yu, xu),
                frame,
                down: h(yd, xd),
            },
            _ => unreachable!("frames agree, so both squares are framed or both globular"),
        };
        self.canonicalize(composite)
    }

    /// `U_f`: the framed unit triple, or the identity cell of `id_a`.
    pub fn unit_square(&self, f: usize) -> Result<Square> {
        let c = &self.phi.base.vertical;
        if f >= c.morphisms.len() {
            return Err(Error::UnknownMorphism(format!("morphism index {f}")));
        }
        let b = self.b();
        let (a, t) = (c.source(f), c.target(f));
        let ua = b.id2[self.id_edge(a)];
        if c.is_identity(f) {
            return Ok(Square::Globular { cell: ua });
        }
        self.canonicalize(Square::Framed {
            up: ua,
            frame: f,
            down: b.id2[self.id_edge(t)],
        })
    }

    pub fn unit_square_named(&self, f: &str) -> Result<Square> {
        self.unit_square(self.phi.base.vertical.morphism(f)?)
    }

    pub fn canonical_decomposition(&self, s: Square) -> Result<Decomposition> {
        Ok(match self.canonicalize(s)? {
            Square::Globular { cell } => Decomposition::Globular(cell),
            Square::Framed { up, frame, down } => Decomposition::Canonical { up, frame, down },
        })
    }

    /// Recomposes `down ⊟ U_f ⊟ up` with [`Self::vcomp_squares`].
    pub fn recompose(&self, d: Decomposition) -> Result<Square> {
        match d {
            Decomposition::Globular(cell) => Ok(Square::Globular { cell }),
            Decomposition::Canonical { up, frame, down } => {
                let unit = self.unit_square(frame)?;
                let upper = self.vcomp_squares(unit, Square::Globular { cell: up })?;
                self.vcomp_squares(Square::Globular { cell: down }, upper)
            }
        }
    }

    /// All canonical squares: globular cells in cell order, then framed
    /// representatives ordered by (frame, up, down).
    pub fn squares(&self) -> Vec<Square> {
        let mut out: Vec<Square> = (0..self.b().twocells.len())
            .map(|cell| Square::Globular { cell })
            .collect();
        let mut framed: Vec<(usize, usize, usize)> = self
            .classes
            .iter()
            .map(|(&(_, f, _), &(u, d))| (f, u, d))
            .collect();
        framed.sort_unstable();
        framed.dedup();
        out.extend(framed.into_iter().map(|(frame, up, down)| Square::Framed { up, frame, down }));
        out
    }

    /// Size of every sliding class, keyed by canonical square.
    pub fn class_sizes(&self) -> BTreeMap<Square, usize> {
        let mut sizes = BTreeMap::new();
        for (&(_, frame, _), &(up, down)) in &self.classes {
            *sizes.entry(Square::Framed { up, frame, down }).or_insert(0) += 1;
        }
        sizes
    }

    /// Bra-ket label `|down>f<up|` of a framed square; globular squares are
    /// labelled by their cell.
    pub fn label(&self, s: Square) -> String {
        let b = self.b();
        match s {
            Square::Globular { cell } => b.twocells[cell].name.clone(),
            Square::Framed { up, frame, down } => format!(
                "|{}>{}<{}|",
                b.twocells[down].name, self.phi.base.vertical.morphisms[frame].name, b.twocells[up].name
            ),
        }
    }

    pub(crate) fn zerocell_objects(&self) -> &[usize] {
        &self.zero_to_obj
    }
}

impl fmt::Display for Square {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Square::Globular { cell } => write!(f, "glob({cell})"),
            Square::Framed { up, frame, down } => write!(f, "|{down}>{frame}<{up}|"),
        }
    }
}

/// Builds the crossed-product model with the sliding rule matching the
/// indexing's variance.
pub fn build_crossprod(phi: &Pi2Indexing) -> Result<DoubleCatModel> {
    Ok(CrossedProduct::new(phi)?.model())
}
