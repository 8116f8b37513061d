use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{CrossedProduct, Square};
use crate::error::{Error, Result};
use crate::finite::category::{validate_category, FinCategory, Morphism};
use crate::finite::functor::CatFunctor;
use crate::report::{Law, Recorder, ValidationReport};
use crate::twocat::{DecoratedTwoCat, Fin2Category, OneCell, TwoCell};

/// A horizontal 1-cell between objects of the object category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SquareShape {
    Globular { cell: usize },
    Framed { up: usize, frame: usize, down: usize },
    /// A square of a model not built by the crossed-product engine.
    Other,
}

impl From<Square> for SquareShape {
    fn from(s: Square) -> Self {
        match s {
            Square::Globular { cell } => SquareShape::Globular { cell },
            Square::Framed { up, frame, down } => SquareShape::Framed { up, frame, down },
        }
    }
}

/// A square with its boundary: `top`/`bottom` are edges, `left`/`right`
/// morphisms of the object category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareEntry {
    pub name: String,
    pub shape: SquareShape,
    pub top: usize,
    pub bottom: usize,
    pub left: usize,
    pub right: usize,
}

/// A finite strict double category given by explicit tables.
///
/// `edge_comp` and `vcomp` are keyed `(second, first)`; `hcomp` is keyed
/// `(left, right)`, so `hcomp[l * n + r]` is `l ⊡ r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleCatModel {
    pub name: String,
    /// Name of the decorated 2-category the model internalizes.
    pub decorated_name: String,
    pub horizontal_name: String,
    pub objects: FinCategory,
    /// `zerocell_order[z]` is the object of the `z`-th 0-cell of `B`.
    pub zerocell_order: Vec<usize>,
    pub edges: Vec<Edge>,
    pub edge_identity: Vec<usize>,
    pub edge_comp: Vec<Option<usize>>,
    pub squares: Vec<SquareEntry>,
    pub square_identity: Vec<usize>,
    pub vcomp: Vec<Option<usize>>,
    pub hcomp: Vec<Option<usize>>,
    pub unit: Vec<usize>,
}

impl DoubleCatModel {
    pub fn square_count(&self) -> usize {
        self.squares.len()
    }

    pub fn vcomp(&self, second: usize, first: usize) -> Option<usize> {
        self.vcomp[second * self.squares.len() + first]
    }

    pub fn hcomp(&self, left: usize, right: usize) -> Option<usize> {
        self.hcomp[left * self.squares.len() + right]
    }

    pub fn square(&self, name: &str) -> Result<usize> {
        self.squares
            .iter()
            .position(|s| s.name == name)
            .ok_or_else(|| Error::UnknownCell(name.to_string()))
    }

    /// Whether both vertical sides of a square are identities.
    pub fn is_globular(&self, s: usize) -> bool {
        let e = &self.squares[s];
        self.objects.is_identity(e.left) && self.objects.is_identity(e.right)
    }

    pub fn v_composable(&self, second: usize, first: usize) -> bool {
        self.squares[first].bottom == self.squares[second].top
    }

    pub fn h_composable(&self, left: usize, right: usize) -> bool {
        self.squares[left].right == self.squares[right].left
    }

    /// Edges and squares under vertical composition.
    pub fn square_category(&self) -> FinCategory {
        FinCategory {
            name: format!("{}_1", self.name),
            objects: self.edges.iter().map(|e| e.name.clone()).collect(),
            morphisms: self
                .squares
                .iter()
                .map(|s| Morphism {
                    name: s.name.clone(),
                    source: s.top,
                    target: s.bottom,
                })
                .collect(),
            identities: self.square_identity.clone(),
            comp: self.vcomp.clone(),
        }
    }

    /// Objects and edges under horizontal composition.
    pub fn edge_category(&self) -> FinCategory {
        FinCategory {
            name: format!("{}_h", self.name),
            objects: self.objects.objects.clone(),
            morphisms: self
                .edges
                .iter()
                .map(|e| Morphism {
                    name: e.name.clone(),
                    source: e.source,
                    target: e.target,
                })
                .collect(),
            identities: self.edge_identity.clone(),
            comp: self.edge_comp.clone(),
        }
    }
}

impl CrossedProduct {
    /// Materializes every canonical square and all structure tables.
    pub fn model(&self) -> DoubleCatModel {
        let b = self.b();
        let c = &self.phi.base.vertical;
        let squares = self.squares();
        let index: std::collections::HashMap<Square, usize> =
            squares.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let n = squares.len();
        let mut vcomp = vec![None; n * n];
        let mut hcomp = vec![None; n * n];
        for (i, &s) in squares.iter().enumerate() {
            for (j, &t) in squares.iter().enumerate() {
                if let Ok(r) = self.vcomp_squares(s, t) {
                    vcomp[i * n + j] = Some(index[&r]);
                }
                if let Ok(r) = self.hcomp_squares(s, t) {
                    hcomp[i * n + j] = Some(index[&r]);
                }
            }
        }
        let entries = squares
            .iter()
            .map(|&s| SquareEntry {
                name: self.label(s),
                shape: s.into(),
                top: self.top(s),
                bottom: self.bottom(s),
                left: self.left(s),
                right: self.right(s),
            })
            .collect();
        let zero_to_obj = self.zerocell_objects();
        DoubleCatModel {
            name: format!("{} x| {}", self.phi.base.horizontal.name, self.phi.name),
            decorated_name: self.phi.base.name.clone(),
            horizontal_name: b.name.clone(),
            objects: c.clone(),
            zerocell_order: zero_to_obj.to_vec(),
            edges: b
                .onecells
                .iter()
                .map(|e| Edge {
                    name: e.name.clone(),
                    source: zero_to_obj[e.source],
                    target: zero_to_obj[e.target],
                })
                .collect(),
            edge_identity: (0..c.objects.len()).map(|a| self.id_edge(a)).collect(),
            edge_comp: b.comp1.clone(),
            squares: entries,
            square_identity: b.id2.clone(),
            vcomp,
            hcomp,
            unit: (0..c.morphisms.len())
                .map(|f| index[&self.unit_square(f).expect("morphism in range")])
                .collect(),
        }
    }
}

fn check_structure(m: &DoubleCatModel) -> std::result::Result<(), String> {
    let (no, nm) = (m.objects.objects.len(), m.objects.morphisms.len());
    let (ne, ns) = (m.edges.len(), m.squares.len());
    if m.zerocell_order.len() != no || m.zerocell_order.iter().any(|&o| o >= no) {
        return Err("0-cell order is not a list of objects".into());
    }
    if m.edges.iter().any(|e| e.source >= no || e.target >= no) {
        return Err("edge endpoint out of range".into());
    }
    if m.edge_identity.len() != no || m.edge_identity.iter().any(|&e| e >= ne) {
        return Err("edge identities malformed".into());
    }
    if m.edge_comp.len() != ne * ne || m.edge_comp.iter().flatten().any(|&e| e >= ne) {
        return Err("edge composition table malformed".into());
    }
    for s in &m.squares {
        if s.top >= ne || s.bottom >= ne || s.left >= nm || s.right >= nm {
            return Err(format!("boundary of square {} out of range", s.name));
        }
    }
    if m.square_identity.len() != ne || m.square_identity.iter().any(|&s| s >= ns) {
        return Err("identity squares malformed".into());
    }
    for (label, table) in [("vcomp", &m.vcomp), ("hcomp", &m.hcomp)] {
        if table.len() != ns * ns || table.iter().flatten().any(|&s| s >= ns) {
            return Err(format!("{label} table malformed"));
        }
    }
    if m.unit.len() != nm || m.unit.iter().any(|&s| s >= ns) {
        return Err("unit table malformed".into());
    }
    Ok(())
}

fn merge_category(rec: &mut ValidationReport, c: &FinCategory, context: &str) -> bool {
    match validate_category(c) {
        Ok(r) => {
            rec.extend(r.with_context(context));
            true
        }
        Err(e) => {
            rec.push(Law::UndefinedComposite, vec![c.name.clone()], format!("{context}: {e}"));
            false
        }
    }
}

fn merge_functor(rec: &mut ValidationReport, f: &CatFunctor, context: &str) {
    match f.validate() {
        Ok(r) => rec.extend(r.with_context(context)),
        Err(e) => rec.push(Law::FunctorBoundary, vec![], format!("{context}: {e}")),
    }
}

/// Exhaustive check of the strict double-category laws: the object, edge
/// and square categories, the frame functors `L`, `R` and the unit functor
/// `U` with `LU = RU = id`, boundaries, associativity and units of `⊡`,
/// preservation of identity squares, and interchange.
pub fn check_double_axioms(m: &DoubleCatModel) -> ValidationReport {
    let mut report = ValidationReport::new();
    if let Err(detail) = check_structure(m) {
        report.push(Law::Closure, vec![m.name.clone()], detail);
        return report;
    }
    let objects_ok = merge_category(&mut report, &m.objects, "object category");
    let edges_ok = merge_category(&mut report, &m.edge_category(), "edge category");
    let squares_ok = merge_category(&mut report, &m.square_category(), "square category");
    if !(objects_ok && edges_ok && squares_ok) {
        return report;
    }

    let c0 = Arc::new(m.objects.clone());
    let c1 = Arc::new(m.square_category());
    let frame = |pick: fn(&SquareEntry) -> usize, end: fn(&Edge) -> usize| CatFunctor {
        source: c1.clone(),
        target: c0.clone(),
        object_map: m.edges.iter().map(end).collect(),
        morphism_map: m.squares.iter().map(pick).collect(),
    };
    merge_functor(&mut report, &frame(|s| s.left, |e| e.source), "L");
    merge_functor(&mut report, &frame(|s| s.right, |e| e.target), "R");
    merge_functor(
        &mut report,
        &CatFunctor {
            source: c0.clone(),
            target: c1.clone(),
            object_map: m.edge_identity.clone(),
            morphism_map: m.unit.clone(),
        },
        "U",
    );

    let ns = m.squares.len();
    let name = |s: usize| m.squares[s].name.clone();
    let mut rec = Recorder::new(&mut report);
    for (f, &u) in m.unit.iter().enumerate() {
        if m.squares[u].left != f || m.squares[u].right != f {
            rec.record(Law::UnitFunctor, vec![m.objects.morphisms[f].name.clone()], "LU or RU is not the identity");
        }
    }
    for l in 0..ns {
        for r in 0..ns {
            let entry = m.hcomp(l, r);
            if !m.h_composable(l, r) {
                if entry.is_some() {
                    rec.record(Law::UndefinedComposite, vec![name(l), name(r)], "hcomp");
                }
                continue;
            }
            let Some(lr) = entry else {
                rec.record(Law::Closure, vec![name(l), name(r)], "hcomp missing on composable pair");
                continue;
            };
            let (sl, sr, s) = (&m.squares[l], &m.squares[r], &m.squares[lr]);
            let top = m.edge_comp[sr.top * m.edges.len() + sl.top];
            let bottom = m.edge_comp[sr.bottom * m.edges.len() + sl.bottom];
            if s.left != sl.left || s.right != sr.right || top != Some(s.top) || bottom != Some(s.bottom) {
                rec.record(Law::Boundary, vec![name(l), name(r), name(lr)], "hcomp");
            }
        }
    }
    for s in 0..ns {
        let e = &m.squares[s];
        if m.hcomp(m.unit[e.left], s) != Some(s) || m.hcomp(s, m.unit[e.right]) != Some(s) {
            rec.record(Law::UnitLaw, vec![name(s)], "hcomp with unit squares");
        }
    }
    for x in 0..m.edges.len() {
        for y in 0..m.edges.len() {
            if m.edges[x].target != m.edges[y].source {
                continue;
            }
            let Some(yx) = m.edge_comp[y * m.edges.len() + x] else { continue };
            if m.hcomp(m.square_identity[x], m.square_identity[y]) != Some(m.square_identity[yx]) {
                rec.record(Law::IdentityCells, vec![m.edges[x].name.clone(), m.edges[y].name.clone()], "hcomp of identity squares");
            }
        }
    }
    for x in 0..ns {
        for y in (0..ns).filter(|&y| m.h_composable(x, y)) {
            let Some(xy) = m.hcomp(x, y) else { continue };
            for z in (0..ns).filter(|&z| m.h_composable(y, z)) {
                let l = m.hcomp(xy, z);
                let r = m.hcomp(y, z).and_then(|yz| m.hcomp(x, yz));
                if l != r {
                    rec.record(Law::Associativity, vec![name(x), name(y), name(z)], "hcomp");
                }
            }
        }
    }
    // (s' ⊟ s) ⊡ (t' ⊟ t) = (s' ⊡ t') ⊟ (s ⊡ t)
    let below: Vec<Vec<usize>> = (0..ns)
        .map(|s| (0..ns).filter(|&t| m.v_composable(t, s)).collect())
        .collect();
    for s in 0..ns {
        for t in (0..ns).filter(|&t| m.h_composable(s, t)) {
            let Some(st) = m.hcomp(s, t) else { continue };
            for &s2 in &below[s] {
                for &t2 in below[t].iter().filter(|&&t2| m.h_composable(s2, t2)) {
                    let l = match (m.vcomp(s2, s), m.vcomp(t2, t)) {
                        (Some(a), Some(b)) => m.hcomp(a, b),
                        _ => None,
                    };
                    let r = m.hcomp(s2, t2).and_then(|top| m.vcomp(top, st));
                    if l != r || l.is_none() {
                        rec.record(Law::Interchange, vec![name(s2), name(s), name(t2), name(t)], "");
                    }
                }
            }
        }
    }
    report
}

/// Recovers `(B*, B)` from a model: the object category and the 2-category
/// of globular squares, which lead the square list in cell order.
pub fn decorated_horizontalization(m: &DoubleCatModel) -> Result<DecoratedTwoCat> {
    check_structure(m).map_err(Error::Invalid)?;
    let globular: Vec<usize> = (0..m.squares.len()).filter(|&s| m.is_globular(s)).collect();
    if globular.iter().enumerate().any(|(i, &s)| i != s) {
        return Err(Error::Invalid("globular squares do not lead the square list".into()));
    }
    let n2 = globular.len();
    let ns = m.squares.len();
    let mut inv = vec![0; m.zerocell_order.len()];
    for (z, &o) in m.zerocell_order.iter().enumerate() {
        inv[o] = z;
    }
    let restrict = |table: &dyn Fn(usize, usize) -> Option<usize>| -> Result<Vec<Option<usize>>> {
        let mut out = Vec::with_capacity(n2 * n2);
        for second in 0..n2 {
            for first in 0..n2 {
                let r = table(second, first);
                if r.is_some_and(|r| r >= n2) {
                    return Err(Error::Invalid("globular squares are not closed under composition".into()));
                }
                out.push(r);
            }
        }
        Ok(out)
    };
    let vcomp = restrict(&|s, f| m.vcomp[s * ns + f])?;
    let hcomp = restrict(&|s, f| m.hcomp[f * ns + s])?;
    let horizontal = Fin2Category {
        name: m.horizontal_name.clone(),
        zerocells: m.zerocell_order.iter().map(|&o| m.objects.objects[o].clone()).collect(),
        onecells: m
            .edges
            .iter()
            .map(|e| OneCell {
                name: e.name.clone(),
                source: inv[e.source],
                target: inv[e.target],
            })
            .collect(),
        id1: m.zerocell_order.iter().map(|&o| m.edge_identity[o]).collect(),
        comp1: m.edge_comp.clone(),
        twocells: globular
            .iter()
            .map(|&s| TwoCell {
                name: m.squares[s].name.clone(),
                source: m.squares[s].top,
                target: m.squares[s].bottom,
            })
            .collect(),
        id2: m.square_identity.clone(),
        vcomp,
        hcomp,
    };
    Ok(DecoratedTwoCat {
        name: m.decorated_name.clone(),
        vertical: m.objects.clone(),
        horizontal,
    })
}
