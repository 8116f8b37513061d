//! Strict finite 2-categories, decorations by a finite category, and the
//! π₂ fiber monoids.
//!
//! Tables are dense and keyed `(second, first)`: `comp1[β * n1 + α]` is
//! `β ∘ α`, `vcomp[ψ * n2 + φ]` is `ψ ⊟ φ` (first `φ`, then `ψ`) and
//! `hcomp[ψ * n2 + φ]` is `φ` followed horizontally by `ψ`, whose boundary
//! 1-cells are the composites `∘` of those of `ψ` and `φ`.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite::category::{check_category_structure, opposite_category, validate_category, FinCategory, Morphism};
use crate::finite::monoid::FinCommMonoid;
use crate::report::{Law, Recorder, ValidationReport};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OneCell {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A 2-cell between the 1-cells `source` and `target`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwoCell {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fin2Category {
    pub name: String,
    pub zerocells: Vec<String>,
    pub onecells: Vec<OneCell>,
    pub id1: Vec<usize>,
    pub comp1: Vec<Option<usize>>,
    pub twocells: Vec<TwoCell>,
    pub id2: Vec<usize>,
    pub vcomp: Vec<Option<usize>>,
    pub hcomp: Vec<Option<usize>>,
}

impl Fin2Category {
    pub fn comp1(&self, second: usize, first: usize) -> Option<usize> {
        self.comp1[second * self.onecells.len() + first]
    }

    pub fn vcomp(&self, second: usize, first: usize) -> Option<usize> {
        self.vcomp[second * self.twocells.len() + first]
    }

    pub fn hcomp(&self, second: usize, first: usize) -> Option<usize> {
        self.hcomp[second * self.twocells.len() + first]
    }

    /// Source 0-cell of the 1-cells bounding a 2-cell.
    pub fn cell_source0(&self, phi: usize) -> usize {
        self.onecells[self.twocells[phi].source].source
    }

    pub fn cell_target0(&self, phi: usize) -> usize {
        self.onecells[self.twocells[phi].source].target
    }

    pub fn v_composable(&self, second: usize, first: usize) -> bool {
        self.twocells[first].target == self.twocells[second].source
    }

    pub fn h_composable(&self, second: usize, first: usize) -> bool {
        self.cell_target0(first) == self.cell_source0(second)
    }

    pub fn zerocell_index(&self, name: &str) -> Option<usize> {
        self.zerocells.iter().position(|z| z == name)
    }

    pub fn zerocell(&self, name: &str) -> Result<usize> {
        self.zerocell_index(name)
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn onecell(&self, name: &str) -> Result<usize> {
        self.onecells
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| Error::UnknownMorphism(name.to_string()))
    }

    pub fn twocell(&self, name: &str) -> Result<usize> {
        self.twocells
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| Error::UnknownCell(name.to_string()))
    }

    pub fn is_identity_cell(&self, phi: usize) -> bool {
        self.id2[self.twocells[phi].source] == phi
    }

    /// 2-cells `α ⇒ β`, in index order.
    pub fn cells_between(&self, alpha: usize, beta: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.twocells.len())
            .filter(move |&c| self.twocells[c].source == alpha && self.twocells[c].target == beta)
    }

    /// Endo-1-cells of a 0-cell, in index order.
    pub fn endo_onecells(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.onecells.len())
            .filter(move |&c| self.onecells[c].source == a && self.onecells[c].target == a)
    }

    /// The underlying 1-category of 0-cells and 1-cells.
    pub fn underlying_category(&self) -> FinCategory {
        FinCategory {
            name: format!("{}_1", self.name),
            objects: self.zerocells.clone(),
            morphisms: self
                .onecells
                .iter()
                .map(|c| Morphism {
                    name: c.name.clone(),
                    source: c.source,
                    target: c.target,
                })
                .collect(),
            identities: self.id1.clone(),
            comp: self.comp1.clone(),
        }
    }

    /// The 2-category `2ΩA`: one 0-cell, one 1-cell, and the elements of `m`
    /// as 2-cells, composed by the monoid operation both ways.
    pub fn double_delooping(m: &FinCommMonoid, zerocell: &str, onecell: &str) -> Self {
        let n = m.len();
        let table: Vec<Option<usize>> = (0..n * n).map(|i| Some(m.mul(i / n, i % n))).collect();
        Fin2Category {
            name: format!("2Omega({})", m.name),
            zerocells: vec![zerocell.to_string()],
            onecells: vec![OneCell {
                name: onecell.to_string(),
                source: 0,
                target: 0,
            }],
            id1: vec![0],
            comp1: vec![Some(0)],
            twocells: m
                .elements
                .iter()
                .map(|e| TwoCell {
                    name: e.clone(),
                    source: 0,
                    target: 0,
                })
                .collect(),
            id2: vec![m.unit],
            vcomp: table.clone(),
            hcomp: table,
        }
    }

    /// A category viewed as a 2-category with identity 2-cells only; the
    /// identity 2-cell of a 1-cell `f` is named `1_f`.
    pub fn locally_discrete(c: &FinCategory) -> Self {
        let n = c.morphisms.len();
        let hcomp = (0..n * n).map(|i| c.comp[i]).collect();
        let vcomp = (0..n * n)
            .map(|i| if i / n == i % n { Some(i % n) } else { None })
            .collect();
        Fin2Category {
            name: format!("{}_2", c.name),
            zerocells: c.objects.clone(),
            onecells: c
                .morphisms
                .iter()
                .map(|m| OneCell {
                    name: m.name.clone(),
                    source: m.source,
                    target: m.target,
                })
                .collect(),
            id1: c.identities.clone(),
            comp1: c.comp.clone(),
            twocells: c
                .morphisms
                .iter()
                .enumerate()
                .map(|(i, m)| TwoCell {
                    name: format!("1_{}", m.name),
                    source: i,
                    target: i,
                })
                .collect(),
            id2: (0..n).collect(),
            vcomp,
            hcomp,
        }
    }
}

fn check_structure(b: &Fin2Category) -> Result<()> {
    check_category_structure(&b.underlying_category())?;
    let (n1, n2) = (b.onecells.len(), b.twocells.len());
    for c in &b.twocells {
        if c.source >= n1 || c.target >= n1 {
            return Err(Error::UnknownMorphism(format!("boundary of 2-cell {}", c.name)));
        }
    }
    if b.id2.len() != n1 {
        return Err(Error::MissingEntry(format!("{}: identity 2-cells for {} 1-cells", b.id2.len(), n1)));
    }
    if let Some(&bad) = b.id2.iter().find(|&&c| c >= n2) {
        return Err(Error::UnknownCell(format!("identity 2-cell index {bad}")));
    }
    for (label, table) in [("vcomp", &b.vcomp), ("hcomp", &b.hcomp)] {
        if table.len() != n2 * n2 {
            return Err(Error::MissingEntry(format!("{label} table has wrong size")));
        }
        if let Some(bad) = table.iter().flatten().find(|&&c| c >= n2) {
            return Err(Error::UnknownCell(format!("{label} entry index {bad}")));
        }
    }
    for second in 0..n2 {
        for first in 0..n2 {
            let missing = |table: &'static str| Error::MissingComposite {
                table,
                second: b.twocells[second].name.clone(),
                first: b.twocells[first].name.clone(),
            };
            if b.v_composable(second, first) && b.vcomp(second, first).is_none() {
                return Err(missing("vcomp"));
            }
            if b.h_composable(second, first) && b.hcomp(second, first).is_none() {
                return Err(missing("hcomp"));
            }
        }
    }
    Ok(())
}

/// Exhaustive check of the strict 2-category laws.
pub fn validate_two_category(b: &Fin2Category) -> Result<ValidationReport> {
    check_structure(b)?;
    let mut report = validate_category(&b.underlying_category())?.with_context("1-cells");
    let n2 = b.twocells.len();
    let name = |c: usize| b.twocells[c].name.clone();
    let one = |c: usize| &b.onecells[c];
    let mut rec = Recorder::new(&mut report);

    for (c, cell) in b.twocells.iter().enumerate() {
        let (s, t) = (one(cell.source), one(cell.target));
        if s.source != t.source || s.target != t.target {
            rec.record(Law::Boundary, vec![name(c)], "source and target 1-cells are not parallel");
        }
    }
    for (alpha, &i) in b.id2.iter().enumerate() {
        if b.twocells[i].source != alpha || b.twocells[i].target != alpha {
            rec.record(Law::IdentityCells, vec![name(i)], format!("not an endo-2-cell of {}", one(alpha).name));
        }
    }

    // hom-categories under vertical composition
    for second in 0..n2 {
        for first in 0..n2 {
            let Some(r) = b.vcomp(second, first) else { continue };
            if !b.v_composable(second, first) {
                rec.record(Law::UndefinedComposite, vec![name(second), name(first)], "vcomp");
            } else if b.twocells[r].source != b.twocells[first].source
                || b.twocells[r].target != b.twocells[second].target
            {
                rec.record(Law::Boundary, vec![name(second), name(first), name(r)], "vcomp");
            }
        }
    }
    for c in 0..n2 {
        let (s, t) = (b.twocells[c].source, b.twocells[c].target);
        if b.vcomp(c, b.id2[s]) != Some(c) || b.vcomp(b.id2[t], c) != Some(c) {
            rec.record(Law::UnitLaw, vec![name(c)], "vcomp with identity 2-cell");
        }
    }
    for z in 0..n2 {
        for y in 0..n2 {
            let Some(zy) = b.vcomp(z, y).filter(|_| b.v_composable(z, y)) else { continue };
            for x in 0..n2 {
                if !b.v_composable(y, x) {
                    continue;
                }
                let l = b.vcomp(zy, x);
                let r = b.vcomp(y, x).and_then(|yx| b.vcomp(z, yx));
                if l != r {
                    rec.record(Law::Associativity, vec![name(z), name(y), name(x)], "vcomp");
                }
            }
        }
    }

    // horizontal composition
    for second in 0..n2 {
        for first in 0..n2 {
            let Some(r) = b.hcomp(second, first) else { continue };
            if !b.h_composable(second, first) {
                rec.record(Law::UndefinedComposite, vec![name(second), name(first)], "hcomp");
                continue;
            }
            let (ps, pf) = (&b.twocells[second], &b.twocells[first]);
            let src = b.comp1(ps.source, pf.source);
            let tgt = b.comp1(ps.target, pf.target);
            if src != Some(b.twocells[r].source) || tgt != Some(b.twocells[r].target) {
                rec.record(Law::Boundary, vec![name(second), name(first), name(r)], "hcomp");
            }
        }
    }
    for c in 0..n2 {
        let (a, bb) = (b.cell_source0(c), b.cell_target0(c));
        let (ua, ub) = (b.id2[b.id1[a]], b.id2[b.id1[bb]]);
        if b.hcomp(c, ua) != Some(c) || b.hcomp(ub, c) != Some(c) {
            rec.record(Law::UnitLaw, vec![name(c)], "hcomp with identity 2-cell of an identity 1-cell");
        }
    }
    for beta in 0..b.onecells.len() {
        for alpha in 0..b.onecells.len() {
            let Some(ba) = b.comp1(beta, alpha).filter(|_| one(alpha).target == one(beta).source) else {
                continue;
            };
            if b.hcomp(b.id2[beta], b.id2[alpha]) != Some(b.id2[ba]) {
                rec.record(
                    Law::IdentityCells,
                    vec![name(b.id2[beta]), name(b.id2[alpha])],
                    "hcomp of identity 2-cells is not an identity 2-cell",
                );
            }
        }
    }
    for z in 0..n2 {
        for y in 0..n2 {
            if !b.h_composable(z, y) {
                continue;
            }
            let zy = b.hcomp(z, y).unwrap();
            for x in 0..n2 {
                if !b.h_composable(y, x) {
                    continue;
                }
                let l = b.hcomp(zy, x);
                let r = b.hcomp(y, x).and_then(|yx| b.hcomp(z, yx));
                if l != r {
                    rec.record(Law::Associativity, vec![name(z), name(y), name(x)], "hcomp");
                }
            }
        }
    }

    // interchange: (ψ' ⊟ ψ) ⊡ (φ' ⊟ φ) = (ψ' ⊡ φ') ⊟ (ψ ⊡ φ)
    for psi in 0..n2 {
        for phi in 0..n2 {
            if !b.h_composable(psi, phi) {
                continue;
            }
            let bottom = b.hcomp(psi, phi).unwrap();
            for psi2 in (0..n2).filter(|&p| b.v_composable(p, psi)) {
                for phi2 in (0..n2).filter(|&p| b.v_composable(p, phi)) {
                    let l = b.hcomp(b.vcomp(psi2, psi).unwrap(), b.vcomp(phi2, phi).unwrap());
                    let r = b.hcomp(psi2, phi2).and_then(|top| b.vcomp(top, bottom));
                    if l != r {
                        rec.record(Law::Interchange, vec![name(psi2), name(psi), name(phi2), name(phi)], "");
                    }
                }
            }
        }
    }
    Ok(report)
}

/// The monoid `π₂(B, a)` of 2-cells `id_a ⇒ id_a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pi2Fiber {
    pub object: String,
    pub monoid: Arc<FinCommMonoid>,
    /// `embedding[x]` is the 2-cell of `B` for monoid element `x`.
    pub embedding: Vec<usize>,
}

impl Pi2Fiber {
    pub fn element_of_cell(&self, cell: usize) -> Option<usize> {
        self.embedding.iter().position(|&c| c == cell)
    }
}

/// Computes `π₂(B, a)` and checks that horizontal and vertical composition
/// agree on it and that it is commutative.
pub fn pi2(b: &Fin2Category, a: usize) -> Result<Pi2Fiber> {
    let ida = *b.id1.get(a).ok_or_else(|| Error::UnknownObject(format!("0-cell index {a}")))?;
    let cells: Vec<usize> = b.cells_between(ida, ida).collect();
    let index: HashMap<usize, usize> = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let object = b.zerocells[a].clone();
    let violation = |x: usize, y: usize, detail: String| Error::EckmannHiltonViolation {
        object: object.clone(),
        x: b.twocells[x].name.clone(),
        y: b.twocells[y].name.clone(),
        detail,
    };
    let n = cells.len();
    let mut op = Vec::with_capacity(n * n);
    for &x in &cells {
        for &y in &cells {
            let v = b.vcomp(x, y).ok_or_else(|| Error::MissingComposite {
                table: "vcomp",
                second: b.twocells[x].name.clone(),
                first: b.twocells[y].name.clone(),
            })?;
            let h = b.hcomp(x, y);
            if h != Some(v) {
                return Err(violation(x, y, "horizontal and vertical composites differ".into()));
            }
            if b.vcomp(y, x) != Some(v) {
                return Err(violation(x, y, "not commutative".into()));
            }
            let &vi = index
                .get(&v)
                .ok_or_else(|| violation(x, y, "composite leaves the fiber".into()))?;
            op.push(vi);
        }
    }
    let unit = *index
        .get(&b.id2[ida])
        .ok_or_else(|| Error::Invalid(format!("identity 2-cell of {} has the wrong boundary", b.onecells[ida].name)))?;
    let monoid = FinCommMonoid {
        name: format!("pi2({})", object),
        elements: cells.iter().map(|&c| b.twocells[c].name.clone()).collect(),
        unit,
        op,
    };
    Ok(Pi2Fiber {
        object,
        monoid: Arc::new(monoid),
        embedding: cells,
    })
}

/// A finite category `B*` and a finite 2-category `B` on the same objects.
/// Objects are matched with 0-cells by name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoratedTwoCat {
    pub name: String,
    pub vertical: FinCategory,
    pub horizontal: Fin2Category,
}

impl DecoratedTwoCat {
    /// The 0-cell of `B` sharing the name of object `a` of `B*`.
    pub fn zerocell_of(&self, a: usize) -> usize {
        self.horizontal
            .zerocell_index(&self.vertical.objects[a])
            .expect("decoration validated")
    }

    /// The decoration `(B*^op, B)`.
    pub fn opposite(&self) -> Self {
        let name = match self.name.strip_suffix("^op") {
            Some(base) => base.to_string(),
            None => format!("{}^op", self.name),
        };
        DecoratedTwoCat {
            name,
            vertical: opposite_category(&self.vertical),
            horizontal: self.horizontal.clone(),
        }
    }

    /// `π₂(B, a)` for every object `a` of `B*`, in object order.
    pub fn fibers(&self) -> Result<Vec<Pi2Fiber>> {
        (0..self.vertical.objects.len())
            .map(|a| pi2(&self.horizontal, self.zerocell_of(a)))
            .collect()
    }
}

/// Checks that the object sets of `B*` and `B` coincide.
pub fn validate_decoration(d: &DecoratedTwoCat) -> Result<ValidationReport> {
    let v: BTreeSet<&String> = d.vertical.objects.iter().collect();
    let h: BTreeSet<&String> = d.horizontal.zerocells.iter().collect();
    if v != h {
        return Err(Error::ObjectMismatch {
            only_vertical: v.difference(&h).map(|s| s.to_string()).collect(),
            only_horizontal: h.difference(&v).map(|s| s.to_string()).collect(),
        });
    }
    Ok(ValidationReport::new())
}

/// Validates both components and the shared object set.
pub fn validate_decorated(d: &DecoratedTwoCat) -> Result<ValidationReport> {
    let mut report = validate_category(&d.vertical)?.with_context(&d.vertical.name);
    report.extend(validate_two_category(&d.horizontal)?.with_context(&d.horizontal.name));
    report.extend(validate_decoration(d)?);
    Ok(report)
}

/// Name-level construction of finite 2-categories. Identity 1-cells and
/// identity 2-cells are inserted first and the composites they determine are
/// filled in wherever no explicit entry was given. Whiskerings by
/// non-identity 1-cells must be given explicitly.
#[derive(Debug, Clone)]
pub struct TwoCategoryBuilder {
    name: String,
    zerocells: Vec<String>,
    id1_names: HashMap<String, String>,
    onecells: Vec<(String, String, String)>,
    comp1: Vec<(String, String, String)>,
    id2_names: HashMap<String, String>,
    twocells: Vec<(String, String, String)>,
    vcomp: Vec<(String, String, String)>,
    hcomp: Vec<(String, String, String)>,
}

impl TwoCategoryBuilder {
    pub fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            zerocells: Vec::new(),
            id1_names: HashMap::new(),
            onecells: Vec::new(),
            comp1: Vec::new(),
            id2_names: HashMap::new(),
            twocells: Vec::new(),
            vcomp: Vec::new(),
            hcomp: Vec::new(),
        }
    }

    pub fn zerocell(&mut self, name: &str) -> &mut Self {
        self.zerocells.push(name.to_string());
        self
    }

    pub fn zerocells(&mut self, names: &[&str]) -> &mut Self {
        for n in names {
            self.zerocell(n);
        }
        self
    }

    pub fn id1_name(&mut self, zerocell: &str, name: &str) -> &mut Self {
        self.id1_names.insert(zerocell.to_string(), name.to_string());
        self
    }

    pub fn onecell(&mut self, name: &str, source: &str, target: &str) -> &mut Self {
        self.onecells
            .push((name.to_string(), source.to_string(), target.to_string()));
        self
    }

    pub fn comp1(&mut self, second: &str, first: &str, result: &str) -> &mut Self {
        self.comp1
            .push((second.to_string(), first.to_string(), result.to_string()));
        self
    }

    pub fn id2_name(&mut self, onecell: &str, name: &str) -> &mut Self {
        self.id2_names.insert(onecell.to_string(), name.to_string());
        self
    }

    pub fn twocell(&mut self, name: &str, source: &str, target: &str) -> &mut Self {
        self.twocells
            .push((name.to_string(), source.to_string(), target.to_string()));
        self
    }

    pub fn vcomp(&mut self, second: &str, first: &str, result: &str) -> &mut Self {
        self.vcomp
            .push((second.to_string(), first.to_string(), result.to_string()));
        self
    }

    pub fn hcomp(&mut self, second: &str, first: &str, result: &str) -> &mut Self {
        self.hcomp
            .push((second.to_string(), first.to_string(), result.to_string()));
        self
    }

    pub fn build(&self) -> Result<Fin2Category> {
        let mut zindex = HashMap::new();
        for (i, z) in self.zerocells.iter().enumerate() {
            if zindex.insert(z.as_str(), i).is_some() {
                return Err(Error::DuplicateName(z.clone()));
            }
        }
        for z in self.id1_names.keys() {
            if !zindex.contains_key(z.as_str()) {
                return Err(Error::UnknownObject(z.clone()));
            }
        }
        let zlook = |z: &String| {
            zindex
                .get(z.as_str())
                .copied()
                .ok_or_else(|| Error::UnknownObject(z.clone()))
        };
        let mut onecells: Vec<OneCell> = self
            .zerocells
            .iter()
            .enumerate()
            .map(|(i, z)| OneCell {
                name: self.id1_names.get(z).cloned().unwrap_or_else(|| format!("id_{z}")),
                source: i,
                target: i,
            })
            .collect();
        let id1: Vec<usize> = (0..self.zerocells.len()).collect();
        for (name, s, t) in &self.onecells {
            onecells.push(OneCell {
                name: name.clone(),
                source: zlook(s)?,
                target: zlook(t)?,
            });
        }
        let oindex = unique_index(onecells.iter().map(|c| &c.name))?;
        for o in self.id2_names.keys() {
            if !oindex.contains_key(o) {
                return Err(Error::UnknownMorphism(o.clone()));
            }
        }
        let olook = |o: &String| {
            oindex
                .get(o)
                .copied()
                .ok_or_else(|| Error::UnknownMorphism(o.clone()))
        };
        let n1 = onecells.len();
        let mut comp1 = vec![None; n1 * n1];
        for (g, f, h) in &self.comp1 {
            set_once(&mut comp1[olook(g)? * n1 + olook(f)?], olook(h)?, "comp1", g, f)?;
        }
        for (f, c) in onecells.iter().enumerate() {
            comp1[f * n1 + id1[c.source]].get_or_insert(f);
            comp1[id1[c.target] * n1 + f].get_or_insert(f);
        }

        let mut twocells: Vec<TwoCell> = onecells
            .iter()
            .enumerate()
            .map(|(i, c)| TwoCell {
                name: self.id2_names.get(&c.name).cloned().unwrap_or_else(|| format!("1_{}", c.name)),
                source: i,
                target: i,
            })
            .collect();
        let id2: Vec<usize> = (0..n1).collect();
        for (name, s, t) in &self.twocells {
            twocells.push(TwoCell {
                name: name.clone(),
                source: olook(s)?,
                target: olook(t)?,
            });
        }
        let cindex = unique_index(twocells.iter().map(|c| &c.name))?;
        let clook = |c: &String| {
            cindex
                .get(c)
                .copied()
                .ok_or_else(|| Error::UnknownCell(c.clone()))
        };
        let n2 = twocells.len();
        let mut vcomp = vec![None; n2 * n2];
        for (g, f, h) in &self.vcomp {
            set_once(&mut vcomp[clook(g)? * n2 + clook(f)?], clook(h)?, "vcomp", g, f)?;
        }
        let mut hcomp = vec![None; n2 * n2];
        for (g, f, h) in &self.hcomp {
            set_once(&mut hcomp[clook(g)? * n2 + clook(f)?], clook(h)?, "hcomp", g, f)?;
        }
        for (c, cell) in twocells.iter().enumerate() {
            vcomp[c * n2 + id2[cell.source]].get_or_insert(c);
            vcomp[id2[cell.target] * n2 + c].get_or_insert(c);
            let (a, b) = (onecells[cell.source].source, onecells[cell.source].target);
            hcomp[c * n2 + id2[id1[a]]].get_or_insert(c);
            hcomp[id2[id1[b]] * n2 + c].get_or_insert(c);
        }
        for beta in 0..n1 {
            for alpha in 0..n1 {
                if onecells[alpha].target != onecells[beta].source {
                    continue;
                }
                if let Some(ba) = comp1[beta * n1 + alpha] {
                    hcomp[id2[beta] * n2 + id2[alpha]].get_or_insert(id2[ba]);
                }
            }
        }
        Ok(Fin2Category {
            name: self.name.clone(),
            zerocells: self.zerocells.clone(),
            onecells,
            id1,
            comp1,
            twocells,
            id2,
            vcomp,
            hcomp,
        })
    }
}

fn unique_index<'a>(names: impl Iterator<Item = &'a String>) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::new();
    for (i, n) in names.enumerate() {
        if index.insert(n.clone(), i).is_some() {
            return Err(Error::DuplicateName(n.clone()));
        }
    }
    Ok(index)
}

fn set_once(slot: &mut Option<usize>, value: usize, table: &str, g: &str, f: &str) -> Result<()> {
    if slot.replace(value).is_some() {
        return Err(Error::DuplicateName(format!("{table}({g}, {f})")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::category::CategoryBuilder;
    use crate::finite::monoid::validate_monoid;

    fn two_omega_z3() -> Fin2Category {
        Fin2Category::double_delooping(&FinCommMonoid::cyclic("Z3", 3), "pt", "id_pt")
    }

    #[test]
    fn double_delooping_is_valid() {
        let b = two_omega_z3();
        assert!(validate_two_category(&b).unwrap().is_empty());
    }

    #[test]
    fn broken_hcomp_entry_breaks_interchange() {
        let mut b = two_omega_z3();
        b.hcomp[3 + 1] = Some(1);
        let r = validate_two_category(&b).unwrap();
        assert!(r.has(Law::Interchange), "{r}");
        let v = r.iter().find(|v| v.law == Law::Interchange).unwrap();
        assert_eq!(v.witnesses.len(), 4);
    }

    #[test]
    fn identity_only_two_category_is_valid() {
        let c = CategoryBuilder::new("C")
            .objects(&["x", "y"])
            .morphism("f", "x", "y")
            .build()
            .unwrap();
        let b = Fin2Category::locally_discrete(&c);
        assert!(validate_two_category(&b).unwrap().is_empty());
        let fib = pi2(&b, 0).unwrap();
        assert_eq!(fib.monoid.len(), 1);
    }

    #[test]
    fn pi2_of_double_delooping_is_the_monoid() {
        let b = two_omega_z3();
        let fib = pi2(&b, 0).unwrap();
        assert_eq!(*fib.monoid, FinCommMonoid { name: "pi2(pt)".into(), ..FinCommMonoid::cyclic("Z3", 3) });
        assert!(validate_monoid(&fib.monoid).unwrap().is_empty());
    }

    #[test]
    fn pi2_rejects_disagreeing_compositions() {
        let mut b = two_omega_z3();
        b.hcomp[3 + 1] = Some(0);
        assert!(matches!(pi2(&b, 0), Err(Error::EckmannHiltonViolation { .. })));
    }

    #[test]
    fn builder_fills_units_and_whiskers_by_identities() {
        let b = TwoCategoryBuilder::new("B")
            .zerocells(&["x", "y"])
            .onecell("a", "x", "y")
            .twocell("t", "a", "a")
            .vcomp("t", "t", "1_a")
            .build()
            .unwrap();
        assert!(validate_two_category(&b).unwrap().is_empty());
        let t = b.twocell("t").unwrap();
        let idx = b.twocell("1_id_x").unwrap();
        assert_eq!(b.hcomp(t, idx), Some(t));
    }

    #[test]
    fn decoration_object_sets_must_match() {
        let v = CategoryBuilder::new("V").objects(&["pt", "extra"]).build().unwrap();
        let d = DecoratedTwoCat {
            name: "D".into(),
            vertical: v,
            horizontal: two_omega_z3(),
        };
        let err = validate_decoration(&d).unwrap_err();
        assert_eq!(
            err,
            Error::ObjectMismatch {
                only_vertical: vec!["extra".into()],
                only_horizontal: vec![]
            }
        );
    }
}
