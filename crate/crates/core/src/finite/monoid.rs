//! Finite commutative monoids given by dense operation tables, and the
//! homomorphisms between them.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{Law, Recorder, ValidationReport};
use crate::search::SearchBudget;

/// A finite commutative monoid. Elements are referred to by index; `op` is
/// row-major, so `op[x * n + y]` is the product `x·y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinCommMonoid {
    pub name: String,
    pub elements: Vec<String>,
    pub unit: usize,
    pub op: Vec<usize>,
}

impl FinCommMonoid {
    /// Builds a monoid from named table entries. Every pair must appear.
    pub fn from_entries<'a, I>(name: &str, elements: &[&str], unit: &str, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str, &'a str)>,
    {
        let elements: Vec<String> = elements.iter().map(|s| s.to_string()).collect();
        let index: HashMap<&str, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.as_str(), i))
            .collect();
        if index.len() != elements.len() {
            return Err(Error::DuplicateName(format!("element of monoid {name}")));
        }
        let look = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| Error::UnknownElement(s.to_string()))
        };
        let n = elements.len();
        let unit = look(unit)?;
        let mut op = vec![None; n * n];
        for (x, y, z) in entries {
            op[look(x)? * n + look(y)?] = Some(look(z)?);
        }
        let op = op
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    Error::MissingEntry(format!(
                        "{name}: op({}, {})",
                        elements[i / n],
                        elements[i % n]
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            name: name.to_string(),
            elements,
            unit,
            op,
        })
    }

    /// Builds a monoid from an index-level product function.
    pub fn from_fn(name: &str, elements: Vec<String>, unit: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        let n = elements.len();
        let op = (0..n * n).map(|i| f(i / n, i % n)).collect();
        Self {
            name: name.to_string(),
            elements,
            unit,
            op,
        }
    }

    /// The cyclic group Z/n with elements named `"0"`..`"n-1"`.
    pub fn cyclic(name: &str, n: usize) -> Self {
        let elements = (0..n).map(|i| i.to_string()).collect();
        Self::from_fn(name, elements, 0, |x, y| (x + y) % n)
    }

    pub fn trivial(name: &str, element: &str) -> Self {
        Self::from_fn(name, vec![element.to_string()], 0, |_, _| 0)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.op[x * self.len() + y]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == name)
    }

    pub fn element(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    /// The inverse of `x`, if it has one.
    pub fn inverse(&self, x: usize) -> Option<usize> {
        (0..self.len()).find(|&y| self.mul(x, y) == self.unit && self.mul(y, x) == self.unit)
    }

    pub fn is_group(&self) -> bool {
        (0..self.len()).all(|x| self.inverse(x).is_some())
    }
}

/// Exhaustively checks the commutative monoid laws.
pub fn validate_monoid(m: &FinCommMonoid) -> Result<ValidationReport> {
    let n = m.len();
    if m.op.len() != n * n {
        return Err(Error::MissingEntry(format!(
            "{}: table has {} entries, expected {}",
            m.name,
            m.op.len(),
            n * n
        )));
    }
    if m.unit >= n {
        return Err(Error::UnknownElement(format!("unit index {}", m.unit)));
    }
    if let Some(bad) = m.op.iter().find(|&&z| z >= n) {
        return Err(Error::UnknownElement(format!("table entry index {bad}")));
    }
    let name = |i: usize| m.elements[i].clone();
    let mut report = ValidationReport::new();
    let mut rec = Recorder::new(&mut report);
    for x in 0..n {
        if m.mul(x, m.unit) != x || m.mul(m.unit, x) != x {
            rec.record(Law::UnitLaw, vec![name(x)], "unit does not act trivially");
        }
    }
    for x in 0..n {
        for y in 0..n {
            if x < y && m.mul(x, y) != m.mul(y, x) {
                rec.record(
                    Law::Commutativity,
                    vec![name(x), name(y)],
                    format!("{} != {}", name(m.mul(x, y)), name(m.mul(y, x))),
                );
            }
            for z in 0..n {
                let l = m.mul(m.mul(x, y), z);
                let r = m.mul(x, m.mul(y, z));
                if l != r {
                    rec.record(
                        Law::Associativity,
                        vec![name(x), name(y), name(z)],
                        format!("{} != {}", name(l), name(r)),
                    );
                }
            }
        }
    }
    Ok(report)
}

/// A map of underlying sets between two finite commutative monoids.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonoidHom {
    pub source: Arc<FinCommMonoid>,
    pub target: Arc<FinCommMonoid>,
    pub map: Vec<usize>,
}

impl MonoidHom {
    pub fn identity(m: &Arc<FinCommMonoid>) -> Self {
        Self {
            source: m.clone(),
            target: m.clone(),
            map: (0..m.len()).collect(),
        }
    }

    /// The hom sending everything to the unit of `target`.
    pub fn constant_unit(source: &Arc<FinCommMonoid>, target: &Arc<FinCommMonoid>) -> Self {
        Self {
            source: source.clone(),
            target: target.clone(),
            map: vec![target.unit; source.len()],
        }
    }

    /// Builds a map from `(source element, target element)` name pairs. Every
    /// source element must be mapped exactly once.
    pub fn from_pairs<'a, I>(source: &Arc<FinCommMonoid>, target: &Arc<FinCommMonoid>, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut map = vec![None; source.len()];
        for (x, y) in pairs {
            let xi = source.element(x)?;
            let yi = target.element(y)?;
            if map[xi].replace(yi).is_some() {
                return Err(Error::DuplicateName(format!("{x} mapped twice")));
            }
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::MissingEntry(format!("image of {}", source.elements[i]))))
            .collect::<Result<_>>()?;
        Ok(Self {
            source: source.clone(),
            target: target.clone(),
            map,
        })
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.map.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.source.len() == self.target.len()
            && self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    /// Exhaustive check of unit and product preservation.
    pub fn check(&self) -> ValidationReport {
        let (s, t) = (&*self.source, &*self.target);
        let mut report = ValidationReport::new();
        if self.map.len() != s.len() || self.map.iter().any(|&y| y >= t.len()) {
            report.push(Law::Closure, vec![s.name.clone(), t.name.clone()], "map is not total or leaves the target");
            return report;
        }
        let mut rec = Recorder::new(&mut report);
        if self.apply(s.unit) != t.unit {
            rec.record(
                Law::HomUnit,
                vec![s.elements[s.unit].clone()],
                format!("unit maps to {}", t.elements[self.apply(s.unit)]),
            );
        }
        for x in 0..s.len() {
            for y in 0..s.len() {
                let l = self.apply(s.mul(x, y));
                let r = t.mul(self.apply(x), self.apply(y));
                if l != r {
                    rec.record(
                        Law::HomMultiplicative,
                        vec![s.elements[x].clone(), s.elements[y].clone()],
                        format!("{} != {}", t.elements[l], t.elements[r]),
                    );
                }
            }
        }
        report
    }

    /// `x ↦ y` pairs in source order, by element name.
    pub fn pairs(&self) -> Vec<(String, String)> {
        self.map
            .iter()
            .enumerate()
            .map(|(x, &y)| (self.source.elements[x].clone(), self.target.elements[y].clone()))
            .collect()
    }
}

/// The pointwise composite `g ∘ f`.
pub fn compose_homs(g: &MonoidHom, f: &MonoidHom) -> Result<MonoidHom> {
    if f.target != g.source {
        return Err(Error::Mismatch(format!(
            "cannot compose: target {} of first hom differs from source {} of second",
            f.target.name, g.source.name
        )));
    }
    Ok(MonoidHom {
        source: f.source.clone(),
        target: g.target.clone(),
        map: f.map.iter().map(|&x| g.apply(x)).collect(),
    })
}

/// Every monoid homomorphism `source → target`, in lexicographic order of
/// the image vector. Each complete candidate map charges `budget` once.
pub fn homomorphisms(
    source: &Arc<FinCommMonoid>,
    target: &Arc<FinCommMonoid>,
    budget: &mut SearchBudget,
) -> Result<Vec<MonoidHom>> {
    let n = source.len();
    let mut out = Vec::new();
    let mut map: Vec<Option<usize>> = vec![None; n];
    map[source.unit] = Some(target.unit);

    fn consistent(s: &FinCommMonoid, t: &FinCommMonoid, map: &[Option<usize>], x: usize) -> bool {
        let fx = map[x].unwrap();
        for y in 0..s.len() {
            let Some(fy) = map[y] else { continue };
            for (a, b, fa, fb) in [(x, y, fx, fy), (y, x, fy, fx)] {
                if let Some(fab) = map[s.mul(a, b)] {
                    if fab != t.mul(fa, fb) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn go(
        s: &Arc<FinCommMonoid>,
        t: &Arc<FinCommMonoid>,
        map: &mut Vec<Option<usize>>,
        next: usize,
        out: &mut Vec<MonoidHom>,
        budget: &mut SearchBudget,
    ) -> Result<()> {
        if next == s.len() {
            budget.charge()?;
            out.push(MonoidHom {
                source: s.clone(),
                target: t.clone(),
                map: map.iter().map(|v| v.unwrap()).collect(),
            });
            return Ok(());
        }
        if map[next].is_some() {
            return go(s, t, map, next + 1, out, budget);
        }
        for y in 0..t.len() {
            map[next] = Some(y);
            if consistent(s, t, map, next) {
                go(s, t, map, next + 1, out, budget)?;
            }
        }
        map[next] = None;
        Ok(())
    }

    if !consistent(source, target, &map, source.unit) {
        return Ok(out);
    }
    go(source, target, &mut map, 0, &mut out, budget)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> Arc<FinCommMonoid> {
        Arc::new(FinCommMonoid::cyclic(&format!("Z{n}"), n))
    }

    #[test]
    fn cyclic_group_is_valid() {
        assert!(validate_monoid(&z(3)).unwrap().is_empty());
    }

    #[test]
    fn one_element_monoid_is_valid() {
        assert!(validate_monoid(&FinCommMonoid::trivial("1", "e")).unwrap().is_empty());
    }

    #[test]
    fn non_commutative_pair_is_reported() {
        let mut m = (*z(3)).clone();
        // break op(1,2) only; op(2,1) stays 0
        m.op[3 + 2] = 1;
        let r = validate_monoid(&m).unwrap();
        assert!(r
            .iter()
            .any(|v| v.law == Law::Commutativity && v.witnesses == vec!["1".to_string(), "2".to_string()]));
    }

    #[test]
    fn dangling_entry_is_an_error() {
        let mut m = (*z(2)).clone();
        m.op[1] = 7;
        assert!(matches!(validate_monoid(&m), Err(Error::UnknownElement(_))));
        let err = FinCommMonoid::from_entries("M", &["a"], "a", [("a", "a", "b")]).unwrap_err();
        assert_eq!(err, Error::UnknownElement("b".into()));
    }

    #[test]
    fn inversion_squared_is_identity() {
        let m = z(3);
        let inv = MonoidHom::from_pairs(&m, &m, [("0", "0"), ("1", "2"), ("2", "1")]).unwrap();
        assert!(inv.check().is_empty());
        let sq = compose_homs(&inv, &inv).unwrap();
        assert!(sq.is_identity());
    }

    #[test]
    fn composition_with_identity_and_constant() {
        let m = z(3);
        let inv = MonoidHom::from_pairs(&m, &m, [("0", "0"), ("1", "2"), ("2", "1")]).unwrap();
        let id = MonoidHom::identity(&m);
        assert_eq!(compose_homs(&inv, &id).unwrap(), inv);
        let zero = MonoidHom::constant_unit(&m, &m);
        assert_eq!(compose_homs(&zero, &inv).unwrap(), zero);
    }

    #[test]
    fn compose_rejects_mismatched_fibers() {
        let (a, b) = (z(2), z(3));
        let f = MonoidHom::constant_unit(&a, &a);
        let g = MonoidHom::constant_unit(&b, &b);
        assert!(matches!(compose_homs(&g, &f), Err(Error::Mismatch(_))));
    }

    #[test]
    fn translation_is_not_a_hom() {
        let m = z(3);
        let shift = MonoidHom::from_pairs(&m, &m, [("0", "1"), ("1", "2"), ("2", "0")]).unwrap();
        let r = shift.check();
        assert!(r.has(Law::HomUnit));
        assert!(r.has(Law::HomMultiplicative));
    }

    #[test]
    fn hom_enumeration_counts() {
        let mut budget = SearchBudget::new(1_000_000);
        // End(Z/3) = {0, id, neg}
        assert_eq!(homomorphisms(&z(3), &z(3), &mut budget).unwrap().len(), 3);
        // Hom(Z/2, Z/3) is trivial, Hom(Z/6, Z/3) has 3 elements
        assert_eq!(homomorphisms(&z(2), &z(3), &mut budget).unwrap().len(), 1);
        assert_eq!(homomorphisms(&z(6), &z(3), &mut budget).unwrap().len(), 3);
    }

    #[test]
    fn hom_enumeration_respects_budget() {
        let mut budget = SearchBudget::new(2);
        let err = homomorphisms(&z(3), &z(3), &mut budget).unwrap_err();
        assert_eq!(err, Error::SearchBudgetExceeded { cap: 2 });
    }
}
