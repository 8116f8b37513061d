//! Finite categories with explicit, dense composition tables.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite::monoid::FinCommMonoid;
use crate::report::{Law, Recorder, ValidationReport};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Morphism {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A finite category. `comp[g * n + f]` holds `g ∘ f` (first `f`, then `g`)
/// where `n` is the number of morphisms; it is `None` off composable pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinCategory {
    pub name: String,
    pub objects: Vec<String>,
    pub morphisms: Vec<Morphism>,
    pub identities: Vec<usize>,
    pub comp: Vec<Option<usize>>,
}

impl FinCategory {
    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.comp[g * self.morphisms.len() + f]
    }

    pub fn composable(&self, g: usize, f: usize) -> bool {
        self.morphisms[f].target == self.morphisms[g].source
    }

    pub fn source(&self, f: usize) -> usize {
        self.morphisms[f].source
    }

    pub fn target(&self, f: usize) -> usize {
        self.morphisms[f].target
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.morphisms[f].source] == f
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn object(&self, name: &str) -> Result<usize> {
        self.object_index(name)
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn morphism_index(&self, name: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    pub fn morphism(&self, name: &str) -> Result<usize> {
        self.morphism_index(name)
            .ok_or_else(|| Error::UnknownMorphism(name.to_string()))
    }

    pub fn morphism_name(&self, f: usize) -> &str {
        &self.morphisms[f].name
    }

    /// Morphisms `a → b`, in index order.
    pub fn hom(&self, a: usize, b: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.morphisms.len())
            .filter(move |&f| self.morphisms[f].source == a && self.morphisms[f].target == b)
    }

    /// One-object category whose morphisms are the elements of `m`.
    pub fn delooping(m: &FinCommMonoid, object: &str) -> Self {
        let n = m.len();
        FinCategory {
            name: format!("Omega({})", m.name),
            objects: vec![object.to_string()],
            morphisms: m
                .elements
                .iter()
                .map(|e| Morphism {
                    name: e.clone(),
                    source: 0,
                    target: 0,
                })
                .collect(),
            identities: vec![m.unit],
            comp: (0..n * n).map(|i| Some(m.mul(i / n, i % n))).collect(),
        }
    }

    /// Equality of everything but the category's own name.
    pub fn same_tables(&self, other: &FinCategory) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.identities == other.identities
            && self.comp == other.comp
    }

    /// Composable pairs `(g, f)` in index order.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.morphisms.len();
        (0..n)
            .flat_map(move |g| (0..n).map(move |f| (g, f)))
            .filter(move |&(g, f)| self.composable(g, f))
    }
}

/// Checks that every reference resolves and every composable pair has a
/// composite. Shared by [`validate_category`] and the functor checker.
pub(crate) fn check_category_structure(c: &FinCategory) -> Result<()> {
    let (no, nm) = (c.objects.len(), c.morphisms.len());
    for m in &c.morphisms {
        if m.source >= no {
            return Err(Error::UnknownObject(format!("{}: source index {}", m.name, m.source)));
        }
        if m.target >= no {
            return Err(Error::UnknownObject(format!("{}: target index {}", m.name, m.target)));
        }
    }
    if c.identities.len() != no {
        return Err(Error::MissingEntry(format!(
            "{}: {} identities for {} objects",
            c.name,
            c.identities.len(),
            no
        )));
    }
    if let Some(&bad) = c.identities.iter().find(|&&i| i >= nm) {
        return Err(Error::UnknownMorphism(format!("identity index {bad}")));
    }
    if c.comp.len() != nm * nm {
        return Err(Error::MissingEntry(format!("{}: composition table has wrong size", c.name)));
    }
    if let Some(bad) = c.comp.iter().flatten().find(|&&h| h >= nm) {
        return Err(Error::UnknownMorphism(format!("composite index {bad}")));
    }
    for (g, f) in c.composable_pairs() {
        if c.compose(g, f).is_none() {
            return Err(Error::MissingComposite {
                table: "comp",
                second: c.morphisms[g].name.clone(),
                first: c.morphisms[f].name.clone(),
            });
        }
    }
    Ok(())
}

/// Exhaustive check of the category laws.
pub fn validate_category(c: &FinCategory) -> Result<ValidationReport> {
    check_category_structure(c)?;
    let n = c.morphisms.len();
    let name = |i: usize| c.morphisms[i].name.clone();
    let mut report = ValidationReport::new();
    let mut rec = Recorder::new(&mut report);

    for (o, &id) in c.identities.iter().enumerate() {
        if c.source(id) != o || c.target(id) != o {
            rec.record(Law::Boundary, vec![name(id)], format!("identity of {} is not an endomorphism of it", c.objects[o]));
        }
    }
    for g in 0..n {
        for f in 0..n {
            match c.compose(g, f) {
                Some(_) if !c.composable(g, f) => {
                    rec.record(Law::UndefinedComposite, vec![name(g), name(f)], "")
                }
                Some(h) if c.source(h) != c.source(f) || c.target(h) != c.target(g) => {
                    rec.record(Law::Boundary, vec![name(g), name(f), name(h)], "composite has wrong endpoints")
                }
                _ => {}
            }
        }
    }
    for f in 0..n {
        let (ida, idb) = (c.identities[c.source(f)], c.identities[c.target(f)]);
        if c.compose(f, ida) != Some(f) || c.compose(idb, f) != Some(f) {
            rec.record(Law::UnitLaw, vec![name(f)], "identity composite differs");
        }
    }
    for (g, f) in c.composable_pairs() {
        let gf = c.compose(g, f).unwrap();
        if c.target(gf) != c.target(g) {
            continue;
        }
        for h in c.hom_from(c.target(g)) {
            let l = c.compose(h, gf);
            let r = c.compose(h, g).and_then(|hg| c.compose(hg, f));
            if l != r {
                rec.record(Law::Associativity, vec![name(h), name(g), name(f)], "");
            }
        }
    }
    Ok(report)
}

impl FinCategory {
    fn hom_from(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.morphisms.len()).filter(move |&f| self.morphisms[f].source == a)
    }
}

/// Reverses every morphism; composition is transposed.
pub fn opposite_category(c: &FinCategory) -> FinCategory {
    let n = c.morphisms.len();
    let name = match c.name.strip_suffix("^op") {
        Some(base) => base.to_string(),
        None => format!("{}^op", c.name),
    };
    FinCategory {
        name,
        objects: c.objects.clone(),
        morphisms: c
            .morphisms
            .iter()
            .map(|m| Morphism {
                name: m.name.clone(),
                source: m.target,
                target: m.source,
            })
            .collect(),
        identities: c.identities.clone(),
        comp: (0..n * n).map(|i| c.comp[(i % n) * n + i / n]).collect(),
    }
}

/// Name-level construction of finite categories. Identity morphisms are
/// inserted first, one per object, named `id_<object>` unless renamed; every
/// composite with an identity is filled in unless given explicitly.
#[derive(Debug, Clone)]
pub struct CategoryBuilder {
    name: String,
    objects: Vec<String>,
    identity_names: HashMap<String, String>,
    morphisms: Vec<(String, String, String)>,
    entries: Vec<(String, String, String)>,
}

impl CategoryBuilder {
    pub fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            objects: Vec::new(),
            identity_names: HashMap::new(),
            morphisms: Vec::new(),
            entries: Vec::new(),
        }
    }

    pub fn object(&mut self, name: &str) -> &mut Self {
        self.objects.push(name.to_string());
        self
    }

    pub fn objects(&mut self, names: &[&str]) -> &mut Self {
        for n in names {
            self.object(n);
        }
        self
    }

    pub fn identity_name(&mut self, object: &str, name: &str) -> &mut Self {
        self.identity_names.insert(object.to_string(), name.to_string());
        self
    }

    pub fn morphism(&mut self, name: &str, source: &str, target: &str) -> &mut Self {
        self.morphisms
            .push((name.to_string(), source.to_string(), target.to_string()));
        self
    }

    /// Records `second ∘ first = result`.
    pub fn compose(&mut self, second: &str, first: &str, result: &str) -> &mut Self {
        self.entries
            .push((second.to_string(), first.to_string(), result.to_string()));
        self
    }

    /// Resolves names. Does not require the table to be complete; see
    /// [`validate_category`] for that.
    pub fn build(&self) -> Result<FinCategory> {
        let mut obj_index = HashMap::new();
        for (i, o) in self.objects.iter().enumerate() {
            if obj_index.insert(o.as_str(), i).is_some() {
                return Err(Error::DuplicateName(o.clone()));
            }
        }
        for o in self.identity_names.keys() {
            if !obj_index.contains_key(o.as_str()) {
                return Err(Error::UnknownObject(o.clone()));
            }
        }
        let mut morphisms = Vec::new();
        for (i, o) in self.objects.iter().enumerate() {
            let name = self
                .identity_names
                .get(o)
                .cloned()
                .unwrap_or_else(|| format!("id_{o}"));
            morphisms.push(Morphism {
                name,
                source: i,
                target: i,
            });
        }
        let identities: Vec<usize> = (0..self.objects.len()).collect();
        for (name, s, t) in &self.morphisms {
            let look = |o: &String| {
                obj_index
                    .get(o.as_str())
                    .copied()
                    .ok_or_else(|| Error::UnknownObject(o.clone()))
            };
            morphisms.push(Morphism {
                name: name.clone(),
                source: look(s)?,
                target: look(t)?,
            });
        }
        let mut mor_index = HashMap::new();
        for (i, m) in morphisms.iter().enumerate() {
            if mor_index.insert(m.name.clone(), i).is_some() {
                return Err(Error::DuplicateName(m.name.clone()));
            }
        }
        let n = morphisms.len();
        let mut comp = vec![None; n * n];
        let look = |m: &String| {
            mor_index
                .get(m)
                .copied()
                .ok_or_else(|| Error::UnknownMorphism(m.clone()))
        };
        for (g, f, h) in &self.entries {
            let slot = &mut comp[look(g)? * n + look(f)?];
            if slot.is_some() {
                return Err(Error::DuplicateName(format!("comp({g}, {f})")));
            }
            *slot = Some(look(h)?);
        }
        for (f, m) in morphisms.iter().enumerate() {
            let (ida, idb) = (identities[m.source], identities[m.target]);
            comp[f * n + ida].get_or_insert(f);
            comp[idb * n + f].get_or_insert(f);
        }
        Ok(FinCategory {
            name: self.name.clone(),
            objects: self.objects.clone(),
            morphisms,
            identities,
            comp,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free_arrow() -> FinCategory {
        CategoryBuilder::new("2")
            .objects(&["0", "1"])
            .morphism("a", "0", "1")
            .build()
            .unwrap()
    }

    fn omega_z2() -> FinCategory {
        CategoryBuilder::new("OmegaZ2")
            .object("pt")
            .identity_name("pt", "e")
            .morphism("g", "pt", "pt")
            .compose("g", "g", "e")
            .build()
            .unwrap()
    }

    #[test]
    fn free_arrow_is_valid() {
        let c = free_arrow();
        assert_eq!(c.morphism_count(), 3);
        assert!(validate_category(&c).unwrap().is_empty());
    }

    #[test]
    fn missing_composite_is_an_error() {
        let c = CategoryBuilder::new("Z2?")
            .object("pt")
            .morphism("g", "pt", "pt")
            .build()
            .unwrap();
        let err = validate_category(&c).unwrap_err();
        assert!(matches!(err, Error::MissingComposite { ref second, ref first, .. } if second == "g" && first == "g"));
    }

    #[test]
    fn delooping_of_z2_is_valid() {
        let c = omega_z2();
        assert_eq!(c.morphism_count(), 2);
        assert!(validate_category(&c).unwrap().is_empty());
        let d = FinCategory::delooping(&FinCommMonoid::cyclic("Z2", 2), "pt");
        assert!(validate_category(&d).unwrap().is_empty());
    }

    #[test]
    fn dangling_references_are_errors() {
        let mut c = free_arrow();
        c.morphisms[2].target = 9;
        assert!(matches!(validate_category(&c), Err(Error::UnknownObject(_))));
        let mut c = free_arrow();
        c.comp[0] = Some(42);
        assert!(matches!(validate_category(&c), Err(Error::UnknownMorphism(_))));
        let err = CategoryBuilder::new("x").object("a").morphism("f", "a", "b").build().unwrap_err();
        assert_eq!(err, Error::UnknownObject("b".into()));
    }

    #[test]
    fn corrupted_associativity_is_named() {
        // Z/3 delooping with one product changed
        let mut c = FinCategory::delooping(&FinCommMonoid::cyclic("Z3", 3), "pt");
        c.comp[3 + 1] = Some(0);
        let r = validate_category(&c).unwrap();
        assert!(r.has(Law::Associativity));
    }

    #[test]
    fn opposite_of_free_arrow_reverses_it() {
        let c = free_arrow();
        let op = opposite_category(&c);
        let a = op.morphism("a").unwrap();
        assert_eq!((op.source(a), op.target(a)), (1, 0));
        assert!(validate_category(&op).unwrap().is_empty());
        assert_eq!(opposite_category(&op), c);
    }

    #[test]
    fn opposite_of_abelian_delooping_has_same_tables() {
        let c = omega_z2();
        assert!(opposite_category(&c).same_tables(&c));
    }
}
