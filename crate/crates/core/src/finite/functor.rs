use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finite::category::{check_category_structure, FinCategory};
use crate::report::{Law, Recorder, ValidationReport};

/// A functor between finite categories, given by its object and morphism
/// maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatFunctor {
    pub source: Arc<FinCategory>,
    pub target: Arc<FinCategory>,
    pub object_map: Vec<usize>,
    pub morphism_map: Vec<usize>,
}

impl CatFunctor {
    pub fn identity(c: &Arc<FinCategory>) -> Self {
        Self {
            source: c.clone(),
            target: c.clone(),
            object_map: (0..c.objects.len()).collect(),
            morphism_map: (0..c.morphisms.len()).collect(),
        }
    }

    pub fn apply(&self, f: usize) -> usize {
        self.morphism_map[f]
    }

    pub fn apply_object(&self, a: usize) -> usize {
        self.object_map[a]
    }

    /// Whether distinct morphisms with equal endpoints have distinct images.
    pub fn is_faithful(&self) -> bool {
        let c = &*self.source;
        let n = c.morphisms.len();
        (0..n).all(|f| {
            (f + 1..n).all(|g| {
                c.source(f) != c.source(g)
                    || c.target(f) != c.target(g)
                    || self.apply(f) != self.apply(g)
            })
        })
    }

    /// `g ∘ f` as functors.
    pub fn then(&self, g: &CatFunctor) -> Result<CatFunctor> {
        if self.target != g.source {
            return Err(Error::Mismatch(format!(
                "functor target {} differs from source {}",
                self.target.name, g.source.name
            )));
        }
        Ok(CatFunctor {
            source: self.source.clone(),
            target: g.target.clone(),
            object_map: self.object_map.iter().map(|&a| g.apply_object(a)).collect(),
            morphism_map: self.morphism_map.iter().map(|&f| g.apply(f)).collect(),
        })
    }

    /// Exhaustive check that boundaries, identities and composites are
    /// preserved.
    pub fn validate(&self) -> Result<ValidationReport> {
        let (c, d) = (&*self.source, &*self.target);
        check_category_structure(c)?;
        check_category_structure(d)?;
        if self.object_map.len() != c.objects.len() || self.object_map.iter().any(|&o| o >= d.objects.len()) {
            return Err(Error::UnknownObject(format!("object map of functor {} -> {}", c.name, d.name)));
        }
        if self.morphism_map.len() != c.morphisms.len() || self.morphism_map.iter().any(|&m| m >= d.morphisms.len()) {
            return Err(Error::UnknownMorphism(format!("morphism map of functor {} -> {}", c.name, d.name)));
        }
        let mut report = ValidationReport::new();
        let mut rec = Recorder::new(&mut report);
        for f in 0..c.morphisms.len() {
            let ff = self.apply(f);
            if d.source(ff) != self.apply_object(c.source(f)) || d.target(ff) != self.apply_object(c.target(f)) {
                rec.record(Law::FunctorBoundary, vec![c.morphisms[f].name.clone()], "");
            }
        }
        for (a, &id) in c.identities.iter().enumerate() {
            if self.apply(id) != d.identities[self.apply_object(a)] {
                rec.record(Law::FunctorIdentity, vec![c.objects[a].clone()], "");
            }
        }
        for (g, f) in c.composable_pairs() {
            let gf = c.compose(g, f).unwrap();
            if d.compose(self.apply(g), self.apply(f)) != Some(self.apply(gf)) {
                rec.record(
                    Law::FunctorComposition,
                    vec![c.morphisms[g].name.clone(), c.morphisms[f].name.clone()],
                    "",
                );
            }
        }
        Ok(report)
    }
}

/// Searches for an isomorphism of finite categories by backtracking with
/// forward propagation of composites. Returns the first one found.
pub fn find_isomorphism(a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> Option<CatFunctor> {
    if a.objects.len() != b.objects.len() || a.morphisms.len() != b.morphisms.len() {
        return None;
    }
    let objects = object_bijections(a, b);
    for object_map in objects {
        let mut search = IsoSearch {
            a,
            b,
            object_map: &object_map,
            map: vec![None; a.morphisms.len()],
            used: vec![false; b.morphisms.len()],
            trail: Vec::new(),
            periods_a: periods(a),
            periods_b: periods(b),
        };
        for (o, &id) in a.identities.iter().enumerate() {
            if !search.assign(id, b.identities[object_map[o]]) {
                break;
            }
        }
        if search.map.iter().filter(|m| m.is_some()).count() < a.objects.len() {
            continue;
        }
        if search.solve() {
            return Some(CatFunctor {
                source: a.clone(),
                target: b.clone(),
                object_map: object_map.clone(),
                morphism_map: search.map.iter().map(|m| m.unwrap()).collect(),
            });
        }
    }
    None
}

fn object_bijections(a: &FinCategory, b: &FinCategory) -> Vec<Vec<usize>> {
    fn perms(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                perms(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let n = a.objects.len();
    let mut out = Vec::new();
    perms(n, &mut Vec::new(), &mut vec![false; n], &mut out);
    // keep only maps preserving hom-set sizes
    out.retain(|m| {
        (0..n).all(|x| (0..n).all(|y| a.hom(x, y).count() == b.hom(m[x], m[y]).count()))
    });
    out
}

/// For endomorphisms: the length of the power sequence until it repeats.
fn periods(c: &FinCategory) -> Vec<usize> {
    (0..c.morphisms.len())
        .map(|f| {
            if c.source(f) != c.target(f) {
                return 0;
            }
            let mut seen = vec![f];
            let mut cur = f;
            loop {
                cur = c.compose(cur, f).unwrap_or(cur);
                if seen.contains(&cur) {
                    return seen.len();
                }
                seen.push(cur);
            }
        })
        .collect()
}

struct IsoSearch<'a> {
    a: &'a FinCategory,
    b: &'a FinCategory,
    object_map: &'a [usize],
    map: Vec<Option<usize>>,
    used: Vec<bool>,
    trail: Vec<usize>,
    periods_a: Vec<usize>,
    periods_b: Vec<usize>,
}

impl IsoSearch<'_> {
    fn compatible(&self, f: usize, g: usize) -> bool {
        !self.used[g]
            && self.b.source(g) == self.object_map[self.a.source(f)]
            && self.b.target(g) == self.object_map[self.a.target(f)]
            && self.periods_a[f] == self.periods_b[g]
    }

    /// Assigns `f ↦ g` and propagates every forced composite. On conflict
    /// the partial assignment is left for the caller to undo.
    fn assign(&mut self, f: usize, g: usize) -> bool {
        let mut queue = vec![(f, g)];
        while let Some((f, g)) = queue.pop() {
            match self.map[f] {
                Some(h) if h == g => continue,
                Some(_) => return false,
                None => {}
            }
            if !self.compatible(f, g) {
                return false;
            }
            self.map[f] = Some(g);
            self.used[g] = true;
            self.trail.push(f);
            let assigned: Vec<usize> = self.trail.clone();
            for &x in &assigned {
                let gx = self.map[x].unwrap();
                for (p, q, gp, gq) in [(f, x, g, gx), (x, f, gx, g)] {
                    if let Some(pq) = self.a.compose(p, q) {
                        match self.b.compose(gp, gq) {
                            Some(image) => queue.push((pq, image)),
                            None => return false,
                        }
                    }
                }
            }
        }
        true
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let f = self.trail.pop().unwrap();
            let g = self.map[f].take().unwrap();
            self.used[g] = false;
        }
    }

    fn solve(&mut self) -> bool {
        let Some(f) = (0..self.map.len()).find(|&f| self.map[f].is_none()) else {
            return true;
        };
        let mark = self.trail.len();
        for g in 0..self.b.morphisms.len() {
            if !self.compatible(f, g) {
                continue;
            }
            if self.assign(f, g) && self.solve() {
                return true;
            }
            self.undo_to(mark);
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::category::CategoryBuilder;
    use crate::finite::monoid::FinCommMonoid;

    #[test]
    fn cyclic_deloopings_are_isomorphic_only_when_orders_agree() {
        let z6 = Arc::new(FinCategory::delooping(&FinCommMonoid::cyclic("Z6", 6), "pt"));
        let z2 = FinCommMonoid::cyclic("Z2", 2);
        let z3 = FinCommMonoid::cyclic("Z3", 3);
        let prod = FinCommMonoid::from_fn(
            "Z2xZ3",
            (0..6).map(|i| format!("({},{})", i / 3, i % 3)).collect(),
            0,
            |x, y| z2.mul(x / 3, y / 3) * 3 + z3.mul(x % 3, y % 3),
        );
        let prod = Arc::new(FinCategory::delooping(&prod, "pt"));
        let iso = find_isomorphism(&z6, &prod).expect("Z6 ≅ Z2×Z3");
        assert!(iso.validate().unwrap().is_empty());
        let z4 = Arc::new(FinCategory::delooping(&FinCommMonoid::cyclic("Z4", 4), "pt"));
        let v4 = FinCommMonoid::from_fn("V4", (0..4).map(|i| i.to_string()).collect(), 0, |x, y| x ^ y);
        let v4 = Arc::new(FinCategory::delooping(&v4, "pt"));
        assert!(find_isomorphism(&z4, &v4).is_none());
    }

    #[test]
    fn functor_checks_catch_broken_maps() {
        let c = Arc::new(
            CategoryBuilder::new("2")
                .objects(&["0", "1"])
                .morphism("a", "0", "1")
                .build()
                .unwrap(),
        );
        let id = CatFunctor::identity(&c);
        assert!(id.validate().unwrap().is_empty());
        assert!(id.is_faithful());
        let mut bad = id.clone();
        bad.morphism_map[2] = 0;
        let r = bad.validate().unwrap();
        assert!(r.has(Law::FunctorBoundary));
    }
}
