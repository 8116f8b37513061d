//! π₂-indexings and π₂-opindexings on a decorated 2-category, with their
//! validation and exhaustive enumeration.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite::monoid::{compose_homs, homomorphisms, MonoidHom};
use crate::report::{Law, Recorder, ValidationReport};
use crate::search::SearchBudget;
use crate::twocat::{DecoratedTwoCat, Pi2Fiber};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variance {
    Covariant,
    Contravariant,
}

impl fmt::Display for Variance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variance::Covariant => "covariant",
            Variance::Contravariant => "contravariant",
        })
    }
}

/// An assignment of a monoid hom between π₂ fibers to every morphism of
/// `B*`, identities included. For `f: a → b` the hom goes
/// `π₂(a) → π₂(b)` when covariant and `π₂(b) → π₂(a)` when contravariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pi2Indexing {
    pub name: String,
    pub base: Arc<DecoratedTwoCat>,
    pub variance: Variance,
    /// `fibers[a]` is `π₂(B, a)` for object `a` of `B*`.
    pub fibers: Vec<Pi2Fiber>,
    pub action: Vec<MonoidHom>,
}

impl Pi2Indexing {
    /// Fills identity morphisms with identity homs and, where the source or
    /// target fiber is trivial, the unique hom. Every other morphism must
    /// be listed in `actions`, keyed by morphism name.
    pub fn new(
        name: &str,
        base: Arc<DecoratedTwoCat>,
        variance: Variance,
        mut actions: BTreeMap<String, MonoidHom>,
    ) -> Result<Self> {
        let fibers = base.fibers()?;
        let c = &base.vertical;
        let mut action = Vec::with_capacity(c.morphisms.len());
        for f in 0..c.morphisms.len() {
            let (src, tgt) = hom_fibers(&fibers, c.source(f), c.target(f), variance);
            let hom = match actions.remove(&c.morphisms[f].name) {
                Some(h) => h,
                None if c.is_identity(f) => MonoidHom::identity(&src.monoid),
                None if src.monoid.len() == 1 || tgt.monoid.len() == 1 => {
                    MonoidHom::constant_unit(&src.monoid, &tgt.monoid)
                }
                None => {
                    return Err(Error::MissingEntry(format!(
                        "indexing {name}: no action for {}",
                        c.morphisms[f].name
                    )))
                }
            };
            action.push(hom);
        }
        if let Some(extra) = actions.keys().next() {
            return Err(Error::UnknownMorphism(extra.clone()));
        }
        Ok(Self {
            name: name.to_string(),
            base,
            variance,
            fibers,
            action,
        })
    }

    /// The (source, target) fibers of the hom assigned to `f`.
    pub fn hom_fibers(&self, f: usize) -> (&Pi2Fiber, &Pi2Fiber) {
        let c = &self.base.vertical;
        hom_fibers(&self.fibers, c.source(f), c.target(f), self.variance)
    }

    pub fn apply(&self, f: usize, x: usize) -> usize {
        self.action[f].apply(x)
    }
}

fn hom_fibers(fibers: &[Pi2Fiber], a: usize, b: usize, variance: Variance) -> (&Pi2Fiber, &Pi2Fiber) {
    match variance {
        Variance::Covariant => (&fibers[a], &fibers[b]),
        Variance::Contravariant => (&fibers[b], &fibers[a]),
    }
}

/// The hom stored for the morphism named `f`.
pub fn action_of<'a>(phi: &'a Pi2Indexing, f: &str) -> Result<&'a MonoidHom> {
    let i = phi.base.vertical.morphism(f)?;
    Ok(&phi.action[i])
}

/// Checks the fiber condition, that each action is a hom, and functoriality.
pub fn validate_indexing(phi: &Pi2Indexing) -> Result<ValidationReport> {
    let c = &phi.base.vertical;
    if phi.action.len() != c.morphisms.len() {
        return Err(Error::MissingEntry(format!(
            "indexing {}: {} actions for {} morphisms",
            phi.name,
            phi.action.len(),
            c.morphisms.len()
        )));
    }
    if phi.fibers.len() != c.objects.len() {
        return Err(Error::MissingEntry(format!("indexing {}: wrong number of fibers", phi.name)));
    }
    let expected = phi.base.fibers()?;
    let mut report = ValidationReport::new();
    let mut rec = Recorder::new(&mut report);
    for (a, (have, want)) in phi.fibers.iter().zip(&expected).enumerate() {
        if have.monoid.op != want.monoid.op
            || have.monoid.elements != want.monoid.elements
            || have.monoid.unit != want.monoid.unit
            || have.embedding != want.embedding
        {
            rec.record(Law::FiberMismatch, vec![c.objects[a].clone()], "fiber is not pi2 of the 0-cell");
        }
    }
    let mut well_typed = vec![true; c.morphisms.len()];
    for f in 0..c.morphisms.len() {
        let (src, tgt) = phi.hom_fibers(f);
        let hom = &phi.action[f];
        let fname = c.morphisms[f].name.clone();
        if hom.source.op != src.monoid.op
            || hom.target.op != tgt.monoid.op
            || hom.source.elements != src.monoid.elements
            || hom.target.elements != tgt.monoid.elements
        {
            rec.record(Law::FiberMismatch, vec![fname], "action has the wrong source or target fiber");
            well_typed[f] = false;
            continue;
        }
        let check = hom.check();
        if !check.is_empty() {
            let detail = check.violations[0].to_string();
            rec.record(Law::NotAHom, vec![fname], detail);
            well_typed[f] = !check.has(Law::Closure);
        }
    }
    for (a, &id) in c.identities.iter().enumerate() {
        if well_typed[id] && !phi.action[id].map.iter().enumerate().all(|(i, &j)| i == j) {
            rec.record(Law::NotFunctorial, vec![c.morphisms[id].name.clone()], format!("identity of {} acts non-trivially", c.objects[a]));
        }
    }
    for (g, f) in c.composable_pairs() {
        let gf = c.compose(g, f).unwrap();
        if !(well_typed[g] && well_typed[f] && well_typed[gf]) {
            continue;
        }
        let composite = match phi.variance {
            Variance::Covariant => compose_homs(&phi.action[g], &phi.action[f]),
            Variance::Contravariant => compose_homs(&phi.action[f], &phi.action[g]),
        };
        if composite.map(|h| h.map) != Ok(phi.action[gf].map.clone()) {
            rec.record(
                Law::NotFunctorial,
                vec![c.morphisms[g].name.clone(), c.morphisms[f].name.clone()],
                format!("action of {} differs from the composite", c.morphisms[gf].name),
            );
        }
    }
    Ok(report)
}

/// Every indexing of the given variance, in lexicographic order of the
/// image tables over non-identity morphisms taken in index order. Named
/// `Phi0`, `Phi1`, … in output order.
pub fn enumerate_indexings(
    d: &Arc<DecoratedTwoCat>,
    variance: Variance,
    budget: &mut SearchBudget,
) -> Result<Vec<Pi2Indexing>> {
    let fibers = d.fibers()?;
    let c = &d.vertical;
    let n = c.morphisms.len();
    let mut candidates: Vec<Vec<MonoidHom>> = Vec::with_capacity(n);
    for f in 0..n {
        let (src, tgt) = hom_fibers(&fibers, c.source(f), c.target(f), variance);
        if c.is_identity(f) {
            candidates.push(vec![MonoidHom::identity(&src.monoid)]);
        } else {
            candidates.push(homomorphisms(&src.monoid, &tgt.monoid, budget)?);
        }
    }
    // pairs (g, f) to check once the last of g, f, g∘f is assigned
    let mut checks: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); n];
    for (g, f) in c.composable_pairs() {
        let gf = c.compose(g, f).unwrap();
        checks[g.max(f).max(gf)].push((g, f, gf));
    }

    struct Search<'a> {
        candidates: &'a [Vec<MonoidHom>],
        checks: &'a [Vec<(usize, usize, usize)>],
        variance: Variance,
        chosen: Vec<usize>,
        found: Vec<Vec<usize>>,
    }

    impl Search<'_> {
        fn consistent(&self, k: usize) -> bool {
            let hom = |m: usize| &self.candidates[m][self.chosen[m]];
            self.checks[k].iter().all(|&(g, f, gf)| {
                let (outer, inner) = match self.variance {
                    Variance::Covariant => (hom(g), hom(f)),
                    Variance::Contravariant => (hom(f), hom(g)),
                };
                inner.map.iter().map(|&x| outer.apply(x)).eq(hom(gf).map.iter().copied())
            })
        }

        fn go(&mut self, k: usize, budget: &mut SearchBudget) -> Result<()> {
            if k == self.candidates.len() {
                self.found.push(self.chosen.clone());
                return Ok(());
            }
            for i in 0..self.candidates[k].len() {
                budget.charge()?;
                self.chosen.push(i);
                if self.consistent(k) {
                    self.go(k + 1, budget)?;
                }
                self.chosen.pop();
            }
            Ok(())
        }
    }

    let mut search = Search {
        candidates: &candidates,
        checks: &checks,
        variance,
        chosen: Vec::with_capacity(n),
        found: Vec::new(),
    };
    search.go(0, budget)?;
    Ok(search
        .found
        .into_iter()
        .enumerate()
        .map(|(i, choice)| Pi2Indexing {
            name: format!("Phi{i}"),
            base: d.clone(),
            variance,
            fibers: fibers.clone(),
            action: choice
                .into_iter()
                .enumerate()
                .map(|(f, j)| candidates[f][j].clone())
                .collect(),
        })
        .collect())
}

/// The indexing of the other variance on the opposite decoration carrying
/// the same hom tables.
pub fn mirror(phi: &Pi2Indexing) -> Pi2Indexing {
    Pi2Indexing {
        name: phi.name.clone(),
        base: Arc::new(phi.base.opposite()),
        variance: match phi.variance {
            Variance::Covariant => Variance::Contravariant,
            Variance::Contravariant => Variance::Covariant,
        },
        fibers: phi.fibers.clone(),
        action: phi.action.clone(),
    }
}
