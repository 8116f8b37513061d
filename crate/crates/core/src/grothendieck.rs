//! The Grothendieck category `∫Φ` of a π₂-indexing, its projection to `B*`,
//! the unit section and the fiber inclusions.
//!
//! Morphisms are pairs `(f, φ)` ordered by `f` and then by fiber element;
//! `φ` lives in the fiber of the target of `f` (covariant) or of its source
//! (contravariant).

use std::sync::Arc;

use crate::error::Result;
use crate::finite::category::{FinCategory, Morphism};
use crate::finite::functor::CatFunctor;
use crate::indexing::{Pi2Indexing, Variance};

/// Index of the fiber carried by pairs over `f`.
fn decorated_object(phi: &Pi2Indexing, f: usize) -> usize {
    let c = &phi.base.vertical;
    match phi.variance {
        Variance::Covariant => c.target(f),
        Variance::Contravariant => c.source(f),
    }
}

fn offsets(phi: &Pi2Indexing) -> Vec<usize> {
    let mut acc = 0;
    (0..phi.base.vertical.morphisms.len())
        .map(|f| {
            let start = acc;
            acc += phi.fibers[decorated_object(phi, f)].monoid.len();
            start
        })
        .collect()
}

/// Index of `(f, x)` in [`build_grothendieck`]'s output.
pub fn groth_morphism(phi: &Pi2Indexing, f: usize, x: usize) -> usize {
    offsets(phi)[f] + x
}

/// The pair `(f, x)` behind a morphism of [`build_grothendieck`]'s output.
pub fn groth_pair(phi: &Pi2Indexing, m: usize) -> (usize, usize) {
    let offs = offsets(phi);
    let f = offs.partition_point(|&o| o <= m) - 1;
    (f, m - offs[f])
}

/// The twisted composite of pairs, as (morphism, fiber element).
pub fn groth_compose(phi: &Pi2Indexing, (g, x): (usize, usize), (f, y): (usize, usize)) -> Option<(usize, usize)> {
    let c = &phi.base.vertical;
    let gf = c.compose(g, f)?;
    let fiber = &phi.fibers[decorated_object(phi, gf)].monoid;
    let z = match phi.variance {
        Variance::Covariant => fiber.mul(x, phi.apply(g, y)),
        Variance::Contravariant => fiber.mul(phi.apply(f, x), y),
    };
    Some((gf, z))
}

pub fn build_grothendieck(phi: &Pi2Indexing) -> FinCategory {
    let c = &phi.base.vertical;
    let offs = offsets(phi);
    let mut morphisms = Vec::new();
    let mut pairs = Vec::new();
    for (f, m) in c.morphisms.iter().enumerate() {
        let fiber = &phi.fibers[decorated_object(phi, f)].monoid;
        for (x, e) in fiber.elements.iter().enumerate() {
            morphisms.push(Morphism {
                name: format!("({},{})", m.name, e),
                source: m.source,
                target: m.target,
            });
            pairs.push((f, x));
        }
    }
    let n = morphisms.len();
    let mut comp = vec![None; n * n];
    for (i, &p) in pairs.iter().enumerate() {
        for (j, &q) in pairs.iter().enumerate() {
            if let Some((h, z)) = groth_compose(phi, p, q) {
                comp[i * n + j] = Some(offs[h] + z);
            }
        }
    }
    let identities = c
        .identities
        .iter()
        .enumerate()
        .map(|(a, &id)| offs[id] + phi.fibers[a].monoid.unit)
        .collect();
    FinCategory {
        name: format!("Groth({})", phi.name),
        objects: c.objects.clone(),
        morphisms,
        identities,
        comp,
    }
}

/// `P: ∫Φ → B*`, `(f, φ) ↦ f`.
pub fn projection(groth: &Arc<FinCategory>, phi: &Pi2Indexing) -> CatFunctor {
    let c = &phi.base.vertical;
    CatFunctor {
        source: groth.clone(),
        target: Arc::new(c.clone()),
        object_map: (0..c.objects.len()).collect(),
        morphism_map: (0..groth.morphisms.len()).map(|m| groth_pair(phi, m).0).collect(),
    }
}

/// `U: B* → ∫Φ`, `f ↦ (f, unit)`.
pub fn unit_section(phi: &Pi2Indexing) -> CatFunctor {
    let c = &phi.base.vertical;
    let offs = offsets(phi);
    CatFunctor {
        source: Arc::new(c.clone()),
        target: Arc::new(build_grothendieck(phi)),
        object_map: (0..c.objects.len()).collect(),
        morphism_map: (0..c.morphisms.len())
            .map(|f| offs[f] + phi.fibers[decorated_object(phi, f)].monoid.unit)
            .collect(),
    }
}

/// The inclusion of the delooping of `π₂(B, b)` as the pairs `(id_b, φ)`.
pub fn fiber_inclusion(phi: &Pi2Indexing, b: &str) -> Result<CatFunctor> {
    let c = &phi.base.vertical;
    let a = c.object(b)?;
    let fiber = &phi.fibers[a].monoid;
    let start = offsets(phi)[c.identities[a]];
    Ok(CatFunctor {
        source: Arc::new(FinCategory::delooping(fiber, b)),
        target: Arc::new(build_grothendieck(phi)),
        object_map: vec![a],
        morphism_map: (0..fiber.len()).map(|x| start + x).collect(),
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::finite::category::{opposite_category, validate_category, CategoryBuilder};
    use crate::finite::monoid::{FinCommMonoid, MonoidHom};
    use crate::indexing::mirror;
    use crate::twocat::{DecoratedTwoCat, Fin2Category};

    fn negation() -> Pi2Indexing {
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
        Pi2Indexing::new("Neg", d, Variance::Covariant, BTreeMap::from([("g".into(), neg)])).unwrap()
    }

    #[test]
    fn twisted_composition_on_running_instance() {
        let phi = negation();
        let groth = build_grothendieck(&phi);
        assert!(validate_category(&groth).unwrap().is_empty());
        assert_eq!(groth.morphism_count(), 6);
        let m = |s: &str| groth.morphism(s).unwrap();
        assert_eq!(groth.compose(m("(g,1)"), m("(g,2)")), Some(m("(e,2)")));
        assert_eq!(groth.compose(m("(e,1)"), m("(e,2)")), Some(m("(e,0)")));
        // (f, id) after (id, φ) is (f, Φ(f)(φ))
        assert_eq!(groth.compose(m("(g,0)"), m("(e,1)")), Some(m("(g,2)")));
    }

    #[test]
    fn projection_and_unit_section() {
        let phi = negation();
        let groth = Arc::new(build_grothendieck(&phi));
        let p = projection(&groth, &phi);
        assert!(p.validate().unwrap().is_empty());
        assert_eq!(p.apply(groth.morphism("(g,2)").unwrap()), phi.base.vertical.morphism("g").unwrap());
        let u = unit_section(&phi);
        assert!(u.validate().unwrap().is_empty());
        assert!(u.is_faithful());
        let pu = u.then(&p).unwrap();
        assert_eq!(pu, CatFunctor::identity(&Arc::new(phi.base.vertical.clone())));
    }

    #[test]
    fn fiber_inclusion_is_faithful_functor() {
        let phi = negation();
        let inc = fiber_inclusion(&phi, "pt").unwrap();
        assert!(inc.validate().unwrap().is_empty());
        assert!(inc.is_faithful());
        assert_eq!(inc.target.morphism_name(inc.apply(1)), "(e,1)");
        assert!(fiber_inclusion(&phi, "nowhere").is_err());
    }

    #[test]
    fn contravariant_build_is_opposite_of_covariant() {
        let phi = negation();
        let co = build_grothendieck(&phi);
        let contra = build_grothendieck(&mirror(&phi));
        assert!(validate_category(&contra).unwrap().is_empty());
        assert!(contra.same_tables(&opposite_category(&co)));
    }
}
