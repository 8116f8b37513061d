use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;

use dct_core::crossprod::{build_crossprod, check_double_axioms, decorated_horizontalization, CrossedProduct, Square};
use dct_core::dsl::{parse_spec, serialize, Workspace};
use dct_core::filtration::length;
use dct_core::finite::category::FinCategory;
use dct_core::finite::functor::find_isomorphism;
use dct_core::finite::monoid::{homomorphisms, validate_monoid, FinCommMonoid, MonoidHom};
use dct_core::finite::validate_category;
use dct_core::freegg::{crossprod_factorization_length, min_factorization_length, normalize_word, word_boundary, Atom, FreeWord};
use dct_core::gallery::{deloop_category, deloop_twocat, free_length4_decoration, group_delooping};
use dct_core::grothendieck::build_grothendieck;
use dct_core::indexing::{enumerate_indexings, mirror, validate_indexing, Pi2Indexing, Variance};
use dct_core::search::SearchBudget;
use dct_core::twocat::DecoratedTwoCat;

fn cyclic(name: &str, n: usize) -> FinCommMonoid {
    FinCommMonoid::cyclic(name, n)
}

/// Multipliers `u` of `Z/m` with `u^n = 1`: the actions of `Z/n` on `Z/m`.
fn multipliers(n: usize, m: usize) -> Vec<usize> {
    (0..m)
        .filter(|&u| (0..n).fold(1 % m, |acc, _| acc * u % m) == 1 % m)
        .collect()
}

/// `(ΩZ/n, 2ΩZ/m)` with the generator acting by multiplication by `u`.
fn cyclic_instance(n: usize, m: usize, u: usize) -> Pi2Indexing {
    let g = cyclic(&format!("Z{n}"), n);
    let a = cyclic(&format!("Z{m}"), m);
    let d = Arc::new(DecoratedTwoCat {
        name: "D".into(),
        vertical: deloop_category(&format!("OmegaZ{n}"), &g, "pt").unwrap(),
        horizontal: deloop_twocat(&format!("B2OmegaZ{m}"), &a, "pt").unwrap(),
    });
    let fiber = d.fibers().unwrap()[0].monoid.clone();
    let el = |x: usize| fiber.index_of(&x.to_string()).unwrap();
    let mut homs = BTreeMap::new();
    for k in 1..n {
        let uk = (0..k).fold(1 % m, |acc, _| acc * u % m);
        let mut map = vec![0; m];
        for x in 0..m {
            map[el(x)] = el(x * uk % m);
        }
        homs.insert(
            k.to_string(),
            MonoidHom {
                source: fiber.clone(),
                target: fiber.clone(),
                map,
            },
        );
    }
    Pi2Indexing::new("Phi", d, Variance::Covariant, homs).unwrap()
}

fn instance() -> impl Strategy<Value = (usize, usize, usize)> {
    (1usize..=4, 1usize..=5, 0usize..8).prop_map(|(n, m, pick)| {
        let us = multipliers(n, m);
        (n, m, us[pick % us.len()])
    })
}

fn semidirect_table(n: usize, m: usize, u: usize) -> FinCategory {
    let names: Vec<String> = (0..n * m).map(|i| format!("{}.{}", i / n, i % n)).collect();
    let pow = |k: usize| (0..k).fold(1 % m, |acc, _| acc * u % m);
    group_delooping("oracle", &names, 0, |p, q| {
        let (a, x, b, y) = (p / n, p % n, q / n, q % n);
        ((a + pow(x) * b) % m) * n + (x + y) % n
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cyclic_monoids_are_valid(n in 1usize..8) {
        prop_assert!(validate_monoid(&cyclic("Z", n)).unwrap().is_empty());
    }

    #[test]
    fn hom_enumeration_matches_brute_force(n in 1usize..5, m in 1usize..5) {
        let (a, b) = (Arc::new(cyclic("A", n)), Arc::new(cyclic("B", m)));
        let found = homomorphisms(&a, &b, &mut SearchBudget::default()).unwrap();
        let mut brute = 0;
        for code in 0..m.pow(n as u32) {
            let map: Vec<usize> = (0..n).map(|i| code / m.pow(i as u32) % m).collect();
            let h = MonoidHom { source: a.clone(), target: b.clone(), map };
            if h.check().is_empty() {
                brute += 1;
            }
        }
        prop_assert_eq!(found.len(), brute);
        prop_assert!(found.iter().all(|h| h.check().is_empty()));
    }

    #[test]
    fn indexing_count_matches_actions(n in 1usize..=4, m in 1usize..=5) {
        let phi = cyclic_instance(n, m, 1 % m.max(1));
        let found = enumerate_indexings(&phi.base, Variance::Covariant, &mut SearchBudget::default()).unwrap();
        prop_assert_eq!(found.len(), multipliers(n, m).len());
        for psi in &found {
            prop_assert!(validate_indexing(psi).unwrap().is_empty());
        }
    }

    #[test]
    fn crossed_products_are_double_categories((n, m, u) in instance()) {
        let phi = cyclic_instance(n, m, u);
        prop_assert!(validate_indexing(&phi).unwrap().is_empty());
        let model = build_crossprod(&phi).unwrap();
        prop_assert_eq!(model.square_count(), n * m);
        prop_assert!(check_double_axioms(&model).is_empty());
        prop_assert_eq!(length(&model), 1);
        prop_assert_eq!(&decorated_horizontalization(&model).unwrap(), &*phi.base);
        let squares = Arc::new(model.square_category());
        prop_assert!(find_isomorphism(&squares, &Arc::new(semidirect_table(n, m, u))).is_some());
    }

    #[test]
    fn mirrored_indexing_builds_the_same_size((n, m, u) in instance()) {
        let phi = cyclic_instance(n, m, u);
        let op = mirror(&phi);
        prop_assert!(validate_indexing(&op).unwrap().is_empty());
        let model = build_crossprod(&op).unwrap();
        prop_assert_eq!(model.square_count(), n * m);
        prop_assert!(check_double_axioms(&model).is_empty());
    }

    #[test]
    fn grothendieck_constructions_are_categories((n, m, u) in instance()) {
        let g = build_grothendieck(&cyclic_instance(n, m, u));
        prop_assert_eq!(g.morphisms.len(), n * m);
        prop_assert!(validate_category(&g).unwrap().is_empty());
    }

    #[test]
    fn squares_have_short_normal_forms((n, m, u) in instance(), layers in prop::collection::vec((any::<bool>(), 0usize..20), 1..7)) {
        let phi = cyclic_instance(n, m, u);
        let cp = CrossedProduct::new(&phi).unwrap();
        let w = FreeWord::new(layers.iter().map(|&(cell, k)| if cell { Atom::Cell(k % m) } else { Atom::Unit(k % n) }).collect());
        prop_assert!(crossprod_factorization_length(&cp, &w).unwrap() <= 3);
    }

    #[test]
    fn composition_respects_the_congruence((n, m, u) in instance(), picks in prop::collection::vec(0usize..100, 4)) {
        let cp = CrossedProduct::new(&cyclic_instance(n, m, u)).unwrap();
        let raw = |k: usize| if n == 1 || k % 2 == 0 {
            Square::Globular { cell: (k / 2) % m }
        } else {
            Square::Framed { up: k % m, frame: 1 + (k / m) % (n - 1), down: (k / 7) % m }
        };
        let (s, t) = (raw(picks[0]), raw(picks[1]));
        let (s2, t2) = (cp.canonicalize(s).unwrap(), cp.canonicalize(t).unwrap());
        let v1 = cp.vcomp_squares(s, t).unwrap();
        prop_assert!(cp.square_equal(v1, cp.vcomp_squares(s2, t2).unwrap()));
        if let (Ok(h1), Ok(h2)) = (cp.hcomp_squares(s, t), cp.hcomp_squares(s2, t2)) {
            prop_assert!(cp.square_equal(h1, h2));
        }
    }
}

fn free_word() -> impl Strategy<Value = FreeWord> {
    let d = free_length4_decoration();
    let atoms: Vec<Atom> = (0..d.horizontal.twocells.len())
        .map(Atom::Cell)
        .chain((0..d.vertical.morphisms.len()).map(Atom::Unit))
        .collect();
    prop::collection::vec(prop::sample::select(atoms), 1..6)
        .prop_map(FreeWord::new)
        .prop_filter("well formed", move |w| word_boundary(&free_length4_decoration(), w).is_ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalization_is_idempotent_and_keeps_boundaries(w in free_word()) {
        let d = free_length4_decoration();
        let n = normalize_word(&d, &w).unwrap();
        prop_assert_eq!(&normalize_word(&d, &n).unwrap(), &n);
        prop_assert_eq!(word_boundary(&d, &n).unwrap(), word_boundary(&d, &w).unwrap());
        prop_assert!(n.len() <= w.len());
    }

    #[test]
    fn min_factorization_is_stable(w in free_word()) {
        let d = free_length4_decoration();
        let n = normalize_word(&d, &w).unwrap();
        let at = |b: usize| min_factorization_length(&d, &w, b).unwrap();
        let base = at(n.len());
        prop_assert_eq!(base, min_factorization_length(&d, &n, n.len()).unwrap());
        prop_assert_eq!(base, at(n.len() + 2));
        prop_assert!(base <= n.len());
    }

    #[test]
    fn parser_never_panics(text in "[a-z0-9 {}();:=>,#\n-]{0,80}") {
        let lines = text.lines().count().max(1);
        if let Err(e) = parse_spec(&text) {
            prop_assert!(e.span.line >= 1 && e.span.line <= lines + 1);
            prop_assert!(e.span.col >= 1);
        }
    }

    #[test]
    fn generated_workspaces_round_trip(n in 1usize..5, m in 1usize..5, names in prop::collection::vec("[a-z][a-z0-9_']{0,4}", 5)) {
        let mut ws = Workspace::new();
        let mut elements = names.clone();
        elements.sort();
        elements.dedup();
        let k = elements.len();
        ws.add_monoid(FinCommMonoid::from_fn("M", elements, 0, |x, y| (x + y) % k));
        ws.add_indexing(cyclic_instance(n, m, 1 % m));
        let text = serialize(&ws);
        let back = parse_spec(&text).unwrap();
        prop_assert_eq!(&back, &ws);
        prop_assert_eq!(serialize(&back), text);
    }
}
