use super::*;
use crate::dsl::{parse_spec, serialize};
use crate::twocat::validate_decorated;

#[test]
fn every_example_passes() {
    for name in NAMES {
        let r = run(name).unwrap();
        assert!(r.passed(), "{name}: {:#?}", r.verdicts);
    }
}

#[test]
fn example_files_match_the_builders() {
    for name in NAMES {
        let parsed = parse_spec(source(name).unwrap()).unwrap();
        let built = run(name).unwrap().workspace;
        assert_eq!(parsed, built, "{name}");
        let text = serialize(&built);
        assert_eq!(parse_spec(&text).unwrap(), built);
        for d in built.decorated.values() {
            assert!(validate_decorated(d).unwrap().is_empty(), "{name}");
        }
    }
}

#[test]
fn semidirect_rejects_bad_input() {
    let g = FinCommMonoid::from_fn("M", vec!["1".into(), "z".into()], 0, |x, y| x.max(y));
    let a = z3();
    let [(_, neg), _] = z2_actions_on_z3();
    let action: BTreeMap<String, MonoidHom> = [("1".to_string(), neg["e"].clone()), ("z".to_string(), neg["g"].clone())].into();
    assert!(matches!(semidirect_example(&g, &a, &action), Err(Error::NotAGroup(_))));
    let mut bad = neg.clone();
    bad.get_mut("g").unwrap().map = vec![0, 0, 0];
    assert!(matches!(semidirect_example(&z2(), &a, &bad), Err(Error::NotAnAction(_))));
}

#[test]
fn trivial_group_gives_the_delooping_of_a() {
    let g = FinCommMonoid::trivial("One", "1");
    let a = z3();
    let id = MonoidHom::identity(&Arc::new(a.clone()));
    let action = BTreeMap::from([(g.elements[0].clone(), id)]);
    let r = semidirect_example(&g, &a, &action).unwrap();
    assert!(r.passed(), "{:#?}", r.verdicts);
    let squares = r.models[0].square_category();
    assert!(find_isomorphism(&Arc::new(squares), &Arc::new(FinCategory::delooping(&a, "pt"))).is_some());
}

#[test]
fn brute_force_action_count() {
    assert_eq!(count_actions_brute_force(&z2(), &z3()), 2);
    assert_eq!(count_actions_brute_force(&z3(), &z3()), 1);
    assert_eq!(permutations(3).len(), 6);
}

#[test]
fn trivial_pi2_has_fourteen_squares() {
    let r = trivial_pi2_example().unwrap();
    assert_eq!(r.models[0].square_count(), 14);
}
