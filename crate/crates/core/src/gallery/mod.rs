//! Finite worked examples with their headline checks. Each example also
//! ships as a `.dct` file; [`source`] returns its text.

pub mod synthetic;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::crossprod::{
    build_crossprod, check_double_axioms, decorated_horizontalization, CrossedProduct, DoubleCatModel,
};
use crate::dsl::Workspace;
use crate::error::{Error, Result};
use crate::filtration;
use crate::finite::category::{CategoryBuilder, FinCategory};
use crate::finite::functor::{find_isomorphism, CatFunctor};
use crate::finite::monoid::{FinCommMonoid, MonoidHom};
use crate::freegg::{crossprod_factorization_length, min_factorization, parse_word};
use crate::indexing::{enumerate_indexings, Pi2Indexing, Variance};
use crate::search::SearchBudget;
use crate::twocat::{pi2, DecoratedTwoCat, Fin2Category, TwoCategoryBuilder};

pub const NAMES: [&str; 4] = ["semidirect-z2-z3", "no-indexing", "trivial-pi2", "free-length4"];

/// The `.dct` text of a named example.
pub fn source(name: &str) -> Option<&'static str> {
    Some(match name {
        "semidirect-z2-z3" => include_str!("../../gallery/semidirect-z2-z3.dct"),
        "no-indexing" => include_str!("../../gallery/no-indexing.dct"),
        "trivial-pi2" => include_str!("../../gallery/trivial-pi2.dct"),
        "free-length4" => include_str!("../../gallery/free-length4.dct"),
        _ => return None,
    })
}

/// Runs a named example.
pub fn run(name: &str) -> Result<GalleryResult> {
    match name {
        "semidirect-z2-z3" => semidirect_z2_z3(),
        "no-indexing" => no_indexing_example(),
        "trivial-pi2" => trivial_pi2_example(),
        "free-length4" => free_length4_example(),
        _ => Err(Error::Invalid(format!(
            "no example named `{name}`; known: {}",
            NAMES.join(", ")
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub claim: String,
    /// The library call whose result decided the claim.
    pub operation: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct GalleryResult {
    pub name: String,
    pub workspace: Workspace,
    pub models: Vec<DoubleCatModel>,
    pub verdicts: Vec<Verdict>,
}

impl GalleryResult {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn verdict(&self, claim: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.claim == claim)
    }

    fn check(&mut self, claim: impl Into<String>, operation: &str, passed: bool, detail: impl Into<String>) {
        self.verdicts.push(Verdict {
            claim: claim.into(),
            operation: operation.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            workspace: Workspace::new(),
            models: Vec::new(),
            verdicts: Vec::new(),
        }
    }

    /// The checks every built crossed product gets.
    fn check_model(&mut self, phi: &Pi2Indexing) -> Result<DoubleCatModel> {
        let label = &phi.name;
        let m = build_crossprod(phi)?;
        let report = check_double_axioms(&m);
        self.check(
            format!("{label}: double category axioms hold"),
            "check_double_axioms",
            report.is_empty(),
            if report.is_empty() {
                format!("{} squares", m.square_count())
            } else {
                report.to_string()
            },
        );
        let length = filtration::length(&m);
        self.check(format!("{label}: vertical length is 1"), "filtration::length", length == 1, format!("length {length}"));
        let h = decorated_horizontalization(&m)?;
        self.check(
            format!("{label}: horizontalization recovers the decoration"),
            "decorated_horizontalization",
            h == *phi.base,
            String::new(),
        );
        let cp = CrossedProduct::new(phi)?;
        let mut ok = true;
        for s in cp.squares() {
            let back = cp.recompose(cp.canonical_decomposition(s)?)?;
            ok &= cp.square_equal(back, s);
        }
        self.check(
            format!("{label}: canonical decompositions recompose"),
            "canonical_decomposition",
            ok,
            String::new(),
        );
        Ok(m)
    }
}

/// `ΩG` built the way the `.dct` parser builds it: identity first.
pub fn deloop_category(name: &str, g: &FinCommMonoid, object: &str) -> Result<FinCategory> {
    let mut b = CategoryBuilder::new(name);
    b.object(object).identity_name(object, &g.elements[g.unit]);
    for (i, e) in g.elements.iter().enumerate() {
        if i != g.unit {
            b.morphism(e, object, object);
        }
    }
    let n = g.len();
    for x in 0..n {
        for y in 0..n {
            b.compose(&g.elements[x], &g.elements[y], &g.elements[g.mul(x, y)]);
        }
    }
    b.build()
}

/// `2ΩA` on one 0-cell whose identity 1-cell is `id_<object>`.
pub fn deloop_twocat(name: &str, a: &FinCommMonoid, object: &str) -> Result<Fin2Category> {
    let id = format!("id_{object}");
    let mut b = TwoCategoryBuilder::new(name);
    b.zerocell(object).id2_name(&id, &a.elements[a.unit]);
    for (i, e) in a.elements.iter().enumerate() {
        if i != a.unit {
            b.twocell(e, &id, &id);
        }
    }
    let n = a.len();
    for x in 0..n {
        for y in 0..n {
            let (ex, ey, exy) = (&a.elements[x], &a.elements[y], &a.elements[a.mul(x, y)]);
            b.vcomp(ex, ey, exy).hcomp(ex, ey, exy);
        }
    }
    b.build()
}

/// A one-object category from a group table that need not commute.
pub fn group_delooping(name: &str, elements: &[String], unit: usize, mul: impl Fn(usize, usize) -> usize) -> Result<FinCategory> {
    let mut b = CategoryBuilder::new(name);
    b.object("pt").identity_name("pt", &elements[unit]);
    for (i, e) in elements.iter().enumerate() {
        if i != unit {
            b.morphism(e, "pt", "pt");
        }
    }
    for x in 0..elements.len() {
        for y in 0..elements.len() {
            b.compose(&elements[x], &elements[y], &elements[mul(x, y)]);
        }
    }
    b.build()
}

fn check_action(g: &FinCommMonoid, a: &FinCommMonoid, action: &BTreeMap<String, MonoidHom>) -> Result<Vec<Vec<usize>>> {
    let mut maps = Vec::with_capacity(g.len());
    for e in &g.elements {
        let h = action
            .get(e)
            .ok_or_else(|| Error::NotAnAction(format!("no automorphism for {e}")))?;
        if h.source.elements != a.elements || h.target.elements != a.elements || h.source.op != a.op {
            return Err(Error::NotAnAction(format!("the map for {e} is not an endomorphism of {}", a.name)));
        }
        if !h.check().is_empty() || !h.is_bijective() {
            return Err(Error::NotAnAction(format!("the map for {e} is not an automorphism of {}", a.name)));
        }
        maps.push(h.map.clone());
    }
    if action.len() != g.len() {
        return Err(Error::NotAnAction("automorphisms listed for unknown elements".into()));
    }
    if maps[g.unit].iter().enumerate().any(|(i, &j)| i != j) {
        return Err(Error::NotAnAction("the unit does not act as the identity".into()));
    }
    for x in 0..g.len() {
        for y in 0..g.len() {
            let xy = g.mul(x, y);
            if (0..a.len()).any(|v| maps[xy][v] != maps[x][maps[y][v]]) {
                return Err(Error::NotAnAction(format!(
                    "action of {}·{} is not the composite",
                    g.elements[x], g.elements[y]
                )));
            }
        }
    }
    Ok(maps)
}

/// `A ⋊ G` with `(a, g)(b, h) = (a + g·b, gh)`, as a one-object category.
pub fn semidirect_oracle(g: &FinCommMonoid, a: &FinCommMonoid, maps: &[Vec<usize>]) -> Result<FinCategory> {
    let (na, ng) = (a.len(), g.len());
    let elements: Vec<String> = (0..na * ng)
        .map(|i| format!("{}.{}", a.elements[i / ng], g.elements[i % ng]))
        .collect();
    let mul = |x: usize, y: usize| {
        let (xa, xg, ya, yg) = (x / ng, x % ng, y / ng, y % ng);
        a.mul(xa, maps[xg][ya]) * ng + g.mul(xg, yg)
    };
    group_delooping(&format!("{}x|{}", a.name, g.name), &elements, a.unit * ng + g.unit, mul)
}

/// Checks functoriality of `f` from the tables alone.
fn preserves_tables(f: &CatFunctor) -> bool {
    let (s, t) = (&f.source, &f.target);
    s.composable_pairs().all(|(x, y)| match (s.compose(x, y), t.compose(f.apply(x), f.apply(y))) {
        (Some(xy), Some(img)) => f.apply(xy) == img,
        _ => false,
    }) && (0..s.objects.len()).all(|o| f.apply(s.identities[o]) == t.identities[f.apply_object(o)])
}

/// `(ΩG, 2ΩA, Φ)` for a group `G` acting on `A`, keyed by element name of
/// `G`, with the crossed-product checks and the identification of the
/// square category with `Ω(A ⋊ G)`.
pub fn semidirect_example(g: &FinCommMonoid, a: &FinCommMonoid, action: &BTreeMap<String, MonoidHom>) -> Result<GalleryResult> {
    semidirect_named("Phi", g, a, action)
}

fn semidirect_named(
    label: &str,
    g: &FinCommMonoid,
    a: &FinCommMonoid,
    action: &BTreeMap<String, MonoidHom>,
) -> Result<GalleryResult> {
    if !g.is_group() {
        return Err(Error::NotAGroup(g.name.clone()));
    }
    let maps = check_action(g, a, action)?;
    let vertical = deloop_category(&format!("Omega{}", g.name), g, "pt")?;
    let horizontal = deloop_twocat(&format!("B2Omega{}", a.name), a, "pt")?;
    let d = Arc::new(DecoratedTwoCat {
        name: "D".into(),
        vertical,
        horizontal,
    });
    let fiber = d.fibers()?.remove(0).monoid;
    let mut homs = BTreeMap::new();
    for (gi, e) in g.elements.iter().enumerate() {
        if gi == g.unit {
            continue;
        }
        let map = fiber
            .elements
            .iter()
            .map(|x| fiber.index_of(&a.elements[maps[gi][a.index_of(x).expect("fiber names")]]).expect("fiber names"))
            .collect();
        homs.insert(
            e.clone(),
            MonoidHom {
                source: fiber.clone(),
                target: fiber.clone(),
                map,
            },
        );
    }
    let phi = Pi2Indexing::new(label, d, Variance::Covariant, homs)?;

    let mut out = GalleryResult::new("semidirect");
    out.workspace.add_monoid(g.clone()).add_monoid(a.clone()).add_indexing(phi.clone());
    let m = out.check_model(&phi)?;
    let squares = Arc::new(m.square_category());
    let oracle = Arc::new(semidirect_oracle(g, a, &maps)?);
    let iso = find_isomorphism(&squares, &oracle);
    let verified = iso.as_ref().is_some_and(|f| f.is_faithful() && preserves_tables(f));
    out.check(
        format!("{label}: square category is the delooping of A x| G"),
        "find_isomorphism",
        verified,
        format!(
            "{} morphisms, {}",
            squares.morphisms.len(),
            if is_commutative(&oracle) { "abelian" } else { "nonabelian" }
        ),
    );
    out.models.push(m);
    Ok(out)
}

fn is_commutative(c: &FinCategory) -> bool {
    c.composable_pairs().all(|(x, y)| c.compose(x, y) == c.compose(y, x))
}

/// `Ω(S₃)` from permutations of three points.
pub fn symmetric_group_s3() -> Result<FinCategory> {
    let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];
    let names: Vec<String> = perms
        .iter()
        .map(|p| format!("p{}{}{}", p[0], p[1], p[2]))
        .collect();
    let mul = |x: usize, y: usize| {
        let c = [perms[x][perms[y][0]], perms[x][perms[y][1]], perms[x][perms[y][2]]];
        perms.iter().position(|p| *p == c).expect("closed")
    };
    group_delooping("S3", &names, 0, mul)
}

pub fn z2() -> FinCommMonoid {
    FinCommMonoid::from_fn("Z2", vec!["e".into(), "g".into()], 0, |x, y| (x + y) % 2)
}

pub fn z3() -> FinCommMonoid {
    FinCommMonoid::cyclic("Z3", 3)
}

/// Negation and the trivial action of `Z/2` on `Z/3`, keyed by the
/// indexing names used in the example file.
pub fn z2_actions_on_z3() -> [(&'static str, BTreeMap<String, MonoidHom>); 2] {
    let a = Arc::new(z3());
    let hom = |map: Vec<usize>| MonoidHom {
        source: a.clone(),
        target: a.clone(),
        map,
    };
    let act = |g: Vec<usize>| BTreeMap::from([("e".to_string(), hom(vec![0, 1, 2])), ("g".to_string(), hom(g))]);
    [("Neg", act(vec![0, 2, 1])), ("Triv", act(vec![0, 1, 2]))]
}

/// Counts maps `G → End(A)` that are actions by automorphisms, by trying
/// every assignment of a bijection of `A` to every element of `G`.
pub fn count_actions_brute_force(g: &FinCommMonoid, a: &FinCommMonoid) -> usize {
    let perms = permutations(a.len());
    let a_arc = Arc::new(a.clone());
    let mut count = 0;
    let mut choice = vec![0; g.len()];
    loop {
        let action: BTreeMap<String, MonoidHom> = g
            .elements
            .iter()
            .zip(&choice)
            .map(|(e, &c)| {
                (
                    e.clone(),
                    MonoidHom {
                        source: a_arc.clone(),
                        target: a_arc.clone(),
                        map: perms[c].clone(),
                    },
                )
            })
            .collect();
        if check_action(g, a, &action).is_ok() {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == choice.len() {
                return count;
            }
            choice[i] += 1;
            if choice[i] < perms.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn semidirect_z2_z3() -> Result<GalleryResult> {
    let (g, a) = (z2(), z3());
    let mut out = GalleryResult::new("semidirect-z2-z3");
    for (label, action) in z2_actions_on_z3() {
        let r = semidirect_named(label, &g, &a, &action)?;
        out.verdicts.extend(r.verdicts);
        out.models.extend(r.models);
        for phi in r.workspace.indexings.into_values() {
            out.workspace.add_indexing(phi);
        }
    }
    out.workspace.add_monoid(g.clone()).add_monoid(a.clone());
    let s3 = Arc::new(symmetric_group_s3()?);
    let neg = Arc::new(out.models[0].square_category());
    out.check("Neg: square category is the delooping of S3", "find_isomorphism", find_isomorphism(&neg, &s3).is_some(), "");
    let triv = Arc::new(out.models[1].square_category());
    let z6 = Arc::new(FinCategory::delooping(&FinCommMonoid::cyclic("Z6", 6), "pt"));
    out.check("Triv: square category is the delooping of Z6", "find_isomorphism", find_isomorphism(&triv, &z6).is_some(), "");
    let d = out.workspace.decorated["D"].clone();
    let found = enumerate_indexings(&d, Variance::Covariant, &mut SearchBudget::default())?.len();
    let oracle = count_actions_brute_force(&g, &a);
    out.check(
        "covariant indexings correspond to actions of Z2 on Z3",
        "enumerate_indexings",
        found == 2 && oracle == 2,
        format!("{found} indexings, {oracle} actions"),
    );
    Ok(out)
}

fn no_indexing_decoration(second_fiber_z2: bool) -> Result<DecoratedTwoCat> {
    let vertical = CategoryBuilder::new("Iso")
        .objects(&["p", "q"])
        .morphism("u", "p", "q")
        .morphism("v", "q", "p")
        .compose("v", "u", "id_p")
        .compose("u", "v", "id_q")
        .build()?;
    let mut b = TwoCategoryBuilder::new(if second_fiber_z2 { "TwoZ2" } else { "Z2AndTrivial" });
    b.zerocells(&["p", "q"])
        .twocell("s", "id_p", "id_p")
        .vcomp("s", "s", "1_id_p")
        .hcomp("s", "s", "1_id_p");
    if second_fiber_z2 {
        b.twocell("t", "id_q", "id_q")
            .vcomp("t", "t", "1_id_q")
            .hcomp("t", "t", "1_id_q");
    }
    Ok(DecoratedTwoCat {
        name: "D".into(),
        vertical,
        horizontal: b.build()?,
    })
}

/// Two isomorphic objects with non-isomorphic fibers admit no indexing in
/// either variance.
pub fn no_indexing_example() -> Result<GalleryResult> {
    let d = Arc::new(no_indexing_decoration(false)?);
    let mut out = GalleryResult::new("no-indexing");
    out.workspace.add_decorated(d.clone());
    for (variance, claim) in [
        (Variance::Covariant, "no indexing exists"),
        (Variance::Contravariant, "no opindexing exists"),
    ] {
        let n = enumerate_indexings(&d, variance, &mut SearchBudget::default())?.len();
        out.check(claim, "enumerate_indexings", n == 0, format!("{n} found"));
    }
    let modified = Arc::new(no_indexing_decoration(true)?);
    let n = enumerate_indexings(&modified, Variance::Covariant, &mut SearchBudget::default())?.len();
    out.check(
        "with isomorphic fibers an indexing exists",
        "enumerate_indexings",
        n >= 1,
        format!("{n} found"),
    );
    Ok(out)
}

fn trivial_pi2_decoration() -> Result<DecoratedTwoCat> {
    let vertical = CategoryBuilder::new("Bstar")
        .objects(&["x", "y", "z"])
        .morphism("f", "x", "y")
        .morphism("g", "y", "z")
        .morphism("gf", "x", "z")
        .morphism("k", "y", "y")
        .compose("g", "f", "gf")
        .compose("k", "k", "k")
        .compose("g", "k", "g")
        .compose("k", "f", "f")
        .build()?;
    let horizontal = TwoCategoryBuilder::new("B")
        .zerocells(&["x", "y", "z"])
        .onecell("e", "y", "y")
        .onecell("a", "x", "y")
        .onecell("b", "y", "z")
        .onecell("ba", "x", "z")
        .comp1("e", "e", "e")
        .comp1("e", "a", "a")
        .comp1("b", "e", "b")
        .comp1("b", "a", "ba")
        .twocell("eps", "e", "id_y")
        .hcomp("eps", "eps", "eps")
        .hcomp("eps", "1_e", "1_e")
        .hcomp("1_e", "eps", "1_e")
        .hcomp("eps", "1_a", "1_a")
        .hcomp("1_b", "eps", "1_b")
        .build()?;
    Ok(DecoratedTwoCat {
        name: "D".into(),
        vertical,
        horizontal,
    })
}

/// Several objects and 1-cells, every fiber trivial: one indexing, one
/// opindexing, and singleton sliding classes.
pub fn trivial_pi2_example() -> Result<GalleryResult> {
    let d = Arc::new(trivial_pi2_decoration()?);
    let mut out = GalleryResult::new("trivial-pi2");
    let trivial = d.fibers()?.iter().all(|f| f.monoid.len() == 1);
    out.check("every fiber is trivial", "pi2", trivial, String::new());
    for (variance, name) in [(Variance::Covariant, "Triv"), (Variance::Contravariant, "TrivOp")] {
        let found = enumerate_indexings(&d, variance, &mut SearchBudget::default())?;
        out.check(
            format!("exactly one {variance} indexing"),
            "enumerate_indexings",
            found.len() == 1,
            format!("{} found", found.len()),
        );
        let phi = Pi2Indexing::new(name, d.clone(), variance, BTreeMap::new())?;
        let m = out.check_model(&phi)?;
        let cp = CrossedProduct::new(&phi)?;
        let singletons = cp.class_sizes().values().all(|&n| n == 1);
        out.check(format!("{name}: sliding classes are singletons"), "CrossedProduct::class_sizes", singletons, String::new());
        out.workspace.add_indexing(phi);
        out.models.push(m);
    }
    Ok(out)
}

/// The free category `0 → 1 → 2` decorated by fibers `Z/2`, `Z/2` and the
/// trivial monoid, with only identity 1-cells.
pub fn free_length4_decoration() -> DecoratedTwoCat {
    let vertical = CategoryBuilder::new("Free012")
        .objects(&["0", "1", "2"])
        .morphism("alpha", "0", "1")
        .morphism("beta", "1", "2")
        .morphism("beta_alpha", "0", "2")
        .compose("beta", "alpha", "beta_alpha")
        .build()
        .expect("free category");
    let horizontal = TwoCategoryBuilder::new("B")
        .zerocells(&["0", "1", "2"])
        .twocell("m0", "id_0", "id_0")
        .vcomp("m0", "m0", "1_id_0")
        .hcomp("m0", "m0", "1_id_0")
        .twocell("m1", "id_1", "id_1")
        .vcomp("m1", "m1", "1_id_1")
        .hcomp("m1", "m1", "1_id_1")
        .build()
        .expect("2-category");
    DecoratedTwoCat {
        name: "D".into(),
        vertical,
        horizontal,
    }
}

pub const DESIGNATED_WORD: &str = "m0 U(alpha) m1 U(beta)";

/// The designated word needs four atoms in the free structure; in every
/// crossed product over the same decoration it needs at most three.
pub fn free_length4_example() -> Result<GalleryResult> {
    let d = Arc::new(free_length4_decoration());
    let mut out = GalleryResult::new("free-length4");
    out.workspace.add_decorated(d.clone());
    for (word, budget, expected) in [(DESIGNATED_WORD, 6, 4), ("U(alpha)", 6, 1), ("m0 U(alpha)", 6, 2)] {
        let w = parse_word(&d, word)?;
        let f = min_factorization(&d, &w, budget, &mut SearchBudget::default())?;
        out.check(
            format!("`{word}` needs {expected} atom{}", if expected == 1 { "" } else { "s" }),
            "min_factorization_length",
            f.length == expected,
            format!(
                "length {} at budget {budget}, {} words examined, congruence: merge rules only",
                f.length, f.examined
            ),
        );
    }
    let found = enumerate_indexings(&d, Variance::Covariant, &mut SearchBudget::default())?;
    out.check(
        "covariant indexings enumerated",
        "enumerate_indexings",
        true,
        format!("{} found", found.len()),
    );
    let w = parse_word(&d, DESIGNATED_WORD)?;
    let mut worst = 0;
    for phi in &found {
        let cp = CrossedProduct::new(phi)?;
        worst = worst.max(crossprod_factorization_length(&cp, &w)?);
    }
    out.check(
        "in every crossed product the word needs at most 3 atoms",
        "crossprod_factorization_length",
        !found.is_empty() && worst <= 3,
        format!("maximum {worst} over {} indexings", found.len()),
    );
    Ok(out)
}

/// `π₂` of every 0-cell of every 2-category in the workspace.
pub fn check_fibers(ws: &Workspace) -> Vec<(String, String, Result<usize>)> {
    let mut out = Vec::new();
    for (name, b) in &ws.twocats {
        for (z, zname) in b.zerocells.iter().enumerate() {
            out.push((name.clone(), zname.clone(), pi2(b, z).map(|f| f.monoid.len())));
        }
    }
    out
}

#[cfg(test)]
mod tests;
