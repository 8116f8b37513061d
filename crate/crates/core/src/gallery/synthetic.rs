//! Small double categories written down directly rather than built from an
//! indexing, used to exercise the filtration.

use crate::crossprod::{DoubleCatModel, Edge, SquareEntry, SquareShape};
use crate::finite::category::{CategoryBuilder, FinCategory};

/// Objects `x, m, m', y` with two factorizations `h = f2 f1 = g2 g1`.
/// Squares over a morphism `k` are `(k, a, b)` with `a ∈ Z/2` present when
/// `k` passes through `m` and `b ∈ Z/2` when it passes through `m'`; both
/// compositions add coordinates and only identity 1-cells exist.
///
/// `(h, 1, 1)` is a horizontal composite of `(h, 1, 0)` and `(h, 0, 1)` but
/// no vertical word of globular and unit squares reaches it, so it is
/// marked `1 + ½` and the length is 2.
pub fn length_two_model() -> DoubleCatModel {
    let c = CategoryBuilder::new("Diamond")
        .objects(&["x", "m", "m'", "y"])
        .morphism("f1", "x", "m")
        .morphism("f2", "m", "y")
        .morphism("g1", "x", "m'")
        .morphism("g2", "m'", "y")
        .morphism("h", "x", "y")
        .compose("f2", "f1", "h")
        .compose("g2", "g1", "h")
        .build()
        .expect("diamond category");
    let through = |k: usize, obj: &str| -> bool {
        let name = c.morphism_name(k);
        match obj {
            "m" => ["id_m", "f1", "f2", "h"].contains(&name),
            _ => ["id_m'", "g1", "g2", "h"].contains(&name),
        }
    };
    let mut coords = Vec::new();
    for k in 0..c.morphism_count() {
        for a in 0..if through(k, "m") { 2 } else { 1 } {
            for b in 0..if through(k, "m'") { 2 } else { 1 } {
                coords.push((k, a, b));
            }
        }
    }
    let find = |k: usize, a: usize, b: usize| coords.iter().position(|&t| t == (k, a, b)).expect("coordinate slot");
    let n = coords.len();
    let mut vcomp = vec![None; n * n];
    let mut hcomp = vec![None; n * n];
    for (i, &(k2, a2, b2)) in coords.iter().enumerate() {
        for (j, &(k1, a1, b1)) in coords.iter().enumerate() {
            if let Some(k) = c.compose(k2, k1).filter(|_| c.composable(k2, k1)) {
                vcomp[i * n + j] = Some(find(k, (a1 + a2) % 2, (b1 + b2) % 2));
            }
            if k1 == k2 {
                hcomp[i * n + j] = Some(find(k1, (a1 + a2) % 2, (b1 + b2) % 2));
            }
        }
    }
    let squares = coords
        .iter()
        .map(|&(k, a, b)| SquareEntry {
            name: format!("{}|{},{}", c.morphism_name(k), a, b),
            shape: SquareShape::Other,
            top: c.source(k),
            bottom: c.target(k),
            left: k,
            right: k,
        })
        .collect();
    discrete_edge_model("Diamond", &c, squares, vcomp, hcomp, |k| find(k, 0, 0))
}

fn discrete_edge_model(
    name: &str,
    c: &FinCategory,
    squares: Vec<SquareEntry>,
    vcomp: Vec<Option<usize>>,
    hcomp: Vec<Option<usize>>,
    unit: impl Fn(usize) -> usize,
) -> DoubleCatModel {
    let no = c.objects.len();
    DoubleCatModel {
        name: name.to_string(),
        decorated_name: name.to_string(),
        horizontal_name: format!("{name}H"),
        objects: c.clone(),
        zerocell_order: (0..no).collect(),
        edges: c
            .objects
            .iter()
            .enumerate()
            .map(|(i, o)| Edge {
                name: format!("e_{o}"),
                source: i,
                target: i,
            })
            .collect(),
        edge_identity: (0..no).collect(),
        edge_comp: (0..no * no).map(|i| (i / no == i % no).then_some(i % no)).collect(),
        square_identity: c.identities.iter().map(|&id| unit(id)).collect(),
        unit: (0..c.morphism_count()).map(unit).collect(),
        squares,
        vcomp,
        hcomp,
    }
}

/// Adds a square `Z` over the longest frame of [`length_two_model`] that
/// absorbs everything it composes with. Nothing generated reaches it.
pub fn with_orphan(m: &DoubleCatModel) -> DoubleCatModel {
    let h = m.objects.morphism("h").expect("diamond model");
    let n = m.squares.len();
    let z = n;
    let mut out = m.clone();
    let top = m.objects.source(h);
    let bottom = m.objects.target(h);
    out.squares.push(SquareEntry {
        name: "Z".into(),
        shape: SquareShape::Other,
        top,
        bottom,
        left: h,
        right: h,
    });
    let size = n + 1;
    let resize = |table: &[Option<usize>]| {
        let mut t = vec![None; size * size];
        for i in 0..n {
            for j in 0..n {
                t[i * size + j] = table[i * n + j];
            }
        }
        t
    };
    out.vcomp = resize(&m.vcomp);
    out.hcomp = resize(&m.hcomp);
    for s in 0..size {
        let e = &out.squares[s];
        if e.bottom == top {
            out.vcomp[z * size + s] = Some(z);
        }
        if e.top == bottom {
            out.vcomp[s * size + z] = Some(z);
        }
        if e.left == h {
            out.hcomp[z * size + s] = Some(z);
        }
        if e.right == h {
            out.hcomp[s * size + z] = Some(z);
        }
    }
    out.name = format!("{}+Z", m.name);
    out
}
