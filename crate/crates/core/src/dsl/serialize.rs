use std::fmt::Write;

use super::Workspace;
use crate::finite::category::FinCategory;
use crate::finite::monoid::{FinCommMonoid, MonoidHom};
use crate::indexing::{Pi2Indexing, Variance};
use crate::twocat::Fin2Category;

/// Canonical text of a workspace: blocks grouped by kind and sorted by name,
/// table rows in index order, and every entry the parser would fill in on
/// its own left out. Always LF line endings.
pub fn serialize(ws: &Workspace) -> String {
    let mut blocks = Vec::new();
    blocks.extend(ws.monoids.values().map(monoid));
    blocks.extend(ws.categories.values().map(category));
    blocks.extend(ws.twocats.values().map(twocat));
    blocks.extend(
        ws.decorated
            .values()
            .map(|d| format!("decorated {} = ({}, {});\n", d.name, d.vertical.name, d.horizontal.name)),
    );
    blocks.extend(ws.indexings.values().map(indexing));
    blocks.join("\n")
}

fn table(out: &mut String, keyword: &str, rows: &[(String, String, String)]) {
    if rows.is_empty() {
        return;
    }
    let _ = writeln!(out, "  {keyword} {{");
    for (a, b, c) in rows {
        let _ = writeln!(out, "    ({a},{b})->{c};");
    }
    out.push_str("  }\n");
}

fn monoid(m: &FinCommMonoid) -> String {
    let mut out = format!("monoid {} {{\n", m.name);
    let _ = writeln!(out, "  elements {};", m.elements.join(" "));
    let _ = writeln!(out, "  unit {};", m.elements[m.unit]);
    let n = m.len();
    let rows: Vec<_> = (0..n * n)
        .map(|i| {
            (
                m.elements[i / n].clone(),
                m.elements[i % n].clone(),
                m.elements[m.op[i]].clone(),
            )
        })
        .collect();
    table(&mut out, "op", &rows);
    out.push_str("}\n");
    out
}

fn category(c: &FinCategory) -> String {
    let mut out = format!("category {} {{\n", c.name);
    if !c.objects.is_empty() {
        let _ = writeln!(out, "  obj {};", c.objects.join(" "));
    }
    for (a, &id) in c.identities.iter().enumerate() {
        if c.morphisms[id].name != format!("id_{}", c.objects[a]) {
            let _ = writeln!(out, "  id {} = {};", c.objects[a], c.morphisms[id].name);
        }
    }
    for (f, m) in c.morphisms.iter().enumerate() {
        if !c.is_identity(f) {
            let _ = writeln!(out, "  mor {}: {}->{};", m.name, c.objects[m.source], c.objects[m.target]);
        }
    }
    let mut rows = Vec::new();
    for (g, f) in c.composable_pairs() {
        let Some(h) = c.compose(g, f) else { continue };
        let auto = if c.is_identity(f) {
            Some(g)
        } else if c.is_identity(g) {
            Some(f)
        } else {
            None
        };
        if auto != Some(h) {
            rows.push((c.morphism_name(g).to_string(), c.morphism_name(f).to_string(), c.morphism_name(h).to_string()));
        }
    }
    table(&mut out, "comp", &rows);
    out.push_str("}\n");
    out
}

fn twocat(t: &Fin2Category) -> String {
    let mut out = format!("twocat {} {{\n", t.name);
    if !t.zerocells.is_empty() {
        let _ = writeln!(out, "  obj {};", t.zerocells.join(" "));
    }
    let ones = &t.onecells;
    let twos = &t.twocells;
    for (a, &id) in t.id1.iter().enumerate() {
        if ones[id].name != format!("id_{}", t.zerocells[a]) {
            let _ = writeln!(out, "  id1 {} = {};", t.zerocells[a], ones[id].name);
        }
    }
    let is_id1 = |f: usize| t.id1.contains(&f);
    for (f, c) in ones.iter().enumerate() {
        if !is_id1(f) {
            let _ = writeln!(out, "  cell1 {}: {}->{};", c.name, t.zerocells[c.source], t.zerocells[c.target]);
        }
    }
    let n1 = ones.len();
    let mut rows = Vec::new();
    for g in 0..n1 {
        for f in 0..n1 {
            if ones[f].target != ones[g].source {
                continue;
            }
            let Some(h) = t.comp1(g, f) else { continue };
            let auto = if f == t.id1[ones[g].source] {
                Some(g)
            } else if g == t.id1[ones[f].target] {
                Some(f)
            } else {
                None
            };
            if auto != Some(h) {
                rows.push((ones[g].name.clone(), ones[f].name.clone(), ones[h].name.clone()));
            }
        }
    }
    table(&mut out, "comp1", &rows);
    for (f, &id) in t.id2.iter().enumerate() {
        if twos[id].name != format!("1_{}", ones[f].name) {
            let _ = writeln!(out, "  id2 {} = {};", ones[f].name, twos[id].name);
        }
    }
    for (c, cell) in twos.iter().enumerate() {
        if !t.is_identity_cell(c) {
            let _ = writeln!(out, "  cell2 {}: {}=>{};", cell.name, ones[cell.source].name, ones[cell.target].name);
        }
    }
    let n2 = twos.len();
    let name = |c: usize| twos[c].name.clone();
    let mut vrows = Vec::new();
    let mut hrows = Vec::new();
    for y in 0..n2 {
        for x in 0..n2 {
            if let Some(z) = t.vcomp(y, x).filter(|_| t.v_composable(y, x)) {
                let auto = if x == t.id2[twos[y].source] {
                    Some(y)
                } else if y == t.id2[twos[x].target] {
                    Some(x)
                } else {
                    None
                };
                if auto != Some(z) {
                    vrows.push((name(y), name(x), name(z)));
                }
            }
            if let Some(z) = t.hcomp(y, x).filter(|_| t.h_composable(y, x)) {
                let unit_at = |a: usize| t.id2[t.id1[a]];
                let auto = if x == unit_at(t.cell_source0(y)) {
                    Some(y)
                } else if y == unit_at(t.cell_target0(x)) {
                    Some(x)
                } else if t.is_identity_cell(x) && t.is_identity_cell(y) {
                    t.comp1(twos[y].source, twos[x].source).map(|ba| t.id2[ba])
                } else {
                    None
                };
                if auto != Some(z) {
                    hrows.push((name(y), name(x), name(z)));
                }
            }
        }
    }
    table(&mut out, "vcomp", &vrows);
    table(&mut out, "hcomp", &hrows);
    out.push_str("}\n");
    out
}

fn indexing(phi: &Pi2Indexing) -> String {
    let op = match phi.variance {
        Variance::Covariant => "",
        Variance::Contravariant => " op",
    };
    let mut out = format!("indexing {} on {}{op} {{\n", phi.name, phi.base.name);
    let c = &phi.base.vertical;
    for (f, hom) in phi.action.iter().enumerate() {
        let (src, tgt) = phi.hom_fibers(f);
        let implied = if c.is_identity(f) {
            hom.is_identity()
        } else if src.monoid.len() == 1 || tgt.monoid.len() == 1 {
            *hom == MonoidHom::constant_unit(&src.monoid, &tgt.monoid)
        } else {
            false
        };
        if implied {
            continue;
        }
        let pairs: Vec<String> = hom
            .map
            .iter()
            .enumerate()
            .map(|(x, &y)| format!("{}->{}", hom.source.elements[x], hom.target.elements[y]))
            .collect();
        let _ = writeln!(out, "  {} -> {{ {} }};", c.morphism_name(f), pairs.join("; "));
    }
    out.push_str("}\n");
    out
}
