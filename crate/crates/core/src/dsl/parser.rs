use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use super::lexer::{tokenize, Tok, Token};
use super::{DeclKind, ParseError, ParseErrorKind, Span, Workspace};
use crate::finite::category::{CategoryBuilder, FinCategory};
use crate::finite::monoid::{FinCommMonoid, MonoidHom};
use crate::indexing::{Pi2Indexing, Variance};
use crate::twocat::{validate_decoration, DecoratedTwoCat, Fin2Category, TwoCategoryBuilder};

type PResult<T> = std::result::Result<T, ParseError>;

const BLOCKS: [&str; 5] = ["monoid", "category", "twocat", "decorated", "indexing"];

#[derive(Debug, Clone)]
struct Name {
    text: String,
    span: Span,
}

type Entry = (Name, Name, Name);

fn error(kind: ParseErrorKind, span: Span, message: impl Into<String>) -> ParseError {
    ParseError {
        kind,
        span,
        expected: Vec::new(),
        message: message.into(),
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let t = self.peek();
        ParseError {
            kind: ParseErrorKind::Syntax,
            span: t.span,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            message: format!("unexpected {}, expected {}", t.tok.describe(), expected.join(" or ")),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if &self.peek().tok == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<Span> {
        if self.peek().tok == tok {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&[&tok.describe()]))
        }
    }

    fn name(&mut self) -> PResult<Name> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let text = s.clone();
                let span = self.bump().span;
                Ok(Name { text, span })
            }
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    fn keyword(&mut self, allowed: &[&str]) -> PResult<Name> {
        match &self.peek().tok {
            Tok::Ident(s) if allowed.contains(&s.as_str()) => self.name(),
            _ => {
                let quoted: Vec<String> = allowed.iter().map(|k| format!("`{k}`")).collect();
                let refs: Vec<&str> = quoted.iter().map(|s| s.as_str()).collect();
                Err(self.unexpected(&refs))
            }
        }
    }

    fn separators(&mut self) {
        while self.eat(&Tok::Semi) || self.eat(&Tok::Comma) {}
    }

    /// `{ (a,b)->c; ... }` followed by an optional `;`.
    fn table(&mut self) -> PResult<Vec<Entry>> {
        self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        loop {
            self.separators();
            if self.eat(&Tok::RBrace) {
                break;
            }
            if self.peek().tok != Tok::LParen {
                return Err(self.unexpected(&["`(`", "`}`"]));
            }
            self.bump();
            let a = self.name()?;
            self.expect(Tok::Comma)?;
            let b = self.name()?;
            self.expect(Tok::RParen)?;
            self.expect(Tok::Arrow)?;
            let c = self.name()?;
            out.push((a, b, c));
            if !matches!(self.peek().tok, Tok::Semi | Tok::Comma | Tok::RBrace) {
                return Err(self.unexpected(&["`;`", "`,`", "`}`"]));
            }
        }
        self.eat(&Tok::Semi);
        Ok(out)
    }

    /// `{ x->y; ... }` followed by an optional separator.
    fn map(&mut self) -> PResult<Vec<(Name, Name)>> {
        self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        loop {
            self.separators();
            if self.eat(&Tok::RBrace) {
                break;
            }
            let x = self.name()?;
            self.expect(Tok::Arrow)?;
            let y = self.name()?;
            out.push((x, y));
            if !matches!(self.peek().tok, Tok::Semi | Tok::Comma | Tok::RBrace) {
                return Err(self.unexpected(&["`;`", "`,`", "`}`"]));
            }
        }
        Ok(out)
    }

    /// Identifiers up to `;`.
    fn name_list(&mut self) -> PResult<Vec<Name>> {
        let mut out = vec![self.name()?];
        while !self.eat(&Tok::Semi) {
            if matches!(self.peek().tok, Tok::Ident(_)) {
                out.push(self.name()?);
            } else {
                return Err(self.unexpected(&["identifier", "`;`"]));
            }
        }
        Ok(out)
    }

    /// `name = alias;`
    fn alias(&mut self) -> PResult<(Name, Name)> {
        let target = self.name()?;
        self.expect(Tok::Eq)?;
        let alias = self.name()?;
        self.expect(Tok::Semi)?;
        Ok((target, alias))
    }

    /// `name: a -> b;` or `name: a => b;`
    fn arrow_decl(&mut self, arrow: Tok) -> PResult<Entry> {
        let name = self.name()?;
        self.expect(Tok::Colon)?;
        let s = self.name()?;
        self.expect(arrow)?;
        let t = self.name()?;
        self.expect(Tok::Semi)?;
        Ok((name, s, t))
    }
}

/// Tracks declared names of one sort and reports duplicates and unresolved
/// references at their source positions.
struct Scope<'a> {
    what: &'a str,
    names: HashMap<String, Span>,
}

impl<'a> Scope<'a> {
    fn new(what: &'a str) -> Self {
        Self {
            what,
            names: HashMap::new(),
        }
    }

    fn declare(&mut self, n: &Name) -> PResult<()> {
        if let Some(first) = self.names.insert(n.text.clone(), n.span) {
            return Err(error(
                ParseErrorKind::DuplicateName,
                n.span,
                format!("{} `{}` already declared at {first}", self.what, n.text),
            ));
        }
        Ok(())
    }

    fn resolve(&self, n: &Name) -> PResult<()> {
        if self.names.contains_key(&n.text) {
            Ok(())
        } else {
            Err(error(
                ParseErrorKind::UnresolvedReference,
                n.span,
                format!("unknown {} `{}`", self.what, n.text),
            ))
        }
    }
}

fn check_table(entries: &[Entry], args: &Scope, results: &Scope, table: &str) -> PResult<()> {
    let mut seen = HashSet::new();
    for (a, b, c) in entries {
        args.resolve(a)?;
        args.resolve(b)?;
        results.resolve(c)?;
        if !seen.insert((a.text.clone(), b.text.clone())) {
            return Err(error(
                ParseErrorKind::DuplicateName,
                a.span,
                format!("{table} entry ({}, {}) given twice", a.text, b.text),
            ));
        }
    }
    Ok(())
}

fn missing(span: Span, block: &str, table: &str, second: &str, first: &str) -> ParseError {
    error(
        ParseErrorKind::MissingEntry,
        span,
        format!("{block}: {table} has no entry for ({second}, {first})"),
    )
}

/// Checks every composite entry against the boundaries of its arguments.
fn check_boundaries<F>(entries: &[Entry], table: &str, mut ok: F) -> PResult<()>
where
    F: FnMut(&str, &str, &str) -> Option<String>,
{
    for (a, b, c) in entries {
        if let Some(why) = ok(&a.text, &b.text, &c.text) {
            return Err(error(
                ParseErrorKind::Semantic,
                a.span,
                format!("{table} entry ({}, {})->{}: {why}", a.text, b.text, c.text),
            ));
        }
    }
    Ok(())
}

fn monoid_block(p: &mut Parser, name: &Name) -> PResult<FinCommMonoid> {
    p.expect(Tok::LBrace)?;
    let mut elements = Scope::new("element");
    let mut order: Vec<Name> = Vec::new();
    let mut unit: Option<Name> = None;
    let mut op = Vec::new();
    while !p.eat(&Tok::RBrace) {
        let kw = p.keyword(&["elements", "unit", "op", "}"])?;
        match kw.text.as_str() {
            "elements" => {
                for n in p.name_list()? {
                    elements.declare(&n)?;
                    order.push(n);
                }
            }
            "unit" => {
                let u = p.name()?;
                p.expect(Tok::Semi)?;
                unit = Some(u);
            }
            _ => op.extend(p.table()?),
        }
    }
    let unit = unit.ok_or_else(|| error(ParseErrorKind::MissingEntry, name.span, format!("monoid {}: no unit", name.text)))?;
    elements.resolve(&unit)?;
    check_table(&op, &elements, &elements, "op")?;
    let names: Vec<&str> = order.iter().map(|n| n.text.as_str()).collect();
    FinCommMonoid::from_entries(
        &name.text,
        &names,
        &unit.text,
        op.iter().map(|(a, b, c)| (a.text.as_str(), b.text.as_str(), c.text.as_str())),
    )
    .map_err(|e| error(ParseErrorKind::MissingEntry, name.span, format!("monoid {}: {e}", name.text)))
}

fn category_block(p: &mut Parser, name: &Name) -> PResult<FinCategory> {
    p.expect(Tok::LBrace)?;
    let mut objects = Scope::new("object");
    let mut object_order = Vec::new();
    let mut aliases: Vec<(Name, Name)> = Vec::new();
    let mut morphisms: Vec<Entry> = Vec::new();
    let mut comp = Vec::new();
    while !p.eat(&Tok::RBrace) {
        let kw = p.keyword(&["obj", "id", "mor", "comp", "}"])?;
        match kw.text.as_str() {
            "obj" => {
                for n in p.name_list()? {
                    objects.declare(&n)?;
                    object_order.push(n);
                }
            }
            "id" => aliases.push(p.alias()?),
            "mor" => morphisms.push(p.arrow_decl(Tok::Arrow)?),
            _ => comp.extend(p.table()?),
        }
    }
    let mut mors = Scope::new("morphism");
    let mut alias_of: HashMap<String, String> = HashMap::new();
    for (obj, alias) in &aliases {
        objects.resolve(obj)?;
        if alias_of.insert(obj.text.clone(), alias.text.clone()).is_some() {
            return Err(error(ParseErrorKind::DuplicateName, obj.span, format!("identity of `{}` named twice", obj.text)));
        }
    }
    for o in &object_order {
        let id = alias_of.get(&o.text).cloned().unwrap_or_else(|| format!("id_{}", o.text));
        let span = aliases.iter().find(|(x, _)| x.text == o.text).map_or(o.span, |(_, a)| a.span);
        mors.declare(&Name { text: id, span })?;
    }
    for (m, s, t) in &morphisms {
        mors.declare(m)?;
        objects.resolve(s)?;
        objects.resolve(t)?;
    }
    check_table(&comp, &mors, &mors, "comp")?;

    let mut b = CategoryBuilder::new(&name.text);
    for o in &object_order {
        b.object(&o.text);
    }
    for (o, a) in &aliases {
        b.identity_name(&o.text, &a.text);
    }
    for (m, s, t) in &morphisms {
        b.morphism(&m.text, &s.text, &t.text);
    }
    for (g, f, h) in &comp {
        b.compose(&g.text, &f.text, &h.text);
    }
    let c = b
        .build()
        .map_err(|e| error(ParseErrorKind::Semantic, name.span, format!("category {}: {e}", name.text)))?;
    check_boundaries(&comp, "comp", |g, f, h| {
        let (g, f, h) = (c.morphism(g).ok()?, c.morphism(f).ok()?, c.morphism(h).ok()?);
        if c.target(f) != c.source(g) {
            Some("not composable".into())
        } else if c.source(h) != c.source(f) || c.target(h) != c.target(g) {
            Some("result has the wrong boundary".into())
        } else {
            None
        }
    })?;
    for (g, f) in c.composable_pairs() {
        if c.compose(g, f).is_none() {
            return Err(missing(name.span, &name.text, "comp", c.morphism_name(g), c.morphism_name(f)));
        }
    }
    Ok(c)
}

fn twocat_block(p: &mut Parser, name: &Name) -> PResult<Fin2Category> {
    p.expect(Tok::LBrace)?;
    let mut zero = Scope::new("0-cell");
    let mut zero_order = Vec::new();
    let mut id1: Vec<(Name, Name)> = Vec::new();
    let mut id2: Vec<(Name, Name)> = Vec::new();
    let mut cells1: Vec<Entry> = Vec::new();
    let mut cells2: Vec<Entry> = Vec::new();
    let (mut comp1, mut vcomp, mut hcomp) = (Vec::new(), Vec::new(), Vec::new());
    while !p.eat(&Tok::RBrace) {
        let kw = p.keyword(&["obj", "id1", "cell1", "comp1", "id2", "cell2", "vcomp", "hcomp", "}"])?;
        match kw.text.as_str() {
            "obj" => {
                for n in p.name_list()? {
                    zero.declare(&n)?;
                    zero_order.push(n);
                }
            }
            "id1" => id1.push(p.alias()?),
            "id2" => id2.push(p.alias()?),
            "cell1" => cells1.push(p.arrow_decl(Tok::Arrow)?),
            "cell2" => cells2.push(p.arrow_decl(Tok::DoubleArrow)?),
            "comp1" => comp1.extend(p.table()?),
            "vcomp" => vcomp.extend(p.table()?),
            _ => hcomp.extend(p.table()?),
        }
    }
    let mut ones = Scope::new("1-cell");
    let mut twos = Scope::new("2-cell");
    let alias_map = |aliases: &[(Name, Name)], scope: &Scope| -> PResult<HashMap<String, Name>> {
        let mut out = HashMap::new();
        for (x, a) in aliases {
            scope.resolve(x)?;
            if out.insert(x.text.clone(), a.clone()).is_some() {
                return Err(error(ParseErrorKind::DuplicateName, x.span, format!("identity of `{}` named twice", x.text)));
            }
        }
        Ok(out)
    };
    let id1_of = alias_map(&id1, &zero)?;
    for z in &zero_order {
        ones.declare(id1_of.get(&z.text).unwrap_or(&Name {
            text: format!("id_{}", z.text),
            span: z.span,
        }))?;
    }
    for (c, s, t) in &cells1 {
        ones.declare(c)?;
        zero.resolve(s)?;
        zero.resolve(t)?;
    }
    let id2_of = alias_map(&id2, &ones)?;
    let one_names: Vec<Name> = zero_order
        .iter()
        .map(|z| {
            id1_of.get(&z.text).cloned().unwrap_or(Name {
                text: format!("id_{}", z.text),
                span: z.span,
            })
        })
        .chain(cells1.iter().map(|(c, _, _)| c.clone()))
        .collect();
    for o in &one_names {
        twos.declare(id2_of.get(&o.text).unwrap_or(&Name {
            text: format!("1_{}", o.text),
            span: o.span,
        }))?;
    }
    for (c, s, t) in &cells2 {
        twos.declare(c)?;
        ones.resolve(s)?;
        ones.resolve(t)?;
    }
    check_table(&comp1, &ones, &ones, "comp1")?;
    check_table(&vcomp, &twos, &twos, "vcomp")?;
    check_table(&hcomp, &twos, &twos, "hcomp")?;

    let mut b = TwoCategoryBuilder::new(&name.text);
    for z in &zero_order {
        b.zerocell(&z.text);
    }
    for (z, a) in &id1 {
        b.id1_name(&z.text, &a.text);
    }
    for (c, s, t) in &cells1 {
        b.onecell(&c.text, &s.text, &t.text);
    }
    for (o, a) in &id2 {
        b.id2_name(&o.text, &a.text);
    }
    for (c, s, t) in &cells2 {
        b.twocell(&c.text, &s.text, &t.text);
    }
    for (x, y, z) in &comp1 {
        b.comp1(&x.text, &y.text, &z.text);
    }
    for (x, y, z) in &vcomp {
        b.vcomp(&x.text, &y.text, &z.text);
    }
    for (x, y, z) in &hcomp {
        b.hcomp(&x.text, &y.text, &z.text);
    }
    let t = b
        .build()
        .map_err(|e| error(ParseErrorKind::Semantic, name.span, format!("twocat {}: {e}", name.text)))?;
    let one = |n: &str| t.onecell(n).ok();
    let two = |n: &str| t.twocell(n).ok();
    check_boundaries(&comp1, "comp1", |g, f, h| {
        let (g, f, h) = (&t.onecells[one(g)?], &t.onecells[one(f)?], &t.onecells[one(h)?]);
        if f.target != g.source {
            Some("not composable".into())
        } else if h.source != f.source || h.target != g.target {
            Some("result has the wrong boundary".into())
        } else {
            None
        }
    })?;
    check_boundaries(&vcomp, "vcomp", |y, x, z| {
        let (y, x, z) = (&t.twocells[two(y)?], &t.twocells[two(x)?], &t.twocells[two(z)?]);
        if x.target != y.source {
            Some("not composable".into())
        } else if z.source != x.source || z.target != y.target {
            Some("result has the wrong boundary".into())
        } else {
            None
        }
    })?;
    check_boundaries(&hcomp, "hcomp", |y, x, z| {
        let (yi, xi, zi) = (two(y)?, two(x)?, two(z)?);
        if !t.h_composable(yi, xi) {
            return Some("not composable".into());
        }
        let (y, x, z) = (&t.twocells[yi], &t.twocells[xi], &t.twocells[zi]);
        if t.comp1(y.source, x.source) != Some(z.source) || t.comp1(y.target, x.target) != Some(z.target) {
            Some("result has the wrong boundary".into())
        } else {
            None
        }
    })?;
    let n1 = t.onecells.len();
    for g in 0..n1 {
        for f in 0..n1 {
            if t.onecells[f].target == t.onecells[g].source && t.comp1(g, f).is_none() {
                return Err(missing(name.span, &name.text, "comp1", &t.onecells[g].name, &t.onecells[f].name));
            }
        }
    }
    let n2 = t.twocells.len();
    for y in 0..n2 {
        for x in 0..n2 {
            if t.v_composable(y, x) && t.vcomp(y, x).is_none() {
                return Err(missing(name.span, &name.text, "vcomp", &t.twocells[y].name, &t.twocells[x].name));
            }
            if t.h_composable(y, x) && t.hcomp(y, x).is_none() {
                return Err(missing(name.span, &name.text, "hcomp", &t.twocells[y].name, &t.twocells[x].name));
            }
        }
    }
    Ok(t)
}

fn decorated_block(p: &mut Parser, ws: &Workspace, name: &Name) -> PResult<DecoratedTwoCat> {
    p.expect(Tok::Eq)?;
    p.expect(Tok::LParen)?;
    let c = p.name()?;
    p.expect(Tok::Comma)?;
    let b = p.name()?;
    p.expect(Tok::RParen)?;
    p.expect(Tok::Semi)?;
    let unresolved = |n: &Name, what: &str| {
        error(ParseErrorKind::UnresolvedReference, n.span, format!("unknown {what} `{}`", n.text))
    };
    let vertical = ws.categories.get(&c.text).ok_or_else(|| unresolved(&c, "category"))?;
    let horizontal = ws.twocats.get(&b.text).ok_or_else(|| unresolved(&b, "twocat"))?;
    let d = DecoratedTwoCat {
        name: name.text.clone(),
        vertical: vertical.clone(),
        horizontal: horizontal.clone(),
    };
    validate_decoration(&d).map_err(|e| error(ParseErrorKind::Semantic, c.span, e.to_string()))?;
    Ok(d)
}

fn indexing_block(p: &mut Parser, ws: &Workspace, name: &Name) -> PResult<Pi2Indexing> {
    p.keyword(&["on"])?;
    let dn = p.name()?;
    let variance = if p.peek().tok == Tok::Ident("op".into()) {
        p.bump();
        Variance::Contravariant
    } else {
        Variance::Covariant
    };
    p.expect(Tok::LBrace)?;
    let mut entries: Vec<(Name, Vec<(Name, Name)>)> = Vec::new();
    loop {
        p.separators();
        if p.eat(&Tok::RBrace) {
            break;
        }
        let f = p.name()?;
        p.expect(Tok::Arrow)?;
        let map = p.map()?;
        entries.push((f, map));
        if !matches!(p.peek().tok, Tok::Semi | Tok::Comma | Tok::RBrace) {
            return Err(p.unexpected(&["`;`", "`,`", "`}`"]));
        }
    }
    let d = ws
        .decorated
        .get(&dn.text)
        .ok_or_else(|| error(ParseErrorKind::UnresolvedReference, dn.span, format!("unknown decorated `{}`", dn.text)))?;
    let fibers = d
        .fibers()
        .map_err(|e| error(ParseErrorKind::Semantic, dn.span, e.to_string()))?;
    let c = &d.vertical;
    let mut homs = BTreeMap::new();
    for (f, map) in &entries {
        let fi = c.morphism(&f.text).map_err(|_| {
            error(ParseErrorKind::UnresolvedReference, f.span, format!("unknown morphism `{}` of {}", f.text, c.name))
        })?;
        let (s, t) = match variance {
            Variance::Covariant => (c.source(fi), c.target(fi)),
            Variance::Contravariant => (c.target(fi), c.source(fi)),
        };
        let (src, tgt) = (&fibers[s].monoid, &fibers[t].monoid);
        let mut images = vec![None; src.len()];
        for (x, y) in map {
            let fiber_error = |n: &Name, obj: usize| {
                error(
                    ParseErrorKind::FiberMismatch,
                    n.span,
                    format!("`{}` is not in the fiber of {}", n.text, c.objects[obj]),
                )
            };
            let xi = src.index_of(&x.text).ok_or_else(|| fiber_error(x, s))?;
            let yi = tgt.index_of(&y.text).ok_or_else(|| fiber_error(y, t))?;
            if images[xi].replace(yi).is_some() {
                return Err(error(ParseErrorKind::DuplicateName, x.span, format!("`{}` mapped twice", x.text)));
            }
        }
        let map = images
            .into_iter()
            .enumerate()
            .map(|(i, y)| {
                y.ok_or_else(|| {
                    error(
                        ParseErrorKind::MissingEntry,
                        f.span,
                        format!("{}: no image for `{}`", f.text, src.elements[i]),
                    )
                })
            })
            .collect::<PResult<Vec<_>>>()?;
        let hom = MonoidHom {
            source: src.clone(),
            target: tgt.clone(),
            map,
        };
        if homs.insert(f.text.clone(), hom).is_some() {
            return Err(error(ParseErrorKind::DuplicateName, f.span, format!("action of `{}` given twice", f.text)));
        }
    }
    Pi2Indexing::new(&name.text, d.clone(), variance, homs)
        .map_err(|e| error(ParseErrorKind::MissingEntry, name.span, format!("indexing {}: {e}", name.text)))
}

/// Parses a whole file. Declarations may only refer to earlier ones.
pub fn parse_spec(text: &str) -> PResult<Workspace> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    let mut ws = Workspace::new();
    while p.peek().tok != Tok::Eof {
        let kw = p.keyword(&BLOCKS)?;
        let name = p.name()?;
        let kind = match kw.text.as_str() {
            "monoid" => DeclKind::Monoid,
            "category" => DeclKind::Category,
            "twocat" => DeclKind::Twocat,
            "decorated" => DeclKind::Decorated,
            _ => DeclKind::Indexing,
        };
        if let Some(first) = ws.spans.get(&(kind, name.text.clone())) {
            return Err(error(
                ParseErrorKind::DuplicateName,
                name.span,
                format!("{kind} `{}` already declared at {first}", name.text),
            ));
        }
        match kind {
            DeclKind::Monoid => {
                let m = monoid_block(&mut p, &name)?;
                ws.monoids.insert(name.text.clone(), m);
            }
            DeclKind::Category => {
                let c = category_block(&mut p, &name)?;
                ws.categories.insert(name.text.clone(), c);
            }
            DeclKind::Twocat => {
                let t = twocat_block(&mut p, &name)?;
                ws.twocats.insert(name.text.clone(), t);
            }
            DeclKind::Decorated => {
                let d = decorated_block(&mut p, &ws, &name)?;
                ws.decorated.insert(name.text.clone(), Arc::new(d));
            }
            DeclKind::Indexing => {
                let phi = indexing_block(&mut p, &ws, &name)?;
                ws.indexings.insert(name.text.clone(), phi);
            }
        }
        ws.spans.insert((kind, name.text), name.span);
    }
    Ok(ws)
}
