use super::*;
use crate::indexing::validate_indexing;

const RUNNING: &str = "\
monoid Z3 { elements 0 1 2; unit 0; op { (0,0)->0; (0,1)->1; (0,2)->2; (1,0)->1; (1,1)->2; (1,2)->0; (2,0)->2; (2,1)->0; (2,2)->1; } }
twocat B2OmegaZ3 {
  obj pt; id2 id_pt = 0;
  cell2 1: id_pt=>id_pt; cell2 2: id_pt=>id_pt;
  vcomp { (1,1)->2; (1,2)->0; (2,1)->0; (2,2)->1; };
  hcomp { (1,1)->2, (1,2)->0, (2,1)->0, (2,2)->1 };
}
category OmegaZ2 { obj pt; id pt = e; mor g: pt->pt; comp { (g,g)->e; } }
decorated D = (OmegaZ2, B2OmegaZ3);
indexing Neg on D { g -> {0->0,1->2,2->1} }
";

fn err(text: &str) -> ParseError {
    parse_spec(text).unwrap_err()
}

#[test]
fn running_instance_parses() {
    let ws = parse_spec(RUNNING).unwrap();
    assert_eq!(ws.indexings.len(), 1);
    let phi = ws.indexing("Neg").unwrap();
    assert!(validate_indexing(phi).unwrap().is_empty());
    assert_eq!(phi.action[1].map, vec![0, 2, 1]);
    assert_eq!(ws.span(DeclKind::Category, "OmegaZ2"), Some(Span { line: 8, col: 10 }));
}

#[test]
fn empty_file_is_an_empty_workspace() {
    assert!(parse_spec("").unwrap().is_empty());
    assert!(parse_spec("  # nothing here\n").unwrap().is_empty());
}

#[test]
fn round_trip_is_identity_and_deterministic() {
    let ws = parse_spec(RUNNING).unwrap();
    let text = serialize(&ws);
    let back = parse_spec(&text).unwrap();
    assert_eq!(back, ws);
    assert_eq!(serialize(&back), text);
    assert!(!text.contains('\r'));
    assert!(text.starts_with("monoid Z3"));
}

#[test]
fn crlf_input() {
    let ws = parse_spec(&RUNNING.replace('\n', "\r\n")).unwrap();
    assert_eq!(ws, parse_spec(RUNNING).unwrap());
}

#[test]
fn unresolved_reference_points_at_the_use() {
    let e = err("decorated D = (C, B);");
    assert_eq!(e.kind, ParseErrorKind::UnresolvedReference);
    assert_eq!(e.span, Span { line: 1, col: 16 });
    let e = err("category C { obj a;\n mor f: a->b; }");
    assert_eq!(e.kind, ParseErrorKind::UnresolvedReference);
    assert_eq!(e.span, Span { line: 2, col: 12 });
}

#[test]
fn missing_composite() {
    let e = err("category C { obj a; mor f: a->a; }");
    assert_eq!(e.kind, ParseErrorKind::MissingEntry);
    assert!(e.message.contains("(f, f)"), "{e}");
    let e = err("monoid M { elements a b; unit a; op { (a,a)->a; } }");
    assert_eq!(e.kind, ParseErrorKind::MissingEntry);
}

#[test]
fn duplicates() {
    let e = err("category C { obj a a; }");
    assert_eq!(e.kind, ParseErrorKind::DuplicateName);
    assert_eq!(e.span, Span { line: 1, col: 20 });
    let e = err("category C { obj a; }\ncategory C { obj b; }");
    assert_eq!(e.kind, ParseErrorKind::DuplicateName);
    assert_eq!(e.span.line, 2);
    let e = err("category C { obj a; mor id_a: a->a; }");
    assert_eq!(e.kind, ParseErrorKind::DuplicateName);
}

#[test]
fn fiber_mismatch() {
    let text = RUNNING.replace("2->1} }", "2->7} }");
    let e = err(&text);
    assert_eq!(e.kind, ParseErrorKind::FiberMismatch);
    assert_eq!(e.span.line, 10);
}

#[test]
fn syntax_errors_carry_expectations() {
    let e = err("category C { obj a; mor f a->a; }");
    assert_eq!(e.kind, ParseErrorKind::Syntax);
    assert_eq!(e.expected, vec!["`:`".to_string()]);
    assert_eq!(e.span, Span { line: 1, col: 27 });
    let e = err("widget W {}");
    assert_eq!(e.expected.len(), 5);
    let e = err("category C { obj a;");
    assert_eq!(e.kind, ParseErrorKind::Syntax);
    assert!(e.message.contains("end of input"));
}

#[test]
fn composites_must_respect_boundaries() {
    let e = err("category C { obj a b; mor f: a->b; comp { (f,f)->f; } }");
    assert_eq!(e.kind, ParseErrorKind::Semantic);
}

#[test]
fn opindexing_and_omitted_forced_homs() {
    let text = "\
category A { obj x y; mor f: x->y; }
twocat B { obj x y; cell2 t: id_x=>id_x; vcomp { (t,t)->1_id_x; } hcomp { (t,t)->1_id_x; } }
decorated D = (A, B);
indexing P on D { }
indexing Q on D op { }
";
    let ws = parse_spec(text).unwrap();
    assert_eq!(ws.indexings["Q"].variance, crate::indexing::Variance::Contravariant);
    let out = serialize(&ws);
    assert!(out.contains("indexing Q on D op {\n}"), "{out}");
    assert_eq!(parse_spec(&out).unwrap(), ws);
}
