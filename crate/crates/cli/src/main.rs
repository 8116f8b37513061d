use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dct_core::crossprod::{build_crossprod, check_double_axioms, export_model, import_model, DoubleCatModel, ModelDocument};
use dct_core::dsl::{parse_spec, ParseError, Workspace};
use dct_core::filtration::{named_markings, vertical_filtration};
use dct_core::finite::{validate_category, validate_monoid};
use dct_core::freegg::{min_factorization, parse_word, DisplayWord};
use dct_core::gallery;
use dct_core::indexing::{enumerate_indexings, validate_indexing, Pi2Indexing, Variance};
use dct_core::search::{SearchBudget, DEFAULT_SEARCH_CAP};
use dct_core::twocat::{pi2, validate_decorated, validate_two_category};
use dct_core::{Error, ValidationReport};

#[derive(Parser)]
#[command(name = "dct", version, about = "Finite decorated 2-categories and their crossed-product double categories")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum VarianceArg {
    Co,
    Op,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a .dct file and check every declaration.
    Validate { file: PathBuf },
    /// Show pi2 of a 0-cell of a 2-category.
    Pi2 {
        file: PathBuf,
        #[arg(long)]
        twocat: String,
        #[arg(long)]
        object: String,
    },
    /// Enumerate all indexings (or opindexings) of a decorated 2-category.
    Indexings {
        file: PathBuf,
        #[arg(long)]
        decorated: String,
        #[arg(long, value_enum, default_value_t = VarianceArg::Co)]
        variance: VarianceArg,
        /// Maximum number of candidate assignments to try.
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Build the crossed product of an indexing and write it as JSON.
    Build {
        file: PathBuf,
        #[arg(long)]
        decorated: String,
        #[arg(long)]
        indexing: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the double category axioms of a model file.
    Axioms { model: PathBuf },
    /// Vertical filtration markings and length of a model file.
    Length { model: PathBuf },
    /// Minimal factorization length of a word of globular and unit atoms.
    Minfact {
        file: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long)]
        budget: usize,
        /// Needed when the file declares more than one decoration.
        #[arg(long)]
        decorated: Option<String>,
    },
    /// Run a gallery example.
    Example {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(gallery::NAMES))]
        name: String,
    },
}

enum Failure {
    Invalid(String, Value),
    Usage(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(..) => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string(), Value::Null)
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        let detail = serde_json::to_value(&e).unwrap_or(Value::Null);
        Failure::Invalid(format!("parse error at {e}"), detail)
    }
}

/// A finished report: human text, JSON, and whether the check passed.
struct Report {
    text: String,
    json: Value,
    ok: bool,
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Workspace, Failure> {
    Ok(parse_spec(&read(path)?)?)
}

fn load_model(path: &Path) -> Result<DoubleCatModel, Failure> {
    let doc: ModelDocument = serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::Invalid(format!("{}: malformed model: {e}", path.display()), Value::Null))?;
    Ok(import_model(&doc)?)
}

fn search_cap(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var("DCT_SEARCH_CAP") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("DCT_SEARCH_CAP must be a nonnegative integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_SEARCH_CAP),
    }
}

fn report_lines(report: &ValidationReport) -> String {
    report.iter().map(|v| format!("  {v}\n")).collect()
}

fn validate(path: &Path) -> Result<Report, Failure> {
    let ws = load(path)?;
    let mut entries = Vec::new();
    let mut push = |kind: &str, name: &str, r: Result<ValidationReport, Error>| {
        let r = r.unwrap_or_else(|e| {
            let mut r = ValidationReport::new();
            r.push(dct_core::Law::Closure, vec![name.to_string()], e.to_string());
            r
        });
        entries.push((kind.to_string(), name.to_string(), r));
    };
    for (n, m) in &ws.monoids {
        push("monoid", n, validate_monoid(m));
    }
    for (n, c) in &ws.categories {
        push("category", n, validate_category(c));
    }
    for (n, b) in &ws.twocats {
        let r = validate_two_category(b).map(|mut r| {
            for z in 0..b.zerocells.len() {
                if let Err(e) = pi2(b, z) {
                    r.push(dct_core::Law::EckmannHilton, vec![b.zerocells[z].clone()], e.to_string());
                }
            }
            r
        });
        push("twocat", n, r);
    }
    for (n, d) in &ws.decorated {
        push("decorated", n, validate_decorated(d));
    }
    for (n, phi) in &ws.indexings {
        push("indexing", n, validate_indexing(phi));
    }
    let ok = entries.iter().all(|(_, _, r)| r.is_empty());
    let mut text = String::new();
    for (kind, name, r) in &entries {
        if r.is_empty() {
            let _ = writeln!(text, "ok    {kind} {name}");
        } else {
            let _ = writeln!(text, "FAIL  {kind} {name}: {} violation(s)\n{}", r.len(), report_lines(r));
        }
    }
    if entries.is_empty() {
        text.push_str("empty workspace\n");
    }
    let json = json!({
        "file": path.display().to_string(),
        "ok": ok,
        "declarations": entries.iter().map(|(kind, name, r)| json!({
            "kind": kind, "name": name, "violations": r,
        })).collect::<Vec<_>>(),
    });
    Ok(Report { text, json, ok })
}

fn show_pi2(path: &Path, twocat: &str, object: &str) -> Result<Report, Failure> {
    let ws = load(path)?;
    let b = ws
        .twocats
        .get(twocat)
        .ok_or_else(|| Failure::Usage(format!("no twocat `{twocat}` in {}", path.display())))?;
    let z = b.zerocell(object).map_err(|e| Failure::Usage(e.to_string()))?;
    let fiber = pi2(b, z)?;
    let m = &fiber.monoid;
    let n = m.len();
    let mut text = format!("pi2({twocat}, {object}) has {n} element(s), unit {}\n", m.elements[m.unit]);
    for x in 0..n {
        let row: Vec<&str> = (0..n).map(|y| m.elements[m.mul(x, y)].as_str()).collect();
        let _ = writeln!(text, "  {} * [{}] = [{}]", m.elements[x], m.elements.join(" "), row.join(" "));
    }
    let json = json!({
        "twocat": twocat,
        "object": object,
        "elements": m.elements,
        "unit": m.elements[m.unit],
        "table": (0..n).map(|x| (0..n).map(|y| m.elements[m.mul(x, y)].clone()).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    Ok(Report { text, json, ok: true })
}

fn indexing_json(phi: &Pi2Indexing) -> Value {
    let c = &phi.base.vertical;
    let actions: serde_json::Map<String, Value> = phi
        .action
        .iter()
        .enumerate()
        .filter(|(f, _)| !c.is_identity(*f))
        .map(|(f, h)| {
            let map: serde_json::Map<String, Value> = h
                .map
                .iter()
                .enumerate()
                .map(|(x, &y)| (h.source.elements[x].clone(), Value::String(h.target.elements[y].clone())))
                .collect();
            (c.morphisms[f].name.clone(), Value::Object(map))
        })
        .collect();
    json!({ "name": phi.name, "variance": phi.variance.to_string(), "actions": actions })
}

fn indexing_text(phi: &Pi2Indexing) -> String {
    let c = &phi.base.vertical;
    let mut parts = Vec::new();
    for (f, h) in phi.action.iter().enumerate() {
        if c.is_identity(f) {
            continue;
        }
        let pairs: Vec<String> = h
            .map
            .iter()
            .enumerate()
            .map(|(x, &y)| format!("{}->{}", h.source.elements[x], h.target.elements[y]))
            .collect();
        parts.push(format!("{} -> {{{}}}", c.morphisms[f].name, pairs.join(", ")));
    }
    format!("{}: {}", phi.name, if parts.is_empty() { "(all forced)".into() } else { parts.join("; ") })
}

fn indexings(path: &Path, decorated: &str, variance: VarianceArg, cap: Option<u64>) -> Result<Report, Failure> {
    let ws = load(path)?;
    let d = ws
        .decorated(decorated)
        .ok_or_else(|| Failure::Usage(format!("no decorated `{decorated}` in {}", path.display())))?;
    let variance = match variance {
        VarianceArg::Co => Variance::Covariant,
        VarianceArg::Op => Variance::Contravariant,
    };
    let mut budget = SearchBudget::new(search_cap(cap)?);
    let found = enumerate_indexings(d, variance, &mut budget)?;
    let mut text = format!("{} {variance} indexing(s) on {decorated}\n", found.len());
    for phi in &found {
        let _ = writeln!(text, "  {}", indexing_text(phi));
    }
    let json = json!({
        "decorated": decorated,
        "variance": variance.to_string(),
        "count": found.len(),
        "candidates_tried": budget.used(),
        "indexings": found.iter().map(indexing_json).collect::<Vec<_>>(),
    });
    Ok(Report { text, json, ok: true })
}

fn build(path: &Path, decorated: &str, indexing: &str, out: &Path) -> Result<Report, Failure> {
    let ws = load(path)?;
    if ws.decorated(decorated).is_none() {
        return Err(Failure::Usage(format!("no decorated `{decorated}` in {}", path.display())));
    }
    let phi = ws
        .indexing(indexing)
        .ok_or_else(|| Failure::Usage(format!("no indexing `{indexing}` in {}", path.display())))?;
    if phi.base.name != decorated {
        return Err(Failure::Usage(format!("indexing {indexing} is on {}, not {decorated}", phi.base.name)));
    }
    let r = validate_indexing(phi)?;
    if !r.is_empty() {
        return Err(Failure::Invalid(
            format!("indexing {indexing} is invalid:\n{}", report_lines(&r)),
            serde_json::to_value(&r).unwrap_or(Value::Null),
        ));
    }
    let m = build_crossprod(phi)?;
    let doc = serde_json::to_string_pretty(&export_model(&m)).expect("model serializes");
    std::fs::write(out, doc + "\n").map_err(|e| Failure::Io(format!("{}: {e}", out.display())))?;
    let text = format!(
        "built {} with {} squares over {} edges; wrote {}\n",
        m.name,
        m.square_count(),
        m.edges.len(),
        out.display()
    );
    let json = json!({
        "model": m.name,
        "squares": m.square_count(),
        "edges": m.edges.len(),
        "out": out.display().to_string(),
    });
    Ok(Report { text, json, ok: true })
}

fn axioms(path: &Path) -> Result<Report, Failure> {
    let m = load_model(path)?;
    let r = check_double_axioms(&m);
    let ok = r.is_empty();
    let text = if ok {
        format!("{}: all double category axioms hold ({} squares)\n", m.name, m.square_count())
    } else {
        format!("{}: {} violation(s)\n{}", m.name, r.len(), report_lines(&r))
    };
    let json = json!({ "model": m.name, "ok": ok, "violations": r });
    Ok(Report { text, json, ok })
}

fn length(path: &Path) -> Result<Report, Failure> {
    let m = load_model(path)?;
    let r = vertical_filtration(&m);
    let marks = named_markings(&m, &r);
    let mut text = format!(
        "{}: length {}, {}globularly generated\n",
        m.name,
        r.length,
        if r.globularly_generated { "" } else { "not " }
    );
    for s in &m.squares {
        match marks[&s.name] {
            Some(v) => {
                let _ = writeln!(text, "  {:<24} {v}", s.name);
            }
            None => {
                let _ = writeln!(text, "  {:<24} not generated", s.name);
            }
        }
    }
    let json = json!({
        "model": m.name,
        "length": r.length,
        "globularly_generated": r.globularly_generated,
        "markings": marks,
    });
    Ok(Report { text, json, ok: true })
}

fn minfact(path: &Path, word: &str, budget: usize, decorated: Option<&str>) -> Result<Report, Failure> {
    let ws = load(path)?;
    let d = match decorated {
        Some(name) => ws
            .decorated(name)
            .ok_or_else(|| Failure::Usage(format!("no decorated `{name}` in {}", path.display())))?,
        None if ws.decorated.len() == 1 => ws.decorated.values().next().expect("one entry"),
        None => return Err(Failure::Usage("the file declares several decorations; pass --decorated".into())),
    };
    let w = parse_word(d, word)?;
    let f = min_factorization(d, &w, budget, &mut SearchBudget::new(search_cap(None)?))?;
    let witness = DisplayWord(d, &f.witness).to_string();
    let text = format!(
        "minimal factorization length {} (budget {budget}, {} words examined)\n  witness: {witness}\n  congruence: adjacent globular cells and adjacent units merge; nothing slides\n",
        f.length, f.examined
    );
    let json = json!({
        "word": word,
        "budget": budget,
        "length": f.length,
        "witness": witness,
        "examined": f.examined,
        "congruence": "merge rules",
    });
    Ok(Report { text, json, ok: true })
}

fn example(name: &str) -> Result<Report, Failure> {
    let r = gallery::run(name)?;
    let mut text = format!("example {name}\n");
    for v in &r.verdicts {
        let mark = if v.passed { "PASS" } else { "FAIL" };
        let detail = if v.detail.is_empty() { String::new() } else { format!(" ({})", v.detail) };
        let _ = writeln!(text, "  {mark}  {} [{}]{detail}", v.claim, v.operation);
    }
    let models: Vec<Value> = r
        .models
        .iter()
        .map(|m| json!({ "name": m.name, "squares": m.square_count(), "length": dct_core::filtration::length(m) }))
        .collect();
    let json = json!({
        "example": name,
        "passed": r.passed(),
        "verdicts": r.verdicts,
        "models": models,
    });
    Ok(Report {
        text,
        json,
        ok: r.passed(),
    })
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Validate { file } => validate(file),
        Command::Pi2 { file, twocat, object } => show_pi2(file, twocat, object),
        Command::Indexings {
            file,
            decorated,
            variance,
            cap,
        } => indexings(file, decorated, *variance, *cap),
        Command::Build {
            file,
            decorated,
            indexing,
            out,
        } => build(file, decorated, indexing, out),
        Command::Axioms { model } => axioms(model),
        Command::Length { model } => length(model),
        Command::Minfact {
            file,
            word,
            budget,
            decorated,
        } => minfact(file, word, *budget, decorated.as_deref()),
        Command::Example { name } => example(name),
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            match cli.format {
                Format::Text => emit(&r.text),
                Format::Json => emit(&format!("{}\n", serde_json::to_string_pretty(&r.json).expect("json"))),
            }
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            let (message, detail) = match &f {
                Failure::Invalid(m, d) => (m.clone(), d.clone()),
                Failure::Usage(m) | Failure::Io(m) => (m.clone(), Value::Null),
            };
            if cli.format == Format::Json {
                let kind = match f {
                    Failure::Invalid(..) => "invalid",
                    Failure::Usage(_) => "usage",
                    Failure::Io(_) => "io",
                };
                let body = json!({ "error": kind, "message": message, "detail": detail });
                emit(&format!("{}\n", serde_json::to_string_pretty(&body).expect("json")));
            }
            eprintln!("dct: {message}");
            ExitCode::from(f.code())
        }
    }
}
