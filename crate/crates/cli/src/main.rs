//! `spinorbit`: orbit enumeration, normal forms, invariants and gluing for
//! framed, r-Spin and Pin± structures on surfaces, reported as JSON or CSV.
//!
//! Exit codes: 0 success, 1 domain error or failed verification, 2 budget
//! exhausted, 3 malformed input.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use spinorbit::gluing::{
    check_surjectivity_genus1, glue_pants, glue_pi0, solve_diagonal, DiagonalSquare, Pants, StructuredCobordism,
};
use spinorbit::orbit::{all_deltas, enumerate, verify_theorems, TheoremCase, VerifyOptions, DEFAULT_BUDGET};
use spinorbit::suite::{self, SuiteOptions};
use spinorbit::{Error, PinSign, Structure, StructureKind, SurfaceSpec, ThetaStructure, TwistWord};

#[derive(Parser, Debug)]
#[command(
    name = "spinorbit",
    version,
    about = "Orbits, invariants and gluing of framed, r-Spin and Pin structures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Structure family.
    #[arg(long, global = true, value_enum)]
    kind: Option<Kind>,
    /// Modulus for r-Spin structures.
    #[arg(long, global = true)]
    r: Option<u64>,
    /// Genus (orientable) or number of crosscaps (non-orientable).
    #[arg(long, global = true)]
    genus: Option<usize>,
    /// Number of boundary components.
    #[arg(long, global = true)]
    boundaries: Option<usize>,
    /// Boundary condition, comma separated.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    delta: Option<Vec<i64>>,
    /// Coordinates, comma separated.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    coords: Option<Vec<i64>>,
    /// Twist word such as "a1 b1^-1 t1".
    #[arg(long, global = true, allow_hyphen_values = true)]
    word: Option<String>,
    /// Upper bound on enumeration work (states × generators × exponents).
    #[arg(long, global = true)]
    budget: Option<u128>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for parallel enumeration.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Framed,
    Rspin,
    #[value(name = "pin+")]
    PinPlus,
    #[value(name = "pin-")]
    PinMinus,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Partition a finite set of structures into mapping class group orbits.
    Orbits,
    /// Reduce a structure to its normal form, with a twist-word certificate.
    Reduce,
    /// Evaluate the invariants of a structure.
    Invariant,
    /// Apply a twist word to a structure.
    Twist,
    /// Glue a pair of pants onto a θ_r-structure, or glue two cobordisms at π₀.
    Glue(GlueArgs),
    /// Check orbit-count theorems, or run the full reproduction suite.
    Verify(VerifyArgs),
    /// Check that gluing on a boundary is surjective on orbits in genus 1.
    Surjectivity(SurjectivityArgs),
    /// Solve for the diagonal of a commutative square of invariants.
    Diagonal(DiagonalArgs),
}

#[derive(Args, Debug)]
struct GlueArgs {
    /// Pants arc values R1,R2; selects the explicit pants gluing.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pants: Option<Vec<i64>>,
    /// δ on the pants' first two boundaries; the third must match the attachment boundary.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pants_delta: Option<Vec<i64>>,
    /// Coordinates of the right-hand cobordism.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    right_coords: Option<Vec<i64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    right_delta: Option<Vec<i64>>,
    #[arg(long)]
    right_genus: Option<usize>,
    /// Number of outgoing boundaries of the left cobordism.
    #[arg(long, default_value_t = 1)]
    left_outgoing: usize,
    /// Number of outgoing boundaries of the right cobordism.
    #[arg(long, default_value_t = 1)]
    right_outgoing: usize,
    /// Matched pair: outgoing boundary of the left, incoming boundary of the right.
    #[arg(long = "match", value_delimiter = ',')]
    matching: Option<Vec<i64>>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Run a named suite; `paper` runs every acceptance criterion.
    #[arg(long)]
    suite: Option<String>,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    /// Skip normal-form checks when verifying a single family.
    #[arg(long)]
    no_normal_forms: bool,
}

#[derive(Args, Debug)]
struct SurjectivityArgs {
    /// δ on the glued surface (one more entry than --delta).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    delta_target: Vec<i64>,
}

#[derive(Args, Debug)]
struct DiagonalArgs {
    /// Invariants T,L,B,Rt of the square L∘T ≅ B∘Rt.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    square: Vec<i64>,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    delta_b: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    delta_d: i64,
}

/// Errors carrying their exit code.
enum Failure {
    Domain(String),
    Budget(String),
    Parse(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_budget() {
            Failure::Budget(e.to_string())
        } else if e.is_parse() {
            Failure::Parse(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Parse(msg.into())
}

/// A report plus whether it records a failed check.
struct Output {
    value: Value,
    csv: Option<String>,
    ok: bool,
}

impl Output {
    fn of(v: &impl Serialize) -> Result<Self, Failure> {
        Ok(Output {
            value: serde_json::to_value(v).map_err(|e| Failure::Domain(e.to_string()))?,
            csv: None,
            ok: true,
        })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("{}", json!({ "error": e.to_string() }));
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(out) => match render(&out, cli.common.format) {
            Ok(text) => {
                print!("{text}");
                ExitCode::from(if out.ok { 0 } else { 1 })
            }
            Err(e) => {
                eprintln!("{}", json!({ "error": e }));
                ExitCode::from(1)
            }
        },
        Err(f) => {
            let (code, msg) = match f {
                Failure::Domain(m) => (1, m),
                Failure::Budget(m) => (2, m),
                Failure::Parse(m) => (3, m),
            };
            eprintln!("{}", json!({ "error": msg }));
            ExitCode::from(code)
        }
    }
}

fn render(out: &Output, format: Format) -> Result<String, String> {
    match format {
        Format::Json => serde_json::to_string_pretty(&out.value)
            .map(|s| s + "\n")
            .map_err(|e| e.to_string()),
        Format::Csv => match &out.csv {
            Some(csv) => Ok(csv.clone()),
            None => flat_csv(&out.value),
        },
    }
}

/// One CSV row of the report's top-level fields.
fn flat_csv(v: &Value) -> Result<String, String> {
    table_csv(std::slice::from_ref(v))
}

/// One CSV row per object, columns taken from the first. Arrays of scalars
/// are space separated; anything nested is written as JSON.
fn table_csv(rows: &[Value]) -> Result<String, String> {
    let Some(Value::Object(first)) = rows.first() else {
        return Err("report is not an object".into());
    };
    let keys: Vec<&String> = first.keys().collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&keys).map_err(|e| e.to_string())?;
    for row in rows {
        w.write_record(keys.iter().map(|k| cell(&row[k.as_str()])))
            .map_err(|e| e.to_string())?;
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Array(items) if items.iter().all(|i| !i.is_array() && !i.is_object()) => {
            items.iter().map(cell).collect::<Vec<_>>().join(" ")
        }
        other => other.to_string(),
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let c = &cli.common;
    let budget = c.budget.unwrap_or(DEFAULT_BUDGET);
    match &cli.command {
        Command::Orbits => {
            let kind = kind_of(c)?;
            let surface = surface_of(kind, c, None)?;
            let delta = delta_of(kind, &surface, c.delta.clone())?;
            let report = enumerate(kind, surface, delta, budget)?;
            let csv = report.to_csv()?;
            let mut out = Output::of(&report)?;
            out.csv = Some(csv);
            Ok(out)
        }
        Command::Reduce => {
            let x = structure_of(c)?;
            let nf = x.normal_form()?;
            let replayed = x.apply_word(&nf.word)? == nf.representative;
            Output::of(&json!({
                "kind": x.kind().to_string(),
                "surface": x.surface(),
                "delta": x.delta(),
                "input": x.coords(),
                "representative": nf.representative.coords(),
                "certificate": nf.word.to_string(),
                "word": nf.word,
                "complete": nf.complete,
                "replayed": replayed,
                "invariant": x.invariant()?,
            }))
        }
        Command::Invariant => {
            let x = structure_of(c)?;
            let mut v = json!({
                "kind": x.kind().to_string(),
                "surface": x.surface(),
                "delta": x.delta(),
                "coords": x.coords(),
            });
            let name = x.kind().invariant_name();
            v[name] = json!(x.invariant()?);
            if let Structure::Theta(t) = &x {
                v["g_invariants"] = json!(t.g_invariants());
                v["delta_admissible"] = json!(ThetaStructure::delta_admissible(t.ring, &t.delta));
            }
            Output::of(&v)
        }
        Command::Twist => {
            let x = structure_of(c)?;
            let word: TwistWord = c.word.as_deref().ok_or_else(|| usage("twist needs --word"))?.parse()?;
            let y = x.apply_word(&word)?;
            Output::of(&json!({
                "kind": x.kind().to_string(),
                "surface": x.surface(),
                "delta": x.delta(),
                "word": word.to_string(),
                "input": x.coords(),
                "result": y.coords(),
                "invariant_before": x.invariant()?,
                "invariant_after": y.invariant()?,
            }))
        }
        Command::Glue(g) => glue(c, g),
        Command::Verify(v) => verify(c, v, budget),
        Command::Surjectivity(s) => {
            let r = match kind_of(c)? {
                StructureKind::Theta { r } => r,
                StructureKind::Pin { .. } => return Err(usage("surjectivity is about r-Spin structures")),
            };
            let b = c.boundaries.unwrap_or(1);
            let delta = c.delta.clone().unwrap_or_else(|| vec![0; b]);
            let report = check_surjectivity_genus1(r, b, &delta, &s.delta_target, budget)?;
            let mut out = Output::of(&report)?;
            out.ok = report.surjective;
            Ok(out)
        }
        Command::Diagonal(d) => {
            let kind = kind_of(c)?;
            let &[t, l, b, rt] = d.square.as_slice() else {
                return Err(usage("--square takes four values T,L,B,Rt"));
            };
            let sq = DiagonalSquare {
                kind,
                t,
                l,
                b,
                rt,
                delta_b: d.delta_b,
                delta_d: d.delta_d,
            };
            let sol = solve_diagonal(&sq)?;
            Output::of(&json!({ "square": sq, "solution": sol }))
        }
    }
}

fn kind_of(c: &Common) -> Result<StructureKind, Failure> {
    match c.kind.ok_or_else(|| usage("--kind is required"))? {
        Kind::Framed => Ok(StructureKind::Theta { r: 0 }),
        Kind::Rspin => Ok(StructureKind::Theta {
            r: c.r.ok_or_else(|| usage("--kind rspin needs --r"))?,
        }),
        Kind::PinPlus => Ok(StructureKind::Pin { sign: PinSign::Plus }),
        Kind::PinMinus => Ok(StructureKind::Pin { sign: PinSign::Minus }),
    }
}

/// The surface from `--genus`/`--boundaries`, filling gaps from the lengths
/// of `coords` and `--delta`.
fn surface_of(kind: StructureKind, c: &Common, coords: Option<usize>) -> Result<SurfaceSpec, Failure> {
    let boundaries = c.boundaries.or_else(|| c.delta.as_ref().map(Vec::len)).unwrap_or(1);
    if boundaries == 0 {
        return Err(usage("a surface needs at least one boundary"));
    }
    let arcs = boundaries - 1;
    let orientable = matches!(kind, StructureKind::Theta { .. });
    let genus = match (c.genus, coords) {
        (Some(g), _) => g,
        (None, Some(len)) if len >= arcs => {
            let closed = len - arcs;
            if orientable {
                if !closed.is_multiple_of(2) {
                    return Err(usage(format!("{len} coordinates do not fit {boundaries} boundaries")));
                }
                closed / 2
            } else {
                closed
            }
        }
        (None, Some(len)) => return Err(usage(format!("{len} coordinates do not fit {boundaries} boundaries"))),
        (None, None) => return Err(usage("--genus is required")),
    };
    let s = if orientable {
        SurfaceSpec::orientable(genus, boundaries)?
    } else {
        SurfaceSpec::non_orientable(genus, boundaries)?
    };
    Ok(s)
}

/// `--delta`, or zero for θ_r and the first valid condition for Pin.
fn delta_of(kind: StructureKind, s: &SurfaceSpec, delta: Option<Vec<i64>>) -> Result<Vec<i64>, Failure> {
    match (delta, kind) {
        (Some(d), _) => Ok(d),
        (None, StructureKind::Theta { .. }) => Ok(vec![0; s.boundaries]),
        (None, StructureKind::Pin { .. }) => all_deltas(kind, s)
            .into_iter()
            .next()
            .ok_or_else(|| Failure::Domain(format!("no valid boundary condition on {s}"))),
    }
}

fn structure_of(c: &Common) -> Result<Structure, Failure> {
    let kind = kind_of(c)?;
    let coords = c.coords.clone().ok_or_else(|| usage("--coords is required"))?;
    let surface = surface_of(kind, c, Some(coords.len()))?;
    let delta = delta_of(kind, &surface, c.delta.clone())?;
    Ok(Structure::build(kind, surface, coords, delta)?)
}

fn glue(c: &Common, g: &GlueArgs) -> Result<Output, Failure> {
    let left = structure_of(c)?;
    if let Some(p) = &g.pants {
        let &[r1, r2] = p.as_slice() else {
            return Err(usage("--pants takes two values R1,R2"));
        };
        let Structure::Theta(xi) = &left else {
            return Err(usage("pants gluing is defined for r-Spin and framed structures"));
        };
        let pd = g.pants_delta.clone().unwrap_or_else(|| vec![0, xi.delta[0]]);
        let &[d0, d1] = pd.as_slice() else {
            return Err(usage("--pants-delta takes two values δ0,δ1"));
        };
        let pants = Pants {
            r1,
            r2,
            delta: [d0, d1, xi.delta[0]],
        };
        let glued = glue_pants(xi, &pants, 0)?;
        return Output::of(&json!({
            "input": xi,
            "pants": pants,
            "result": glued,
            "invariant": Structure::Theta(glued.clone()).invariant()?,
        }));
    }
    let right_coords = g
        .right_coords
        .clone()
        .ok_or_else(|| usage("glue needs --pants or --right-coords"))?;
    let kind = left.kind();
    let right_common = Common {
        coords: Some(right_coords),
        delta: g.right_delta.clone(),
        genus: g.right_genus,
        boundaries: g.right_delta.as_ref().map(Vec::len),
        ..c.clone()
    };
    let right_surface = surface_of(kind, &right_common, right_common.coords.as_ref().map(Vec::len))?;
    let right_delta = delta_of(kind, &right_surface, g.right_delta.clone())?;
    let right = Structure::build(
        kind,
        right_surface,
        right_common.coords.clone().unwrap_or_default(),
        right_delta,
    )?;
    let l = StructuredCobordism::split(left, g.left_outgoing)?;
    let rt = StructuredCobordism::split(right, g.right_outgoing)?;
    let matching = match g.matching.as_deref() {
        None => (l.outgoing.first().copied(), rt.incoming.first().copied()),
        Some(&[lo, ri]) if lo >= 0 && ri >= 0 => (Some(lo as usize), Some(ri as usize)),
        Some(_) => return Err(usage("--match takes two boundary indices")),
    };
    let (Some(lo), Some(ri)) = matching else {
        return Err(Failure::Domain(
            "nothing to match: no outgoing or incoming boundary".into(),
        ));
    };
    let d = glue_pi0(&l, &rt, &[(lo, ri)])?;
    Output::of(&json!({ "left": l, "right": rt, "matching": [[lo, ri]], "glued": d }))
}

fn verify(c: &Common, v: &VerifyArgs, budget: u128) -> Result<Output, Failure> {
    if let Some(name) = &v.suite {
        if name != "paper" {
            return Err(usage(format!("unknown suite {name:?}; the only suite is \"paper\"")));
        }
        let report = suite::run(&SuiteOptions {
            budget,
            seed: v.seed,
            ..Default::default()
        });
        eprint!("{}", report.table());
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &report.criteria {
            w.serialize(row).map_err(|e| Failure::Domain(e.to_string()))?;
        }
        let csv = String::from_utf8(w.into_inner().map_err(|e| Failure::Domain(e.to_string()))?)
            .expect("csv output is utf-8");
        let mut out = Output::of(&report)?;
        out.csv = Some(csv);
        out.ok = report.pass;
        return Ok(out);
    }
    let kind = kind_of(c)?;
    let surface = surface_of(kind, c, None)?;
    let deltas = match &c.delta {
        Some(d) => vec![d.clone()],
        None => all_deltas(kind, &surface)
            .into_iter()
            .filter(|d| match kind {
                StructureKind::Theta { r } => ThetaStructure::delta_admissible(spinorbit::CoeffRing::new(r), d),
                StructureKind::Pin { .. } => true,
            })
            .collect(),
    };
    let cases: Vec<TheoremCase> = deltas
        .into_iter()
        .map(|delta| TheoremCase { kind, surface, delta })
        .collect();
    let report = verify_theorems(
        &cases,
        VerifyOptions {
            budget,
            check_normal_forms: !v.no_normal_forms,
        },
    );
    if let Some(e) = report.rows.iter().find_map(|r| r.error.as_ref()) {
        if e.starts_with("budget exceeded") {
            return Err(Failure::Budget(e.clone()));
        }
    }
    let mut out = Output::of(&report)?;
    if let Some(rows) = out.value["rows"].as_array().filter(|r| !r.is_empty()) {
        out.csv = Some(table_csv(rows).map_err(Failure::Domain)?);
    }
    out.ok = report.all_pass();
    Ok(out)
}
