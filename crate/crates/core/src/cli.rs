//! The `koszul` command line.

use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::algebra::{augmentation_module, ideal_module, DegreewiseAlgebra, QuadraticPresentation};
use crate::check::{run_check, Bounds, CheckInput};
use crate::error::{Error, Result};
use crate::gf_linalg::PrimeField;
use crate::homology::{bar_tor_algebra, tor_module, TorMethod, TorTable};
use crate::milnor_models::{
    build_annihilator, build_global_general, build_global_symplectic, build_local, build_noroot,
    GeneralParams, GlobalSymbolDatum, LocalCase, LocalKind, Model, NorootParams,
};
use crate::monomial_graph::QuadGraph;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_KOSZUL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DISAGREE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "koszul",
    version,
    about = "Koszulity checks for quadratic algebras over F_l"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a Tor table.
    Tor(TorArgs),
    /// Compare the PBW, graph and homology verdicts.
    Check(CheckArgs),
    /// Write a model datum as JSON.
    Gen(GenArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Target {
    /// `Tor^A(k, k)`.
    Algebra,
    /// `A_+` over the ambient algebra.
    Module,
    /// The ideal `(c)` over `A`.
    Ideal,
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Presentation, symbol datum or graph JSON; `-` for stdin.
    input: String,
    /// Field for graph inputs without an `l` key.
    #[arg(long)]
    l: Option<u32>,
    #[arg(long, default_value_t = 6)]
    max_i: usize,
    #[arg(long, default_value_t = 6)]
    max_j: usize,
    /// Truncation degree; raised to `--max-j` if smaller.
    #[arg(long, default_value_t = 6)]
    max_n: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Generator label spanning the ideal; overrides the datum's choice.
    #[arg(long)]
    ideal: Option<String>,
}

#[derive(Args, Debug)]
struct TorArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value_t = Target::Algebra)]
    target: Target,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    input: InputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Local,
    GlobalSymplectic,
    GlobalGeneral,
    Annihilator,
    Noroot,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(value_enum)]
    kind: GenKind,
    /// Defaults to 2 for global-general and annihilator, 3 otherwise.
    #[arg(long)]
    l: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Local case: noroot, symplectic, square-zero or square-nonzero.
    #[arg(long, default_value = "symplectic")]
    case: String,
    /// Local dimension; defaults to the smallest admissible one.
    #[arg(long)]
    dim: Option<usize>,
    /// Number of places in S (for noroot: places with roots of unity).
    #[arg(long, default_value_t = 2)]
    s_places: usize,
    /// Number of free outside places.
    #[arg(long, default_value_t = 1)]
    outside: usize,
    #[arg(long, default_value_t = 1)]
    real_places: usize,
    /// Assume sqrt(-1) lies in the field.
    #[arg(long)]
    sqrt_minus1: bool,
    /// Noroot only: include the generator `c`.
    #[arg(long)]
    with_c: bool,
    /// Write to this path instead of stdout.
    #[arg(long)]
    output: Option<String>,
}

/// A parsed input file.
enum Loaded {
    Presentation(QuadraticPresentation),
    Datum(Box<GlobalSymbolDatum>),
    Graph { graph: QuadGraph, l: u32 },
}

fn read_input(path: &str) -> Result<String> {
    let mut s = String::new();
    let res = if path == "-" {
        std::io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        std::fs::File::open(path).and_then(|mut f| f.read_to_string(&mut s).map(|_| ()))
    };
    res.map_err(|e| Error::InvalidAlgebra(format!("cannot read `{path}`: {e}")))?;
    Ok(s)
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    vertices: Vec<String>,
    edges: Vec<[String; 2]>,
    #[serde(default)]
    loops: Vec<String>,
    l: Option<u32>,
}

fn parse_graph(v: Value, l: Option<u32>) -> Result<Loaded> {
    let g: GraphJson =
        serde_json::from_value(v).map_err(|e| Error::InvalidAlgebra(format!("graph JSON: {e}")))?;
    let order = crate::monomials::GeneratorOrder::new(g.vertices.clone())?;
    let rank = |s: &str| {
        order
            .rank_of(s)
            .ok_or_else(|| Error::UnknownGenerator(s.to_string()))
    };
    let mut edges = Vec::new();
    for [a, b] in &g.edges {
        edges.push((rank(a)?, rank(b)?));
    }
    for x in &g.loops {
        let r = rank(x)?;
        edges.push((r, r));
    }
    Ok(Loaded::Graph {
        graph: QuadGraph::with_labels(g.vertices, edges)?,
        l: g.l.or(l).unwrap_or(2),
    })
}

/// Tells the three input kinds apart by their keys.
fn parse_input(text: &str, l: Option<u32>) -> Result<Loaded> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| Error::InvalidAlgebra(format!("malformed JSON: {e}")))?;
    let has = |k: &str| v.get(k).is_some();
    if has("s_places") {
        Ok(Loaded::Datum(Box::new(GlobalSymbolDatum::from_json_value(v)?)))
    } else if has("relations") {
        Ok(Loaded::Presentation(QuadraticPresentation::from_json_value(v)?))
    } else if has("edges") {
        parse_graph(v, l)
    } else {
        Err(Error::InvalidAlgebra(
            "expected a presentation, a symbol datum or a graph".into(),
        ))
    }
}

fn check_input(loaded: &Loaded, args: &InputArgs) -> Result<CheckInput> {
    let n_max = args.max_n.max(args.max_j);
    let mut input = match loaded {
        Loaded::Presentation(p) => CheckInput::from_presentation(p, n_max)?,
        Loaded::Datum(d) => CheckInput::from_datum(d, n_max)?,
        Loaded::Graph { graph, l } => {
            let a = graph.exterior_quotient(PrimeField::new(*l)?, n_max)?;
            let lambda = QuadraticPresentation::exterior(a.field(), a.order().clone())
                .degreewise_expand(n_max)?
                .assert_free_exterior()?;
            CheckInput {
                algebra: a,
                lambda: Some(lambda),
                ideal_generator: None,
            }
        }
    };
    if let Some(label) = &args.ideal {
        let r = input
            .algebra
            .order()
            .rank_of(label)
            .ok_or_else(|| Error::UnknownGenerator(label.clone()))?;
        input.ideal_generator = Some(r);
    }
    Ok(input)
}

fn bounds(args: &InputArgs) -> Result<Bounds> {
    if args.max_i < 2 || args.max_j < 2 {
        return Err(Error::InvalidParameters("bounds must be at least 2".into()));
    }
    Ok(Bounds {
        i_max: args.max_i,
        j_max: args.max_j,
    })
}

fn tor_table(input: &CheckInput, target: Target, b: Bounds) -> Result<TorTable> {
    let a: &DegreewiseAlgebra = &input.algebra;
    match target {
        Target::Algebra => bar_tor_algebra(a, b.i_max, b.j_max),
        Target::Module => {
            let lambda = input
                .lambda
                .as_ref()
                .ok_or_else(|| Error::InvalidParameters("no ambient algebra".into()))?;
            tor_module(
                lambda,
                &augmentation_module(a, lambda)?,
                b.i_max,
                b.j_max,
                TorMethod::Auto,
            )
        }
        Target::Ideal => {
            let c = input
                .ideal_generator
                .ok_or_else(|| Error::InvalidParameters("no ideal generator; pass --ideal".into()))?;
            tor_module(
                a,
                &ideal_module(a, &a.generator(c))?,
                b.i_max,
                b.j_max,
                TorMethod::Auto,
            )
        }
    }
}

fn gen_model(g: &GenArgs) -> Result<Model> {
    let default_l = match g.kind {
        GenKind::GlobalGeneral | GenKind::Annihilator => 2,
        _ => 3,
    };
    let l = g.l.unwrap_or(default_l);
    let general = GeneralParams {
        l,
        sqrt_minus1: g.sqrt_minus1,
        s_places: g.s_places,
        real_places: g.real_places,
        free_outside: g.outside,
        seed: g.seed,
    };
    match g.kind {
        GenKind::Local => {
            let kind: LocalKind = g.case.parse()?;
            let dim = g.dim.unwrap_or(LocalCase::small_dims(kind)[0]);
            build_local(LocalCase::new(kind, dim, l, g.sqrt_minus1)?)
        }
        GenKind::GlobalSymplectic => build_global_symplectic(l, g.sqrt_minus1, g.s_places, g.outside, g.seed),
        GenKind::GlobalGeneral => build_global_general(general),
        GenKind::Annihilator => build_annihilator(general),
        GenKind::Noroot => build_noroot(NorootParams {
            l,
            s_places: g.s_places,
            free_outside: g.outside,
            with_c: g.with_c,
            seed: g.seed,
        }),
    }
}

/// Compact JSON with sorted keys.
pub fn canonical_json(v: &Value) -> String {
    serde_json::to_string(v).expect("JSON values serialize")
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let io = |e: std::io::Error| Error::Internal(format!("write failed: {e}"));
    match cli.command {
        Command::Tor(t) => {
            let b = bounds(&t.input)?;
            let loaded = parse_input(&read_input(&t.input.input)?, t.input.l)?;
            let table = tor_table(&check_input(&loaded, &t.input)?, t.target, b)?;
            match t.input.format {
                Format::Table => write!(out, "{}", table.to_text()).map_err(io)?,
                Format::Json => writeln!(out, "{}", canonical_json(&table.to_json())).map_err(io)?,
            }
            Ok(EXIT_OK)
        }
        Command::Check(c) => {
            let b = bounds(&c.input)?;
            let loaded = parse_input(&read_input(&c.input.input)?, c.input.l)?;
            let report = run_check(&check_input(&loaded, &c.input)?, b)?;
            match c.input.format {
                Format::Table => write!(out, "{}", report.to_text()).map_err(io)?,
                Format::Json => writeln!(out, "{}", canonical_json(&report.to_json(b))).map_err(io)?,
            }
            Ok(report.exit_code())
        }
        Command::Gen(g) => {
            let text = canonical_json(&gen_model(&g)?.datum.to_json_value()) + "\n";
            match &g.output {
                Some(path) => std::fs::write(path, text).map_err(io)?,
                None => out.write_all(text.as_bytes()).map_err(io)?,
            }
            Ok(EXIT_OK)
        }
    }
}

/// Runs the command line; returns the exit code.
pub fn run_with<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
