//! `twoforest`: count spanning trees and separating spanning 2-forests,
//! compute exact resistance distances, decompose along separators, generate
//! the built-in graph families, evaluate their closed forms, and benchmark
//! the reduction engine against the determinant.
//!
//! Exit codes: 0 success, 1 usage error, 2 input parse error, 3 internal
//! consistency failure.

mod bench;
mod verify;

use std::fmt::Write as _;
use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use twoforest::count::{count_2forests_det, count_trees_det, enumerate_2forests, enumerate_trees};
use twoforest::families::{
    bent_forest, sierpinski_corner_forests, sierpinski_corner_resistance, sierpinski_trees,
    straight_forest_closed, straight_forest_sum, straight_resistance_closed, straight_trees,
    Family, FamilySpec,
};
use twoforest::fib::fib;
use twoforest::io::{parse_edge_list, serialize_edge_list};
use twoforest::resistance::{resistance_pinv, ResistanceResult};
use twoforest::separation::{find_2separators, find_cut_vertices, solve, Query, ReductionTrace};
use twoforest::{ratio, render_decimal, Count, Error as CoreError, MultiGraph, Ratio};

const EXIT_USAGE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

pub struct CliError {
    code: u8,
    msg: String,
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            msg: msg.into(),
        }
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INTERNAL,
            msg: msg.into(),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let code = match &e {
            CoreError::Parse { .. } => EXIT_PARSE,
            CoreError::Internal(_) => EXIT_INTERNAL,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError {
            code: EXIT_PARSE,
            msg: e.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "twoforest",
    version,
    about = "Exact spanning-tree/2-forest counts and resistance distances in multigraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Det,
    Reduce,
    Enumerate,
    Pinv,
    #[value(name = "closed-form")]
    ClosedForm,
}

impl Method {
    fn name(&self) -> &'static str {
        match self {
            Method::Det => "det",
            Method::Reduce => "reduce",
            Method::Enumerate => "enumerate",
            Method::Pinv => "pinv",
            Method::ClosedForm => "closed-form",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// One input source: an edge-list file (`-` for stdin) or an inline family.
#[derive(Args)]
struct InputArgs {
    /// Edge-list file; `-` reads standard input
    file: Option<String>,
    /// Generate the input instead of reading a file
    #[arg(long, conflicts_with = "file")]
    family: Option<String>,
    /// Family size (vertex count; stage index for sierpinski)
    #[arg(long, requires = "family")]
    n: Option<usize>,
    /// Bend vertex for the bent family
    #[arg(long, requires = "family")]
    k: Option<usize>,
}

impl InputArgs {
    fn family_spec(&self) -> Result<Option<FamilySpec>, CliError> {
        match &self.family {
            None => Ok(None),
            Some(name) => {
                let family: Family = name.parse()?;
                let n = self
                    .n
                    .ok_or_else(|| CliError::usage("--family requires --n"))?;
                let spec = FamilySpec {
                    family,
                    n,
                    k: self.k,
                };
                spec.validate()?;
                Ok(Some(spec))
            }
        }
    }

    fn load(&self) -> Result<(MultiGraph, String), CliError> {
        if let Some(spec) = self.family_spec()? {
            return Ok((spec.generate()?, format!("family:{spec}")));
        }
        match &self.file {
            Some(path) if path == "-" => {
                let mut text = String::new();
                std::io::stdin().read_to_string(&mut text)?;
                Ok((parse_edge_list(&text)?, "-".to_string()))
            }
            Some(path) => {
                let text = fs::read_to_string(path)?;
                Ok((parse_edge_list(&text)?, path.clone()))
            }
            None => Err(CliError::usage(
                "provide an edge-list FILE (or `-`) or --family",
            )),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Count spanning trees
    Trees {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = Method::Reduce)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Count spanning 2-forests separating two vertices
    Forests {
        #[command(flatten)]
        input: InputArgs,
        #[arg(short)]
        u: usize,
        #[arg(short)]
        v: usize,
        #[arg(long, value_enum, default_value_t = Method::Reduce)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Exact resistance distance between two vertices
    Resistance {
        #[command(flatten)]
        input: InputArgs,
        #[arg(short)]
        u: usize,
        #[arg(short)]
        v: usize,
        #[arg(long, value_enum, default_value_t = Method::Reduce)]
        method: Method,
        /// Fractional digits in the decimal rendering
        #[arg(long, default_value_t = 12)]
        digits: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List cut vertices and 2-separators, and show the reduction trace
    Decompose {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Emit a family instance in edge-list format
    Gen {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        /// Output file (stdout when absent)
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Evaluate a family closed form without building the graph
    ClosedForm {
        #[arg(long)]
        family: String,
        /// One of: trees, forests, forests-sum, resistance, end-resistance,
        /// corner-forests, corner-resistance
        #[arg(long)]
        query: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(short)]
        u: Option<usize>,
        #[arg(short)]
        v: Option<usize>,
        #[arg(long, default_value_t = 12)]
        digits: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Cross-check oracle, determinant, and reduction over a corpus
    Verify {
        /// Largest vertex count for the exhaustive corpus (3..=6)
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        #[arg(long, default_value_t = 20260809)]
        seed: u64,
    },
    /// Time the determinant against the reduction on a family
    Bench {
        #[arg(long)]
        family: String,
        /// Inclusive size range, e.g. 50..200
        #[arg(long)]
        n_range: String,
        #[arg(long)]
        k: Option<usize>,
        /// Sample stride (default: about 8 points across the range)
        #[arg(long)]
        step: Option<usize>,
        /// Also write rows as CSV to this path
        #[arg(long)]
        csv: Option<String>,
    },
}

#[derive(Serialize)]
#[serde(untagged)]
enum JsonResult {
    Integer {
        integer: String,
    },
    Ratio {
        numerator: String,
        denominator: String,
        decimal: String,
    },
    Decimal {
        decimal: String,
    },
}

#[derive(Serialize)]
struct JsonOut {
    op: &'static str,
    input: String,
    method: &'static str,
    result: JsonResult,
}

fn emit_integer(
    op: &'static str,
    input: String,
    method: Method,
    value: &Count,
    format: Format,
) -> Result<(), CliError> {
    match format {
        Format::Text => println!("{value}"),
        Format::Json => {
            let out = JsonOut {
                op,
                input,
                method: method.name(),
                result: JsonResult::Integer {
                    integer: value.to_string(),
                },
            };
            println!("{}", serde_json::to_string(&out).expect("serializable"));
        }
    }
    Ok(())
}

fn emit_fraction(
    op: &'static str,
    input: String,
    method: Method,
    num: &Count,
    den: &Count,
    digits: u32,
    format: Format,
) -> Result<(), CliError> {
    let decimal = render_decimal(&ratio(num.clone(), den.clone())?, digits);
    match format {
        Format::Text => println!("{num}/{den} = {decimal}"),
        Format::Json => {
            let out = JsonOut {
                op,
                input,
                method: method.name(),
                result: JsonResult::Ratio {
                    numerator: num.to_string(),
                    denominator: den.to_string(),
                    decimal,
                },
            };
            println!("{}", serde_json::to_string(&out).expect("serializable"));
        }
    }
    Ok(())
}

fn trees_closed_form(spec: &FamilySpec) -> Result<Count, CliError> {
    Ok(match spec.family {
        Family::Straight => straight_trees(spec.n)?,
        // tree count is 2-switch invariant, so the bend does not change it
        Family::Bent => fib(2 * spec.n as i64 - 2),
        Family::Sierpinski => sierpinski_trees(spec.n as u32)?,
    })
}

fn forests_closed_form(spec: &FamilySpec, u: usize, v: usize) -> Result<Count, CliError> {
    let (u, v) = (u.min(v), u.max(v));
    Ok(match spec.family {
        Family::Straight => straight_forest_closed(u, v, spec.n)?,
        Family::Bent => bent_forest(u, v, spec.n, spec.k.expect("validated"))?,
        Family::Sierpinski => {
            if v > 3 || u == v {
                return Err(CliError::usage(
                    "the sierpinski closed form covers corner pairs only (vertices 1, 2, 3)",
                ));
            }
            sierpinski_corner_forests(spec.n as u32)?
        }
    })
}

fn resistance_closed_form(spec: &FamilySpec, u: usize, v: usize) -> Result<Ratio, CliError> {
    let (u, v) = (u.min(v), u.max(v));
    Ok(match spec.family {
        Family::Straight => straight_resistance_closed(u, v - u, spec.n)?,
        Family::Bent => ratio(
            bent_forest(u, v, spec.n, spec.k.expect("validated"))?,
            fib(2 * spec.n as i64 - 2),
        )?,
        Family::Sierpinski => {
            if v > 3 || u == v {
                return Err(CliError::usage(
                    "the sierpinski closed form covers corner pairs only (vertices 1, 2, 3)",
                ));
            }
            sierpinski_corner_resistance(spec.n as u32)
        }
    })
}

fn check_pair_in_range(g: &MultiGraph, u: usize, v: usize) -> Result<(), CliError> {
    for x in [u, v] {
        if x == 0 || x > g.vertex_count() {
            return Err(CliError::usage(format!(
                "vertex {x} out of range 1..={}",
                g.vertex_count()
            )));
        }
    }
    if u == v {
        return Err(CliError::usage("u and v must be distinct"));
    }
    Ok(())
}

fn run_trees(input: InputArgs, method: Method, format: Format) -> Result<(), CliError> {
    if method == Method::ClosedForm {
        let spec = input
            .family_spec()?
            .ok_or_else(|| CliError::usage("--method closed-form requires --family input"))?;
        let value = trees_closed_form(&spec)?;
        return emit_integer("trees", format!("family:{spec}"), method, &value, format);
    }
    let (g, source) = input.load()?;
    let value = match method {
        Method::Det => count_trees_det(&g),
        // the reduction engine wants a connected graph; the count of a
        // disconnected one is 0 either way
        Method::Reduce if !g.connected() => count_trees_det(&g),
        Method::Reduce => solve(&g, Query::Trees)?.0,
        Method::Enumerate => enumerate_trees(&g)?,
        Method::Pinv => return Err(CliError::usage("pinv applies to `resistance` only")),
        Method::ClosedForm => unreachable!(),
    };
    emit_integer("trees", source, method, &value, format)
}

fn run_forests(
    input: InputArgs,
    u: usize,
    v: usize,
    method: Method,
    format: Format,
) -> Result<(), CliError> {
    if method == Method::ClosedForm {
        let spec = input
            .family_spec()?
            .ok_or_else(|| CliError::usage("--method closed-form requires --family input"))?;
        let value = forests_closed_form(&spec, u, v)?;
        return emit_integer("forests", format!("family:{spec}"), method, &value, format);
    }
    let (g, source) = input.load()?;
    check_pair_in_range(&g, u, v)?;
    let value = match method {
        Method::Det => count_2forests_det(&g, u, v)?,
        Method::Reduce if !g.connected() => count_2forests_det(&g, u, v)?,
        Method::Reduce => solve(&g, Query::forests(u, v))?.0,
        Method::Enumerate => enumerate_2forests(&g, u, v)?,
        Method::Pinv => return Err(CliError::usage("pinv applies to `resistance` only")),
        Method::ClosedForm => unreachable!(),
    };
    emit_integer("forests", source, method, &value, format)
}

fn run_resistance(
    input: InputArgs,
    u: usize,
    v: usize,
    method: Method,
    digits: u32,
    format: Format,
) -> Result<(), CliError> {
    if method == Method::ClosedForm {
        let spec = input
            .family_spec()?
            .ok_or_else(|| CliError::usage("--method closed-form requires --family input"))?;
        let value = resistance_closed_form(&spec, u, v)?;
        return emit_fraction(
            "resistance",
            format!("family:{spec}"),
            method,
            value.numer(),
            value.denom(),
            digits,
            format,
        );
    }
    let (g, source) = input.load()?;
    check_pair_in_range(&g, u, v)?;
    if method == Method::Pinv {
        let value = resistance_pinv(&g, u, v)?;
        let rendered = ResistanceResult::float(value).float_value;
        match format {
            Format::Text => println!("{rendered}"),
            Format::Json => {
                let out = JsonOut {
                    op: "resistance",
                    input: source,
                    method: method.name(),
                    result: JsonResult::Decimal { decimal: rendered },
                };
                println!("{}", serde_json::to_string(&out).expect("serializable"));
            }
        }
        return Ok(());
    }
    if !g.connected() {
        return Err(CoreError::Disconnected.into());
    }
    // resistance is reported as the raw F/T pair so both counts stay visible
    let (f, t) = match method {
        Method::Det => (count_2forests_det(&g, u, v)?, count_trees_det(&g)),
        Method::Reduce => (
            solve(&g, Query::forests(u, v))?.0,
            solve(&g, Query::Trees)?.0,
        ),
        Method::Enumerate => (enumerate_2forests(&g, u, v)?, enumerate_trees(&g)?),
        _ => unreachable!(),
    };
    emit_fraction("resistance", source, method, &f, &t, digits, format)
}

#[derive(Serialize)]
struct DecomposeOut {
    op: &'static str,
    input: String,
    vertices: usize,
    edge_pairs: usize,
    cut_vertices: Vec<usize>,
    two_separators: Vec<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<ReductionTrace>,
}

fn run_decompose(input: InputArgs, format: Format) -> Result<(), CliError> {
    let (g, source) = input.load()?;
    let cuts = find_cut_vertices(&g);
    let seps = find_2separators(&g);
    let trace = if g.connected() {
        Some(solve(&g, Query::Trees)?.1)
    } else {
        None
    };
    match format {
        Format::Text => {
            println!(
                "graph: {} vertices, {} edge pairs, {} edge instances",
                g.vertex_count(),
                g.edge_pair_count(),
                g.total_multiplicity()
            );
            if cuts.is_empty() {
                println!("cut vertices: none");
            } else {
                let list: Vec<String> = cuts.iter().map(|w| w.to_string()).collect();
                println!("cut vertices: {}", list.join(" "));
            }
            if seps.is_empty() {
                println!("2-separators: none");
            } else {
                let mut line = String::new();
                for (i, j) in &seps {
                    let _ = write!(line, "{{{i},{j}}} ");
                }
                println!("2-separators: {}", line.trim_end());
            }
            match &trace {
                Some(t) => println!("reduction trace for T:\n{t}"),
                None => println!("graph is disconnected; no reduction trace"),
            }
        }
        Format::Json => {
            let out = DecomposeOut {
                op: "decompose",
                input: source,
                vertices: g.vertex_count(),
                edge_pairs: g.edge_pair_count(),
                cut_vertices: cuts,
                two_separators: seps,
                trace,
            };
            println!("{}", serde_json::to_string(&out).expect("serializable"));
        }
    }
    Ok(())
}

fn run_gen(
    family: String,
    n: usize,
    k: Option<usize>,
    output: Option<String>,
) -> Result<(), CliError> {
    let spec = FamilySpec {
        family: family.parse()?,
        n,
        k,
    };
    spec.validate()?;
    let text = serialize_edge_list(&spec.generate()?);
    match output {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_closed_form(
    family: String,
    query: String,
    n: usize,
    k: Option<usize>,
    u: Option<usize>,
    v: Option<usize>,
    digits: u32,
    format: Format,
) -> Result<(), CliError> {
    let spec = FamilySpec {
        family: family.parse()?,
        n,
        k,
    };
    spec.validate()?;
    let input = format!("family:{spec}");
    let need_pair = || -> Result<(usize, usize), CliError> {
        match (u, v) {
            (Some(u), Some(v)) if u != v => Ok((u.min(v), u.max(v))),
            (Some(_), Some(_)) => Err(CliError::usage("u and v must be distinct")),
            _ => Err(CliError::usage("this query needs -u and -v")),
        }
    };
    match (spec.family, query.as_str()) {
        (_, "trees") => {
            let value = trees_closed_form(&spec)?;
            emit_integer("closed-form", input, Method::ClosedForm, &value, format)
        }
        (Family::Straight, "forests") | (Family::Bent, "forests") => {
            let (u, v) = need_pair()?;
            let value = forests_closed_form(&spec, u, v)?;
            emit_integer("closed-form", input, Method::ClosedForm, &value, format)
        }
        (Family::Straight, "forests-sum") => {
            let (u, v) = need_pair()?;
            let value = straight_forest_sum(u, v, spec.n)?;
            emit_integer("closed-form", input, Method::ClosedForm, &value, format)
        }
        (Family::Straight, "resistance") | (Family::Bent, "resistance") => {
            let (u, v) = need_pair()?;
            let value = resistance_closed_form(&spec, u, v)?;
            emit_fraction(
                "closed-form",
                input,
                Method::ClosedForm,
                value.numer(),
                value.denom(),
                digits,
                format,
            )
        }
        (Family::Bent, "end-resistance") => {
            let value = twoforest::families::bent_end_resistance(spec.n, spec.k.expect("validated"))?;
            emit_fraction(
                "closed-form",
                input,
                Method::ClosedForm,
                value.numer(),
                value.denom(),
                digits,
                format,
            )
        }
        (Family::Sierpinski, "corner-forests") => {
            let value = sierpinski_corner_forests(spec.n as u32)?;
            emit_integer("closed-form", input, Method::ClosedForm, &value, format)
        }
        (Family::Sierpinski, "corner-resistance") => {
            let value = sierpinski_corner_resistance(spec.n as u32);
            emit_fraction(
                "closed-form",
                input,
                Method::ClosedForm,
                value.numer(),
                value.denom(),
                digits,
                format,
            )
        }
        (fam, other) => Err(CliError::usage(format!(
            "no closed form {other:?} for family {fam}"
        ))),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Trees {
            input,
            method,
            format,
        } => run_trees(input, method, format),
        Command::Forests {
            input,
            u,
            v,
            method,
            format,
        } => run_forests(input, u, v, method, format),
        Command::Resistance {
            input,
            u,
            v,
            method,
            digits,
            format,
        } => run_resistance(input, u, v, method, digits, format),
        Command::Decompose { input, format } => run_decompose(input, format),
        Command::Gen {
            family,
            n,
            k,
            output,
        } => run_gen(family, n, k, output),
        Command::ClosedForm {
            family,
            query,
            n,
            k,
            u,
            v,
            digits,
            format,
        } => run_closed_form(family, query, n, k, u, v, digits, format),
        Command::Verify { max_n, seed } => verify::run(max_n, seed),
        Command::Bench {
            family,
            n_range,
            k,
            step,
            csv,
        } => bench::run(&family, &n_range, k, step, csv.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let first_line = e.to_string();
            let first_line = first_line.lines().next().unwrap_or("invalid usage");
            eprintln!("twoforest: {first_line} (try --help)");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("twoforest: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}
