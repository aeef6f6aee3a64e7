//! The `bench` command: wall time and big-integer multiplication counts for
//! the determinant route versus the reduction route on a family, with exact
//! agreement enforced on every row.

use std::fs;
use std::time::Instant;

use twoforest::count::count_trees_det;
use twoforest::families::{Family, FamilySpec};
use twoforest::metrics::{bigint_muls, reset_bigint_muls};
use twoforest::separation::{solve, Query};

use crate::CliError;

struct Row {
    n: usize,
    det_seconds: f64,
    det_muls: u64,
    reduce_seconds: f64,
    reduce_muls: u64,
}

fn parse_range(range: &str) -> Result<(usize, usize), CliError> {
    let parts: Vec<&str> = range.split("..").collect();
    if parts.len() == 2 {
        let lo = parts[0].parse::<usize>();
        let hi = parts[1].trim_start_matches('=').parse::<usize>();
        if let (Ok(lo), Ok(hi)) = (lo, hi) {
            if lo <= hi {
                return Ok((lo, hi));
            }
        }
    }
    Err(CliError::usage(format!(
        "--n-range expects A..B with A <= B, got {range:?}"
    )))
}

pub fn run(
    family: &str,
    n_range: &str,
    k: Option<usize>,
    step: Option<usize>,
    csv: Option<&str>,
) -> Result<(), CliError> {
    let family: Family = family.parse()?;
    let (lo, hi) = parse_range(n_range)?;
    let step = step.unwrap_or_else(|| ((hi - lo) / 8).max(1));

    let mut rows = Vec::new();
    println!("benchmarking T(G) on family {family}, n = {lo}..{hi} step {step}");
    println!(
        "{:>6}  {:>12} {:>12}  {:>12} {:>12}",
        "n", "det_time", "det_muls", "reduce_time", "reduce_muls"
    );
    let mut n = lo;
    loop {
        let spec = FamilySpec {
            family,
            n,
            k: if family == Family::Bent {
                Some(k.unwrap_or_else(|| (n / 2).clamp(3, n.saturating_sub(3))))
            } else {
                None
            },
        };
        spec.validate()?;
        let g = spec.generate()?;

        reset_bigint_muls();
        let start = Instant::now();
        let det = count_trees_det(&g);
        let det_seconds = start.elapsed().as_secs_f64();
        let det_muls = bigint_muls();

        reset_bigint_muls();
        let start = Instant::now();
        let (reduced, _) = solve(&g, Query::Trees).map_err(CliError::from)?;
        let reduce_seconds = start.elapsed().as_secs_f64();
        let reduce_muls = bigint_muls();

        if det != reduced {
            return Err(CliError::internal(format!(
                "det and reduce disagree on {spec}: {det} vs {reduced}"
            )));
        }
        println!(
            "{n:>6}  {:>11.4}s {det_muls:>12}  {:>11.4}s {reduce_muls:>12}",
            det_seconds, reduce_seconds
        );
        rows.push(Row {
            n,
            det_seconds,
            det_muls,
            reduce_seconds,
            reduce_muls,
        });

        if n == hi {
            break;
        }
        n = (n + step).min(hi);
    }

    if let Some(path) = csv {
        let mut text = String::from("n,det_seconds,det_muls,reduce_seconds,reduce_muls\n");
        for r in &rows {
            text.push_str(&format!(
                "{},{:.6},{},{:.6},{}\n",
                r.n, r.det_seconds, r.det_muls, r.reduce_seconds, r.reduce_muls
            ));
        }
        fs::write(path, text)?;
    }
    Ok(())
}
