//! The `verify` command: replay the oracle / determinant / reduction
//! cross-checks on a corpus and report pass/fail counts.

use twoforest::corpus::{connected_simple_graphs, multiplicity2_corpus, random_corpus};
use twoforest::count::{
    count_2forests_det, count_trees_det, enumerate_2forests_all_capped, enumerate_trees,
    DEFAULT_ENUM_CAP,
};
use twoforest::resistance::pinv_relative_error;
use twoforest::separation::{solve_with, Query, SeparatorChoice, Strategy};
use twoforest::MultiGraph;

use crate::CliError;

struct Tally {
    checks: u64,
    failures: u64,
    examples: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checks: 0,
            failures: 0,
            examples: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.examples.len() < 5 {
                self.examples.push(what());
            }
        }
    }

    fn report(&self, name: &str) {
        if self.failures == 0 {
            println!("{name}: {} checks, all passed", self.checks);
        } else {
            println!("{name}: {} checks, {} FAILED", self.checks, self.failures);
            for e in &self.examples {
                println!("  first failures: {e}");
            }
        }
    }
}

pub fn run(max_n: usize, seed: u64) -> Result<(), CliError> {
    if !(3..=6).contains(&max_n) {
        return Err(CliError::usage("--max-n must be between 3 and 6"));
    }
    let mut graphs: Vec<MultiGraph> = Vec::new();
    for n in 1..=max_n {
        graphs.extend(connected_simple_graphs(n));
    }
    graphs.extend(multiplicity2_corpus());
    graphs.extend(random_corpus(seed, 50, 4, 8));
    println!(
        "verifying {} graphs (exhaustive simple up to {max_n} vertices, doubled-edge corpus, 50 random)",
        graphs.len()
    );

    let eager = Strategy {
        det_threshold: 3,
        choice: SeparatorChoice::Lexicographic,
    };
    let mut oracle = Tally::new();
    let mut reduction = Tally::new();
    let mut identification = Tally::new();
    let mut pinv = Tally::new();

    for (idx, g) in graphs.iter().enumerate() {
        let n = g.vertex_count();
        let t_det = count_trees_det(g);
        oracle.record(enumerate_trees(g).map(|t| t == t_det).unwrap_or(false), || {
            format!("tree oracle mismatch on graph #{idx}")
        });
        let forests = enumerate_2forests_all_capped(g, DEFAULT_ENUM_CAP)
            .map_err(CliError::from)?;
        for (&(u, v), count) in &forests {
            let det = count_2forests_det(g, u, v).map_err(CliError::from)?;
            oracle.record(*count == det, || {
                format!("2-forest oracle mismatch at ({u},{v}) on graph #{idx}")
            });
        }

        let solved = solve_with(g, Query::Trees, &eager)
            .map(|(t, _)| t == t_det)
            .unwrap_or(false);
        reduction.record(solved, || format!("reduction T mismatch on graph #{idx}"));
        for &(u, v) in forests.keys() {
            let det = count_2forests_det(g, u, v).map_err(CliError::from)?;
            let ok = solve_with(g, Query::forests(u, v), &eager)
                .map(|(f, _)| f == det)
                .unwrap_or(false);
            reduction.record(ok, || {
                format!("reduction F({u},{v}) mismatch on graph #{idx}")
            });
        }

        for u in 1..=n {
            for v in (u + 1)..=n {
                let (merged, _) = g.identify(u, v).map_err(CliError::from)?;
                let ok = count_trees_det(&merged) == count_2forests_det(g, u, v).map_err(CliError::from)?;
                identification.record(ok, || {
                    format!("T(G/{u}{v}) != F({u},{v}) on graph #{idx}")
                });
                let err = pinv_relative_error(g, u, v).map_err(CliError::from)?;
                pinv.record(err <= 1e-9, || {
                    format!("pinv off by {err:.3e} at ({u},{v}) on graph #{idx}")
                });
            }
        }
    }

    oracle.report("oracle == determinant");
    reduction.report("reduction == determinant");
    identification.report("identification == pair separation");
    pinv.report("pseudoinverse within 1e-9");

    let failures = oracle.failures + reduction.failures + identification.failures + pinv.failures;
    if failures > 0 {
        return Err(CliError::internal(format!(
            "{failures} verification checks failed"
        )));
    }
    println!("all checks passed");
    Ok(())
}
