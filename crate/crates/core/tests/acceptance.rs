//! Acceptance suite: one test per release criterion, each printing a PASS
//! line (run with `cargo test --test acceptance -- --nocapture` to see
//! them).  Every tolerance is pinned here, not deferred.

use std::collections::BTreeMap;
use std::time::Instant;

use twoforest::corpus::{connected_simple_graphs, multiplicity2_corpus, random_corpus};
use twoforest::count::{
    count_2forests_det, count_trees_det, enumerate_2forests_all_capped, enumerate_trees,
    DEFAULT_ENUM_CAP,
};
use twoforest::families::{
    bent_end_resistance, bent_forest, gen_bent, gen_sierpinski, gen_straight,
    sierpinski_corner_forests, sierpinski_corner_resistance, sierpinski_trees,
    straight_forest_closed, straight_forest_sum, straight_resistance_closed,
};
use twoforest::fib::fib;
use twoforest::metrics::{bigint_muls, reset_bigint_muls};
use twoforest::resistance::{pinv_relative_error, resistance, resistance_identified};
use twoforest::separation::{
    find_2separators, forests_cross, forests_same_side, solve_with, trees_via_separation, Query,
    SeparatorChoice, Strategy,
};
use twoforest::{Count, MultiGraph, Ratio, Vertex};

fn eager() -> Strategy {
    Strategy {
        det_threshold: 3,
        choice: SeparatorChoice::Lexicographic,
    }
}

fn all_pairs(n: usize) -> impl Iterator<Item = (Vertex, Vertex)> {
    (1..=n).flat_map(move |u| ((u + 1)..=n).map(move |v| (u, v)))
}

#[test]
fn criterion_1_oracle_equivalence() {
    let start = Instant::now();
    let mut graphs = Vec::new();
    for n in 1..=6 {
        graphs.extend(connected_simple_graphs(n));
    }
    let simple = graphs.len();
    graphs.extend(multiplicity2_corpus());
    graphs.extend(random_corpus(20260809, 200, 4, 8));
    for g in &graphs {
        assert_eq!(
            enumerate_trees(g).unwrap(),
            count_trees_det(g),
            "tree counts differ on {g:?}"
        );
        let oracle = enumerate_2forests_all_capped(g, DEFAULT_ENUM_CAP).unwrap();
        for ((u, v), count) in oracle {
            assert_eq!(
                count,
                count_2forests_det(g, u, v).unwrap(),
                "2-forest counts differ at ({u},{v}) on {g:?}"
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 300, "took {elapsed:?}, budget is 5 min");
    println!(
        "ACCEPTANCE 1 oracle==determinant on {} graphs ({simple} exhaustive simple) in {elapsed:.2?}: PASS",
        graphs.len()
    );
}

#[test]
fn criterion_2_figure_reproduction() {
    let h7 = gen_straight(7).unwrap();
    let expected: BTreeMap<(Vertex, Vertex), u64> = [
        ((1, 2), 89),
        ((1, 3), 89),
        ((2, 3), 68),
        ((2, 4), 81),
        ((3, 4), 65),
        ((3, 5), 80),
        ((4, 5), 65),
        ((4, 6), 81),
        ((5, 6), 68),
        ((5, 7), 89),
        ((6, 7), 89),
    ]
    .into_iter()
    .collect();
    assert_eq!(expected.len(), 11);
    let mut values: Vec<u64> = expected.values().copied().collect();
    values.sort_unstable();
    let mut published = vec![89u64, 89, 68, 81, 65, 80, 65, 68, 81, 89, 89];
    published.sort_unstable();
    assert_eq!(values, published, "label multiset drifted");

    for (&(u, v), &label) in &expected {
        assert_eq!(h7.multiplicity(u, v), 1, "({u},{v}) must be an edge");
        assert_eq!(
            count_2forests_det(&h7, u, v).unwrap(),
            Count::from(label),
            "F(H_7)({u},{v})"
        );
    }

    // the 2-switch at {3,4} preserves every same-side count; side 1 keeps
    // its labels, side 2's values follow the separator swap 3 <-> 4
    let sep = h7.split_natural(3, 4).unwrap();
    let switched = sep.two_switch();
    assert_eq!(count_trees_det(&switched), count_trees_det(&h7));
    let side1 = [1, 2, 3, 4];
    let side2 = [3, 4, 5, 6, 7];
    let swap34 = |x: Vertex| match x {
        3 => 4,
        4 => 3,
        other => other,
    };
    for (ai, &u) in side1.iter().enumerate() {
        for &v in &side1[ai + 1..] {
            assert_eq!(
                count_2forests_det(&switched, u, v).unwrap(),
                count_2forests_det(&h7, u, v).unwrap(),
                "side-1 pair ({u},{v}) changed under the 2-switch"
            );
        }
    }
    for (ai, &u) in side2.iter().enumerate() {
        for &v in &side2[ai + 1..] {
            assert_eq!(
                count_2forests_det(&switched, swap34(u), swap34(v)).unwrap(),
                count_2forests_det(&h7, u, v).unwrap(),
                "side-2 pair ({u},{v}) changed under the 2-switch"
            );
        }
    }
    println!("ACCEPTANCE 2 figure edge labels and 2-switch invariance: PASS");
}

/// Reduction must be bit-identical to the determinant for both strategies.
fn assert_solve_matches(g: &MultiGraph, what: &str) {
    for strategy in [Strategy::default(), eager()] {
        let (t, _) = solve_with(g, Query::Trees, &strategy).unwrap();
        assert_eq!(t, count_trees_det(g), "T mismatch on {what}");
        for (u, v) in all_pairs(g.vertex_count()) {
            let (f, _) = solve_with(g, Query::forests(u, v), &strategy).unwrap();
            assert_eq!(
                f,
                count_2forests_det(g, u, v).unwrap(),
                "F({u},{v}) mismatch on {what}"
            );
        }
    }
}

/// Every admissible separator must reproduce the determinant values through
/// the single-step reduction operators.
fn assert_separator_theorems(g: &MultiGraph, what: &str) {
    for (i, j) in find_2separators(g) {
        let sep = match g.split_natural(i, j) {
            Ok(sep) => sep,
            Err(_) => continue, // pair separates only via a cut vertex
        };
        assert_eq!(
            trees_via_separation(&sep).unwrap(),
            count_trees_det(g),
            "trees via {{{i},{j}}} on {what}"
        );
        let swapped = sep.swapped();
        for (u, v) in all_pairs(g.vertex_count()) {
            let want = count_2forests_det(g, u, v).unwrap();
            let got = if sep.in_g1(u).is_some() && sep.in_g1(v).is_some() {
                forests_same_side(&sep, u, v).unwrap()
            } else if sep.in_g2(u).is_some() && sep.in_g2(v).is_some() {
                forests_same_side(&swapped, u, v).unwrap()
            } else if sep.in_g1(u).is_some() {
                forests_cross(&sep, u, v).unwrap()
            } else {
                forests_cross(&swapped, u, v).unwrap()
            };
            assert_eq!(got, want, "F({u},{v}) via {{{i},{j}}} on {what}");
        }
    }
}

#[test]
fn criterion_3_reduction_equals_determinant() {
    let start = Instant::now();
    for n in 4..=12 {
        let g = gen_straight(n).unwrap();
        assert_solve_matches(&g, &format!("H_{n}"));
    }
    // a size where the default strategy genuinely reduces
    assert_solve_matches(&gen_straight(18).unwrap(), "H_18");
    for n in 6..=10 {
        for k in 3..=(n - 3) {
            let g = gen_bent(n, k).unwrap();
            assert_solve_matches(&g, &format!("G_{n}(k={k})"));
        }
    }
    for stage in 0..=2 {
        let s = gen_sierpinski(stage);
        assert_solve_matches(&s.graph, &format!("S_{stage}"));
    }
    for (idx, g) in random_corpus(31, 40, 4, 9).iter().enumerate() {
        assert_solve_matches(g, &format!("random[{idx}]"));
    }

    for n in 4..=9 {
        assert_separator_theorems(&gen_straight(n).unwrap(), &format!("H_{n}"));
    }
    for n in 7..=9 {
        for k in 3..=(n - 3) {
            assert_separator_theorems(&gen_bent(n, k).unwrap(), &format!("G_{n}(k={k})"));
        }
    }
    for stage in 0..=2 {
        assert_separator_theorems(&gen_sierpinski(stage).graph, &format!("S_{stage}"));
    }
    for (idx, g) in random_corpus(32, 15, 4, 8).iter().enumerate() {
        assert_separator_theorems(g, &format!("random[{idx}]"));
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 600, "took {elapsed:?}, budget is 10 min");
    println!("ACCEPTANCE 3 reduction==determinant (two strategies, every admissible separator) in {elapsed:.2?}: PASS");
}

#[test]
fn criterion_4_identification_resistance() {
    let graphs = random_corpus(4, 100, 4, 6);
    let mut checked = 0u64;
    for g in &graphs {
        let n = g.vertex_count();
        for (i, j) in all_pairs(n) {
            let (merged, map) = g.identify(i, j).unwrap();
            for u in 1..=n {
                for v in (u + 1)..=n {
                    let predicted = resistance_identified(g, i, j, u, v).unwrap();
                    let (mu, mv) = (map.apply(u), map.apply(v));
                    let direct = if mu == mv {
                        Ratio::from(Count::from(0))
                    } else {
                        resistance(&merged, mu, mv).unwrap()
                    };
                    assert_eq!(
                        predicted, direct,
                        "identification identity failed: merge({i},{j}), query ({u},{v})"
                    );
                    checked += 1;
                }
            }
        }
    }
    println!("ACCEPTANCE 4 identification resistance identity exact on {checked} quadruples over {} graphs: PASS", graphs.len());
}

#[test]
fn criterion_5_sierpinski() {
    for stage in 0..=3u32 {
        let s = gen_sierpinski(stage);
        let t_det = count_trees_det(&s.graph);
        assert_eq!(
            t_det,
            sierpinski_trees(stage).unwrap(),
            "T(S_{stage}) closed form"
        );
        let [a, b, c] = s.corners;
        let f_det = count_2forests_det(&s.graph, a, b).unwrap();
        assert_eq!(
            f_det,
            sierpinski_corner_forests(stage).unwrap(),
            "F(S_{stage})(a,b) closed form"
        );
        let r = resistance(&s.graph, a, b).unwrap();
        assert_eq!(
            r,
            sierpinski_corner_resistance(stage),
            "r_S{stage}(a,b) = (2/3)(5/3)^{stage}"
        );
        // corner symmetry and the exact F = r * T identity
        assert_eq!(resistance(&s.graph, a, c).unwrap(), r);
        assert_eq!(resistance(&s.graph, b, c).unwrap(), r);
        assert_eq!(
            sierpinski_corner_resistance(stage) * Ratio::from(t_det),
            Ratio::from(f_det)
        );
    }
    println!("ACCEPTANCE 5 Sierpinski stages 0..=3 (42 vertices at stage 3) exact: PASS");
}

#[test]
fn criterion_6_linear_two_tree_closed_forms() {
    let start = Instant::now();
    for n in 4..=14 {
        let g = gen_straight(n).unwrap();
        let t = count_trees_det(&g);
        assert_eq!(t, fib(2 * n as i64 - 2), "T(H_{n})");
        for (u, v) in all_pairs(n) {
            let closed = straight_forest_closed(u, v, n).unwrap();
            assert_eq!(
                closed,
                straight_forest_sum(u, v, n).unwrap(),
                "closed vs sum H_{n}({u},{v})"
            );
            assert_eq!(
                closed,
                count_2forests_det(&g, u, v).unwrap(),
                "closed vs det H_{n}({u},{v})"
            );
            assert_eq!(
                straight_resistance_closed(u, v - u, n).unwrap(),
                Ratio::new(closed, t.clone()),
                "resistance closed form H_{n}({u},{v})"
            );
        }
    }

    for n in 6..=12 {
        for k in 3..=(n - 3) {
            let g = gen_bent(n, k).unwrap();
            let t = count_trees_det(&g);
            assert_eq!(t, fib(2 * n as i64 - 2), "T(G_{n}) bend {k}");
            for (u, v) in all_pairs(n) {
                assert_eq!(
                    bent_forest(u, v, n, k).unwrap(),
                    count_2forests_det(&g, u, v).unwrap(),
                    "bent closed form G_{n}(k={k})({u},{v})"
                );
            }
            // strictly fewer separating 2-forests across the bend
            for u in 1..=k {
                for v in (k + 2)..=n {
                    assert!(
                        bent_forest(u, v, n, k).unwrap()
                            < straight_forest_closed(u, v, n).unwrap(),
                        "strict drop G_{n}(k={k})({u},{v})"
                    );
                }
            }
            // end pair: the four-Fibonacci correction
            let (nn, kk) = (n as i64, k as i64);
            assert_eq!(
                bent_forest(1, n, n, k).unwrap(),
                straight_forest_closed(1, n, n).unwrap()
                    - fib(kk - 2) * fib(kk + 1) * fib(nn - kk - 2) * fib(nn - kk + 1)
            );
            // end-to-end resistance closed form vs F/T
            assert_eq!(
                bent_end_resistance(n, k).unwrap(),
                resistance(&g, 1, n).unwrap(),
                "end resistance G_{n}(k={k})"
            );
        }
    }

    // growth, not a limit: monotone increase out to n = 60
    let mut prev = bent_end_resistance(6, 3).unwrap();
    for n in 7..=60 {
        let next = bent_end_resistance(n, 3).unwrap();
        assert!(next > prev, "r_(G_{n})(1,n) must keep growing");
        prev = next;
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 600, "took {elapsed:?}, budget is 10 min");
    println!("ACCEPTANCE 6 linear 2-tree closed forms (straight n<=14, bent n<=12) in {elapsed:.2?}: PASS");
}

#[test]
fn criterion_7_pseudoinverse_cross_check() {
    let mut graphs = Vec::new();
    for n in 2..=5 {
        graphs.extend(connected_simple_graphs(n));
    }
    graphs.extend(multiplicity2_corpus());
    graphs.extend(random_corpus(7, 50, 4, 9));
    let mut worst = 0f64;
    for g in &graphs {
        for (u, v) in all_pairs(g.vertex_count()) {
            let err = pinv_relative_error(g, u, v).unwrap();
            worst = worst.max(err);
            assert!(
                err <= 1e-9,
                "pseudoinverse off by {err:.3e} at ({u},{v}) on {g:?}"
            );
        }
    }
    println!(
        "ACCEPTANCE 7 pseudoinverse within 1e-9 on {} graphs (worst {worst:.3e}): PASS",
        graphs.len()
    );
}

#[test]
fn criterion_8_benchmark_sanity() {
    let n = 200;
    let g = gen_straight(n).unwrap();
    let start = Instant::now();

    reset_bigint_muls();
    let det_start = Instant::now();
    let t_det = count_trees_det(&g);
    let det_time = det_start.elapsed();
    let det_muls = bigint_muls();

    reset_bigint_muls();
    let reduce_start = Instant::now();
    let (t_reduce, _) = solve_with(&g, Query::Trees, &Strategy::default()).unwrap();
    let reduce_time = reduce_start.elapsed();
    let reduce_muls = bigint_muls();

    assert_eq!(t_reduce, t_det, "reduce and det disagree on T(H_{n})");
    assert_eq!(t_det, fib(2 * n as i64 - 2), "closed-form anchor");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}, budget is 60 s");
    println!(
        "ACCEPTANCE 8 straight n={n}: det {det_time:.2?} ({det_muls} bigint muls), reduce {reduce_time:.2?} ({reduce_muls} bigint muls), equal: PASS"
    );
}
