//! Cross-module identities checked over the shared corpora: the counting
//! lemmas, 2-switch and separator-choice invariance, the resistance
//! reduction theorems against the F/T route, and metric structure.

use twoforest::corpus::{connected_simple_graphs, multiplicity2_corpus, random_corpus};
use twoforest::count::{count_2forests_det, count_2forests_pair, count_trees_det};
use twoforest::families::{gen_bent, gen_straight};
use twoforest::graph::{Side, SplitSpec};
use twoforest::resistance::{
    resistance, resistance_cross, resistance_identified, resistance_same_side,
};
use twoforest::separation::{
    find_2separators, forests_cross, forests_same_side, solve_with, trees_via_separation, Query,
    SeparatorChoice, Strategy,
};
use twoforest::{Count, MultiGraph, Ratio, Vertex};

fn corpus() -> Vec<MultiGraph> {
    let mut graphs = Vec::new();
    for n in 2..=5 {
        graphs.extend(connected_simple_graphs(n));
    }
    graphs.extend(multiplicity2_corpus());
    graphs.extend(random_corpus(99, 30, 4, 7));
    graphs
}

fn pairs(n: usize) -> impl Iterator<Item = (Vertex, Vertex)> {
    (1..=n).flat_map(move |u| ((u + 1)..=n).map(move |v| (u, v)))
}

#[test]
fn forest_splitting_lemma_and_parity() {
    // F(x,z) = F({x,y},z) + F(x,{y,z}) for all ordered triples, and the
    // halved pair count is integral (parity of the three-term sum)
    for g in corpus() {
        let n = g.vertex_count();
        if n < 3 {
            continue;
        }
        for x in 1..=n {
            for y in 1..=n {
                for z in 1..=n {
                    if x == y || y == z || x == z {
                        continue;
                    }
                    let whole = count_2forests_det(&g, x, z).unwrap();
                    let pair_xy = count_2forests_pair(&g, z, x, y).unwrap();
                    let pair_yz = count_2forests_pair(&g, x, y, z).unwrap();
                    assert_eq!(whole, pair_xy + pair_yz, "triple ({x},{y},{z})");
                }
            }
        }
    }
}

#[test]
fn identification_matches_pair_separation() {
    // T(G/ij) = F_G(i,j) for every pair
    for g in corpus() {
        for (i, j) in pairs(g.vertex_count()) {
            let (merged, _) = g.identify(i, j).unwrap();
            assert_eq!(
                count_trees_det(&merged),
                count_2forests_det(&g, i, j).unwrap(),
                "merge ({i},{j})"
            );
        }
    }
}

#[test]
fn forest_counts_are_symmetric_and_nonnegative() {
    for g in corpus() {
        for (u, v) in pairs(g.vertex_count()) {
            let f = count_2forests_det(&g, u, v).unwrap();
            assert_eq!(f, count_2forests_det(&g, v, u).unwrap());
            assert!(f >= Count::from(0));
        }
        assert!(count_trees_det(&g) >= Count::from(0));
    }
}

#[test]
fn two_switch_preserves_trees_and_same_side_counts() {
    for g in corpus() {
        for (i, j) in find_2separators(&g) {
            let sep = match g.split_natural(i, j) {
                Ok(sep) => sep,
                Err(_) => continue,
            };
            let switched = sep.two_switch();
            assert_eq!(count_trees_det(&switched), count_trees_det(&g));
            // side 1 keeps its labels; side 2 labels pass through the swap
            let swap = |x: Vertex| {
                if x == i {
                    j
                } else if x == j {
                    i
                } else {
                    x
                }
            };
            for (u, v) in pairs(g.vertex_count()) {
                if sep.in_g1(u).is_some() && sep.in_g1(v).is_some() {
                    assert_eq!(
                        count_2forests_det(&switched, u, v).unwrap(),
                        count_2forests_det(&g, u, v).unwrap(),
                        "side-1 pair ({u},{v}) at {{{i},{j}}}"
                    );
                } else if sep.in_g2(u).is_some() && sep.in_g2(v).is_some() {
                    assert_eq!(
                        count_2forests_det(&switched, swap(u), swap(v)).unwrap(),
                        count_2forests_det(&g, u, v).unwrap(),
                        "side-2 pair ({u},{v}) at {{{i},{j}}}"
                    );
                }
            }
        }
    }
}

#[test]
fn separation_identities_hold_for_any_valid_assignment() {
    // flip direct-edge placement and component sides; the counts must not move
    for g in random_corpus(17, 25, 5, 8) {
        for (i, j) in find_2separators(&g) {
            let comps = {
                let set: std::collections::BTreeSet<Vertex> = [i, j].into_iter().collect();
                g.components_excluding(&set)
            };
            let direct = g.multiplicity(i, j);
            let assignments = {
                let mut out = Vec::new();
                for flip in [false, true] {
                    for d1 in 0..=direct {
                        let sides: Vec<Side> = (0..comps.len())
                            .map(|idx| {
                                let first = idx == 0;
                                if first != flip {
                                    Side::One
                                } else {
                                    Side::Two
                                }
                            })
                            .collect();
                        out.push(SplitSpec {
                            side_of_component: sides,
                            direct_to_side1: d1,
                        });
                    }
                }
                out
            };
            for spec in assignments {
                let sep = match g.split(i, j, &spec) {
                    Ok(sep) => sep,
                    Err(_) => continue,
                };
                assert_eq!(
                    trees_via_separation(&sep).unwrap(),
                    count_trees_det(&g),
                    "T at {{{i},{j}}} with {spec:?}"
                );
                let swapped = sep.swapped();
                for (u, v) in pairs(g.vertex_count()) {
                    let want = count_2forests_det(&g, u, v).unwrap();
                    let got = if sep.in_g1(u).is_some() && sep.in_g1(v).is_some() {
                        forests_same_side(&sep, u, v).unwrap()
                    } else if sep.in_g2(u).is_some() && sep.in_g2(v).is_some() {
                        forests_same_side(&swapped, u, v).unwrap()
                    } else if sep.in_g1(u).is_some() {
                        forests_cross(&sep, u, v).unwrap()
                    } else {
                        forests_cross(&swapped, u, v).unwrap()
                    };
                    assert_eq!(got, want, "F({u},{v}) at {{{i},{j}}} with {spec:?}");
                }
            }
        }
    }
}

#[test]
fn solve_is_strategy_invariant() {
    let strategies = [
        Strategy::default(),
        Strategy {
            det_threshold: 3,
            choice: SeparatorChoice::Lexicographic,
        },
        Strategy {
            det_threshold: 5,
            choice: SeparatorChoice::Balanced,
        },
        Strategy {
            det_threshold: 4,
            choice: SeparatorChoice::Lexicographic,
        },
    ];
    for g in random_corpus(23, 20, 5, 9) {
        let want_t = count_trees_det(&g);
        for strategy in &strategies {
            let (t, _) = solve_with(&g, Query::Trees, strategy).unwrap();
            assert_eq!(t, want_t);
        }
        for (u, v) in pairs(g.vertex_count()) {
            let want = count_2forests_det(&g, u, v).unwrap();
            for strategy in &strategies {
                let (f, _) = solve_with(&g, Query::forests(u, v), strategy).unwrap();
                assert_eq!(f, want, "F({u},{v}) strategy {strategy:?}");
            }
        }
    }
}

#[test]
fn resistance_is_a_metric() {
    for g in corpus() {
        let n = g.vertex_count();
        for (u, v) in pairs(n) {
            let r = resistance(&g, u, v).unwrap();
            assert!(r > Ratio::from(Count::from(0)), "positivity ({u},{v})");
            assert_eq!(r, resistance(&g, v, u).unwrap(), "symmetry ({u},{v})");
            for w in 1..=n {
                if w == u || w == v {
                    continue;
                }
                let via = resistance(&g, u, w).unwrap() + resistance(&g, w, v).unwrap();
                assert!(r <= via, "triangle inequality ({u},{w},{v})");
            }
        }
    }
}

#[test]
fn resistance_reductions_match_f_over_t() {
    for g in corpus() {
        if g.vertex_count() < 4 {
            continue;
        }
        for (i, j) in find_2separators(&g) {
            let sep = match g.split_natural(i, j) {
                Ok(sep) => sep,
                Err(_) => continue,
            };
            let swapped = sep.swapped();
            for (u, v) in pairs(g.vertex_count()) {
                let want = resistance(&g, u, v).unwrap();
                let got = if sep.in_g1(u).is_some() && sep.in_g1(v).is_some() {
                    resistance_same_side(&sep, u, v).unwrap()
                } else if sep.in_g2(u).is_some() && sep.in_g2(v).is_some() {
                    resistance_same_side(&swapped, u, v).unwrap()
                } else if sep.in_g1(u).is_some() {
                    resistance_cross(&sep, u, v).unwrap()
                } else {
                    resistance_cross(&swapped, u, v).unwrap()
                };
                assert_eq!(got, want, "r({u},{v}) at {{{i},{j}}}");
            }
        }
    }
}

#[test]
fn identification_resistance_on_exhaustive_small_graphs() {
    for g in connected_simple_graphs(4) {
        let n = g.vertex_count();
        for (i, j) in pairs(n) {
            let (merged, map) = g.identify(i, j).unwrap();
            for (u, v) in pairs(n) {
                let predicted = resistance_identified(&g, i, j, u, v).unwrap();
                let (mu, mv) = (map.apply(u), map.apply(v));
                let direct = if mu == mv {
                    Ratio::from(Count::from(0))
                } else {
                    resistance(&merged, mu, mv).unwrap()
                };
                assert_eq!(predicted, direct, "merge ({i},{j}) query ({u},{v})");
            }
        }
    }
}

#[test]
fn bend_never_increases_resistance() {
    for n in 6..=10 {
        let straight = gen_straight(n).unwrap();
        for k in 3..=(n - 3) {
            let bent = gen_bent(n, k).unwrap();
            for u in 1..=k {
                for v in (k + 2)..=n {
                    assert!(
                        resistance(&bent, u, v).unwrap() <= resistance(&straight, u, v).unwrap(),
                        "n={n} k={k} ({u},{v})"
                    );
                }
            }
        }
    }
}
