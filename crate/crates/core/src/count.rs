//! The three counting primitives: spanning trees `T(G)`, separating spanning
//! 2-forests `F_G(u,v)`, and the pair variant `F_G(u,{v,w})`, each computed
//! from Laplacian minors.  A brute-force subset-enumeration oracle provides
//! an independent route for verification.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::Count;
use crate::graph::{MultiGraph, Vertex};

/// Default cap on edge instances for the enumeration oracle; C(24,12) keeps
/// the worst case under three million subsets.
pub const DEFAULT_ENUM_CAP: usize = 24;

/// `T(G)` as the determinant of the Laplacian with row/column of vertex `j`
/// deleted.  The result does not depend on `j`.
pub fn count_trees_det_at(g: &MultiGraph, j: Vertex) -> Result<Count> {
    if j == 0 || j > g.vertex_count() {
        return Err(Error::VertexOutOfRange {
            v: j,
            n: g.vertex_count(),
        });
    }
    if g.vertex_count() == 1 {
        return Ok(Count::one());
    }
    let drop: BTreeSet<usize> = [j - 1].into_iter().collect();
    let det = g.laplacian().minor(&drop, &drop)?.det_exact();
    debug_assert!(!det.is_negative(), "tree count came out negative");
    Ok(det)
}

/// `T(G)`: number of spanning trees.  Zero iff disconnected (for n >= 2);
/// one for the single-vertex graph.
pub fn count_trees_det(g: &MultiGraph) -> Count {
    if g.vertex_count() == 0 {
        return Count::one();
    }
    count_trees_det_at(g, 1).expect("vertex 1 exists")
}

/// `F_G(u,v)`: spanning 2-forests separating `u` and `v`, as the determinant
/// of the Laplacian with rows and columns `u, v` deleted.
pub fn count_2forests_det(g: &MultiGraph, u: Vertex, v: Vertex) -> Result<Count> {
    check_pair(g, u, v)?;
    let drop: BTreeSet<usize> = [u - 1, v - 1].into_iter().collect();
    let det = g.laplacian().minor(&drop, &drop)?.det_exact();
    debug_assert!(!det.is_negative(), "2-forest count came out negative");
    Ok(det)
}

/// `F_G(u, {v,w})`: spanning 2-forests with `v` and `w` together and `u`
/// apart, via `(F(v,u) + F(w,u) - F(v,w)) / 2`.  An odd numerator signals a
/// counting bug, never bad input.
pub fn count_2forests_pair(g: &MultiGraph, u: Vertex, v: Vertex, w: Vertex) -> Result<Count> {
    if u == v || u == w {
        return Err(Error::NotDistinct(u));
    }
    let num = count_2forests_det(g, v, u)? + count_2forests_det(g, w, u)?
        - count_2forests_det(g, v, w)?;
    let (half, rem) = num.div_rem(&BigInt::from(2));
    if !rem.is_zero() {
        return Err(Error::Internal(format!(
            "pair 2-forest numerator F({v},{u})+F({w},{u})-F({v},{w}) is odd"
        )));
    }
    Ok(half)
}

fn check_pair(g: &MultiGraph, u: Vertex, v: Vertex) -> Result<()> {
    for x in [u, v] {
        if x == 0 || x > g.vertex_count() {
            return Err(Error::VertexOutOfRange {
                v: x,
                n: g.vertex_count(),
            });
        }
    }
    if u == v {
        return Err(Error::NotDistinct(u));
    }
    Ok(())
}

#[derive(Clone)]
struct Dsu {
    parent: Vec<u32>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.parent[ra as usize] = rb;
    }
}

/// Parallel edges expanded to distinct instances: the oracle counts subgraph
/// choices, and two parallel edges are two different spanning trees of a
/// doubled K2.
fn instances(g: &MultiGraph, cap: usize) -> Result<Vec<(u32, u32)>> {
    let total = g.total_multiplicity() as usize;
    if total > cap {
        return Err(Error::EnumerationCap {
            instances: total,
            cap,
        });
    }
    let mut out = Vec::with_capacity(total);
    for (u, v, mult) in g.edges() {
        for _ in 0..mult {
            out.push((u as u32 - 1, v as u32 - 1));
        }
    }
    Ok(out)
}

/// Visit every acyclic subset of exactly `need` instances, lexicographically.
fn walk_forests(inst: &[(u32, u32)], idx: usize, need: usize, dsu: &mut Dsu, f: &mut impl FnMut(&mut Dsu)) {
    if need == 0 {
        f(dsu);
        return;
    }
    if inst.len() - idx < need {
        return;
    }
    let (a, b) = inst[idx];
    if dsu.find(a) != dsu.find(b) {
        let mut branch = dsu.clone();
        branch.union(a, b);
        walk_forests(inst, idx + 1, need - 1, &mut branch, f);
    }
    walk_forests(inst, idx + 1, need, dsu, f);
}

/// Oracle: count spanning trees by iterating acyclic (n-1)-subsets of edge
/// instances.  Rejected if the instance count exceeds `cap`.
pub fn enumerate_trees_capped(g: &MultiGraph, cap: usize) -> Result<Count> {
    let n = g.vertex_count();
    if n == 0 {
        return Ok(Count::one());
    }
    let inst = instances(g, cap)?;
    let mut count = Count::zero();
    // acyclic with n-1 edges is automatically spanning and connected
    walk_forests(&inst, 0, n - 1, &mut Dsu::new(n), &mut |_| count += 1);
    Ok(count)
}

pub fn enumerate_trees(g: &MultiGraph) -> Result<Count> {
    enumerate_trees_capped(g, DEFAULT_ENUM_CAP)
}

/// Oracle: count spanning 2-forests separating `u` and `v` by iterating
/// acyclic (n-2)-subsets and keeping those with `u`, `v` in different
/// components.
pub fn enumerate_2forests_capped(g: &MultiGraph, u: Vertex, v: Vertex, cap: usize) -> Result<Count> {
    check_pair(g, u, v)?;
    let n = g.vertex_count();
    let inst = instances(g, cap)?;
    let (ui, vi) = (u as u32 - 1, v as u32 - 1);
    let mut count = Count::zero();
    walk_forests(&inst, 0, n - 2, &mut Dsu::new(n), &mut |dsu| {
        if dsu.find(ui) != dsu.find(vi) {
            count += 1;
        }
    });
    Ok(count)
}

pub fn enumerate_2forests(g: &MultiGraph, u: Vertex, v: Vertex) -> Result<Count> {
    enumerate_2forests_capped(g, u, v, DEFAULT_ENUM_CAP)
}

/// Oracle, batched: `F_G(u,v)` for every vertex pair in one subset sweep.
pub fn enumerate_2forests_all_capped(
    g: &MultiGraph,
    cap: usize,
) -> Result<BTreeMap<(Vertex, Vertex), Count>> {
    let n = g.vertex_count();
    let inst = instances(g, cap)?;
    let mut counts: BTreeMap<(Vertex, Vertex), u64> = BTreeMap::new();
    if n >= 2 {
        let mut roots = vec![0u32; n];
        walk_forests(&inst, 0, n - 2, &mut Dsu::new(n), &mut |dsu| {
            for (x, root) in roots.iter_mut().enumerate() {
                *root = dsu.find(x as u32);
            }
            for a in 0..n {
                for b in (a + 1)..n {
                    if roots[a] != roots[b] {
                        *counts.entry((a + 1, b + 1)).or_insert(0) += 1;
                    }
                }
            }
        });
    }
    let mut out = BTreeMap::new();
    for a in 1..=n {
        for b in (a + 1)..=n {
            out.insert((a, b), Count::from(counts.get(&(a, b)).copied().unwrap_or(0)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> MultiGraph {
        MultiGraph::simple(3, &[(1, 2), (2, 3), (1, 3)]).unwrap()
    }

    /// Straight linear 2-tree on n vertices, built inline to keep this
    /// module independent of the family generators.
    fn h(n: usize) -> MultiGraph {
        let mut edges = vec![];
        for i in 1..n {
            edges.push((i, i + 1));
        }
        for i in 1..(n - 1) {
            edges.push((i, i + 2));
        }
        MultiGraph::simple(n, &edges).unwrap()
    }

    #[test]
    fn triangle_counts() {
        assert_eq!(count_trees_det(&k3()), Count::from(3));
        assert_eq!(enumerate_trees(&k3()).unwrap(), Count::from(3));
        assert_eq!(count_2forests_det(&k3(), 1, 2).unwrap(), Count::from(2));
        assert_eq!(enumerate_2forests(&k3(), 1, 2).unwrap(), Count::from(2));
    }

    #[test]
    fn tree_count_independent_of_dropped_vertex() {
        let g = h(6);
        let want = count_trees_det(&g);
        for j in 1..=6 {
            assert_eq!(count_trees_det_at(&g, j).unwrap(), want);
        }
    }

    #[test]
    fn straight_two_tree_counts_are_fibonacci() {
        // T(H_n) = F_{2n-2}: H_4 -> 8, H_5 -> 21, H_7 -> 144
        assert_eq!(count_trees_det(&h(4)), Count::from(8));
        assert_eq!(count_trees_det(&h(5)), Count::from(21));
        assert_eq!(enumerate_trees(&h(5)).unwrap(), Count::from(21));
        assert_eq!(count_trees_det(&h(7)), Count::from(144));
        assert_eq!(count_2forests_det(&h(7), 2, 4).unwrap(), Count::from(81));
    }

    #[test]
    fn parallel_edges_are_distinct_trees() {
        let d = MultiGraph::build(2, &[(1, 2, 2)]).unwrap();
        assert_eq!(count_trees_det(&d), Count::from(2));
        assert_eq!(enumerate_trees(&d).unwrap(), Count::from(2));
        assert_eq!(count_2forests_det(&d, 1, 2).unwrap(), Count::one());
    }

    #[test]
    fn disconnected_graphs() {
        let g = MultiGraph::simple(4, &[(1, 2), (3, 4)]).unwrap();
        assert_eq!(count_trees_det(&g), Count::zero());
        assert_eq!(enumerate_trees(&g).unwrap(), Count::zero());
        assert_eq!(
            count_2forests_det(&g, 1, 3).unwrap(),
            enumerate_2forests(&g, 1, 3).unwrap()
        );
        assert_eq!(
            count_2forests_det(&g, 1, 2).unwrap(),
            enumerate_2forests(&g, 1, 2).unwrap()
        );
    }

    #[test]
    fn single_edge_and_single_vertex() {
        let e = MultiGraph::simple(2, &[(1, 2)]).unwrap();
        assert_eq!(count_2forests_det(&e, 1, 2).unwrap(), Count::one());
        assert_eq!(enumerate_2forests(&e, 1, 2).unwrap(), Count::one());
        let v = MultiGraph::empty(1);
        assert_eq!(count_trees_det(&v), Count::one());
        assert_eq!(enumerate_trees(&v).unwrap(), Count::one());
    }

    #[test]
    fn pair_counts() {
        // triangle: only the {2,3} edge with 1 isolated
        assert_eq!(count_2forests_pair(&k3(), 1, 2, 3).unwrap(), Count::one());
        let p = MultiGraph::simple(3, &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(count_2forests_pair(&p, 1, 2, 3).unwrap(), Count::one());
        assert!(count_2forests_pair(&k3(), 1, 1, 3).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let g = MultiGraph::build(2, &[(1, 2, 30)]).unwrap();
        match enumerate_trees(&g) {
            Err(Error::EnumerationCap { instances: 30, cap: 24 }) => {}
            other => panic!("unexpected: {other:?}"),
        }
        assert!(enumerate_trees_capped(&g, 30).is_ok());
    }

    #[test]
    fn batched_oracle_matches_single_pair() {
        let g = h(5);
        let all = enumerate_2forests_all_capped(&g, DEFAULT_ENUM_CAP).unwrap();
        for u in 1..=5 {
            for v in (u + 1)..=5 {
                assert_eq!(all[&(u, v)], enumerate_2forests(&g, u, v).unwrap());
            }
        }
    }
}
