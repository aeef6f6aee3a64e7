//! Loopless undirected multigraphs with edge multiplicities, plus the
//! structural operations everything else is built on: vertex identification,
//! deletion, splitting along a 2-separator, the 2-switch, connectivity.
//!
//! Vertices are always the labels `1..=n`.  Operations that remove or merge
//! vertices relabel compactly and report the relabeling through a
//! [`VertexMap`], so callers can keep speaking original labels.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::IntMatrix;

pub type Vertex = usize;

fn key(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Undirected multigraph without loops.  The edge map stores unordered pairs
/// `(u, v)` with `u < v` and multiplicity at least 1; absent pairs have
/// multiplicity 0.  Values are immutable after construction: every operation
/// returns a new graph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiGraph {
    n: usize,
    edges: BTreeMap<(Vertex, Vertex), u64>,
}

impl MultiGraph {
    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        MultiGraph {
            n,
            edges: BTreeMap::new(),
        }
    }

    /// Build from an edge list; duplicate pairs accumulate multiplicity.
    pub fn build(n: usize, edge_list: &[(Vertex, Vertex, u64)]) -> Result<Self> {
        let mut g = MultiGraph::empty(n);
        for &(u, v, mult) in edge_list {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(Error::LoopEdge(u));
            }
            if mult == 0 {
                return Err(Error::ZeroMultiplicity);
            }
            *g.edges.entry(key(u, v)).or_insert(0) += mult;
        }
        Ok(g)
    }

    /// Build a simple graph (all multiplicities 1).
    pub fn simple(n: usize, pairs: &[(Vertex, Vertex)]) -> Result<Self> {
        let list: Vec<(Vertex, Vertex, u64)> = pairs.iter().map(|&(u, v)| (u, v, 1)).collect();
        MultiGraph::build(n, &list)
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v == 0 || v > self.n {
            return Err(Error::VertexOutOfRange { v, n: self.n });
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Number of distinct edge pairs (ignoring multiplicity).
    pub fn edge_pair_count(&self) -> usize {
        self.edges.len()
    }

    /// Total number of edge instances, multiplicities included.
    pub fn total_multiplicity(&self) -> u64 {
        self.edges.values().sum()
    }

    pub fn multiplicity(&self, u: Vertex, v: Vertex) -> u64 {
        if u == v {
            return 0;
        }
        self.edges.get(&key(u, v)).copied().unwrap_or(0)
    }

    /// Iterate `(u, v, mult)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex, u64)> + '_ {
        self.edges.iter().map(|(&(u, v), &m)| (u, v, m))
    }

    /// Degree counting multiplicities.
    pub fn degree(&self, v: Vertex) -> u64 {
        self.edges
            .iter()
            .filter(|(&(a, b), _)| a == v || b == v)
            .map(|(_, &m)| m)
            .sum()
    }

    pub fn neighbors(&self, v: Vertex) -> Vec<Vertex> {
        let mut out = Vec::new();
        for &(a, b) in self.edges.keys() {
            if a == v {
                out.push(b);
            } else if b == v {
                out.push(a);
            }
        }
        out.sort_unstable();
        out
    }

    /// Combinatorial Laplacian: degrees on the diagonal, minus multiplicities
    /// off it.  Row index `r` corresponds to vertex `r + 1`.
    pub fn laplacian(&self) -> IntMatrix {
        let mut m = IntMatrix::zero(self.n);
        for (u, v, mult) in self.edges() {
            let w = BigInt::from(mult);
            m.set(u - 1, v - 1, -w.clone());
            m.set(v - 1, u - 1, -w.clone());
            let du = m.get(u - 1, u - 1) + &w;
            m.set(u - 1, u - 1, du);
            let dv = m.get(v - 1, v - 1) + &w;
            m.set(v - 1, v - 1, dv);
        }
        m
    }

    /// Connected components as a partition of `1..=n`; each component sorted
    /// ascending, components ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        self.components_excluding(&BTreeSet::new())
    }

    /// Components of the graph induced on `1..=n` minus `excluded`.
    pub fn components_excluding(&self, excluded: &BTreeSet<Vertex>) -> Vec<Vec<Vertex>> {
        let mut adj: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
        for v in 1..=self.n {
            if !excluded.contains(&v) {
                adj.insert(v, Vec::new());
            }
        }
        for (u, v, _) in self.edges() {
            if !excluded.contains(&u) && !excluded.contains(&v) {
                adj.get_mut(&u).unwrap().push(v);
                adj.get_mut(&v).unwrap().push(u);
            }
        }
        let mut seen: BTreeSet<Vertex> = BTreeSet::new();
        let mut out = Vec::new();
        for v in 1..=self.n {
            if excluded.contains(&v) || seen.contains(&v) {
                continue;
            }
            let mut comp = vec![];
            let mut stack = vec![v];
            seen.insert(v);
            while let Some(x) = stack.pop() {
                comp.push(x);
                for &y in &adj[&x] {
                    if seen.insert(y) {
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Identify vertices `i` and `j` into one.  The merged vertex takes the
    /// smaller label's position; any `{i,j}` edge disappears; common
    /// neighbors produce parallel edges.  Relabeling is compact.
    pub fn identify(&self, i: Vertex, j: Vertex) -> Result<(MultiGraph, VertexMap)> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        if i == j {
            return Err(Error::NotDistinct(i));
        }
        let (a, b) = key(i, j);
        let mut map = BTreeMap::new();
        for v in 1..=self.n {
            let img = if v == b {
                a
            } else if v > b {
                v - 1
            } else {
                v
            };
            map.insert(v, img);
        }
        let vmap = VertexMap { map };
        let mut g = MultiGraph::empty(self.n - 1);
        for (u, v, mult) in self.edges() {
            let (nu, nv) = (vmap.apply(u), vmap.apply(v));
            if nu == nv {
                continue; // the {i,j} edge disappears
            }
            *g.edges.entry(key(nu, nv)).or_insert(0) += mult;
        }
        Ok((g, vmap))
    }

    /// Remove vertex `u` and its incident edges, relabeling compactly.
    /// The returned map has no entry for `u`.
    pub fn delete_vertex(&self, u: Vertex) -> Result<(MultiGraph, VertexMap)> {
        self.check_vertex(u)?;
        if self.n < 2 {
            return Err(Error::TooFewVertices { needed: 2, has: self.n });
        }
        let mut map = BTreeMap::new();
        for v in 1..=self.n {
            if v == u {
                continue;
            }
            map.insert(v, if v > u { v - 1 } else { v });
        }
        let vmap = VertexMap { map };
        let mut g = MultiGraph::empty(self.n - 1);
        for (x, y, mult) in self.edges() {
            if x == u || y == u {
                continue;
            }
            g.edges.insert(key(vmap.apply(x), vmap.apply(y)), mult);
        }
        Ok((g, vmap))
    }

    /// Subgraph induced on `verts`, compactly relabeled in ascending order.
    pub fn induced(&self, verts: &BTreeSet<Vertex>) -> (MultiGraph, VertexMap) {
        let mut map = BTreeMap::new();
        for (idx, &v) in verts.iter().enumerate() {
            map.insert(v, idx + 1);
        }
        let vmap = VertexMap { map };
        let mut g = MultiGraph::empty(verts.len());
        for (u, v, mult) in self.edges() {
            if verts.contains(&u) && verts.contains(&v) {
                g.edges.insert(key(vmap.apply(u), vmap.apply(v)), mult);
            }
        }
        (g, vmap)
    }

    /// Split along the 2-separator `{i,j}` into two edge-disjoint sides
    /// sharing exactly `i` and `j`.
    pub fn split(&self, i: Vertex, j: Vertex, spec: &SplitSpec) -> Result<TwoSeparation> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        if i == j {
            return Err(Error::NotDistinct(i));
        }
        let sep: BTreeSet<Vertex> = [i, j].into_iter().collect();
        let comps = self.components_excluding(&sep);
        let reject = |reason: &str| Error::NotASeparator {
            i,
            j,
            reason: reason.to_string(),
        };
        if comps.len() < 2 {
            return Err(reject("removal leaves a connected remainder"));
        }
        if spec.side_of_component.len() != comps.len() {
            return Err(reject(&format!(
                "side assignment covers {} components, graph has {}",
                spec.side_of_component.len(),
                comps.len()
            )));
        }
        let direct = self.multiplicity(i, j);
        if spec.direct_to_side1 > direct {
            return Err(reject(&format!(
                "{} direct {{i,j}} instances assigned to side 1, only {} exist",
                spec.direct_to_side1, direct
            )));
        }
        let mut side_verts = [BTreeSet::from([i, j]), BTreeSet::from([i, j])];
        for (comp, side) in comps.iter().zip(&spec.side_of_component) {
            let idx = match side {
                Side::One => 0,
                Side::Two => 1,
            };
            side_verts[idx].extend(comp.iter().copied());
        }
        if side_verts[0].len() < 3 || side_verts[1].len() < 3 {
            return Err(reject("each side needs a vertex outside the separator"));
        }
        let (mut g1, map1) = self.induced(&side_verts[0]);
        let (mut g2, map2) = self.induced(&side_verts[1]);
        // the induced subgraphs both picked up every direct {i,j} instance;
        // reapportion them per the assignment
        if direct > 0 {
            let k1 = key(map1.apply(i), map1.apply(j));
            let k2 = key(map2.apply(i), map2.apply(j));
            if spec.direct_to_side1 == 0 {
                g1.edges.remove(&k1);
            } else {
                g1.edges.insert(k1, spec.direct_to_side1);
            }
            if spec.direct_to_side1 == direct {
                g2.edges.remove(&k2);
            } else {
                g2.edges.insert(k2, direct - spec.direct_to_side1);
            }
        }
        // a valid side must hang together: every piece reaches the separator
        // copies (this is what rules out pairs that only separate because one
        // of them is already a cut vertex)
        if !g1.connected() || !g2.connected() {
            return Err(reject("a side is disconnected from the separator"));
        }
        Ok(TwoSeparation {
            orig_n: self.n,
            i,
            j,
            g1,
            map1,
            g2,
            map2,
        })
    }

    /// Split with the default assignment: the component containing the
    /// smallest vertex goes to side 1, everything else to side 2, and direct
    /// `{i,j}` edges go to side 1.
    pub fn split_natural(&self, i: Vertex, j: Vertex) -> Result<TwoSeparation> {
        let sep: BTreeSet<Vertex> = [i, j].into_iter().collect();
        let comps = self.components_excluding(&sep);
        let mut side_of_component = vec![Side::Two; comps.len()];
        if !side_of_component.is_empty() {
            side_of_component[0] = Side::One;
        }
        self.split(
            i,
            j,
            &SplitSpec {
                side_of_component,
                direct_to_side1: self.multiplicity(i, j),
            },
        )
    }
}

/// Which side of a separation an edge or component is assigned to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    One,
    Two,
}

/// Assignment of the pieces of `G - {i,j}` to the two sides of a split.
///
/// Edges not incident to the separator are forced to the side of their
/// component, so the free choices are exactly: one side per component
/// (indexed in [`MultiGraph::components_excluding`] order) and how many of
/// the direct `{i,j}` edge instances go to side 1.
#[derive(Clone, Debug)]
pub struct SplitSpec {
    pub side_of_component: Vec<Side>,
    pub direct_to_side1: u64,
}

/// Relabeling produced by identify / delete / induced: old label to new.
/// Injective on surviving vertices; a merged pair maps to one label; a
/// deleted vertex has no entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexMap {
    map: BTreeMap<Vertex, Vertex>,
}

impl VertexMap {
    pub fn get(&self, v: Vertex) -> Option<Vertex> {
        self.map.get(&v).copied()
    }

    /// Map a vertex that must survive; panics if it does not.
    pub fn apply(&self, v: Vertex) -> Vertex {
        self.map[&v]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.map.iter().map(|(&a, &b)| (a, b))
    }

    /// Inverse image, smallest preimage first when the map merged vertices.
    pub fn preimage(&self, new: Vertex) -> Option<Vertex> {
        self.map.iter().find(|(_, &b)| b == new).map(|(&a, _)| a)
    }
}

/// A 2-separation: separator `{i, j}` in original labels, the two sides as
/// compact graphs, and the maps from original labels into each side.
#[derive(Clone, Debug)]
pub struct TwoSeparation {
    orig_n: usize,
    pub i: Vertex,
    pub j: Vertex,
    pub g1: MultiGraph,
    pub map1: VertexMap,
    pub g2: MultiGraph,
    pub map2: VertexMap,
}

impl TwoSeparation {
    /// The separator pair as labeled inside side 1.
    pub fn sep_in_g1(&self) -> (Vertex, Vertex) {
        (self.map1.apply(self.i), self.map1.apply(self.j))
    }

    /// The separator pair as labeled inside side 2.
    pub fn sep_in_g2(&self) -> (Vertex, Vertex) {
        (self.map2.apply(self.i), self.map2.apply(self.j))
    }

    /// Side-1 label of an original vertex, if it lies on side 1.
    pub fn in_g1(&self, v: Vertex) -> Option<Vertex> {
        self.map1.get(v)
    }

    /// Side-2 label of an original vertex, if it lies on side 2.
    pub fn in_g2(&self, v: Vertex) -> Option<Vertex> {
        self.map2.get(v)
    }

    /// The same separation with the two sides exchanged.
    pub fn swapped(&self) -> TwoSeparation {
        TwoSeparation {
            orig_n: self.orig_n,
            i: self.i,
            j: self.j,
            g1: self.g2.clone(),
            map1: self.map2.clone(),
            g2: self.g1.clone(),
            map2: self.map1.clone(),
        }
    }

    /// Glue the two sides back together at `{i, j}`.  Inverse of `split`.
    pub fn reassemble(&self) -> MultiGraph {
        self.glue(false)
    }

    /// Reattach crosswise: side 2's copy of `i` lands on `j` and vice versa.
    /// Side 1 keeps its original labels, so switching twice at the same
    /// separator reproduces the original graph exactly.
    pub fn two_switch(&self) -> MultiGraph {
        self.glue(true)
    }

    fn glue(&self, swap: bool) -> MultiGraph {
        let mut g = MultiGraph::empty(self.orig_n);
        let back1: BTreeMap<Vertex, Vertex> = self.map1.iter().map(|(a, b)| (b, a)).collect();
        let back2: BTreeMap<Vertex, Vertex> = self.map2.iter().map(|(a, b)| (b, a)).collect();
        for (u, v, mult) in self.g1.edges() {
            *g.edges.entry(key(back1[&u], back1[&v])).or_insert(0) += mult;
        }
        let relabel2 = |v: Vertex| -> Vertex {
            let orig = back2[&v];
            if swap {
                if orig == self.i {
                    self.j
                } else if orig == self.j {
                    self.i
                } else {
                    orig
                }
            } else {
                orig
            }
        };
        for (u, v, mult) in self.g2.edges() {
            *g.edges.entry(key(relabel2(u), relabel2(v))).or_insert(0) += mult;
        }
        g
    }
}
