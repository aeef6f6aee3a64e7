//! Cut-vertex and 2-separator detection, the reduction identities for tree
//! and 2-forest counts, and a recursive divide-and-conquer solver that
//! applies them until subproblems are small enough for the determinant.
//!
//! The identities, with `{i,j}` the separator and `G1`, `G2` the sides:
//!
//! * trees: `T(G) = T(G1) F_{G2}(i,j) + T(G2) F_{G1}(i,j)`
//! * same side (`u,v` in `G1`):
//!   `F_G(u,v) = F_{G1}(u,v) F_{G2}(i,j) + F_{G1/ij}(u,v) T(G2)`
//! * cross side (`u` in `G1`, `v` in `G2`, neither on the separator):
//!   `F_G(u,v) = F_{G1/ij}(u,ij) T(G2) + F_{G2/ij}(v,ij) T(G1)
//!              + F_{G1}(u,i) F_{G2}(v,j) + F_{G1}(u,j) F_{G2}(v,i)
//!              - 2 F_{G1}(u,{i,j}) F_{G2}(v,{i,j})`
//!
//! plus the elementary cut-vertex product rules.  `forests_cross` also
//! evaluates the equivalent nine-half-term expansion (which trades the pair
//! counts for ordinary ones) and insists the two routes agree exactly.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::count::{count_2forests_det, count_2forests_pair, count_trees_det};
use crate::error::{Error, Result};
use crate::exact::Count;
use crate::graph::{MultiGraph, Side, SplitSpec, TwoSeparation, Vertex};
use crate::metrics;

fn cmul(a: &Count, b: &Count) -> Count {
    metrics::record_muls(1);
    a * b
}

/// `F(u,v)` with the `F(x,x) = 0` convention, needed when identification
/// lands both query vertices on the merged label.
fn forests_or_zero(g: &MultiGraph, u: Vertex, v: Vertex) -> Result<Count> {
    if u == v {
        Ok(Count::zero())
    } else {
        count_2forests_det(g, u, v)
    }
}

fn adjacency(g: &MultiGraph) -> Vec<Vec<u32>> {
    let mut adj = vec![Vec::new(); g.vertex_count()];
    for (u, v, _) in g.edges() {
        adj[u - 1].push(v as u32 - 1);
        adj[v - 1].push(u as u32 - 1);
    }
    adj
}

fn component_count_masked(adj: &[Vec<u32>], skip: &[u32]) -> usize {
    let n = adj.len();
    let mut seen = vec![false; n];
    for &s in skip {
        seen[s as usize] = true;
    }
    let mut comps = 0;
    let mut stack = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        comps += 1;
        seen[start] = true;
        stack.push(start as u32);
        while let Some(x) = stack.pop() {
            for &y in &adj[x as usize] {
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    stack.push(y);
                }
            }
        }
    }
    comps
}

/// All vertices whose removal increases the number of components.
pub fn find_cut_vertices(g: &MultiGraph) -> Vec<Vertex> {
    let n = g.vertex_count();
    if n < 3 {
        return Vec::new();
    }
    let adj = adjacency(g);
    let base = component_count_masked(&adj, &[]);
    (1..=n)
        .filter(|&w| component_count_masked(&adj, &[w as u32 - 1]) > base)
        .collect()
}

/// All pairs `{i,j}` whose removal disconnects the graph, in lexicographic
/// order.  Empty for 3-connected graphs.
pub fn find_2separators(g: &MultiGraph) -> Vec<(Vertex, Vertex)> {
    let n = g.vertex_count();
    if n < 4 {
        return Vec::new();
    }
    let adj = adjacency(g);
    let base = component_count_masked(&adj, &[]);
    let mut out = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            if component_count_masked(&adj, &[i as u32 - 1, j as u32 - 1]) > base {
                out.push((i, j));
            }
        }
    }
    out
}

/// `T(G)` from a 2-separation.
pub fn trees_via_separation(sep: &TwoSeparation) -> Result<Count> {
    let (i1, j1) = sep.sep_in_g1();
    let (i2, j2) = sep.sep_in_g2();
    let t1 = count_trees_det(&sep.g1);
    let t2 = count_trees_det(&sep.g2);
    let f1 = count_2forests_det(&sep.g1, i1, j1)?;
    let f2 = count_2forests_det(&sep.g2, i2, j2)?;
    Ok(cmul(&t1, &f2) + cmul(&t2, &f1))
}

/// `F_G(u,v)` for `u`, `v` both on side 1 (separator vertices count as both
/// sides; pass the separation swapped for side-2 pairs).
pub fn forests_same_side(sep: &TwoSeparation, u: Vertex, v: Vertex) -> Result<Count> {
    let u1 = sep.in_g1(u).ok_or(Error::WrongSide { v: u })?;
    let v1 = sep.in_g1(v).ok_or(Error::WrongSide { v })?;
    if u1 == v1 {
        return Err(Error::NotDistinct(u));
    }
    let (i1, j1) = sep.sep_in_g1();
    let (i2, j2) = sep.sep_in_g2();
    let f_uv = count_2forests_det(&sep.g1, u1, v1)?;
    let f_sep2 = count_2forests_det(&sep.g2, i2, j2)?;
    let (g1id, idmap) = sep.g1.identify(i1, j1)?;
    let f_id = forests_or_zero(&g1id, idmap.apply(u1), idmap.apply(v1))?;
    let t2 = count_trees_det(&sep.g2);
    Ok(cmul(&f_uv, &f_sep2) + cmul(&f_id, &t2))
}

/// `F_G(u,v)` for `u` strictly on side 1 and `v` strictly on side 2.
/// Computes both the five-term form (with pair counts) and the
/// nine-half-term form and requires exact agreement.
pub fn forests_cross(sep: &TwoSeparation, u: Vertex, v: Vertex) -> Result<Count> {
    if u == sep.i || u == sep.j || v == sep.i || v == sep.j {
        return Err(Error::WrongSide {
            v: if u == sep.i || u == sep.j { u } else { v },
        });
    }
    let u1 = sep.in_g1(u).ok_or(Error::WrongSide { v: u })?;
    let v2 = sep.in_g2(v).ok_or(Error::WrongSide { v })?;
    let (i1, j1) = sep.sep_in_g1();
    let (i2, j2) = sep.sep_in_g2();

    let t1 = count_trees_det(&sep.g1);
    let t2 = count_trees_det(&sep.g2);
    let (g1id, map1) = sep.g1.identify(i1, j1)?;
    let (g2id, map2) = sep.g2.identify(i2, j2)?;
    let f1_id = count_2forests_det(&g1id, map1.apply(u1), map1.apply(i1))?;
    let f2_id = count_2forests_det(&g2id, map2.apply(v2), map2.apply(i2))?;

    let f1_ui = count_2forests_det(&sep.g1, u1, i1)?;
    let f1_uj = count_2forests_det(&sep.g1, u1, j1)?;
    let f1_ij = count_2forests_det(&sep.g1, i1, j1)?;
    let f2_vi = count_2forests_det(&sep.g2, v2, i2)?;
    let f2_vj = count_2forests_det(&sep.g2, v2, j2)?;
    let f2_ij = count_2forests_det(&sep.g2, i2, j2)?;

    let shared = cmul(&f1_id, &t2) + cmul(&f2_id, &t1);

    // five-term form
    let p1 = count_2forests_pair(&sep.g1, u1, i1, j1)?;
    let p2 = count_2forests_pair(&sep.g2, v2, i2, j2)?;
    let five =
        &shared + cmul(&f1_ui, &f2_vj) + cmul(&f1_uj, &f2_vi) - BigInt::from(2) * cmul(&p1, &p2);

    // nine-half-term form
    let s = cmul(&f1_ui, &f2_vj) + cmul(&f1_uj, &f2_vi)
        - cmul(&f1_ui, &f2_vi)
        - cmul(&f1_uj, &f2_vj)
        + cmul(&(&f1_ui + &f1_uj), &f2_ij)
        + cmul(&f1_ij, &(&f2_vi + &f2_vj))
        - cmul(&f1_ij, &f2_ij);
    let half = half_even(s, "nine-term cross-side sum")?;
    let nine = shared + half;

    if five != nine {
        return Err(Error::Internal(format!(
            "cross-side forms disagree: {five} vs {nine}"
        )));
    }
    Ok(five)
}

fn require_cut_vertex(g: &MultiGraph, w: Vertex) -> Result<Vec<Vec<Vertex>>> {
    if w == 0 || w > g.vertex_count() {
        return Err(Error::VertexOutOfRange {
            v: w,
            n: g.vertex_count(),
        });
    }
    let base = g.components().len();
    let comps = g.components_excluding(&BTreeSet::from([w]));
    if comps.len() <= base {
        return Err(Error::NotACutVertex(w));
    }
    Ok(comps)
}

/// `T(G) = T(G1) T(G2)` at a cut vertex `w`; `side1` names the vertices of
/// `G1` apart from `w` and must be a union of components of `G - w`.
pub fn cut_vertex_trees(g: &MultiGraph, w: Vertex, side1: &BTreeSet<Vertex>) -> Result<Count> {
    let comps = require_cut_vertex(g, w)?;
    if side1.is_empty() || side1.contains(&w) {
        return Err(Error::NotACutVertex(w));
    }
    for comp in &comps {
        let inside = comp.iter().filter(|v| side1.contains(v)).count();
        if inside != 0 && inside != comp.len() {
            return Err(Error::Internal(format!(
                "side assignment splits a component of G - {w}"
            )));
        }
    }
    let mut verts1 = side1.clone();
    verts1.insert(w);
    let verts2: BTreeSet<Vertex> = (1..=g.vertex_count())
        .filter(|v| !side1.contains(v))
        .collect();
    if verts2.len() < 2 {
        return Err(Error::NotACutVertex(w));
    }
    let (g1, _) = g.induced(&verts1);
    let (g2, _) = g.induced(&verts2);
    Ok(cmul(&count_trees_det(&g1), &count_trees_det(&g2)))
}

/// `F_G(u,v)` at a cut vertex `w`, routing to the same-side or the split
/// rule depending on where `u` and `v` fall.
pub fn cut_vertex_forests(g: &MultiGraph, w: Vertex, u: Vertex, v: Vertex) -> Result<Count> {
    let comps = require_cut_vertex(g, w)?;
    if u == v {
        return Err(Error::NotDistinct(u));
    }
    let comp_of = |x: Vertex| comps.iter().position(|c| c.contains(&x));
    let all: BTreeSet<Vertex> = (1..=g.vertex_count()).collect();

    let sides_for = |comp_idx: usize| {
        let mut verts1: BTreeSet<Vertex> = comps[comp_idx].iter().copied().collect();
        verts1.insert(w);
        let verts2: BTreeSet<Vertex> = all.difference(&verts1).copied().chain([w]).collect();
        (verts1, verts2)
    };

    if u == w || v == w {
        let x = if u == w { v } else { u };
        let cx = comp_of(x).ok_or(Error::VertexOutOfRange {
            v: x,
            n: g.vertex_count(),
        })?;
        let (verts1, verts2) = sides_for(cx);
        let (g1, m1) = g.induced(&verts1);
        let (g2, _) = g.induced(&verts2);
        let f = count_2forests_det(&g1, m1.apply(w), m1.apply(x))?;
        return Ok(cmul(&f, &count_trees_det(&g2)));
    }

    let cu = comp_of(u).ok_or(Error::VertexOutOfRange {
        v: u,
        n: g.vertex_count(),
    })?;
    let cv = comp_of(v).ok_or(Error::VertexOutOfRange {
        v,
        n: g.vertex_count(),
    })?;
    let (verts1, verts2) = sides_for(cu);
    let (g1, m1) = g.induced(&verts1);
    let (g2, m2) = g.induced(&verts2);
    if cu == cv {
        let f = count_2forests_det(&g1, m1.apply(u), m1.apply(v))?;
        Ok(cmul(&f, &count_trees_det(&g2)))
    } else {
        let f1 = count_2forests_det(&g1, m1.apply(u), m1.apply(w))?;
        let f2 = count_2forests_det(&g2, m2.apply(w), m2.apply(v))?;
        Ok(cmul(&f1, &count_trees_det(&g2)) + cmul(&count_trees_det(&g1), &f2))
    }
}

/// What the solver is asked for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Query {
    Trees,
    Forests(Vertex, Vertex),
}

impl Query {
    /// Forest query with the pair normalized; `F` is symmetric.
    pub fn forests(u: Vertex, v: Vertex) -> Query {
        if u <= v {
            Query::Forests(u, v)
        } else {
            Query::Forests(v, u)
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::Trees => write!(f, "T"),
            Query::Forests(u, v) => write!(f, "F({u},{v})"),
        }
    }
}

/// How the solver picks separators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeparatorChoice {
    /// Pair minimizing `max(|V(G1)|, |V(G2)|)`, ties broken
    /// lexicographically; components distributed greedily for balance.
    Balanced,
    /// First usable pair in lexicographic order, first component on side 1.
    Lexicographic,
}

/// Recursion strategy.  The count returned by `solve_with` is the same for
/// every strategy; only the shape of the work changes.
#[derive(Clone, Copy, Debug)]
pub struct Strategy {
    /// Fall back to the determinant at or below this many vertices, and
    /// require both sides of a separation to exceed it.
    pub det_threshold: usize,
    pub choice: SeparatorChoice,
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy {
            det_threshold: 8,
            choice: SeparatorChoice::Balanced,
        }
    }
}

/// Which rule solved a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Determinant,
    CutVertexTrees,
    CutVertexForestsSameSide,
    CutVertexForestsCross,
    SeparationTrees,
    SeparationForestsSameSide,
    SeparationForestsCross,
    Memo,
    ZeroByConvention,
}

/// Tree of reduction steps: which rule fired, at which separator, and how
/// big the subproblems were.  Leaves are determinant base cases or memo
/// hits.  Serializes to JSON for the benchmark harness and renders as an
/// indented tree for humans.
#[derive(Clone, Debug, Serialize)]
pub struct ReductionTrace {
    pub query: String,
    pub vertices: usize,
    pub edge_pairs: usize,
    pub rule: Rule,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separator: Option<(Vertex, Vertex)>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<ReductionTrace>,
}

impl ReductionTrace {
    fn leaf(g: &MultiGraph, q: Query, rule: Rule) -> Self {
        ReductionTrace {
            query: q.to_string(),
            vertices: g.vertex_count(),
            edge_pairs: g.edge_pair_count(),
            rule,
            separator: None,
            children: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(|c| c.node_count()).sum::<usize>()
    }

    fn render(&self, depth: usize, out: &mut String) {
        let pad = "  ".repeat(depth);
        let sep = match self.separator {
            Some((i, j)) if i == j => format!(" at cut vertex {i}"),
            Some((i, j)) => format!(" at {{{i},{j}}}"),
            None => String::new(),
        };
        out.push_str(&format!(
            "{pad}{} [{}v/{}e] {:?}{sep}\n",
            self.query, self.vertices, self.edge_pairs, self.rule
        ));
        for c in &self.children {
            c.render(depth + 1, out);
        }
    }
}

impl fmt::Display for ReductionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.render(0, &mut s);
        write!(f, "{}", s.trim_end())
    }
}

/// Recursive reduction with the default strategy.
pub fn solve(g: &MultiGraph, query: Query) -> Result<(Count, ReductionTrace)> {
    solve_with(g, query, &Strategy::default())
}

/// Recursive reduction: cut-vertex rules first, then 2-separations while
/// both sides stay above the threshold, determinant otherwise.  The count
/// is bit-identical to the pure determinant route.
pub fn solve_with(
    g: &MultiGraph,
    query: Query,
    strategy: &Strategy,
) -> Result<(Count, ReductionTrace)> {
    if !g.connected() {
        return Err(Error::Disconnected);
    }
    if let Query::Forests(u, v) = query {
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
    }
    let mut solver = Solver {
        strategy,
        memo: HashMap::new(),
    };
    solver.run(g, query)
}

struct Solver<'a> {
    strategy: &'a Strategy,
    memo: HashMap<(MultiGraph, Query), Count>,
}

impl Solver<'_> {
    fn run(&mut self, g: &MultiGraph, q: Query) -> Result<(Count, ReductionTrace)> {
        if let Query::Forests(u, v) = q {
            if u == v {
                // identification can collapse a query pair; nothing separates
                // a vertex from itself
                return Ok((
                    Count::zero(),
                    ReductionTrace::leaf(g, q, Rule::ZeroByConvention),
                ));
            }
        }
        let q = match q {
            Query::Forests(u, v) => Query::forests(u, v),
            other => other,
        };
        if let Some(hit) = self.memo.get(&(g.clone(), q)) {
            return Ok((hit.clone(), ReductionTrace::leaf(g, q, Rule::Memo)));
        }
        let (count, trace) = self.compute(g, q)?;
        self.memo.insert((g.clone(), q), count.clone());
        Ok((count, trace))
    }

    fn det_leaf(&self, g: &MultiGraph, q: Query) -> Result<(Count, ReductionTrace)> {
        let count = match q {
            Query::Trees => count_trees_det(g),
            Query::Forests(u, v) => count_2forests_det(g, u, v)?,
        };
        Ok((count, ReductionTrace::leaf(g, q, Rule::Determinant)))
    }

    fn compute(&mut self, g: &MultiGraph, q: Query) -> Result<(Count, ReductionTrace)> {
        let n = g.vertex_count();
        if n <= self.strategy.det_threshold || !g.connected() {
            return self.det_leaf(g, q);
        }
        let cuts = find_cut_vertices(g);
        if let Some(&w) = cuts.first() {
            return self.cut_route(g, q, w);
        }
        match self.pick_separation(g)? {
            Some(sep) => self.separation_route(g, q, &sep),
            None => self.det_leaf(g, q),
        }
    }

    fn cut_route(&mut self, g: &MultiGraph, q: Query, w: Vertex) -> Result<(Count, ReductionTrace)> {
        let comps = g.components_excluding(&BTreeSet::from([w]));
        let all: BTreeSet<Vertex> = (1..=g.vertex_count()).collect();
        let sides_for = |chosen: &[Vertex]| {
            let mut v1: BTreeSet<Vertex> = chosen.iter().copied().collect();
            v1.insert(w);
            let v2: BTreeSet<Vertex> = all.difference(&v1).copied().chain([w]).collect();
            (v1, v2)
        };
        let mut node = ReductionTrace::leaf(g, q, Rule::CutVertexTrees);
        node.separator = Some((w, w));
        match q {
            Query::Trees => {
                let (v1, v2) = sides_for(&comps[0]);
                let (g1, _) = g.induced(&v1);
                let (g2, _) = g.induced(&v2);
                let (t1, tr1) = self.run(&g1, Query::Trees)?;
                let (t2, tr2) = self.run(&g2, Query::Trees)?;
                node.children = vec![tr1, tr2];
                Ok((cmul(&t1, &t2), node))
            }
            Query::Forests(u, v) => {
                let comp_of = |x: Vertex| comps.iter().position(|c| c.contains(&x));
                if u == w || v == w {
                    node.rule = Rule::CutVertexForestsSameSide;
                    let x = if u == w { v } else { u };
                    let cx = comp_of(x).expect("vertex in some component");
                    let (v1, v2) = sides_for(&comps[cx]);
                    let (g1, m1) = g.induced(&v1);
                    let (g2, _) = g.induced(&v2);
                    let (f, trf) = self.run(&g1, Query::forests(m1.apply(w), m1.apply(x)))?;
                    let (t, trt) = self.run(&g2, Query::Trees)?;
                    node.children = vec![trf, trt];
                    return Ok((cmul(&f, &t), node));
                }
                let cu = comp_of(u).expect("vertex in some component");
                let cv = comp_of(v).expect("vertex in some component");
                let (v1, v2) = sides_for(&comps[cu]);
                let (g1, m1) = g.induced(&v1);
                let (g2, m2) = g.induced(&v2);
                if cu == cv {
                    node.rule = Rule::CutVertexForestsSameSide;
                    let (f, trf) = self.run(&g1, Query::forests(m1.apply(u), m1.apply(v)))?;
                    let (t, trt) = self.run(&g2, Query::Trees)?;
                    node.children = vec![trf, trt];
                    Ok((cmul(&f, &t), node))
                } else {
                    node.rule = Rule::CutVertexForestsCross;
                    let (f1, tr1) = self.run(&g1, Query::forests(m1.apply(u), m1.apply(w)))?;
                    let (t2, tr2) = self.run(&g2, Query::Trees)?;
                    let (t1, tr3) = self.run(&g1, Query::Trees)?;
                    let (f2, tr4) = self.run(&g2, Query::forests(m2.apply(w), m2.apply(v)))?;
                    node.children = vec![tr1, tr2, tr3, tr4];
                    Ok((cmul(&f1, &t2) + cmul(&t1, &f2), node))
                }
            }
        }
    }

    /// Choose a separator and component assignment per the strategy; `None`
    /// when no separation leaves both sides above the threshold.
    fn pick_separation(&self, g: &MultiGraph) -> Result<Option<TwoSeparation>> {
        let n = g.vertex_count();
        let t = self.strategy.det_threshold;
        let adj = adjacency(g);
        let mut best: Option<(usize, Vertex, Vertex, Vec<Side>)> = None;
        for i in 1..=n {
            for j in (i + 1)..=n {
                let comps = masked_components(&adj, i as u32 - 1, j as u32 - 1);
                if comps.len() < 2 {
                    continue;
                }
                let assignment = match self.strategy.choice {
                    SeparatorChoice::Lexicographic => {
                        let mut sides = vec![Side::Two; comps.len()];
                        sides[0] = Side::One;
                        sides
                    }
                    SeparatorChoice::Balanced => greedy_balance(&comps),
                };
                let mut s1 = 2usize;
                let mut s2 = 2usize;
                for (c, side) in comps.iter().zip(&assignment) {
                    match side {
                        Side::One => s1 += c.len(),
                        Side::Two => s2 += c.len(),
                    }
                }
                if s1 <= t || s2 <= t {
                    continue;
                }
                let spec = SplitSpec {
                    side_of_component: assignment,
                    direct_to_side1: g.multiplicity(i, j),
                };
                match self.strategy.choice {
                    SeparatorChoice::Lexicographic => {
                        return Ok(Some(g.split(i, j, &spec)?));
                    }
                    SeparatorChoice::Balanced => {
                        let score = s1.max(s2);
                        let better = match &best {
                            None => true,
                            Some((s, bi, bj, _)) => {
                                score < *s || (score == *s && (i, j) < (*bi, *bj))
                            }
                        };
                        if better {
                            best = Some((score, i, j, spec.side_of_component));
                        }
                    }
                }
            }
        }
        match best {
            Some((_, i, j, assignment)) => Ok(Some(g.split(
                i,
                j,
                &SplitSpec {
                    side_of_component: assignment,
                    direct_to_side1: g.multiplicity(i, j),
                },
            )?)),
            None => Ok(None),
        }
    }

    fn separation_route(
        &mut self,
        g: &MultiGraph,
        q: Query,
        sep: &TwoSeparation,
    ) -> Result<(Count, ReductionTrace)> {
        let (i1, j1) = sep.sep_in_g1();
        let (i2, j2) = sep.sep_in_g2();
        let mut node = ReductionTrace::leaf(g, q, Rule::SeparationTrees);
        node.separator = Some((sep.i, sep.j));
        match q {
            Query::Trees => {
                let (t1, a) = self.run(&sep.g1, Query::Trees)?;
                let (t2, b) = self.run(&sep.g2, Query::Trees)?;
                let (f1, c) = self.run(&sep.g1, Query::forests(i1, j1))?;
                let (f2, d) = self.run(&sep.g2, Query::forests(i2, j2))?;
                node.children = vec![a, b, c, d];
                Ok((cmul(&t1, &f2) + cmul(&t2, &f1), node))
            }
            Query::Forests(u, v) => {
                let u_in_1 = sep.in_g1(u);
                let v_in_1 = sep.in_g1(v);
                let u_in_2 = sep.in_g2(u);
                let v_in_2 = sep.in_g2(v);
                if let (Some(a), Some(b)) = (u_in_1, v_in_1) {
                    node.rule = Rule::SeparationForestsSameSide;
                    let (count, children) =
                        self.same_side(&sep.g1, &sep.g2, (i1, j1), (i2, j2), a, b)?;
                    node.children = children;
                    Ok((count, node))
                } else if let (Some(a), Some(b)) = (u_in_2, v_in_2) {
                    node.rule = Rule::SeparationForestsSameSide;
                    let (count, children) =
                        self.same_side(&sep.g2, &sep.g1, (i2, j2), (i1, j1), a, b)?;
                    node.children = children;
                    Ok((count, node))
                } else {
                    node.rule = Rule::SeparationForestsCross;
                    // orient so the side-1 endpoint comes first
                    let (a, b) = match (u_in_1, v_in_2) {
                        (Some(a), Some(b)) => (a, b),
                        _ => (v_in_1.unwrap(), u_in_2.unwrap()),
                    };
                    let (count, children) =
                        self.cross_side(&sep.g1, &sep.g2, (i1, j1), (i2, j2), a, b)?;
                    node.children = children;
                    Ok((count, node))
                }
            }
        }
    }

    /// Same-side reduction for `u,v` both in `ga` (the other side is `gb`).
    fn same_side(
        &mut self,
        ga: &MultiGraph,
        gb: &MultiGraph,
        sep_a: (Vertex, Vertex),
        sep_b: (Vertex, Vertex),
        u: Vertex,
        v: Vertex,
    ) -> Result<(Count, Vec<ReductionTrace>)> {
        let (f_uv, t1) = self.run(ga, Query::forests(u, v))?;
        let (f_b, t2) = self.run(gb, Query::forests(sep_b.0, sep_b.1))?;
        let (ga_id, idmap) = ga.identify(sep_a.0, sep_a.1)?;
        let (f_id, t3) = self.run(&ga_id, Query::Forests(idmap.apply(u), idmap.apply(v)))?;
        let (t_b, t4) = self.run(gb, Query::Trees)?;
        Ok((cmul(&f_uv, &f_b) + cmul(&f_id, &t_b), vec![t1, t2, t3, t4]))
    }

    /// Cross-side reduction for `u` strictly in `ga`, `v` strictly in `gb`,
    /// using the five-term form with pair counts from the half-sum rule.
    fn cross_side(
        &mut self,
        ga: &MultiGraph,
        gb: &MultiGraph,
        sep_a: (Vertex, Vertex),
        sep_b: (Vertex, Vertex),
        u: Vertex,
        v: Vertex,
    ) -> Result<(Count, Vec<ReductionTrace>)> {
        let mut children = Vec::new();
        let (ia, ja) = sep_a;
        let (ib, jb) = sep_b;

        let (ga_id, map_a) = ga.identify(ia, ja)?;
        let (gb_id, map_b) = gb.identify(ib, jb)?;
        let (fa_id, tr) = self.run(&ga_id, Query::forests(map_a.apply(u), map_a.apply(ia)))?;
        children.push(tr);
        let (tb, tr) = self.run(gb, Query::Trees)?;
        children.push(tr);
        let (fb_id, tr) = self.run(&gb_id, Query::forests(map_b.apply(v), map_b.apply(ib)))?;
        children.push(tr);
        let (ta, tr) = self.run(ga, Query::Trees)?;
        children.push(tr);

        let (fa_ui, tr) = self.run(ga, Query::forests(u, ia))?;
        children.push(tr);
        let (fa_uj, tr) = self.run(ga, Query::forests(u, ja))?;
        children.push(tr);
        let (fa_ij, tr) = self.run(ga, Query::forests(ia, ja))?;
        children.push(tr);
        let (fb_vi, tr) = self.run(gb, Query::forests(v, ib))?;
        children.push(tr);
        let (fb_vj, tr) = self.run(gb, Query::forests(v, jb))?;
        children.push(tr);
        let (fb_ij, tr) = self.run(gb, Query::forests(ib, jb))?;
        children.push(tr);

        let pair_a = half_even(&fa_ui + &fa_uj - &fa_ij, "side-1 pair 2-forest sum")?;
        let pair_b = half_even(&fb_vi + &fb_vj - &fb_ij, "side-2 pair 2-forest sum")?;

        let total = cmul(&fa_id, &tb)
            + cmul(&fb_id, &ta)
            + cmul(&fa_ui, &fb_vj)
            + cmul(&fa_uj, &fb_vi)
            - BigInt::from(2) * cmul(&pair_a, &pair_b);
        Ok((total, children))
    }
}

fn half_even(x: BigInt, what: &str) -> Result<BigInt> {
    let (half, rem) = x.div_rem(&BigInt::from(2));
    if rem.is_zero() {
        Ok(half)
    } else {
        Err(Error::Internal(format!("{what} is odd")))
    }
}

fn masked_components(adj: &[Vec<u32>], skip_a: u32, skip_b: u32) -> Vec<Vec<Vertex>> {
    let n = adj.len();
    let mut seen = vec![false; n];
    seen[skip_a as usize] = true;
    seen[skip_b as usize] = true;
    let mut comps = Vec::new();
    let mut stack = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start + 1];
        seen[start] = true;
        stack.push(start as u32);
        while let Some(x) = stack.pop() {
            for &y in &adj[x as usize] {
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    comp.push(y as usize + 1);
                    stack.push(y);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// Distribute components over the two sides, heaviest first onto the
/// lighter side; deterministic.
fn greedy_balance(comps: &[Vec<Vertex>]) -> Vec<Side> {
    let mut order: Vec<usize> = (0..comps.len()).collect();
    order.sort_by_key(|&idx| (std::cmp::Reverse(comps[idx].len()), comps[idx][0]));
    let mut sides = vec![Side::Two; comps.len()];
    let (mut s1, mut s2) = (0usize, 0usize);
    for idx in order {
        if s1 <= s2 {
            sides[idx] = Side::One;
            s1 += comps[idx].len();
        } else {
            sides[idx] = Side::Two;
            s2 += comps[idx].len();
        }
    }
    sides
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::{enumerate_2forests, enumerate_trees};

    fn k3() -> MultiGraph {
        MultiGraph::simple(3, &[(1, 2), (2, 3), (1, 3)]).unwrap()
    }

    fn c4() -> MultiGraph {
        MultiGraph::simple(4, &[(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap()
    }

    fn k4() -> MultiGraph {
        MultiGraph::simple(4, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap()
    }

    fn bowtie() -> MultiGraph {
        MultiGraph::simple(5, &[(1, 2), (1, 3), (2, 3), (3, 4), (3, 5), (4, 5)]).unwrap()
    }

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

    fn eager() -> Strategy {
        Strategy {
            det_threshold: 3,
            choice: SeparatorChoice::Lexicographic,
        }
    }

    #[test]
    fn cut_vertices() {
        assert_eq!(find_cut_vertices(&bowtie()), vec![3]);
        assert_eq!(find_cut_vertices(&k3()), Vec::<Vertex>::new());
        let p = MultiGraph::simple(3, &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(find_cut_vertices(&p), vec![2]);
    }

    #[test]
    fn two_separators() {
        assert_eq!(find_2separators(&c4()), vec![(1, 3), (2, 4)]);
        assert_eq!(find_2separators(&k4()), vec![]);
        let h7 = h(7);
        let seps = find_2separators(&h7);
        for pair in [(2, 3), (3, 4), (4, 5), (5, 6)] {
            assert!(seps.contains(&pair), "missing {pair:?}");
        }
        // brute-force definition check
        for i in 1..=7 {
            for j in (i + 1)..=7 {
                let disconnects =
                    h7.components_excluding(&BTreeSet::from([i, j])).len() > 1;
                assert_eq!(seps.contains(&(i, j)), disconnects, "pair {i},{j}");
            }
        }
    }

    #[test]
    fn tree_separation_values() {
        let sep = c4().split_natural(1, 3).unwrap();
        assert_eq!(trees_via_separation(&sep).unwrap(), Count::from(4));
        assert_eq!(enumerate_trees(&c4()).unwrap(), Count::from(4));
        let sep = h(7).split_natural(3, 4).unwrap();
        assert_eq!(trees_via_separation(&sep).unwrap(), Count::from(144));
    }

    #[test]
    fn same_side_values() {
        let sep = h(7).split_natural(3, 4).unwrap();
        assert_eq!(forests_same_side(&sep, 1, 2).unwrap(), Count::from(89));
        // the 2-switch leaves same-side counts alone
        let switched = sep.two_switch();
        let sep2 = switched.split_natural(3, 4).unwrap();
        assert_eq!(forests_same_side(&sep2, 1, 2).unwrap(), Count::from(89));

        let c = c4().split_natural(1, 3).unwrap();
        assert_eq!(forests_same_side(&c, 1, 2).unwrap(), Count::from(3));
        assert_eq!(enumerate_2forests(&c4(), 1, 2).unwrap(), Count::from(3));
    }

    #[test]
    fn same_side_rejects_wrong_side() {
        let sep = h(7).split_natural(3, 4).unwrap();
        assert!(matches!(
            forests_same_side(&sep, 1, 7),
            Err(Error::WrongSide { .. })
        ));
    }

    #[test]
    fn cross_side_values() {
        let h7 = h(7);
        let sep = h7.split_natural(3, 4).unwrap();
        assert_eq!(
            forests_cross(&sep, 2, 5).unwrap(),
            count_2forests_det(&h7, 2, 5).unwrap()
        );
        assert_eq!(forests_cross(&sep, 1, 7).unwrap(), Count::from(224));
        assert!(matches!(
            forests_cross(&sep, 3, 7),
            Err(Error::WrongSide { .. })
        ));
    }

    #[test]
    fn cut_vertex_rules_on_bowtie() {
        let g = bowtie();
        let side1: BTreeSet<Vertex> = [1, 2].into_iter().collect();
        assert_eq!(cut_vertex_trees(&g, 3, &side1).unwrap(), Count::from(9));
        // far corners, different triangles
        assert_eq!(cut_vertex_forests(&g, 3, 1, 4).unwrap(), Count::from(12));
        assert_eq!(enumerate_2forests(&g, 1, 4).unwrap(), Count::from(12));
        // same triangle
        assert_eq!(cut_vertex_forests(&g, 3, 1, 2).unwrap(), Count::from(6));
        assert_eq!(enumerate_2forests(&g, 1, 2).unwrap(), Count::from(6));
        // endpoint on the cut vertex itself
        assert_eq!(
            cut_vertex_forests(&g, 3, 3, 4).unwrap(),
            enumerate_2forests(&g, 3, 4).unwrap()
        );
        assert!(cut_vertex_trees(&k3(), 1, &side1).is_err());
    }

    #[test]
    fn solve_matches_determinant() {
        for g in [k3(), c4(), k4(), bowtie(), h(7), h(9)] {
            let (t, _) = solve(&g, Query::Trees).unwrap();
            assert_eq!(t, count_trees_det(&g));
            let (t2, _) = solve_with(&g, Query::Trees, &eager()).unwrap();
            assert_eq!(t2, count_trees_det(&g));
            for u in 1..=g.vertex_count() {
                for v in (u + 1)..=g.vertex_count() {
                    let want = count_2forests_det(&g, u, v).unwrap();
                    let (f, _) = solve(&g, Query::forests(u, v)).unwrap();
                    assert_eq!(f, want, "default strategy F({u},{v})");
                    let (f2, _) = solve_with(&g, Query::forests(u, v), &eager()).unwrap();
                    assert_eq!(f2, want, "eager strategy F({u},{v})");
                }
            }
        }
    }

    #[test]
    fn solve_uses_reduction_on_big_inputs() {
        let (_, trace) = solve_with(&h(12), Query::Trees, &eager()).unwrap();
        assert_eq!(trace.rule, Rule::SeparationTrees);
        assert!(trace.node_count() > 4);
        let (_, trace) = solve_with(&bowtie(), Query::forests(1, 4), &eager()).unwrap();
        assert_eq!(trace.rule, Rule::CutVertexForestsCross);
    }

    #[test]
    fn solve_rejects_disconnected_and_bad_queries() {
        let g = MultiGraph::simple(4, &[(1, 2), (3, 4)]).unwrap();
        assert!(matches!(solve(&g, Query::Trees), Err(Error::Disconnected)));
        assert!(solve(&c4(), Query::Forests(2, 2)).is_err());
        assert!(solve(&c4(), Query::Forests(1, 9)).is_err());
    }

    #[test]
    fn trace_renders_and_serializes() {
        let (_, trace) = solve_with(&h(7), Query::forests(1, 7), &eager()).unwrap();
        let text = trace.to_string();
        assert!(text.contains("F(1,7)"));
        assert!(text.lines().count() > 3);
        let json = serde_json::to_string(&trace).unwrap();
        assert!(json.contains("\"rule\""));
    }
}
