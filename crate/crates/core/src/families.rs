//! Generators for the three graph families — straight linear 2-trees, bent
//! linear 2-trees, and Sierpinski triangles — and exact evaluators for their
//! closed-form tree counts, 2-forest counts, and resistances.
//!
//! Index conventions for the straight family `H_n`: vertices `1..=n`, edges
//! `{i,i+1}` and `{i,i+2}`, so `T(H_n) = F_{2n-2}`.  The bent family `G_n`
//! replaces edge `{k+1,k+3}` with `{k,k+3}`, giving the bend vertex `k`
//! degree 5.  Fibonacci indices in the closed forms can dip below zero;
//! [`crate::fib`] extends the recurrence both ways.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{ratio, Count, Ratio};
use crate::fib::{fib, lucas};
use crate::graph::{MultiGraph, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Straight,
    Bent,
    Sierpinski,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "straight" => Ok(Family::Straight),
            "bent" => Ok(Family::Bent),
            "sierpinski" => Ok(Family::Sierpinski),
            other => Err(Error::InvalidFamily(format!(
                "unknown family {other:?}, expected straight, bent, or sierpinski"
            ))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Straight => write!(f, "straight"),
            Family::Bent => write!(f, "bent"),
            Family::Sierpinski => write!(f, "sierpinski"),
        }
    }
}

/// Declarative description of a generated family instance.  For the
/// Sierpinski family `n` is the stage index; `k` is the bend vertex and
/// only meaningful for the bent family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub n: usize,
    pub k: Option<usize>,
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        match self.family {
            Family::Straight => {
                if self.k.is_some() {
                    return Err(Error::InvalidFamily(
                        "straight takes no bend parameter".into(),
                    ));
                }
                if self.n < 4 {
                    return Err(Error::InvalidFamily("straight requires n >= 4".into()));
                }
            }
            Family::Bent => {
                let k = self
                    .k
                    .ok_or_else(|| Error::InvalidFamily("bent requires --k".into()))?;
                check_bent_params(self.n, k)?;
            }
            Family::Sierpinski => {
                if self.k.is_some() {
                    return Err(Error::InvalidFamily(
                        "sierpinski takes no bend parameter".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn generate(&self) -> Result<MultiGraph> {
        self.validate()?;
        match self.family {
            Family::Straight => gen_straight(self.n),
            Family::Bent => gen_bent(self.n, self.k.unwrap()),
            Family::Sierpinski => Ok(gen_sierpinski(self.n as u32).graph),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k {
            Some(k) => write!(f, "{}(n={},k={})", self.family, self.n, k),
            None => write!(f, "{}(n={})", self.family, self.n),
        }
    }
}

/// Straight linear 2-tree on `n >= 3` vertices: edges `{i,i+1}`, `{i,i+2}`.
pub fn gen_straight(n: usize) -> Result<MultiGraph> {
    if n < 3 {
        return Err(Error::InvalidFamily(format!(
            "straight linear 2-tree needs n >= 3, got {n}"
        )));
    }
    let mut edges = Vec::with_capacity(2 * n - 3);
    for i in 1..n {
        edges.push((i, i + 1));
    }
    for i in 1..(n - 1) {
        edges.push((i, i + 2));
    }
    MultiGraph::simple(n, &edges)
}

fn check_bent_params(n: usize, k: usize) -> Result<()> {
    if n < 6 || k < 3 || k + 3 > n {
        return Err(Error::InvalidFamily(format!(
            "bent linear 2-tree needs n >= 6 and 3 <= k <= n-3, got n={n} k={k}"
        )));
    }
    Ok(())
}

/// Bent linear 2-tree: the straight one with edge `{k+1,k+3}` replaced by
/// `{k,k+3}`.  Vertex `k` ends with degree 5 and `k+1` with degree 3.
pub fn gen_bent(n: usize, k: usize) -> Result<MultiGraph> {
    check_bent_params(n, k)?;
    let mut edges = Vec::with_capacity(2 * n - 3);
    for i in 1..n {
        edges.push((i, i + 1));
    }
    for i in 1..(n - 1) {
        if i == k + 1 {
            continue; // dropped edge {k+1, k+3}
        }
        edges.push((i, i + 2));
    }
    edges.push((k, k + 3));
    MultiGraph::simple(n, &edges)
}

/// A generated Sierpinski stage together with its three degree-2 corners
/// (always labeled 1, 2, 3).
#[derive(Clone, Debug)]
pub struct Sierpinski {
    pub graph: MultiGraph,
    pub corners: [Vertex; 3],
}

/// Stage-`n` Sierpinski triangle: stage 0 is a triangle; each next stage
/// glues three copies pairwise at corners.  Vertex count `3(3^n + 1)/2`,
/// edge count `3^{n+1}`.  Labels are deterministic: corners first, then
/// interior vertices in construction order.
pub fn gen_sierpinski(stage: u32) -> Sierpinski {
    // internal 0-based build; corners ordered (left, right, top)
    let mut edges: Vec<(usize, usize)> = vec![(0, 1), (0, 2), (1, 2)];
    let mut corners = [0usize, 1, 2];
    let mut count = 3usize;
    for _ in 0..stage {
        let m = count;
        let prev: Vec<(usize, usize)> = edges.clone();
        let [a, b, c] = corners;
        // copy T keeps its ids; BL and BR get fresh ids except at the glue
        // points: BL.c ~ T.a, BR.c ~ T.b, BR.a ~ BL.b
        let mut next_fresh = m;
        let mut fresh = || {
            let id = next_fresh;
            next_fresh += 1;
            id
        };
        let bl: Vec<usize> = (0..m).map(|v| if v == c { a } else { fresh() }).collect();
        let br: Vec<usize> = (0..m)
            .map(|v| {
                if v == c {
                    b
                } else if v == a {
                    bl[b]
                } else {
                    fresh()
                }
            })
            .collect();
        for &(u, v) in &prev {
            edges.push((bl[u], bl[v]));
        }
        for &(u, v) in &prev {
            edges.push((br[u], br[v]));
        }
        corners = [bl[a], br[b], c];
        count = next_fresh;
    }
    // relabel: corners become 1, 2, 3; the rest keep ascending order
    let mut label = vec![0usize; count];
    for (idx, &corner) in corners.iter().enumerate() {
        label[corner] = idx + 1;
    }
    let mut next = 4;
    for slot in label.iter_mut() {
        if *slot == 0 {
            *slot = next;
            next += 1;
        }
    }
    let list: Vec<(Vertex, Vertex, u64)> = edges
        .iter()
        .map(|&(u, v)| (label[u], label[v], 1))
        .collect();
    Sierpinski {
        graph: MultiGraph::build(count, &list).expect("construction is loop-free"),
        corners: [1, 2, 3],
    }
}

/// `T(H_n) = F_{2n-2}`, the straight family's spanning-tree count.
pub fn straight_trees(n: usize) -> Result<Count> {
    if n < 3 {
        return Err(Error::InvalidFamily(format!(
            "straight linear 2-tree needs n >= 3, got {n}"
        )));
    }
    Ok(fib(2 * n as i64 - 2))
}

fn check_straight_pair(u: usize, v: usize, n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidFamily(format!(
            "straight linear 2-tree needs n >= 3, got {n}"
        )));
    }
    if u == 0 || v == 0 || u >= v || v > n {
        return Err(Error::InvalidFamily(format!(
            "need 1 <= u < v <= n, got u={u} v={v} n={n}"
        )));
    }
    Ok(())
}

/// Exact resistance between vertices `j` and `j+k` in the straight linear
/// 2-tree on `n` vertices, from the Fibonacci/Lucas closed form
/// (`m = n - 2`):
///
/// ```text
/// r(j, j+k) = [ F_{m+1}^2 + F_k^2 F_{m-2j-k+3}^2
///               + (F_{m+1}/5) (F_{m-k} (k L_k - F_k)
///                  + F_{m-k+1} ((k-5) F_{k+1} + (2k+2) F_k)) ] / F_{2m+2}
/// ```
pub fn straight_resistance_closed(j: usize, k: usize, n: usize) -> Result<Ratio> {
    if k == 0 {
        return Err(Error::InvalidFamily("gap k must be at least 1".into()));
    }
    check_straight_pair(j, j + k, n)?;
    let (jj, kk, m) = (j as i64, k as i64, n as i64 - 2);
    let head = fib(m + 1).pow(2) + (fib(kk) * fib(m - 2 * jj - kk + 3)).pow(2);
    let bracket = fib(m - kk) * (BigInt::from(kk) * lucas(kk) - fib(kk))
        + fib(m - kk + 1)
            * (BigInt::from(kk - 5) * fib(kk + 1) + BigInt::from(2 * kk + 2) * fib(kk));
    let tail = fib(m + 1) * bracket;
    let den = fib(2 * m + 2);
    Ok(ratio(head, den.clone())? + ratio(tail, BigInt::from(5) * den)?)
}

/// `F_{H_n}(u,v)` from the closed form (the resistance formula scaled by
/// `T(H_n) = F_{2n-2}`).  The 1/5 factor is evaluated in exact arithmetic
/// and integrality is asserted, not assumed.
pub fn straight_forest_closed(u: usize, v: usize, n: usize) -> Result<Count> {
    check_straight_pair(u, v, n)?;
    let (uu, vv, nn) = (u as i64, v as i64, n as i64);
    let d = vv - uu;
    let head = fib(nn - 1).pow(2) + (fib(d) * fib(nn - uu - vv + 1)).pow(2);
    let bracket = fib(nn + uu - vv - 2) * (BigInt::from(d) * lucas(d) - fib(d))
        + fib(nn + uu - vv - 1)
            * (BigInt::from(d - 5) * fib(d + 1) + BigInt::from(2 * (d + 1)) * fib(d));
    let tail = fib(nn - 1) * bracket;
    let (q, r) = tail.div_rem(&BigInt::from(5));
    if !r.is_zero() {
        return Err(Error::Internal(format!(
            "closed-form 2-forest count for H_{n}({u},{v}) is not integral"
        )));
    }
    let total = head + q;
    if total.is_negative() {
        return Err(Error::Internal(format!(
            "closed-form 2-forest count for H_{n}({u},{v}) is negative"
        )));
    }
    Ok(total)
}

/// `F_{H_n}(u,v)` as the Fibonacci sum
/// `sum_{i=1}^{v-u} (F_i F_{i+2u-2} - F_{i-1} F_{i+2u-3}) F_{2n-2i-2u+1}`.
/// Not closed form, but an independent route that must agree with
/// [`straight_forest_closed`] everywhere.
pub fn straight_forest_sum(u: usize, v: usize, n: usize) -> Result<Count> {
    check_straight_pair(u, v, n)?;
    let (uu, vv, nn) = (u as i64, v as i64, n as i64);
    let mut total = BigInt::zero();
    for i in 1..=(vv - uu) {
        let coeff = fib(i) * fib(i + 2 * uu - 2) - fib(i - 1) * fib(i + 2 * uu - 3);
        total += coeff * fib(2 * nn - 2 * i - 2 * uu + 1);
    }
    Ok(total)
}

/// `F_{G_n}(u,v)` for the bent linear 2-tree with bend at `k`.  Same-side
/// pairs equal the straight count; pairs straddling the bend lose the
/// product of two Fibonacci brackets:
///
/// ```text
/// F_{G_n}(u,v) = F_{H_n}(u,v)
///   - [F_{k-2} F_{k+1} + 2 (-1)^{k-u} F_{u-1}^2]
///     [F_{n-k-2} F_{n-k+1} + 2 (-1)^{v-k-1} F_{n-v}^2]
/// ```
pub fn bent_forest(u: usize, v: usize, n: usize, k: usize) -> Result<Count> {
    check_bent_params(n, k)?;
    check_straight_pair(u, v, n)?;
    if v <= k + 1 || u > k + 1 {
        return straight_forest_closed(u, v, n);
    }
    let straight = straight_forest_closed(u, v, n)?;
    let correction = bend_correction(u, v, n, k);
    let total = straight - correction;
    if total.is_negative() {
        return Err(Error::Internal(format!(
            "bent 2-forest count for G_{n}(k={k})({u},{v}) is negative"
        )));
    }
    Ok(total)
}

fn bend_correction(u: usize, v: usize, n: usize, k: usize) -> BigInt {
    let (uu, vv, nn, kk) = (u as i64, v as i64, n as i64, k as i64);
    let sign = |e: i64| if e.rem_euclid(2) == 0 { 1 } else { -1 };
    let left = fib(kk - 2) * fib(kk + 1) + BigInt::from(2 * sign(kk - uu)) * fib(uu - 1).pow(2);
    let right = fib(nn - kk - 2) * fib(nn - kk + 1)
        + BigInt::from(2 * sign(vv - kk - 1)) * fib(nn - vv).pow(2);
    left * right
}

/// End-to-end resistance of the bent linear 2-tree:
/// `(n-1)/5 + 4 F_{n-1} / (5 L_{n-1}) - F_{k-2} F_{k+1} F_{n-k-2} F_{n-k+1} / F_{2n-2}`.
pub fn bent_end_resistance(n: usize, k: usize) -> Result<Ratio> {
    check_bent_params(n, k)?;
    let nn = n as i64;
    let kk = k as i64;
    let head = ratio(nn - 1, 5)?;
    let mid = ratio(BigInt::from(4) * fib(nn - 1), BigInt::from(5) * lucas(nn - 1))?;
    let corr = ratio(
        fib(kk - 2) * fib(kk + 1) * fib(nn - kk - 2) * fib(nn - kk + 1),
        fib(2 * nn - 2),
    )?;
    Ok(head + mid - corr)
}

fn pow3(e: u32) -> BigInt {
    BigInt::from(3u32).pow(e)
}

fn exact_quarter(x: i128, what: &str) -> Result<u32> {
    if x < 0 || x % 4 != 0 {
        return Err(Error::Internal(format!("{what} exponent {x} not in 4Z")));
    }
    u32::try_from(x / 4).map_err(|_| {
        Error::InvalidFamily(format!("{what}: stage too large for the closed form"))
    })
}

fn pow3_i128(e: u32) -> Result<i128> {
    3i128
        .checked_pow(e)
        .ok_or_else(|| Error::InvalidFamily("stage too large for the closed form".into()))
}

/// `T(S_n) = 2^{(3^n-1)/2} 3^{(3^{n+1}+2n+1)/4} 5^{(3^n-2n-1)/4}`.
pub fn sierpinski_trees(stage: u32) -> Result<Count> {
    let p = pow3_i128(stage)?;
    let n = stage as i128;
    let e2 = u32::try_from((p - 1) / 2)
        .map_err(|_| Error::InvalidFamily("stage too large for the closed form".into()))?;
    let e3 = exact_quarter(3 * p + 2 * n + 1, "tree count power of 3")?;
    let e5 = exact_quarter(p - 2 * n - 1, "tree count power of 5")?;
    Ok(BigInt::from(2u32).pow(e2) * pow3(e3) * BigInt::from(5u32).pow(e5))
}

/// `F_{S_n}(a,b) = 2^{(3^n+1)/2} 3^{(3^{n+1}-2n-3)/4} 5^{(3^n+2n-1)/4}`
/// for two corner vertices.
pub fn sierpinski_corner_forests(stage: u32) -> Result<Count> {
    let p = pow3_i128(stage)?;
    let n = stage as i128;
    let e2 = u32::try_from((p + 1) / 2)
        .map_err(|_| Error::InvalidFamily("stage too large for the closed form".into()))?;
    let e3 = exact_quarter(3 * p - 2 * n - 3, "2-forest count power of 3")?;
    let e5 = exact_quarter(p + 2 * n - 1, "2-forest count power of 5")?;
    Ok(BigInt::from(2u32).pow(e2) * pow3(e3) * BigInt::from(5u32).pow(e5))
}

/// `r_n(a,b) = (2/3)(5/3)^n` between any two corners of `S_n`.
pub fn sierpinski_corner_resistance(stage: u32) -> Ratio {
    Ratio::new(
        BigInt::from(2) * BigInt::from(5u32).pow(stage),
        pow3(stage + 1),
    )
}
