//! Resistance distance with unit resistors on every edge instance.
//!
//! The primary route is exact: `r_G(u,v) = F_G(u,v) / T(G)`.  On top of it
//! sit the reduction forms — the cut-vertex sum, the identification formula
//!
//! ```text
//! r_{G/ij}(u,v) = r_G(u,v) - [r_G(u,i) + r_G(v,j) - r_G(u,j) - r_G(v,i)]^2
//!                            / (4 r_G(i,j))
//! ```
//!
//! and its 2-separation consequences for same-side and cross-side pairs.
//! A floating pseudoinverse solve is provided as a diagnostic cross-check
//! only; it never feeds exact outputs.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::count::{count_2forests_det, count_trees_det};
use crate::error::{Error, Result};
use crate::exact::{render_decimal, Ratio};
use crate::graph::{MultiGraph, TwoSeparation, Vertex};

/// Which route produced a resistance value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResistanceMethod {
    FOverT,
    SameSideReduction,
    CrossReduction,
    CutVertex,
    PinvFloat,
}

/// A resistance value with its provenance.  Exact methods agree
/// bit-for-bit; the pseudoinverse carries only a decimal.
#[derive(Clone, Debug)]
pub struct ResistanceResult {
    pub method: ResistanceMethod,
    pub value: Option<Ratio>,
    pub float_value: String,
}

impl ResistanceResult {
    pub fn exact(method: ResistanceMethod, value: Ratio) -> Self {
        let float_value = render_decimal(&value, 12);
        ResistanceResult {
            method,
            value: Some(value),
            float_value,
        }
    }

    pub fn float(value: f64) -> Self {
        ResistanceResult {
            method: ResistanceMethod::PinvFloat,
            value: None,
            float_value: format!("{value:.12}"),
        }
    }
}

fn check_vertex(g: &MultiGraph, v: Vertex) -> Result<()> {
    if v == 0 || v > g.vertex_count() {
        return Err(Error::VertexOutOfRange {
            v,
            n: g.vertex_count(),
        });
    }
    Ok(())
}

/// Exact resistance distance `F_G(u,v) / T(G)`.
pub fn resistance(g: &MultiGraph, u: Vertex, v: Vertex) -> Result<Ratio> {
    check_vertex(g, u)?;
    check_vertex(g, v)?;
    if u == v {
        return Err(Error::NotDistinct(u));
    }
    if !g.connected() {
        return Err(Error::Disconnected);
    }
    let f = count_2forests_det(g, u, v)?;
    let t = count_trees_det(g);
    Ok(Ratio::new(f, t))
}

/// `r(u,v)` with the `r(x,x) = 0` convention used inside the reduction
/// formulas.
fn r0(g: &MultiGraph, u: Vertex, v: Vertex) -> Result<Ratio> {
    if u == v {
        Ok(Ratio::zero())
    } else {
        resistance(g, u, v)
    }
}

/// Resistance through a cut vertex `w`: the side resistances add when `u`
/// and `v` are separated by `w`, and the far side drops out entirely when
/// they are not.
pub fn resistance_cut_vertex(g: &MultiGraph, w: Vertex, u: Vertex, v: Vertex) -> Result<Ratio> {
    check_vertex(g, w)?;
    check_vertex(g, u)?;
    check_vertex(g, v)?;
    if u == v {
        return Err(Error::NotDistinct(u));
    }
    if !g.connected() {
        return Err(Error::Disconnected);
    }
    let comps = g.components_excluding(&BTreeSet::from([w]));
    if comps.len() < 2 {
        return Err(Error::NotACutVertex(w));
    }
    let comp_of = |x: Vertex| comps.iter().position(|c| c.contains(&x));
    let side = |idx: usize| {
        let verts: BTreeSet<Vertex> = comps[idx].iter().copied().chain([w]).collect();
        g.induced(&verts)
    };
    if u == w || v == w {
        let x = if u == w { v } else { u };
        let (sub, map) = side(comp_of(x).expect("vertex in a component"));
        return resistance(&sub, map.apply(w), map.apply(x));
    }
    let cu = comp_of(u).expect("vertex in a component");
    let cv = comp_of(v).expect("vertex in a component");
    if cu == cv {
        let (sub, map) = side(cu);
        resistance(&sub, map.apply(u), map.apply(v))
    } else {
        let (g1, m1) = side(cu);
        let (g2, m2) = side(cv);
        Ok(resistance(&g1, m1.apply(u), m1.apply(w))?
            + resistance(&g2, m2.apply(w), m2.apply(v))?)
    }
}

/// Right-hand side of the identification formula: the resistance in `G/ij`
/// between the images of `u` and `v`, computed purely from resistances in
/// `G`.  Coincident arguments contribute `r(x,x) = 0`.
pub fn resistance_identified(
    g: &MultiGraph,
    i: Vertex,
    j: Vertex,
    u: Vertex,
    v: Vertex,
) -> Result<Ratio> {
    check_vertex(g, i)?;
    check_vertex(g, j)?;
    check_vertex(g, u)?;
    check_vertex(g, v)?;
    if i == j {
        return Err(Error::NotDistinct(i));
    }
    let base = r0(g, u, v)?;
    let cross = r0(g, u, i)? + r0(g, v, j)? - r0(g, u, j)? - r0(g, v, i)?;
    let denom = Ratio::from(BigInt::from(4)) * resistance(g, i, j)?;
    debug_assert!(denom.is_positive(), "r(i,j) must be positive for i != j");
    Ok(base - &cross * &cross / denom)
}

/// Same-side resistance across a 2-separation (`u`, `v` in side 1,
/// separator vertices allowed):
///
/// ```text
/// r_G(u,v) = r_{G1}(u,v) - [r_{G1}(u,i) + r_{G1}(v,j) - r_{G1}(u,j) - r_{G1}(v,i)]^2
///                          / (4 [r_{G1}(i,j) + r_{G2}(i,j)])
/// ```
pub fn resistance_same_side(sep: &TwoSeparation, u: Vertex, v: Vertex) -> Result<Ratio> {
    let u1 = sep.in_g1(u).ok_or(Error::WrongSide { v: u })?;
    let v1 = sep.in_g1(v).ok_or(Error::WrongSide { v })?;
    if u1 == v1 {
        return Err(Error::NotDistinct(u));
    }
    let (i1, j1) = sep.sep_in_g1();
    let (i2, j2) = sep.sep_in_g2();
    let base = r0(&sep.g1, u1, v1)?;
    let cross = r0(&sep.g1, u1, i1)? + r0(&sep.g1, v1, j1)?
        - r0(&sep.g1, u1, j1)?
        - r0(&sep.g1, v1, i1)?;
    let denom = Ratio::from(BigInt::from(4))
        * (resistance(&sep.g1, i1, j1)? + resistance(&sep.g2, i2, j2)?);
    Ok(base - &cross * &cross / denom)
}

/// Cross-side resistance (`u` strictly in side 1, `v` strictly in side 2):
/// `r_G(u,v) = NUM / [r_{G1}(i,j) + r_{G2}(i,j)]` where `NUM` combines the
/// identified-side resistances with half-weighted mixed terms.
pub fn resistance_cross(sep: &TwoSeparation, u: Vertex, v: Vertex) -> Result<Ratio> {
    if u == sep.i || u == sep.j || v == sep.i || v == sep.j {
        return Err(Error::WrongSide {
            v: if u == sep.i || u == sep.j { u } else { v },
        });
    }
    let u1 = sep.in_g1(u).ok_or(Error::WrongSide { v: u })?;
    let v2 = sep.in_g2(v).ok_or(Error::WrongSide { v })?;
    let (i1, j1) = sep.sep_in_g1();
    let (i2, j2) = sep.sep_in_g2();

    let r1_ij = resistance(&sep.g1, i1, j1)?;
    let r2_ij = resistance(&sep.g2, i2, j2)?;
    let (g1id, m1) = sep.g1.identify(i1, j1)?;
    let (g2id, m2) = sep.g2.identify(i2, j2)?;
    let r1_id = resistance(&g1id, m1.apply(u1), m1.apply(i1))?;
    let r2_id = resistance(&g2id, m2.apply(v2), m2.apply(i2))?;
    let r1_ui = resistance(&sep.g1, u1, i1)?;
    let r1_uj = resistance(&sep.g1, u1, j1)?;
    let r2_vi = resistance(&sep.g2, v2, i2)?;
    let r2_vj = resistance(&sep.g2, v2, j2)?;

    let half = Ratio::new(BigInt::from(1), BigInt::from(2));
    let num = &r1_id * &r1_ij
        + &r2_id * &r2_ij
        + &half * (&r1_ui * &r2_vj + &r1_uj * &r2_vi)
        - &half * (&r1_ui * &r2_vi + &r1_uj * &r2_vj)
        + &half * (&r1_ui + &r1_uj) * &r2_ij
        + &half * &r1_ij * (&r2_vi + &r2_vj)
        - &half * &r1_ij * &r2_ij;
    Ok(num / (r1_ij + r2_ij))
}

/// Floating resistance via the Laplacian pseudoinverse, computed as a dense
/// solve on the system grounded at the last vertex.  Diagnostic only;
/// documented tolerance 1e-9 relative against the exact value.
pub fn resistance_pinv(g: &MultiGraph, u: Vertex, v: Vertex) -> Result<f64> {
    check_vertex(g, u)?;
    check_vertex(g, v)?;
    if u == v {
        return Err(Error::NotDistinct(u));
    }
    if !g.connected() {
        return Err(Error::Disconnected);
    }
    let n = g.vertex_count();
    let ground = n - 1; // 0-based index of the grounded vertex
    let dim = n - 1;
    let lap = g.laplacian();
    let mut a = vec![0f64; dim * dim];
    for r in 0..dim {
        for c in 0..dim {
            a[r * dim + c] = lap.get(r, c).to_f64().unwrap_or(f64::NAN);
        }
    }
    let mut b = vec![0f64; dim];
    if u - 1 != ground {
        b[u - 1] = 1.0;
    }
    if v - 1 != ground {
        b[v - 1] = -1.0;
    }
    solve_dense(&mut a, &mut b, dim)?;
    let potential = |x: Vertex| if x - 1 == ground { 0.0 } else { b[x - 1] };
    Ok(potential(u) - potential(v))
}

/// Gaussian elimination with partial pivoting; solves in place, result in `b`.
fn solve_dense(a: &mut [f64], b: &mut [f64], n: usize) -> Result<()> {
    for k in 0..n {
        let pivot_row = (k..n)
            .max_by(|&r, &s| {
                a[r * n + k]
                    .abs()
                    .partial_cmp(&a[s * n + k].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        if a[pivot_row * n + k].abs() < 1e-300 {
            return Err(Error::Internal(
                "grounded Laplacian is numerically singular".to_string(),
            ));
        }
        if pivot_row != k {
            for c in 0..n {
                a.swap(k * n + c, pivot_row * n + c);
            }
            b.swap(k, pivot_row);
        }
        for r in (k + 1)..n {
            let factor = a[r * n + k] / a[k * n + k];
            if factor == 0.0 {
                continue;
            }
            for c in k..n {
                a[r * n + c] -= factor * a[k * n + c];
            }
            b[r] -= factor * b[k];
        }
    }
    for k in (0..n).rev() {
        let mut acc = b[k];
        for c in (k + 1)..n {
            acc -= a[k * n + c] * b[c];
        }
        b[k] = acc / a[k * n + k];
    }
    Ok(())
}

/// Relative gap between the pseudoinverse value and the exact one, for the
/// diagnostic tolerance check.
pub fn pinv_relative_error(g: &MultiGraph, u: Vertex, v: Vertex) -> Result<f64> {
    let float = resistance_pinv(g, u, v)?;
    let exact = resistance(g, u, v)?;
    let exact_f = exact.numer().to_f64().unwrap() / exact.denom().to_f64().unwrap();
    if exact_f == 0.0 {
        return Ok(float.abs());
    }
    Ok(((float - exact_f) / exact_f).abs())
}
