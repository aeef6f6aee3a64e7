//! Exact integer matrices, fraction-free determinants, and rational helpers.
//!
//! Everything here is exact: no floating point anywhere.  `det_exact` is the
//! workhorse behind the matrix-tree identities, so it must be bit-correct on
//! arbitrary integer matrices, including singular ones.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::metrics;

/// Arbitrary-precision integer used for tree / 2-forest counts.
/// Counts are nonnegative wherever they denote a number of subgraphs; the
/// counting operations assert this at their boundaries.
pub type Count = BigInt;

/// Exact rational in canonical form (reduced, positive denominator).
/// `BigRational` maintains the canonical form on every operation.
pub type Ratio = BigRational;

/// Construct a canonical `Ratio`, rejecting a zero denominator.
pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Ratio> {
    let den = den.into();
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(BigRational::new(num.into(), den))
}

/// Render a `Ratio` as a decimal string with `digits` fractional digits,
/// rounding half-to-even, then trimming trailing zeros.
///
/// `14/9` with 12 digits renders as `1.555555555556`; `81/144` as `0.5625`;
/// integers render without a fractional part.
pub fn render_decimal(value: &Ratio, digits: u32) -> String {
    let num = value.numer();
    let den = value.denom();
    let negative = num.is_negative();
    let num_abs = num.abs();

    let scale = BigInt::from(10u32).pow(digits);
    let scaled = &num_abs * &scale;
    let (mut q, r) = num_integer::Integer::div_rem(&scaled, den);
    // round half to even on the remainder
    let twice: BigInt = &r * 2;
    match twice.cmp(den) {
        std::cmp::Ordering::Greater => q += 1,
        std::cmp::Ordering::Equal => {
            if num_integer::Integer::is_odd(&q) {
                q += 1;
            }
        }
        std::cmp::Ordering::Less => {}
    }

    let digits_str = q.to_string();
    let (int_part, frac_part) = if digits_str.len() <= digits as usize {
        (
            "0".to_string(),
            format!("{:0>width$}", digits_str, width = digits as usize),
        )
    } else {
        let split = digits_str.len() - digits as usize;
        (digits_str[..split].to_string(), digits_str[split..].to_string())
    };
    let frac_trimmed = frac_part.trim_end_matches('0');
    let mut out = String::new();
    if negative && (int_part != "0" || !frac_trimmed.is_empty()) {
        out.push('-');
    }
    out.push_str(&int_part);
    if !frac_trimmed.is_empty() {
        out.push('.');
        out.push_str(frac_trimmed);
    }
    out
}

/// Dense square matrix of arbitrary-precision integers, row-major, 0-indexed.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    dim: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(dim: usize) -> Self {
        IntMatrix {
            dim,
            data: vec![BigInt::zero(); dim * dim],
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        IntMatrix { dim, data }
    }

    /// Build from rows of machine integers; handy in tests.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "rows must be square");
        IntMatrix::from_fn(dim, |r, c| BigInt::from(rows[r][c]))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.dim + c] = v;
    }

    /// Submatrix with the given rows and columns removed (0-indexed).
    pub fn minor(&self, drop_rows: &BTreeSet<usize>, drop_cols: &BTreeSet<usize>) -> Result<IntMatrix> {
        for &r in drop_rows.iter().chain(drop_cols.iter()) {
            if r >= self.dim {
                return Err(Error::VertexOutOfRange { v: r + 1, n: self.dim });
            }
        }
        let keep_rows: Vec<usize> = (0..self.dim).filter(|r| !drop_rows.contains(r)).collect();
        let keep_cols: Vec<usize> = (0..self.dim).filter(|c| !drop_cols.contains(c)).collect();
        if keep_rows.len() != keep_cols.len() {
            return Err(Error::Internal(format!(
                "minor would be {}x{}, matrices here are square",
                keep_rows.len(),
                keep_cols.len()
            )));
        }
        Ok(IntMatrix::from_fn(keep_rows.len(), |r, c| {
            self.get(keep_rows[r], keep_cols[c]).clone()
        }))
    }

    pub fn is_symmetric(&self) -> bool {
        for r in 0..self.dim {
            for c in (r + 1)..self.dim {
                if self.get(r, c) != self.get(c, r) {
                    return false;
                }
            }
        }
        true
    }

    pub fn row_sums(&self) -> Vec<BigInt> {
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.get(r, c)).sum())
            .collect()
    }

    /// Exact determinant by fraction-free Bareiss elimination.
    ///
    /// Each stage cross-multiplies 2x2 minors and divides by the previous
    /// pivot; all divisions are exact by the Desnanot-Jacobi identity, so the
    /// intermediate entries stay bounded by minors of the input.  Row swaps
    /// (with sign tracking) handle zero pivots.  The 0x0 determinant is 1.
    pub fn det_exact(&self) -> BigInt {
        let n = self.dim;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.data.clone();
        let at = |a: &Vec<BigInt>, r: usize, c: usize| -> BigInt { a[r * n + c].clone() };
        let mut sign = 1i8;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                match (k + 1..n).find(|&r| !a[r * n + k].is_zero()) {
                    Some(r) => {
                        for c in 0..n {
                            a.swap(k * n + c, r * n + c);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            let pivot = at(&a, k, k);
            for i in (k + 1)..n {
                let aik = at(&a, i, k);
                for j in (k + 1)..n {
                    let val = &pivot * &a[i * n + j] - &aik * &a[k * n + j];
                    metrics::record_muls(2);
                    a[i * n + j] = val / &prev;
                }
                a[i * n + k] = BigInt::zero();
            }
            prev = pivot;
        }
        let det = at(&a, n - 1, n - 1);
        if sign < 0 {
            -det
        } else {
            det
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.dim, self.dim)?;
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Convenience wrapper for `minor` with a single symmetric row/column set,
/// the shape every Laplacian identity uses.
pub fn principal_minor(m: &IntMatrix, drop: &BTreeSet<usize>) -> Result<IntMatrix> {
    m.minor(drop, drop)
}
