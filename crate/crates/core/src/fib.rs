//! Fibonacci and Lucas numbers with arbitrary precision.
//!
//! Conventions: `F_0 = 0`, `F_1 = F_2 = 1`; `L_0 = 2`, `L_1 = 1`.  Negative
//! indices follow the recurrence extension `F_{-p} = (-1)^{p+1} F_p`, which
//! keeps the closed-form evaluators total when an index expression like
//! `n + u - v - 2` dips below zero.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

/// Append-only memo of nonnegative-index Fibonacci numbers.
///
/// `fib` and `lucas` on the cache never recompute an index; concurrent
/// callers race only on extending the shared vector, which is guarded.
pub struct FibCache {
    table: Mutex<Vec<BigInt>>,
}

impl FibCache {
    pub fn new() -> Self {
        FibCache {
            table: Mutex::new(vec![BigInt::zero(), BigInt::one()]),
        }
    }

    /// `F_idx`, any integer index.
    pub fn fib(&self, idx: i64) -> BigInt {
        if idx >= 0 {
            self.fib_nonneg(idx as usize)
        } else {
            // F_{-p} = (-1)^{p+1} F_p
            let p = (-idx) as usize;
            let f = self.fib_nonneg(p);
            if p.is_multiple_of(2) {
                -f
            } else {
                f
            }
        }
    }

    /// `L_idx = F_{idx-1} + F_{idx+1}`, any integer index.
    pub fn lucas(&self, idx: i64) -> BigInt {
        self.fib(idx - 1) + self.fib(idx + 1)
    }

    fn fib_nonneg(&self, idx: usize) -> BigInt {
        let mut table = self.table.lock().unwrap();
        while table.len() <= idx {
            let next = &table[table.len() - 1] + &table[table.len() - 2];
            table.push(next);
        }
        table[idx].clone()
    }
}

impl Default for FibCache {
    fn default() -> Self {
        Self::new()
    }
}

static GLOBAL: Lazy<FibCache> = Lazy::new(FibCache::new);

/// `F_idx` from the process-wide cache.
pub fn fib(idx: i64) -> BigInt {
    GLOBAL.fib(idx)
}

/// `L_idx` from the process-wide cache.
pub fn lucas(idx: i64) -> BigInt {
    GLOBAL.lucas(idx)
}
