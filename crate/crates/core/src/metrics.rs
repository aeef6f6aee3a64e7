//! Process-wide counter of big-integer multiplications, for the benchmark
//! surface: it lets `bench` compare the determinant route against the
//! reduction route in units that do not depend on wall-clock noise.

use std::sync::atomic::{AtomicU64, Ordering};

static BIGINT_MULS: AtomicU64 = AtomicU64::new(0);

/// Record `k` big-integer multiplications.
#[inline]
pub(crate) fn record_muls(k: u64) {
    BIGINT_MULS.fetch_add(k, Ordering::Relaxed);
}

/// Total big-integer multiplications recorded since the last reset.
pub fn bigint_muls() -> u64 {
    BIGINT_MULS.load(Ordering::Relaxed)
}

/// Reset the multiplication counter to zero.
pub fn reset_bigint_muls() {
    BIGINT_MULS.store(0, Ordering::Relaxed);
}
