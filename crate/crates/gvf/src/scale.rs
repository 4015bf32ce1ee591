//! The level chain: an ordered set of admissible values with uniform spacing.

use crate::error::{Error, Result};

/// An arithmetic chain of `count` admissible values starting at `origin`
/// with spacing `delta`. Level indices are 1-based: `value(1) == origin`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelScale {
    origin: f64,
    delta: f64,
    count: usize,
}

impl LevelScale {
    pub fn new(origin: f64, delta: f64, count: usize) -> Result<Self> {
        if !(delta > 0.0) || !delta.is_finite() || !origin.is_finite() || count == 0 {
            return Err(Error::InvalidScale { delta, count });
        }
        Ok(LevelScale { origin, delta, count })
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Value of level `k`, `k` in `1..=count`.
    pub fn value(&self, k: usize) -> f64 {
        debug_assert!(k >= 1 && k <= self.count);
        self.origin + (k - 1) as f64 * self.delta
    }

    /// Nearest level index for `v`, clamped into `1..=count`.
    /// Ties halfway between two levels resolve toward the lower index.
    pub fn nearest_index(&self, v: f64) -> usize {
        let t = (v - self.origin) / self.delta;
        // nearest integer with ties down: ceil(t - 1/2)
        let k = (t - 0.5).ceil();
        if k < 0.0 {
            1
        } else {
            ((k as usize) + 1).min(self.count)
        }
    }
}
