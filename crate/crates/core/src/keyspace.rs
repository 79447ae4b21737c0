//! Keyspace size accounting, in log₂ units.
//!
//! With values in an `h`-bit field there are on the order of `2^(h·m)`
//! orthogonal `m×m` matrices. Splitting each matrix dimension into `r` shares
//! gives `r²` blocks whose order can be permuted, for `(r²)! · 2^(h·m·r)`
//! combinations. These are order-of-magnitude lower bounds, not exact counts.

use crate::error::{Error, Result};

/// Above this, `log₂ n!` switches from exact summation to the Stirling series.
const EXACT_LOG_FACTORIAL_LIMIT: u64 = 1_000_000;

pub const KEYSPACE_LABEL: &str = "lower-bound order-of-magnitude";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KeyspaceQuery {
    /// Bits per encoded value.
    pub bits: u64,
    /// Matrix dimension.
    pub dim: u64,
    /// Shares per matrix dimension.
    pub shares: u64,
}

impl KeyspaceQuery {
    pub fn new(bits: u64, dim: u64, shares: u64) -> Result<Self> {
        if bits == 0 || dim == 0 || shares == 0 {
            return Err(Error::InvalidDimension(format!(
                "keyspace parameters must be positive (h={bits}, m={dim}, r={shares})"
            )));
        }
        if !dim.is_multiple_of(shares) {
            return Err(Error::Invariant(format!(
                "matrix dimension {dim} is not divisible by {shares} shares"
            )));
        }
        Ok(Self { bits, dim, shares })
    }

    pub fn log2_orthogonal_count(&self) -> f64 {
        (self.bits * self.dim) as f64
    }

    pub fn log2_combined(&self) -> f64 {
        log2_factorial(self.shares * self.shares) + (self.bits * self.dim * self.shares) as f64
    }
}

/// `log₂` of the number of candidate `m×m` orthogonal matrices over an `h`-bit field.
pub fn log2_orthogonal_count(h: u64, m: u64) -> Result<f64> {
    if h == 0 || m == 0 {
        return Err(Error::InvalidDimension(format!(
            "keyspace parameters must be positive (h={h}, m={m})"
        )));
    }
    Ok((h * m) as f64)
}

/// `log₂((r²)! · 2^(h·m·r))`.
pub fn log2_combined_keyspace(h: u64, m: u64, r: u64) -> Result<f64> {
    Ok(KeyspaceQuery::new(h, m, r)?.log2_combined())
}

/// `log₂ n!`, exact summation up to 10⁶ and the Stirling series beyond.
pub fn log2_factorial(n: u64) -> f64 {
    if n <= EXACT_LOG_FACTORIAL_LIMIT {
        (2..=n).map(|j| (j as f64).log2()).sum()
    } else {
        let x = n as f64;
        let ln = x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln() + 1.0 / (12.0 * x)
            - 1.0 / (360.0 * x.powi(3))
            + 1.0 / (1260.0 * x.powi(5));
        ln / std::f64::consts::LN_2
    }
}
