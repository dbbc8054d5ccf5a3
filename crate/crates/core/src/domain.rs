//! Concrete group domains carrying their Haar measure.

use crate::error::{Error, Result};

/// A concrete unimodular group with its Haar measure: the real line with
/// Lebesgue measure restricted to a truncated uniform grid, or the cyclic
/// group `Z_n` with counting measure normalized to total mass one (the
/// compact case).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroupDomain {
    /// Grid x_i = -L + i h, i = 0..n, step h = 2L/n, covering [-L, L).
    RealLine { half_width: f64, n: usize },
    /// Z_n with Haar weights 1/n summing to exactly one.
    Cyclic { n: usize },
}

impl GroupDomain {
    pub fn real_line(half_width: f64, n: usize) -> Result<Self> {
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::invalid("half_width", "must be a positive real"));
        }
        if n == 0 || n % 2 != 0 {
            return Err(Error::invalid("n", "grid size must be even and positive"));
        }
        Ok(GroupDomain::RealLine { half_width, n })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", "cyclic order must be positive"));
        }
        Ok(GroupDomain::Cyclic { n })
    }

    /// Default truncation: L = 16, n = 4096. Gaussian tails of unit scale
    /// beyond L contribute less than 1e-50 to any L_p norm with p >= 1.
    pub fn default_real_line() -> Self {
        GroupDomain::RealLine {
            half_width: 16.0,
            n: 4096,
        }
    }

    pub fn len(&self) -> usize {
        match *self {
            GroupDomain::RealLine { n, .. } | GroupDomain::Cyclic { n } => n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid step on the line; 1 on the cyclic group (index spacing).
    pub fn grid_step(&self) -> f64 {
        match *self {
            GroupDomain::RealLine { half_width, n } => 2.0 * half_width / n as f64,
            GroupDomain::Cyclic { .. } => 1.0,
        }
    }

    /// Haar weight of one grid node: h on the line, 1/n on Z_n.
    pub fn haar_weight(&self) -> f64 {
        match *self {
            GroupDomain::RealLine { .. } => self.grid_step(),
            GroupDomain::Cyclic { n } => 1.0 / n as f64,
        }
    }

    pub fn point(&self, i: usize) -> f64 {
        match *self {
            GroupDomain::RealLine { half_width, n } => {
                -half_width + i as f64 * (2.0 * half_width / n as f64)
            }
            GroupDomain::Cyclic { .. } => i as f64,
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }
}
