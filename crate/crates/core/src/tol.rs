use std::str::FromStr;

use crate::error::Error;

/// Absolute-plus-relative comparison: `|x - y| <= atol + rtol * max(|x|, |y|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub atol: f64,
    pub rtol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            atol: 1e-12,
            rtol: 1e-9,
        }
    }
}

impl Tolerance {
    pub const fn new(atol: f64, rtol: f64) -> Self {
        Tolerance { atol, rtol }
    }

    pub fn close(&self, x: f64, y: f64) -> bool {
        (x - y).abs() <= self.atol + self.rtol * x.abs().max(y.abs())
    }

    /// Componentwise [`Tolerance::close`] for points of equal length.
    pub fn close_points(&self, p: &[f64], q: &[f64]) -> bool {
        p.len() == q.len() && p.iter().zip(q).all(|(x, y)| self.close(*x, *y))
    }
}

/// Parses the `"atol,rtol"` format.
impl FromStr for Tolerance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::InvalidParameter(format!("tolerance must be \"atol,rtol\", got {s:?}"));
        let (a, r) = s.split_once(',').ok_or_else(bad)?;
        let atol: f64 = a.trim().parse().map_err(|_| bad())?;
        let rtol: f64 = r.trim().parse().map_err(|_| bad())?;
        if !(atol >= 0.0 && rtol >= 0.0 && atol.is_finite() && rtol.is_finite()) {
            return Err(bad());
        }
        Ok(Tolerance { atol, rtol })
    }
}

/// Guard threshold for tableau denominators: a value is degenerate when
/// `|d| <= 1e-10 * (1 + magnitude)`.
pub const GUARD_RTOL: f64 = 1e-10;

/// Relative threshold under which a Gaussian binomial or the G_n,k determinant
/// counts as vanishing.
pub const DEPENDENCE_RTOL: f64 = 1e-6;

pub(crate) fn max_abs_diff(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub(crate) fn norm2(p: &[f64]) -> f64 {
    p.iter().map(|x| x * x).sum::<f64>().sqrt()
}
