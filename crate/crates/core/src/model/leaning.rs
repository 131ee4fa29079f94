use crate::error::{Error, Result};

/// Values within this distance outside `[-1, 1]` are clipped rather than rejected.
pub const LEANING_SLACK: f64 = 1e-12;

/// Checks that `x` is a leaning, clipping rounding noise at the boundary.
pub fn validate_leaning(x: f64) -> Result<f64> {
    if x.is_nan() || x.abs() > 1.0 + LEANING_SLACK {
        return Err(Error::Invalid(format!("leaning {x} outside [-1, 1]")));
    }
    Ok(x.clamp(-1.0, 1.0))
}

/// The closed interval of leanings a node has been exposed to so far.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeaningSpan {
    pub lo: f64,
    pub hi: f64,
}

impl LeaningSpan {
    /// The span of a node exposed only to its own leaning.
    #[inline]
    pub fn point(x: f64) -> Self {
        LeaningSpan { lo: x, hi: x }
    }

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        let lo = validate_leaning(lo)?;
        let hi = validate_leaning(hi)?;
        if lo > hi {
            return Err(Error::Invalid(format!("span lower end {lo} above upper end {hi}")));
        }
        Ok(LeaningSpan { lo, hi })
    }

    #[inline]
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Increase in width from also covering `x`.
    #[inline]
    pub fn gain(&self, x: f64) -> f64 {
        (x - self.hi).max(0.0) + (self.lo - x).max(0.0)
    }

    /// Extends the span to cover `x` and returns the width gained.
    #[inline]
    pub fn extend(&mut self, x: f64) -> f64 {
        let g = self.gain(x);
        if x > self.hi {
            self.hi = x;
        } else if x < self.lo {
            self.lo = x;
        }
        g
    }
}

/// Marginal width gained by adding `new_leaning` to `current`, with the updated span.
pub fn span_gain(current: LeaningSpan, new_leaning: f64) -> (f64, LeaningSpan) {
    let mut next = current;
    let g = next.extend(new_leaning);
    (g, next)
}

/// Range of `{node_leaning} ∪ item_leanings`; zero when no item is present.
pub fn diversity_level(node_leaning: f64, item_leanings: &[f64]) -> Result<f64> {
    let mut span = LeaningSpan::point(validate_leaning(node_leaning)?);
    for &x in item_leanings {
        span.extend(validate_leaning(x)?);
    }
    Ok(span.width())
}
