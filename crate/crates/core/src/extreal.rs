//! Extended real scalars on `[-inf, +inf]` with guarded arithmetic.
//!
//! Conventions used throughout the library:
//!
//! - total order: `-inf <` any finite value `< +inf`;
//! - `exp(-inf) = 0` and `exp(+inf) = +inf`;
//! - the infimum of an empty collection is `+inf`, the supremum is `-inf`;
//! - `(+inf) + (-inf)` is a hard error, never a silent NaN.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A value in `[-inf, +inf]`.
///
/// NaN cannot be constructed and `-0.0` is normalized to `0.0`, so equality
/// and the total order agree everywhere.
#[derive(Debug, Clone, Copy)]
pub struct ExtReal(f64);

impl ExtReal {
    pub const NEG_INF: ExtReal = ExtReal(f64::NEG_INFINITY);
    pub const POS_INF: ExtReal = ExtReal(f64::INFINITY);
    pub const ZERO: ExtReal = ExtReal(0.0);

    /// Wraps a float. Panics on NaN: a NaN reaching this point is a bug in
    /// the caller, and letting it through would corrupt every downstream
    /// infimum and supremum.
    pub fn new(v: f64) -> ExtReal {
        assert!(!v.is_nan(), "ExtReal cannot hold NaN");
        ExtReal(if v == 0.0 { 0.0 } else { v })
    }

    /// Fallible constructor for values coming from outside the library.
    pub fn try_new(v: f64) -> Result<ExtReal> {
        if v.is_nan() {
            return Err(Error::InvalidParam("NaN is not an extended real".into()));
        }
        Ok(ExtReal::new(v))
    }

    /// Wraps a float that must be finite.
    pub fn finite(v: f64) -> ExtReal {
        assert!(v.is_finite(), "expected a finite value, got {v}");
        ExtReal::new(v)
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_pos_inf(self) -> bool {
        self.0 == f64::INFINITY
    }

    pub fn is_neg_inf(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// The underlying float, with `+-inf` mapping to the IEEE infinities.
    pub fn to_f64(self) -> f64 {
        self.0
    }

    /// `exp` with the conventions `exp(-inf) = 0`, `exp(+inf) = +inf`.
    pub fn exp(self) -> ExtReal {
        ExtReal::new(self.0.exp())
    }
}

impl std::ops::Neg for ExtReal {
    type Output = ExtReal;

    fn neg(self) -> ExtReal {
        ExtReal::new(-self.0)
    }
}

impl PartialEq for ExtReal {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        // NaN is unrepresentable, so the partial order is total.
        self.0.partial_cmp(&other.0).expect("ExtReal is never NaN")
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_pos_inf() {
            write!(f, "inf")
        } else if self.is_neg_inf() {
            write!(f, "-inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Extended addition. Fails on `(+inf) + (-inf)` instead of producing NaN.
pub fn ext_add(a: ExtReal, b: ExtReal) -> Result<ExtReal> {
    if (a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf()) {
        return Err(Error::IndeterminateSum);
    }
    Ok(ExtReal::new(a.0 + b.0))
}

/// Extended multiplication. None of the supported formulas ever multiplies
/// zero by an infinity, so that case fails loudly instead of picking a
/// convention.
pub fn ext_mul(a: ExtReal, b: ExtReal) -> Result<ExtReal> {
    if (a.0 == 0.0 && b.0.is_infinite()) || (b.0 == 0.0 && a.0.is_infinite()) {
        return Err(Error::IndeterminateProduct);
    }
    Ok(ExtReal::new(a.0 * b.0))
}

/// Infimum under the total order; `+inf` on empty input.
pub fn ext_inf<I: IntoIterator<Item = ExtReal>>(xs: I) -> ExtReal {
    xs.into_iter().min().unwrap_or(ExtReal::POS_INF)
}

/// Supremum under the total order; `-inf` on empty input.
pub fn ext_sup<I: IntoIterator<Item = ExtReal>>(xs: I) -> ExtReal {
    xs.into_iter().max().unwrap_or(ExtReal::NEG_INF)
}
