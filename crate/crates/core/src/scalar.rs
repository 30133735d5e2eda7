//! Numeric vocabulary shared by every solver stage.
//!
//! Costs and delays are unsigned integers of any primitive width. All
//! intermediate sums are widened to `u128` where an overflow would change an
//! answer, and the scaling parameter is an exact rational so that floors are
//! never perturbed by rounding.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{NumCast, PrimInt, Unsigned};

/// Unsigned primitive integer usable as an edge cost or delay.
pub trait Weight:
    PrimInt + Unsigned + Hash + Debug + Display + FromStr + Default + Send + Sync + 'static
{
    /// Lossless widening to `u128`.
    #[inline]
    fn as_u128(self) -> u128 {
        self.to_u128().expect("unsigned primitive fits in u128")
    }

    /// Narrowing from `u128`, `None` when the value does not fit.
    #[inline]
    fn narrow(value: u128) -> Option<Self> {
        <Self as NumCast>::from(value)
    }

    /// Sentinel used by the dynamic programs for "unreachable".
    #[inline]
    fn infinity() -> Self {
        Self::max_value()
    }
}

impl<T> Weight for T where
    T: PrimInt + Unsigned + Hash + Debug + Display + FromStr + Default + Send + Sync + 'static
{
}

/// Scaling parameter of the approximation, always an exact fraction `p/q`.
pub type Epsilon = Ratio<u64>;

/// Exact rational used for delay certificates such as `(1 + eps) * D`.
pub type Rational = Ratio<u128>;

/// Sum of weights, widened. `None` on `u128` overflow.
pub fn checked_sum<W: Weight>(values: impl IntoIterator<Item = W>) -> Option<u128> {
    values
        .into_iter()
        .try_fold(0u128, |acc, w| acc.checked_add(w.as_u128()))
}
