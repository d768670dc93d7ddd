//! Numeric type used for reported fractions.
//!
//! Every metric in this crate is a ratio of two integer counts, so it can be
//! produced either as a float or exactly as a rational.

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::Num;

pub trait Scalar: Num + Clone + PartialOrd + Debug {
    /// `num / den`. Callers guarantee `den != 0`.
    fn from_ratio(num: i128, den: i128) -> Self;

    fn to_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn from_ratio(num: i128, den: i128) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn from_ratio(num: i128, den: i128) -> Self {
        (num as f64 / den as f64) as f32
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }
}

impl Scalar for Ratio<i64> {
    fn from_ratio(num: i128, den: i128) -> Self {
        let num = i64::try_from(num).expect("numerator exceeds i64");
        let den = i64::try_from(den).expect("denominator exceeds i64");
        Ratio::new(num, den)
    }

    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

/// `num / den`, or zero when there is nothing to count.
pub fn fraction<S: Scalar>(num: usize, den: usize) -> S {
    if den == 0 {
        S::zero()
    } else {
        S::from_ratio(num as i128, den as i128)
    }
}
