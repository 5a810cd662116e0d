//! Numeric element type for shares and agreement scores.
//!
//! Statistics are generic so the same code runs on `f32`, `f64` or exact
//! rationals (`num_rational::Rational64`), the latter giving exact kappa
//! values for small hand-checked cases.

use std::fmt::Debug;

use num_traits::{FromPrimitive, Num, ToPrimitive};

pub trait Scalar:
    Num + FromPrimitive + ToPrimitive + Copy + PartialOrd + Debug + Send + Sync
{
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count fits the scalar type")
    }

    fn hundred() -> Self {
        Self::from_count(100)
    }

    /// Lossy conversion for rendering.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Num + FromPrimitive + ToPrimitive + Copy + PartialOrd + Debug + Send + Sync
{
}

/// Half-up rounding to two decimals, done on the decimal rendering of the
/// value so that 9.485 is rendered as 9.49 rather than following the binary
/// approximation.
pub fn round_half_up_2(value: f64) -> f64 {
    let scaled = format!("{:.6}", value.abs() * 100.0);
    let scaled: f64 = scaled.parse().unwrap_or(0.0);
    let rounded = (scaled + 0.5).floor() / 100.0;
    if value < 0.0 {
        -rounded
    } else {
        rounded
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_up_rounding() {
        assert_eq!(round_half_up_2(9.4827), 9.48);
        assert_eq!(round_half_up_2(2.5862), 2.59);
        assert_eq!(round_half_up_2(16.6666), 16.67);
        assert_eq!(round_half_up_2(0.125), 0.13);
        assert_eq!(round_half_up_2(1.005), 1.01);
        assert_eq!(round_half_up_2(-0.125), -0.13);
        assert_eq!(round_half_up_2(100.0), 100.0);
    }
}
