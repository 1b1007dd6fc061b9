//! Scalar abstraction shared by the geometry and fitting layers.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst};

/// Real floating-point scalar usable by the generic parts of the crate.
///
/// Blanket-implemented for `f32` and `f64`. The cycle expansion, pressure
/// solver and root finder are tuned for double precision and use `f64`
/// directly.
pub trait Real: Float + FloatConst + Debug + Display + Default + Send + Sync + 'static {
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("f64 literal representable")
    }

    /// Lossy conversion to `f64`.
    fn to_f64_lossy(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    /// Default absolute tolerance used for structural checks at this precision.
    fn check_eps() -> Self;
}

impl Real for f32 {
    fn check_eps() -> Self {
        1e-5
    }
}

impl Real for f64 {
    fn check_eps() -> Self {
        1e-12
    }
}

/// `2·arccosh(|tr|/2)`, evaluated without cancellation near `|tr| = 2`.
pub fn length_from_trace<T: Real>(trace: T) -> T {
    let h = trace.abs() / T::lit(2.0);
    if h <= T::one() {
        return T::zero();
    }
    let two = T::lit(2.0);
    two * (h + ((h - T::one()) * (h + T::one())).sqrt()).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_length_relation() {
        let l = length_from_trace(2.0 * 1f64.cosh());
        assert!((l - 2.0).abs() < 1e-14);
        assert_eq!(length_from_trace(2.0f64), 0.0);
        assert_eq!(length_from_trace(1.0f64), 0.0);
        let l32 = length_from_trace(2.0f32 * 3.5f32.cosh());
        assert!((l32 - 7.0).abs() < 1e-5);
    }

    #[test]
    fn huge_traces_stay_finite() {
        let l = length_from_trace(1e120f64);
        assert!(l.is_finite());
        assert!((l - 2.0 * (1e120f64).ln()).abs() < 1e-9);
    }
}
