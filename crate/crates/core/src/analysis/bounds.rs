//! Theoretical density exponents for resonances in strips.

use serde::Serialize;

use crate::analysis::strip::beta_from_tilde;
use crate::error::{Error, Result};
use crate::pressure::PressureCurve;
use crate::scalar::Real;

/// `m(β̃, δ) = min(2β̃δ, δ)`.
pub fn m_fractal_weyl<T: Real>(beta_tilde: T, delta: T) -> T {
    (T::lit(2.0) * beta_tilde * delta).min(delta)
}

/// `m(β, δ) = min(2δ + 2β + 1 - n, δ)` in dimension `n`.
pub fn m_general<T: Real>(beta: T, delta: T, n: usize) -> T {
    (T::lit(2.0) * delta + T::lit(2.0) * beta + T::one() - T::lit(n as f64)).min(delta)
}

/// `m_P(β̃, δ) = δ + min(0, P(2δ(1-β̃))/λ_max)`, exactly `δ` whenever the
/// argument of `P` does not exceed `δ`.
pub fn m_pressure(beta_tilde: f64, delta: f64, pressure: &PressureCurve, lambda_max: f64) -> Result<f64> {
    if !(lambda_max > 0.0) {
        return Err(Error::Domain(format!("lambda_max must be positive, got {lambda_max}")));
    }
    let x = 2.0 * delta * (1.0 - beta_tilde);
    if x <= delta {
        return Ok(delta);
    }
    Ok(delta + (pressure.interpolate(x)? / lambda_max).min(0.0))
}

/// `c(β, δ) = β(n-1-2β)/(n-1-δ-2β)` on `0 ≤ δ < (n-1)/2`, `0 < β < (n-1)/2 - δ`.
pub fn c_value<T: Real>(beta: T, delta: T, n: usize) -> Result<T> {
    let half = T::lit(0.5 * (n as f64 - 1.0));
    if !(delta >= T::zero() && delta < half) {
        return Err(Error::Domain(format!("c(beta, delta) needs 0 <= delta < {half}, got {delta}")));
    }
    if !(beta > T::zero() && beta < half - delta) {
        return Err(Error::Domain(format!("c(beta, delta) needs 0 < beta < {}, got {beta}", half - delta)));
    }
    let two = T::lit(2.0);
    let nm1 = T::lit(n as f64 - 1.0);
    Ok(beta * (nm1 - two * beta) / (nm1 - delta - two * beta))
}

/// One row of the exponent table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentRow {
    pub beta_tilde: f64,
    pub beta: f64,
    pub m_fit_n: Option<f64>,
    pub m_mean_n: Option<f64>,
    pub m_theory: f64,
    pub m_p_theory: Option<f64>,
}

/// Theoretical curves on a `β̃` grid. `m_P` is filled in when a pressure curve
/// and `λ_max` are supplied.
pub fn exponent_bounds(
    beta_tildes: &[f64],
    delta: f64,
    pressure: Option<(&PressureCurve, f64)>,
    n: usize,
) -> Result<Vec<ExponentRow>> {
    if !(delta > 0.0 && delta < n as f64 - 1.0) {
        return Err(Error::Domain(format!("delta must lie in (0, {}), got {delta}", n - 1)));
    }
    beta_tildes
        .iter()
        .map(|&bt| {
            let beta = beta_from_tilde(bt, delta, n);
            Ok(ExponentRow {
                beta_tilde: bt,
                beta,
                m_fit_n: None,
                m_mean_n: None,
                m_theory: if n == 2 { m_fractal_weyl(bt, delta) } else { m_general(beta, delta, n) },
                m_p_theory: pressure.map(|(p, lmax)| m_pressure(bt, delta, p, lmax)).transpose()?,
            })
        })
        .collect()
}

/// `c(β, δ)` on a `β` grid.
pub fn c_curve(betas: &[f64], delta: f64, n: usize) -> Result<Vec<(f64, f64)>> {
    betas.iter().map(|&b| c_value(b, delta, n).map(|c| (b, c))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn linear_pressure(delta: f64, slope: f64) -> PressureCurve {
        let xs: Vec<f64> = (0..=40).map(|i| i as f64 * 0.05).collect();
        let values = xs.iter().map(|x| slope * (x - delta)).collect();
        PressureCurve { xs, values, order: 0, delta: Some(delta) }
    }

    #[test]
    fn examples() {
        assert!((m_fractal_weyl(0.25, 0.4) - 0.2f64).abs() < 1e-15);
        let p = linear_pressure(0.4, -2.0);
        for d in [0.1, 0.4, 0.7] {
            let p = linear_pressure(d, -2.0);
            assert_eq!(m_fractal_weyl(0.7, d), d);
            assert_eq!(m_pressure(0.7, d, &p, 3.0).unwrap(), d);
        }
        assert_eq!(c_value(0.3, 0.0, 2).unwrap(), 0.3);
        assert!(c_value(0.3, 0.3, 2).is_err());
        assert!(matches!(m_pressure(-2.0, 0.4, &p, 3.0), Err(Error::InterpolationRange { .. })));
    }

    #[test]
    fn pressure_bound_is_sharp_for_linear_pressure() {
        // P(x) = -λ (x - δ) makes m_P coincide with m below β̃ = 1/2
        let (delta, lmax) = (0.3, 2.5);
        let p = linear_pressure(delta, -lmax);
        for k in 1..10 {
            let bt = 0.05 * k as f64;
            let mp = m_pressure(bt, delta, &p, lmax).unwrap();
            assert!((mp - m_fractal_weyl(bt, delta)).abs() < 1e-12);
        }
    }

    #[test]
    fn table() {
        let p = linear_pressure(0.4, -2.0);
        let rows = exponent_bounds(&[0.1, 0.5, 0.9], 0.4, Some((&p, 3.0)), 2).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.m_theory <= r.m_p_theory.unwrap() + 1e-9));
        assert!(exponent_bounds(&[0.1], 0.0, None, 2).is_err());
        assert!(c_curve(&[0.05, 0.1], 0.2, 2).unwrap().iter().all(|&(b, c)| c >= b && c < 2.0 * b));
    }

    proptest! {
        #[test]
        fn formulas_agree_in_dimension_two(bt in -0.5f64..1.5, d in 0.01f64..0.99) {
            let beta = beta_from_tilde(bt, d, 2);
            prop_assert!((m_general(beta, d, 2) - m_fractal_weyl(bt, d)).abs() < 1e-12);
        }

        #[test]
        fn c_lies_between_beta_and_twice_beta(d in 0.0f64..0.49, t in 0.01f64..0.99) {
            let beta = t * (0.5 - d);
            let c = c_value(beta, d, 2).unwrap();
            prop_assert!(c >= beta && c < 2.0 * beta);
        }

        #[test]
        fn m_below_m_pressure(bt in 0.0f64..1.0, d in 0.05f64..0.6, extra in 0.0f64..3.0) {
            // any pressure with P(δ) = 0 and slope ≥ -λ_max
            let lmax = 2.0;
            let xs: Vec<f64> = (0..=60).map(|i| i as f64 * 0.05).collect();
            let values = xs.iter().map(|x| -lmax * (x - d) + extra * (x - d).max(0.0).powi(2)).collect();
            let p = PressureCurve { xs, values, order: 0, delta: Some(d) };
            prop_assert!(p.slopes().iter().all(|&s| s >= -lmax - 1e-12));
            prop_assert!(m_fractal_weyl(bt, d) <= m_pressure(bt, d, &p, lmax).unwrap() + 1e-9);
        }
    }
}
