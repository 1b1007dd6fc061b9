//! Spectral-parameter conventions and strip geometry.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    LambdaToS,
    SToLambda,
}

/// `s = (n-1)/2 - iλ` and its inverse `λ = i(s - (n-1)/2)`.
pub fn strip_convert(z: Complex64, n: usize, direction: Direction) -> Complex64 {
    let shift = 0.5 * (n as f64 - 1.0);
    match direction {
        Direction::LambdaToS => Complex64::new(shift + z.im, -z.re),
        Direction::SToLambda => Complex64::new(-z.im, z.re - shift),
    }
}

pub fn lambda_to_s(lambda: Complex64) -> Complex64 {
    strip_convert(lambda, 2, Direction::LambdaToS)
}

pub fn s_to_lambda(s: Complex64) -> Complex64 {
    strip_convert(s, 2, Direction::SToLambda)
}

/// Resonance strip `Im λ ≥ -β` for a surface.
///
/// Usually given through `β̃` relative to `δ`, with `β = 1/2 + (β̃ - 1)δ`.
/// [`StripSpec::with_beta`] fixes `β` directly, which is needed when `δ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripSpec {
    beta: f64,
    beta_tilde: Option<f64>,
    delta: Option<f64>,
}

impl StripSpec {
    pub fn new(beta_tilde: f64, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::Domain(format!("delta must lie in (0, 1), got {delta}")));
        }
        if !beta_tilde.is_finite() {
            return Err(Error::Domain(format!("beta_tilde must be finite, got {beta_tilde}")));
        }
        Ok(Self { beta: beta_from_tilde(beta_tilde, delta, 2), beta_tilde: Some(beta_tilde), delta: Some(delta) })
    }

    pub fn with_beta(beta: f64) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::Domain(format!("beta must be finite, got {beta}")));
        }
        Ok(Self { beta, beta_tilde: None, delta: None })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn beta_tilde(&self) -> Option<f64> {
        self.beta_tilde
    }

    pub fn delta(&self) -> Option<f64> {
        self.delta
    }
}

/// `β = (n-1)/2 + (β̃ - 1)δ`.
pub fn beta_from_tilde(beta_tilde: f64, delta: f64, n: usize) -> f64 {
    0.5 * (n as f64 - 1.0) + (beta_tilde - 1.0) * delta
}

/// `β̃ = (β - (n-1)/2)/δ + 1`.
pub fn tilde_from_beta(beta: f64, delta: f64, n: usize) -> f64 {
    (beta - 0.5 * (n as f64 - 1.0)) / delta + 1.0
}
