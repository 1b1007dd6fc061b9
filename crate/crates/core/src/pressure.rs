//! Topological pressure of the Bowen–Series map and the Hausdorff dimension
//! of the limit set.
//!
//! For real `x` the determinant `d_x(z) = Σ b_k(x) z^k` of `z·L_x` vanishes
//! first at `z* = e^{-P(x)}`, so `P(x) = -log z*`. `δ` is the zero of `P`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::symbolic::WordTable;
use crate::zeta::{real_coefficients, ZetaSeries};

const Z_START: f64 = 1e-8;
const Z_CAP: f64 = 1e8;
const SCAN_FACTOR: f64 = 1.005;
/// A local minimum of `d` this close to zero (relative to `Σ|b_k| z^k`) is a
/// double root, as for the cylinder where both orientations coincide.
const TOUCH_TOL: f64 = 1e-9;

fn poly(b: &[f64], z: f64) -> (f64, f64, f64) {
    let mut v = 0.0;
    let mut dv = 0.0;
    let mut scale = 0.0;
    for &bk in b.iter().rev() {
        dv = dv * z + v;
        v = v * z + bk;
        scale = scale * z + bk.abs();
    }
    (v, dv, scale)
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Smallest positive root of `Σ b_k z^k` with `b_0 = 1`.
pub fn smallest_positive_root(b: &[f64]) -> Result<f64> {
    let mut z = Z_START;
    let (mut v, mut dv, _) = poly(b, z);
    while z < Z_CAP {
        let zn = z * SCAN_FACTOR;
        let (vn, dvn, _) = poly(b, zn);
        if vn == 0.0 {
            return Ok(zn);
        }
        if (vn > 0.0) != (v > 0.0) {
            return Ok(bisect(z, zn, |t| poly(b, t).0));
        }
        if v > 0.0 && dv < 0.0 && dvn >= 0.0 {
            let zm = bisect(z, zn, |t| poly(b, t).1);
            let (vm, _, scale) = poly(b, zm);
            if vm.abs() <= TOUCH_TOL * scale {
                return Ok(zm);
            }
        }
        z = zn;
        v = vn;
        dv = dvn;
    }
    Err(Error::NoPressureRoot { z_cap: Z_CAP })
}

/// `P(x)` from a precomputed series.
pub fn pressure_at(series: &ZetaSeries, x: f64) -> Result<f64> {
    let b = real_coefficients(&series.real_traces(x));
    smallest_positive_root(&b).map(|z| -z.ln())
}

/// `P(x)` using word lengths `1..=n` of the table.
pub fn pressure(table: &WordTable, x: f64, n: usize) -> Result<f64> {
    pressure_at(&ZetaSeries::with_order(table, n)?, x)
}

/// Zero of the pressure on `[0, 1]` by bisection.
///
/// Returns `0` when `|P(0)| ≤ tol` (elementary groups, whose limit set is two
/// points).
pub fn hausdorff_delta_series(series: &ZetaSeries, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let p0 = pressure_at(series, 0.0)?;
    if p0.abs() <= tol {
        return Ok(0.0);
    }
    let p1 = pressure_at(series, 1.0)?;
    if p0 < 0.0 || p1 >= 0.0 {
        return Err(Error::Bracket { p0, p1 });
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut mid = 0.5;
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let p = pressure_at(series, mid)?;
        if p > 0.0 {
            lo = mid;
        } else if p < 0.0 {
            hi = mid;
        } else {
            return Ok(mid);
        }
        if hi - lo < tol * 1e-3 && p.abs() < tol {
            break;
        }
    }
    Ok(mid)
}

pub fn hausdorff_delta(table: &WordTable, n: usize, tol: f64) -> Result<f64> {
    hausdorff_delta_series(&ZetaSeries::with_order(table, n)?, tol)
}

/// Sampled pressure function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PressureCurve {
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
    pub order: usize,
    /// Zero of the pressure, if known; `P ≥ 0` to its left.
    pub delta: Option<f64>,
}

impl PressureCurve {
    pub fn sample(series: &ZetaSeries, xs: &[f64]) -> Result<Self> {
        if xs.is_empty() {
            return Err(Error::Domain("pressure grid is empty".into()));
        }
        let values = xs.iter().map(|&x| pressure_at(series, x)).collect::<Result<Vec<_>>>()?;
        Ok(Self { xs: xs.to_vec(), values, order: series.order(), delta: None })
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = Some(delta);
        self
    }

    /// Strictly decreasing up to `slack`.
    pub fn is_decreasing(&self, slack: f64) -> bool {
        self.values.windows(2).all(|w| w[1] < w[0] + slack)
    }

    /// Forward-difference slopes between consecutive samples.
    pub fn slopes(&self) -> Vec<f64> {
        self.xs
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(x, p)| (p[1] - p[0]) / (x[1] - x[0]))
            .collect()
    }

    /// Piecewise-linear interpolation.
    pub fn interpolate(&self, x: f64) -> Result<f64> {
        let (lo, hi) = (self.xs[0], *self.xs.last().expect("nonempty"));
        if !(x >= lo && x <= hi) {
            return Err(Error::InterpolationRange { x, lo, hi });
        }
        if self.xs.len() == 1 {
            return Ok(self.values[0]);
        }
        let k = match self.xs.binary_search_by(|p| p.total_cmp(&x)) {
            Ok(k) => return Ok(self.values[k]),
            Err(k) => k.clamp(1, self.xs.len() - 1),
        };
        let t = (x - self.xs[k - 1]) / (self.xs[k] - self.xs[k - 1]);
        Ok(self.values[k - 1] + t * (self.values[k] - self.values[k - 1]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schottky::{cylinder, three_funnel};
    use crate::symbolic::{cyclic_word_count, enumerate_periodic_words, estimate_lambda_max};

    #[test]
    fn root_of_simple_polynomials() {
        // 1 - 3z
        assert!((smallest_positive_root(&[1.0, -3.0]).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        // (1 - z)^2 touches zero
        assert!((smallest_positive_root(&[1.0, -2.0, 1.0]).unwrap() - 1.0).abs() < 1e-6);
        // (1 - z/2)(1 - z/5)
        let r = smallest_positive_root(&[1.0, -0.7, 0.1]).unwrap();
        assert!((r - 2.0).abs() < 1e-14);
        assert!(matches!(smallest_positive_root(&[1.0, 1.0]), Err(Error::NoPressureRoot { .. })));
    }

    #[test]
    fn entropy_of_rank_two() {
        // growth rate of cyclic word counts: (1/n) log #words -> log 3
        let n = 30;
        let brute = (cyclic_word_count(2, n) as f64).ln() / n as f64;
        assert!((brute - 3f64.ln()).abs() < 1e-6 * 3.0);
        let g = three_funnel(7.0f64, 7.0, 7.0).unwrap();
        let t = enumerate_periodic_words(&g, 10).unwrap();
        let p0 = pressure(&t, 0.0, 10).unwrap();
        assert!((p0 - 3f64.ln()).abs() < 1e-6, "{p0}");
    }

    #[test]
    fn cylinder_pressure_is_linear() {
        let g = cylinder(2.0f64).unwrap();
        let t = enumerate_periodic_words(&g, 16).unwrap();
        for x in [0.0, 0.25, 0.5, 1.0] {
            let p = pressure(&t, x, 16).unwrap();
            assert!((p + 2.0 * x).abs() < 1e-6, "x={x}: {p}");
        }
        assert_eq!(hausdorff_delta(&t, 16, 1e-8).unwrap(), 0.0);
    }

    #[test]
    fn x777_dimension() {
        let g = three_funnel(7.0f64, 7.0, 7.0).unwrap();
        let t = enumerate_periodic_words(&g, 10).unwrap();
        let delta = hausdorff_delta(&t, 10, 1e-12).unwrap();
        assert!(delta > 0.0 && delta < 0.5, "{delta}");
        assert!(pressure(&t, delta, 10).unwrap().abs() < 1e-10);
        let series = ZetaSeries::new(&t);
        let xs: Vec<f64> = (0..=20).map(|i| i as f64 * 0.05).collect();
        let curve = PressureCurve::sample(&series, &xs).unwrap();
        assert!(curve.is_decreasing(1e-9));
        let lmax = estimate_lambda_max(&t, &g);
        assert!(curve.slopes().iter().all(|&s| s >= -lmax - 1e-4));
    }

    #[test]
    fn interpolation() {
        let c = PressureCurve { xs: vec![0.0, 1.0, 2.0], values: vec![1.0, 0.0, -2.0], order: 1, delta: None };
        assert_eq!(c.interpolate(0.5).unwrap(), 0.5);
        assert_eq!(c.interpolate(1.5).unwrap(), -1.0);
        assert_eq!(c.interpolate(2.0).unwrap(), -2.0);
        assert!(matches!(c.interpolate(2.5), Err(Error::InterpolationRange { .. })));
    }
}
