//! Growth exponents of counting functions: log-log regression, concave
//! envelopes and the mollified local count.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Half-width in `log10 R` of the mollifier window.
pub const MOLLIFIER_WINDOW: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit<T> {
    /// Slope of `log N` against `log R`, minus one.
    pub m_fit: T,
    pub slope: T,
    pub intercept: T,
    /// Root-mean-square residual of the regression.
    pub rms: T,
    pub points: usize,
}

/// Least-squares fit of `log N = (1 + m) log R + C` over `R ∈ [r_min, r_max]`,
/// skipping points with `N ≤ 0`.
pub fn fit_exponent_linear<T: Real>(rs: &[T], ns: &[T], r_min: T, r_max: T) -> Result<LinearFit<T>> {
    if rs.len() != ns.len() {
        return Err(Error::Domain("R and N columns differ in length".into()));
    }
    let pts: Vec<(T, T)> = rs
        .iter()
        .zip(ns)
        .filter(|(&r, &n)| r >= r_min && r <= r_max && r > T::zero() && n > T::zero())
        .map(|(&r, &n)| (r.ln(), n.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientData(format!("{} usable points, need 3", pts.len())));
    }
    let k = T::lit(pts.len() as f64);
    let mx = pts.iter().fold(T::zero(), |a, p| a + p.0) / k;
    let my = pts.iter().fold(T::zero(), |a, p| a + p.1) / k;
    let sxx = pts.iter().fold(T::zero(), |a, p| a + (p.0 - mx) * (p.0 - mx));
    let sxy = pts.iter().fold(T::zero(), |a, p| a + (p.0 - mx) * (p.1 - my));
    if !(sxx > T::zero()) {
        return Err(Error::InsufficientData("all R values coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss = pts.iter().fold(T::zero(), |a, p| {
        let e = p.1 - (intercept + slope * p.0);
        a + e * e
    });
    Ok(LinearFit { m_fit: slope - T::one(), slope, intercept, rms: (ss / k).sqrt(), points: pts.len() })
}

/// Upper concave envelope (upper convex hull) of points sorted by `x`.
pub fn upper_envelope<T: Real>(points: &[(T, T)]) -> Vec<(T, T)> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite abscissae"));
    let mut hull: Vec<(T, T)> = Vec::with_capacity(pts.len());
    for p in pts {
        if let Some(last) = hull.last_mut() {
            if last.0 == p.0 {
                if p.1 > last.1 {
                    *last = p;
                    while hull.len() >= 3 && !turns_right(hull[hull.len() - 3], hull[hull.len() - 2], p) {
                        hull.remove(hull.len() - 2);
                    }
                }
                continue;
            }
        }
        while hull.len() >= 2 && !turns_right(hull[hull.len() - 2], hull[hull.len() - 1], p) {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

fn turns_right<T: Real>(a: (T, T), b: (T, T), c: (T, T)) -> bool {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0) < T::zero()
}

fn envelope_at<T: Real>(hull: &[(T, T)], x: T) -> Result<T> {
    let (lo, hi) = (hull[0].0, hull[hull.len() - 1].0);
    if !(x >= lo && x <= hi) {
        return Err(Error::InterpolationRange { x: x.to_f64_lossy(), lo: lo.to_f64_lossy(), hi: hi.to_f64_lossy() });
    }
    for w in hull.windows(2) {
        if x <= w[1].0 {
            let t = (x - w[0].0) / (w[1].0 - w[0].0);
            return Ok(w[0].1 + t * (w[1].1 - w[0].1));
        }
    }
    Ok(hull[hull.len() - 1].1)
}

/// Secant slope of the upper concave envelope of `(log10 R, max(0, log10 n))`
/// between the points at fractions `x1_frac` and `x2_frac` of `interval`
/// (given in `log10 R`).
pub fn concave_envelope_slope<T: Real>(
    rs: &[T],
    ns: &[T],
    interval: (T, T),
    x1_frac: T,
    x2_frac: T,
) -> Result<T> {
    if rs.len() != ns.len() {
        return Err(Error::Domain("R and n columns differ in length".into()));
    }
    let pts: Vec<(T, T)> = rs
        .iter()
        .zip(ns)
        .filter(|(&r, _)| r > T::zero())
        .map(|(&r, &n)| (r.log10(), if n > T::zero() { n.log10().max(T::zero()) } else { T::zero() }))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientData(format!("{} usable points, need 3", pts.len())));
    }
    let (a, b) = interval;
    let x1 = a + x1_frac * (b - a);
    let x2 = a + x2_frac * (b - a);
    if !(x1 != x2) {
        return Err(Error::DegenerateInterval(format!("secant abscissae coincide at {x1}")));
    }
    let hull = upper_envelope(&pts);
    Ok((envelope_at(&hull, x2)? - envelope_at(&hull, x1)?) / (x2 - x1))
}

/// `max log10 n(R')` over grid points with `|log10(R/R')| ≤ window`.
pub fn mollified_local(rs: &[f64], ns: &[f64], r: f64, window: f64) -> Result<f64> {
    let slack = 1e-12;
    let best = rs
        .iter()
        .zip(ns)
        .filter(|(&rp, _)| rp > 0.0 && (r / rp).log10().abs() <= window + slack)
        .map(|(_, &n)| n.log10())
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))));
    best.ok_or(Error::EmptyWindow(r))
}

/// Deterministic synthetic counts `N(R) = round(c R^{1+m} (1 + a sin(ω log R)))`
/// and `n(R, L) = N(R + L) - N(R)`, whose density grows like `R^m` with a
/// log-periodic oscillation.
pub fn synthetic_counts(rs: &[f64], exponent: f64, amplitude: f64, omega: f64, scale: f64, window: f64) -> (Vec<f64>, Vec<f64>) {
    let big = |r: f64| scale * r.powf(1.0 + exponent) * (1.0 + amplitude * (omega * r.ln()).sin());
    let total: Vec<f64> = rs.iter().map(|&r| big(r).round()).collect();
    let local: Vec<f64> = rs.iter().map(|&r| (big(r + window) - big(r)).round()).collect();
    (total, local)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid(lo: f64, hi: f64, k: usize) -> Vec<f64> {
        (0..k).map(|i| lo * (hi / lo).powf(i as f64 / (k - 1) as f64)).collect()
    }

    #[test]
    fn linear_fit_examples() {
        let rs = grid(10.0, 1e4, 30);
        let ns: Vec<f64> = rs.iter().map(|r| r.powf(1.5)).collect();
        assert!((fit_exponent_linear(&rs, &ns, 0.0, 1e9).unwrap().m_fit - 0.5).abs() < 1e-12);
        let flat = vec![7.0; rs.len()];
        assert!((fit_exponent_linear(&rs, &flat, 0.0, 1e9).unwrap().m_fit + 1.0).abs() < 1e-12);
        assert!(matches!(fit_exponent_linear(&rs[..2], &ns[..2], 0.0, 1e9), Err(Error::InsufficientData(_))));
        let noisy: Vec<f64> = rs.iter().map(|r| r.powf(1.3) * (1.0 + 0.1 * r.ln().sin())).collect();
        assert!((fit_exponent_linear(&rs, &noisy, 0.0, 1e9).unwrap().m_fit - 0.3).abs() < 0.05);
    }

    #[test]
    fn linear_fit_in_f32() {
        let rs: Vec<f32> = (1..20).map(|k| 10.0 * k as f32).collect();
        let ns: Vec<f32> = rs.iter().map(|r| r.powf(1.25)).collect();
        let fit = fit_exponent_linear(&rs, &ns, 0.0, 1e9).unwrap();
        assert!((fit.m_fit - 0.25).abs() < 1e-4);
    }

    #[test]
    fn envelope_examples() {
        let rs = grid(500.0, 3e5, 40);
        let iv = (500f64.log10(), 3e5f64.log10());
        let affine: Vec<f64> = rs.iter().map(|r| 3.0 * r.powf(0.4)).collect();
        let m = concave_envelope_slope(&rs, &affine, iv, 0.25, 0.75).unwrap();
        assert!((m - 0.4).abs() < 1e-9);
        let dipped: Vec<f64> =
            affine.iter().enumerate().map(|(i, &n)| if i % 3 == 1 { n * 0.2 } else { n }).collect();
        let md = concave_envelope_slope(&rs, &dipped, iv, 0.25, 0.75).unwrap();
        assert!((md - 0.4).abs() < 1e-9);
        assert!(matches!(
            concave_envelope_slope(&rs, &affine, iv, 0.5, 0.5),
            Err(Error::DegenerateInterval(_))
        ));
    }

    #[test]
    fn hull_is_concave_and_dominates() {
        let pts = [(0.0, 0.0), (1.0, 2.0), (2.0, 1.0), (2.0, 2.5), (3.0, 2.6), (4.0, 0.0)];
        let hull = upper_envelope(&pts);
        assert_eq!(hull, vec![(0.0, 0.0), (1.0, 2.0), (2.0, 2.5), (3.0, 2.6), (4.0, 0.0)]);
        for p in pts {
            assert!(envelope_at(&hull, p.0).unwrap() >= p.1);
        }
    }

    #[test]
    fn mollifier_examples() {
        let rs = grid(100.0, 1000.0, 41);
        let tens = vec![10.0; rs.len()];
        for &r in &rs {
            assert_eq!(mollified_local(&rs, &tens, r, MOLLIFIER_WINDOW).unwrap(), 1.0);
        }
        let r = rs[20];
        let mut spike = tens.clone();
        spike[20] = 100.0;
        assert_eq!(mollified_local(&rs, &spike, r, MOLLIFIER_WINDOW).unwrap(), 2.0);
        let outside = [r * 10f64.powf(0.06), r];
        assert_eq!(mollified_local(&outside, &[100.0, 10.0], r, MOLLIFIER_WINDOW).unwrap(), 1.0);
        assert!(matches!(mollified_local(&outside, &[1.0, 1.0], 1.0, MOLLIFIER_WINDOW), Err(Error::EmptyWindow(_))));
    }

    #[test]
    fn synthetic_recovery() {
        let rs: Vec<f64> = (5..=3000).map(|k| 100.0 * k as f64).collect();
        let (total, local) = synthetic_counts(&rs, 0.3, 0.1, 1.0, 1.0, 100.0);
        let fit = fit_exponent_linear(&rs, &total, 500.0, 3e5).unwrap();
        assert!((fit.m_fit - 0.3).abs() < 0.05, "{}", fit.m_fit);
        let iv = (500f64.log10(), 3e5f64.log10());
        let m = concave_envelope_slope(&rs, &local, iv, 0.25, 0.75).unwrap();
        assert!((m - 0.3).abs() < 0.05, "{m}");
    }

    proptest! {
        #[test]
        fn exact_power_laws(m in -0.5f64..1.5, c in 0.1f64..100.0) {
            let rs = grid(500.0, 3e5, 25);
            let ns: Vec<f64> = rs.iter().map(|r| c * r.powf(1.0 + m)).collect();
            prop_assert!((fit_exponent_linear(&rs, &ns, 0.0, 1e9).unwrap().m_fit - m).abs() < 1e-9);
            let iv = (500f64.log10(), 3e5f64.log10());
            let local: Vec<f64> = rs.iter().map(|r| c * 10.0 * r.powf(m.abs())).collect();
            let e = concave_envelope_slope(&rs, &local, iv, 0.25, 0.75).unwrap();
            prop_assert!((e - m.abs()).abs() < 1e-9);
        }
    }
}
