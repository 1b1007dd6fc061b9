//! Resonance counting in strips by the argument principle.
//!
//! A λ-window `Re λ ∈ [R_lo, R_hi]`, `Im λ ∈ [-β, im_top]` is mapped to the
//! conjugate s-box `Re s ∈ [1/2 - β, 1/2 + im_top]`, `Im s ∈ [R_lo, R_hi]`.
//! Long windows are cut into panels whose horizontal edges are shared, so
//! panel counts add up exactly to the count of their union.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::strip::StripSpec;
use crate::error::{Error, Result};
use crate::rootfind::{count_from_integral, edge_integral, EdgeIntegral, QuadSettings, JITTER_SCHEDULE};
use crate::zeta::ZetaSeries;

/// Upper edge of the counting box above the real λ axis.
pub const DEFAULT_IM_TOP: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountSettings {
    pub im_top: f64,
    pub quad: QuadSettings,
}

impl CountSettings {
    /// Segment length tied to the fastest oscillation `e^{-i ℓ Im s}` of the series.
    pub fn for_series(series: &ZetaSeries) -> Self {
        let lmax = series.max_length().max(1.0);
        Self {
            im_top: DEFAULT_IM_TOP,
            quad: QuadSettings { max_segment: (40.0 / lmax).min(1.0), ..QuadSettings::default() },
        }
    }
}

/// Counts on consecutive panels `[breaks[k], breaks[k+1]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelCounts {
    /// Panel boundaries actually used (after jitter).
    pub breaks: Vec<f64>,
    pub re_lo: f64,
    pub re_hi: f64,
    pub counts: Vec<i64>,
    /// Human-readable record of every boundary shift.
    pub jitters: Vec<String>,
}

impl PanelCounts {
    pub fn total(&self) -> i64 {
        self.counts.iter().sum()
    }
}

fn suspicious(e: &EdgeIntegral) -> bool {
    e.unresolved || e.touches_zero(e.max_abs)
}

/// Zero counts of `f` on the panels `[re_lo, re_hi] × [breaks[k], breaks[k+1]]`.
///
/// Horizontal lines that pass through a zero are moved up, and the vertical
/// lines are moved outward, along the jitter schedule.
pub fn panel_counts<F>(f: &F, re_lo: f64, re_hi: f64, breaks: &[f64], q: &QuadSettings) -> Result<PanelCounts>
where
    F: Fn(Complex64) -> (Complex64, Complex64) + Sync,
{
    if breaks.len() < 2 || breaks.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Domain("panel breaks must be strictly increasing".into()));
    }
    if !(re_lo < re_hi) {
        return Err(Error::Domain(format!("empty strip [{re_lo}, {re_hi}]")));
    }
    let width = re_hi - re_lo;
    let gaps: Vec<f64> = (0..breaks.len())
        .map(|k| if k + 1 < breaks.len() { breaks[k + 1] - breaks[k] } else { breaks[k] - breaks[k - 1] })
        .collect();

    for vfrac in std::iter::once(0.0).chain(JITTER_SCHEDULE) {
        let (lo, hi) = (re_lo - vfrac * width, re_hi + vfrac * width);
        let horizontal: Vec<Result<(f64, EdgeIntegral, f64)>> = breaks
            .par_iter()
            .zip(gaps.par_iter())
            .map(|(&y0, &gap)| {
                for hfrac in std::iter::once(0.0).chain(JITTER_SCHEDULE) {
                    let y = y0 + hfrac * gap;
                    let e = edge_integral(f, Complex64::new(lo, y), Complex64::new(hi, y), q);
                    if !suspicious(&e) {
                        return Ok((y, e, hfrac));
                    }
                }
                Err(Error::JitterExhausted)
            })
            .collect();
        let horizontal: Vec<(f64, EdgeIntegral, f64)> = horizontal.into_iter().collect::<Result<_>>()?;
        let ys: Vec<f64> = horizontal.iter().map(|h| h.0).collect();

        let verticals: Vec<(EdgeIntegral, EdgeIntegral)> = (0..ys.len() - 1)
            .into_par_iter()
            .map(|k| {
                let left = edge_integral(f, Complex64::new(lo, ys[k]), Complex64::new(lo, ys[k + 1]), q);
                let right = edge_integral(f, Complex64::new(hi, ys[k]), Complex64::new(hi, ys[k + 1]), q);
                (left, right)
            })
            .collect();
        if verticals.iter().any(|(l, r)| suspicious(l) || suspicious(r)) {
            continue;
        }

        let counts = (0..verticals.len())
            .map(|k| {
                let (left, right) = &verticals[k];
                let (bottom, top) = (&horizontal[k].1, &horizontal[k + 1].1);
                count_from_integral(EdgeIntegral {
                    value: bottom.value + right.value - top.value - left.value,
                    min_abs: bottom.min_abs.min(top.min_abs).min(left.min_abs).min(right.min_abs),
                    max_abs: bottom.max_abs.max(top.max_abs).max(left.max_abs).max(right.max_abs),
                    unresolved: false,
                })
            })
            .collect::<Result<Vec<i64>>>()?;

        let mut jitters: Vec<String> = horizontal
            .iter()
            .zip(breaks)
            .filter(|(h, _)| h.2 > 0.0)
            .map(|(h, y0)| format!("panel line Im s = {y0} moved to {}", h.0))
            .collect();
        if vfrac > 0.0 {
            jitters.push(format!("strip edges Re s = {re_lo}, {re_hi} moved to {lo}, {hi}"));
        }
        return Ok(PanelCounts { breaks: ys, re_lo: lo, re_hi: hi, counts, jitters });
    }
    Err(Error::JitterExhausted)
}

fn zeta_fn(series: &ZetaSeries) -> impl Fn(Complex64) -> (Complex64, Complex64) + Sync + '_ {
    move |s| {
        let v = series.evaluate(s);
        (v.value, v.derivative)
    }
}

/// Real part range of the s-box for a strip.
pub fn strip_re_range(strip: &StripSpec, im_top: f64) -> (f64, f64) {
    (0.5 - strip.beta(), 0.5 + im_top)
}

/// Panel counts of the truncated zeta over the λ-window breaks for a strip.
pub fn count_panels(series: &ZetaSeries, breaks: &[f64], strip: &StripSpec, settings: &CountSettings) -> Result<PanelCounts> {
    let (lo, hi) = strip_re_range(strip, settings.im_top);
    if !(lo < hi) {
        return Err(Error::Domain(format!("strip with beta = {} is empty", strip.beta())));
    }
    panel_counts(&zeta_fn(series), lo, hi, breaks, &settings.quad)
}

/// Number of resonances with `Re λ ∈ [r_lo, r_hi]` and `-β ≤ Im λ ≤ im_top`.
pub fn count_resonances(series: &ZetaSeries, r_lo: f64, r_hi: f64, strip: &StripSpec, im_top: f64) -> Result<i64> {
    if !(r_lo < r_hi) {
        return Err(Error::Domain(format!("empty window [{r_lo}, {r_hi}]")));
    }
    let settings = CountSettings { im_top, ..CountSettings::for_series(series) };
    Ok(count_panels(series, &[r_lo, r_hi], strip, &settings)?.total())
}

/// Counts for one strip on the grid of a [`CountingSeries`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StripCounts {
    pub beta: f64,
    pub beta_tilde: Option<f64>,
    /// `N(R)` for each grid value.
    pub total: Vec<i64>,
    /// `n(R, L)` for each grid value, when a window is configured.
    pub local: Option<Vec<i64>>,
}

/// Total and local counting functions on a grid of `R` values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountingSeries {
    pub surface_id: String,
    pub order: usize,
    pub r_start: f64,
    pub r_grid: Vec<f64>,
    pub window: Option<f64>,
    pub im_top: f64,
    pub seg_tol: f64,
    pub strips: Vec<StripCounts>,
    pub jitters: Vec<String>,
}

impl CountingSeries {
    /// Counts `N(R) = #[r_start, R]` and `n(R, L) = #[R, R + L]` for each strip.
    pub fn compute(
        series: &ZetaSeries,
        surface_id: &str,
        r_start: f64,
        r_grid: &[f64],
        strips: &[StripSpec],
        window: Option<f64>,
        settings: &CountSettings,
    ) -> Result<Self> {
        if r_grid.is_empty() || strips.is_empty() {
            return Err(Error::Domain("counting grid and strip list must be nonempty".into()));
        }
        if r_grid.windows(2).any(|w| !(w[0] < w[1])) || !(r_grid[0] > r_start) {
            return Err(Error::Domain("R grid must be increasing and above the start".into()));
        }
        if window.is_some_and(|l| !(l > 0.0)) {
            return Err(Error::Domain("local window must be positive".into()));
        }
        let mut breaks: Vec<f64> = std::iter::once(r_start)
            .chain(r_grid.iter().copied())
            .chain(window.into_iter().flat_map(|l| r_grid.iter().map(move |r| r + l)))
            .collect();
        breaks.sort_by(f64::total_cmp);
        breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * b.abs().max(1.0));
        let index = |r: f64| {
            breaks
                .iter()
                .position(|&b| (b - r).abs() <= 1e-9 * r.abs().max(1.0))
                .expect("grid value is a break")
        };

        let mut out = Vec::with_capacity(strips.len());
        let mut jitters = Vec::new();
        for strip in strips {
            let panels = count_panels(series, &breaks, strip, settings)?;
            let mut cum = vec![0i64; breaks.len()];
            for (k, c) in panels.counts.iter().enumerate() {
                cum[k + 1] = cum[k] + c;
            }
            let total = r_grid.iter().map(|&r| cum[index(r)]).collect();
            let local = window.map(|l| r_grid.iter().map(|&r| cum[index(r + l)] - cum[index(r)]).collect());
            jitters.extend(panels.jitters.into_iter().map(|j| format!("beta {}: {j}", strip.beta())));
            out.push(StripCounts { beta: strip.beta(), beta_tilde: strip.beta_tilde(), total, local });
        }
        Ok(Self {
            surface_id: surface_id.to_string(),
            order: series.order(),
            r_start,
            r_grid: r_grid.to_vec(),
            window,
            im_top: settings.im_top,
            seg_tol: settings.quad.seg_tol,
            strips: out,
            jitters,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schottky::cylinder;
    use crate::symbolic::enumerate_periodic_words;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn panels_add_up() {
        let roots = [c(0.1, 0.5), c(0.3, 1.5), c(0.3, 1.5), c(0.9, 2.2), c(0.2, 3.7)];
        let f = |z: Complex64| {
            let mut v = c(1.0, 0.0);
            let mut dv = c(0.0, 0.0);
            for r in roots {
                dv = dv * (z - r) + v;
                v *= z - r;
            }
            (v, dv)
        };
        let q = QuadSettings::default();
        let p = panel_counts(&f, 0.0, 0.5, &[0.0, 1.0, 1.5, 3.0, 4.0], &q).unwrap();
        assert_eq!(p.counts, vec![1, 2, 0, 1]);
        assert!(p.jitters.iter().any(|j| j.contains("1.5")));
        let whole = panel_counts(&f, 0.0, 0.5, &[0.0, 4.0], &q).unwrap();
        assert_eq!(whole.total(), p.total());
    }

    #[test]
    fn cylinder_window() {
        let g = cylinder(2.0f64).unwrap();
        let t = enumerate_periodic_words(&g, 8).unwrap();
        let series = ZetaSeries::new(&t);
        let strip = StripSpec::with_beta(0.5).unwrap();
        // s = iπ sits on the left edge Re s = 0; jitter pulls it in as a double zero
        assert_eq!(count_resonances(&series, 1.0, 4.0, &strip, DEFAULT_IM_TOP).unwrap(), 2);
        let narrow = StripSpec::with_beta(0.3).unwrap();
        assert_eq!(count_resonances(&series, 1.0, 20.0, &narrow, DEFAULT_IM_TOP).unwrap(), 0);
        let wide = StripSpec::with_beta(0.7).unwrap();
        assert_eq!(count_resonances(&series, 1.0, 20.0, &wide, DEFAULT_IM_TOP).unwrap(), 12);
    }

    #[test]
    fn series_is_consistent() {
        let g = cylinder(2.0f64).unwrap();
        let t = enumerate_periodic_words(&g, 8).unwrap();
        let series = ZetaSeries::new(&t);
        let strips = [StripSpec::with_beta(0.7).unwrap(), StripSpec::with_beta(1.6).unwrap()];
        let settings = CountSettings::for_series(&series);
        let grid: Vec<f64> = (1..=6).map(|k| 5.0 * k as f64).collect();
        let cs = CountingSeries::compute(&series, "cylinder", 0.0, &grid, &strips, Some(5.0), &settings).unwrap();
        for st in &cs.strips {
            assert!(st.total.windows(2).all(|w| w[0] <= w[1]));
            let local = st.local.as_ref().unwrap();
            for k in 0..grid.len() - 1 {
                assert_eq!(st.total[k + 1] - st.total[k], local[k]);
            }
        }
        // zeros at -k + iπm are double; β = 1.6 reaches the k = 1 row
        assert_eq!(cs.strips[0].total[5], 2 * 9);
        assert_eq!(cs.strips[1].total[5], 4 * 9);
    }
}
