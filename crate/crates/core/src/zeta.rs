//! Truncated Selberg zeta function via the Fredholm-determinant cycle
//! expansion of the Bowen–Series transfer operator.
//!
//! With `c_n(s) = Σ_{|w|=n} e^{-s ℓ_w} / (1 - e^{-ℓ_w})` the determinant
//! `det(1 - z L_s) = exp(-Σ c_n z^n / n) = Σ b_k z^k` and the coefficients obey
//! `b_0 = 1`, `b_k = -(1/k) Σ_{j=1}^{k} c_j b_{k-j}`. Evaluating at `z = 1` and
//! truncating at total word length `N` gives `D_N(s)`, an entire function
//! approximating `Z(s)`.

use num_complex::Complex64;
use crate::error::{Error, Result};
use crate::symbolic::WordTable;

/// Lengths closer than this (relative) are merged into one weighted term.
const MERGE_REL_TOL: f64 = 1e-12;

/// Value of the truncated determinant at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaValue {
    pub value: Complex64,
    pub derivative: Complex64,
    /// `|b_N(s)|`, the last retained coefficient.
    pub tail: f64,
}

/// Per-length trace ingredients of a word table, ready for evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct ZetaSeries {
    order: usize,
    group_hash: u64,
    /// For word length `n = 1..=order`: merged `(ℓ, multiplicity/(1 - e^{-ℓ}))`.
    terms: Vec<Vec<(f64, f64)>>,
}

impl ZetaSeries {
    /// Series of order `N = table.max_length()`.
    pub fn new(table: &WordTable) -> Self {
        Self::with_order(table, table.max_length()).expect("order within table")
    }

    /// Series truncated at total word length `order`.
    pub fn with_order(table: &WordTable, order: usize) -> Result<Self> {
        if order > table.max_length() {
            return Err(Error::Domain(format!(
                "truncation order {order} exceeds table length {}",
                table.max_length()
            )));
        }
        let terms = table.blocks[..order]
            .iter()
            .map(|b| {
                let mut ls = b.lengths.clone();
                ls.sort_by(f64::total_cmp);
                let mut merged: Vec<(f64, f64)> = Vec::new();
                let mut i = 0;
                while i < ls.len() {
                    let head = ls[i];
                    let mut j = i + 1;
                    while j < ls.len() && ls[j] - head <= MERGE_REL_TOL * head {
                        j += 1;
                    }
                    let weight = (j - i) as f64 / -(-head).exp_m1();
                    merged.push((head, weight));
                    i = j;
                }
                merged
            })
            .collect();
        Ok(Self { order, group_hash: table.group_hash, terms })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn group_hash(&self) -> u64 {
        self.group_hash
    }

    /// Longest orbit length in the series.
    pub fn max_length(&self) -> f64 {
        self.terms.iter().flatten().map(|&(l, _)| l).fold(0.0, f64::max)
    }

    /// Number of distinct weighted terms per word length.
    pub fn term_counts(&self) -> Vec<usize> {
        self.terms.iter().map(Vec::len).collect()
    }

    /// `(c_n(s), c_n'(s))` for `n = 1..=N`.
    pub fn traces(&self, s: Complex64) -> (Vec<Complex64>, Vec<Complex64>) {
        let mut c = Vec::with_capacity(self.order);
        let mut dc = Vec::with_capacity(self.order);
        for terms in &self.terms {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut dacc = Complex64::new(0.0, 0.0);
            for &(l, w) in terms {
                let t = exp_neg(s, l) * w;
                acc += t;
                dacc -= t * l;
            }
            c.push(acc);
            dc.push(dacc);
        }
        (c, dc)
    }

    /// Real traces `c_n(x)` for real `x`.
    pub fn real_traces(&self, x: f64) -> Vec<f64> {
        self.terms
            .iter()
            .map(|terms| terms.iter().map(|&(l, w)| w * (-x * l).exp()).sum())
            .collect()
    }

    /// `D_N(s)`, `D_N'(s)` and `|b_N(s)|`.
    pub fn evaluate(&self, s: Complex64) -> ZetaValue {
        let (c, dc) = self.traces(s);
        plemelj_smithies(&c, &dc)
    }

    /// Same as [`evaluate`](Self::evaluate) but truncated at `order ≤ N`.
    pub fn evaluate_order(&self, s: Complex64, order: usize) -> ZetaValue {
        let order = order.min(self.order);
        let (c, dc) = self.traces(s);
        plemelj_smithies(&c[..order], &dc[..order])
    }
}

/// `e^{-s ℓ}` computed from the modulus and phase separately.
#[inline]
fn exp_neg(s: Complex64, l: f64) -> Complex64 {
    let m = (-s.re * l).exp();
    let (sin, cos) = (s.im * l).sin_cos();
    Complex64::new(m * cos, -m * sin)
}

/// Traces computed directly from every stored orbit, without merging.
pub fn transfer_traces(table: &WordTable, s: Complex64) -> (Vec<Complex64>, Vec<Complex64>) {
    table
        .blocks
        .iter()
        .map(|b| {
            b.lengths.iter().fold(
                (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
                |(c, dc), &l| {
                    let t = exp_neg(s, l) / -(-l).exp_m1();
                    (c + t, dc - t * l)
                },
            )
        })
        .unzip()
}

/// Sums the coefficient recursion for traces `c_1..c_N` and their derivatives.
pub fn plemelj_smithies(c: &[Complex64], dc: &[Complex64]) -> ZetaValue {
    let n = c.len();
    let mut b = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut db = vec![Complex64::new(0.0, 0.0); n + 1];
    b[0] = Complex64::new(1.0, 0.0);
    for k in 1..=n {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut dacc = Complex64::new(0.0, 0.0);
        for j in 1..=k {
            acc += c[j - 1] * b[k - j];
            dacc += dc[j - 1] * b[k - j] + c[j - 1] * db[k - j];
        }
        b[k] = -acc / k as f64;
        db[k] = -dacc / k as f64;
    }
    ZetaValue {
        value: b.iter().sum(),
        derivative: db.iter().sum(),
        tail: b[n].norm(),
    }
}

/// Real coefficients `b_0..b_N` for real traces.
pub fn real_coefficients(c: &[f64]) -> Vec<f64> {
    let n = c.len();
    let mut b = vec![0.0; n + 1];
    b[0] = 1.0;
    for k in 1..=n {
        let acc: f64 = (1..=k).map(|j| c[j - 1] * b[k - j]).sum();
        b[k] = -acc / k as f64;
    }
    b
}

/// Evaluates `D_N(s)` for a series.
pub fn zeta_truncated(series: &ZetaSeries, s: Complex64) -> ZetaValue {
    series.evaluate(s)
}

/// Euler product value plus a flag for evaluation outside the half-plane of
/// absolute convergence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValue {
    pub value: Complex64,
    pub below_convergence: bool,
}

/// `Π_γ Π_{k=0}^{k_max} (1 - e^{-(s+k)ℓ_γ})` over the primitive classes of the
/// table. Only meaningful for `Re s > δ`; used to cross-check the expansion.
pub fn euler_product_oracle(table: &WordTable, s: Complex64, k_max: usize, delta: Option<f64>) -> OracleValue {
    let mut value = Complex64::new(1.0, 0.0);
    for (_, l) in table.primitive_classes() {
        for k in 0..=k_max {
            let x = exp_neg(s + k as f64, l);
            if x.norm() < 1e-22 {
                break;
            }
            value *= Complex64::new(1.0, 0.0) - x;
        }
    }
    OracleValue {
        value,
        below_convergence: delta.is_some_and(|d| s.re <= d),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schottky::{cylinder, three_funnel};
    use crate::symbolic::enumerate_periodic_words;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// `Π_k (1 - e^{-(s+k)ℓ})^2`, the cylinder zeta with both orientations.
    fn cylinder_product(l: f64, s: Complex64) -> Complex64 {
        (0..200).fold(c(1.0, 0.0), |acc, k| {
            let f = c(1.0, 0.0) - (-(s + k as f64) * l).exp();
            acc * f * f
        })
    }

    #[test]
    fn cylinder_first_trace() {
        let g = cylinder(2.0f64).unwrap();
        let t = enumerate_periodic_words(&g, 4).unwrap();
        let (c0, _) = transfer_traces(&t, c(0.0, 0.0));
        let expected = 2.0 / (1.0 - (-2.0f64).exp());
        assert!((c0[0].re - expected).abs() < 1e-14 && c0[0].im == 0.0);
        let series = ZetaSeries::new(&t);
        let (c1, _) = series.traces(c(0.0, 0.0));
        for (a, b) in c0.iter().zip(&c1) {
            assert!((a - b).norm() < 1e-12 * a.norm());
        }
    }

    #[test]
    fn traces_decay_for_large_real_s() {
        let g = three_funnel(7.0f64, 7.0, 7.0).unwrap();
        let t = enumerate_periodic_words(&g, 4).unwrap();
        let (cs, _) = transfer_traces(&t, c(30.0, 0.0));
        assert!(cs.iter().all(|v| v.norm() < 1e-80));
    }

    #[test]
    fn trace_derivative_matches_finite_difference() {
        let g = three_funnel(7.0f64, 7.0, 7.0).unwrap();
        let t = enumerate_periodic_words(&g, 5).unwrap();
        let h = 1e-6;
        let s0 = c(0.1, 0.3);
        let (_, dc) = transfer_traces(&t, s0);
        let (cp, _) = transfer_traces(&t, s0 + h);
        let (cm, _) = transfer_traces(&t, s0 - h);
        for n in 0..5 {
            let fd = (cp[n] - cm[n]) / (2.0 * h);
            assert!((fd - dc[n]).norm() < 1e-6 * (1.0 + dc[n].norm()), "n={n}");
        }
    }

    #[test]
    fn empty_table_is_identity() {
        let t = WordTable::empty(2);
        let series = ZetaSeries::new(&t);
        let v = series.evaluate(c(0.3, 4.0));
        assert_eq!(v.value, c(1.0, 0.0));
        assert_eq!(v.derivative, c(0.0, 0.0));
    }

    #[test]
    fn cylinder_zeros_on_imaginary_axis() {
        let g = cylinder(2.0f64).unwrap();
        let t = enumerate_periodic_words(&g, 8).unwrap();
        let series = ZetaSeries::new(&t);
        for m in 1..=6 {
            let v = series.evaluate(c(0.0, PI * m as f64));
            assert!(v.value.norm() < 1e-6, "m={m}: {}", v.value);
        }
        // agreement with the closed product away from zeros
        for s in [c(0.3, 1.0), c(-0.5, 7.0), c(1.0, -3.0)] {
            let v = series.evaluate(s).value;
            let p = cylinder_product(2.0, s);
            assert!((v - p).norm() < 1e-10 * (1.0 + p.norm()), "{s}");
        }
    }

    #[test]
    fn cylinder_oracle_matches_closed_form() {
        let g = cylinder(2.0f64).unwrap();
        let t = enumerate_periodic_words(&g, 6).unwrap();
        let o = euler_product_oracle(&t, c(1.0, 0.0), 60, Some(0.0));
        let direct: f64 = (0..=60).map(|k| (1.0 - (-(1.0 + k as f64) * 2.0).exp()).powi(2)).product();
        assert!((o.value.re - direct).abs() < 1e-14 && o.value.im.abs() < 1e-16);
        assert!(!o.below_convergence);
        let far = euler_product_oracle(&t, c(10.0, 0.0), 60, None);
        assert!((far.value - c(1.0, 0.0)).norm() < 1e-8);
        assert!(euler_product_oracle(&t, c(-0.1, 0.0), 60, Some(0.0)).below_convergence);
    }

    #[test]
    fn x777_matches_oracle_at_two() {
        let g = three_funnel(7.0f64, 7.0, 7.0).unwrap();
        let t = enumerate_periodic_words(&g, 12).unwrap();
        let series = ZetaSeries::new(&t);
        let v = series.evaluate(c(2.0, 0.0)).value;
        let o = euler_product_oracle(&t, c(2.0, 0.0), 60, None).value;
        assert!((v - o).norm() < 1e-6, "{v} vs {o}");
    }

    #[test]
    fn conjugate_symmetry() {
        let g = three_funnel(7.0f64, 7.0, 7.0).unwrap();
        let t = enumerate_periodic_words(&g, 8).unwrap();
        let series = ZetaSeries::new(&t);
        for s in [c(0.1, 3.0), c(-0.4, 40.0), c(0.05, 0.7)] {
            let a = series.evaluate(s).value;
            let b = series.evaluate(s.conj()).value;
            assert!((a - b.conj()).norm() <= 1e-14 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        use rand::{Rng, SeedableRng};
        let g = three_funnel(7.0f64, 7.0, 7.0).unwrap();
        let t = enumerate_periodic_words(&g, 8).unwrap();
        let series = ZetaSeries::new(&t);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let s = c(rng.gen_range(-0.5..1.0), rng.gen_range(-30.0..30.0));
            let h = 1e-5;
            let fd = (series.evaluate(s + h).value - series.evaluate(s - h).value) / (2.0 * h);
            let d = series.evaluate(s).derivative;
            assert!((fd - d).norm() < 1e-7 * d.norm().max(1e-3), "{s}: {fd} vs {d}");
        }
    }

    #[test]
    fn cylinder_truncation_stabilizes() {
        let g = cylinder(2.0f64).unwrap();
        let t = enumerate_periodic_words(&g, 12).unwrap();
        let series = ZetaSeries::new(&t);
        for s in [c(-0.3, 2.0), c(0.2, 10.0), c(0.0, 19.0)] {
            let mut prev = None;
            for n in 6..=10 {
                let diff = (series.evaluate_order(s, n).value - series.evaluate_order(s, n - 1).value).norm();
                if let Some(p) = prev {
                    if diff > 1e-300 {
                        assert!(diff < 0.5 * p, "s={s} n={n}: {diff} vs {p}");
                    }
                }
                prev = Some(diff);
            }
        }
    }

    #[test]
    fn newton_finds_cylinder_zero() {
        // the truncated double zero splits into a pair about 1e-7 from iπ
        let g = cylinder(2.0f64).unwrap();
        let series = ZetaSeries::new(&enumerate_periodic_words(&g, 8).unwrap());
        let f = |z: Complex64| {
            let v = series.evaluate(z);
            (v.value, v.derivative)
        };
        let z = crate::rootfind::newton_refine(&f, c(0.1, 3.1), 1e-10, 200).unwrap();
        assert!((z - c(0.0, PI)).norm() < 1e-6, "{z}");
    }
}
