//! Argument-principle zero counting and adaptive zero location for
//! holomorphic functions on axis-parallel rectangles.
//!
//! Evaluators return `(f(z), f'(z))`. The winding integral `∮ f'/f` is
//! computed edge by edge with adaptive 16-point Gauss–Legendre quadrature;
//! each accepted segment is snapped to the exact change of `log f` between its
//! endpoints, so counts on shared edges add up exactly.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Deterministic boundary shifts, as fractions of the box size.
pub const JITTER_SCHEDULE: [f64; 3] = [0.007, 0.013, 0.029];
/// A located cluster is confirmed in a box of this many `tol` across.
pub const CLUSTER_DIAMETER: f64 = 64.0;
const GL_NODES: usize = 16;

/// Closed rectangle `[re_min, re_max] × [im_min, im_max]` in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rect {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let ok = [re_min, re_max, im_min, im_max].iter().all(|v| v.is_finite());
        if !ok || !(re_min < re_max) || !(im_min < im_max) {
            return Err(Error::Domain(format!(
                "degenerate rectangle [{re_min}, {re_max}] x [{im_min}, {im_max}]"
            )));
        }
        Ok(Self { re_min, re_max, im_min, im_max })
    }

    /// Square of half-width `half` around `c`.
    pub fn around(c: Complex64, half: f64) -> Self {
        Self { re_min: c.re - half, re_max: c.re + half, im_min: c.im - half, im_max: c.im + half }
    }

    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    pub fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }

    /// Same center, every side scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let c = self.center();
        let (hw, hh) = (0.5 * factor * self.width(), 0.5 * factor * self.height());
        Self { re_min: c.re - hw, re_max: c.re + hw, im_min: c.im - hh, im_max: c.im + hh }
    }

    /// Every side pushed outward by `frac` of the corresponding box size.
    pub fn expanded(&self, frac: f64) -> Self {
        let (dw, dh) = (frac * self.width(), frac * self.height());
        Self {
            re_min: self.re_min - dw,
            re_max: self.re_max + dw,
            im_min: self.im_min - dh,
            im_max: self.im_max + dh,
        }
    }

    /// Counter-clockwise corners starting at the lower left.
    pub fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }

    /// The four quadrants obtained by cutting at `split`.
    pub fn quadrants(&self, split: Complex64) -> [Rect; 4] {
        let (x, y) = (split.re, split.im);
        [
            Rect { re_min: self.re_min, re_max: x, im_min: self.im_min, im_max: y },
            Rect { re_min: x, re_max: self.re_max, im_min: self.im_min, im_max: y },
            Rect { re_min: x, re_max: self.re_max, im_min: y, im_max: self.im_max },
            Rect { re_min: self.re_min, re_max: x, im_min: y, im_max: self.im_max },
        ]
    }
}

/// A zero (or tight cluster of zeros) with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroRecord {
    pub location: Complex64,
    pub multiplicity: u32,
    /// `|f|` at `location`.
    pub residual: f64,
    /// False when Newton failed and `location` is a sub-box center.
    pub refined: bool,
}

/// Quadrature controls for the winding integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSettings {
    /// Maximum number of edge bisections.
    pub max_depth: u32,
    /// Acceptance tolerance for `|Q(whole) - Q(halves)|` on a segment.
    pub seg_tol: f64,
    /// Edges are first cut into pieces no longer than this.
    pub max_segment: f64,
}

impl Default for QuadSettings {
    fn default() -> Self {
        Self { max_depth: 14, seg_tol: 1e-3, max_segment: f64::INFINITY }
    }
}

fn gauss_legendre() -> &'static [(f64, f64); GL_NODES] {
    static NODES: OnceLock<[(f64, f64); GL_NODES]> = OnceLock::new();
    NODES.get_or_init(|| {
        let n = GL_NODES;
        let mut out = [(0.0, 0.0); GL_NODES];
        for i in 0..n {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            out[i] = (x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        out
    })
}

/// Result of integrating `f'/f` along one straight segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeIntegral {
    /// Change of `log f` along the segment.
    pub value: Complex64,
    pub min_abs: f64,
    pub max_abs: f64,
    /// Bisection depth was exhausted somewhere on the segment.
    pub unresolved: bool,
}

impl EdgeIntegral {
    fn empty() -> Self {
        Self { value: Complex64::new(0.0, 0.0), min_abs: f64::INFINITY, max_abs: 0.0, unresolved: false }
    }

    fn join(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            min_abs: self.min_abs.min(other.min_abs),
            max_abs: self.max_abs.max(other.max_abs),
            unresolved: self.unresolved || other.unresolved,
        }
    }

    /// Whether the boundary guard trips for a contour whose largest sample is
    /// `max_abs`.
    pub fn touches_zero(&self, max_abs: f64) -> bool {
        !(self.min_abs > 1e-12 * max_abs)
    }
}

struct Panel {
    q: Complex64,
    min_abs: f64,
    max_abs: f64,
}

fn gl_panel<F>(f: &F, a: Complex64, b: Complex64) -> Panel
where
    F: Fn(Complex64) -> (Complex64, Complex64),
{
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut q = Complex64::new(0.0, 0.0);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for &(x, w) in gauss_legendre() {
        let (v, dv) = f(mid + half * x);
        let m = v.norm();
        lo = lo.min(m);
        hi = hi.max(m);
        q += dv / v * w;
    }
    if !lo.is_finite() || !hi.is_finite() || lo.is_nan() {
        lo = 0.0;
    }
    Panel { q: q * half, min_abs: lo, max_abs: hi }
}

fn snap(q: Complex64, fa: Complex64, fb: Complex64) -> Option<Complex64> {
    let ratio = fb / fa;
    let (r, phase) = (ratio.norm().ln(), ratio.arg());
    let k = (q.im - phase) / (2.0 * PI);
    let kr = k.round();
    if (k - kr).abs() < 0.05 && (q.re - r).abs() < 0.05 {
        Some(Complex64::new(r, phase + 2.0 * PI * kr))
    } else {
        None
    }
}

fn adapt<F>(
    f: &F,
    a: Complex64,
    b: Complex64,
    fa: Complex64,
    fb: Complex64,
    whole: Panel,
    depth: u32,
    q: &QuadSettings,
) -> EdgeIntegral
where
    F: Fn(Complex64) -> (Complex64, Complex64),
{
    let m = 0.5 * (a + b);
    let fm = f(m).0;
    let left = gl_panel(f, a, m);
    let right = gl_panel(f, m, b);
    let halves = left.q + right.q;
    let lo = whole.min_abs.min(left.min_abs).min(right.min_abs).min(fm.norm());
    let hi = whole.max_abs.max(left.max_abs).max(right.max_abs).max(fm.norm());
    if (halves - whole.q).norm() < q.seg_tol {
        if let Some(v) = snap(halves, fa, fb) {
            return EdgeIntegral { value: v, min_abs: lo, max_abs: hi, unresolved: false };
        }
    }
    if depth >= q.max_depth || lo == 0.0 {
        return EdgeIntegral { value: halves, min_abs: lo, max_abs: hi, unresolved: true };
    }
    let l = adapt(f, a, m, fa, fm, left, depth + 1, q);
    let r = adapt(f, m, b, fm, fb, right, depth + 1, q);
    l.join(r)
}

/// Integral of `f'/f` along the segment from `a` to `b`.
pub fn edge_integral<F>(f: &F, a: Complex64, b: Complex64, q: &QuadSettings) -> EdgeIntegral
where
    F: Fn(Complex64) -> (Complex64, Complex64),
{
    let len = (b - a).norm();
    let pieces = if q.max_segment.is_finite() && q.max_segment > 0.0 {
        (len / q.max_segment).ceil().max(1.0) as usize
    } else {
        1
    };
    let mut acc = EdgeIntegral::empty();
    let mut za = a;
    let mut fa = f(a).0;
    for k in 1..=pieces {
        let zb = if k == pieces { b } else { a + (b - a) * (k as f64 / pieces as f64) };
        let fb = f(zb).0;
        let whole = gl_panel(f, za, zb);
        let mut piece = adapt(f, za, zb, fa, fb, whole, 0, q);
        piece.min_abs = piece.min_abs.min(fa.norm()).min(fb.norm());
        piece.max_abs = piece.max_abs.max(fa.norm()).max(fb.norm());
        acc = acc.join(piece);
        za = zb;
        fa = fb;
    }
    acc
}

/// Rounds a contour integral to a zero count after the boundary guard and the
/// integer-residual test.
pub fn count_from_integral(total: EdgeIntegral) -> Result<i64> {
    if total.touches_zero(total.max_abs) {
        return Err(Error::BoundaryZero { min_abs: total.min_abs });
    }
    let w = total.value.im / (2.0 * PI);
    let residual = (w - w.round()).abs().max(total.value.re.abs() / (2.0 * PI));
    if !(residual < 0.25) {
        return Err(Error::NonConvergence { residual });
    }
    let n = w.round() as i64;
    if n < 0 {
        return Err(Error::Domain(format!("negative winding number {n}; function has poles in the box")));
    }
    Ok(n)
}

fn contour<F>(f: &F, rect: &Rect, q: &QuadSettings) -> EdgeIntegral
where
    F: Fn(Complex64) -> (Complex64, Complex64),
{
    let c = rect.corners();
    (0..4).fold(EdgeIntegral::empty(), |acc, i| acc.join(edge_integral(f, c[i], c[(i + 1) % 4], q)))
}

/// Number of zeros of `f` inside `rect`, counted with multiplicity.
///
/// A residual above 1/4 triggers one retry with a hundredfold tighter
/// segment tolerance before giving up.
pub fn winding_count<F>(f: &F, rect: &Rect, q: &QuadSettings) -> Result<i64>
where
    F: Fn(Complex64) -> (Complex64, Complex64),
{
    match count_from_integral(contour(f, rect, q)) {
        Err(Error::NonConvergence { .. }) => {
            let tight = QuadSettings { seg_tol: q.seg_tol * 1e-2, ..*q };
            count_from_integral(contour(f, rect, &tight))
        }
        other => other,
    }
}

/// Like [`winding_count`], expanding the box along the jitter schedule when a
/// zero sits on its boundary. Returns the count and the box actually used.
pub fn winding_count_jittered<F>(f: &F, rect: &Rect, q: &QuadSettings) -> Result<(i64, Rect)>
where
    F: Fn(Complex64) -> (Complex64, Complex64),
{
    for frac in std::iter::once(0.0).chain(JITTER_SCHEDULE) {
        let r = if frac == 0.0 { *rect } else { rect.expanded(frac) };
        match winding_count(f, &r, q) {
            Ok(n) => return Ok((n, r)),
            Err(Error::BoundaryZero { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::JitterExhausted)
}

/// Plain Newton iteration from `s0` until `|f/f'| < tol`.
pub fn newton_refine<F>(f: &F, s0: Complex64, tol: f64, max_iter: usize) -> Result<Complex64>
where
    F: Fn(Complex64) -> (Complex64, Complex64),
{
    newton_bounded(f, s0, tol, max_iter, 1, None)
}

/// Newton iteration for a zero of multiplicity `m` (step `m f/f'`), failing
/// when the iterate leaves `bound`.
pub fn newton_bounded<F>(
    f: &F,
    s0: Complex64,
    tol: f64,
    max_iter: usize,
    m: u32,
    bound: Option<&Rect>,
) -> Result<Complex64>
where
    F: Fn(Complex64) -> (Complex64, Complex64),
{
    let diverged = || Error::Divergence { start: format!("{s0}") };
    let mut z = s0;
    for iter in 0..=max_iter {
        let (v, dv) = f(z);
        if v == Complex64::new(0.0, 0.0) {
            return Ok(z);
        }
        let step = v / dv * m as f64;
        if !step.re.is_finite() || !step.im.is_finite() {
            return Err(diverged());
        }
        if step.norm() < tol {
            return Ok(z - step);
        }
        if iter == max_iter {
            break;
        }
        z -= step;
        if bound.is_some_and(|b| !b.contains(z)) {
            return Err(diverged());
        }
    }
    Err(diverged())
}

/// Locates every zero of `f` in `rect` with default quadrature settings.
pub fn locate_zeros<F>(f: &F, rect: &Rect, tol: f64) -> Result<Vec<ZeroRecord>>
where
    F: Fn(Complex64) -> (Complex64, Complex64) + Sync,
{
    locate_zeros_with(f, rect, tol, &QuadSettings::default())
}

/// Recursive quadrisection with Newton polishing. The multiplicities of the
/// returned records sum to the winding count of `rect`, which is expanded by
/// the jitter schedule if its boundary passes through a zero.
pub fn locate_zeros_with<F>(f: &F, rect: &Rect, tol: f64, q: &QuadSettings) -> Result<Vec<ZeroRecord>>
where
    F: Fn(Complex64) -> (Complex64, Complex64) + Sync,
{
    if !(tol > 0.0) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let (count, rect) = winding_count_jittered(f, rect, q)?;
    let mut out = locate_in(f, &rect, count, tol, q, 0)?;
    out.sort_by(|a, b| a.location.im.total_cmp(&b.location.im).then(a.location.re.total_cmp(&b.location.re)));
    Ok(out)
}

/// Locates the `count` zeros already known to lie in `rect`, without
/// touching its boundary.
pub fn locate_known<F>(f: &F, rect: &Rect, count: i64, tol: f64, q: &QuadSettings) -> Result<Vec<ZeroRecord>>
where
    F: Fn(Complex64) -> (Complex64, Complex64) + Sync,
{
    locate_in(f, rect, count, tol, q, 0)
}

fn record<F>(f: &F, z: Complex64, m: u32, refined: bool) -> ZeroRecord
where
    F: Fn(Complex64) -> (Complex64, Complex64),
{
    ZeroRecord { location: z, multiplicity: m, residual: f(z).0.norm(), refined }
}

fn locate_in<F>(f: &F, rect: &Rect, count: i64, tol: f64, q: &QuadSettings, depth: u32) -> Result<Vec<ZeroRecord>>
where
    F: Fn(Complex64) -> (Complex64, Complex64) + Sync,
{
    if count == 0 {
        return Ok(Vec::new());
    }
    let m = count as u32;
    let center = rect.center();
    let bound = rect.scaled(2.0);
    // a zero of multiplicity m is only resolvable to about eps^(1/m)
    let tol_m = if m > 1 { tol.max(f64::EPSILON.powf(1.0 / m as f64) * (1.0 + center.norm())) } else { tol };
    let newton = newton_bounded(f, center, tol_m, 100, m, Some(&bound));

    // below the noise floor winding counts are dominated by rounding
    let noise_floor = CLUSTER_DIAMETER * f64::EPSILON.sqrt() * (1.0 + center.norm());
    if rect.diameter() < (CLUSTER_DIAMETER * tol).max(noise_floor) || depth > 60 {
        let near = rect.scaled(1.5);
        let tol_floor = tol_m.max(f64::EPSILON.sqrt() * (1.0 + center.norm()));
        let polished = std::iter::once(newton)
            .chain(std::iter::once(center).chain(rect.corners()).map(|z0| newton_bounded(f, z0, tol_floor, 100, m, Some(&bound))))
            .find_map(|r| r.ok().filter(|z| near.contains(*z)));
        return Ok(vec![match polished {
            Some(z) => record(f, z, m, true),
            None => record(f, center, m, false),
        }]);
    }
    if let Ok(z) = newton {
        if rect.contains(z) {
            if m == 1 {
                return Ok(vec![record(f, z, 1, true)]);
            }
            let small = Rect::around(z, (0.25 * CLUSTER_DIAMETER * tol / 2f64.sqrt()).max(4.0 * tol_m));
            if matches!(winding_count(f, &small, q), Ok(n) if n == count) {
                return Ok(vec![record(f, z, m, true)]);
            }
        }
    }

    for frac in std::iter::once(0.0).chain(JITTER_SCHEDULE) {
        let split = center + Complex64::new(frac * rect.width(), frac * rect.height());
        let quads = rect.quadrants(split);
        let counts: Result<Vec<i64>> = quads.iter().map(|r| winding_count(f, r, q)).collect();
        match counts {
            Ok(cs) if cs.iter().sum::<i64>() == count => {
                let parts: Result<Vec<Vec<ZeroRecord>>> = quads
                    .par_iter()
                    .zip(cs.par_iter())
                    .map(|(r, &c)| locate_in(f, r, c, tol, q, depth + 1))
                    .collect();
                return Ok(parts?.into_iter().flatten().collect());
            }
            Ok(_) | Err(Error::BoundaryZero { .. }) | Err(Error::NonConvergence { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::JitterExhausted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit() -> Rect {
        Rect::new(-0.5, 0.5, -0.5, 0.5).unwrap()
    }

    fn poly(roots: &[Complex64]) -> impl Fn(Complex64) -> (Complex64, Complex64) + Sync + '_ {
        move |z| {
            let mut v = c(1.0, 0.0);
            let mut dv = c(0.0, 0.0);
            for &r in roots {
                dv = dv * (z - r) + v;
                v *= z - r;
            }
            (v, dv)
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let sum: f64 = gauss_legendre().iter().map(|&(_, w)| w).sum();
        assert!((sum - 2.0).abs() < 1e-14);
        let x30: f64 = gauss_legendre().iter().map(|&(x, w)| w * x.powi(30)).sum();
        assert!((x30 - 2.0 / 31.0).abs() < 1e-14);
    }

    #[test]
    fn simple_counts() {
        let q = QuadSettings::default();
        assert_eq!(winding_count(&|z: Complex64| (z, c(1.0, 0.0)), &unit(), &q).unwrap(), 1);
        assert_eq!(winding_count(&|z: Complex64| (z * z, z * 2.0), &unit(), &q).unwrap(), 2);
        assert_eq!(winding_count(&|z: Complex64| (z - 5.0, c(1.0, 0.0)), &unit(), &q).unwrap(), 0);
    }

    #[test]
    fn boundary_zero_is_detected_and_jittered() {
        let q = QuadSettings::default();
        let f = |z: Complex64| (z - 0.5, c(1.0, 0.0));
        assert!(matches!(winding_count(&f, &unit(), &q), Err(Error::BoundaryZero { .. })));
        let (n, used) = winding_count_jittered(&f, &unit(), &q).unwrap();
        assert_eq!(n, 1);
        assert!(used.re_max > 0.5);
    }

    #[test]
    fn poles_are_rejected() {
        let f = |z: Complex64| (z.inv(), -(z * z).inv());
        assert!(winding_count(&f, &unit(), &QuadSettings::default()).is_err());
    }

    #[test]
    fn locates_two_simple_zeros() {
        let roots = [c(1.0, 0.0), c(0.0, 1.0)];
        let f = poly(&roots);
        let zs = locate_zeros(&f, &Rect::new(-2.0, 2.0, -2.0, 2.0).unwrap(), 1e-10).unwrap();
        assert_eq!(zs.len(), 2);
        for (z, r) in zs.iter().zip(roots) {
            assert_eq!(z.multiplicity, 1);
            assert!(z.refined);
            assert!((z.location - r).norm() < 1e-10);
        }
    }

    #[test]
    fn double_zero_is_one_record() {
        let f = |z: Complex64| (z * z, z * 2.0);
        let zs = locate_zeros(&f, &Rect::new(-0.3, 0.7, -0.4, 0.6).unwrap(), 1e-10).unwrap();
        assert_eq!(zs.len(), 1);
        assert_eq!(zs[0].multiplicity, 2);
        assert!(zs[0].location.norm() < 1e-9);
    }

    #[test]
    fn newton_examples() {
        let f = |z: Complex64| (z * z - 2.0, z * 2.0);
        let r = newton_refine(&f, c(1.0, 0.0), 1e-14, 50).unwrap();
        assert!((r.re - 2f64.sqrt()).abs() < 1e-14);
        let g = |z: Complex64| (z, c(1.0, 0.0));
        assert_eq!(newton_refine(&g, c(0.3, 0.0), 1e-14, 1).unwrap(), c(0.0, 0.0));
        let h = |z: Complex64| (z.exp(), z.exp());
        assert!(matches!(newton_refine(&h, c(0.0, 0.0), 1e-12, 30), Err(Error::Divergence { .. })));
    }

    #[test]
    fn clustered_and_many_zeros() {
        let roots: Vec<Complex64> = (0..12)
            .map(|k| c((0.37 * k as f64).cos() * 1.3, (0.71 * k as f64).sin() * 0.9))
            .chain([c(0.2, 0.2), c(0.2, 0.2), c(0.2 + 1e-13, 0.2)])
            .collect();
        let f = poly(&roots);
        let rect = Rect::new(-2.0, 2.1, -1.5, 1.6).unwrap();
        let total = winding_count(&f, &rect, &QuadSettings::default()).unwrap();
        assert_eq!(total, roots.len() as i64);
        let zs = locate_zeros(&f, &rect, 1e-9).unwrap();
        assert_eq!(zs.iter().map(|z| z.multiplicity as i64).sum::<i64>(), total);
        assert!(zs.iter().any(|z| z.multiplicity == 3));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn winding_is_additive(
            roots in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..8),
            xs in 0.05f64..0.95,
            ys in 0.05f64..0.95,
        ) {
            let roots: Vec<Complex64> = roots.into_iter().map(|(a, b)| c(a, b)).collect();
            let f = poly(&roots);
            let q = QuadSettings::default();
            let rect = Rect::new(-1.13, 1.17, -1.11, 1.19).unwrap();
            let split = c(rect.re_min + xs * rect.width(), rect.im_min + ys * rect.height());
            let parent = winding_count(&f, &rect, &q).unwrap();
            prop_assert_eq!(parent, roots.len() as i64);
            let parts: Vec<i64> = rect.quadrants(split).iter().map(|r| winding_count(&f, r, &q).unwrap()).collect();
            prop_assert_eq!(parts.iter().sum::<i64>(), parent);
            let zs = locate_zeros(&f, &rect, 1e-9).unwrap();
            prop_assert_eq!(zs.iter().map(|z| z.multiplicity as i64).sum::<i64>(), parent);
        }
    }
}
