//! Schottky groups realizing cylinders, three-funnel surfaces `X(l1,l2,l3)`
//! and funneled tori `Y(l1,l2,φ)`.
//!
//! Generators are stored as `g_1..g_r, g_1^{-1}..g_r^{-1}`; letter `j` and
//! letter `j + r` are mutually inverse. The disk attached to letter `j` is the
//! isometric circle of that letter's generator, so `g_j` maps the interior of
//! `D_j` onto the exterior of `D_{j+r}`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moebius::MoebiusTransform;
use crate::scalar::Real;

/// Minimum gap between closed disks for them to count as disjoint.
pub const DISK_GAP_MIN: f64 = 1e-10;
/// Boundary points sampled per generator by [`validate_schottky`].
pub const MAPPING_SAMPLES: usize = 32;
/// Largest relative boundary-mapping residual accepted.
pub const MAPPING_TOL: f64 = 1e-8;

/// Disk in `C` centred on the real axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk<T> {
    pub center: T,
    pub radius: T,
}

impl<T: Real> Disk<T> {
    pub fn new(center: T, radius: T) -> Result<Self> {
        if !(radius > T::zero()) || !center.is_finite() || !radius.is_finite() {
            return Err(Error::Domain(format!("disk radius must be positive, got {radius}")));
        }
        Ok(Self { center, radius })
    }

    /// Distance between the closed disks; negative when they overlap.
    pub fn gap(&self, other: &Self) -> T {
        (self.center - other.center).abs() - self.radius - other.radius
    }

    pub fn contains(&self, z: Complex<T>) -> bool {
        (z - Complex::new(self.center, T::zero())).norm() <= self.radius
    }
}

/// Geometric moduli a group was built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Moduli<T> {
    Cylinder { length: T },
    ThreeFunnel { l1: T, l2: T, l3: T },
    FunneledTorus { l1: T, l2: T, phi: T },
    Custom,
}

/// How the third boundary class of a three-funnel marking is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductConvention {
    /// `tr(g1·g2) = -2cosh(l3/2)`: the generators translate in opposite senses.
    OppositeTranslation,
    /// `tr(g1·g2) = +2cosh(l3/2)`.
    SameTranslation,
}

/// Surface description parsed from the command line or a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SurfaceDescriptor {
    Cylinder { length: f64 },
    ThreeFunnel { l1: f64, l2: f64, l3: f64 },
    FunneledTorus { l1: f64, l2: f64, phi: f64 },
    /// Generators `g_1..g_r` as `[a, b, c, d]` rows.
    Custom { generators: Vec<[f64; 4]> },
}

impl SurfaceDescriptor {
    /// Short identifier used in CSV rows, e.g. `three_funnel(7,7,7)`.
    pub fn id(&self) -> String {
        match self {
            SurfaceDescriptor::Cylinder { length } => format!("cylinder({length})"),
            SurfaceDescriptor::ThreeFunnel { l1, l2, l3 } => format!("three_funnel({l1},{l2},{l3})"),
            SurfaceDescriptor::FunneledTorus { l1, l2, phi } => format!("funneled_torus({l1},{l2},{phi})"),
            SurfaceDescriptor::Custom { generators } => format!("custom(r={})", generators.len()),
        }
    }

    pub fn build(&self) -> Result<SchottkyGroup<f64>> {
        build_surface(self)
    }
}

impl fmt::Display for SurfaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceDescriptor::Cylinder { length } => write!(f, "cylinder:{length}"),
            SurfaceDescriptor::ThreeFunnel { l1, l2, l3 } => write!(f, "three_funnel:{l1},{l2},{l3}"),
            SurfaceDescriptor::FunneledTorus { l1, l2, phi } => write!(f, "funneled_torus:{l1},{l2},{phi}"),
            SurfaceDescriptor::Custom { generators } => {
                write!(f, "custom:")?;
                for (i, g) in generators.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{},{},{},{}", g[0], g[1], g[2], g[3])?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for SurfaceDescriptor {
    type Err = Error;

    /// Parses `cylinder:L`, `three_funnel:l1,l2,l3`, `funneled_torus:l1,l2,phi`
    /// (phi in radians, `pi/2` style fractions accepted) or
    /// `custom:a,b,c,d;a,b,c,d`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, params) = s
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("surface `{s}` lacks `kind:` prefix")))?;
        let nums = |p: &str| -> Result<Vec<f64>> {
            p.split(',').map(|t| parse_number(t.trim())).collect()
        };
        match kind.trim() {
            "cylinder" => match nums(params)?.as_slice() {
                [l] => Ok(SurfaceDescriptor::Cylinder { length: *l }),
                _ => Err(Error::Config("cylinder takes one length".into())),
            },
            "three_funnel" | "X" => match nums(params)?.as_slice() {
                [l1, l2, l3] => Ok(SurfaceDescriptor::ThreeFunnel { l1: *l1, l2: *l2, l3: *l3 }),
                _ => Err(Error::Config("three_funnel takes three lengths".into())),
            },
            "funneled_torus" | "Y" => match nums(params)?.as_slice() {
                [l1, l2, phi] => Ok(SurfaceDescriptor::FunneledTorus { l1: *l1, l2: *l2, phi: *phi }),
                _ => Err(Error::Config("funneled_torus takes l1,l2,phi".into())),
            },
            "custom" => {
                let generators = params
                    .split(';')
                    .map(|g| {
                        let v = nums(g)?;
                        <[f64; 4]>::try_from(v.as_slice())
                            .map_err(|_| Error::Config(format!("generator `{g}` needs four entries")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(SurfaceDescriptor::Custom { generators })
            }
            other => Err(Error::Config(format!("unknown surface kind `{other}`"))),
        }
    }
}

/// Parses a decimal number, also accepting `pi`, `pi/k` and `k*pi/m`.
pub fn parse_number(t: &str) -> Result<f64> {
    let bad = || Error::Config(format!("cannot parse number `{t}`"));
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let lower = t.to_ascii_lowercase().replace(' ', "");
    let (num, den) = match lower.split_once('/') {
        Some((n, d)) => (n.to_string(), d.parse::<f64>().map_err(|_| bad())?),
        None => (lower.clone(), 1.0),
    };
    let coeff = if num == "pi" {
        1.0
    } else if let Some(c) = num.strip_suffix("*pi").or_else(|| num.strip_suffix("pi")) {
        c.parse::<f64>().map_err(|_| bad())?
    } else {
        return Err(bad());
    };
    Ok(coeff * std::f64::consts::PI / den)
}

/// A Schottky group with its marking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchottkyGroup<T> {
    rank: usize,
    generators: Vec<MoebiusTransform<T>>,
    disks: Vec<Disk<T>>,
    moduli: Moduli<T>,
    convention: Option<ProductConvention>,
}

impl<T: Real> SchottkyGroup<T> {
    /// Group from `r` generators; inverses are appended and disks are the
    /// isometric circles. Fails with `MarkingInfeasible` if the disks overlap.
    pub fn from_generators(gens: Vec<MoebiusTransform<T>>, moduli: Moduli<T>) -> Result<Self> {
        let group = Self::from_generators_unchecked(gens, moduli)?;
        let report = validate_schottky(&group);
        if let Some((i, j, gap)) = report.worst_overlap() {
            return Err(Error::MarkingInfeasible { first: i, second: j, gap });
        }
        if !report.passed() {
            return Err(Error::Domain(format!(
                "mapping condition violated: residual {:e}",
                report.max_mapping_residual()
            )));
        }
        Ok(group)
    }

    fn from_generators_unchecked(gens: Vec<MoebiusTransform<T>>, moduli: Moduli<T>) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::Domain("a Schottky group needs at least one generator".into()));
        }
        let rank = gens.len();
        let mut generators = gens.clone();
        generators.extend(gens.iter().map(|g| g.inverse()));
        let disks = generators
            .iter()
            .map(|g| {
                let (c, r) = g.isometric_circle().ok_or_else(|| {
                    Error::Domain("generator fixes ∞; conjugate it first".into())
                })?;
                Disk::new(c, r)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { rank, generators, disks, moduli, convention: None })
    }

    /// Assembles a group from explicit parts without any checks.
    pub fn from_parts(generators: Vec<MoebiusTransform<T>>, disks: Vec<Disk<T>>, moduli: Moduli<T>) -> Self {
        Self { rank: generators.len() / 2, generators, disks, moduli, convention: None }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of letters, `2r`.
    pub fn letters(&self) -> usize {
        2 * self.rank
    }

    pub fn generators(&self) -> &[MoebiusTransform<T>] {
        &self.generators
    }

    pub fn generator(&self, letter: usize) -> &MoebiusTransform<T> {
        &self.generators[letter]
    }

    pub fn disks(&self) -> &[Disk<T>] {
        &self.disks
    }

    pub fn moduli(&self) -> &Moduli<T> {
        &self.moduli
    }

    pub fn convention(&self) -> Option<ProductConvention> {
        self.convention
    }

    /// Index of the inverse letter.
    pub fn inverse_letter(&self, letter: usize) -> usize {
        (letter + self.rank) % (2 * self.rank)
    }

    /// Translation lengths of the primary generators.
    pub fn generator_lengths(&self) -> Vec<T> {
        self.generators[..self.rank].iter().map(|g| g.translation_length()).collect()
    }

    /// Moduli recomputed from traces: generator lengths plus, for rank two,
    /// the length of `g1·g2`.
    pub fn recompute_lengths(&self) -> Vec<T> {
        let mut v = self.generator_lengths();
        if self.rank == 2 {
            v.push(self.generators[0].compose(&self.generators[1]).translation_length());
        }
        v
    }
}

impl SchottkyGroup<f64> {
    /// Stable 64-bit identifier derived from the primary generator entries.
    pub fn hash(&self) -> u64 {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        h.update((self.rank as u64).to_le_bytes());
        for g in &self.generators[..self.rank] {
            for e in g.entries() {
                h.update(e.to_bits().to_le_bytes());
            }
        }
        let out = h.finalize();
        u64::from_le_bytes(out[..8].try_into().expect("8 bytes"))
    }

    pub fn hash_hex(&self) -> String {
        format!("{:016x}", self.hash())
    }
}

/// Builds and validates the group for a surface descriptor.
pub fn build_surface(desc: &SurfaceDescriptor) -> Result<SchottkyGroup<f64>> {
    match *desc {
        SurfaceDescriptor::Cylinder { length } => cylinder(length),
        SurfaceDescriptor::ThreeFunnel { l1, l2, l3 } => three_funnel(l1, l2, l3),
        SurfaceDescriptor::FunneledTorus { l1, l2, phi } => funneled_torus(l1, l2, phi),
        SurfaceDescriptor::Custom { ref generators } => {
            let gens = generators
                .iter()
                .map(|g| MoebiusTransform::new(g[0], g[1], g[2], g[3]))
                .collect::<Result<Vec<_>>>()?;
            for g in &gens {
                if g.kind() != crate::moebius::Kind::Hyperbolic {
                    return Err(Error::Domain("custom generators must be hyperbolic".into()));
                }
            }
            SchottkyGroup::from_generators(gens, Moduli::Custom)
        }
    }
}

fn check_length<T: Real>(name: &str, l: T) -> Result<()> {
    if !(l > T::zero()) || !l.is_finite() {
        return Err(Error::Domain(format!("{name} must be a positive length, got {l}")));
    }
    Ok(())
}

/// Hyperbolic cylinder: one generator with fixed points `±1`.
pub fn cylinder<T: Real>(length: T) -> Result<SchottkyGroup<T>> {
    check_length("length", length)?;
    SchottkyGroup::from_generators(
        vec![MoebiusTransform::hyperbolic_symmetric(length)],
        Moduli::Cylinder { length },
    )
}

/// Three-funnel surface `X(l1, l2, l3)`.
///
/// `g1` has fixed points `±1`, `g2` has fixed points `±α`; `α > 1` is found by
/// bisection on `|tr(g1·g2)| = 2cosh(l3/2)`.
pub fn three_funnel<T: Real>(l1: T, l2: T, l3: T) -> Result<SchottkyGroup<T>> {
    check_length("l1", l1)?;
    check_length("l2", l2)?;
    check_length("l3", l3)?;
    let two = T::lit(2.0);
    let (t, u) = (l1 / two, l2 / two);
    let target = two * (l3 / two).cosh();
    let g1 = MoebiusTransform::hyperbolic_symmetric(l1);
    let g2_of = |alpha: T, sense: T| {
        MoebiusTransform::new(u.cosh(), sense * alpha * u.sinh(), sense * u.sinh() / alpha, u.cosh())
            .expect("unit determinant")
    };
    // tr(g1 g2) = 2 ch t ch u + sense · sh t sh u (α + 1/α)
    let base = two * t.cosh() * u.cosh();
    let slope = t.sinh() * u.sinh();
    let mut last_err = None;
    for (convention, sense, wanted) in [
        (ProductConvention::OppositeTranslation, -T::one(), -target),
        (ProductConvention::SameTranslation, T::one(), target),
    ] {
        // α + 1/α = (wanted - base) / (sense · slope) must exceed 2
        let need = (wanted - base) / (sense * slope);
        if !(need > two) {
            continue;
        }
        let trace_at = |alpha: T| base + sense * slope * (alpha + alpha.recip());
        let f = |alpha: T| (trace_at(alpha) - wanted) * sense;
        let mut lo = T::one();
        let mut hi = T::lit(2.0);
        while f(hi) < T::zero() {
            hi = hi * two;
            if hi > T::lit(1e150) {
                return Err(Error::Domain("three-funnel trace equation has no root".into()));
            }
        }
        for _ in 0..200 {
            let mid = (lo + hi) / two;
            if f(mid) < T::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= T::epsilon() * hi {
                break;
            }
        }
        let alpha = (lo + hi) / two;
        let moduli = Moduli::ThreeFunnel { l1, l2, l3 };
        match SchottkyGroup::from_generators(vec![g1, g2_of(alpha, sense)], moduli) {
            Ok(mut g) => {
                g.convention = Some(convention);
                return Ok(g);
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::Domain("three-funnel trace equation has no root".into())))
}

/// Funneled torus `Y(l1, l2, φ)`.
///
/// `g1 = diag(e^{l1/2}, e^{-l1/2})` and `g2` is the dilation of length `l2`
/// conjugated by the rotation about `i` that turns its axis by `φ`. The group
/// is then conjugated so that `∞` sits in the middle of the widest arc between
/// generator fixed points.
pub fn funneled_torus<T: Real>(l1: T, l2: T, phi: T) -> Result<SchottkyGroup<T>> {
    check_length("l1", l1)?;
    check_length("l2", l2)?;
    if !(phi > T::zero() && phi < T::PI()) {
        return Err(Error::Domain(format!("angle must lie in (0, π), got {phi}")));
    }
    let two = T::lit(2.0);
    let g1 = MoebiusTransform::dilation(l1);
    let rot = MoebiusTransform::rotation_about_i(phi / two);
    let g2 = rot.compose(&MoebiusTransform::dilation(l2)).compose(&rot.inverse());

    // boundary angles (Cayley picture) of all four fixed points
    let angle = |x: Option<T>| -> T {
        match x {
            None => T::zero(),
            Some(x) => {
                let z = Complex::new(x, T::zero());
                let i = Complex::new(T::zero(), T::one());
                let w = (z - i) / (z + i);
                let a = w.arg();
                if a < T::zero() { a + two * T::PI() } else { a }
            }
        }
    };
    let mut angles = Vec::new();
    for g in [&g1, &g2] {
        let (p, q) = g.fixed_points().expect("hyperbolic");
        angles.push(angle(p));
        angles.push(angle(q));
    }
    angles.sort_by(|a, b| a.partial_cmp(b).expect("finite angles"));
    let mut best = (T::zero(), T::zero());
    for k in 0..angles.len() {
        let a = angles[k];
        let b = if k + 1 < angles.len() { angles[k + 1] } else { angles[0] + two * T::PI() };
        if b - a > best.1 {
            best = ((a + b) / two, b - a);
        }
    }
    // real point at boundary angle ψ is -cot(ψ/2)
    let psi = best.0;
    let p = -(psi / two).cos() / (psi / two).sin();
    let conj = MoebiusTransform::new(p, -T::one(), T::one(), T::zero())?;
    let gens = vec![g1.conjugate_by(&conj), g2.conjugate_by(&conj)];
    SchottkyGroup::from_generators(gens, Moduli::FunneledTorus { l1, l2, phi })
}

/// Crossing angle of the axes of two hyperbolic elements, from
/// `tr(AB)/2 = cosh(a)cosh(b) + sinh(a)sinh(b)cos φ` with `a, b` the half lengths.
pub fn axis_crossing_angle<T: Real>(g1: &MoebiusTransform<T>, g2: &MoebiusTransform<T>) -> Option<T> {
    let two = T::lit(2.0);
    let a = g1.translation_length() / two;
    let b = g2.translation_length() / two;
    let tr = g1.mul_raw(g2).trace();
    let cos_phi = (tr / two - a.cosh() * b.cosh()) / (a.sinh() * b.sinh());
    if cos_phi.abs() <= T::one() + T::lit(1e-9) {
        Some(cos_phi.max(-T::one()).min(T::one()).acos())
    } else {
        None
    }
}

/// Outcome of [`validate_schottky`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// `(i, j, gap)` for every unordered pair of disks.
    pub gaps: Vec<(usize, usize, f64)>,
    /// Per letter: largest relative deviation of `g(∂D_j)` from `∂D_{j+r}`.
    pub mapping_residuals: Vec<f64>,
    /// Per letter: whether a sample interior point lands outside `D_{j+r}`.
    pub interior_ok: Vec<bool>,
}

impl ValidationReport {
    pub fn disjoint(&self) -> bool {
        self.gaps.iter().all(|&(_, _, g)| g >= DISK_GAP_MIN)
    }

    pub fn worst_overlap(&self) -> Option<(usize, usize, f64)> {
        self.gaps
            .iter()
            .copied()
            .filter(|&(_, _, g)| !(g >= DISK_GAP_MIN))
            .min_by(|a, b| a.2.total_cmp(&b.2))
    }

    pub fn max_mapping_residual(&self) -> f64 {
        self.mapping_residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn mapping_ok(&self) -> bool {
        self.mapping_residuals.iter().all(|&r| r < MAPPING_TOL) && self.interior_ok.iter().all(|&b| b)
    }

    pub fn passed(&self) -> bool {
        self.disjoint() && self.mapping_ok()
    }
}

/// Checks disk disjointness and the mapping condition for every letter.
pub fn validate_schottky<T: Real>(g: &SchottkyGroup<T>) -> ValidationReport {
    let n = g.generators.len().min(g.disks.len());
    let mut gaps = Vec::new();
    for i in 0..g.disks.len() {
        for j in i + 1..g.disks.len() {
            gaps.push((i, j, g.disks[i].gap(&g.disks[j]).to_f64_lossy()));
        }
    }
    let mut mapping_residuals = Vec::with_capacity(n);
    let mut interior_ok = Vec::with_capacity(n);
    let r = n / 2;
    for j in 0..n {
        let target = g.disks[(j + r) % n];
        let src = g.disks[j];
        let gen = g.generators[j];
        let tc = Complex::new(target.center, T::zero());
        let mut worst = T::zero();
        for k in 0..MAPPING_SAMPLES {
            let theta = T::lit(2.0 * std::f64::consts::PI * (k as f64 + 0.5) / MAPPING_SAMPLES as f64);
            let z = Complex::from_polar(src.radius, theta) + src.center;
            let res = match gen.apply(z) {
                Some(w) => ((w - tc).norm() - target.radius).abs() / target.radius,
                None => T::infinity(),
            };
            worst = if res.is_nan() { T::infinity() } else { worst.max(res) };
        }
        mapping_residuals.push(worst.to_f64_lossy());
        let inner = Complex::new(src.center + src.radius * T::lit(0.25), src.radius * T::lit(0.25));
        interior_ok.push(match gen.apply(inner) {
            Some(w) => (w - tc).norm() > target.radius,
            None => true,
        });
    }
    ValidationReport { gaps, mapping_residuals, interior_ok }
}
