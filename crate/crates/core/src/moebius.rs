//! Real Moebius transformations acting on the extended complex plane.

use std::ops::Mul;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{length_from_trace, Real};

/// A point of the Riemann sphere `C ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedPoint<T> {
    Finite(Complex<T>),
    Infinity,
}

impl<T: Real> ExtendedPoint<T> {
    pub fn real(x: T) -> Self {
        ExtendedPoint::Finite(Complex::new(x, T::zero()))
    }

    pub fn finite(self) -> Option<Complex<T>> {
        match self {
            ExtendedPoint::Finite(z) => Some(z),
            ExtendedPoint::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedPoint::Infinity)
    }
}

impl<T: Real> From<Complex<T>> for ExtendedPoint<T> {
    fn from(z: Complex<T>) -> Self {
        ExtendedPoint::Finite(z)
    }
}

/// Conjugacy type of an `SL(2, R)` element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Hyperbolic,
    Parabolic,
    Elliptic,
}

/// Unit-determinant real 2×2 matrix `[[a, b], [c, d]]` with `a + d ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoebiusTransform<T> {
    a: T,
    b: T,
    c: T,
    d: T,
}

impl<T: Real> MoebiusTransform<T> {
    /// Builds a transform, rescaling to determinant one and fixing the sign
    /// so that the trace is nonnegative.
    pub fn new(a: T, b: T, c: T, d: T) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite() && d.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        let det = a * d - b * c;
        if det <= T::zero() {
            return Err(Error::InvalidMatrix(format!(
                "determinant {det} is not positive"
            )));
        }
        Ok(Self::normalized(a, b, c, d, det))
    }

    fn normalized(a: T, b: T, c: T, d: T, det: T) -> Self {
        let s = det.sqrt();
        let (a, b, c, d) = (a / s, b / s, c / s, d / s);
        let flip = a + d < T::zero() || (a + d == T::zero() && (c < T::zero() || (c == T::zero() && a < T::zero())));
        if flip {
            Self { a: -a, b: -b, c: -c, d: -d }
        } else {
            Self { a, b, c, d }
        }
    }

    pub fn identity() -> Self {
        Self { a: T::one(), b: T::zero(), c: T::zero(), d: T::one() }
    }

    /// Hyperbolic element with fixed points `±1` translating by `length`
    /// towards `+1`.
    pub fn hyperbolic_symmetric(length: T) -> Self {
        let t = length / T::lit(2.0);
        Self { a: t.cosh(), b: t.sinh(), c: t.sinh(), d: t.cosh() }
    }

    /// `diag(e^{l/2}, e^{-l/2})`, fixing `0` and `∞`.
    pub fn dilation(length: T) -> Self {
        let t = length / T::lit(2.0);
        Self { a: t.exp(), b: T::zero(), c: T::zero(), d: (-t).exp() }
    }

    /// Elliptic rotation about `i` with matrix angle `theta` (turns geodesics
    /// through `i` by `2·theta`).
    pub fn rotation_about_i(theta: T) -> Self {
        let (s, c) = theta.sin_cos();
        let m = Self { a: c, b: s, c: -s, d: c };
        Self::normalized(m.a, m.b, m.c, m.d, T::one())
    }

    pub fn entries(&self) -> [T; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn a(&self) -> T {
        self.a
    }
    pub fn b(&self) -> T {
        self.b
    }
    pub fn c(&self) -> T {
        self.c
    }
    pub fn d(&self) -> T {
        self.d
    }

    pub fn trace(&self) -> T {
        self.a + self.d
    }

    pub fn determinant(&self) -> T {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// Raw matrix product without renormalization.
    pub(crate) fn mul_raw(&self, rhs: &Self) -> Self {
        Self {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }

    /// Matrix product with canonical sign. The determinant of a product of
    /// unit-determinant factors is one; it is not recomputed because
    /// `ad - bc` cancels badly for large entries.
    pub fn compose(&self, rhs: &Self) -> Self {
        let p = self.mul_raw(rhs);
        Self::normalized(p.a, p.b, p.c, p.d, T::one())
    }

    pub fn conjugate_by(&self, k: &Self) -> Self {
        k.inverse().compose(self).compose(k)
    }

    pub fn kind(&self) -> Kind {
        let tr = self.trace().abs();
        let two = T::lit(2.0);
        if (tr - two).abs() <= T::check_eps() {
            Kind::Parabolic
        } else if tr > two {
            Kind::Hyperbolic
        } else {
            Kind::Elliptic
        }
    }

    /// Translation length `2·arccosh(|tr|/2)`, zero unless hyperbolic.
    pub fn translation_length(&self) -> T {
        match self.kind() {
            Kind::Hyperbolic => length_from_trace(self.trace()),
            _ => T::zero(),
        }
    }

    /// Image `(az+b)/(cz+d)` and derivative `1/(cz+d)^2`.
    ///
    /// At `z = ∞` the derivative is the limit of `1/(cz+d)^2`: zero when
    /// `c ≠ 0`, `a^2` otherwise. At the pole `-d/c` both image and derivative
    /// are infinite.
    pub fn act(&self, z: ExtendedPoint<T>) -> (ExtendedPoint<T>, ExtendedPoint<T>) {
        match z {
            ExtendedPoint::Infinity => {
                if self.c == T::zero() {
                    let der = Complex::new(T::one() / (self.d * self.d), T::zero());
                    (ExtendedPoint::Infinity, ExtendedPoint::Finite(der))
                } else {
                    let img = Complex::new(self.a / self.c, T::zero());
                    (ExtendedPoint::Finite(img), ExtendedPoint::Finite(Complex::new(T::zero(), T::zero())))
                }
            }
            ExtendedPoint::Finite(z) => {
                let den = z * self.c + self.d;
                if den.re == T::zero() && den.im == T::zero() {
                    return (ExtendedPoint::Infinity, ExtendedPoint::Infinity);
                }
                let num = z * self.a + self.b;
                let inv = den.inv();
                (ExtendedPoint::Finite(num * inv), ExtendedPoint::Finite(inv * inv))
            }
        }
    }

    /// Image of a finite point, `None` at the pole.
    pub fn apply(&self, z: Complex<T>) -> Option<Complex<T>> {
        self.act(ExtendedPoint::Finite(z)).0.finite()
    }

    /// Real fixed points `(repelling, attracting)` of a hyperbolic element.
    /// `None` stands for `∞`.
    pub fn fixed_points(&self) -> Option<(Option<T>, Option<T>)> {
        if self.kind() != Kind::Hyperbolic {
            return None;
        }
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let two = T::lit(2.0);
        let tr = a + d;
        let disc = ((tr.abs() - two) * (tr.abs() + two)).sqrt();
        if c == T::zero() {
            // z -> (a z + b)/d: finite fixed point b/(d-a), the other is ∞.
            let finite = b / (d - a);
            return Some(if a.abs() > d.abs() {
                (Some(finite), None)
            } else {
                (None, Some(finite))
            });
        }
        // c z^2 + (d - a) z - b = 0, stable quadratic roots.
        let p = d - a;
        let sgn = if p >= T::zero() { T::one() } else { -T::one() };
        let q = -(p + sgn * disc) / two;
        let z1 = q / c;
        let z2 = if q == T::zero() { -z1 } else { -b / q };
        // repelling: |c z + d| < 1
        if (c * z1 + d).abs() < (c * z2 + d).abs() {
            Some((Some(z1), Some(z2)))
        } else {
            Some((Some(z2), Some(z1)))
        }
    }

    /// Isometric circle `|cz + d| = 1` as `(center, radius)`, if `c ≠ 0`.
    pub fn isometric_circle(&self) -> Option<(T, T)> {
        if self.c == T::zero() {
            None
        } else {
            Some((-self.d / self.c, T::one() / self.c.abs()))
        }
    }
}

impl<T: Real> Mul for MoebiusTransform<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.compose(&rhs)
    }
}

/// Product `m1·m2`, its conjugacy type and translation length.
pub fn compose_and_classify<T: Real>(
    m1: &MoebiusTransform<T>,
    m2: &MoebiusTransform<T>,
) -> (MoebiusTransform<T>, Kind, T) {
    let p = m1.compose(m2);
    (p, p.kind(), p.translation_length())
}
