//! Counting functions, exponent fits and theoretical bounds.

pub mod bounds;
pub mod counting;
pub mod fit;
pub mod strip;

pub use bounds::{c_value, exponent_bounds, m_fractal_weyl, m_general, m_pressure, ExponentRow};
pub use counting::{count_resonances, CountSettings, CountingSeries};
pub use fit::{concave_envelope_slope, fit_exponent_linear, mollified_local};
pub use strip::{strip_convert, Direction, StripSpec};
