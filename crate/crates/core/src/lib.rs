//! Resonances of convex co-compact hyperbolic surfaces via the Selberg zeta
//! function of a Schottky group.

pub mod error;
pub mod moebius;
pub mod scalar;
pub mod schottky;
pub mod symbolic;
pub mod pressure;
pub mod zeta;
pub mod rootfind;
pub mod analysis;
pub mod io;
pub mod cli;

pub use error::{Error, Result};

pub type Moebius = moebius::MoebiusTransform<f64>;
pub type Group = schottky::SchottkyGroup<f64>;
