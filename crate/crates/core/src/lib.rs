//! Gamma-weight random polymer: exact finite-size identities, Fredholm
//! determinant representations and the Tracy–Widom limit, cross-checked
//! numerically.
//!
//! The numeric core is generic over [`Real`] (`f32` or `f64`). The aliases at
//! the crate root fix `f64`, which is what the CLI and the experiments use.

pub mod asymptotics;
pub mod error;
pub mod fredholm;
pub mod grsk;
pub mod polymer;
pub mod rmt;
pub mod rng;
pub mod scalar;
pub mod specfn;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::{Cplx, Real};

/// Library version embedded in run summaries.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type Complex64 = Cplx<f64>;
pub type PolymerInstance = polymer::PolymerInstance<f64>;
pub type Grid = polymer::Grid<f64>;
pub type GrskImage = grsk::GrskImage<f64>;
pub type HermitianMatrix = rmt::HermitianMatrix<f64>;
pub type AsymptoticConstants = asymptotics::AsymptoticConstants<f64>;
pub type ParameterSet = fredholm::ParameterSet<f64>;
pub type Contour = fredholm::Contour<f64>;
pub type QuadratureRule = fredholm::QuadratureRule<f64>;
pub type EmpiricalSample = stats::EmpiricalSample<f64>;
