//! Spectral operators for fast-rotating fluids: spherical-harmonic transforms,
//! tangent-field calculus on the sphere, shell operators, a rotating barotropic
//! solver and a rotating MHD solver on the periodic box.

pub mod error;
pub mod real;
pub mod spharm;
pub mod sphere_ops;
pub mod sphere_solver;
pub mod shell;
pub mod mhd;
mod chebyshev;
mod linalg;
mod expquad;

pub use error::{Result, RotwaveError};
pub use real::Real;
pub use rustfft::num_complex::Complex;

pub type GaussGrid64 = spharm::GaussGrid<f64>;
pub type SpectralScalar64 = spharm::SpectralScalar<f64>;
pub type GridScalar64 = spharm::GridScalar<f64>;
pub type TangentField64 = sphere_ops::TangentField<f64>;
pub type GridTangent64 = sphere_ops::GridTangent<f64>;
pub type ShellGeometry64 = shell::ShellGeometry<f64>;
pub type ShellField64 = shell::ShellField<f64>;
