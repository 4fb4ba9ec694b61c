//! Sweep driver, property suite and output emission for the rotwave solvers.

pub mod config;
pub mod emit;
pub mod error;
pub mod fit;
pub mod identities;
pub mod sweep;
pub mod verify;

pub use config::{load_config, parse_config, Experiment, SweepConfig};
pub use error::{HarnessError, Result};
pub use fit::{fit_slope, Fit};
pub use sweep::{run_sweep, SweepResult};
