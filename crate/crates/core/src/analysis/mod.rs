//! Spectra, fidelities and Monte Carlo quantiles.

pub mod eigen;
pub mod fidelity;
pub mod quantiles;

pub use eigen::{eigendecompose, eigendecompose_matrix, eigenvalues, EigenSystem3};
pub use fidelity::{fidelity, principal_component, purity};
pub use quantiles::{fidelity_quantiles, fidelity_trials, quantile, summarize, FidelityQuantiles, MIN_TRIALS};
