//! Nine-setting tomography: protocol, count simulation and reconstruction.

pub mod counts;
pub mod mle;
pub mod protocol;

pub use counts::{exposure_for_events, simulate_counts, simulate_counts_with, CountRecord, SimulationOptions};
pub use mle::{log_likelihood, mle_fit, mle_reconstruct, mle_reconstruct_with, project_to_physical, MleFit, MleOptions};
pub use protocol::{
    expected_rates, expected_rates_with, linear_inversion, moments_from_rates, protocol, protocol_condition_number,
    protocol_matrix, rho_from_moments, MomentSet, ProtocolRow,
};
