//! Biphoton polarization qutrits: state algebra, the optical filter model,
//! the twelve mutually unbiased states, nine-setting tomography and its
//! statistics.
//!
//! Geometry is generic over [`Real`] (`f32` or `f64`). Count simulation,
//! likelihood fitting and Monte Carlo quantiles run in `f64`.

pub mod analysis;
pub mod bench;
pub mod error;
pub mod linalg;
pub mod majorana;
pub mod mub;
pub mod sampling;
pub mod scalar;
pub mod state;
pub mod tomography;

pub use error::{Error, Result};
pub use scalar::{Real, C};
pub use state::{DensityMatrix3, PreparationConfig, QutritState};

pub type QutritStateF64 = state::QutritState<f64>;
pub type QutritStateF32 = state::QutritState<f32>;
pub type DensityMatrixF64 = state::DensityMatrix3<f64>;
pub type DensityMatrixF32 = state::DensityMatrix3<f32>;
pub type Matrix3F64 = linalg::Matrix3<f64>;
pub type Matrix2F64 = linalg::Matrix2<f64>;
pub type FilterSettingsF64 = bench::FilterSettings<f64>;
pub type PhotonPairF64 = majorana::PhotonPair<f64>;
pub type EigenSystemF64 = analysis::EigenSystem3<f64>;
