//! Downlink SNR modelling for a ground base station with a 2D active antenna
//! array serving a single airborne line-of-sight user.
//!
//! The crate is organised bottom-up:
//!
//! - [`array_model`]: element pattern, steering/weight entries, per-port array
//!   factor and the composite port pattern.
//! - [`link_channel`]: link geometry, linear angular gain, free-space path gain
//!   and the per-port channel coefficients.
//! - [`snr_engine`]: downlink SNR from the channel vector and from the closed
//!   form with the elevation beam kernel.
//! - [`dimensioning`]: minimum antenna ports for a target SNR and the inverse
//!   maximum-range search.
//! - [`sweep`]: grid evaluation, figure presets and CSV/JSON emission.
//!
//! All numeric code is generic over [`Real`] (`f32` or `f64`). The aliases at
//! the crate root fix the scalar to `f64`, which is what the sweep engine and
//! the CLI use.

pub mod array_model;
pub mod dimensioning;
pub mod error;
pub mod link_channel;
pub mod scalar;
pub mod snr_engine;
pub mod sweep;

pub use array_model::WeightNorm;
pub use error::{Error, Result};
pub use scalar::Real;

/// Speed of light in vacuum, m/s (exact SI value).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub type ArrayConfig = array_model::ArrayConfig<f64>;
pub type ArrayConfigF32 = array_model::ArrayConfig<f32>;
pub type LinkGeometry = link_channel::LinkGeometry<f64>;
pub type LinkGeometryF32 = link_channel::LinkGeometry<f32>;
pub type RadioConfig = link_channel::RadioConfig<f64>;
pub type RadioConfigF32 = link_channel::RadioConfig<f32>;
pub type NoiseSpec = link_channel::NoiseSpec<f64>;
pub type SnrQuery = snr_engine::SnrQuery<f64>;
pub type SnrQueryF32 = snr_engine::SnrQuery<f32>;
pub type SnrSample = snr_engine::SnrSample<f64>;
pub type DimensioningQuery = dimensioning::DimensioningQuery<f64>;
pub type DimensioningResult = dimensioning::DimensioningResult<f64>;
pub type MaxRange = dimensioning::MaxRange<f64>;
pub type Complex = num_complex::Complex<f64>;
