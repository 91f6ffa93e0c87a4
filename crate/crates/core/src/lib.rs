//! Rate regions for three-user Gaussian interference networks.
//!
//! * [`channel`]: configurations, strong / very strong link classification,
//!   and the search for mixed strong/very strong role splits.
//! * [`region`]: every rate region as a half-space polytope, with vertex
//!   enumeration, membership, redundancy and equality tests.
//! * [`sim`]: Monte Carlo random coding of the successive-decoding scheme.
//! * [`sampling`], [`figure2`], [`export`]: seeded channel sampling, the
//!   worked example, and the JSON documents.
//!
//! Users are 0-based in the API and 1-based in tags and documents.

#![forbid(unsafe_code)]

pub mod channel;
pub mod error;
pub mod export;
pub mod figure2;
pub mod region;
pub mod sampling;
pub mod sim;

pub use channel::{
    classify_link, find_mixed_assignments, less_noisy_margin, parse_config, ChannelConfig,
    Interference, LinkRegime, MixedAssignment, USERS,
};
pub use error::{Error, Result};
pub use region::{HalfSpace, RatePolytope, Rates, GEOM_TOL};
pub use sampling::{sample_configs, SampleMode, SampledConfig};
pub use sim::{estimate_error_rate, predicted_achievable, SimParams, SimReport};
