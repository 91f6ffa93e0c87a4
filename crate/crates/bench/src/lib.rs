//! Shared inputs for the criterion benches.

use mixedic::{sample_configs, SampleMode, SampledConfig};

/// A fixed batch of in-regime channels.
pub fn satisfy_batch(count: usize) -> Vec<SampledConfig> {
    sample_configs(SampleMode::Satisfy, count, 0x5eed)
}
