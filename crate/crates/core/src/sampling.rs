//! Deterministic random channels inside or just outside the mixed
//! strong/very strong regime.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::{ChannelConfig, MixedAssignment, USERS};

pub const DIAG_RANGE: (f64, f64) = (0.5, 2.0);
pub const POWER_RANGE: (f64, f64) = (0.5, 20.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    /// Every receiver gets a very strong and a strong interferer.
    Satisfy,
    /// As `Satisfy`, then one very strong gain is pulled down into the strong band.
    Violate,
}

impl FromStr for SampleMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "satisfy" => Ok(SampleMode::Satisfy),
            "violate" => Ok(SampleMode::Violate),
            other => Err(format!(
                "unknown sample mode `{other}` (expected satisfy or violate)"
            )),
        }
    }
}

/// A sampled channel and the role split it was built around.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledConfig {
    pub cfg: ChannelConfig,
    pub asg: MixedAssignment,
    /// Receiver whose very strong gain was lowered (`Violate` only).
    pub violated: Option<usize>,
}

fn uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    rng.random_range(lo..=hi)
}

/// Draws `count` channels. Direct gains come from [`DIAG_RANGE`], powers
/// (per transmitter) from [`POWER_RANGE`]. The strong gain at receiver `j`
/// is `(1+u)|h[j2][j2]|` and the very strong gain is
/// `(1+u) sqrt(h[j1][j1]^2 (1 + h[j][j]^2 P[j] + h[j2][j]^2 P[j2]))`, with
/// fresh `u ~ U[0, 1]` each time. In `Violate` mode one receiver's very
/// strong gain is then replaced by `(1 + 0.1u)|h[j1][j1]|`, which stays
/// strong but falls below the very strong threshold (that threshold is at
/// least `1.118 |h[j1][j1]|` over these ranges).
pub fn sample_configs(mode: SampleMode, count: usize, seed: u64) -> Vec<SampledConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| sample_one(mode, &mut rng)).collect()
}

#[allow(clippy::needless_range_loop)]
fn sample_one(mode: SampleMode, rng: &mut ChaCha8Rng) -> SampledConfig {
    let diag: [f64; USERS] = std::array::from_fn(|_| uniform(rng, DIAG_RANGE));
    let power: [f64; USERS] = std::array::from_fn(|_| uniform(rng, POWER_RANGE));
    let very_strong: [usize; USERS] = std::array::from_fn(|rx| {
        let others = [(rx + 1) % USERS, (rx + 2) % USERS];
        others[usize::from(rng.random_bool(0.5))]
    });
    let asg = MixedAssignment::new(very_strong).expect("j1 differs from receiver");

    let mut h = [[0.0; USERS]; USERS];
    for (i, d) in diag.iter().enumerate() {
        h[i][i] = *d;
    }
    for rx in 0..USERS {
        let j2 = asg.strong(rx);
        h[j2][rx] = (1.0 + rng.random::<f64>()) * diag[j2];
    }
    for rx in 0..USERS {
        let j1 = asg.very_strong(rx);
        let j2 = asg.strong(rx);
        let load = 1.0 + diag[rx].powi(2) * power[rx] + h[j2][rx].powi(2) * power[j2];
        h[j1][rx] = (1.0 + rng.random::<f64>()) * (diag[j1].powi(2) * load).sqrt();
    }

    let violated = match mode {
        SampleMode::Satisfy => None,
        SampleMode::Violate => {
            let rx = rng.random_range(0..USERS);
            let j1 = asg.very_strong(rx);
            h[j1][rx] = (1.0 + 0.1 * rng.random::<f64>()) * diag[j1];
            Some(rx)
        }
    };

    let cfg = ChannelConfig::new(h, power).expect("sampled gains are finite and nonzero");
    SampledConfig { cfg, asg, violated }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{classify_link, find_mixed_assignments, satisfies_hypotheses};

    #[test]
    fn satisfy_mode_is_in_regime() {
        for s in sample_configs(SampleMode::Satisfy, 300, 1) {
            assert!(satisfies_hypotheses(&s.cfg, &s.asg));
            assert!(find_mixed_assignments(&s.cfg).contains(&s.asg));
            assert_eq!(s.violated, None);
        }
    }

    #[test]
    fn violate_mode_breaks_a_very_strong_link() {
        for s in sample_configs(SampleMode::Violate, 300, 2) {
            assert!(!satisfies_hypotheses(&s.cfg, &s.asg));
            let rx = s.violated.unwrap();
            let j1 = s.asg.very_strong(rx);
            let link = classify_link(&s.cfg, j1, rx, s.asg.strong(rx)).unwrap();
            assert!(link.is_strong() && !link.is_very_strong());
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        for mode in [SampleMode::Satisfy, SampleMode::Violate] {
            assert_eq!(sample_configs(mode, 20, 9), sample_configs(mode, 20, 9));
        }
        assert_ne!(
            sample_configs(SampleMode::Satisfy, 5, 1),
            sample_configs(SampleMode::Satisfy, 5, 2)
        );
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("satisfy".parse::<SampleMode>(), Ok(SampleMode::Satisfy));
        assert_eq!("violate".parse::<SampleMode>(), Ok(SampleMode::Violate));
        assert!("both".parse::<SampleMode>().is_err());
    }
}
