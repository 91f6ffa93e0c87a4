//! Monte Carlo random-coding check of the successive-decoding scheme.
//!
//! Every transmitter draws an i.i.d. `N(0, P_i)` codebook. Receiver `j`
//! decodes its very strong interferer `j1` by minimum distance against the raw
//! received word (everything else acts as noise), subtracts its reconstructed
//! contribution, then jointly decodes its own codeword and that of the strong
//! interferer `j2` by minimum distance over all pairs.
//!
//! Codebooks are redrawn for every trial. Trial `t` is driven entirely by a
//! seed derived from `(master_seed, t)`, so reports do not depend on how
//! trials are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{ChannelConfig, MixedAssignment, USERS};
use crate::error::{Error, Result};
use crate::region::{scheme_inner_constraints, Rates};

/// Upper limit on `log2` of the joint search size `M_j * M_j2` at a receiver.
pub const JOINT_SEARCH_BITS: f64 = 24.0;

const MESSAGE_STREAM: u64 = USERS as u64;
const NOISE_STREAM: u64 = MESSAGE_STREAM + 1;

#[derive(Debug, Clone, PartialEq)]
pub struct SimParams {
    /// Block length in channel uses.
    pub n: usize,
    /// Requested rates in bits per channel use.
    pub rates: Rates,
    pub trials: u64,
    pub master_seed: u64,
}

impl SimParams {
    /// Checks the parameters and the joint-search budget for `asg`.
    pub fn validate(&self, asg: &MixedAssignment) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParams("block length must be positive".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParams("trial count must be positive".into()));
        }
        if let Some(r) = self.rates.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
            return Err(Error::InvalidParams(format!(
                "rate {r} must be finite and nonnegative"
            )));
        }
        for rx in 0..USERS {
            let bits = self.n as f64 * (self.rates[rx] + self.rates[asg.strong(rx)]);
            if bits > JOINT_SEARCH_BITS {
                return Err(Error::JointSearchBudget {
                    receiver: rx + 1,
                    bits,
                    limit: JOINT_SEARCH_BITS,
                });
            }
        }
        Ok(())
    }

    /// `M_i = floor(2^(n R_i))`.
    pub fn codebook_sizes(&self) -> [usize; USERS] {
        self.rates
            .map(|r| ((self.n as f64 * r).exp2().floor() as usize).max(1))
    }

    /// `log2(M_i) / n`, never above the requested rate.
    pub fn realized_rates(&self) -> Rates {
        self.codebook_sizes()
            .map(|m| (m as f64).log2() / self.n as f64)
    }
}

/// `M` codewords of length `n`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    n: usize,
    words: Vec<f64>,
}

impl Codebook {
    pub fn generate<R: Rng + ?Sized>(size: usize, n: usize, power: f64, rng: &mut R) -> Self {
        let sd = power.sqrt();
        let words = (0..size * n)
            .map(|_| sd * Distribution::<f64>::sample(&StandardNormal, rng))
            .collect::<Vec<f64>>();
        Self { n, words }
    }

    pub fn len(&self) -> usize {
        self.words.len().checked_div(self.n).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn block_length(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn word(&self, m: usize) -> &[f64] {
        &self.words[m * self.n..(m + 1) * self.n]
    }

    pub fn words(&self) -> impl Iterator<Item = &[f64]> {
        self.words.chunks_exact(self.n)
    }
}

/// One codebook per transmitter.
#[derive(Debug, Clone, PartialEq)]
pub struct CodebookSet {
    pub books: [Codebook; USERS],
}

impl CodebookSet {
    /// Draws transmitter `i`'s codebook from stream `i` of the trial's generator.
    pub fn generate(cfg: &ChannelConfig, sizes: [usize; USERS], n: usize, trial_seed: u64) -> Self {
        let books = std::array::from_fn(|tx| {
            let mut rng = stream(trial_seed, tx as u64);
            Codebook::generate(sizes[tx], n, cfg.power(tx), &mut rng)
        });
        Self { books }
    }
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Seed of trial `t`: the `t`-th output of a SplitMix64 sequence started at
/// `master_seed`.
pub fn trial_seed(master_seed: u64, t: u64) -> u64 {
    let mut z = master_seed.wrapping_add(t.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ReceiverOutcome {
    /// Very strong interferer decoded correctly.
    pub stage1_ok: bool,
    pub own_ok: bool,
    /// Strong interferer decoded correctly in the joint stage.
    pub strong_ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct TrialOutcome {
    pub receivers: [ReceiverOutcome; USERS],
}

impl TrialOutcome {
    /// Some receiver lost its own message.
    pub fn block_error(&self) -> bool {
        self.receivers.iter().any(|r| !r.own_ok)
    }
}

#[inline]
fn sq_dist(y: &[f64], gain: f64, x: &[f64]) -> f64 {
    y.iter()
        .zip(x)
        .map(|(a, b)| (a - gain * b) * (a - gain * b))
        .sum()
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn argmin(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::INFINITY);
    for (k, v) in values.enumerate() {
        if v < best.1 {
            best = (k, v);
        }
    }
    best.0
}

/// Minimum-distance joint decoding of `own_gain * a + other_gain * b` against `r`.
fn joint_decode(
    r: &[f64],
    own: &Codebook,
    own_gain: f64,
    other: &Codebook,
    other_gain: f64,
) -> (usize, usize) {
    // |r - g a - k b|^2 = |r|^2 + (g^2|a|^2 - 2g<r,a>) + (k^2|b|^2 - 2k<r,b>) + 2gk<a,b>
    let alpha: Vec<f64> = own
        .words()
        .map(|a| own_gain * own_gain * dot(a, a) - 2.0 * own_gain * dot(r, a))
        .collect();
    let beta: Vec<f64> = other
        .words()
        .map(|b| other_gain * other_gain * dot(b, b) - 2.0 * other_gain * dot(r, b))
        .collect();
    let cross = 2.0 * own_gain * other_gain;

    let mut best = (0, 0, f64::INFINITY);
    for (ia, a) in own.words().enumerate() {
        for (ib, b) in other.words().enumerate() {
            let d = alpha[ia] + beta[ib] + cross * dot(a, b);
            if d < best.2 {
                best = (ia, ib, d);
            }
        }
    }
    (best.0, best.1)
}

/// Runs one block through the channel and both decoding stages at every
/// receiver. Messages and noise come from `trial_seed`; codebooks are given.
pub fn run_trial(
    cfg: &ChannelConfig,
    asg: &MixedAssignment,
    books: &CodebookSet,
    trial_seed: u64,
) -> Result<TrialOutcome> {
    let n = books.books[0].block_length();
    if books
        .books
        .iter()
        .any(|b| b.block_length() != n || b.is_empty())
    {
        return Err(Error::InvalidParams(
            "codebooks must be nonempty with a common block length".into(),
        ));
    }
    for rx in 0..USERS {
        let pairs = books.books[rx].len() as f64 * books.books[asg.strong(rx)].len() as f64;
        let bits = pairs.log2();
        if bits > JOINT_SEARCH_BITS {
            return Err(Error::JointSearchBudget {
                receiver: rx + 1,
                bits,
                limit: JOINT_SEARCH_BITS,
            });
        }
    }

    let mut rng = stream(trial_seed, MESSAGE_STREAM);
    let messages: [usize; USERS] =
        std::array::from_fn(|tx| rng.random_range(0..books.books[tx].len()));

    let mut outcome = TrialOutcome::default();
    let mut y = vec![0.0; n];
    let mut residual = vec![0.0; n];
    for rx in 0..USERS {
        let mut noise = stream(trial_seed, NOISE_STREAM + rx as u64);
        for (t, yt) in y.iter_mut().enumerate() {
            let z: f64 = StandardNormal.sample(&mut noise);
            *yt = z
                + (0..USERS)
                    .map(|tx| cfg.gain(tx, rx) * books.books[tx].word(messages[tx])[t])
                    .sum::<f64>();
        }

        let j1 = asg.very_strong(rx);
        let j2 = asg.strong(rx);
        let g1 = cfg.gain(j1, rx);
        let vs_book = &books.books[j1];
        let first = argmin(vs_book.words().map(|x| sq_dist(&y, g1, x)));

        for ((r, yt), xt) in residual.iter_mut().zip(&y).zip(vs_book.word(first)) {
            *r = yt - g1 * xt;
        }
        let (own, strong) = joint_decode(
            &residual,
            &books.books[rx],
            cfg.gain(rx, rx),
            &books.books[j2],
            cfg.gain(j2, rx),
        );

        outcome.receivers[rx] = ReceiverOutcome {
            stage1_ok: first == messages[j1],
            own_ok: own == messages[rx],
            strong_ok: strong == messages[j2],
        };
    }
    Ok(outcome)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ReceiverStats {
    /// Very strong interferer misdecoded.
    pub stage1_errors: u64,
    /// Own or strong-interferer message misdecoded in the joint stage.
    pub stage2_errors: u64,
    /// Own message misdecoded.
    pub own_errors: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub n: usize,
    pub rates: Rates,
    pub realized_rates: Rates,
    pub trials: u64,
    pub receivers: [ReceiverStats; USERS],
    /// Trials in which some receiver lost its own message.
    pub block_errors: u64,
    pub block_error_rate: f64,
    pub master_seed: u64,
}

impl SimReport {
    fn from_counts(params: &SimParams, counts: Counts) -> Self {
        Self {
            n: params.n,
            rates: params.rates,
            realized_rates: params.realized_rates(),
            trials: params.trials,
            receivers: counts.receivers,
            block_errors: counts.block_errors,
            block_error_rate: counts.block_errors as f64 / params.trials as f64,
            master_seed: params.master_seed,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Counts {
    receivers: [ReceiverStats; USERS],
    block_errors: u64,
}

impl Counts {
    fn of(outcome: &TrialOutcome) -> Self {
        let mut c = Counts::default();
        for (s, o) in c.receivers.iter_mut().zip(&outcome.receivers) {
            s.stage1_errors = u64::from(!o.stage1_ok);
            s.stage2_errors = u64::from(!(o.own_ok && o.strong_ok));
            s.own_errors = u64::from(!o.own_ok);
        }
        c.block_errors = u64::from(outcome.block_error());
        c
    }

    fn merge(mut self, other: Counts) -> Counts {
        for (a, b) in self.receivers.iter_mut().zip(&other.receivers) {
            a.stage1_errors += b.stage1_errors;
            a.stage2_errors += b.stage2_errors;
            a.own_errors += b.own_errors;
        }
        self.block_errors += other.block_errors;
        self
    }
}

/// Runs `params.trials` independent trials in parallel and aggregates them.
pub fn estimate_error_rate(
    cfg: &ChannelConfig,
    asg: &MixedAssignment,
    params: &SimParams,
) -> Result<SimReport> {
    params.validate(asg)?;
    let sizes = params.codebook_sizes();
    let counts = (0..params.trials)
        .into_par_iter()
        .map(|t| {
            let seed = trial_seed(params.master_seed, t);
            let books = CodebookSet::generate(cfg, sizes, params.n, seed);
            run_trial(cfg, asg, &books, seed).map(|o| Counts::of(&o))
        })
        .try_reduce(Counts::default, |a, b| Ok(a.merge(b)))?;
    Ok(SimReport::from_counts(params, counts))
}

/// Slack of each of the twelve scheme constraints at `rates`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prediction {
    /// `(tag, b - a . R)` in the order of `scheme_inner_constraints`.
    pub slacks: Vec<(String, f64)>,
    pub nonnegative: bool,
    pub achievable: bool,
}

/// Evaluates the treat-as-noise and MAC constraints of the scheme at `rates`.
/// Negative rates are never achievable.
pub fn predicted_achievable(
    cfg: &ChannelConfig,
    asg: &MixedAssignment,
    rates: &Rates,
) -> Prediction {
    let poly = scheme_inner_constraints(cfg, asg);
    let slacks: Vec<(String, f64)> = poly
        .halfspaces
        .iter()
        .map(|h| (h.tag().to_string(), h.slack(rates)))
        .collect();
    let nonnegative = rates.iter().all(|&r| r >= 0.0);
    let achievable = nonnegative && slacks.iter().all(|(_, s)| *s >= 0.0);
    Prediction {
        slacks,
        nonnegative,
        achievable,
    }
}
