//! Channel model and interference-regime classification.
//!
//! Users are indexed `0..3` throughout the API. Transmitter `i` is paired with
//! receiver `i`; `h[i][j]` is the real gain from transmitter `i` to receiver
//! `j`. Noise at every receiver is `N(0, 1)`. Human-facing output (tags, CLI
//! documents) uses the 1-based numbering instead.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of users.
pub const USERS: usize = 3;

/// Relative tolerance applied to the (non-strict) regime inequalities.
pub const CONDITION_RTOL: f64 = 1e-9;

/// A validated 3-user Gaussian interference channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelConfig {
    h: [[f64; USERS]; USERS],
    power: [f64; USERS],
}

impl ChannelConfig {
    pub fn new(h: [[f64; USERS]; USERS], power: [f64; USERS]) -> Result<Self> {
        for (i, row) in h.iter().enumerate() {
            for (j, &g) in row.iter().enumerate() {
                if !g.is_finite() {
                    return Err(Error::InvalidConfig(format!(
                        "h[{}][{}] is not finite",
                        i + 1,
                        j + 1
                    )));
                }
            }
            if row[i] == 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "direct gain h[{0}][{0}] must be nonzero",
                    i + 1
                )));
            }
        }
        for (i, &p) in power.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "power P[{}] = {p} must be finite and nonnegative",
                    i + 1
                )));
            }
        }
        Ok(Self { h, power })
    }

    /// Same power `p` at every transmitter.
    pub fn with_common_power(h: [[f64; USERS]; USERS], p: f64) -> Result<Self> {
        Self::new(h, [p; USERS])
    }

    /// Gain from transmitter `tx` to receiver `rx`.
    #[inline]
    pub fn gain(&self, tx: usize, rx: usize) -> f64 {
        self.h[tx][rx]
    }

    /// Received signal power `h[tx][rx]^2 * P[tx]` (noise is unit variance).
    #[inline]
    pub fn snr(&self, tx: usize, rx: usize) -> f64 {
        self.h[tx][rx] * self.h[tx][rx] * self.power[tx]
    }

    #[inline]
    pub fn power(&self, tx: usize) -> f64 {
        self.power[tx]
    }

    pub fn gains(&self) -> &[[f64; USERS]; USERS] {
        &self.h
    }

    pub fn powers(&self) -> &[f64; USERS] {
        &self.power
    }

    pub fn noise_var(&self) -> f64 {
        1.0
    }

    /// Returns a copy with gain `h[tx][rx]` replaced.
    pub fn with_gain(&self, tx: usize, rx: usize, gain: f64) -> Result<Self> {
        let mut h = self.h;
        h[tx][rx] = gain;
        Self::new(h, self.power)
    }

    /// `h -> h / sqrt(c)`, `P -> c P`. Every regime condition and every rate
    /// bound is invariant under this map.
    pub fn rescaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "scale factor {c} must be positive"
            )));
        }
        let s = c.sqrt();
        let h = self.h.map(|row| row.map(|g| g / s));
        Self::new(h, self.power.map(|p| p * c))
    }
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    h: Vec<Vec<f64>>,
    #[serde(rename = "P", default, skip_serializing_if = "Option::is_none")]
    per_user: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    power: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    noise_var: Option<f64>,
}

/// Parses a JSON channel-config document.
///
/// Fields: `h` (3 arrays of 3 numbers, transmitter-major), either `P`
/// (3 numbers) or `power` (one number used for every transmitter), and an
/// optional `noise_var` that must be exactly 1.0. Unknown fields are rejected.
pub fn parse_config(text: &str) -> Result<ChannelConfig> {
    let doc: ConfigDoc = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;

    if let Some(nv) = doc.noise_var {
        if nv != 1.0 {
            return Err(Error::UnsupportedNormalization(nv));
        }
    }

    if doc.h.len() != USERS || doc.h.iter().any(|row| row.len() != USERS) {
        return Err(Error::InvalidConfig("h must be a 3x3 array".into()));
    }
    let mut h = [[0.0; USERS]; USERS];
    for (dst, src) in h.iter_mut().zip(&doc.h) {
        dst.copy_from_slice(src);
    }

    let power = match (doc.per_user, doc.power) {
        (Some(_), Some(_)) => {
            return Err(Error::Malformed(
                "give either `P` or `power`, not both".into(),
            ))
        }
        (None, None) => return Err(Error::Malformed("missing `P` or `power`".into())),
        (None, Some(p)) => [p; USERS],
        (Some(v), None) => {
            if v.len() != USERS {
                return Err(Error::InvalidConfig("P must have 3 entries".into()));
            }
            [v[0], v[1], v[2]]
        }
    };

    ChannelConfig::new(h, power)
}

impl Serialize for ChannelConfig {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ConfigDoc {
            h: self.h.iter().map(|r| r.to_vec()).collect(),
            per_user: Some(self.power.to_vec()),
            power: None,
            noise_var: Some(1.0),
        }
        .serialize(s)
    }
}

/// Serializes a config in the document format accepted by [`parse_config`].
pub fn config_to_json(cfg: &ChannelConfig) -> String {
    serde_json::to_string_pretty(cfg).expect("config document serializes")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Interference {
    NotStrong,
    Strong,
    VeryStrong,
}

impl fmt::Display for Interference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Interference::NotStrong => "not strong",
            Interference::Strong => "strong",
            Interference::VeryStrong => "very strong",
        })
    }
}

/// Classification of one interfering link together with the signed slack of
/// both defining inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkRegime {
    pub kind: Interference,
    /// `h[i][j]^2 - h[i][i]^2`
    pub strong_margin: f64,
    /// `h[i][j]^2 - h[i][i]^2 (1 + h[j][j]^2 P[j] + h[o][j]^2 P[o])`
    pub very_strong_margin: f64,
}

impl LinkRegime {
    /// Slack of the inequality that defines the reported class.
    pub fn margin(&self) -> f64 {
        match self.kind {
            Interference::VeryStrong => self.very_strong_margin,
            _ => self.strong_margin,
        }
    }

    pub fn is_strong(&self) -> bool {
        self.kind >= Interference::Strong
    }

    pub fn is_very_strong(&self) -> bool {
        self.kind == Interference::VeryStrong
    }
}

#[inline]
fn holds(lhs: f64, rhs: f64) -> bool {
    lhs - rhs >= -CONDITION_RTOL * lhs.abs().max(rhs.abs())
}

fn check_user(k: usize) -> Result<()> {
    if k < USERS {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange(k))
    }
}

/// Classifies the link from transmitter `tx` to receiver `rx`, where `other`
/// is the remaining transmitter heard at `rx`.
pub fn classify_link(
    cfg: &ChannelConfig,
    tx: usize,
    rx: usize,
    other: usize,
) -> Result<LinkRegime> {
    check_user(tx)?;
    check_user(rx)?;
    check_user(other)?;
    if tx == rx {
        return Err(Error::InvalidLink(format!(
            "transmitter {} is the desired one at receiver {}",
            tx + 1,
            rx + 1
        )));
    }
    if other == tx || other == rx {
        return Err(Error::InvalidLink(format!(
            "other transmitter {} must differ from {} and {}",
            other + 1,
            tx + 1,
            rx + 1
        )));
    }

    let cross = cfg.gain(tx, rx).powi(2);
    let direct = cfg.gain(tx, tx).powi(2);
    let threshold = direct * (1.0 + cfg.snr(rx, rx) + cfg.snr(other, rx));

    let strong = holds(cross, direct);
    let very_strong = holds(cross, threshold);
    debug_assert!(
        !very_strong || strong,
        "very strong link must also be strong"
    );

    let kind = if very_strong && strong {
        Interference::VeryStrong
    } else if strong {
        Interference::Strong
    } else {
        Interference::NotStrong
    };
    Ok(LinkRegime {
        kind,
        strong_margin: cross - direct,
        very_strong_margin: cross - threshold,
    })
}

/// The remaining user once `a` and `b` are fixed.
#[inline]
pub fn third(a: usize, b: usize) -> usize {
    debug_assert!(a != b && a < USERS && b < USERS);
    USERS - a - b
}

/// Classification of all six cross links, indexed `[tx][rx]`; the diagonal is `None`.
pub fn classify_all(cfg: &ChannelConfig) -> [[Option<LinkRegime>; USERS]; USERS] {
    let mut out = [[None; USERS]; USERS];
    for (tx, row) in out.iter_mut().enumerate() {
        for (rx, slot) in row.iter_mut().enumerate() {
            if tx != rx {
                *slot = Some(classify_link(cfg, tx, rx, third(tx, rx)).expect("valid indices"));
            }
        }
    }
    out
}

/// Interferer roles at every receiver: `very_strong[j]` is the transmitter
/// that receiver `j` decodes first; the strong interferer is the remaining one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MixedAssignment {
    very_strong: [usize; USERS],
}

impl MixedAssignment {
    pub fn new(very_strong: [usize; USERS]) -> Result<Self> {
        for (rx, &j1) in very_strong.iter().enumerate() {
            if j1 >= USERS || j1 == rx {
                return Err(Error::InvalidAssignment(format!(
                    "receiver {} cannot treat transmitter {} as its very strong interferer",
                    rx + 1,
                    j1 + 1
                )));
            }
        }
        Ok(Self { very_strong })
    }

    /// Very strong interferer `j1` at receiver `rx`.
    #[inline]
    pub fn very_strong(&self, rx: usize) -> usize {
        self.very_strong[rx]
    }

    /// Strong interferer `j2` at receiver `rx`.
    #[inline]
    pub fn strong(&self, rx: usize) -> usize {
        third(rx, self.very_strong[rx])
    }

    pub fn very_strong_all(&self) -> [usize; USERS] {
        self.very_strong
    }

    /// Every role split, in lexicographic order of `very_strong_all()`.
    pub fn all() -> Vec<MixedAssignment> {
        let others = |rx: usize| (0..USERS).filter(move |&t| t != rx);
        let mut out = Vec::with_capacity(8);
        for a in others(0) {
            for b in others(1) {
                for c in others(2) {
                    out.push(MixedAssignment {
                        very_strong: [a, b, c],
                    });
                }
            }
        }
        out
    }
}

impl fmt::Display for MixedAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for rx in 0..USERS {
            if rx > 0 {
                f.write_str("/")?;
            }
            write!(f, "({},{})", self.very_strong(rx) + 1, self.strong(rx) + 1)?;
        }
        Ok(())
    }
}

/// Serialized as one `{receiver, very_strong, strong}` entry per receiver, 1-based.
impl Serialize for MixedAssignment {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(USERS))?;
        for rx in 0..USERS {
            seq.serialize_element(&RoleView {
                receiver: rx + 1,
                very_strong: self.very_strong(rx) + 1,
                strong: self.strong(rx) + 1,
            })?;
        }
        seq.end()
    }
}

#[derive(Serialize)]
struct RoleView {
    receiver: usize,
    very_strong: usize,
    strong: usize,
}

/// First receiver at which `asg` fails the mixed strong/very strong conditions.
pub fn first_violation(cfg: &ChannelConfig, asg: &MixedAssignment) -> Option<(usize, String)> {
    for rx in 0..USERS {
        let j1 = asg.very_strong(rx);
        let j2 = asg.strong(rx);
        let vs = classify_link(cfg, j1, rx, j2).expect("valid assignment");
        if !vs.is_very_strong() {
            return Some((
                rx,
                format!(
                    "link {}->{} is not very strong (margin {:.6})",
                    j1 + 1,
                    rx + 1,
                    vs.very_strong_margin
                ),
            ));
        }
        let s = classify_link(cfg, j2, rx, j1).expect("valid assignment");
        if !s.is_strong() {
            return Some((
                rx,
                format!(
                    "link {}->{} is not strong (margin {:.6})",
                    j2 + 1,
                    rx + 1,
                    s.strong_margin
                ),
            ));
        }
    }
    None
}

pub fn satisfies_hypotheses(cfg: &ChannelConfig, asg: &MixedAssignment) -> bool {
    first_violation(cfg, asg).is_none()
}

/// Every role split under which all receivers see one very strong and one
/// strong interferer, sorted lexicographically.
pub fn find_mixed_assignments(cfg: &ChannelConfig) -> Vec<MixedAssignment> {
    MixedAssignment::all()
        .into_iter()
        .filter(|asg| satisfies_hypotheses(cfg, asg))
        .collect()
}

/// Effective noise variance of the observation a genie-aided `decoder`
/// synthesizes for the signal of `helped`'s transmitter `k = helped`:
/// `(h[k][k] / h[k][decoder])^2`. At most 1 exactly when `k -> decoder` is strong.
pub fn less_noisy_margin(cfg: &ChannelConfig, decoder: usize, helped: usize) -> Result<f64> {
    check_user(decoder)?;
    check_user(helped)?;
    if decoder == helped {
        return Err(Error::InvalidLink(
            "decoder and helped receiver coincide".into(),
        ));
    }
    let k = helped;
    let cross = cfg.gain(k, decoder);
    if cross == 0.0 {
        return Err(Error::ZeroCrossGain {
            tx: k + 1,
            rx: decoder + 1,
        });
    }
    Ok((cfg.gain(k, k) / cross).powi(2))
}
