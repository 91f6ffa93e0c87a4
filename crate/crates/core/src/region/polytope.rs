use std::fmt;

use serde::{Deserialize, Serialize};

use crate::channel::USERS;
use crate::error::{Error, Result};

/// Absolute tolerance for geometric comparisons (bits per channel use).
pub const GEOM_TOL: f64 = 1e-9;

pub type Rates = [f64; USERS];

/// `sum_{i : a[i] = 1} R_i <= b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawHalfSpace")]
pub struct HalfSpace {
    a: [u8; USERS],
    b: f64,
    tag: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHalfSpace {
    a: [u8; USERS],
    b: f64,
    tag: String,
}

impl TryFrom<RawHalfSpace> for HalfSpace {
    type Error = Error;

    fn try_from(raw: RawHalfSpace) -> Result<Self> {
        HalfSpace::new(raw.a, raw.b, raw.tag)
    }
}

impl HalfSpace {
    pub fn new(a: [u8; USERS], b: f64, tag: impl Into<String>) -> Result<Self> {
        if a.iter().any(|&c| c > 1) {
            return Err(Error::InvalidHalfSpace(format!(
                "coefficients {a:?} must be 0 or 1"
            )));
        }
        if a == [0; USERS] {
            return Err(Error::InvalidHalfSpace("coefficient vector is zero".into()));
        }
        if !b.is_finite() {
            return Err(Error::InvalidHalfSpace(format!("bound {b} is not finite")));
        }
        Ok(Self {
            a,
            b,
            tag: tag.into(),
        })
    }

    /// Builds the constraint on the users in `mask` (bit `i` set for user `i`).
    pub(crate) fn from_mask(mask: u8, b: f64, tag: String) -> Self {
        let a = [mask & 1, (mask >> 1) & 1, (mask >> 2) & 1];
        Self::new(a, b, tag).expect("nonzero mask and finite bound")
    }

    pub fn coefficients(&self) -> [u8; USERS] {
        self.a
    }

    pub fn bound(&self) -> f64 {
        self.b
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    #[inline]
    pub fn involves(&self, user: usize) -> bool {
        self.a[user] == 1
    }

    /// `a . r`, summed in user order.
    #[inline]
    pub fn lhs(&self, r: &Rates) -> f64 {
        let mut s = 0.0;
        for (c, x) in self.a.iter().zip(r) {
            if *c == 1 {
                s += x;
            }
        }
        s
    }

    /// `b - a . r`; nonnegative iff the point satisfies the constraint.
    #[inline]
    pub fn slack(&self, r: &Rates) -> f64 {
        self.b - self.lhs(r)
    }
}

impl fmt::Display for HalfSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = (0..USERS)
            .filter(|&i| self.a[i] == 1)
            .map(|i| format!("R{}", i + 1))
            .collect();
        write!(f, "{} <= {:.6}  [{}]", terms.join(" + "), self.b, self.tag)
    }
}

/// Intersection of half-spaces with the nonnegative orthant of rate space.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RatePolytope {
    pub halfspaces: Vec<HalfSpace>,
}

impl RatePolytope {
    pub fn new(halfspaces: Vec<HalfSpace>) -> Self {
        Self { halfspaces }
    }

    pub fn len(&self) -> usize {
        self.halfspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.halfspaces.is_empty()
    }

    pub fn push(&mut self, hs: HalfSpace) {
        self.halfspaces.push(hs);
    }

    pub fn extend(&mut self, other: RatePolytope) {
        self.halfspaces.extend(other.halfspaces);
    }

    /// Copy with constraint `k` removed.
    pub fn without(&self, k: usize) -> RatePolytope {
        let mut halfspaces = self.halfspaces.clone();
        halfspaces.remove(k);
        RatePolytope { halfspaces }
    }

    /// With nonnegative coefficients and `R >= 0`, a rate is bounded iff some
    /// half-space involves it.
    pub fn is_bounded(&self) -> bool {
        self.unbounded_user().is_none()
    }

    fn unbounded_user(&self) -> Option<usize> {
        (0..USERS).find(|&i| !self.halfspaces.iter().any(|h| h.involves(i)))
    }

    fn ensure_bounded(&self) -> Result<()> {
        match self.unbounded_user() {
            Some(i) => Err(Error::Unbounded(i + 1)),
            None => Ok(()),
        }
    }

    /// `r >= -tol` componentwise and `a . r <= b + tol` for every half-space.
    pub fn contains(&self, r: &Rates, tol: f64) -> bool {
        r.iter().all(|&x| x >= -tol) && self.halfspaces.iter().all(|h| h.lhs(r) <= h.b + tol)
    }

    /// Exact vertex set, deduplicated at [`GEOM_TOL`] and sorted
    /// lexicographically. Empty when the polytope is empty.
    ///
    /// Every triple of constraint planes (the nonnegativity facets included)
    /// is intersected; coefficients are integers, so singular triples are
    /// detected exactly by a zero determinant.
    pub fn vertices(&self) -> Result<Vec<Rates>> {
        self.ensure_bounded()?;

        let mut planes: Vec<([f64; USERS], f64)> = self
            .halfspaces
            .iter()
            .map(|h| (h.a.map(f64::from), h.b))
            .collect();
        for i in 0..USERS {
            let mut a = [0.0; USERS];
            a[i] = -1.0;
            planes.push((a, 0.0));
        }

        let mut out: Vec<Rates> = Vec::new();
        let m = planes.len();
        for p in 0..m {
            for q in p + 1..m {
                for s in q + 1..m {
                    let Some(x) = solve3(&planes[p], &planes[q], &planes[s]) else {
                        continue;
                    };
                    let feasible = planes
                        .iter()
                        .all(|(a, b)| a[0] * x[0] + a[1] * x[1] + a[2] * x[2] <= b + GEOM_TOL);
                    if !feasible {
                        continue;
                    }
                    let x = x.map(|v| if v <= 0.0 { 0.0 } else { v });
                    if !out.iter().any(|v| dist(v, &x) <= GEOM_TOL) {
                        out.push(x);
                    }
                }
            }
        }
        out.sort_by(|u, v| {
            u.iter()
                .zip(v)
                .map(|(a, b)| a.total_cmp(b))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        Ok(out)
    }

    /// Largest value of `a . r` over the polytope, or `None` when it is empty.
    pub fn max_lhs(&self, a: [u8; USERS]) -> Result<Option<f64>> {
        let probe = HalfSpace {
            a,
            b: 0.0,
            tag: String::new(),
        };
        Ok(self
            .vertices()?
            .iter()
            .map(|v| probe.lhs(v))
            .reduce(f64::max))
    }

    /// Whether constraint `k` can be dropped without changing the polytope:
    /// the maximum of `a_k . r` over the remaining constraints is at most
    /// `b_k` (within [`GEOM_TOL`]). If removing `k` leaves some rate
    /// unbounded, the constraint is not redundant.
    pub fn is_redundant(&self, k: usize) -> Result<bool> {
        let hs = self.halfspaces.get(k).ok_or(Error::IndexOutOfRange(k))?;
        let reduced = self.without(k);
        if !reduced.is_bounded() {
            return Ok(false);
        }
        Ok(match reduced.max_lhs(hs.a)? {
            Some(max) => max <= hs.b + GEOM_TOL,
            None => true,
        })
    }

    /// Set equality via mutual vertex containment.
    pub fn equals(&self, other: &RatePolytope, tol: f64) -> Result<bool> {
        let mine = self.vertices()?;
        let theirs = other.vertices()?;
        Ok(mine.iter().all(|v| other.contains(v, tol))
            && theirs.iter().all(|v| self.contains(v, tol)))
    }
}

#[inline]
fn dist(u: &Rates, v: &Rates) -> f64 {
    u.iter()
        .zip(v)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

#[inline]
fn det3(r0: &[f64; 3], r1: &[f64; 3], r2: &[f64; 3]) -> f64 {
    r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0])
        + r0[2] * (r1[0] * r2[1] - r1[1] * r2[0])
}

/// Cramer's rule on three planes with integer coefficients.
fn solve3(p: &([f64; 3], f64), q: &([f64; 3], f64), s: &([f64; 3], f64)) -> Option<Rates> {
    let d = det3(&p.0, &q.0, &s.0);
    if d == 0.0 {
        return None;
    }
    let mut x = [0.0; 3];
    for (col, xi) in x.iter_mut().enumerate() {
        let sub = |row: &([f64; 3], f64)| {
            let mut r = row.0;
            r[col] = row.1;
            r
        };
        *xi = det3(&sub(p), &sub(q), &sub(s)) / d;
    }
    Some(x)
}
