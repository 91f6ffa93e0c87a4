//! The worked example: `P = 5`, unit direct gains, strong cross gains 1.1
//! (links 2->1, 3->2, 1->3) and very strong cross gains 4 (links 3->1, 1->2,
//! 2->3).

use serde::Serialize;

use crate::channel::{find_mixed_assignments, ChannelConfig, MixedAssignment, USERS};
use crate::error::Result;
use crate::region::{
    lemma1_outer_bound, scheme_inner_constraints, theorem_capacity_region, RatePolytope, Rates,
    GEOM_TOL,
};

pub const POWER: f64 = 5.0;
pub const STRONG_GAIN: f64 = 1.1;
pub const VERY_STRONG_GAIN: f64 = 4.0;

pub fn config() -> ChannelConfig {
    let (s, v) = (STRONG_GAIN, VERY_STRONG_GAIN);
    ChannelConfig::with_common_power([[1.0, v, s], [s, 1.0, v], [v, s, 1.0]], POWER)
        .expect("valid config")
}

/// [`config`] with `h[3][1]` lowered to 1.05: still strong, no longer very strong.
pub fn counterexample() -> ChannelConfig {
    config().with_gain(2, 0, 1.05).expect("valid config")
}

/// Receiver 1 decodes 3 first, receiver 2 decodes 1, receiver 3 decodes 2.
pub fn assignment() -> MixedAssignment {
    MixedAssignment::new([2, 0, 1]).expect("valid assignment")
}

#[derive(Debug, Clone, Serialize)]
pub struct Figure2Report {
    pub assignments: Vec<MixedAssignment>,
    pub capacity: RatePolytope,
    pub vertices: Vec<Rates>,
    /// Largest single rate over the capacity region.
    pub max_user_rate: f64,
    /// Largest `R_a + R_b` over the region, per pair (1,2), (2,3), (1,3).
    pub max_pair_sums: [f64; USERS],
    pub symmetric_vertex: Option<Rates>,
    pub inner_equals_capacity: bool,
    pub outer_equals_capacity: bool,
}

impl Figure2Report {
    pub fn verified(&self) -> bool {
        self.assignments.len() == 1 && self.inner_equals_capacity && self.outer_equals_capacity
    }
}

/// Computes everything shown for the example channel, end to end.
pub fn report() -> Result<Figure2Report> {
    report_for(&config())
}

pub fn report_for(cfg: &ChannelConfig) -> Result<Figure2Report> {
    let assignments = find_mixed_assignments(cfg);
    let asg = assignments.first().copied().unwrap_or_else(assignment);
    let capacity = theorem_capacity_region(cfg, &asg)?;
    let vertices = capacity.vertices()?;

    let max_user_rate = vertices.iter().flatten().copied().fold(0.0, f64::max);
    let max_pair_sums = [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
        .map(|a| capacity.max_lhs(a).ok().flatten().unwrap_or(0.0));
    let symmetric_vertex = vertices
        .iter()
        .filter(|v| (v[0] - v[1]).abs() <= GEOM_TOL && (v[1] - v[2]).abs() <= GEOM_TOL)
        .max_by(|a, b| a[0].total_cmp(&b[0]))
        .copied();

    let inner_equals_capacity = scheme_inner_constraints(cfg, &asg).equals(&capacity, GEOM_TOL)?;
    let outer_equals_capacity = lemma1_outer_bound(cfg).equals(&capacity, GEOM_TOL)?;

    Ok(Figure2Report {
        assignments,
        capacity,
        vertices,
        max_user_rate,
        max_pair_sums,
        symmetric_vertex,
        inner_equals_capacity,
        outer_equals_capacity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_is_consistent() {
        let r = report().unwrap();
        assert!(r.verified());
        assert_eq!(r.assignments, vec![assignment()]);
        let sym = r.symmetric_vertex.unwrap();
        assert!((sym[0] - 0.897_740_310_335_649_8).abs() < 1e-12);
        assert!((r.max_user_rate - 1.292_481_250_360_578).abs() < 1e-12);
        for s in r.max_pair_sums {
            assert!((s - 1.795_480_620_671_299_6).abs() < 1e-12);
        }
    }

    #[test]
    fn counterexample_has_no_report() {
        assert!(report_for(&counterexample()).is_err());
    }
}
