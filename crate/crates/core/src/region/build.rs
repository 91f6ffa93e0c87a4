use crate::channel::{
    classify_link, first_violation, third, ChannelConfig, MixedAssignment, USERS,
};
use crate::error::{Error, Result};

use super::polytope::{HalfSpace, RatePolytope};

/// `0.5 * log2(1 + x)`: capacity of a real AWGN channel at SNR `x`, in bits.
#[inline]
pub fn half_log2(x: f64) -> f64 {
    0.5 * (1.0 + x).log2()
}

fn mask_label(mask: u8) -> String {
    let users: Vec<String> = (0..USERS)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| (i + 1).to_string())
        .collect();
    users.join(",")
}

fn terms_label(mask: u8) -> String {
    let users: Vec<String> = (0..USERS)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| format!("R{}", i + 1))
        .collect();
    users.join("+")
}

/// Capacity region of the multiple-access channel from `set` to `rx`: one
/// bound per nonempty subset `T` of `set`,
/// `sum_{i in T} R_i <= 0.5 log2(1 + sum_{i in T} h[i][rx]^2 P[i])`.
///
/// Rates of users outside `set` are left free, so the result is a cylinder
/// unless `set` covers every user. Subsets are emitted by size, then in
/// increasing order.
pub fn mac_region(cfg: &ChannelConfig, set: &[usize], rx: usize) -> Result<RatePolytope> {
    if rx >= USERS {
        return Err(Error::IndexOutOfRange(rx));
    }
    let mut full = 0u8;
    for &i in set {
        if i >= USERS {
            return Err(Error::IndexOutOfRange(i));
        }
        full |= 1 << i;
    }
    if full == 0 {
        return Err(Error::EmptySet);
    }

    let mut subsets: Vec<u8> = (1u8..8).filter(|t| t & !full == 0).collect();
    subsets.sort_by_key(|t| (t.count_ones(), *t));

    let name = format!("MAC({{{}}},{})", mask_label(full), rx + 1);
    let halfspaces = subsets
        .into_iter()
        .map(|t| {
            let snr: f64 = (0..USERS)
                .filter(|i| t >> i & 1 == 1)
                .map(|i| cfg.snr(i, rx))
                .sum();
            let label = if t == full && full.count_ones() > 1 {
                "sum".to_string()
            } else {
                terms_label(t)
            };
            HalfSpace::from_mask(t, half_log2(snr), format!("{name} {label}"))
        })
        .collect();
    Ok(RatePolytope::new(halfspaces))
}

fn pair(a: usize, b: usize) -> [usize; 2] {
    [a.min(b), a.max(b)]
}

fn single_user(cfg: &ChannelConfig, i: usize) -> HalfSpace {
    HalfSpace::from_mask(
        1 << i,
        half_log2(cfg.snr(i, i)),
        format!("single-user {}", i + 1),
    )
}

/// Genie-aided outer bound valid for every channel: the three single-user
/// bounds, plus `(R_i, R_j)` in `MAC({i,j}, j)` for every strong link `i -> j`.
pub fn lemma1_outer_bound(cfg: &ChannelConfig) -> RatePolytope {
    let mut poly = RatePolytope::new((0..USERS).map(|i| single_user(cfg, i)).collect());
    for rx in 0..USERS {
        for tx in (0..USERS).filter(|&t| t != rx) {
            let link = classify_link(cfg, tx, rx, third(tx, rx)).expect("valid link");
            if link.is_strong() {
                poly.extend(mac_region(cfg, &pair(tx, rx), rx).expect("valid pair"));
            }
        }
    }
    poly
}

/// Outer bound when every cross link is strong: all six pairwise MAC regions.
pub fn strong_outer_bound(cfg: &ChannelConfig) -> Result<RatePolytope> {
    let mut poly = RatePolytope::default();
    for rx in 0..USERS {
        for tx in (0..USERS).filter(|&t| t != rx) {
            let link = classify_link(cfg, tx, rx, third(tx, rx))?;
            if !link.is_strong() {
                return Err(Error::Precondition(format!(
                    "link {}->{} is not strong (margin {:.6})",
                    tx + 1,
                    rx + 1,
                    link.strong_margin
                )));
            }
            poly.extend(mac_region(cfg, &pair(tx, rx), rx)?);
        }
    }
    Ok(poly)
}

/// The three MAC regions `(R_j, R_{j2})` in `MAC({j, j2}, j)` without
/// checking whether they characterize capacity.
pub fn mixed_mac_region(cfg: &ChannelConfig, asg: &MixedAssignment) -> RatePolytope {
    let mut poly = RatePolytope::default();
    for rx in 0..USERS {
        poly.extend(mac_region(cfg, &pair(rx, asg.strong(rx)), rx).expect("valid pair"));
    }
    poly
}

/// Capacity region under mixed strong/very strong interference. Refuses when
/// `asg` does not satisfy the hypotheses for `cfg`.
pub fn theorem_capacity_region(cfg: &ChannelConfig, asg: &MixedAssignment) -> Result<RatePolytope> {
    if let Some((rx, why)) = first_violation(cfg, asg) {
        return Err(Error::HypothesesNotSatisfied(format!(
            "receiver {}: {why}",
            rx + 1
        )));
    }
    Ok(mixed_mac_region(cfg, asg))
}

/// Rate of the very strong interferer `j1` decodable at `rx` while treating
/// the two other signals as noise.
pub fn tin_bound(cfg: &ChannelConfig, asg: &MixedAssignment, rx: usize) -> f64 {
    let j1 = asg.very_strong(rx);
    let j2 = asg.strong(rx);
    half_log2(cfg.snr(j1, rx) / (1.0 + cfg.snr(rx, rx) + cfg.snr(j2, rx)))
}

/// Constraints of the successive-decoding scheme, unsimplified: three
/// treat-interference-as-noise bounds followed by the nine MAC bounds.
/// Valid for any role split, whatever the channel regime.
pub fn scheme_inner_constraints(cfg: &ChannelConfig, asg: &MixedAssignment) -> RatePolytope {
    let mut poly = RatePolytope::default();
    for rx in 0..USERS {
        let j1 = asg.very_strong(rx);
        poly.push(HalfSpace::from_mask(
            1 << j1,
            tin_bound(cfg, asg, rx),
            format!("TIN receiver {} R{}", rx + 1, j1 + 1),
        ));
    }
    poly.extend(mixed_mac_region(cfg, asg));
    poly
}

/// Indices (into `lemma1_outer_bound(cfg)`) of the constraints of the MAC
/// regions `MAC({j1, j}, j)` that the mixed regime makes redundant.
pub fn dropped_constraint_indices(outer: &RatePolytope, asg: &MixedAssignment) -> Vec<usize> {
    let names: Vec<String> = (0..USERS)
        .map(|rx| {
            let [a, b] = pair(rx, asg.very_strong(rx));
            format!("MAC({{{},{}}},{}) ", a + 1, b + 1, rx + 1)
        })
        .collect();
    outer
        .halfspaces
        .iter()
        .enumerate()
        .filter(|(_, h)| names.iter().any(|n| h.tag().starts_with(n.as_str())))
        .map(|(k, _)| k)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::figure2;
    use crate::region::GEOM_TOL;

    // 0.5 * log2 of 6, 7.05, 12.05, 1 + 80/12.05 and 11.5125, evaluated at
    // 30 digits with mpmath.
    const SINGLE: f64 = 1.292_481_250_360_578;
    const CROSS: f64 = 1.408_811_628_755_715_6;
    const SUM: f64 = 1.795_480_620_671_299_6;
    const TIN: f64 = 1.466_692_287_559_972_4;
    const CEX_SUM: f64 = 1.762_564_625_601_986_6;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12
    }

    fn bounds(p: &RatePolytope) -> Vec<(String, f64)> {
        p.halfspaces
            .iter()
            .map(|h| (h.tag().to_string(), h.bound()))
            .collect()
    }

    #[test]
    fn figure2_mac_region() {
        let p = mac_region(&figure2::config(), &[0, 1], 0).unwrap();
        let b = bounds(&p);
        assert_eq!(b.len(), 3);
        assert_eq!(b[0].0, "MAC({1,2},1) R1");
        assert_eq!(b[1].0, "MAC({1,2},1) R2");
        assert_eq!(b[2].0, "MAC({1,2},1) sum");
        assert!(close(b[0].1, SINGLE));
        assert!(close(b[1].1, CROSS));
        assert!(close(b[2].1, SUM));
        // Cylinder: R3 is free.
        assert!(!p.is_bounded());
    }

    #[test]
    fn mac_region_edge_cases() {
        let cfg = figure2::config();
        let p = mac_region(&cfg, &[1], 1).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.halfspaces[0].coefficients(), [0, 1, 0]);
        assert!(close(p.halfspaces[0].bound(), SINGLE));

        let full = mac_region(&cfg, &[2, 0, 1], 0).unwrap();
        assert_eq!(full.len(), 7);
        assert_eq!(full.halfspaces[6].tag(), "MAC({1,2,3},1) sum");
        assert_eq!(full.halfspaces[3].tag(), "MAC({1,2,3},1) R1+R2");
        assert!(close(
            full.halfspaces[6].bound(),
            half_log2(5.0 + 6.05 + 80.0)
        ));

        assert_eq!(mac_region(&cfg, &[], 0), Err(Error::EmptySet));
        assert_eq!(mac_region(&cfg, &[3], 0), Err(Error::IndexOutOfRange(3)));

        let silent = ChannelConfig::with_common_power(*cfg.gains(), 0.0).unwrap();
        let z = mac_region(&silent, &[0, 1, 2], 2).unwrap();
        assert!(z.halfspaces.iter().all(|h| h.bound() == 0.0));
        assert_eq!(z.vertices().unwrap(), vec![[0.0; 3]]);
    }

    #[test]
    fn lemma1_on_figure2() {
        let p = lemma1_outer_bound(&figure2::config());
        assert_eq!(p.len(), 3 + 6 * 3);
        let sum_of = |tag: &str| {
            p.halfspaces
                .iter()
                .find(|h| h.tag() == tag)
                .unwrap()
                .bound()
        };
        // Strong-interferer MAC sums sit at 0.5 log2(12.05); the very strong ones
        // at 0.5 log2(86), since e.g. h[1][2] = 4.
        for tag in ["MAC({1,2},1) sum", "MAC({2,3},2) sum", "MAC({1,3},3) sum"] {
            assert!(close(sum_of(tag), SUM), "{tag}");
        }
        for tag in ["MAC({1,2},2) sum", "MAC({2,3},3) sum", "MAC({1,3},1) sum"] {
            assert!(close(sum_of(tag), half_log2(85.0)), "{tag}");
        }
    }

    #[test]
    fn lemma1_weak_channel_is_a_box() {
        let mut h = [[0.1; 3]; 3];
        for (i, row) in h.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        let p = lemma1_outer_bound(&ChannelConfig::with_common_power(h, 5.0).unwrap());
        assert_eq!(p.len(), 3);
        assert!(p
            .halfspaces
            .iter()
            .all(|h| h.tag().starts_with("single-user")));
        assert!(strong_outer_bound(&ChannelConfig::with_common_power(h, 5.0).unwrap()).is_err());
    }

    #[test]
    fn strong_outer_matches_lemma1_on_figure2() {
        let cfg = figure2::config();
        let s = strong_outer_bound(&cfg).unwrap();
        assert_eq!(s.len(), 18);
        assert!(s.equals(&lemma1_outer_bound(&cfg), GEOM_TOL).unwrap());
    }

    #[test]
    fn theorem_region_on_figure2() {
        let cfg = figure2::config();
        let asg = figure2::assignment();
        let p = theorem_capacity_region(&cfg, &asg).unwrap();
        assert_eq!(p.len(), 9);
        let v = p.vertices().unwrap();
        let max_single = v.iter().flat_map(|x| x.iter().copied()).fold(0.0, f64::max);
        assert!(close(max_single, SINGLE));
        for x in &v {
            for (a, b) in [(0, 1), (1, 2), (0, 2)] {
                assert!(x[a] + x[b] <= SUM + GEOM_TOL);
            }
        }
        let sym = SUM / 2.0;
        assert!(v.iter().any(|x| x.iter().all(|&c| (c - sym).abs() <= 1e-9)));
        let best = v.iter().map(|x| x.iter().sum::<f64>()).fold(0.0, f64::max);
        assert!((best - 1.5 * SUM).abs() <= 1e-9);
    }

    #[test]
    fn theorem_region_refuses_outside_regime() {
        let cex = figure2::counterexample();
        let err = theorem_capacity_region(&cex, &figure2::assignment()).unwrap_err();
        assert!(matches!(err, Error::HypothesesNotSatisfied(_)));
    }

    #[test]
    fn scheme_constraints_on_figure2() {
        let cfg = figure2::config();
        let asg = figure2::assignment();
        let p = scheme_inner_constraints(&cfg, &asg);
        assert_eq!(p.len(), 12);
        assert_eq!(p.halfspaces[0].tag(), "TIN receiver 1 R3");
        assert_eq!(p.halfspaces[0].coefficients(), [0, 0, 1]);
        for h in &p.halfspaces[..3] {
            assert!(close(h.bound(), TIN));
        }
        let thm = theorem_capacity_region(&cfg, &asg).unwrap();
        assert!(p.equals(&thm, GEOM_TOL).unwrap());
        for k in 0..3 {
            assert!(p.is_redundant(k).unwrap());
        }
    }

    #[test]
    fn dropped_bounds_are_redundant_on_figure2() {
        let cfg = figure2::config();
        let outer = lemma1_outer_bound(&cfg);
        let dropped = dropped_constraint_indices(&outer, &figure2::assignment());
        assert_eq!(dropped.len(), 9);
        for k in dropped {
            assert!(outer.is_redundant(k).unwrap(), "{}", outer.halfspaces[k]);
        }
    }

    #[test]
    fn counterexample_sum_bound_is_binding() {
        let cex = figure2::counterexample();
        let outer = lemma1_outer_bound(&cex);
        let k = outer
            .halfspaces
            .iter()
            .position(|h| h.tag() == "MAC({1,3},1) sum")
            .unwrap();
        assert!(close(outer.halfspaces[k].bound(), CEX_SUM));
        assert!(!outer.is_redundant(k).unwrap());
        let retained = outer.without(k).max_lhs([1, 0, 1]).unwrap().unwrap();
        assert!((retained - SUM).abs() <= 1e-9);
        assert!(!outer.without(k).equals(&outer, GEOM_TOL).unwrap());
    }

    #[test]
    fn membership_examples() {
        let p = theorem_capacity_region(&figure2::config(), &figure2::assignment()).unwrap();
        assert!(p.contains(&[0.25; 3], GEOM_TOL));
        assert!(p.contains(&[0.0; 3], 0.0));
        assert!(!p.contains(&[1.0; 3], GEOM_TOL));
        assert!(p.equals(&p, GEOM_TOL).unwrap());

        let cfg = figure2::config();
        let unit_box = RatePolytope::new((0..3).map(|i| single_user(&cfg, i)).collect());
        assert!(!p.equals(&unit_box, GEOM_TOL).unwrap());
        assert!(!p.contains(&[SINGLE; 3], GEOM_TOL));
    }
}
