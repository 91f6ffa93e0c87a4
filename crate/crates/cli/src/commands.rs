use std::fs;

use serde::Serialize;

use mixedic::channel::{
    classify_all, find_mixed_assignments, first_violation, satisfies_hypotheses,
};
use mixedic::export::{to_json, RegionDoc};
use mixedic::region::{
    dropped_constraint_indices, lemma1_outer_bound, mac_region, mixed_mac_region,
    scheme_inner_constraints, strong_outer_bound, theorem_capacity_region,
    verify_theorem_reduction, ReductionReport, GEOM_TOL,
};
use mixedic::sim::{estimate_error_rate, SimParams};
use mixedic::{
    figure2, parse_config, sample_configs, ChannelConfig, Error, LinkRegime, MixedAssignment,
    Result, SampleMode, USERS,
};

use crate::{ChannelArgs, Command, Mode, Which};

pub struct Output {
    pub document: String,
    pub verified: bool,
}

fn ok(document: String) -> Output {
    Output {
        document,
        verified: true,
    }
}

pub fn run(cmd: Command) -> Result<Output> {
    match cmd {
        Command::Classify { channel } => classify(&channel),
        Command::Region {
            which,
            channel,
            vertices,
            set,
            receiver,
        } => region(which, &channel, vertices, set, receiver),
        Command::Verify {
            mode,
            channel,
            samples,
            seed,
            sample_mode,
        } => verify(mode, &channel, samples, seed, sample_mode),
        Command::Simulate {
            channel,
            rates,
            n,
            trials,
            seed,
        } => simulate(&channel, &rates, n, trials, seed),
        Command::Figure2 => {
            let report = figure2::report()?;
            Ok(Output {
                verified: report.verified(),
                document: to_json(&report),
            })
        }
    }
}

fn load_config(args: &ChannelArgs) -> Result<ChannelConfig> {
    match &args.config {
        None => Ok(figure2::config()),
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
            parse_config(&text)
        }
    }
}

fn user_index(i: usize) -> Result<usize> {
    if (1..=USERS).contains(&i) {
        Ok(i - 1)
    } else {
        Err(Error::InvalidParams(format!(
            "user index {i} is not in 1..={USERS}"
        )))
    }
}

fn triple<T: Copy>(flag: &str, v: &[T]) -> Result<[T; USERS]> {
    <[T; USERS]>::try_from(v).map_err(|_| {
        Error::InvalidParams(format!(
            "--{flag} needs {USERS} comma-separated values, got {}",
            v.len()
        ))
    })
}

fn explicit_assignment(args: &ChannelArgs) -> Result<Option<MixedAssignment>> {
    let Some(v) = &args.assignment else {
        return Ok(None);
    };
    let v = triple("assignment", v)?;
    let vs = [user_index(v[0])?, user_index(v[1])?, user_index(v[2])?];
    MixedAssignment::new(vs).map(Some)
}

/// The `--assignment` flag, else the first role split meeting the hypotheses.
fn resolve_assignment(cfg: &ChannelConfig, args: &ChannelArgs) -> Result<MixedAssignment> {
    if let Some(asg) = explicit_assignment(args)? {
        return Ok(asg);
    }
    find_mixed_assignments(cfg).into_iter().next().ok_or_else(|| {
        Error::HypothesesNotSatisfied(
            "no role split satisfies the mixed strong/very strong conditions; pass --assignment".into(),
        )
    })
}

#[derive(Serialize)]
struct LinkRow {
    tx: usize,
    rx: usize,
    #[serde(flatten)]
    regime: LinkRegime,
}

#[derive(Serialize)]
struct ClassifyDoc {
    links: Vec<LinkRow>,
    assignments: Vec<MixedAssignment>,
}

fn classify(args: &ChannelArgs) -> Result<Output> {
    let cfg = load_config(args)?;
    let links = classify_all(&cfg)
        .iter()
        .enumerate()
        .flat_map(|(tx, row)| {
            row.iter().enumerate().filter_map(move |(rx, l)| {
                l.map(|regime| LinkRow {
                    tx: tx + 1,
                    rx: rx + 1,
                    regime,
                })
            })
        })
        .collect();
    let doc = ClassifyDoc {
        links,
        assignments: find_mixed_assignments(&cfg),
    };
    Ok(ok(to_json(&doc)))
}

fn region(
    which: Which,
    args: &ChannelArgs,
    with_vertices: bool,
    set: Option<Vec<usize>>,
    receiver: Option<usize>,
) -> Result<Output> {
    if which != Which::Mac && (set.is_some() || receiver.is_some()) {
        return Err(Error::InvalidParams(
            "--set and --receiver apply only to --which mac".into(),
        ));
    }
    let cfg = load_config(args)?;
    let poly = match which {
        Which::Mac => {
            let (Some(set), Some(rx)) = (set, receiver) else {
                return Err(Error::InvalidParams(
                    "--which mac needs --set and --receiver".into(),
                ));
            };
            let set = set
                .into_iter()
                .map(user_index)
                .collect::<Result<Vec<_>>>()?;
            mac_region(&cfg, &set, user_index(rx)?)?
        }
        Which::Outer => lemma1_outer_bound(&cfg),
        Which::StrongOuter => strong_outer_bound(&cfg)?,
        Which::Capacity => {
            let asg = resolve_assignment(&cfg, args)?;
            theorem_capacity_region(&cfg, &asg)?
        }
        Which::Inner => scheme_inner_constraints(&cfg, &resolve_assignment(&cfg, args)?),
    };
    Ok(ok(to_json(&RegionDoc::new(&poly, with_vertices)?)))
}

#[derive(Serialize)]
struct ConstraintVerdict {
    tag: String,
    redundant: bool,
    claimed_redundant: bool,
}

#[derive(Serialize)]
struct RedundancyDoc {
    assignment: MixedAssignment,
    hypotheses_hold: bool,
    constraints: Vec<ConstraintVerdict>,
    claims_hold: bool,
}

#[derive(Serialize)]
struct EqualityDoc {
    assignment: MixedAssignment,
    hypotheses_hold: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation: Option<String>,
    outer_equals_capacity: bool,
    inner_equals_capacity: bool,
}

#[derive(Serialize)]
#[serde(untagged)]
enum Check {
    Redundancy(RedundancyDoc),
    Theorem(EqualityDoc),
    AppendixB(ReductionReport),
}

impl Check {
    /// Claims are only made under the hypotheses, so only then can they fail.
    fn verified(&self) -> bool {
        match self {
            Check::Redundancy(d) => !d.hypotheses_hold || d.claims_hold,
            Check::Theorem(d) => {
                !d.hypotheses_hold || (d.outer_equals_capacity && d.inner_equals_capacity)
            }
            Check::AppendixB(r) => !r.hypotheses_hold || r.all_hold,
        }
    }
}

fn check(mode: Mode, cfg: &ChannelConfig, asg: &MixedAssignment) -> Result<Check> {
    let hypotheses_hold = satisfies_hypotheses(cfg, asg);
    Ok(match mode {
        Mode::Redundancy => {
            let outer = lemma1_outer_bound(cfg);
            let claimed = dropped_constraint_indices(&outer, asg);
            let constraints = (0..outer.len())
                .map(|k| {
                    Ok(ConstraintVerdict {
                        tag: outer.halfspaces[k].tag().to_string(),
                        redundant: outer.is_redundant(k)?,
                        claimed_redundant: claimed.contains(&k),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let claims_hold = constraints
                .iter()
                .all(|c| !c.claimed_redundant || c.redundant);
            Check::Redundancy(RedundancyDoc {
                assignment: *asg,
                hypotheses_hold,
                constraints,
                claims_hold,
            })
        }
        Mode::Theorem => {
            let capacity = mixed_mac_region(cfg, asg);
            Check::Theorem(EqualityDoc {
                assignment: *asg,
                hypotheses_hold,
                violation: first_violation(cfg, asg).map(|(_, msg)| msg),
                outer_equals_capacity: lemma1_outer_bound(cfg).equals(&capacity, GEOM_TOL)?,
                inner_equals_capacity: scheme_inner_constraints(cfg, asg)
                    .equals(&capacity, GEOM_TOL)?,
            })
        }
        Mode::AppendixB => Check::AppendixB(verify_theorem_reduction(cfg, asg)),
    })
}

#[derive(Serialize)]
struct SampleEntry {
    index: usize,
    config: ChannelConfig,
    /// 1-based receiver whose very strong link was broken, if any.
    violated_receiver: Option<usize>,
    verified: bool,
    report: Check,
}

#[derive(Serialize)]
struct SampleSweepDoc {
    sample_mode: &'static str,
    samples: usize,
    seed: u64,
    failures: usize,
    results: Vec<SampleEntry>,
}

fn verify(
    mode: Mode,
    args: &ChannelArgs,
    samples: Option<usize>,
    seed: u64,
    sample_mode: SampleMode,
) -> Result<Output> {
    let Some(count) = samples else {
        let cfg = load_config(args)?;
        let asg = resolve_assignment(&cfg, args)?;
        let report = check(mode, &cfg, &asg)?;
        return Ok(Output {
            verified: report.verified(),
            document: to_json(&report),
        });
    };

    if args.config.is_some() || args.assignment.is_some() {
        return Err(Error::InvalidParams(
            "--samples cannot be combined with --config or --assignment".into(),
        ));
    }
    if count == 0 {
        return Err(Error::InvalidParams("--samples must be at least 1".into()));
    }
    let results = sample_configs(sample_mode, count, seed)
        .into_iter()
        .enumerate()
        .map(|(index, s)| {
            let report = check(mode, &s.cfg, &s.asg)?;
            Ok(SampleEntry {
                index,
                config: s.cfg,
                violated_receiver: s.violated.map(|rx| rx + 1),
                verified: report.verified(),
                report,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let failures = results.iter().filter(|r| !r.verified).count();
    let doc = SampleSweepDoc {
        sample_mode: match sample_mode {
            SampleMode::Satisfy => "satisfy",
            SampleMode::Violate => "violate",
        },
        samples: count,
        seed,
        failures,
        results,
    };
    Ok(Output {
        verified: failures == 0,
        document: to_json(&doc),
    })
}

fn simulate(args: &ChannelArgs, rates: &[f64], n: usize, trials: u64, seed: u64) -> Result<Output> {
    let cfg = load_config(args)?;
    let asg = resolve_assignment(&cfg, args)?;
    let params = SimParams {
        n,
        rates: triple("rates", rates)?,
        trials,
        master_seed: seed,
    };
    Ok(ok(to_json(&estimate_error_rate(&cfg, &asg, &params)?)))
}
