//! Monte Carlo experiments: effect frequencies by number of agents, by
//! completeness, and control frequencies over update orders.

mod output;

pub use output::{metadata_path, Cell, Dataset, FrequencyRow, Metadata, COMPLETENESS_HEADER, CONTROL_HEADER, EFFECTS_HEADER};

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{control_search_many, ControlReport, Effect, OrderSource};
use crate::consensus::{ConsensusNotion, OutcomeVector};
use crate::dynamics::{run_in_place, OrderSpace, Pair, UpdateOrder};
use crate::error::{Error, Result};
use crate::gen::{random_profile, GenKind};
use crate::prefcore::{default_labels, Alternative, Preference, Profile};
use crate::rng::{child_rng, task_key};

/// Largest order space a control experiment will enumerate per profile.
pub const MAX_EXHAUSTIVE_ORDERS: u64 = 100_000_000;

/// Index of the alternative whose choosability the control experiment
/// reports.
pub const CHOOSE_TARGET: usize = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Effects,
    Completeness,
    Control,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderPolicy {
    Lexicographic,
    /// A prefix completed lexicographically.
    Fixed(Vec<Pair>),
    Exhaustive,
    Sampled(u64),
}

impl OrderPolicy {
    /// `lexicographic`, `fixed:<pairs>`, `exhaustive` or `sampled:<K>`.
    pub fn parse(text: &str, m: usize) -> Result<Self> {
        let bad = || Error::Config(format!("unknown order policy {text:?}"));
        match text.split_once(':') {
            None if text == "lexicographic" => Ok(OrderPolicy::Lexicographic),
            None if text == "exhaustive" => Ok(OrderPolicy::Exhaustive),
            Some(("fixed", pairs)) => {
                let prefix = UpdateOrder::parse_pairs(pairs, &default_labels(m))?;
                UpdateOrder::complete(m, &prefix)?;
                Ok(OrderPolicy::Fixed(prefix))
            }
            Some(("sampled", k)) => k.parse().map(OrderPolicy::Sampled).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }

    pub fn describe(&self, m: usize) -> String {
        match self {
            OrderPolicy::Lexicographic => "lexicographic".into(),
            OrderPolicy::Fixed(prefix) => format!(
                "fixed:{}",
                UpdateOrder::complete(m, prefix).map(|o| o.render(&default_labels(m))).unwrap_or_default()
            ),
            OrderPolicy::Exhaustive => "exhaustive".into(),
            OrderPolicy::Sampled(k) => format!("sampled:{k}"),
        }
    }

    fn fixed_order(&self, m: usize) -> Result<Option<UpdateOrder>> {
        match self {
            OrderPolicy::Lexicographic => UpdateOrder::complete(m, &[]).map(Some),
            OrderPolicy::Fixed(prefix) => UpdateOrder::complete(m, prefix).map(Some),
            _ => Ok(None),
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Experiment::Effects => "effects",
            Experiment::Completeness => "completeness",
            Experiment::Control => "control",
        })
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "effects" => Ok(Experiment::Effects),
            "completeness" => Ok(Experiment::Completeness),
            "control" => Ok(Experiment::Control),
            _ => Err(Error::Config(format!("unknown experiment {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub agent_counts: Vec<usize>,
    pub m: usize,
    /// Profiles per agent count.
    pub samples: u64,
    pub seed: u64,
    pub order_policy: OrderPolicy,
    pub notions: Vec<ConsensusNotion>,
    pub generator: GenKind,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl ExperimentConfig {
    pub fn defaults(experiment: Experiment) -> Self {
        let (agent_counts, m, samples, order_policy) = match experiment {
            Experiment::Effects => ((1..=25).step_by(2).collect(), 5, 50_000, OrderPolicy::Lexicographic),
            Experiment::Completeness => (vec![15], 5, 50_000, OrderPolicy::Lexicographic),
            Experiment::Control => (vec![11], 4, 500, OrderPolicy::Exhaustive),
        };
        ExperimentConfig {
            experiment,
            agent_counts,
            m,
            samples,
            seed: 0,
            order_policy,
            notions: ConsensusNotion::ALL.to_vec(),
            generator: GenKind::UniformPartialOrder,
            jobs: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.m < 3 {
            return fail(format!("experiments need at least 3 alternatives, got {}", self.m));
        }
        crate::prefcore::check_m(self.m)?;
        if self.samples == 0 {
            return fail("samples must be at least 1".into());
        }
        if self.samples > u32::MAX as u64 {
            return fail(format!("at most {} samples per cell", u32::MAX));
        }
        if self.agent_counts.is_empty() || self.agent_counts.contains(&0) {
            return fail("agent counts must be a nonempty list of positive numbers".into());
        }
        if self.notions.is_empty() {
            return fail("no consensus notions selected".into());
        }
        if self.experiment == Experiment::Completeness && self.agent_counts.len() != 1 {
            return fail("the completeness experiment uses a single agent count".into());
        }
        match (self.experiment, &self.order_policy) {
            (Experiment::Control, OrderPolicy::Exhaustive) => {
                let len = OrderSpace::new(self.m).map(|s| s.len()).unwrap_or(u64::MAX);
                if len > MAX_EXHAUSTIVE_ORDERS {
                    return fail(format!(
                        "{} alternatives give too many orders to enumerate; use sampled:<K>",
                        self.m
                    ));
                }
            }
            (Experiment::Control, OrderPolicy::Sampled(0)) => return fail("sampled:0 examines no orders".into()),
            (Experiment::Control, OrderPolicy::Sampled(_)) => {}
            (Experiment::Control, p) => {
                return fail(format!("control needs exhaustive or sampled orders, got {}", p.describe(self.m)))
            }
            (_, OrderPolicy::Lexicographic | OrderPolicy::Fixed(_)) => {}
            (e, p) => return fail(format!("{e} needs a single fixed order, got {}", p.describe(self.m))),
        }
        Ok(())
    }

    fn notion_mask(&self) -> [bool; 7] {
        let mut mask = [false; 7];
        for n in &self.notions {
            mask[n.index()] = true;
        }
        mask
    }
}

/// Runs `f` on a pool of `jobs` threads, or the global pool for `None`.
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| Error::Config(format!("thread pool: {e}"))),
    }
}

fn sample_profile(config: &ExperimentConfig, n: usize, index: u64) -> Result<Profile> {
    let mut rng = child_rng(config.seed, task_key(n as u32, index as u32));
    random_profile(config.generator, n, config.m, &mut rng)
}

/// `[notion][effect]` counts.
type EffectCounts = [[u64; 5]; 7];

fn add_counts(mut a: EffectCounts, b: EffectCounts) -> EffectCounts {
    for (x, y) in a.iter_mut().zip(b.iter()) {
        for (u, v) in x.iter_mut().zip(y.iter()) {
            *u += v;
        }
    }
    a
}

fn effects_of(profile: &Profile, order: &UpdateOrder, scratch: &mut Vec<Preference>) -> [Effect; 7] {
    let m = profile.m();
    let initial = OutcomeVector::of(m, profile.prefs());
    scratch.clear();
    scratch.extend_from_slice(profile.prefs());
    run_in_place(scratch, order.pairs());
    let fin = OutcomeVector::of(m, scratch);
    ConsensusNotion::ALL.map(|n| Effect::classify(initial.get(n), fin.get(n)))
}

fn effect_rows(counts: &[u64; 5], mut row: impl FnMut(&'static str, u64, u64)) {
    let [pi, peo, lost, generated, absent] = *counts;
    let with = pi + peo + lost;
    let without = generated + absent;
    row("preserved_existence", pi + peo, with);
    row("preserved_identity", pi, with);
    row("preserved_existence_only", peo, with);
    row("lost", lost, with);
    row("generated", generated, without);
    row("absence_preserved", absent, without);
}

/// Effect labels in row order.
pub const EFFECT_LABELS: [&str; 6] = [
    "preserved_existence",
    "preserved_identity",
    "preserved_existence_only",
    "lost",
    "generated",
    "absence_preserved",
];

/// Effect frequencies for each number of agents under one fixed order.
pub fn experiment_effects(config: &ExperimentConfig) -> Result<Dataset> {
    config.validate()?;
    let order = config.order_policy.fixed_order(config.m)?.expect("validated");
    let mask = config.notion_mask();
    let mut rows = Vec::new();
    let mut per_n = Vec::new();
    for &n in &config.agent_counts {
        let counts = with_jobs(config.jobs, || tally_effects(config, n, &order, |_| 0))??;
        per_n.push((n, counts[0]));
    }
    for notion in ConsensusNotion::ALL.into_iter().filter(|n| mask[n.index()]) {
        for (n, counts) in &per_n {
            effect_rows(&counts[notion.index()], |label, num, den| {
                rows.push(FrequencyRow::effects(notion, *n, config.m, config.samples, label, num, den));
            });
        }
    }
    Ok(Dataset::new(Experiment::Effects, rows, Metadata::for_config(config)))
}

/// Completeness bins of width 5 percent, 0 to 100.
pub const COMPLETENESS_BINS: usize = 21;

/// Nearest multiple of 5 percent, halves rounded up, as a bin index.
pub fn completeness_bin(profile: &Profile) -> usize {
    let m = profile.m();
    let possible = (profile.n() * m * (m - 1) / 2) as u64;
    if possible == 0 {
        return 0;
    }
    let provided: u64 = profile.prefs().iter().map(|p| p.compared_pairs() as u64).sum();
    ((40 * provided + possible) / (2 * possible)) as usize
}

/// Counts per bucket; `bucket` maps a sampled profile to its bucket.
fn tally_effects(
    config: &ExperimentConfig,
    n: usize,
    order: &UpdateOrder,
    bucket: impl Fn(&Profile) -> usize + Sync,
) -> Result<Vec<EffectCounts>> {
    let buckets = COMPLETENESS_BINS;
    let zero = || vec![[[0u64; 5]; 7]; buckets];
    let merge = |mut a: Vec<EffectCounts>, b: Vec<EffectCounts>| {
        for (x, y) in a.iter_mut().zip(b) {
            *x = add_counts(*x, y);
        }
        a
    };
    (0..config.samples)
        .into_par_iter()
        .try_fold(
            || (zero(), Vec::new()),
            |(mut acc, mut scratch), i| {
                let profile = sample_profile(config, n, i)?;
                let effects = effects_of(&profile, order, &mut scratch);
                let cell = &mut acc[bucket(&profile)];
                for (notion, e) in effects.iter().enumerate() {
                    cell[notion][e.index()] += 1;
                }
                Ok::<_, Error>((acc, scratch))
            },
        )
        .map(|r| r.map(|(acc, _)| acc))
        .try_reduce(zero, |a, b| Ok(merge(a, b)))
}

/// Effect frequencies by completeness bin, at a single number of agents.
pub fn experiment_completeness(config: &ExperimentConfig) -> Result<Dataset> {
    config.validate()?;
    let order = config.order_policy.fixed_order(config.m)?.expect("validated");
    let n = config.agent_counts[0];
    let mask = config.notion_mask();
    let bins = with_jobs(config.jobs, || tally_effects(config, n, &order, completeness_bin))??;
    let mut rows = Vec::new();
    for notion in ConsensusNotion::ALL.into_iter().filter(|n| mask[n.index()]) {
        for (b, counts) in bins.iter().enumerate() {
            let in_bin: u64 = counts[0].iter().sum();
            effect_rows(&counts[notion.index()], |label, num, den| {
                rows.push(FrequencyRow::completeness(notion, 5 * b as u32, in_bin, label, num, den));
            });
        }
    }
    Ok(Dataset::new(Experiment::Completeness, rows, Metadata::for_config(config)))
}

/// Control types in row order.
pub const CONTROL_LABELS: [&str; 7] = [
    "preserve_existence",
    "preserve_identity",
    "lose_existence",
    "lose_identity",
    "prevent_generation",
    "generate",
    "choose_a",
];

/// Per-notion control counts: numerators for each control type, profiles
/// with and without initial consensus.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct ControlTally {
    hits: [u64; 7],
    with: u64,
    without: u64,
}

impl ControlTally {
    fn add(&mut self, r: &ControlReport) {
        let flags = [
            r.can_preserve_existence(),
            r.can_preserve_identity(),
            r.can_lose(),
            r.can_lose_identity(),
            r.can_prevent_generation(),
            r.can_generate(),
            Some(r.choosable().contains(Alternative::new(CHOOSE_TARGET))),
        ];
        for (h, f) in self.hits.iter_mut().zip(flags) {
            *h += u64::from(f == Some(true));
        }
        if r.initial.is_consensus() {
            self.with += 1;
        } else {
            self.without += 1;
        }
    }

    fn merge(mut self, o: ControlTally) -> ControlTally {
        for (a, b) in self.hits.iter_mut().zip(o.hits) {
            *a += b;
        }
        self.with += o.with;
        self.without += o.without;
        self
    }

    fn denominators(&self) -> [u64; 7] {
        let w = self.with;
        let wo = self.without;
        [w, w, w, w, wo, wo, w + wo]
    }
}

/// The effect under a fixed order must be one the control search also saw.
fn consistent(effect: Effect, r: &ControlReport) -> bool {
    let yes = Some(true);
    match effect {
        Effect::PreservedIdentity => r.can_preserve_identity() == yes,
        Effect::PreservedExistenceOnly => r.can_preserve_existence() == yes && r.can_lose_identity() == yes,
        Effect::Lost => r.can_lose() == yes,
        Effect::Generated => r.can_generate() == yes,
        Effect::AbsencePreserved => r.can_prevent_generation() == yes,
    }
}

/// Control frequencies: for each sampled profile, which outcomes some
/// update order can reach.
pub fn experiment_control(config: &ExperimentConfig) -> Result<Dataset> {
    config.validate()?;
    let n = config.agent_counts[0];
    let lex = UpdateOrder::complete(config.m, &[])?;
    let exhaustive = config.order_policy == OrderPolicy::Exhaustive;
    let zero = || ([ControlTally::default(); 7], 0u64);
    let (tallies, violations) = with_jobs(config.jobs, || {
        (0..config.samples)
            .into_par_iter()
            .map(|i| {
                let profile = sample_profile(config, n, i)?;
                let source = match config.order_policy {
                    OrderPolicy::Sampled(count) => {
                        let seed = child_rng(config.seed, task_key(n as u32, i as u32) ^ (1 << 63)).random();
                        OrderSource::Sampled { count, seed }
                    }
                    _ => OrderSource::Exhaustive,
                };
                let reports = control_search_many(&ConsensusNotion::ALL, &profile, source, None)?;
                let effects = effects_of(&profile, &lex, &mut Vec::new());
                let mut t = zero();
                for (r, e) in reports.iter().zip(effects) {
                    t.0[r.notion.index()].add(r);
                    if exhaustive && !consistent(e, r) {
                        t.1 += 1;
                    }
                }
                Ok::<_, Error>(t)
            })
            .try_reduce(zero, |mut a, b| {
                for (x, y) in a.0.iter_mut().zip(b.0) {
                    *x = x.merge(y);
                }
                Ok((a.0, a.1 + b.1))
            })
    })??;
    let mask = config.notion_mask();
    let mut rows = Vec::new();
    for notion in ConsensusNotion::ALL.into_iter().filter(|n| mask[n.index()]) {
        let t = &tallies[notion.index()];
        for ((label, num), den) in CONTROL_LABELS.iter().zip(t.hits).zip(t.denominators()) {
            rows.push(FrequencyRow::control(notion, label, num, den));
        }
    }
    let mut meta = Metadata::for_config(config);
    if exhaustive {
        meta.consistency_violations = Some(violations);
    }
    Ok(Dataset::new(Experiment::Control, rows, meta))
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<Dataset> {
    match config.experiment {
        Experiment::Effects => experiment_effects(config),
        Experiment::Completeness => experiment_completeness(config),
        Experiment::Control => experiment_control(config),
    }
}

/// Parses `"1,3,5"`, `"3-9"` or `"1-25/2"` (and comma-separated mixes).
pub fn parse_agent_counts(text: &str) -> Result<Vec<usize>> {
    let bad = || Error::Config(format!("cannot parse agent counts {text:?}"));
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (range, step) = match item.split_once('/') {
            Some((r, s)) => (r, s.parse::<usize>().map_err(|_| bad())?),
            None => (item, 1),
        };
        if step == 0 {
            return Err(bad());
        }
        match range.split_once('-') {
            Some((lo, hi)) => {
                let lo: usize = lo.trim().parse().map_err(|_| bad())?;
                let hi: usize = hi.trim().parse().map_err(|_| bad())?;
                if lo > hi {
                    return Err(bad());
                }
                out.extend((lo..=hi).step_by(step));
            }
            None => out.push(range.parse().map_err(|_| bad())?),
        }
    }
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}
