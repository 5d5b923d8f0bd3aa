//! Effects of a run on consensus, and what a chair choosing the update
//! order can achieve.

use std::collections::BTreeMap;
use std::fmt;

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::consensus::{condorcet_loser, condorcet_winner, consensus, ConsensusNotion, ConsensusOutcome, OutcomeVector};
use crate::dynamics::{md_final, run_in_place, OrderSpace, UpdateOrder};
use crate::error::{Error, Result};
use crate::prefcore::{AltSet, Alternative, Preference, Profile, MAX_ALTERNATIVES};
use crate::rng::child_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Effect {
    PreservedIdentity,
    PreservedExistenceOnly,
    Lost,
    Generated,
    AbsencePreserved,
}

impl Effect {
    pub const ALL: [Effect; 5] = [
        Effect::PreservedIdentity,
        Effect::PreservedExistenceOnly,
        Effect::Lost,
        Effect::Generated,
        Effect::AbsencePreserved,
    ];

    pub fn classify(initial: ConsensusOutcome, final_outcome: ConsensusOutcome) -> Effect {
        use ConsensusOutcome::*;
        match (initial, final_outcome) {
            (Winner(a), Winner(b)) if a == b => Effect::PreservedIdentity,
            (Winner(_), Winner(_)) => Effect::PreservedExistenceOnly,
            (Winner(_), NoConsensus) => Effect::Lost,
            (NoConsensus, Winner(_)) => Effect::Generated,
            (NoConsensus, NoConsensus) => Effect::AbsencePreserved,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Effect::PreservedIdentity => "preserved_identity",
            Effect::PreservedExistenceOnly => "preserved_existence_only",
            Effect::Lost => "lost",
            Effect::Generated => "generated",
            Effect::AbsencePreserved => "absence_preserved",
        }
    }

    /// True for effects on profiles that start with a consensus.
    pub fn had_initial_consensus(self) -> bool {
        matches!(self, Effect::PreservedIdentity | Effect::PreservedExistenceOnly | Effect::Lost)
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Effect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EffectRecord {
    pub notion: ConsensusNotion,
    pub initial: ConsensusOutcome,
    pub final_outcome: ConsensusOutcome,
    pub effect: Effect,
}

impl EffectRecord {
    pub fn new(notion: ConsensusNotion, initial: ConsensusOutcome, final_outcome: ConsensusOutcome) -> Self {
        EffectRecord {
            notion,
            initial,
            final_outcome,
            effect: Effect::classify(initial, final_outcome),
        }
    }
}

pub fn classify_effect(notion: ConsensusNotion, profile: &Profile, order: &UpdateOrder) -> Result<EffectRecord> {
    let initial = consensus(notion, profile);
    let after = md_final(profile, order)?;
    Ok(EffectRecord::new(notion, initial, consensus(notion, &after)))
}

/// Effect records for every notion from a single run.
pub fn classify_all(profile: &Profile, order: &UpdateOrder) -> Result<Vec<EffectRecord>> {
    let initial = OutcomeVector::of(profile.m(), profile.prefs());
    let after = md_final(profile, order)?;
    let fin = OutcomeVector::of(after.m(), after.prefs());
    Ok(ConsensusNotion::ALL
        .iter()
        .map(|&n| EffectRecord::new(n, initial.get(n), fin.get(n)))
        .collect())
}

/// The two ways negative control can be available on a profile without
/// initial consensus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NegativeControl {
    /// Some order ends without consensus.
    pub prevent_generation: bool,
    /// Two orders end with different outcomes.
    pub divergent_outcomes: bool,
}

impl NegativeControl {
    pub fn available(self) -> bool {
        self.prevent_generation || self.divergent_outcomes
    }
}

/// Final outcomes of one notion over a set of orders on one profile.
///
/// All flags are derived from the outcome counts and the initial outcome.
/// Flags that only make sense with (or without) an initial consensus are
/// `None` otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlReport {
    pub notion: ConsensusNotion,
    pub initial: ConsensusOutcome,
    pub orders_examined: u64,
    /// `counts[0]` is ⊥, `counts[i + 1]` is alternative `i`.
    counts: [u64; MAX_ALTERNATIVES + 1],
    pub exhaustive: bool,
    pub seed: Option<u64>,
    pub targets: Option<AltSet>,
}

#[inline]
fn slot(o: ConsensusOutcome) -> usize {
    match o {
        ConsensusOutcome::NoConsensus => 0,
        ConsensusOutcome::Winner(a) => a.index() + 1,
    }
}

impl ControlReport {
    pub fn new(notion: ConsensusNotion, initial: ConsensusOutcome) -> Self {
        ControlReport {
            notion,
            initial,
            orders_examined: 0,
            counts: [0; MAX_ALTERNATIVES + 1],
            exhaustive: false,
            seed: None,
            targets: None,
        }
    }

    #[inline]
    pub fn record(&mut self, outcome: ConsensusOutcome) {
        self.counts[slot(outcome)] += 1;
        self.orders_examined += 1;
    }

    /// Adds another partial report over disjoint orders of the same profile.
    pub fn merge(&mut self, other: &ControlReport) {
        assert_eq!((self.notion, self.initial), (other.notion, other.initial));
        for (x, y) in self.counts.iter_mut().zip(other.counts.iter()) {
            *x += y;
        }
        self.orders_examined += other.orders_examined;
    }

    pub fn count(&self, outcome: ConsensusOutcome) -> u64 {
        self.counts[slot(outcome)]
    }

    pub fn outcome_multiset(&self) -> BTreeMap<ConsensusOutcome, u64> {
        self.counts
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c > 0)
            .map(|(i, &c)| {
                let o = if i == 0 {
                    ConsensusOutcome::NoConsensus
                } else {
                    ConsensusOutcome::Winner(Alternative::new(i - 1))
                };
                (o, c)
            })
            .collect()
    }

    /// Alternatives that some order makes the final consensus, restricted
    /// to `targets` when set.
    pub fn choosable(&self) -> AltSet {
        let all: AltSet = (0..MAX_ALTERNATIVES)
            .filter(|&i| self.counts[i + 1] > 0)
            .map(Alternative::new)
            .collect();
        match self.targets {
            Some(t) => all.intersection(t),
            None => all,
        }
    }

    fn any_consensus(&self) -> bool {
        self.counts[1..].iter().any(|&c| c > 0)
    }

    fn distinct_outcomes(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    fn with_initial<T>(&self, f: impl FnOnce(Alternative) -> T) -> Option<T> {
        self.initial.winner().map(f)
    }

    fn without_initial<T>(&self, f: impl FnOnce() -> T) -> Option<T> {
        (!self.initial.is_consensus()).then(f)
    }

    pub fn can_preserve_existence(&self) -> Option<bool> {
        self.with_initial(|_| self.any_consensus())
    }

    pub fn can_preserve_identity(&self) -> Option<bool> {
        self.with_initial(|a| self.counts[a.index() + 1] > 0)
    }

    /// Some order ends without consensus.
    pub fn can_lose(&self) -> Option<bool> {
        self.with_initial(|_| self.counts[0] > 0)
    }

    /// Some order ends with a consensus other than the initial one.
    pub fn can_lose_identity(&self) -> Option<bool> {
        self.with_initial(|a| self.orders_examined > self.counts[a.index() + 1])
    }

    pub fn can_generate(&self) -> Option<bool> {
        self.without_initial(|| self.any_consensus())
    }

    pub fn can_prevent_generation(&self) -> Option<bool> {
        self.without_initial(|| self.counts[0] > 0)
    }

    pub fn negative_control(&self) -> Option<NegativeControl> {
        self.without_initial(|| NegativeControl {
            prevent_generation: self.counts[0] > 0,
            divergent_outcomes: self.distinct_outcomes() >= 2,
        })
    }

    pub fn negative_control_available(&self) -> Option<bool> {
        self.negative_control().map(NegativeControl::available)
    }
}

/// Folds the final outcome of every supplied order into a report.
pub fn control_search<'a>(
    notion: ConsensusNotion,
    profile: &Profile,
    orders: impl IntoIterator<Item = &'a UpdateOrder>,
    targets: Option<AltSet>,
) -> Result<ControlReport> {
    let mut report = ControlReport::new(notion, consensus(notion, profile));
    report.targets = targets;
    let mut scratch = profile.prefs().to_vec();
    for order in orders {
        if order.m() != profile.m() {
            return Err(Error::InvalidOrder(format!("order over {} alternatives", order.m())));
        }
        scratch.copy_from_slice(profile.prefs());
        run_in_place(&mut scratch, order.pairs());
        report.record(final_outcome(notion, profile.m(), &scratch));
    }
    if report.orders_examined == 0 {
        return Err(Error::Config("control search needs at least one order".into()));
    }
    Ok(report)
}

fn final_outcome(notion: ConsensusNotion, m: usize, prefs: &[Preference]) -> ConsensusOutcome {
    OutcomeVector::of(m, prefs).get(notion)
}

/// Which orders a control search examines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderSource {
    Exhaustive,
    /// `count` uniformly random orders; order `i` is drawn from the child
    /// stream `(seed, i)`.
    Sampled { count: u64, seed: u64 },
}

const CHUNK: u64 = 4096;

/// Control reports for several notions from one shared pass over the
/// orders. The order space is cut into fixed index chunks processed in
/// parallel; partial reports are merged by addition, so the result does
/// not depend on the number of workers.
pub fn control_search_many(
    notions: &[ConsensusNotion],
    profile: &Profile,
    source: OrderSource,
    targets: Option<AltSet>,
) -> Result<Vec<ControlReport>> {
    let m = profile.m();
    let initial = OutcomeVector::of(m, profile.prefs());
    let fresh = || -> Vec<ControlReport> {
        notions
            .iter()
            .map(|&n| {
                let mut r = ControlReport::new(n, initial.get(n));
                r.targets = targets;
                match source {
                    OrderSource::Exhaustive => r.exhaustive = true,
                    OrderSource::Sampled { seed, .. } => r.seed = Some(seed),
                }
                r
            })
            .collect()
    };
    let record_all = |reports: &mut Vec<ControlReport>, prefs: &[Preference]| {
        let v = OutcomeVector::of(m, prefs);
        for r in reports.iter_mut() {
            r.record(v.get(r.notion));
        }
    };
    let (total, space) = match source {
        OrderSource::Exhaustive => {
            let space = OrderSpace::new(m)?;
            (space.len(), Some(space))
        }
        OrderSource::Sampled { count, .. } => (count, None),
    };
    if total == 0 {
        return Err(Error::Config("control search needs at least one order".into()));
    }
    let chunks = total.div_ceil(CHUNK);
    let partials: Vec<Vec<ControlReport>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let range = c * CHUNK..((c + 1) * CHUNK).min(total);
            let mut reports = fresh();
            let mut scratch = profile.prefs().to_vec();
            match (&space, source) {
                (Some(space), _) => space.visit_range(range, |_, pairs| {
                    scratch.copy_from_slice(profile.prefs());
                    run_in_place(&mut scratch, pairs);
                    record_all(&mut reports, &scratch);
                }),
                (None, OrderSource::Sampled { seed, .. }) => {
                    for i in range {
                        let mut rng: ChaCha8Rng = child_rng(seed, i);
                        let order = UpdateOrder::random(m, &mut rng).expect("valid m");
                        scratch.copy_from_slice(profile.prefs());
                        run_in_place(&mut scratch, order.pairs());
                        record_all(&mut reports, &scratch);
                    }
                }
                (None, OrderSource::Exhaustive) => unreachable!(),
            }
            reports
        })
        .collect();
    let mut out = fresh();
    for part in &partials {
        for (acc, p) in out.iter_mut().zip(part) {
            acc.merge(p);
        }
    }
    Ok(out)
}

/// Outcome of checking whether a run turns the Condorcet loser into the
/// Condorcet winner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoserToWinner {
    pub converted: bool,
    pub initial_loser: ConsensusOutcome,
    pub final_winner: ConsensusOutcome,
}

pub fn loser_to_winner_check(profile: &Profile, order: &UpdateOrder) -> Result<LoserToWinner> {
    let initial_loser = condorcet_loser(profile);
    let final_winner = condorcet_winner(&md_final(profile, order)?);
    Ok(LoserToWinner {
        converted: initial_loser.is_consensus() && initial_loser == final_winner,
        initial_loser,
        final_winner,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::lexicographic_order;

    fn alt(i: usize) -> Alternative {
        Alternative::new(i)
    }

    #[test]
    fn effect_partition() {
        use ConsensusOutcome::*;
        assert_eq!(Effect::classify(Winner(alt(0)), Winner(alt(0))), Effect::PreservedIdentity);
        assert_eq!(Effect::classify(Winner(alt(0)), Winner(alt(1))), Effect::PreservedExistenceOnly);
        assert_eq!(Effect::classify(Winner(alt(0)), NoConsensus), Effect::Lost);
        assert_eq!(Effect::classify(NoConsensus, Winner(alt(2))), Effect::Generated);
        assert_eq!(Effect::classify(NoConsensus, NoConsensus), Effect::AbsencePreserved);
    }

    #[test]
    fn single_empty_agent_generates_cw() {
        let p = Profile::empty(1, 3).unwrap();
        let r = classify_effect(ConsensusNotion::Cw, &p, &lexicographic_order(3).unwrap()).unwrap();
        assert_eq!(r.effect, Effect::Generated);
        assert_eq!(r.final_outcome, ConsensusOutcome::Winner(alt(0)));
    }

    #[test]
    fn identical_complete_orders_are_fixed_points() {
        let o = Preference::linear(3, &[1, 2, 0]).unwrap();
        let p = Profile::new(3, vec![o; 3]).unwrap();
        let space = OrderSpace::new(3).unwrap();
        let orders: Vec<_> = space.iter().collect();
        let r = control_search(ConsensusNotion::Cw, &p, &orders, None).unwrap();
        assert_eq!(r.orders_examined, 48);
        assert_eq!(r.count(ConsensusOutcome::Winner(alt(1))), 48);
        assert_eq!(r.can_preserve_identity(), Some(true));
        assert_eq!(r.can_lose(), Some(false));
        assert_eq!(r.can_generate(), None);
        assert_eq!(r.negative_control_available(), None);
    }

    #[test]
    fn many_matches_single_notion_search() {
        let p = Profile::from_pair_lists(3, &[vec![(0, 2)], vec![(1, 0)], vec![(2, 1)]]).unwrap();
        let space = OrderSpace::new(3).unwrap();
        let orders: Vec<_> = space.iter().collect();
        let many = control_search_many(&ConsensusNotion::ALL, &p, OrderSource::Exhaustive, None).unwrap();
        for r in many {
            let single = control_search(r.notion, &p, &orders, None).unwrap();
            assert_eq!(r.outcome_multiset(), single.outcome_multiset());
            assert!(r.exhaustive);
        }
    }

    #[test]
    fn empty_order_list_is_an_error() {
        let p = Profile::empty(2, 3).unwrap();
        assert!(control_search(ConsensusNotion::Cw, &p, &[], None).is_err());
    }

    #[test]
    fn targets_restrict_choosable() {
        let p = Profile::empty(2, 3).unwrap();
        let many = control_search_many(
            &[ConsensusNotion::Cw],
            &p,
            OrderSource::Exhaustive,
            Some(AltSet::singleton(alt(1))),
        )
        .unwrap();
        assert_eq!(many[0].choosable(), AltSet::singleton(alt(1)));
        let all = control_search_many(&[ConsensusNotion::Cw], &p, OrderSource::Exhaustive, None).unwrap();
        assert_eq!(all[0].choosable(), AltSet::full(3));
    }

    #[test]
    fn sampled_search_is_seeded() {
        let p = Profile::from_pair_lists(4, &[vec![(0, 2)], vec![(1, 0)], vec![(2, 1), (3, 0)]]).unwrap();
        let src = OrderSource::Sampled { count: 5000, seed: 7 };
        let a = control_search_many(&ConsensusNotion::ALL, &p, src, None).unwrap();
        let b = control_search_many(&ConsensusNotion::ALL, &p, src, None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[0].orders_examined, 5000);
        assert_eq!(a[0].seed, Some(7));
        assert!(!a[0].exhaustive);
    }

    #[test]
    fn loser_check_without_loser_is_false() {
        let p = Profile::empty(3, 3).unwrap();
        let r = loser_to_winner_check(&p, &lexicographic_order(3).unwrap()).unwrap();
        assert!(!r.converted);
        assert_eq!(r.initial_loser, ConsensusOutcome::NoConsensus);
    }
}
