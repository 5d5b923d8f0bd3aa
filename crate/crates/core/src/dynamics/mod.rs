//! Majority dynamics: pairs are discussed one at a time and every agent
//! without an opinion on the pair adopts the majority orientation (ties go
//! to the pair's first alternative), then closes transitively.

mod order;

pub use order::{
    enumerate_update_orders, lexicographic_order, pair_count, OrderSpace, Pair, UpdateOrder, MAX_ENUMERABLE_M,
};

use crate::error::{Error, Result};
use crate::prefcore::{support_unchecked, Alternative, Preference, Profile};

/// What happened when one pair was discussed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepTrace {
    pub pair: Pair,
    pub support_first: usize,
    pub support_second: usize,
    /// Orientation adopted by the undecided agents.
    pub adopted: Pair,
    pub updaters: Vec<usize>,
    /// For each updater (same order as `updaters`), pairs added besides
    /// `adopted` itself.
    pub closure_additions: Vec<Vec<Pair>>,
}

fn check_pair(m: usize, (a, b): Pair) -> Result<()> {
    if a == b {
        return Err(Error::SameAlternative(a));
    }
    for x in [a, b] {
        if x.index() >= m {
            return Err(Error::AlternativeOutOfRange { index: x.index(), m });
        }
    }
    Ok(())
}

#[inline]
fn majority_orientation(prefs: &[Preference], (a, b): Pair) -> (usize, usize, Pair) {
    let first = support_unchecked(prefs, a, b);
    let second = support_unchecked(prefs, b, a);
    let adopted = if first >= second { (a, b) } else { (b, a) };
    (first, second, adopted)
}

/// One update on `pair`, in place, without tracing.
#[inline]
pub fn step_in_place(prefs: &mut [Preference], pair: Pair) {
    let (a, b) = pair;
    let (_, _, (w, l)) = majority_orientation(prefs, pair);
    for p in prefs.iter_mut() {
        if !p.compares(a, b) {
            p.adopt(w, l);
        }
    }
}

/// Runs a whole order in place. Pairs are assumed valid.
pub fn run_in_place(prefs: &mut [Preference], pairs: &[Pair]) {
    for &pair in pairs {
        step_in_place(prefs, pair);
    }
}

pub fn md_step(profile: &Profile, pair: Pair) -> Result<(Profile, StepTrace)> {
    check_pair(profile.m(), pair)?;
    let mut next = profile.clone();
    let trace = traced_step(next.prefs_mut(), pair);
    Ok((next, trace))
}

fn traced_step(prefs: &mut [Preference], pair: Pair) -> StepTrace {
    let (a, b) = pair;
    let (support_first, support_second, adopted) = majority_orientation(prefs, pair);
    let mut updaters = Vec::new();
    let mut closure_additions = Vec::new();
    for (i, p) in prefs.iter_mut().enumerate() {
        if p.compares(a, b) {
            continue;
        }
        let before = *p;
        p.adopt(adopted.0, adopted.1);
        let added = p
            .relation()
            .pairs()
            .filter(|&(x, y)| !before.prefers(x, y) && (x, y) != adopted)
            .collect();
        updaters.push(i);
        closure_additions.push(added);
    }
    StepTrace {
        pair,
        support_first,
        support_second,
        adopted,
        updaters,
        closure_additions,
    }
}

/// Applies every pair of `order`; the result is a profile of complete orders.
pub fn md_run(profile: &Profile, order: &UpdateOrder) -> Result<(Profile, Vec<StepTrace>)> {
    if order.m() != profile.m() {
        return Err(Error::InvalidOrder(format!(
            "order over {} alternatives for a profile over {}",
            order.m(),
            profile.m()
        )));
    }
    let mut out = profile.clone();
    let traces = order
        .pairs()
        .iter()
        .map(|&pair| traced_step(out.prefs_mut(), pair))
        .collect();
    debug_assert!(out.is_complete());
    Ok((out, traces))
}

/// Final profile of a run, skipping traces.
pub fn md_final(profile: &Profile, order: &UpdateOrder) -> Result<Profile> {
    if order.m() != profile.m() {
        return Err(Error::InvalidOrder(format!(
            "order over {} alternatives for a profile over {}",
            order.m(),
            profile.m()
        )));
    }
    let mut out = profile.clone();
    run_in_place(out.prefs_mut(), order.pairs());
    Ok(out)
}

/// The ordered pair of alternatives with indices `a` and `b`.
pub fn pair(a: usize, b: usize) -> Pair {
    (Alternative::new(a), Alternative::new(b))
}
