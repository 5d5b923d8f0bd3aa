//! Random preferences and the catalog of hand-built profiles.

mod catalog;

pub use catalog::{counterexample_catalog, find_fixture, Fact, FactCheck, Fixture};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::prefcore::{check_m, validate_preference, AltSet, Alternative, Preference, Profile, Relation};
use crate::rng::master_rng;

/// Whole assignments drawn before giving up.
pub const REJECTION_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenKind {
    /// Each pair independently a≻b, b≻a or incomparable, redrawn as a
    /// whole until transitive.
    UniformPartialOrder,
    /// Uniform over ordered partitions of the alternatives into tiers.
    UniformWeakOrdering,
    /// Uniform random linear order.
    Complete,
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GenPolicy {
    pub kind: GenKind,
    pub m: usize,
    pub seed: u64,
}

impl GenPolicy {
    pub fn new(kind: GenKind, m: usize, seed: u64) -> Result<Self> {
        check_m(m)?;
        Ok(GenPolicy { kind, m, seed })
    }

    /// The first `count` preferences of this policy's sequence.
    pub fn sequence(&self, count: usize) -> Result<Vec<Preference>> {
        let mut rng = master_rng(self.seed);
        (0..count).map(|_| draw(self.kind, self.m, &mut rng)).collect()
    }
}

pub fn draw<R: Rng + ?Sized>(kind: GenKind, m: usize, rng: &mut R) -> Result<Preference> {
    match kind {
        GenKind::UniformPartialOrder => random_partial_preference(m, rng),
        GenKind::UniformWeakOrdering => random_weak_ordering(m, rng),
        GenKind::Complete => random_linear_order(m, rng),
        GenKind::Empty => Preference::empty(m),
    }
}

/// `n` agents drawn one after another from the same stream.
pub fn random_profile<R: Rng + ?Sized>(kind: GenKind, n: usize, m: usize, rng: &mut R) -> Result<Profile> {
    let prefs = (0..n).map(|_| draw(kind, m, rng)).collect::<Result<Vec<_>>>()?;
    Profile::new(m, prefs)
}

fn is_transitive(r: &Relation) -> bool {
    (0..r.m()).all(|a| {
        let row = r.row(Alternative::new(a));
        row.iter().all(|b| r.row(b).difference(row).is_empty())
    })
}

pub fn random_partial_preference<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<Preference> {
    check_m(m)?;
    for _ in 0..REJECTION_CAP {
        let mut r = Relation::empty(m)?;
        for a in 0..m {
            for b in a + 1..m {
                match rng.random_range(0..3u8) {
                    0 => r.set(Alternative::new(a), Alternative::new(b)),
                    1 => r.set(Alternative::new(b), Alternative::new(a)),
                    _ => {}
                }
            }
        }
        if is_transitive(&r) {
            debug_assert_eq!(validate_preference(&r), Ok(()));
            return Preference::try_from_closed(r);
        }
    }
    Err(Error::RejectionCapExceeded(REJECTION_CAP))
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Ordered set partitions of `k` elements for k = 0..=m.
fn fubini_numbers(m: usize) -> Vec<u64> {
    let mut f = vec![1u64];
    for k in 1..=m {
        f.push((1..=k).map(|j| binomial(k, j) * f[k - j]).sum());
    }
    f
}

/// Uniform over ordered set partitions: the top tier has size `j` with
/// probability C(k,j)·F(k−j)/F(k), then its members are a uniform
/// `j`-subset of what remains.
pub fn random_weak_ordering<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<Preference> {
    check_m(m)?;
    let f = fubini_numbers(m);
    let mut remaining: Vec<Alternative> = (0..m).map(Alternative::new).collect();
    let mut above = AltSet::EMPTY;
    let mut r = Relation::empty(m)?;
    while !remaining.is_empty() {
        let k = remaining.len();
        let mut ticket = rng.random_range(0..f[k]);
        let mut j = 1;
        loop {
            let w = binomial(k, j) * f[k - j];
            if ticket < w {
                break;
            }
            ticket -= w;
            j += 1;
        }
        remaining.shuffle(rng);
        let tier: AltSet = remaining.drain(..j).collect();
        for hi in above.iter() {
            for lo in tier.iter() {
                r.set(hi, lo);
            }
        }
        above = above.union(tier);
    }
    Preference::try_from_closed(r)
}

pub fn random_linear_order<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<Preference> {
    check_m(m)?;
    let mut ranking: Vec<usize> = (0..m).collect();
    ranking.shuffle(rng);
    Preference::linear(m, &ranking)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prefcore::{is_weak_ordering, tier_partition};

    #[test]
    fn fubini() {
        assert_eq!(fubini_numbers(5), vec![1, 1, 3, 13, 75, 541]);
        assert_eq!(fubini_numbers(16)[16], 5_315_654_681_981_355);
    }

    #[test]
    fn generated_preferences_are_valid() {
        let mut rng = master_rng(3);
        for m in 2..=8 {
            for _ in 0..200 {
                let p = random_partial_preference(m, &mut rng).unwrap();
                assert_eq!(validate_preference(p.relation()), Ok(()));
                let w = random_weak_ordering(m, &mut rng).unwrap();
                assert!(is_weak_ordering(&w));
                assert!(tier_partition(&w).is_ok());
                assert!(random_linear_order(m, &mut rng).unwrap().is_complete());
            }
        }
    }

    #[test]
    fn m2_partial_orders_cover_three_states() {
        let mut rng = master_rng(9);
        let mut seen = [0u32; 3];
        for _ in 0..3000 {
            let p = random_partial_preference(2, &mut rng).unwrap();
            let (a, b) = (Alternative::new(0), Alternative::new(1));
            seen[if p.prefers(a, b) { 0 } else if p.prefers(b, a) { 1 } else { 2 }] += 1;
        }
        assert!(seen.iter().all(|&c| (850..1150).contains(&c)), "{seen:?}");
    }

    #[test]
    fn policy_sequences_repeat() {
        let p = GenPolicy::new(GenKind::UniformPartialOrder, 5, 11).unwrap();
        assert_eq!(p.sequence(50).unwrap(), p.sequence(50).unwrap());
        let e = GenPolicy::new(GenKind::Empty, 3, 0).unwrap().sequence(2).unwrap();
        assert!(e.iter().all(|q| q.relation().edge_count() == 0));
    }
}
