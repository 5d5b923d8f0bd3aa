//! Strict weak orderings as ordered partitions into tiers.

use super::relation::{AltSet, Alternative, Preference, Relation};

/// Ordered tiers `(S1, ..., Sk)`: everything in an earlier tier beats
/// everything in a later one, members of one tier are incomparable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TierPartition {
    m: usize,
    tiers: Vec<AltSet>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NotWeakOrdering;

impl TierPartition {
    /// Builds a partition from tiers; they must be nonempty, disjoint and
    /// cover `0..m`.
    pub fn new(m: usize, tiers: Vec<AltSet>) -> Option<Self> {
        let mut seen = AltSet::EMPTY;
        for &t in &tiers {
            if t.is_empty() || !t.intersection(seen).is_empty() {
                return None;
            }
            seen = seen.union(t);
        }
        (seen == AltSet::full(m)).then_some(TierPartition { m, tiers })
    }

    pub fn tiers(&self) -> &[AltSet] {
        &self.tiers
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// The preference these tiers describe.
    pub fn to_preference(&self) -> Preference {
        let mut rel = Relation::empty(self.m).expect("tier partition has a valid m");
        let mut below = AltSet::full(self.m);
        for &tier in &self.tiers {
            below = below.difference(tier);
            for a in tier.iter() {
                for b in below.iter() {
                    rel.set(a, b);
                }
            }
        }
        Preference::from_closed_unchecked(rel)
    }
}

/// True iff incomparability is transitive in `pref`.
pub fn is_weak_ordering(pref: &Preference) -> bool {
    let rel = pref.relation();
    let m = pref.m();
    let incomparable = |a: Alternative| {
        AltSet::full(m)
            .difference(rel.row(a))
            .difference(rel.column(a))
            .difference(AltSet::singleton(a))
    };
    rel.alternatives().all(|a| {
        let ia = incomparable(a);
        ia.iter().all(|b| {
            // every c incomparable to b (other than a) must be incomparable to a
            incomparable(b)
                .difference(AltSet::singleton(a))
                .difference(ia)
                .is_empty()
        })
    })
}

/// The unique tier decomposition of a strict weak ordering.
pub fn tier_partition(pref: &Preference) -> Result<TierPartition, NotWeakOrdering> {
    if !is_weak_ordering(pref) {
        return Err(NotWeakOrdering);
    }
    let rel = pref.relation();
    let mut remaining = AltSet::full(pref.m());
    let mut tiers = Vec::new();
    while !remaining.is_empty() {
        // maximal elements among what is left
        let top: AltSet = remaining
            .iter()
            .filter(|&a| rel.column(a).intersection(remaining).is_empty())
            .collect();
        remaining = remaining.difference(top);
        tiers.push(top);
    }
    let partition = TierPartition {
        m: pref.m(),
        tiers,
    };
    debug_assert_eq!(partition.to_preference(), *pref);
    Ok(partition)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ix: &[usize]) -> AltSet {
        ix.iter().map(|&i| Alternative::new(i)).collect()
    }

    #[test]
    fn complete_order_gives_singletons() {
        let p = Preference::linear(3, &[0, 1, 2]).unwrap();
        let t = tier_partition(&p).unwrap();
        assert_eq!(t.tiers(), &[set(&[0]), set(&[1]), set(&[2])]);
    }

    #[test]
    fn two_over_one() {
        // {ac, bc}: a and b share the top tier
        let p = Preference::from_pairs(3, &[(0, 2), (1, 2)]).unwrap();
        let t = tier_partition(&p).unwrap();
        assert_eq!(t.tiers(), &[set(&[0, 1]), set(&[2])]);
        assert_eq!(t.to_preference(), p);
    }

    #[test]
    fn lone_edge_is_not_weak() {
        let p = Preference::from_pairs(3, &[(0, 2)]).unwrap();
        assert_eq!(tier_partition(&p), Err(NotWeakOrdering));
    }

    #[test]
    fn empty_is_single_tier() {
        let p = Preference::empty(4).unwrap();
        assert_eq!(tier_partition(&p).unwrap().tiers(), &[AltSet::full(4)]);
    }

    #[test]
    fn new_rejects_bad_partitions() {
        assert!(TierPartition::new(3, vec![set(&[0]), set(&[1])]).is_none());
        assert!(TierPartition::new(3, vec![set(&[0, 1]), set(&[1, 2])]).is_none());
        assert!(TierPartition::new(3, vec![set(&[0, 1]), AltSet::EMPTY, set(&[2])]).is_none());
        assert!(TierPartition::new(3, vec![set(&[2]), set(&[0, 1])]).is_some());
    }
}
