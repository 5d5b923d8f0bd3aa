//! Dominance tables stored as one bitset row per alternative.
//!
//! Row `a` holds bit `b` iff `a ≻ b`. With at most [`MAX_ALTERNATIVES`]
//! alternatives a whole relation fits in a fixed array of `u16` words, so
//! closure and domination checks are word operations and a `Preference`
//! is `Copy`.

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_ALTERNATIVES: usize = 16;

type Row = u16;

/// One alternative, identified by its index in the alternative set.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub struct Alternative(u8);

impl Alternative {
    pub fn new(index: usize) -> Self {
        assert!(index < MAX_ALTERNATIVES, "alternative index {index} out of range");
        Alternative(index as u8)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// "a", "b", ... by index.
    pub fn default_label(self) -> String {
        default_label(self.index())
    }

    #[inline]
    fn bit(self) -> Row {
        1 << self.0
    }
}

impl fmt::Debug for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.default_label())
    }
}

pub fn default_label(index: usize) -> String {
    char::from(b'a' + index as u8).to_string()
}

pub fn default_labels(m: usize) -> Vec<String> {
    (0..m).map(default_label).collect()
}

pub(crate) fn check_m(m: usize) -> Result<()> {
    if (2..=MAX_ALTERNATIVES).contains(&m) {
        Ok(())
    } else {
        Err(Error::AlternativeCount(m))
    }
}

/// A set of alternatives as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct AltSet(Row);

impl AltSet {
    pub const EMPTY: AltSet = AltSet(0);

    pub fn full(m: usize) -> Self {
        AltSet(((1u32 << m) - 1) as Row)
    }

    pub fn singleton(a: Alternative) -> Self {
        AltSet(a.bit())
    }

    pub fn from_bits(bits: u16) -> Self {
        AltSet(bits)
    }

    #[inline]
    pub fn bits(self) -> u16 {
        self.0
    }

    #[inline]
    pub fn contains(self, a: Alternative) -> bool {
        self.0 & a.bit() != 0
    }

    pub fn insert(&mut self, a: Alternative) {
        self.0 |= a.bit();
    }

    pub fn remove(&mut self, a: Alternative) {
        self.0 &= !a.bit();
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// The only member, if there is exactly one.
    pub fn single(self) -> Option<Alternative> {
        (self.0.count_ones() == 1).then(|| Alternative(self.0.trailing_zeros() as u8))
    }

    pub fn union(self, other: AltSet) -> AltSet {
        AltSet(self.0 | other.0)
    }

    pub fn intersection(self, other: AltSet) -> AltSet {
        AltSet(self.0 & other.0)
    }

    pub fn difference(self, other: AltSet) -> AltSet {
        AltSet(self.0 & !other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = Alternative> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros();
            bits &= bits - 1;
            Some(Alternative(i as u8))
        })
    }
}

impl FromIterator<Alternative> for AltSet {
    fn from_iter<I: IntoIterator<Item = Alternative>>(iter: I) -> Self {
        let mut s = AltSet::EMPTY;
        for a in iter {
            s.insert(a);
        }
        s
    }
}

impl fmt::Debug for AltSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A raw dominance table: any set of ordered pairs over `m` alternatives.
///
/// Nothing about closure or consistency is enforced here; see
/// [`Preference`] for the validated form.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Relation {
    m: u8,
    rows: [Row; MAX_ALTERNATIVES],
}

impl Relation {
    pub fn empty(m: usize) -> Result<Self> {
        check_m(m)?;
        Ok(Relation {
            m: m as u8,
            rows: [0; MAX_ALTERNATIVES],
        })
    }

    pub fn from_pairs(m: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut rel = Relation::empty(m)?;
        for &(a, b) in pairs {
            for i in [a, b] {
                if i >= m {
                    return Err(Error::AlternativeOutOfRange { index: i, m });
                }
            }
            rel.set(Alternative::new(a), Alternative::new(b));
        }
        Ok(rel)
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m as usize
    }

    #[inline]
    pub fn get(&self, a: Alternative, b: Alternative) -> bool {
        self.rows[a.index()] & b.bit() != 0
    }

    pub fn set(&mut self, a: Alternative, b: Alternative) {
        self.rows[a.index()] |= b.bit();
    }

    pub fn unset(&mut self, a: Alternative, b: Alternative) {
        self.rows[a.index()] &= !b.bit();
    }

    /// Alternatives `b` with `a ≻ b`.
    #[inline]
    pub fn row(&self, a: Alternative) -> AltSet {
        AltSet(self.rows[a.index()])
    }

    /// Alternatives `b` with `b ≻ a`.
    pub fn column(&self, a: Alternative) -> AltSet {
        let mut col = 0;
        for (i, &row) in self.rows[..self.m()].iter().enumerate() {
            if row & a.bit() != 0 {
                col |= 1 << i;
            }
        }
        AltSet(col)
    }

    pub fn alternatives(&self) -> impl Iterator<Item = Alternative> {
        (0..self.m()).map(Alternative::new)
    }

    /// All ordered pairs `(a, b)` with `a ≻ b`, row-major.
    pub fn pairs(&self) -> impl Iterator<Item = (Alternative, Alternative)> + '_ {
        self.alternatives()
            .flat_map(move |a| self.row(a).iter().map(move |b| (a, b)))
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (a, b)) in self.pairs().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a:?}{b:?}")?;
        }
        write!(f, "}}")
    }
}

/// Why a dominance table is not a strict partial order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    Irreflexivity(Alternative),
    Asymmetry(Alternative, Alternative),
    /// `a ≻ b` and `b ≻ c` but not `a ≻ c`.
    Transitivity(Alternative, Alternative, Alternative),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Irreflexivity(a) => write!(f, "irreflexivity fails at {a:?}"),
            Violation::Asymmetry(a, b) => write!(f, "asymmetry fails: both {a:?}{b:?} and {b:?}{a:?}"),
            Violation::Transitivity(a, b, c) => {
                write!(f, "transitivity fails: {a:?}{b:?} and {b:?}{c:?} without {a:?}{c:?}")
            }
        }
    }
}

/// Smallest transitive superset of `rel` (Warshall over bitset rows).
///
/// Fails with [`Error::ClosureCreatesCycle`] when the closure would contain
/// both orientations of some pair, which includes any reflexive input.
pub fn transitive_closure(rel: &Relation) -> Result<Relation> {
    let mut out = *rel;
    let m = out.m();
    for k in 0..m {
        let kbit = 1 << k;
        let krow = out.rows[k];
        for i in 0..m {
            if out.rows[i] & kbit != 0 {
                out.rows[i] |= krow;
            }
        }
    }
    for a in out.alternatives() {
        if out.get(a, a) {
            // a witness pair: any b on the cycle through a
            let b = out
                .row(a)
                .intersection(out.column(a))
                .iter()
                .find(|&b| b != a)
                .unwrap_or(a);
            return Err(Error::ClosureCreatesCycle(a, b));
        }
    }
    Ok(out)
}

/// Checks irreflexivity, asymmetry and transitivity, in that order.
pub fn validate_preference(rel: &Relation) -> std::result::Result<(), Violation> {
    for a in rel.alternatives() {
        if rel.get(a, a) {
            return Err(Violation::Irreflexivity(a));
        }
    }
    for a in rel.alternatives() {
        for b in rel.row(a).iter() {
            if rel.get(b, a) {
                return Err(Violation::Asymmetry(a, b));
            }
        }
    }
    for a in rel.alternatives() {
        let row = rel.row(a);
        for b in row.iter() {
            let missing = rel.row(b).difference(row);
            if let Some(c) = missing.iter().next() {
                return Err(Violation::Transitivity(a, b, c));
            }
        }
    }
    Ok(())
}

/// One agent's preference: a transitively closed strict partial order.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Preference(Relation);

impl Preference {
    /// The preference with no comparisons.
    pub fn empty(m: usize) -> Result<Self> {
        Relation::empty(m).map(Preference)
    }

    /// Closes `rel` transitively and validates the result.
    pub fn from_relation(rel: &Relation) -> Result<Self> {
        let closed = transitive_closure(rel)?;
        validate_preference(&closed).map_err(Error::InvalidPreference)?;
        Ok(Preference(closed))
    }

    /// Accepts `rel` only if it already is a strict partial order.
    pub fn try_from_closed(rel: Relation) -> Result<Self> {
        validate_preference(&rel).map_err(Error::InvalidPreference)?;
        Ok(Preference(rel))
    }

    pub(crate) fn from_closed_unchecked(rel: Relation) -> Self {
        debug_assert_eq!(validate_preference(&rel), Ok(()));
        Preference(rel)
    }

    pub fn from_pairs(m: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Preference::from_relation(&Relation::from_pairs(m, pairs)?)
    }

    /// Complete order listing alternatives best first.
    pub fn linear(m: usize, ranking: &[usize]) -> Result<Self> {
        let pairs: Vec<_> = ranking
            .iter()
            .zip(ranking.iter().skip(1))
            .map(|(&a, &b)| (a, b))
            .collect();
        let pref = Preference::from_pairs(m, &pairs)?;
        if ranking.len() != m {
            return Err(Error::Config(format!(
                "ranking lists {} of {m} alternatives",
                ranking.len()
            )));
        }
        Ok(pref)
    }

    #[inline]
    pub fn relation(&self) -> &Relation {
        &self.0
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.0.m()
    }

    #[inline]
    pub fn prefers(&self, a: Alternative, b: Alternative) -> bool {
        self.0.get(a, b)
    }

    /// True iff the agent holds an opinion on the unordered pair.
    #[inline]
    pub fn compares(&self, a: Alternative, b: Alternative) -> bool {
        self.0.get(a, b) || self.0.get(b, a)
    }

    /// Alternatives nobody is ranked above. Never empty.
    pub fn undominated(&self) -> AltSet {
        let m = self.m();
        let below = self.0.rows[..m].iter().fold(0, |acc, r| acc | r);
        AltSet::full(m).difference(AltSet(below))
    }

    /// The alternative ranked above all others, if any.
    pub fn dominant(&self) -> Option<Alternative> {
        let full = AltSet::full(self.m());
        self.0
            .alternatives()
            .find(|&a| self.0.row(a) == full.difference(AltSet::singleton(a)))
    }

    /// True iff every other alternative is ranked above `a`.
    pub fn is_bottom(&self, a: Alternative) -> bool {
        let full = AltSet::full(self.m());
        self.0.column(a) == full.difference(AltSet::singleton(a))
    }

    /// Number of unordered pairs the agent compares.
    pub fn compared_pairs(&self) -> usize {
        self.0.edge_count()
    }

    pub fn is_complete(&self) -> bool {
        let m = self.m();
        self.compared_pairs() == m * (m - 1) / 2
    }

    /// Adds `winner ≻ loser` and everything transitivity then forces.
    ///
    /// The pair must currently be incomparable; in a closed order that
    /// guarantees the result is again a strict partial order.
    pub(crate) fn adopt(&mut self, winner: Alternative, loser: Alternative) {
        debug_assert!(!self.compares(winner, loser) && winner != loser);
        let above = self.0.column(winner).union(AltSet::singleton(winner));
        let below = self.0.row(loser).union(AltSet::singleton(loser));
        for i in above.iter() {
            self.0.rows[i.index()] |= below.0;
        }
    }

    /// Image under a relabelling, `perm[old] = new`.
    pub fn relabel(&self, perm: &[usize]) -> Preference {
        let mut rel = Relation::empty(self.m()).expect("same m");
        for (a, b) in self.0.pairs() {
            rel.set(Alternative::new(perm[a.index()]), Alternative::new(perm[b.index()]));
        }
        Preference(rel)
    }
}

impl fmt::Debug for Preference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alt(c: char) -> Alternative {
        Alternative::new((c as u8 - b'a') as usize)
    }

    fn rel(m: usize, pairs: &str) -> Relation {
        let pairs: Vec<_> = pairs
            .split_whitespace()
            .map(|p| {
                let mut cs = p.chars();
                let a = cs.next().unwrap();
                let b = cs.next().unwrap();
                (alt(a).index(), alt(b).index())
            })
            .collect();
        Relation::from_pairs(m, &pairs).unwrap()
    }

    // Reachability by repeated path extension, no bit tricks.
    fn reachability_oracle(m: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
        let mut r = vec![vec![false; m]; m];
        for &(a, b) in edges {
            r[a][b] = true;
        }
        loop {
            let mut changed = false;
            for a in 0..m {
                for b in 0..m {
                    for c in 0..m {
                        if r[a][b] && r[b][c] && !r[a][c] {
                            r[a][c] = true;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return r;
            }
        }
    }

    #[test]
    fn closure_adds_forced_edge() {
        let closed = transitive_closure(&rel(3, "bc ab")).unwrap();
        assert_eq!(closed, rel(3, "ab bc ac"));
    }

    #[test]
    fn closure_of_empty_is_empty() {
        let r = Relation::empty(3).unwrap();
        assert_eq!(transitive_closure(&r).unwrap(), r);
    }

    #[test]
    fn closure_of_chain_matches_oracle() {
        let edges = [(0, 1), (1, 2), (2, 3)];
        let oracle = reachability_oracle(4, &edges);
        let closed = transitive_closure(&Relation::from_pairs(4, &edges).unwrap()).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(closed.get(Alternative::new(a), Alternative::new(b)), oracle[a][b]);
            }
        }
        assert_eq!(closed, rel(4, "ab bc cd ac bd ad"));
    }

    #[test]
    fn closure_detects_cycle() {
        let err = transitive_closure(&rel(3, "ab bc ca")).unwrap_err();
        assert!(matches!(err, Error::ClosureCreatesCycle(_, _)));
        let err = transitive_closure(&rel(3, "aa")).unwrap_err();
        assert!(matches!(err, Error::ClosureCreatesCycle(a, _) if a == alt('a')));
    }

    #[test]
    fn validation_names_axiom_and_witness() {
        assert_eq!(validate_preference(&rel(3, "ab bc ac")), Ok(()));
        assert_eq!(
            validate_preference(&rel(3, "ab bc")),
            Err(Violation::Transitivity(alt('a'), alt('b'), alt('c')))
        );
        assert_eq!(
            validate_preference(&rel(3, "ab ba")),
            Err(Violation::Asymmetry(alt('a'), alt('b')))
        );
        assert_eq!(validate_preference(&rel(3, "bb")), Err(Violation::Irreflexivity(alt('b'))));
    }

    #[test]
    fn undominated_and_dominant() {
        let total = Preference::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(total.undominated(), AltSet::singleton(alt('a')));
        assert_eq!(total.dominant(), Some(alt('a')));

        let empty = Preference::empty(3).unwrap();
        assert_eq!(empty.undominated(), AltSet::full(3));
        assert_eq!(empty.dominant(), None);

        let v = Preference::from_relation(&rel(3, "ac bc")).unwrap();
        assert_eq!(v.undominated(), [alt('a'), alt('b')].into_iter().collect());
        assert!(v.is_bottom(alt('c')));

        assert_eq!(Preference::from_relation(&rel(3, "ab")).unwrap().dominant(), None);
        assert_eq!(Preference::from_relation(&rel(3, "ab ac")).unwrap().dominant(), Some(alt('a')));
    }

    #[test]
    fn adopt_closes_over_both_sides() {
        // {bc} plus ab must also yield ac
        let mut p = Preference::from_relation(&rel(3, "bc")).unwrap();
        p.adopt(alt('a'), alt('b'));
        assert_eq!(*p.relation(), rel(3, "ab bc ac"));

        // x > a, b > y: adding a > b yields x > {a,b,y}, a > {b,y}
        let mut p = Preference::from_relation(&rel(4, "ca bd")).unwrap();
        p.adopt(alt('a'), alt('b'));
        assert_eq!(*p.relation(), transitive_closure(&rel(4, "ca bd ab")).unwrap());
    }

    #[test]
    fn m_bounds() {
        assert!(Relation::empty(1).is_err());
        assert!(Relation::empty(17).is_err());
        assert!(Relation::empty(16).is_ok());
        assert!(Relation::from_pairs(3, &[(0, 3)]).is_err());
    }

    #[test]
    fn altset_ops() {
        let s: AltSet = [alt('a'), alt('c')].into_iter().collect();
        assert_eq!(s.len(), 2);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![alt('a'), alt('c')]);
        assert_eq!(s.single(), None);
        assert_eq!(AltSet::singleton(alt('d')).single(), Some(alt('d')));
        assert_eq!(AltSet::full(16).len(), 16);
    }
}
