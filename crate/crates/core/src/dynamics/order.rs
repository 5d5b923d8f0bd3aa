//! Update orders and the space of all of them.
//!
//! The exhaustive enumeration has a fixed, index-addressable sequence.
//! With `k = m(m-1)/2` pairs listed lexicographically as `p_0 .. p_{k-1}`
//! (each oriented low-to-high), order number `i` is
//!
//! * `rank = i / 2^k` selects a permutation of the pair list, ranked in
//!   lexicographic order of permutations of `0..k`;
//! * `mask = i % 2^k` selects orientations: if bit `j` is set, the pair
//!   at position `j` of the permuted list is reversed.
//!
//! So index 0 is the lexicographic order, and the masks vary fastest.

use std::fmt;
use std::ops::Range;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::prefcore::{check_m, Alternative};

pub type Pair = (Alternative, Alternative);

/// One orientation of every unordered pair, in discussion order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UpdateOrder {
    m: usize,
    pairs: Vec<Pair>,
}

pub fn pair_count(m: usize) -> usize {
    m * (m - 1) / 2
}

fn lexicographic_pairs(m: usize) -> Vec<Pair> {
    let mut out = Vec::with_capacity(pair_count(m));
    for a in 0..m {
        for b in a + 1..m {
            out.push((Alternative::new(a), Alternative::new(b)));
        }
    }
    out
}

/// `(a,b),(a,c),...,(b,c),...`: pairs sorted by (first, second), low first.
pub fn lexicographic_order(m: usize) -> Result<UpdateOrder> {
    check_m(m)?;
    Ok(UpdateOrder {
        m,
        pairs: lexicographic_pairs(m),
    })
}

impl UpdateOrder {
    pub fn new(m: usize, pairs: Vec<Pair>) -> Result<Self> {
        check_m(m)?;
        let mut seen = vec![false; m * m];
        for &(a, b) in &pairs {
            if a.index() >= m || b.index() >= m {
                return Err(Error::InvalidOrder(format!("pair {a:?}{b:?} outside m = {m}")));
            }
            if a == b {
                return Err(Error::SameAlternative(a));
            }
            let key = a.index().min(b.index()) * m + a.index().max(b.index());
            if std::mem::replace(&mut seen[key], true) {
                return Err(Error::InvalidOrder(format!("pair {{{a:?},{b:?}}} appears twice")));
            }
        }
        if pairs.len() != pair_count(m) {
            return Err(Error::InvalidOrder(format!(
                "{} pairs given, {} required",
                pairs.len(),
                pair_count(m)
            )));
        }
        Ok(UpdateOrder { m, pairs })
    }

    /// `prefix` followed by the remaining pairs in lexicographic order,
    /// oriented low-to-high.
    pub fn complete(m: usize, prefix: &[Pair]) -> Result<Self> {
        let rest = remaining_pairs(m, prefix)?;
        let mut pairs = prefix.to_vec();
        pairs.extend(rest);
        UpdateOrder::new(m, pairs)
    }

    /// `prefix` followed by the remaining pairs shuffled and randomly oriented.
    pub fn complete_randomly<R: Rng + ?Sized>(m: usize, prefix: &[Pair], rng: &mut R) -> Result<Self> {
        let mut rest = remaining_pairs(m, prefix)?;
        shuffle_and_orient(&mut rest, rng);
        let mut pairs = prefix.to_vec();
        pairs.extend(rest);
        UpdateOrder::new(m, pairs)
    }

    /// Uniformly random order: random permutation, random orientations.
    pub fn random<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<Self> {
        UpdateOrder::complete_randomly(m, &[], rng)
    }

    /// All pairs `(w, a)` first, by index of `a`, then the rest
    /// lexicographically.
    pub fn leading_with(m: usize, w: Alternative) -> Result<Self> {
        let prefix: Vec<Pair> = (0..m).map(Alternative::new).filter(|&a| a != w).map(|a| (w, a)).collect();
        UpdateOrder::complete(m, &prefix)
    }

    /// Parses `"ab,bc,ac"` or `"w>l,a>x"`; each item names the first and
    /// second alternative of a pair.
    pub fn parse_pairs(text: &str, labels: &[String]) -> Result<Vec<Pair>> {
        let lookup = |l: &str| {
            labels
                .iter()
                .position(|x| x == l)
                .map(Alternative::new)
                .ok_or_else(|| Error::UnknownLabel(l.to_string()))
        };
        text.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|item| {
                if let Some((a, b)) = item.split_once('>') {
                    return Ok((lookup(a.trim())?, lookup(b.trim())?));
                }
                let chars: Vec<char> = item.chars().collect();
                if chars.len() != 2 {
                    return Err(Error::InvalidOrder(format!("cannot split {item:?} into two labels")));
                }
                Ok((lookup(&chars[0].to_string())?, lookup(&chars[1].to_string())?))
            })
            .collect()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn render(&self, labels: &[String]) -> String {
        self.pairs
            .iter()
            .map(|&(a, b)| format!("{}>{}", labels[a.index()], labels[b.index()]))
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Debug for UpdateOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (a, b)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a:?}{b:?}")?;
        }
        write!(f, ")")
    }
}

fn remaining_pairs(m: usize, prefix: &[Pair]) -> Result<Vec<Pair>> {
    check_m(m)?;
    Ok(lexicographic_pairs(m)
        .into_iter()
        .filter(|&(a, b)| !prefix.iter().any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a)))
        .collect())
}

fn shuffle_and_orient<R: Rng + ?Sized>(pairs: &mut [Pair], rng: &mut R) {
    pairs.shuffle(rng);
    for p in pairs.iter_mut() {
        if rng.random::<bool>() {
            *p = (p.1, p.0);
        }
    }
}

/// Every update order over `m` alternatives, in the sequence documented
/// at module level.
#[derive(Debug, Clone)]
pub struct OrderSpace {
    m: usize,
    base: Vec<Pair>,
    len: u64,
}

/// Largest `m` whose order space is indexable by `u64` (15! * 2^15).
pub const MAX_ENUMERABLE_M: usize = 6;

impl OrderSpace {
    pub fn new(m: usize) -> Result<Self> {
        check_m(m)?;
        if m > MAX_ENUMERABLE_M {
            return Err(Error::OrderSpaceTooLarge(m));
        }
        let k = pair_count(m) as u64;
        let len = (1..=k).product::<u64>() << k;
        Ok(OrderSpace {
            m,
            base: lexicographic_pairs(m),
            len,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn k(&self) -> usize {
        self.base.len()
    }

    pub fn get(&self, index: u64) -> UpdateOrder {
        assert!(index < self.len, "order index {index} out of range");
        let k = self.k();
        let perm = unrank_permutation(k, index >> k);
        let mut pairs = Vec::with_capacity(k);
        fill_pairs(&self.base, &perm, (index & ((1 << k) - 1)) as u32, &mut pairs);
        UpdateOrder { m: self.m(), pairs }
    }

    /// Calls `f` with the pair sequence of every order in `range`, reusing
    /// one buffer.
    pub fn visit_range(&self, range: Range<u64>, mut f: impl FnMut(u64, &[Pair])) {
        let end = range.end.min(self.len);
        if range.start >= end {
            return;
        }
        let k = self.k();
        let masks = 1u64 << k;
        let mut perm = unrank_permutation(k, range.start >> k);
        let mut mask = range.start & (masks - 1);
        let mut buf = Vec::with_capacity(k);
        let mut index = range.start;
        while index < end {
            fill_pairs(&self.base, &perm, mask as u32, &mut buf);
            f(index, &buf);
            index += 1;
            mask += 1;
            if mask == masks {
                mask = 0;
                next_permutation(&mut perm);
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = UpdateOrder> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }
}

/// Every update order over `m` alternatives, each exactly once.
pub fn enumerate_update_orders(m: usize) -> Result<impl Iterator<Item = UpdateOrder>> {
    let space = OrderSpace::new(m)?;
    Ok((0..space.len()).map(move |i| space.get(i)))
}

fn fill_pairs(base: &[Pair], perm: &[usize], mask: u32, out: &mut Vec<Pair>) {
    out.clear();
    for (pos, &j) in perm.iter().enumerate() {
        let (a, b) = base[j];
        out.push(if mask >> pos & 1 == 1 { (b, a) } else { (a, b) });
    }
}

fn unrank_permutation(k: usize, mut rank: u64) -> Vec<usize> {
    let mut items: Vec<usize> = (0..k).collect();
    let mut fact: Vec<u64> = vec![1; k + 1];
    for i in 1..=k {
        fact[i] = fact[i - 1] * i as u64;
    }
    let mut out = Vec::with_capacity(k);
    for i in (0..k).rev() {
        let q = (rank / fact[i]) as usize;
        rank %= fact[i];
        out.push(items.remove(q));
    }
    out
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn alt(i: usize) -> Alternative {
        Alternative::new(i)
    }

    #[test]
    fn lexicographic_small() {
        let o = lexicographic_order(3).unwrap();
        assert_eq!(o.pairs(), &[(alt(0), alt(1)), (alt(0), alt(2)), (alt(1), alt(2))]);
        let o = lexicographic_order(4).unwrap();
        assert_eq!(format!("{o:?}"), "(ab,ac,ad,bc,bd,cd)");
        assert_eq!(lexicographic_order(2).unwrap().pairs(), &[(alt(0), alt(1))]);
    }

    #[test]
    fn space_sizes() {
        assert_eq!(OrderSpace::new(2).unwrap().len(), 2);
        assert_eq!(OrderSpace::new(3).unwrap().len(), 48);
        assert_eq!(OrderSpace::new(4).unwrap().len(), 46_080);
        assert_eq!(OrderSpace::new(5).unwrap().len(), 3_628_800 * 1024);
        assert!(OrderSpace::new(7).is_err());
    }

    #[test]
    fn enumeration_is_distinct_and_valid() {
        for m in 2..=4 {
            let space = OrderSpace::new(m).unwrap();
            let mut seen = HashSet::new();
            space.visit_range(0..space.len(), |i, pairs| {
                let o = UpdateOrder::new(m, pairs.to_vec()).unwrap();
                assert_eq!(o, space.get(i));
                assert!(seen.insert(o));
            });
            assert_eq!(seen.len() as u64, space.len());
        }
    }

    #[test]
    fn first_order_is_lexicographic() {
        let space = OrderSpace::new(4).unwrap();
        assert_eq!(space.get(0), lexicographic_order(4).unwrap());
        // mask bit 0 reverses the first pair
        assert_eq!(space.get(1).pairs()[0], (alt(1), alt(0)));
    }

    #[test]
    fn visit_from_middle_matches_get() {
        let space = OrderSpace::new(4).unwrap();
        let mut got = Vec::new();
        space.visit_range(1000..1200, |i, p| got.push((i, p.to_vec())));
        assert_eq!(got.len(), 200);
        for (i, p) in got {
            assert_eq!(space.get(i).pairs(), &p[..]);
        }
    }

    #[test]
    fn order_validation() {
        let ab = (alt(0), alt(1));
        let ba = (alt(1), alt(0));
        let ac = (alt(0), alt(2));
        let bc = (alt(1), alt(2));
        assert!(UpdateOrder::new(3, vec![ab, ac, bc]).is_ok());
        assert!(UpdateOrder::new(3, vec![ab, ba, bc]).is_err());
        assert!(UpdateOrder::new(3, vec![ab, ac]).is_err());
        assert!(matches!(UpdateOrder::new(3, vec![(alt(0), alt(0)), ac, bc]), Err(Error::SameAlternative(_))));
    }

    #[test]
    fn completion_and_parsing() {
        let labels = crate::prefcore::default_labels(4);
        let prefix = UpdateOrder::parse_pairs("ba, c>a", &labels).unwrap();
        let o = UpdateOrder::complete(4, &prefix).unwrap();
        assert_eq!(format!("{o:?}"), "(ba,ca,ad,bc,bd,cd)");
        assert_eq!(o.render(&labels), "b>a,c>a,a>d,b>c,b>d,c>d");
        let w = UpdateOrder::leading_with(4, alt(2)).unwrap();
        assert_eq!(format!("{w:?}"), "(ca,cb,cd,ab,ad,bd)");
        assert!(UpdateOrder::parse_pairs("abc", &labels).is_err());
    }
}
