//! Naive reference implementations over boolean matrices, written without
//! the library's bitsets, to cross-check it.
#![allow(dead_code)]

use consensus_md_core::consensus::{ConsensusNotion, ConsensusOutcome};
use consensus_md_core::prefcore::{Alternative, Preference, Profile};

/// `r[a][b]` is true when a is preferred to b.
pub type Matrix = Vec<Vec<bool>>;

pub fn matrix(p: &Preference) -> Matrix {
    let m = p.m();
    (0..m)
        .map(|a| (0..m).map(|b| p.prefers(Alternative::new(a), Alternative::new(b))).collect())
        .collect()
}

pub fn matrices(profile: &Profile) -> Vec<Matrix> {
    profile.prefs().iter().map(matrix).collect()
}

pub fn to_preference(r: &Matrix) -> Preference {
    let m = r.len();
    let pairs: Vec<(usize, usize)> =
        (0..m).flat_map(|a| (0..m).map(move |b| (a, b))).filter(|&(a, b)| r[a][b]).collect();
    Preference::from_pairs(m, &pairs).expect("valid matrix")
}

pub fn is_strict_partial_order(r: &Matrix) -> bool {
    let m = r.len();
    for a in 0..m {
        if r[a][a] {
            return false;
        }
        for b in 0..m {
            if r[a][b] && r[b][a] {
                return false;
            }
            for c in 0..m {
                if r[a][b] && r[b][c] && !r[a][c] {
                    return false;
                }
            }
        }
    }
    true
}

/// Floyd–Warshall reachability.
pub fn closure(r: &Matrix) -> Matrix {
    let m = r.len();
    let mut t = r.clone();
    for k in 0..m {
        for i in 0..m {
            for j in 0..m {
                if t[i][k] && t[k][j] {
                    t[i][j] = true;
                }
            }
        }
    }
    t
}

pub fn is_weak_ordering(r: &Matrix) -> bool {
    let m = r.len();
    let inc = |a: usize, b: usize| a != b && !r[a][b] && !r[b][a];
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                if a != c && inc(a, b) && inc(b, c) && !inc(a, c) {
                    return false;
                }
            }
        }
    }
    true
}

/// All 3^(m(m−1)/2) per-pair assignments on m alternatives.
pub fn all_assignments(m: usize) -> Vec<Matrix> {
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect();
    let total = 3usize.pow(pairs.len() as u32);
    (0..total)
        .map(|mut code| {
            let mut r = vec![vec![false; m]; m];
            for &(a, b) in &pairs {
                match code % 3 {
                    0 => r[a][b] = true,
                    1 => r[b][a] = true,
                    _ => {}
                }
                code /= 3;
            }
            r
        })
        .collect()
}

pub fn posets(m: usize) -> Vec<Matrix> {
    all_assignments(m).into_iter().filter(is_strict_partial_order).collect()
}

fn undominated(r: &Matrix, a: usize) -> bool {
    (0..r.len()).all(|b| !r[b][a])
}

fn dominant(r: &Matrix, a: usize) -> bool {
    (0..r.len()).all(|b| b == a || r[a][b])
}

fn unique(xs: Vec<usize>) -> Option<usize> {
    if xs.len() == 1 {
        Some(xs[0])
    } else {
        None
    }
}

/// Consensus straight from the definitions.
pub fn consensus(notion: ConsensusNotion, prof: &[Matrix]) -> Option<usize> {
    let m = prof[0].len();
    let n = prof.len();
    let count = |f: &dyn Fn(&Matrix, usize) -> bool, a: usize| prof.iter().filter(|r| f(r, a)).count();
    let top: &dyn Fn(&Matrix, usize) -> bool = match notion {
        ConsensusNotion::UnanUd | ConsensusNotion::MajUd | ConsensusNotion::PlurUd => &undominated,
        _ => &dominant,
    };
    let counts: Vec<usize> = (0..m).map(|a| count(top, a)).collect();
    match notion {
        ConsensusNotion::Cw => unique(
            (0..m)
                .filter(|&a| {
                    (0..m).all(|b| {
                        b == a
                            || prof.iter().filter(|r| r[a][b]).count() > prof.iter().filter(|r| r[b][a]).count()
                    })
                })
                .collect(),
        ),
        ConsensusNotion::UnanUd | ConsensusNotion::UnanDom => unique((0..m).filter(|&a| counts[a] == n).collect()),
        ConsensusNotion::MajUd | ConsensusNotion::MajDom => unique((0..m).filter(|&a| 2 * counts[a] > n).collect()),
        ConsensusNotion::PlurUd | ConsensusNotion::PlurDom => {
            let max = *counts.iter().max().unwrap();
            if max == 0 {
                None
            } else {
                unique((0..m).filter(|&a| counts[a] == max).collect())
            }
        }
    }
}

pub fn condorcet_loser(prof: &[Matrix]) -> Option<usize> {
    let m = prof[0].len();
    unique(
        (0..m)
            .filter(|&a| {
                (0..m).all(|b| {
                    b == a || prof.iter().filter(|r| r[b][a]).count() > prof.iter().filter(|r| r[a][b]).count()
                })
            })
            .collect(),
    )
}

pub fn outcome(o: ConsensusOutcome) -> Option<usize> {
    o.winner().map(|a| a.index())
}

/// Majority dynamics from the definition: undecided agents take the
/// majority side (ties to the first alternative) and close transitively.
pub fn md(prof: &[Matrix], order: &[(usize, usize)]) -> Vec<Matrix> {
    let mut p: Vec<Matrix> = prof.to_vec();
    for &(a, b) in order {
        let sa = p.iter().filter(|r| r[a][b]).count();
        let sb = p.iter().filter(|r| r[b][a]).count();
        let (w, l) = if sa >= sb { (a, b) } else { (b, a) };
        for r in p.iter_mut() {
            if !r[a][b] && !r[b][a] {
                r[w][l] = true;
                *r = closure(r);
            }
        }
    }
    p
}

/// Every update order on m alternatives: each permutation of the pairs,
/// each orientation.
pub fn all_orders(m: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect();
    let mut perms = Vec::new();
    permute(&mut pairs.clone(), 0, &mut perms);
    let k = pairs.len();
    let mut out = Vec::new();
    for perm in perms {
        for mask in 0..(1u32 << k) {
            out.push(
                perm.iter()
                    .enumerate()
                    .map(|(j, &(a, b))| if mask >> j & 1 == 1 { (b, a) } else { (a, b) })
                    .collect(),
            );
        }
    }
    out
}

fn permute(xs: &mut Vec<(usize, usize)>, k: usize, out: &mut Vec<Vec<(usize, usize)>>) {
    if k == xs.len() {
        out.push(xs.clone());
        return;
    }
    for i in k..xs.len() {
        xs.swap(k, i);
        permute(xs, k + 1, out);
        xs.swap(k, i);
    }
}

pub fn profile_of(ms: &[Matrix]) -> Profile {
    Profile::new(ms[0].len(), ms.iter().map(to_preference).collect()).unwrap()
}
