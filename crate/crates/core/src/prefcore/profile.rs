use std::fmt;

use super::relation::{check_m, AltSet, Alternative, Preference};
use crate::error::{Error, Result};

/// A sequence of `n` preferences over the same `m` alternatives.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Profile {
    m: usize,
    prefs: Vec<Preference>,
}

impl Profile {
    pub fn new(m: usize, prefs: Vec<Preference>) -> Result<Self> {
        check_m(m)?;
        if let Some(p) = prefs.iter().find(|p| p.m() != m) {
            return Err(Error::MismatchedAlternatives {
                expected: m,
                found: p.m(),
            });
        }
        Ok(Profile { m, prefs })
    }

    /// `n` agents without any opinion.
    pub fn empty(n: usize, m: usize) -> Result<Self> {
        let p = Preference::empty(m)?;
        Ok(Profile { m, prefs: vec![p; n] })
    }

    /// Builds a profile from per-agent pair lists, closing each one.
    pub fn from_pair_lists(m: usize, agents: &[Vec<(usize, usize)>]) -> Result<Self> {
        let prefs = agents
            .iter()
            .enumerate()
            .map(|(i, pairs)| {
                Preference::from_pairs(m, pairs).map_err(|e| Error::Agent {
                    agent: i,
                    source: Box::new(e),
                })
            })
            .collect::<Result<_>>()?;
        Profile::new(m, prefs)
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.prefs.len()
    }

    #[inline]
    pub fn prefs(&self) -> &[Preference] {
        &self.prefs
    }

    pub(crate) fn prefs_mut(&mut self) -> &mut [Preference] {
        &mut self.prefs
    }

    pub fn into_prefs(self) -> Vec<Preference> {
        self.prefs
    }

    pub fn alternatives(&self) -> impl Iterator<Item = Alternative> {
        (0..self.m).map(Alternative::new)
    }

    pub fn all_alternatives(&self) -> AltSet {
        AltSet::full(self.m)
    }

    /// Same agents in a different order, `order[k]` = source index of agent `k`.
    pub fn permute_agents(&self, order: &[usize]) -> Profile {
        Profile {
            m: self.m,
            prefs: order.iter().map(|&i| self.prefs[i]).collect(),
        }
    }

    /// Every preference relabelled by `perm[old] = new`.
    pub fn relabel(&self, perm: &[usize]) -> Profile {
        Profile {
            m: self.m,
            prefs: self.prefs.iter().map(|p| p.relabel(perm)).collect(),
        }
    }

    pub fn is_complete(&self) -> bool {
        self.prefs.iter().all(Preference::is_complete)
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.prefs).finish()
    }
}

/// Number of agents with `a ≻ b`.
pub fn support(profile: &Profile, a: Alternative, b: Alternative) -> Result<usize> {
    if a == b {
        return Err(Error::SameAlternative(a));
    }
    Ok(support_unchecked(profile.prefs(), a, b))
}

#[inline]
pub(crate) fn support_unchecked(prefs: &[Preference], a: Alternative, b: Alternative) -> usize {
    prefs.iter().filter(|p| p.prefers(a, b)).count()
}

/// All pairwise supports at once, `get(a, b)` = support of `a ≻ b`.
#[derive(Debug, Clone)]
pub struct SupportMatrix {
    m: usize,
    counts: Vec<u32>,
}

impl SupportMatrix {
    pub fn of(profile: &Profile) -> Self {
        Self::from_prefs(profile.m(), profile.prefs())
    }

    pub(crate) fn from_prefs(m: usize, prefs: &[Preference]) -> Self {
        let mut counts = vec![0u32; m * m];
        for p in prefs {
            for (a, b) in p.relation().pairs() {
                counts[a.index() * m + b.index()] += 1;
            }
        }
        SupportMatrix { m, counts }
    }

    #[inline]
    pub fn get(&self, a: Alternative, b: Alternative) -> usize {
        self.counts[a.index() * self.m + b.index()] as usize
    }
}

/// Fraction of agent-pair comparisons actually present in the profile.
pub fn completeness_level(profile: &Profile) -> f64 {
    let m = profile.m();
    let possible = profile.n() * m * (m - 1) / 2;
    if possible == 0 {
        return 0.0;
    }
    let provided: usize = profile.prefs().iter().map(Preference::compared_pairs).sum();
    provided as f64 / possible as f64
}
