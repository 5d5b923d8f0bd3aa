//! Consensus notions over (possibly incomplete) profiles.
//!
//! A notion yields an alternative only when exactly one alternative
//! qualifies; otherwise the outcome is [`ConsensusOutcome::NoConsensus`].

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::prefcore::{AltSet, Alternative, Preference, Profile, SupportMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConsensusNotion {
    /// Condorcet winner.
    Cw,
    /// Undominated in every agent's preference.
    UnanUd,
    /// Dominant in every agent's preference.
    UnanDom,
    /// Undominated for a strict majority of agents.
    MajUd,
    /// Dominant for a strict majority of agents.
    MajDom,
    /// Undominated for the most agents (positive count).
    PlurUd,
    /// Dominant for the most agents (positive count).
    PlurDom,
}

impl ConsensusNotion {
    pub const ALL: [ConsensusNotion; 7] = [
        ConsensusNotion::Cw,
        ConsensusNotion::UnanUd,
        ConsensusNotion::UnanDom,
        ConsensusNotion::MajUd,
        ConsensusNotion::MajDom,
        ConsensusNotion::PlurUd,
        ConsensusNotion::PlurDom,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            ConsensusNotion::Cw => "CW",
            ConsensusNotion::UnanUd => "UnanUD",
            ConsensusNotion::UnanDom => "UnanDom",
            ConsensusNotion::MajUd => "MajUD",
            ConsensusNotion::MajDom => "MajDom",
            ConsensusNotion::PlurUd => "PlurUD",
            ConsensusNotion::PlurDom => "PlurDom",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ConsensusNotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ConsensusNotion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        ConsensusNotion::ALL
            .into_iter()
            .find(|n| n.tag() == s)
            .ok_or_else(|| Error::UnknownNotion(s.to_string()))
    }
}

/// Parses a comma-separated list of notion tags; `all` selects every notion.
pub fn parse_notions(s: &str) -> Result<Vec<ConsensusNotion>, Error> {
    if s.trim() == "all" {
        return Ok(ConsensusNotion::ALL.to_vec());
    }
    let mut out: Vec<ConsensusNotion> = s.split(',').map(|t| t.trim().parse()).collect::<Result<_, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// A consensus alternative or its absence (⊥).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConsensusOutcome {
    NoConsensus,
    Winner(Alternative),
}

impl ConsensusOutcome {
    pub fn winner(self) -> Option<Alternative> {
        match self {
            ConsensusOutcome::Winner(a) => Some(a),
            ConsensusOutcome::NoConsensus => None,
        }
    }

    pub fn is_consensus(self) -> bool {
        matches!(self, ConsensusOutcome::Winner(_))
    }

    fn from_unique(set: AltSet) -> Self {
        set.single().map_or(ConsensusOutcome::NoConsensus, ConsensusOutcome::Winner)
    }
}

impl From<Option<Alternative>> for ConsensusOutcome {
    fn from(a: Option<Alternative>) -> Self {
        a.map_or(ConsensusOutcome::NoConsensus, ConsensusOutcome::Winner)
    }
}

pub fn undominated_set(pref: &Preference) -> AltSet {
    pref.undominated()
}

pub fn dominant_alternative(pref: &Preference) -> Option<Alternative> {
    pref.dominant()
}

pub fn condorcet_winner(profile: &Profile) -> ConsensusOutcome {
    condorcet(profile.m(), &SupportMatrix::of(profile), |x, y| x > y)
}

pub fn condorcet_loser(profile: &Profile) -> ConsensusOutcome {
    condorcet(profile.m(), &SupportMatrix::of(profile), |x, y| x < y)
}

fn condorcet(m: usize, sm: &SupportMatrix, beats: impl Fn(usize, usize) -> bool) -> ConsensusOutcome {
    let alts = || (0..m).map(Alternative::new);
    let found: AltSet = alts()
        .filter(|&a| alts().filter(|&b| b != a).all(|b| beats(sm.get(a, b), sm.get(b, a))))
        .collect();
    ConsensusOutcome::from_unique(found)
}

/// Per-alternative counts of agents ranking it undominated and dominant.
#[derive(Debug, Clone, Copy)]
pub struct TopCounts {
    n: usize,
    m: usize,
    undominated: [u32; crate::prefcore::MAX_ALTERNATIVES],
    dominant: [u32; crate::prefcore::MAX_ALTERNATIVES],
}

impl TopCounts {
    pub fn of(m: usize, prefs: &[Preference]) -> Self {
        let mut tc = TopCounts {
            n: prefs.len(),
            m,
            undominated: [0; crate::prefcore::MAX_ALTERNATIVES],
            dominant: [0; crate::prefcore::MAX_ALTERNATIVES],
        };
        for p in prefs {
            for a in p.undominated().iter() {
                tc.undominated[a.index()] += 1;
            }
            if let Some(a) = p.dominant() {
                tc.dominant[a.index()] += 1;
            }
        }
        tc
    }

    pub fn undominated(&self, a: Alternative) -> usize {
        self.undominated[a.index()] as usize
    }

    pub fn dominant(&self, a: Alternative) -> usize {
        self.dominant[a.index()] as usize
    }

    fn counts(&self, notion: ConsensusNotion) -> &[u32] {
        match notion {
            ConsensusNotion::UnanUd | ConsensusNotion::MajUd | ConsensusNotion::PlurUd => &self.undominated[..self.m],
            _ => &self.dominant[..self.m],
        }
    }

    /// Alternatives meeting the count condition of a (non-CW) notion,
    /// before the uniqueness rule is applied.
    pub fn qualifying(&self, notion: ConsensusNotion) -> AltSet {
        let counts = self.counts(notion);
        let n = self.n;
        let pick = |keep: &dyn Fn(usize) -> bool| -> AltSet {
            counts
                .iter()
                .enumerate()
                .filter(|&(_, &c)| keep(c as usize))
                .map(|(i, _)| Alternative::new(i))
                .collect()
        };
        match notion {
            ConsensusNotion::Cw => panic!("CW is not a count-based notion"),
            ConsensusNotion::UnanUd | ConsensusNotion::UnanDom => pick(&|c| c == n),
            ConsensusNotion::MajUd | ConsensusNotion::MajDom => pick(&|c| 2 * c > n),
            ConsensusNotion::PlurUd | ConsensusNotion::PlurDom => {
                let max = counts.iter().copied().max().unwrap_or(0) as usize;
                if max == 0 {
                    AltSet::EMPTY
                } else {
                    pick(&|c| c == max)
                }
            }
        }
    }

    pub fn outcome(&self, notion: ConsensusNotion) -> ConsensusOutcome {
        let q = self.qualifying(notion);
        if matches!(notion, ConsensusNotion::UnanDom | ConsensusNotion::MajDom) && self.n > 0 {
            // two alternatives cannot both be dominant for over half the agents
            debug_assert!(q.len() <= 1, "{notion}: {q:?}");
        }
        ConsensusOutcome::from_unique(q)
    }
}

/// The consensus outcome of `notion` on `profile`.
pub fn consensus(notion: ConsensusNotion, profile: &Profile) -> ConsensusOutcome {
    match notion {
        ConsensusNotion::Cw => condorcet_winner(profile),
        _ => TopCounts::of(profile.m(), profile.prefs()).outcome(notion),
    }
}

/// Outcomes for several notions, sharing the per-agent scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutcomeVector([ConsensusOutcome; 7]);

impl OutcomeVector {
    pub fn of(m: usize, prefs: &[Preference]) -> Self {
        let tc = TopCounts::of(m, prefs);
        let cw = condorcet(m, &SupportMatrix::from_prefs(m, prefs), |x, y| x > y);
        OutcomeVector(ConsensusNotion::ALL.map(|n| match n {
            ConsensusNotion::Cw => cw,
            other => tc.outcome(other),
        }))
    }

    pub fn get(&self, notion: ConsensusNotion) -> ConsensusOutcome {
        self.0[notion.index()]
    }
}

/// Agents needed for `dominated_by_all`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threshold {
    All,
    /// Strictly more than half of the agents.
    Majority,
}

/// Alternatives ranked below every other alternative by enough agents.
///
/// An agent missing any comparison involving `a` does not count as
/// dominating `a` by all alternatives.
pub fn dominated_by_all(profile: &Profile, threshold: Threshold) -> AltSet {
    let n = profile.n();
    profile
        .alternatives()
        .filter(|&a| {
            let c = profile.prefs().iter().filter(|p| p.is_bottom(a)).count();
            match threshold {
                Threshold::All => n > 0 && c == n,
                Threshold::Majority => 2 * c > n,
            }
        })
        .collect()
}
