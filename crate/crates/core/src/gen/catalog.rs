//! Small hand-built profiles whose behaviour under majority dynamics is
//! known exactly. Each entry carries an order prefix and a list of facts
//! that `Fixture::verify` recomputes.

use std::fmt::Write as _;

use crate::analysis::{control_search_many, loser_to_winner_check, ControlReport, OrderSource};
use crate::consensus::{condorcet_loser, consensus, dominated_by_all, ConsensusNotion, ConsensusOutcome, Threshold};
use crate::dynamics::{md_final, Pair, UpdateOrder};
use crate::error::{Error, Result};
use crate::prefcore::{AltSet, Alternative, LabeledProfile, Preference, Profile};
use crate::rng::master_rng;

use ConsensusNotion::*;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fact {
    Initial { notion: ConsensusNotion, outcome: ConsensusOutcome },
    /// Holds after running any completion of the prefix.
    Final { notion: ConsensusNotion, outcome: ConsensusOutcome },
    /// Every agent ends with this ranking, best first.
    FinalProfileUniform { ranking: Vec<Alternative> },
    InitialCondorcetLoser(Alternative),
    LoserBecomesWinner,
    /// Alternatives ranked last by a strict majority.
    MajorityDominated(AltSet),
    /// Every update order yields this outcome.
    EveryOrder { notion: ConsensusNotion, outcome: ConsensusOutcome },
    /// No update order keeps a consensus.
    NoOrderPreservesExistence { notion: ConsensusNotion },
    /// Each of these alternatives is the final consensus for some order.
    Choosable { notion: ConsensusNotion, alternatives: AltSet },
    NegativeControl { notion: ConsensusNotion, available: bool },
}

impl Fact {
    fn over_all_orders(&self) -> Option<ConsensusNotion> {
        match *self {
            Fact::EveryOrder { notion, .. }
            | Fact::NoOrderPreservesExistence { notion }
            | Fact::Choosable { notion, .. }
            | Fact::NegativeControl { notion, .. } => Some(notion),
            _ => None,
        }
    }

    pub fn describe(&self, labels: &[String]) -> String {
        let o = |x: ConsensusOutcome| outcome_label(x, labels);
        let set = |s: AltSet| format!("{{{}}}", s.iter().map(|a| labels[a.index()].as_str()).collect::<Vec<_>>().join(","));
        match self {
            Fact::Initial { notion, outcome } => format!("initial {notion} = {}", o(*outcome)),
            Fact::Final { notion, outcome } => format!("final {notion} = {}", o(*outcome)),
            Fact::FinalProfileUniform { ranking } => format!(
                "every agent ends with {}",
                ranking.iter().map(|a| labels[a.index()].as_str()).collect::<Vec<_>>().join(">")
            ),
            Fact::InitialCondorcetLoser(a) => format!("initial Condorcet loser = {}", labels[a.index()]),
            Fact::LoserBecomesWinner => "Condorcet loser becomes the Condorcet winner".into(),
            Fact::MajorityDominated(s) => format!("majority-dominated alternatives = {}", set(*s)),
            Fact::EveryOrder { notion, outcome } => format!("every order gives {notion} = {}", o(*outcome)),
            Fact::NoOrderPreservesExistence { notion } => format!("no order keeps a {notion} consensus"),
            Fact::Choosable { notion, alternatives } => format!("{notion} choosable includes {}", set(*alternatives)),
            Fact::NegativeControl { notion, available } => {
                format!("{notion} negative control {}", if *available { "available" } else { "unavailable" })
            }
        }
    }
}

pub fn outcome_label(o: ConsensusOutcome, labels: &[String]) -> String {
    match o {
        ConsensusOutcome::NoConsensus => "none".into(),
        ConsensusOutcome::Winner(a) => labels[a.index()].clone(),
    }
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub summary: &'static str,
    pub labels: Vec<String>,
    pub profile: Profile,
    pub prefix: Vec<Pair>,
    pub facts: Vec<Fact>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactCheck {
    pub fixture: &'static str,
    pub fact: String,
    pub passed: bool,
    pub detail: String,
}

impl Fixture {
    pub fn labeled_profile(&self) -> LabeledProfile {
        LabeledProfile { labels: self.labels.clone(), profile: self.profile.clone() }
    }

    /// The prefix followed by the remaining pairs in lexicographic order.
    pub fn lexicographic_completion(&self) -> UpdateOrder {
        UpdateOrder::complete(self.profile.m(), &self.prefix).expect("catalog prefixes are valid")
    }

    pub fn random_completion(&self, seed: u64) -> UpdateOrder {
        UpdateOrder::complete_randomly(self.profile.m(), &self.prefix, &mut master_rng(seed))
            .expect("catalog prefixes are valid")
    }

    /// Recomputes every fact. Facts about the prefix are checked under the
    /// lexicographic completion and under a random completion drawn from
    /// `seed`.
    pub fn verify(&self, seed: u64) -> Result<Vec<FactCheck>> {
        let completions = [self.lexicographic_completion(), self.random_completion(seed)];
        let finals = completions
            .iter()
            .map(|o| md_final(&self.profile, o))
            .collect::<Result<Vec<_>>>()?;
        let mut notions: Vec<ConsensusNotion> = self.facts.iter().filter_map(Fact::over_all_orders).collect();
        notions.sort();
        notions.dedup();
        let reports = if notions.is_empty() {
            Vec::new()
        } else {
            control_search_many(&notions, &self.profile, OrderSource::Exhaustive, None)?
        };
        let report = |n: ConsensusNotion| -> &ControlReport {
            reports.iter().find(|r| r.notion == n).expect("searched")
        };
        let labels = &self.labels;
        let show = |o: ConsensusOutcome| outcome_label(o, labels);

        let mut checks = Vec::new();
        for fact in &self.facts {
            let (passed, detail) = match fact {
                Fact::Initial { notion, outcome } => {
                    let got = consensus(*notion, &self.profile);
                    (got == *outcome, format!("got {}", show(got)))
                }
                Fact::Final { notion, outcome } => {
                    let got: Vec<_> = finals.iter().map(|p| consensus(*notion, p)).collect();
                    (
                        got.iter().all(|g| g == outcome),
                        format!("got {}", got.iter().map(|&g| show(g)).collect::<Vec<_>>().join(" / ")),
                    )
                }
                Fact::FinalProfileUniform { ranking } => {
                    let target = Preference::linear(
                        self.profile.m(),
                        &ranking.iter().map(|a| a.index()).collect::<Vec<_>>(),
                    )?;
                    let ok = finals.iter().all(|p| p.prefs().iter().all(|q| *q == target));
                    (ok, format!("{} agents", self.profile.n()))
                }
                Fact::InitialCondorcetLoser(a) => {
                    let got = condorcet_loser(&self.profile);
                    (got == ConsensusOutcome::Winner(*a), format!("got {}", show(got)))
                }
                Fact::LoserBecomesWinner => {
                    let mut ok = true;
                    let mut detail = String::new();
                    for o in &completions {
                        let r = loser_to_winner_check(&self.profile, o)?;
                        ok &= r.converted;
                        let _ = write!(detail, "loser {} winner {}; ", show(r.initial_loser), show(r.final_winner));
                    }
                    (ok, detail.trim_end_matches("; ").to_string())
                }
                Fact::MajorityDominated(s) => {
                    let got = dominated_by_all(&self.profile, Threshold::Majority);
                    (got == *s, format!("got {} alternatives", got.len()))
                }
                Fact::EveryOrder { notion, outcome } => {
                    let r = report(*notion);
                    let n = r.count(*outcome);
                    (n == r.orders_examined, format!("{n} of {} orders", r.orders_examined))
                }
                Fact::NoOrderPreservesExistence { notion } => {
                    let r = report(*notion);
                    (
                        r.can_preserve_existence() == Some(false),
                        format!("{} of {} orders end without consensus", r.count(ConsensusOutcome::NoConsensus), r.orders_examined),
                    )
                }
                Fact::Choosable { notion, alternatives } => {
                    let got = report(*notion).choosable();
                    (alternatives.difference(got).is_empty(), format!("choosable has {} alternatives", got.len()))
                }
                Fact::NegativeControl { notion, available } => {
                    let got = report(*notion).negative_control_available();
                    (got == Some(*available), format!("got {got:?}"))
                }
            };
            checks.push(FactCheck { fixture: self.name, fact: fact.describe(labels), passed, detail });
        }
        Ok(checks)
    }
}

struct Builder {
    labels: Vec<String>,
}

impl Builder {
    fn new(labels: &str) -> Self {
        Builder { labels: labels.chars().map(String::from).collect() }
    }

    fn alt(&self, c: char) -> Alternative {
        let i = self.labels.iter().position(|l| l.starts_with(c)).unwrap_or_else(|| panic!("label {c}"));
        Alternative::new(i)
    }

    fn outcome(&self, c: Option<char>) -> ConsensusOutcome {
        c.map(|c| self.alt(c)).into()
    }

    fn set(&self, s: &str) -> AltSet {
        s.chars().map(|c| self.alt(c)).collect()
    }

    /// `"b>c w>c c>a"`: space-separated chains.
    fn agent(&self, spec: &str) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for chain in spec.split_whitespace() {
            let alts: Vec<usize> = chain.split('>').map(|t| self.alt(t.chars().next().unwrap()).index()).collect();
            pairs.extend(alts.windows(2).map(|w| (w[0], w[1])));
        }
        pairs
    }

    fn profile(&self, agents: &[(&str, usize)]) -> Profile {
        let lists: Vec<_> = agents
            .iter()
            .flat_map(|&(spec, copies)| std::iter::repeat_n(self.agent(spec), copies))
            .collect();
        Profile::from_pair_lists(self.labels.len(), &lists).expect("catalog profiles are valid")
    }

    fn prefix(&self, spec: &str) -> Vec<Pair> {
        spec.split(',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                let mut cs = t.chars();
                (self.alt(cs.next().unwrap()), self.alt(cs.next().unwrap()))
            })
            .collect()
    }

    fn initial(&self, notion: ConsensusNotion, c: Option<char>) -> Fact {
        Fact::Initial { notion, outcome: self.outcome(c) }
    }

    fn fin(&self, notion: ConsensusNotion, c: Option<char>) -> Fact {
        Fact::Final { notion, outcome: self.outcome(c) }
    }

    fn every(&self, notion: ConsensusNotion, c: Option<char>) -> Fact {
        Fact::EveryOrder { notion, outcome: self.outcome(c) }
    }

    fn build(
        self,
        name: &'static str,
        summary: &'static str,
        agents: &[(&str, usize)],
        prefix: &str,
        facts: impl FnOnce(&Builder) -> Vec<Fact>,
    ) -> Fixture {
        Fixture {
            name,
            summary,
            profile: self.profile(agents),
            prefix: self.prefix(prefix),
            facts: facts(&self),
            labels: self.labels,
        }
    }
}

pub fn counterexample_catalog() -> Vec<Fixture> {
    let plurdom_agents: &[(&str, usize)] = &[("a>b>c", 2), ("b>a c>a", 2)];
    vec![
        Builder::new("abc").build(
            "example1",
            "two agents rank a over c, two rank b over a, one has no opinion",
            &[("a>c", 2), ("b>a", 2), ("", 1)],
            "ab,bc,ac",
            |b| {
                vec![
                    Fact::FinalProfileUniform { ranking: vec![b.alt('b'), b.alt('a'), b.alt('c')] },
                    b.fin(Cw, Some('b')),
                ]
            },
        ),
        Builder::new("abcw").build(
            "prop2_cw_lost",
            "a Condorcet winner disappears",
            &[("b>c w>c c>a", 1), ("a>b a>c c>w", 1), ("w>a>b>c", 1)],
            "bc,bw",
            |b| vec![b.initial(Cw, Some('w')), b.fin(Cw, None)],
        ),
        Builder::new("abc").build(
            "prop3_plurud_majud_lost",
            "plurality and majority undominated consensus disappear",
            &[("a>c b>c", 1), ("a>b c>b", 1), ("a>b>c", 1), ("b>c>a", 1), ("c>b>a", 1)],
            "ba,ca",
            |b| {
                vec![
                    b.initial(PlurUd, Some('a')),
                    b.initial(MajUd, Some('a')),
                    b.fin(PlurUd, None),
                    b.fin(MajUd, None),
                ]
            },
        ),
        Builder::new("abc").build(
            "prop3_plurdom_lost",
            "plurality dominant consensus disappears",
            plurdom_agents,
            "bc",
            |b| vec![b.initial(PlurDom, Some('a')), b.fin(PlurDom, None)],
        ),
        Builder::new("abc").build(
            "prop3_unanud_lost",
            "unanimity undominated consensus disappears",
            &[("c>b", 2), ("a>c", 1)],
            "ba",
            |b| vec![b.initial(UnanUd, Some('a')), b.fin(UnanUd, None)],
        ),
        Builder::new("wlabx").build(
            "prop5_loser_to_winner",
            "the Condorcet loser becomes the Condorcet winner",
            &[
                ("l>a x>w>b", 1),
                ("l>b x>w>a", 1),
                ("w>a>b>x", 2),
                ("w>a>b>x w>l", 1),
                ("a>b>x>l", 2),
            ],
            "ax,bx,lw",
            |b| {
                vec![
                    b.initial(Cw, Some('w')),
                    Fact::InitialCondorcetLoser(b.alt('l')),
                    Fact::MajorityDominated(AltSet::EMPTY),
                    Fact::LoserBecomesWinner,
                    b.fin(Cw, Some('l')),
                ]
            },
        ),
        Builder::new("wlabcxyz").build(
            "prop6_plurdom_to_loser",
            "the plurality dominant alternative is replaced by the one most agents rank last",
            &[
                ("l>a x>w x>b x>c", 1),
                ("l>b y>w y>a y>c", 1),
                ("l>c z>w z>a z>b", 1),
                ("w>a>x>b>y>c>z>l", 2),
            ],
            "ax,by,cz",
            |b| vec![b.initial(PlurDom, Some('w')), b.fin(PlurDom, Some('l'))],
        ),
        Builder::new("abc").build(
            "prop11_plurdom_no_control",
            "no update order keeps a plurality dominant consensus",
            plurdom_agents,
            "",
            |b| vec![b.initial(PlurDom, Some('a')), Fact::NoOrderPreservesExistence { notion: PlurDom }],
        ),
        Builder::new("abc").build(
            "prop11_plurud_majud_no_control",
            "no update order keeps a plurality or majority undominated consensus",
            &[("c>b>a", 2), ("a>c>b", 1), ("b>c a>c", 2)],
            "",
            |b| {
                vec![
                    b.initial(PlurUd, Some('a')),
                    b.initial(MajUd, Some('a')),
                    Fact::NoOrderPreservesExistence { notion: PlurUd },
                    Fact::NoOrderPreservesExistence { notion: MajUd },
                ]
            },
        ),
        Builder::new("abc").build(
            "prop12_two_unanud",
            "two alternatives undominated for everyone; the first pair decides which wins",
            &[("a>c b>c", 3)],
            "ab",
            |b| {
                vec![
                    b.initial(UnanUd, None),
                    b.fin(UnanUd, Some('a')),
                    Fact::Choosable { notion: UnanUd, alternatives: b.set("ab") },
                    Fact::NegativeControl { notion: UnanUd, available: true },
                ]
            },
        ),
        Builder::new("abc").build(
            "prop13_unandom",
            "every update order generates the same dominant consensus",
            &[("b>a c>a", 1), ("a>c b>c", 2)],
            "",
            |b| {
                vec![
                    b.initial(UnanDom, None),
                    b.initial(MajDom, None),
                    b.initial(PlurDom, None),
                    b.every(UnanDom, Some('b')),
                    b.every(MajDom, Some('b')),
                    b.every(PlurDom, Some('b')),
                    Fact::NegativeControl { notion: UnanDom, available: false },
                ]
            },
        ),
        Builder::new("abc").build(
            "prop13_plurud",
            "every update order generates the same plurality undominated consensus",
            &[("c>a>b", 1), ("b>a>c", 1), ("a>b c>b", 1), ("a>b>c", 1)],
            "",
            |b| {
                vec![
                    b.initial(PlurUd, None),
                    b.every(PlurUd, Some('a')),
                    Fact::NegativeControl { notion: PlurUd, available: false },
                ]
            },
        ),
    ]
}

pub fn find_fixture(name: &str) -> Result<Fixture> {
    counterexample_catalog()
        .into_iter()
        .find(|f| f.name == name)
        .ok_or_else(|| Error::UnknownFixture(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique_and_findable() {
        let cat = counterexample_catalog();
        let mut names: Vec<_> = cat.iter().map(|f| f.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), cat.len());
        assert!(find_fixture("example1").is_ok());
        assert!(matches!(find_fixture("nope"), Err(Error::UnknownFixture(_))));
    }

    #[test]
    fn every_fact_holds() {
        for f in counterexample_catalog() {
            for c in f.verify(2024).unwrap() {
                assert!(c.passed, "{}: {} ({})", c.fixture, c.fact, c.detail);
            }
        }
    }

    #[test]
    fn prefixes_lead_completions() {
        for f in counterexample_catalog() {
            let k = f.prefix.len();
            assert_eq!(&f.lexicographic_completion().pairs()[..k], &f.prefix[..]);
            assert_eq!(&f.random_completion(5).pairs()[..k], &f.prefix[..]);
        }
    }
}
