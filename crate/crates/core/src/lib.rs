//! Majority dynamics over incomplete preferences: how discussing pairs one
//! at a time affects consensus, and how much the order of discussion can
//! steer it.

pub mod analysis;
pub mod consensus;
pub mod dynamics;
pub mod error;
pub mod gen;
pub mod harness;
pub mod prefcore;
pub mod rng;

pub use analysis::{
    classify_all, classify_effect, control_search, control_search_many, loser_to_winner_check, ControlReport,
    Effect, EffectRecord, LoserToWinner, NegativeControl, OrderSource,
};
pub use consensus::{
    condorcet_loser, condorcet_winner, consensus, dominant_alternative, dominated_by_all, parse_notions,
    undominated_set, ConsensusNotion, ConsensusOutcome, OutcomeVector, Threshold, TopCounts,
};
pub use dynamics::{md_final, md_run, md_step, pair, OrderSpace, Pair, StepTrace, UpdateOrder};
pub use error::{Error, Result};
pub use prefcore::{AltSet, Alternative, Preference, Profile, Relation};
