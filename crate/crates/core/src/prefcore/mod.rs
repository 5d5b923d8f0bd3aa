//! Incomplete preferences: dominance tables, closure, validation, tiers,
//! profiles and the profile document format.

mod io;
mod profile;
mod relation;
mod tiers;

pub use io::{covering_pairs, parse_profile, read_profile, render_profile, LabeledProfile};
pub use profile::{completeness_level, support, Profile, SupportMatrix};
pub(crate) use profile::support_unchecked;
pub(crate) use relation::check_m;
pub use relation::{
    default_label, default_labels, transitive_closure, validate_preference, AltSet, Alternative, Preference,
    Relation, Violation, MAX_ALTERNATIVES,
};
pub use tiers::{is_weak_ordering, tier_partition, NotWeakOrdering, TierPartition};
