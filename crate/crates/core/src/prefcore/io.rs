//! Profile documents.
//!
//! ```json
//! {
//!   "m": 3,
//!   "labels": ["a", "b", "c"],
//!   "agents": [[["a", "c"]], [["b", "a"]], []]
//! }
//! ```
//!
//! Each agent is a list of `[better, worse]` label pairs. `labels` is
//! optional and defaults to `a, b, c, ...`. Pairs are closed transitively
//! and then validated; a cycle or other violation rejects the document.
//! Writing emits the covering pairs (transitive reduction) of each agent.

use std::collections::HashMap;
use std::path::Path;

use serde::Deserialize;

use super::profile::Profile;
use super::relation::{default_labels, Alternative, Preference};
use crate::error::{Error, Result};

#[derive(Debug, Deserialize)]
struct ProfileDocument {
    m: usize,
    #[serde(default)]
    labels: Option<Vec<String>>,
    agents: Vec<Vec<(String, String)>>,
}

/// A profile together with the display labels of its alternatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledProfile {
    pub labels: Vec<String>,
    pub profile: Profile,
}

impl LabeledProfile {
    pub fn with_default_labels(profile: Profile) -> Self {
        LabeledProfile {
            labels: default_labels(profile.m()),
            profile,
        }
    }

    pub fn label(&self, a: Alternative) -> &str {
        &self.labels[a.index()]
    }

    pub fn lookup(&self, label: &str) -> Result<Alternative> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(Alternative::new)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }
}

pub fn parse_profile(text: &str) -> Result<LabeledProfile> {
    let doc: ProfileDocument = serde_json::from_str(text)?;
    let labels = match doc.labels {
        Some(labels) => {
            if labels.len() != doc.m {
                return Err(Error::ProfileFormat(format!(
                    "{} labels for m = {}",
                    labels.len(),
                    doc.m
                )));
            }
            labels
        }
        None => {
            super::relation::check_m(doc.m)?;
            default_labels(doc.m)
        }
    };
    let mut index = HashMap::new();
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.as_str(), i).is_some() {
            return Err(Error::ProfileFormat(format!("duplicate label {l:?}")));
        }
    }
    let lookup = |l: &str| index.get(l).copied().ok_or_else(|| Error::UnknownLabel(l.to_string()));
    let agents = doc
        .agents
        .iter()
        .map(|pairs| {
            pairs
                .iter()
                .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let profile = Profile::from_pair_lists(doc.m, &agents)?;
    Ok(LabeledProfile { labels, profile })
}

pub fn read_profile(path: &Path) -> Result<LabeledProfile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_profile(&text)
}

/// Covering pairs of a preference: `a ≻ b` with nothing strictly between.
pub fn covering_pairs(pref: &Preference) -> Vec<(Alternative, Alternative)> {
    let rel = pref.relation();
    rel.pairs()
        .filter(|&(a, b)| rel.row(a).intersection(rel.column(b)).is_empty())
        .collect()
}

/// One agent per line, each as its covering pairs.
pub fn render_profile(lp: &LabeledProfile) -> String {
    let agents: Vec<String> = lp
        .profile
        .prefs()
        .iter()
        .map(|p| {
            let pairs: Vec<(&str, &str)> = covering_pairs(p).into_iter().map(|(a, b)| (lp.label(a), lp.label(b))).collect();
            serde_json::to_string(&pairs).expect("pairs serialize")
        })
        .collect();
    let labels = serde_json::to_string(&lp.labels).expect("labels serialize");
    let body = if agents.is_empty() {
        "[]".to_string()
    } else {
        format!("[\n    {}\n  ]", agents.join(",\n    "))
    };
    format!("{{\n  \"m\": {},\n  \"labels\": {labels},\n  \"agents\": {body}\n}}\n", lp.profile.m())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_closure() {
        let lp = parse_profile(r#"{"m": 3, "agents": [[["a","b"],["b","c"]], []]}"#).unwrap();
        assert_eq!(lp.labels, vec!["a", "b", "c"]);
        let p = lp.profile.prefs()[0];
        assert!(p.prefers(Alternative::new(0), Alternative::new(2)));
        assert_eq!(lp.profile.n(), 2);
    }

    #[test]
    fn custom_labels() {
        let lp = parse_profile(r#"{"m": 3, "labels": ["w","l","x"], "agents": [[["l","w"]]]}"#).unwrap();
        assert_eq!(lp.lookup("l").unwrap(), Alternative::new(1));
        assert!(lp.profile.prefs()[0].prefers(Alternative::new(1), Alternative::new(0)));
    }

    #[test]
    fn rejects_cycles_and_unknown_labels() {
        let err = parse_profile(r#"{"m": 3, "agents": [[["a","b"],["b","c"],["c","a"]]]}"#).unwrap_err();
        assert!(matches!(err, Error::Agent { agent: 0, .. }), "{err}");
        let err = parse_profile(r#"{"m": 3, "agents": [[["a","q"]]]}"#).unwrap_err();
        assert!(matches!(err, Error::UnknownLabel(_)));
        let err = parse_profile(r#"{"m": 3, "labels": ["a","a","b"], "agents": []}"#).unwrap_err();
        assert!(matches!(err, Error::ProfileFormat(_)));
        let err = parse_profile(r#"{"m": 3, "agents": [[["a","a"]]]}"#).unwrap_err();
        match err {
            Error::Agent { source, .. } => assert!(matches!(*source, Error::ClosureCreatesCycle(_, _))),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn render_then_parse_is_identity() {
        let text = r#"{"m": 4, "agents": [[["a","b"],["b","c"],["a","d"]], [["d","c"]], []]}"#;
        let lp = parse_profile(text).unwrap();
        let again = parse_profile(&render_profile(&lp)).unwrap();
        assert_eq!(lp, again);
    }
}
