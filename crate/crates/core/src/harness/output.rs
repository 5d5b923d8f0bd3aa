//! Frequency rows, CSV rendering and the metadata sidecar.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{Experiment, ExperimentConfig, CHOOSE_TARGET};
use crate::consensus::ConsensusNotion;
use crate::error::{Error, Result};
use crate::prefcore::default_label;

pub const EFFECTS_HEADER: [&str; 8] =
    ["notion", "n", "m", "samples", "effect", "numerator", "denominator", "frequency"];
pub const COMPLETENESS_HEADER: [&str; 7] =
    ["notion", "bin_percent", "samples", "effect", "numerator", "denominator", "frequency"];
pub const CONTROL_HEADER: [&str; 5] = ["notion", "control_type", "numerator", "denominator", "frequency"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    Agents { n: usize, m: usize, samples: u64 },
    /// `samples` is the number of profiles that fell in the bin.
    Bin { percent: u32, samples: u64 },
    Control,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyRow {
    pub notion: ConsensusNotion,
    pub cell: Cell,
    pub label: &'static str,
    pub numerator: u64,
    pub denominator: u64,
}

impl FrequencyRow {
    pub fn effects(
        notion: ConsensusNotion,
        n: usize,
        m: usize,
        samples: u64,
        label: &'static str,
        numerator: u64,
        denominator: u64,
    ) -> Self {
        FrequencyRow { notion, cell: Cell::Agents { n, m, samples }, label, numerator, denominator }
    }

    pub fn completeness(
        notion: ConsensusNotion,
        percent: u32,
        samples: u64,
        label: &'static str,
        numerator: u64,
        denominator: u64,
    ) -> Self {
        FrequencyRow { notion, cell: Cell::Bin { percent, samples }, label, numerator, denominator }
    }

    pub fn control(notion: ConsensusNotion, label: &'static str, numerator: u64, denominator: u64) -> Self {
        FrequencyRow { notion, cell: Cell::Control, label, numerator, denominator }
    }

    /// `None` when nothing was counted.
    pub fn frequency(&self) -> Option<f64> {
        (self.denominator > 0).then(|| self.numerator as f64 / self.denominator as f64)
    }

    fn record(&self) -> Vec<String> {
        let freq = self.frequency().map(|f| format!("{f:.6}")).unwrap_or_default();
        let mut rec = vec![self.notion.tag().to_string()];
        match self.cell {
            Cell::Agents { n, m, samples } => rec.extend([n.to_string(), m.to_string(), samples.to_string()]),
            Cell::Bin { percent, samples } => rec.extend([percent.to_string(), samples.to_string()]),
            Cell::Control => {}
        }
        rec.extend([self.label.to_string(), self.numerator.to_string(), self.denominator.to_string(), freq]);
        rec
    }
}

/// Run settings written next to the CSV. Contains nothing that depends on
/// the machine or the number of workers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Metadata {
    pub experiment: Experiment,
    pub agent_counts: Vec<usize>,
    pub alternatives: usize,
    pub samples_per_cell: u64,
    pub seed: u64,
    pub order_policy: String,
    pub generator: String,
    pub notions: Vec<&'static str>,
    pub rng: &'static str,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub consistency_violations: Option<u64>,
}

impl Metadata {
    pub fn for_config(c: &ExperimentConfig) -> Self {
        let mut notes = Vec::new();
        if c.agent_counts.contains(&1) {
            notes.push("n=1 rows are computed, but with a single agent every notion reduces to that agent's ranking".into());
        }
        match c.experiment {
            Experiment::Completeness => notes.push(
                "bin_percent is the share of comparisons present, rounded to the nearest multiple of 5 (halves up); samples counts profiles in the bin".into(),
            ),
            Experiment::Control => notes.push(format!(
                "choose_a counts profiles where some order makes {} the final consensus, including profiles where it already is",
                default_label(CHOOSE_TARGET)
            )),
            Experiment::Effects => {}
        }
        Metadata {
            experiment: c.experiment,
            agent_counts: c.agent_counts.clone(),
            alternatives: c.m,
            samples_per_cell: c.samples,
            seed: c.seed,
            order_policy: c.order_policy.describe(c.m),
            generator: format!("{:?}", c.generator),
            notions: c.notions.iter().map(|n| n.tag()).collect(),
            rng: "ChaCha8; profile i of agent count n uses stream (n << 32) | i",
            notes,
            consistency_violations: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub experiment: Experiment,
    pub rows: Vec<FrequencyRow>,
    pub metadata: Metadata,
}

/// `out.csv` gets its settings in `out.csv.meta.json`.
pub fn metadata_path(csv: &Path) -> PathBuf {
    let mut s = csv.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

impl Dataset {
    pub fn new(experiment: Experiment, rows: Vec<FrequencyRow>, metadata: Metadata) -> Self {
        Dataset { experiment, rows, metadata }
    }

    pub fn header(&self) -> &'static [&'static str] {
        match self.experiment {
            Experiment::Effects => &EFFECTS_HEADER,
            Experiment::Completeness => &COMPLETENESS_HEADER,
            Experiment::Control => &CONTROL_HEADER,
        }
    }

    pub fn row(&self, notion: ConsensusNotion, label: &str) -> impl Iterator<Item = &FrequencyRow> {
        let label = label.to_string();
        self.rows.iter().filter(move |r| r.notion == notion && r.label == label)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(self.header())?;
        for r in &self.rows {
            out.write_record(r.record())?;
        }
        out.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("CSV is ASCII"))
    }

    pub fn metadata_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.metadata)? + "\n")
    }

    /// Writes the CSV to `path` and the metadata next to it.
    pub fn write_files(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        fs::write(path, self.to_csv_string()?).map_err(|e| Error::io(path, e))?;
        let meta = metadata_path(path);
        fs::write(&meta, self.metadata_json()?).map_err(|e| Error::io(&meta, e))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_denominator_gives_empty_frequency() {
        let r = FrequencyRow::control(ConsensusNotion::MajDom, "lose_existence", 0, 0);
        assert_eq!(r.record(), vec!["MajDom", "lose_existence", "0", "0", ""]);
        let r = FrequencyRow::effects(ConsensusNotion::Cw, 3, 5, 10, "lost", 1, 3);
        assert_eq!(r.record(), vec!["CW", "3", "5", "10", "lost", "1", "3", "0.333333"]);
    }

    #[test]
    fn sidecar_path() {
        assert_eq!(metadata_path(Path::new("out/e.csv")), PathBuf::from("out/e.csv.meta.json"));
    }
}
