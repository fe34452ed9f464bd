//! On-disk formats written by the CLI.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use triea::{Archive, ArchiveEntry, Breakdown, Config, GenerationTrace, Pattern, Tensor, TriclusterCoords};

/// One archived tricluster with resolved labels and its fitness breakdown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriclusterReport {
    pub genes: Vec<usize>,
    pub conditions: Vec<usize>,
    pub times: Vec<usize>,
    #[serde(default)]
    pub gene_labels: Vec<String>,
    #[serde(default)]
    pub condition_labels: Vec<String>,
    #[serde(default)]
    pub time_labels: Vec<String>,
    pub msr: f64,
    pub lsl: f64,
    pub weights: f64,
    pub distinction: f64,
    pub f: f64,
}

impl TriclusterReport {
    pub fn new(entry: &ArchiveEntry<f64>, tensor: &Tensor) -> Self {
        let c = &entry.coords;
        let b = &entry.breakdown;
        let pick = |ids: &[String], idx: &[usize]| idx.iter().map(|&i| ids[i].clone()).collect();
        TriclusterReport {
            genes: c.genes.clone(),
            conditions: c.conditions.clone(),
            times: c.times.clone(),
            gene_labels: pick(tensor.gene_ids(), &c.genes),
            condition_labels: pick(tensor.condition_ids(), &c.conditions),
            time_labels: pick(tensor.time_labels(), &c.times),
            msr: b.msr,
            lsl: b.lsl,
            weights: b.weights_term,
            distinction: b.distinction_term,
            f: b.f,
        }
    }

    pub fn coords(&self) -> TriclusterCoords {
        TriclusterCoords::new(self.genes.clone(), self.conditions.clone(), self.times.clone())
    }

    pub fn breakdown(&self) -> Breakdown {
        Breakdown {
            msr: self.msr,
            lsl: self.lsl,
            weights_term: self.weights,
            distinction_term: self.distinction,
            f: self.f,
        }
    }
}

/// Contents of `triclusters.json`, in discovery order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TriclustersFile {
    pub entries: Vec<TriclusterReport>,
}

impl TriclustersFile {
    pub fn to_archive(&self) -> Archive<f64> {
        let mut archive = Archive::new();
        for e in &self.entries {
            archive.push(e.coords(), e.breakdown());
        }
        archive
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub runs: usize,
    pub archived: usize,
    pub mean_lsl: Option<f64>,
    pub mean_msr: Option<f64>,
}

impl RunSummary {
    pub fn from_entries(runs: usize, entries: &[TriclusterReport]) -> Self {
        let mean = |f: fn(&TriclusterReport) -> f64| {
            (!entries.is_empty()).then(|| entries.iter().map(f).sum::<f64>() / entries.len() as f64)
        };
        RunSummary { runs, archived: entries.len(), mean_lsl: mean(|e| e.lsl), mean_msr: mean(|e| e.msr) }
    }
}

/// Contents of `manifest.json`: enough to rerun and verify a result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub input: String,
    pub input_sha256: String,
    pub shape: [usize; 3],
    pub genes_limit: Option<usize>,
    pub normalized: bool,
    pub config: Config,
    pub summary: RunSummary,
    pub duration_secs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedReport {
    pub genes: Vec<usize>,
    pub conditions: Vec<usize>,
    pub times: Vec<usize>,
    pub pattern: Pattern,
}

/// Contents of `ground_truth.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub dims: [usize; 3],
    pub planted: Vec<PlantedReport>,
}

pub const TRACE_HEADER: &str = "generation,best_f,mean_f";

/// Renders a trace as CSV with one row per evaluated generation.
pub fn trace_csv(trace: &GenerationTrace<f64>) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for r in &trace.records {
        let _ = writeln!(out, "{},{},{}", r.generation, r.best_f, r.mean_f);
    }
    out
}
