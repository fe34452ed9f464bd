//! Long-format CSV ingestion and export.
//!
//! The canonical layout is one row per cell with header
//! `gene,condition,time,value`; an empty `value` marks the cell as missing.

use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use ndarray::Array3;
use thiserror::Error;

use crate::num::Scalar;
use crate::tensor::{ExpressionTensor, TensorError};

pub const CSV_HEADER: [&str; 4] = ["gene", "condition", "time", "value"];

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error("header must be exactly `gene,condition,time,value`, found `{found}`")]
    Header { found: String },
    #[error("line {line}: duplicate cell (gene {gene:?}, condition {condition:?}, time {time:?})")]
    Duplicate { line: u64, gene: String, condition: String, time: String },
    #[error("condition {condition:?} has no rows at time point {time:?}")]
    RaggedTimeGrid { condition: String, time: String },
    #[error("input has no data rows")]
    NoRows,
    #[error("loaded shape {found:?} does not match expected {expected:?}")]
    ShapeMismatch { expected: [usize; 3], found: [usize; 3] },
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Optional expectations checked after loading.
#[derive(Debug, Clone, Default)]
pub struct DatasetDescriptor {
    pub expected_shape: Option<[usize; 3]>,
}

/// Sorts time labels numerically when every label parses as a number, else lexically.
pub fn sort_time_labels(labels: &mut [String]) {
    let numeric: Option<Vec<f64>> = labels.iter().map(|l| l.trim().parse::<f64>().ok()).collect();
    match numeric {
        Some(nums) if nums.iter().all(|x| x.is_finite()) => {
            let mut paired: Vec<(f64, String)> = nums.into_iter().zip(labels.iter().cloned()).collect();
            paired.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
            for (slot, (_, l)) in labels.iter_mut().zip(paired) {
                *slot = l;
            }
        }
        _ => labels.sort(),
    }
}

struct Interner {
    index: HashMap<String, usize>,
    labels: Vec<String>,
}

impl Interner {
    fn new() -> Self {
        Interner { index: HashMap::new(), labels: Vec::new() }
    }

    fn intern(&mut self, s: &str) -> usize {
        if let Some(&i) = self.index.get(s) {
            return i;
        }
        let i = self.labels.len();
        self.index.insert(s.to_owned(), i);
        self.labels.push(s.to_owned());
        i
    }
}

/// Loads a long-format CSV file. No normalization or imputation is applied.
pub fn load_dataset<T: Scalar>(
    path: impl AsRef<Path>,
    descriptor: Option<&DatasetDescriptor>,
) -> Result<ExpressionTensor<T>, LoadError> {
    let file = File::open(path)?;
    let tensor = read_csv(file)?;
    if let Some(expected) = descriptor.and_then(|d| d.expected_shape) {
        if tensor.shape() != expected {
            return Err(LoadError::ShapeMismatch { expected, found: tensor.shape() });
        }
    }
    Ok(tensor)
}

/// Parses long-format CSV from any reader.
///
/// Genes and conditions are ordered by first appearance; time labels by
/// [`sort_time_labels`]. Triples absent from the file are marked missing.
pub fn read_csv<T: Scalar, R: Read>(reader: R) -> Result<ExpressionTensor<T>, LoadError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_reader(reader);
    let header = rdr.headers().map_err(|e| LoadError::Malformed { line: 1, message: e.to_string() })?.clone();
    let fields: Vec<&str> = header.iter().map(str::trim).collect();
    if fields != CSV_HEADER {
        return Err(LoadError::Header { found: header.iter().collect::<Vec<_>>().join(",") });
    }

    let mut genes = Interner::new();
    let mut conds = Interner::new();
    let mut times = Interner::new();
    // (gene, condition, time) -> (value, line)
    let mut cells: HashMap<(usize, usize, usize), (Option<f64>, u64)> = HashMap::new();

    for record in rdr.records() {
        let record = record
            .map_err(|e| LoadError::Malformed { line: e.position().map_or(0, |p| p.line()), message: e.to_string() })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 4 {
            return Err(LoadError::Malformed { line, message: format!("expected 4 fields, found {}", record.len()) });
        }
        let gene = record[0].trim();
        let cond = record[1].trim();
        let time = record[2].trim();
        if gene.is_empty() || cond.is_empty() || time.is_empty() {
            return Err(LoadError::Malformed { line, message: "gene, condition and time must be non-empty".into() });
        }
        let raw = record[3].trim();
        let value = if raw.is_empty() {
            None
        } else {
            let v: f64 = raw
                .parse()
                .map_err(|_| LoadError::Malformed { line, message: format!("value {raw:?} is not a number") })?;
            if !v.is_finite() {
                return Err(LoadError::Malformed { line, message: format!("value {raw:?} is not finite") });
            }
            Some(v)
        };
        let key = (genes.intern(gene), conds.intern(cond), times.intern(time));
        if cells.insert(key, (value, line)).is_some() {
            return Err(LoadError::Duplicate {
                line,
                gene: gene.to_owned(),
                condition: cond.to_owned(),
                time: time.to_owned(),
            });
        }
    }
    if cells.is_empty() {
        return Err(LoadError::NoRows);
    }

    let mut time_labels = times.labels.clone();
    sort_time_labels(&mut time_labels);
    let time_pos: HashMap<usize, usize> =
        time_labels.iter().enumerate().map(|(pos, l)| (times.index[l], pos)).collect();

    // every condition must have at least one row at every time point
    let mut seen: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); conds.labels.len()];
    for &(_, c, t) in cells.keys() {
        seen[c].insert(time_pos[&t]);
    }
    for (c, present) in seen.iter().enumerate() {
        if let Some(gap) = (0..time_labels.len()).find(|t| !present.contains(t)) {
            return Err(LoadError::RaggedTimeGrid {
                condition: conds.labels[c].clone(),
                time: time_labels[gap].clone(),
            });
        }
    }

    let shape = (genes.labels.len(), conds.labels.len(), time_labels.len());
    let mut values = Array3::from_elem(shape, T::nan());
    let mut missing = Array3::from_elem(shape, true);
    for (&(g, c, t), &(v, _)) in &cells {
        if let Some(v) = v {
            let idx = [g, c, time_pos[&t]];
            values[idx] = T::lit(v);
            missing[idx] = false;
        }
    }
    Ok(ExpressionTensor::new(values, genes.labels, conds.labels, time_labels, missing)?)
}

/// Writes every cell in `(gene, condition, time)` order; missing cells get an empty value.
pub fn write_csv<T: Scalar, W: Write>(tensor: &ExpressionTensor<T>, writer: W) -> Result<(), std::io::Error> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(CSV_HEADER)?;
    let [ng, nc, nt] = tensor.shape();
    for g in 0..ng {
        for c in 0..nc {
            for t in 0..nt {
                let value = if tensor.is_missing(g, c, t) { String::new() } else { tensor.get(g, c, t).to_string() };
                wtr.write_record([
                    tensor.gene_ids()[g].as_str(),
                    tensor.condition_ids()[c].as_str(),
                    tensor.time_labels()[t].as_str(),
                    value.as_str(),
                ])?;
            }
        }
    }
    wtr.flush()
}

pub fn export_csv<T: Scalar>(tensor: &ExpressionTensor<T>, path: impl AsRef<Path>) -> Result<(), std::io::Error> {
    let file = std::io::BufWriter::new(File::create(path)?);
    write_csv(tensor, file)
}
