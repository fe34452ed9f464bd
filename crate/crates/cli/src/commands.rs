use std::fs;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};
use triea::{
    fitness, generate_synthetic, read_csv, run_triea_seeded, write_csv, Archive, Breakdown, Config, EngineError,
    SyntheticError, SyntheticSpec, Tensor, TriclusterCoords,
};

use crate::report::{
    trace_csv, GroundTruth, PlantedReport, RunManifest, RunSummary, TriclusterReport, TriclustersFile,
};
use crate::{CliError, EvaluateArgs, GenerateArgs, RunArgs};

fn read_input(path: &Path) -> Result<(Tensor, Vec<u8>), CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let tensor = read_csv(bytes.as_slice()).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok((tensor, bytes))
}

fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<(), CliError> {
    let mut json = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    json.push('\n');
    fs::write(path, json).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn engine_error(e: EngineError) -> CliError {
    match e {
        EngineError::InvalidConfig(m) => CliError::Usage(m),
        other => CliError::Input(other.to_string()),
    }
}

impl RunArgs {
    pub fn config(&self) -> Config {
        Config {
            population_size: self.pop,
            generations: self.generations,
            p_crossover: self.pc,
            p_mutation: self.pm,
            quality_weights: self.weights.weights(),
            delta: self.delta,
            n_triclusters: self.n_triclusters,
            slope_mode: self.slope_mode,
            seed: self.seed,
            elite_count: self.elite_count,
        }
    }
}

/// Loads, preprocesses and mines the input, then writes `triclusters.json`,
/// one `trace_<k>.csv` per GA run and `manifest.json` into `args.out`.
///
/// An empty archive is not an error here; the caller decides how to report it.
pub fn cmd_run(args: &RunArgs) -> Result<RunSummary, CliError> {
    let started = Instant::now();
    let config = args.config();
    config.validate().map_err(engine_error)?;
    if args.genes_limit == Some(0) {
        return Err(CliError::Usage("--genes-limit must be at least 1".into()));
    }

    let (mut tensor, bytes) = read_input(&args.input)?;
    if let Some(n) = args.genes_limit {
        tensor = tensor.take_genes(n).map_err(|e| CliError::Input(e.to_string()))?;
    }
    if !args.no_normalize {
        tensor = tensor.normalize_minmax();
    }
    let tensor = tensor.impute_missing(args.seed);

    let outcome = run_triea_seeded(&tensor, &config).map_err(engine_error)?;

    fs::create_dir_all(&args.out).map_err(|e| CliError::Io(format!("{}: {e}", args.out.display())))?;
    let file = TriclustersFile {
        entries: outcome.archive.entries().iter().map(|e| TriclusterReport::new(e, &tensor)).collect(),
    };
    write_json(&args.out.join("triclusters.json"), &file)?;
    for (k, run) in outcome.runs.iter().enumerate() {
        let path = args.out.join(format!("trace_{k}.csv"));
        fs::write(&path, trace_csv(&run.trace)).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }

    let summary = RunSummary::from_entries(outcome.runs.len(), &file.entries);
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        input: args.input.display().to_string(),
        input_sha256: hex::encode(Sha256::digest(&bytes)),
        shape: tensor.shape(),
        genes_limit: args.genes_limit,
        normalized: !args.no_normalize,
        config,
        summary: summary.clone(),
        duration_secs: started.elapsed().as_secs_f64(),
    };
    write_json(&args.out.join("manifest.json"), &manifest)?;
    Ok(summary)
}

/// Writes `tensor.csv` and `ground_truth.json` for a synthetic spec file.
pub fn cmd_generate(args: &GenerateArgs) -> Result<GroundTruth, CliError> {
    let text = fs::read_to_string(&args.spec).map_err(|e| CliError::Usage(format!("{}: {e}", args.spec.display())))?;
    let spec: SyntheticSpec =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", args.spec.display())))?;
    let (tensor, planted) = generate_synthetic::<f64>(&spec).map_err(|e| match e {
        SyntheticError::Overlap { .. } => CliError::Overlap(e.to_string()),
        other => CliError::Usage(other.to_string()),
    })?;

    fs::create_dir_all(&args.out).map_err(|e| CliError::Io(format!("{}: {e}", args.out.display())))?;
    let csv_path = args.out.join("tensor.csv");
    let file = fs::File::create(&csv_path).map_err(|e| CliError::Io(format!("{}: {e}", csv_path.display())))?;
    write_csv(&tensor, std::io::BufWriter::new(file))
        .map_err(|e| CliError::Io(format!("{}: {e}", csv_path.display())))?;

    let truth = GroundTruth {
        dims: spec.dims,
        planted: planted
            .into_iter()
            .zip(&spec.planted)
            .map(|(c, p)| PlantedReport {
                genes: c.genes,
                conditions: c.conditions,
                times: c.times,
                pattern: p.pattern,
            })
            .collect(),
    };
    write_json(&args.out.join("ground_truth.json"), &truth)?;
    Ok(truth)
}

#[derive(serde::Deserialize)]
struct CoordsFile {
    genes: Vec<usize>,
    conditions: Vec<usize>,
    times: Vec<usize>,
}

/// Scores the tricluster in `args.coords` against the input tensor.
pub fn cmd_evaluate(args: &EvaluateArgs) -> Result<Breakdown, CliError> {
    let weights = args.weights.weights();
    weights.validate().map_err(CliError::Usage)?;

    let text =
        fs::read_to_string(&args.coords).map_err(|e| CliError::Usage(format!("{}: {e}", args.coords.display())))?;
    let raw: CoordsFile =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", args.coords.display())))?;
    let coords = TriclusterCoords::new(raw.genes, raw.conditions, raw.times);

    let archive = match &args.archive {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            let file: TriclustersFile =
                serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            file.to_archive()
        }
        None => Archive::new(),
    };

    let (mut tensor, _) = read_input(&args.input)?;
    coords.validate(tensor.shape()).map_err(|e| CliError::Input(e.to_string()))?;
    coords.require_min_size(2).map_err(|e| CliError::Usage(e.to_string()))?;
    if args.normalize {
        tensor = tensor.normalize_minmax();
    }
    let tensor = tensor.impute_missing(args.seed);
    fitness(&tensor, &coords, &weights, &archive, args.slope_mode).map_err(|e| CliError::Input(e.to_string()))
}
