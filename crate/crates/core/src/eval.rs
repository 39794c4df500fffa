//! AUC and the repeated-seed experiment runner.

use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{AttributeMode, GraphDataset};
use crate::io::{gen_synthetic, json, parse_tudataset, prepare_glad, SyntheticConfig};
use crate::params::{DetectParams, EmbedParams};
use crate::pipeline::run_pipeline;
use crate::seed::{self, Component};

/// Probability that a random anomaly scores above a random normal, ties
/// counted one half. Scores must be oriented so that larger = more
/// anomalous. Computed as a rank sum with midranks.
pub fn auc(scores: &[f64], labels: &[bool]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::InvalidParameter(format!(
            "{} scores for {} labels",
            scores.len(),
            labels.len()
        )));
    }
    let pos = labels.iter().filter(|&&l| l).count() as u64;
    let neg = labels.len() as u64 - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::SingleClass);
    }
    if let Some(s) = scores.iter().find(|s| s.is_nan()) {
        return Err(Error::InvalidParameter(format!("score {s} is not comparable")));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    // Twice the midrank sum of the positives keeps everything integral.
    let mut twice_rank_sum: u64 = 0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // ranks i+1 ..= j+1; midrank*2 = i + j + 2
        let twice_mid = (i + j + 2) as u64;
        let tied_pos = order[i..=j].iter().filter(|&&k| labels[k]).count() as u64;
        twice_rank_sum += twice_mid * tied_pos;
        i = j + 1;
    }
    let twice_u = twice_rank_sum - pos * (pos + 1);
    Ok(twice_u as f64 / (2 * pos * neg) as f64)
}

/// Where an experiment's graphs come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DatasetSpec {
    /// Regenerated per repetition with a seed split from the run seed.
    Synthetic(SyntheticConfig),
    /// A dataset JSON file carrying anomaly labels; fixed across repetitions.
    Json { path: PathBuf },
    /// TUDataset directory; the anomalous class is downsampled per repetition.
    TuDataset {
        dir: PathBuf,
        name: String,
        attribute_mode: Option<AttributeMode>,
        anomalous_class: i64,
        anomaly_ratio: f64,
    },
}

impl DatasetSpec {
    pub fn name(&self) -> String {
        match self {
            Self::Synthetic(_) => "synthetic".into(),
            Self::Json { path } => path.file_stem().map_or_else(|| "dataset".into(), |s| s.to_string_lossy().into_owned()),
            Self::TuDataset { name, .. } => name.clone(),
        }
    }

    /// Builds the dataset for one repetition.
    pub fn resolve(&self, run_seed: u64, cache: Option<&GraphDataset>) -> Result<GraphDataset> {
        match self {
            Self::Synthetic(cfg) => {
                gen_synthetic(&SyntheticConfig { seed: seed::derive(run_seed, Component::Synthetic, 0), ..cfg.clone() })
            }
            Self::Json { path } => match cache {
                Some(ds) => Ok(ds.clone()),
                None => json::read_dataset(path),
            },
            Self::TuDataset { dir, name, attribute_mode, anomalous_class, anomaly_ratio } => {
                let full = match cache {
                    Some(ds) => ds.clone(),
                    None => parse_tudataset(dir, name, *attribute_mode)?,
                };
                prepare_glad(&full, *anomalous_class, *anomaly_ratio, seed::derive(run_seed, Component::Downsample, 0))
            }
        }
    }

    /// Seed-independent part of the dataset, loaded once.
    fn load_fixed(&self) -> Result<Option<GraphDataset>> {
        match self {
            Self::Synthetic(_) => Ok(None),
            Self::Json { path } => json::read_dataset(path).map(Some),
            Self::TuDataset { dir, name, attribute_mode, .. } => parse_tudataset(dir, name, *attribute_mode).map(Some),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentParams {
    pub root_seed: u64,
    pub num_seeds: usize,
    pub embed: EmbedParams,
    pub detect: DetectParams,
    pub dataset: DatasetSpec,
}

/// Outcome of one repetition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedRun {
    pub seed: u64,
    pub auc: Option<f64>,
    pub tau: Option<f64>,
    pub k: Option<usize>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub dataset: String,
    /// Mean AUC over successful repetitions.
    pub auc: Option<f64>,
    pub per_seed_aucs: Vec<f64>,
    pub mean: Option<f64>,
    /// Population standard deviation.
    pub std: Option<f64>,
    pub runs: Vec<SeedRun>,
    pub params: ExperimentParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_clock_seconds: Option<f64>,
}

impl EvalReport {
    /// Pretty JSON, the on-disk report format.
    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json_string()?)?;
        Ok(())
    }
}

pub fn mean_std(xs: &[f64]) -> Option<(f64, f64)> {
    if xs.is_empty() {
        return None;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    Some((mean, var.sqrt()))
}

fn run_one(spec: &DatasetSpec, fixed: Option<&GraphDataset>, embed: &EmbedParams, det: &DetectParams, seed: u64) -> Result<SeedRun> {
    let ds = spec.resolve(seed, fixed)?;
    let labels = ds
        .anomaly_labels()
        .ok_or_else(|| Error::InvalidDataset(format!("{} lacks anomaly labels", ds.name)))?;
    let embed = EmbedParams { seed, ..*embed };
    match run_pipeline(&ds, &embed, det) {
        Ok(run) => Ok(SeedRun {
            seed,
            auc: Some(auc(&run.result.anomaly_scores(), &labels)?),
            tau: Some(run.result.params.tau),
            k: Some(run.result.k()),
            error: None,
        }),
        Err(e @ Error::NoClusters { .. }) => {
            log::warn!("seed {seed}: {e}");
            Ok(SeedRun { seed, auc: None, tau: None, k: Some(0), error: Some(e.to_string()) })
        }
        Err(e) => Err(e),
    }
}

/// Runs the pipeline for seeds `root_seed .. root_seed + num_seeds` and
/// aggregates AUC. Zero-cluster failures are recorded per seed; any other
/// error aborts.
pub fn run_experiment(
    spec: &DatasetSpec,
    embed: &EmbedParams,
    det: &DetectParams,
    root_seed: u64,
    num_seeds: usize,
) -> Result<EvalReport> {
    if num_seeds == 0 {
        return Err(Error::InvalidParameter("num_seeds must be at least 1".into()));
    }
    let started = Instant::now();
    let fixed = spec.load_fixed()?;
    let seeds: Vec<u64> = (0..num_seeds as u64).map(|i| root_seed.wrapping_add(i)).collect();
    let one = |&s: &u64| run_one(spec, fixed.as_ref(), embed, det, s);
    #[cfg(feature = "parallel")]
    let runs: Vec<SeedRun> = {
        use rayon::prelude::*;
        seeds.par_iter().map(one).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let runs: Vec<SeedRun> = seeds.iter().map(one).collect::<Result<_>>()?;

    let per_seed_aucs: Vec<f64> = runs.iter().filter_map(|r| r.auc).collect();
    let stats = mean_std(&per_seed_aucs);
    Ok(EvalReport {
        dataset: spec.name(),
        auc: stats.map(|s| s.0),
        per_seed_aucs,
        mean: stats.map(|s| s.0),
        std: stats.map(|s| s.1),
        runs,
        params: ExperimentParams { root_seed, num_seeds, embed: *embed, detect: *det, dataset: spec.clone() },
        wall_clock_seconds: Some(started.elapsed().as_secs_f64()),
    })
}
