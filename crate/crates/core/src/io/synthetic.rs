//! Synthetic motif benchmark.
//!
//! Every graph is a random base structure (tree, wheel or ladder) with one
//! five-node motif hung off a random base node by a single bridging edge.
//! Normal graphs carry a 5-cycle, anomalies a house (a square with a roof
//! apex). Node attributes are a one-hot degree bucket plus Gaussian noise,
//! so nothing in the attributes says which part of the graph a node belongs
//! to; `node_labels` records that ground truth for explanation scoring.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{AttributeMode, AttributedGraph, GraphDataset};
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseKind {
    Tree,
    Wheel,
    Ladder,
}

/// Node part labels stored in `node_labels`.
pub const PART_BASE: i64 = 0;
pub const PART_CYCLE: i64 = 1;
pub const PART_HOUSE: i64 = 2;

pub const MOTIF_SIZE: usize = 5;
/// Degree buckets: `<=1`, `2`, `3`, `>=4`.
pub const DEGREE_BUCKETS: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticConfig {
    pub num_normal: usize,
    pub num_anomalous: usize,
    pub base_kinds: Vec<BaseKind>,
    /// Inclusive range of base structure sizes.
    pub base_size_range: (usize, usize),
    pub attr_noise_std: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            num_normal: 500,
            num_anomalous: 25,
            base_kinds: vec![BaseKind::Tree, BaseKind::Wheel, BaseKind::Ladder],
            base_size_range: (8, 14),
            attr_noise_std: 0.05,
            seed: 0,
        }
    }
}

impl SyntheticConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.num_anomalous >= self.num_normal {
            return bad(format!(
                "anomalies must be the minority: {} anomalous vs {} normal",
                self.num_anomalous, self.num_normal
            ));
        }
        let (lo, hi) = self.base_size_range;
        if lo < 4 || lo > hi {
            return bad(format!("base size range must satisfy 4 <= lo <= hi, got ({lo}, {hi})"));
        }
        if self.base_kinds.is_empty() {
            return bad("at least one base kind is required".into());
        }
        if !(self.attr_noise_std >= 0.0 && self.attr_noise_std.is_finite()) {
            return bad(format!("attribute noise must be a non-negative real, got {}", self.attr_noise_std));
        }
        Ok(())
    }
}

/// Uniform random recursive tree: node `i` attaches to a uniform `j < i`.
pub fn random_tree(n: usize, rng: &mut impl Rng) -> Vec<(usize, usize)> {
    (1..n).map(|i| (rng.random_range(0..i), i)).collect()
}

/// Hub 0 joined to every node of a rim cycle `1..n`.
pub fn wheel(n: usize) -> Vec<(usize, usize)> {
    let rim = n - 1;
    let mut e: Vec<_> = (1..n).map(|i| (0, i)).collect();
    e.extend((0..rim).map(|i| (1 + i, 1 + (i + 1) % rim)));
    e
}

/// `2 x (n / 2)` grid: rails `0..len` and `len..2len` with rungs.
pub fn ladder(n: usize) -> Vec<(usize, usize)> {
    let len = n / 2;
    let mut e = Vec::new();
    for i in 0..len {
        e.push((i, len + i));
        if i + 1 < len {
            e.push((i, i + 1));
            e.push((len + i, len + i + 1));
        }
    }
    e
}

pub fn cycle(n: usize) -> Vec<(usize, usize)> {
    (0..n).map(|i| (i, (i + 1) % n)).collect()
}

/// Square `0-1-2-3` with apex `4` joined to `2` and `3`.
pub fn house() -> Vec<(usize, usize)> {
    vec![(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (3, 4)]
}

fn base_structure(kind: BaseKind, size: usize, rng: &mut impl Rng) -> (usize, Vec<(usize, usize)>) {
    match kind {
        BaseKind::Tree => (size, random_tree(size, rng)),
        BaseKind::Wheel => (size, wheel(size)),
        BaseKind::Ladder => (2 * (size / 2), ladder(size)),
    }
}

fn degree_bucket(d: usize) -> usize {
    d.clamp(1, DEGREE_BUCKETS) - 1
}

pub fn gen_synthetic(cfg: &SyntheticConfig) -> Result<GraphDataset> {
    cfg.validate()?;
    let mut rng = seed::rng(cfg.seed);
    let noise = Normal::new(0.0, cfg.attr_noise_std).map_err(|e| Error::InvalidParameter(e.to_string()))?;

    let mut roles: Vec<bool> = std::iter::repeat_n(false, cfg.num_normal)
        .chain(std::iter::repeat_n(true, cfg.num_anomalous))
        .collect();
    roles.shuffle(&mut rng);

    let mut graphs = Vec::with_capacity(roles.len());
    for (id, &anomalous) in roles.iter().enumerate() {
        let kind = cfg.base_kinds[rng.random_range(0..cfg.base_kinds.len())];
        let size = rng.random_range(cfg.base_size_range.0..=cfg.base_size_range.1);
        let (base_n, mut edges) = base_structure(kind, size, &mut rng);
        let (motif, part) = if anomalous { (house(), PART_HOUSE) } else { (cycle(MOTIF_SIZE), PART_CYCLE) };
        edges.extend(motif.iter().map(|&(u, v)| (base_n + u, base_n + v)));
        let anchor = rng.random_range(0..base_n);
        edges.push((anchor, base_n));
        let n = base_n + MOTIF_SIZE;

        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let attributes = degree
            .into_iter()
            .map(|d| {
                let mut row = vec![0.0; DEGREE_BUCKETS];
                row[degree_bucket(d)] = 1.0;
                for x in &mut row {
                    *x += noise.sample(&mut rng);
                }
                row
            })
            .collect();
        let labels = (0..n).map(|v| if v < base_n { PART_BASE } else { part }).collect();
        let mut g = AttributedGraph::new(id, n, edges, attributes)?.with_node_labels(labels);
        g.anomaly_label = Some(anomalous);
        graphs.push(g);
    }
    GraphDataset::new("synthetic", graphs, AttributeMode::RawAttributes)
}
