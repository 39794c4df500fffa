//! Prototype discovery, cluster growing and anomaly scoring.
//!
//! The unassigned set starts as every graph. Each round picks the graph most
//! similar to the unassigned set as a prototype, pairs it with its nearest
//! neighbour and repeatedly rebuilds the cluster from all unassigned graphs
//! whose point-set similarity to the current cluster exceeds a geometrically
//! decaying threshold `gamma`. Rounds stop once fewer than two graphs remain
//! or the first threshold of a round is already at or below `tau`. A graph's
//! score is its point-set similarity to the nearest cluster: high means
//! normal.

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;
use crate::wl::{dot, GraphEmbedding};
use crate::params::EmbedParams;

/// A grown cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    /// 1-based creation order.
    pub index: usize,
    pub prototype_id: usize,
    /// Ascending graph ids.
    pub member_ids: Vec<usize>,
    /// Kernel mean map of the members. Not serialized; see
    /// [`DetectionResult::rehydrate`].
    #[serde(skip)]
    pub mean_vector: Vec<f64>,
}

impl Cluster {
    /// Point-set similarity of `g` to this cluster.
    pub fn kernel(&self, g: &GraphEmbedding) -> Result<f64> {
        if self.mean_vector.len() != g.vector.len() {
            return Err(Error::IncompatibleEmbeddings(format!(
                "cluster {} mean has length {}, graph {} has {}",
                self.index,
                self.mean_vector.len(),
                g.graph_id,
                g.vector.len()
            )));
        }
        Ok(dot(&g.vector, &self.mean_vector) / g.norm())
    }
}

/// Parameters recorded with a detection run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunParams {
    pub tau: f64,
    pub rho: f64,
    /// Set when `tau` came from [`auto_tau`].
    pub tau_quantile: Option<f64>,
    #[serde(flatten)]
    pub embed: Option<EmbedParams>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionResult {
    /// Similarity to the nearest cluster per graph; low = anomalous.
    pub scores: Vec<f64>,
    /// 1-based index of the nearest cluster per graph.
    pub nearest_cluster: Vec<Option<usize>>,
    pub clusters: Vec<Cluster>,
    pub prototypes: Vec<usize>,
    pub params: RunParams,
}

impl DetectionResult {
    pub fn k(&self) -> usize {
        self.clusters.len()
    }

    /// Scores oriented so that larger means more anomalous.
    pub fn anomaly_scores(&self) -> Vec<f64> {
        self.scores.iter().map(|s| -s).collect()
    }

    /// Recomputes cluster means from member embeddings, e.g. after loading a
    /// result from JSON.
    pub fn rehydrate(&mut self, embeddings: &[GraphEmbedding]) -> Result<()> {
        check_embeddings(embeddings)?;
        for c in &mut self.clusters {
            if let Some(&bad) = c.member_ids.iter().find(|&&m| m >= embeddings.len()) {
                return Err(Error::UnknownGraph(bad));
            }
            c.mean_vector = mean_of(embeddings, &c.member_ids);
        }
        Ok(())
    }

    /// The cluster maximizing the point-set kernel for `g`; lowest index on
    /// ties.
    pub fn nearest(&self, g: &GraphEmbedding) -> Result<(&Cluster, f64)> {
        let mut best: Option<(&Cluster, f64)> = None;
        for c in &self.clusters {
            let k = c.kernel(g)?;
            if best.is_none_or(|(_, b)| k > b) {
                best = Some((c, k));
            }
        }
        best.ok_or(Error::NoClusters { first_gamma: f64::NAN, tau: self.params.tau })
    }
}

fn check_embeddings(embeddings: &[GraphEmbedding]) -> Result<()> {
    for (i, e) in embeddings.iter().enumerate() {
        if e.graph_id != i {
            return Err(Error::InvalidDataset(format!("embedding at position {i} has graph id {}", e.graph_id)));
        }
        if i > 0 {
            embeddings[0].check_compatible(e)?;
        }
    }
    Ok(())
}

/// Arithmetic mean of the member vectors, summed in the given order.
fn mean_of(embeddings: &[GraphEmbedding], members: &[usize]) -> Vec<f64> {
    let mut sum = vec![0.0; embeddings[members[0]].vector.len()];
    for &m in members {
        for (s, x) in sum.iter_mut().zip(&embeddings[m].vector) {
            *s += x;
        }
    }
    let n = members.len() as f64;
    sum.iter_mut().for_each(|s| *s /= n);
    sum
}

/// `K(g, S) = <Phi(g), mean_{y in S} Phi(y)>`, normalized like
/// [`crate::wl::graph_similarity`].
pub fn point_set_kernel(g: &GraphEmbedding, set: &[&GraphEmbedding]) -> Result<f64> {
    let first = set.first().ok_or(Error::EmptySet)?;
    for s in set {
        g.check_compatible(s)?;
    }
    let mut mean = vec![0.0; first.vector.len()];
    for s in set {
        for (m, x) in mean.iter_mut().zip(&s.vector) {
            *m += x;
        }
    }
    let n = set.len() as f64;
    mean.iter_mut().for_each(|m| *m /= n);
    Ok(dot(&g.vector, &mean) / g.norm())
}

/// Id in `pi` with the largest point-set similarity to all of `pi` (itself
/// included). Lowest id wins ties.
pub fn find_prototype(embeddings: &[GraphEmbedding], pi: &[usize]) -> Result<usize> {
    if pi.is_empty() {
        return Err(Error::EmptySet);
    }
    let mean = mean_of(embeddings, pi);
    Ok(argmax(pi.iter().map(|&g| (g, dot(&embeddings[g].vector, &mean)))).0)
}

/// First maximum over `(id, value)` pairs in iteration order.
fn argmax(items: impl Iterator<Item = (usize, f64)>) -> (usize, f64) {
    let mut best = (usize::MAX, f64::NEG_INFINITY);
    for (id, v) in items {
        if best.0 == usize::MAX || v > best.1 {
            best = (id, v);
        }
    }
    best
}

/// Outcome of growing a cluster from one prototype.
#[derive(Debug, Clone, PartialEq)]
pub enum Growth {
    Grown {
        cluster: Cluster,
        /// Number of rebuild passes executed.
        passes: usize,
        first_gamma: f64,
    },
    /// The first threshold was already at or below `tau`.
    Rejected { first_gamma: f64 },
}

fn check_rates(tau: f64, rho: f64) -> Result<()> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidParameter(format!("rho must lie in (0, 1), got {rho}")));
    }
    if !tau.is_finite() || tau <= 0.0 {
        return Err(Error::InvalidParameter(format!("tau must be positive and finite, got {tau}")));
    }
    Ok(())
}

/// Grows a cluster around prototype `p` inside the unassigned set `pi`
/// (ascending ids). The prototype is kept in the cluster across rebuilds.
/// The returned cluster has index 0; [`detect`] numbers clusters.
pub fn grow_cluster(embeddings: &[GraphEmbedding], pi: &[usize], p: usize, tau: f64, rho: f64) -> Result<Growth> {
    check_rates(tau, rho)?;
    if pi.len() < 2 {
        return Err(Error::InvalidParameter(format!("cluster growth needs at least 2 graphs, got {}", pi.len())));
    }
    if !pi.contains(&p) {
        return Err(Error::UnknownGraph(p));
    }
    let norm = embeddings[p].norm();
    let proto = &embeddings[p].vector;
    let (q, best) = argmax(pi.iter().filter(|&&g| g != p).map(|&g| (g, dot(&embeddings[g].vector, proto))));
    let mut gamma = (1.0 - rho) * (best / norm);
    let first_gamma = gamma;
    if gamma <= tau {
        return Ok(Growth::Rejected { first_gamma });
    }

    let mut members = vec![p.min(q), p.max(q)];
    let mut passes = 0;
    while gamma > tau {
        let mean = mean_of(embeddings, &members);
        members = pi
            .iter()
            .copied()
            .filter(|&g| g == p || dot(&embeddings[g].vector, &mean) / norm > gamma)
            .collect();
        gamma *= 1.0 - rho;
        passes += 1;
    }
    let mean_vector = mean_of(embeddings, &members);
    Ok(Growth::Grown {
        cluster: Cluster { index: 0, prototype_id: p, member_ids: members, mean_vector },
        passes,
        first_gamma,
    })
}

/// Runs cluster discovery over all embeddings and scores every graph.
///
/// Embedding graph ids must equal their positions. Fails with
/// [`Error::NoClusters`] when not a single cluster forms.
pub fn detect(embeddings: &[GraphEmbedding], tau: f64, rho: f64) -> Result<DetectionResult> {
    check_rates(tau, rho)?;
    if embeddings.len() < 2 {
        return Err(Error::InvalidParameter(format!("detection needs at least 2 graphs, got {}", embeddings.len())));
    }
    check_embeddings(embeddings)?;

    let mut pi: Vec<usize> = (0..embeddings.len()).collect();
    let mut clusters: Vec<Cluster> = Vec::new();
    let mut rejected_gamma = None;
    while pi.len() > 1 {
        let p = find_prototype(embeddings, &pi)?;
        match grow_cluster(embeddings, &pi, p, tau, rho)? {
            Growth::Rejected { first_gamma } => {
                rejected_gamma = Some(first_gamma);
                break;
            }
            Growth::Grown { mut cluster, .. } => {
                cluster.index = clusters.len() + 1;
                pi.retain(|g| cluster.member_ids.binary_search(g).is_err());
                clusters.push(cluster);
            }
        }
    }
    if clusters.is_empty() {
        return Err(Error::NoClusters { first_gamma: rejected_gamma.unwrap_or(f64::NAN), tau });
    }

    let (scores, nearest_cluster) = score_all(embeddings, &clusters);
    let prototypes = clusters.iter().map(|c| c.prototype_id).collect();
    Ok(DetectionResult {
        scores,
        nearest_cluster,
        clusters,
        prototypes,
        params: RunParams { tau, rho, tau_quantile: None, embed: None },
    })
}

fn score_all(embeddings: &[GraphEmbedding], clusters: &[Cluster]) -> (Vec<f64>, Vec<Option<usize>>) {
    let score_one = |g: &GraphEmbedding| {
        let (idx, s) = argmax(clusters.iter().map(|c| (c.index, dot(&g.vector, &c.mean_vector) / g.norm())));
        (s, Some(idx))
    };
    #[cfg(feature = "parallel")]
    let pairs: Vec<(f64, Option<usize>)> = {
        use rayon::prelude::*;
        embeddings.par_iter().map(score_one).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let pairs: Vec<(f64, Option<usize>)> = embeddings.iter().map(score_one).collect();
    pairs.into_iter().unzip()
}

/// Sample quantile (linear interpolation between order statistics) of the
/// pairwise similarities `sim(g_i, g_j)`, `i < j`. Datasets above
/// [`AUTO_TAU_EXACT_LIMIT`] graphs use a seeded subsample of that many graphs.
pub fn auto_tau(embeddings: &[GraphEmbedding], quantile: f64, seed: u64) -> Result<f64> {
    if embeddings.len() < 2 {
        return Err(Error::InvalidParameter("auto_tau needs at least 2 graphs".into()));
    }
    if !(0.0..=1.0).contains(&quantile) {
        return Err(Error::InvalidParameter(format!("quantile must lie in [0, 1], got {quantile}")));
    }
    for e in &embeddings[1..] {
        embeddings[0].check_compatible(e)?;
    }
    let chosen: Vec<usize> = if embeddings.len() > AUTO_TAU_EXACT_LIMIT {
        let mut idx = sample(&mut seed::rng(seed), embeddings.len(), AUTO_TAU_EXACT_LIMIT).into_vec();
        idx.sort_unstable();
        idx
    } else {
        (0..embeddings.len()).collect()
    };
    let norm = embeddings[0].norm();
    let mut sims = Vec::with_capacity(chosen.len() * (chosen.len() - 1) / 2);
    for (a, &i) in chosen.iter().enumerate() {
        for &j in &chosen[a + 1..] {
            sims.push(dot(&embeddings[i].vector, &embeddings[j].vector) / norm);
        }
    }
    sims.sort_by(f64::total_cmp);
    Ok(quantile_sorted(&sims, quantile))
}

pub const AUTO_TAU_EXACT_LIMIT: usize = 2000;

fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
    }
}
