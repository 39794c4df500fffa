//! Node-level contrast between a graph and its nearest prototype.

use serde::{Deserialize, Serialize};

use crate::detect::DetectionResult;
use crate::error::{Error, Result};
use crate::graph::GraphDataset;
use crate::ik::IkModel;
use crate::wl::{dot, wl_propagate, EmbeddingMode, GraphEmbedding, NodeEmbeddings};

/// Node normality scores `c(u) = <row_u, Phi(target)>`, normalized like
/// graph similarity. Rows follow `target.mode`: iteration-h rows in final
/// mode, concatenated per-iteration rows in concat mode.
pub fn node_scores(ne: &NodeEmbeddings, target: &GraphEmbedding) -> Result<Vec<f64>> {
    let expected_len = match target.mode {
        EmbeddingMode::Final => ne.dim,
        EmbeddingMode::Concat => ne.dim * (ne.h + 1),
    };
    let levels = match target.mode {
        EmbeddingMode::Final => 1,
        EmbeddingMode::Concat => ne.h + 1,
    };
    if target.vector.len() != expected_len || target.t != ne.t || target.levels != levels {
        return Err(Error::IncompatibleEmbeddings(format!(
            "node rows of graph {} ({:?}, len {expected_len}) vs embedding of graph {} (len {})",
            ne.graph_id,
            target.mode,
            target.graph_id,
            target.vector.len()
        )));
    }
    let norm = target.norm();
    Ok((0..ne.num_nodes()).map(|v| dot(&ne.mode_row(target.mode, v), &target.vector) / norm).collect())
}

/// Everything needed to recompute node embeddings on demand: graph
/// embeddings are kept, node rows are rebuilt per request.
#[derive(Debug, Clone)]
pub struct EmbeddingStore<'a> {
    pub dataset: &'a GraphDataset,
    pub model: &'a IkModel,
    pub h: usize,
    pub mode: EmbeddingMode,
    pub embeddings: Vec<GraphEmbedding>,
}

impl EmbeddingStore<'_> {
    pub fn embedding(&self, id: usize) -> Result<&GraphEmbedding> {
        self.embeddings.get(id).ok_or(Error::UnknownGraph(id))
    }

    pub fn node_embeddings(&self, id: usize) -> Result<NodeEmbeddings> {
        let g = self.dataset.graphs.get(id).ok_or(Error::UnknownGraph(id))?;
        wl_propagate(g, self.model, self.h)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Explanation {
    pub anomaly_id: usize,
    pub prototype_id: usize,
    pub cluster_index: usize,
    pub similarity: f64,
    pub anomaly_node_scores: Vec<f64>,
    pub prototype_node_scores: Vec<f64>,
    pub highlight_fraction: f64,
    /// Lowest-scored `ceil(q * n)` nodes of each side, ascending by score.
    pub anomaly_lowest_nodes: Vec<usize>,
    pub prototype_lowest_nodes: Vec<usize>,
}

/// Indices of the `ceil(fraction * n)` lowest scores; ties by node index.
pub fn lowest_nodes(scores: &[f64], fraction: f64) -> Vec<usize> {
    let take = ((fraction * scores.len() as f64).ceil() as usize).min(scores.len());
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(a.cmp(&b)));
    order.truncate(take);
    order
}

/// Explains graph `anomaly_id` against the prototype of its nearest cluster.
///
/// `result` must carry cluster means (fresh from detection or rehydrated).
pub fn explain_pair(
    result: &DetectionResult,
    store: &EmbeddingStore<'_>,
    anomaly_id: usize,
    highlight_fraction: f64,
) -> Result<Explanation> {
    if result.clusters.is_empty() {
        return Err(Error::NoClusters { first_gamma: f64::NAN, tau: result.params.tau });
    }
    if !(0.0..=1.0).contains(&highlight_fraction) {
        return Err(Error::InvalidParameter(format!("highlight fraction must lie in [0, 1], got {highlight_fraction}")));
    }
    let anomaly = store.embedding(anomaly_id)?;
    let (cluster, _) = result.nearest(anomaly)?;
    let prototype_id = cluster.prototype_id;
    let prototype = store.embedding(prototype_id)?;

    let anomaly_node_scores = node_scores(&store.node_embeddings(anomaly_id)?, prototype)?;
    let prototype_node_scores = node_scores(&store.node_embeddings(prototype_id)?, anomaly)?;
    Ok(Explanation {
        anomaly_id,
        prototype_id,
        cluster_index: cluster.index,
        similarity: crate::wl::graph_similarity(anomaly, prototype)?,
        anomaly_lowest_nodes: lowest_nodes(&anomaly_node_scores, highlight_fraction),
        prototype_lowest_nodes: lowest_nodes(&prototype_node_scores, highlight_fraction),
        anomaly_node_scores,
        prototype_node_scores,
        highlight_fraction,
    })
}
