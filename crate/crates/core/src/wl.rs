//! Weisfeiler-Lehman propagation of IK node vectors and graph mean embeddings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{AttributedGraph, GraphDataset};
use crate::ik::{IkFeature, IkModel};

/// Which propagated rows form the graph embedding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingMode {
    /// Node mean of the iteration-h rows only.
    #[default]
    Final,
    /// Node means of iterations 0..=h, concatenated.
    Concat,
}

impl std::str::FromStr for EmbeddingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "final" => Ok(Self::Final),
            "concat" => Ok(Self::Concat),
            other => Err(Error::InvalidParameter(format!("unknown embedding mode `{other}`"))),
        }
    }
}

/// Per-node feature vectors for every WL iteration of one graph.
///
/// Iteration 0 is kept sparse (the binary IK map); iterations `1..=h` are
/// dense row-major `num_nodes x dim` matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeEmbeddings {
    pub graph_id: usize,
    pub h: usize,
    pub t: usize,
    pub dim: usize,
    pub base: Vec<IkFeature>,
    pub propagated: Vec<Vec<f64>>,
}

impl NodeEmbeddings {
    pub fn num_nodes(&self) -> usize {
        self.base.len()
    }

    /// Dense row of node `v` at `iteration`.
    pub fn row(&self, iteration: usize, v: usize) -> Vec<f64> {
        assert!(iteration <= self.h, "iteration {iteration} beyond depth {}", self.h);
        if iteration == 0 {
            self.base[v].to_dense(self.dim)
        } else {
            self.propagated[iteration - 1][v * self.dim..(v + 1) * self.dim].to_vec()
        }
    }

    /// Row of node `v` in the layout `mode` uses for graph embeddings.
    pub fn mode_row(&self, mode: EmbeddingMode, v: usize) -> Vec<f64> {
        match mode {
            EmbeddingMode::Final => self.row(self.h, v),
            EmbeddingMode::Concat => (0..=self.h).flat_map(|it| self.row(it, v)).collect(),
        }
    }
}

/// Maps each node through `model` and applies `h` rounds of
/// `phi_k(v) = (phi_{k-1}(v) + mean_{u in N(v)} phi_{k-1}(u)) / 2`.
///
/// Isolated nodes keep their previous row.
pub fn wl_propagate(g: &AttributedGraph, model: &IkModel, h: usize) -> Result<NodeEmbeddings> {
    let base = g.attributes.iter().map(|x| model.map(x)).collect::<Result<Vec<_>>>()?;
    let dim = model.dim();
    let n = g.num_nodes;
    let adj = g.adjacency();

    let mut propagated: Vec<Vec<f64>> = Vec::with_capacity(h);
    for it in 1..=h {
        let mut next = vec![0.0; n * dim];
        for v in 0..n {
            let row = &mut next[v * dim..(v + 1) * dim];
            let nbrs = &adj[v];
            let mut own = vec![0.0; dim];
            let mut acc = vec![0.0; dim];
            if it == 1 {
                for &i in &base[v].active {
                    own[i] = 1.0;
                }
                for &u in nbrs {
                    for &i in &base[u].active {
                        acc[i] += 1.0;
                    }
                }
            } else {
                let prev = &propagated[it - 2];
                own.copy_from_slice(&prev[v * dim..(v + 1) * dim]);
                for &u in nbrs {
                    for (a, p) in acc.iter_mut().zip(&prev[u * dim..(u + 1) * dim]) {
                        *a += p;
                    }
                }
            }
            if nbrs.is_empty() {
                row.copy_from_slice(&own);
                continue;
            }
            let k = nbrs.len() as f64;
            for ((r, o), a) in row.iter_mut().zip(&own).zip(&acc) {
                *r = 0.5 * (o + a / k);
            }
        }
        propagated.push(next);
    }
    Ok(NodeEmbeddings { graph_id: g.id, h, t: model.t, dim, base, propagated })
}

/// Graph-level embedding: node mean of propagated rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphEmbedding {
    pub graph_id: usize,
    pub vector: Vec<f64>,
    pub mode: EmbeddingMode,
    /// Number of IK partitionings behind the vector.
    pub t: usize,
    /// Concatenated iteration blocks: 1 in final mode, h+1 in concat mode.
    pub levels: usize,
}

impl GraphEmbedding {
    /// Divisor that maps raw dot products into `[0, 1]`: `t * levels`.
    pub fn norm(&self) -> f64 {
        (self.t * self.levels) as f64
    }

    pub fn check_compatible(&self, other: &GraphEmbedding) -> Result<()> {
        if self.mode != other.mode
            || self.vector.len() != other.vector.len()
            || self.t != other.t
            || self.levels != other.levels
        {
            return Err(Error::IncompatibleEmbeddings(format!(
                "graph {} ({:?}, len {}) vs graph {} ({:?}, len {})",
                self.graph_id,
                self.mode,
                self.vector.len(),
                other.graph_id,
                other.mode,
                other.vector.len()
            )));
        }
        Ok(())
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn iteration_mean(ne: &NodeEmbeddings, iteration: usize) -> Vec<f64> {
    let n = ne.num_nodes();
    let mut sum = vec![0.0; ne.dim];
    if iteration == 0 {
        for f in &ne.base {
            for &i in &f.active {
                sum[i] += 1.0;
            }
        }
    } else {
        for row in ne.propagated[iteration - 1].chunks_exact(ne.dim) {
            for (s, r) in sum.iter_mut().zip(row) {
                *s += r;
            }
        }
    }
    sum.iter_mut().for_each(|s| *s /= n as f64);
    sum
}

pub fn graph_embedding(ne: &NodeEmbeddings, mode: EmbeddingMode) -> Result<GraphEmbedding> {
    if ne.num_nodes() == 0 {
        return Err(Error::EmptyGraph(ne.graph_id));
    }
    let (vector, levels) = match mode {
        EmbeddingMode::Final => (iteration_mean(ne, ne.h), 1),
        EmbeddingMode::Concat => ((0..=ne.h).flat_map(|it| iteration_mean(ne, it)).collect(), ne.h + 1),
    };
    Ok(GraphEmbedding { graph_id: ne.graph_id, vector, mode, t: ne.t, levels })
}

/// Normalized dot product of two graph embeddings, in `[0, 1]`.
pub fn graph_similarity(a: &GraphEmbedding, b: &GraphEmbedding) -> Result<f64> {
    a.check_compatible(b)?;
    Ok(dot(&a.vector, &b.vector) / a.norm())
}

/// Propagates and embeds one graph.
pub fn embed_graph(g: &AttributedGraph, model: &IkModel, h: usize, mode: EmbeddingMode) -> Result<GraphEmbedding> {
    graph_embedding(&wl_propagate(g, model, h)?, mode)
}

/// Embeds every graph of `ds`. Graphs are processed in parallel when the
/// `parallel` feature is on; output order and values match sequential runs.
pub fn embed_dataset(ds: &GraphDataset, model: &IkModel, h: usize, mode: EmbeddingMode) -> Result<Vec<GraphEmbedding>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        ds.graphs.par_iter().map(|g| embed_graph(g, model, h, mode)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        ds.graphs.iter().map(|g| embed_graph(g, model, h, mode)).collect()
    }
}
