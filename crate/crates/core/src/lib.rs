//! Graph-level anomaly detection with prototype clusters.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`ik`] fits an Isolation Kernel on the pooled node attribute vectors of
//!    a dataset and maps every node to a sparse binary feature vector.
//! 2. [`wl`] propagates those vectors over each graph with a
//!    Weisfeiler-Lehman style neighbour-averaging recurrence and takes the
//!    node mean as the graph embedding.
//! 3. [`detect`] discovers prototype graphs and grows clusters around them
//!    with a point-set kernel; each graph is scored by its similarity to the
//!    nearest cluster (high = normal).
//! 4. [`explain`] contrasts a graph with its nearest prototype node by node.
//!
//! [`io`] covers TUDataset ingestion, the synthetic motif benchmark, anomaly
//! benchmark preparation and DOT/JSON export; [`eval`] holds the AUC metric
//! and the repeated-seed experiment runner.

pub mod detect;
pub mod error;
pub mod eval;
pub mod explain;
pub mod graph;
pub mod ik;
pub mod io;
pub mod params;
pub mod pipeline;
pub mod seed;
pub mod wl;

pub use detect::{auto_tau, detect, Cluster, DetectionResult};
pub use error::{Error, Result};
pub use eval::{auc, run_experiment, DatasetSpec, EvalReport};
pub use explain::{explain_pair, node_scores, EmbeddingStore, Explanation};
pub use graph::{AttributeMode, AttributedGraph, GraphDataset, Violation};
pub use ik::{fit_ik, ik_kernel, ik_map, IkFeature, IkModel};
pub use params::{DetectParams, EmbedParams};
pub use pipeline::{run_pipeline, PipelineRun};
pub use wl::{graph_embedding, graph_similarity, wl_propagate, EmbeddingMode, GraphEmbedding, NodeEmbeddings};
