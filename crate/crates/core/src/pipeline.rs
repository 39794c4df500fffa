//! Fit, embed, detect: the full detection pipeline for one dataset and seed.

use crate::detect::{auto_tau, detect, DetectionResult};
use crate::error::Result;
use crate::explain::EmbeddingStore;
use crate::graph::GraphDataset;
use crate::ik::{fit_ik, IkModel};
use crate::params::{DetectParams, EmbedParams};
use crate::seed::{self, Component};
use crate::wl::{embed_dataset, GraphEmbedding};

#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub model: IkModel,
    pub embeddings: Vec<GraphEmbedding>,
    pub result: DetectionResult,
}

impl PipelineRun {
    pub fn store<'a>(&'a self, ds: &'a GraphDataset) -> EmbeddingStore<'a> {
        let p = self.result.params.embed.unwrap_or_default();
        EmbeddingStore { dataset: ds, model: &self.model, h: p.h, mode: p.mode, embeddings: self.embeddings.clone() }
    }
}

/// Fits the kernel on the pooled node vectors of `ds` and embeds every graph.
/// `embed.seed` is the run seed; the fit seed is split from it.
pub fn fit_and_embed(ds: &GraphDataset, embed: &EmbedParams) -> Result<(IkModel, Vec<GraphEmbedding>)> {
    let model = fit_ik(&ds.pooled_node_vectors(), embed.psi, embed.t, seed::derive(embed.seed, Component::IkFit, 0))?;
    let embeddings = embed_dataset(ds, &model, embed.h, embed.mode)?;
    Ok((model, embeddings))
}

/// Resolves `tau` (explicit or quantile-based) for a set of embeddings.
pub fn resolve_tau(embeddings: &[GraphEmbedding], det: &DetectParams, run_seed: u64) -> Result<f64> {
    match det.tau {
        Some(tau) => Ok(tau),
        None => auto_tau(embeddings, det.tau_quantile, seed::derive(run_seed, Component::TauSubsample, 0)),
    }
}

pub fn run_pipeline(ds: &GraphDataset, embed: &EmbedParams, det: &DetectParams) -> Result<PipelineRun> {
    let (model, embeddings) = fit_and_embed(ds, embed)?;
    let tau = resolve_tau(&embeddings, det, embed.seed)?;
    let mut result = detect(&embeddings, tau, det.rho)?;
    result.params.tau_quantile = det.tau.is_none().then_some(det.tau_quantile);
    result.params.embed = Some(*embed);
    Ok(PipelineRun { model, embeddings, result })
}
