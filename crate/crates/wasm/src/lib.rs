//! Browser bindings for the demo page in `www/`.
//!
//! Three operations: an Isolation Kernel similarity heatmap over 2-D
//! points, a detection run on the synthetic motif benchmark, and the node
//! level explanation of one graph from that run. The plain Rust layer is
//! tested natively; the `#[wasm_bindgen]` wrappers only convert types.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use glad_core::io::{gen_synthetic, SyntheticConfig};
use glad_core::{auc, explain_pair, fit_ik, run_pipeline, DetectParams, EmbedParams, GraphDataset, PipelineRun};

/// `kappa(query, cell centre)` on a `grid x grid` lattice spanning
/// `[lo, hi]^2`, row-major with y increasing down the rows.
#[allow(clippy::too_many_arguments)]
pub fn heatmap(
    points: &[f64],
    psi: usize,
    t: usize,
    seed: u64,
    query: [f64; 2],
    grid: usize,
    lo: f64,
    hi: f64,
) -> glad_core::Result<Vec<f64>> {
    if !points.len().is_multiple_of(2) {
        return Err(glad_core::Error::InvalidParameter("points must be flat x,y pairs".into()));
    }
    let data: Vec<Vec<f64>> = points.chunks_exact(2).map(|p| p.to_vec()).collect();
    let model = fit_ik(&data, psi, t, seed)?;
    let q = model.map(&query)?;
    let step = (hi - lo) / grid as f64;
    let mut out = Vec::with_capacity(grid * grid);
    for row in 0..grid {
        for col in 0..grid {
            let cell = [lo + (col as f64 + 0.5) * step, lo + (row as f64 + 0.5) * step];
            out.push(q.dot(&model.map(&cell)?) as f64 / t as f64);
        }
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub auc: f64,
    pub k: usize,
    pub tau: f64,
    pub scores: Vec<f64>,
    pub anomalous: Vec<bool>,
    pub prototypes: Vec<usize>,
}

#[derive(Debug, Serialize)]
pub struct ScoredGraph {
    pub id: usize,
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub scores: Vec<f64>,
    pub lowest: Vec<usize>,
    /// 0 base, 1 cycle, 2 house.
    pub parts: Vec<i64>,
}

#[derive(Debug, Serialize)]
pub struct PairView {
    pub similarity: f64,
    pub cluster: usize,
    pub anomaly: ScoredGraph,
    pub prototype: ScoredGraph,
}

/// One generated benchmark and its detection run.
pub struct Session {
    dataset: GraphDataset,
    run: PipelineRun,
}

impl Session {
    pub fn new(cfg: &SyntheticConfig, embed: &EmbedParams, det: &DetectParams) -> glad_core::Result<Self> {
        let dataset = gen_synthetic(cfg)?;
        let run = run_pipeline(&dataset, embed, det)?;
        Ok(Self { dataset, run })
    }

    pub fn summary(&self) -> glad_core::Result<Summary> {
        let anomalous = self.dataset.anomaly_labels().unwrap_or_default();
        Ok(Summary {
            auc: auc(&self.run.result.anomaly_scores(), &anomalous)?,
            k: self.run.result.k(),
            tau: self.run.result.params.tau,
            scores: self.run.result.scores.clone(),
            anomalous,
            prototypes: self.run.result.prototypes.clone(),
        })
    }

    pub fn explain(&self, id: usize, highlight: f64) -> glad_core::Result<PairView> {
        let ex = explain_pair(&self.run.result, &self.run.store(&self.dataset), id, highlight)?;
        let view = |gid: usize, scores: Vec<f64>, lowest: Vec<usize>| {
            let g = &self.dataset.graphs[gid];
            ScoredGraph {
                id: gid,
                n: g.num_nodes,
                edges: g.edges.clone(),
                scores,
                lowest,
                parts: g.node_labels.clone().unwrap_or_else(|| vec![0; g.num_nodes]),
            }
        };
        Ok(PairView {
            similarity: ex.similarity,
            cluster: ex.cluster_index,
            anomaly: view(ex.anomaly_id, ex.anomaly_node_scores, ex.anomaly_lowest_nodes),
            prototype: view(ex.prototype_id, ex.prototype_node_scores, ex.prototype_lowest_nodes),
        })
    }
}

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen(js_name = ikHeatmap)]
#[allow(clippy::too_many_arguments)]
pub fn ik_heatmap(
    points: &[f64],
    psi: usize,
    t: usize,
    seed: u32,
    qx: f64,
    qy: f64,
    grid: usize,
    lo: f64,
    hi: f64,
) -> Result<Vec<f64>, JsError> {
    heatmap(points, psi, t, seed.into(), [qx, qy], grid, lo, hi).map_err(js_err)
}

#[wasm_bindgen(js_name = SyntheticRun)]
pub struct JsSession(Session);

#[wasm_bindgen(js_class = SyntheticRun)]
impl JsSession {
    #[wasm_bindgen(constructor)]
    pub fn new(num_normal: usize, num_anomalous: usize, seed: u32, psi: usize, h: usize, tau_quantile: f64) -> Result<JsSession, JsError> {
        let cfg = SyntheticConfig { num_normal, num_anomalous, seed: seed.into(), ..Default::default() };
        let embed = EmbedParams { psi, h, seed: seed.into(), ..Default::default() };
        let det = DetectParams { tau_quantile, ..Default::default() };
        Session::new(&cfg, &embed, &det).map(JsSession).map_err(js_err)
    }

    /// JSON: auc, k, tau, scores, anomalous, prototypes.
    pub fn summary(&self) -> Result<String, JsError> {
        serde_json::to_string(&self.0.summary().map_err(js_err)?).map_err(js_err)
    }

    /// JSON: similarity, cluster, and both scored graphs.
    pub fn explain(&self, id: usize, highlight: f64) -> Result<String, JsError> {
        serde_json::to_string(&self.0.explain(id, highlight).map_err(js_err)?).map_err(js_err)
    }
}
