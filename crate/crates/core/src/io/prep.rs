//! Anomaly benchmark preparation from a labelled classification dataset.

use rand::seq::index::sample;

use crate::error::{Error, Result};
use crate::graph::GraphDataset;
use crate::seed;

/// Keeps every graph outside `anomalous_class` as normal and downsamples
/// `anomalous_class` so anomalies make up `anomaly_ratio` of the output.
///
/// The anomaly count is `round(ratio * n_normal / (1 - ratio))`. Output keeps
/// the input order and renumbers ids from 0.
pub fn prepare_glad(ds: &GraphDataset, anomalous_class: i64, anomaly_ratio: f64, seed: u64) -> Result<GraphDataset> {
    if !(anomaly_ratio > 0.0 && anomaly_ratio < 0.5) {
        return Err(Error::InvalidParameter(format!("ratio out of range (0, 0.5): {anomaly_ratio}")));
    }
    if let Some(g) = ds.graphs.iter().find(|g| g.class_label.is_none()) {
        return Err(Error::InvalidDataset(format!("graph {} has no class label", g.id)));
    }
    let (candidates, normals): (Vec<usize>, Vec<usize>) =
        (0..ds.len()).partition(|&i| ds.graphs[i].class_label == Some(anomalous_class));
    if candidates.is_empty() {
        return Err(Error::InvalidParameter(format!("class {anomalous_class} not present")));
    }
    let n_normal = normals.len() as f64;
    let wanted = (anomaly_ratio * n_normal / (1.0 - anomaly_ratio)).round() as usize;
    if wanted == 0 || wanted > candidates.len() {
        let achievable = candidates.len() as f64 / (n_normal + candidates.len() as f64);
        return Err(Error::RatioUnreachable { requested: anomaly_ratio, achievable });
    }
    let mut rng = seed::rng(seed);
    let mut picked: Vec<usize> = sample(&mut rng, candidates.len(), wanted).iter().map(|i| candidates[i]).collect();
    picked.sort_unstable();

    let mut keep: Vec<(usize, bool)> =
        normals.into_iter().map(|i| (i, false)).chain(picked.into_iter().map(|i| (i, true))).collect();
    keep.sort_unstable();
    let graphs = keep
        .into_iter()
        .enumerate()
        .map(|(new_id, (i, anomalous))| {
            let mut g = ds.graphs[i].clone();
            g.id = new_id;
            g.anomaly_label = Some(anomalous);
            g
        })
        .collect();
    GraphDataset::new(format!("{}-glad-c{anomalous_class}", ds.name), graphs, ds.attribute_mode)
}
