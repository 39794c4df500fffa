//! Dataset JSON interchange.
//!
//! ```json
//! {"name": "...", "attr_dim": 4, "attribute_mode": "raw_attributes",
//!  "graphs": [{"id": 0, "n": 3, "edges": [[0, 1]], "attrs": [[...]], "label": 1}]}
//! ```
//!
//! `label` is the anomaly ground truth (1 anomalous, 0 normal, null
//! unknown). `class` and `node_labels` are optional extras.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{AttributeMode, AttributedGraph, GraphDataset};

#[derive(Debug, Serialize, Deserialize)]
struct DatasetFile {
    name: String,
    attr_dim: usize,
    #[serde(default)]
    attribute_mode: AttributeMode,
    graphs: Vec<GraphRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphRecord {
    id: usize,
    n: usize,
    edges: Vec<[usize; 2]>,
    attrs: Vec<Vec<f64>>,
    label: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    class: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    node_labels: Option<Vec<i64>>,
}

pub fn to_json_string(ds: &GraphDataset) -> Result<String> {
    let file = DatasetFile {
        name: ds.name.clone(),
        attr_dim: ds.attr_dim,
        attribute_mode: ds.attribute_mode,
        graphs: ds
            .graphs
            .iter()
            .map(|g| GraphRecord {
                id: g.id,
                n: g.num_nodes,
                edges: g.edges.iter().map(|&(u, v)| [u, v]).collect(),
                attrs: g.attributes.clone(),
                label: g.anomaly_label.map(u8::from),
                class: g.class_label,
                node_labels: g.node_labels.clone(),
            })
            .collect(),
    };
    Ok(serde_json::to_string(&file)?)
}

pub fn from_json_str(s: &str) -> Result<GraphDataset> {
    let file: DatasetFile = serde_json::from_str(s)?;
    let graphs = file
        .graphs
        .into_iter()
        .map(|r| {
            let mut g = AttributedGraph::new(r.id, r.n, r.edges.into_iter().map(|[u, v]| (u, v)), r.attrs)?;
            g.anomaly_label = r.label.map(|l| l != 0);
            g.class_label = r.class;
            g.node_labels = r.node_labels;
            Ok(g)
        })
        .collect::<Result<Vec<_>>>()?;
    let ds = GraphDataset { name: file.name, graphs, attr_dim: file.attr_dim, attribute_mode: file.attribute_mode };
    ds.check()?;
    Ok(ds)
}

pub fn write_dataset(ds: &GraphDataset, path: &Path) -> Result<()> {
    fs::write(path, to_json_string(ds)?)?;
    Ok(())
}

pub fn read_dataset(path: &Path) -> Result<GraphDataset> {
    from_json_str(&fs::read_to_string(path)?)
}
