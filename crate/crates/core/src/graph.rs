//! Attributed graph data model.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How node attribute vectors were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum AttributeMode {
    #[default]
    RawAttributes,
    OneHotLabels,
    DegreeScalar,
}

impl std::str::FromStr for AttributeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" | "raw_attributes" => Ok(Self::RawAttributes),
            "one_hot" | "one_hot_labels" => Ok(Self::OneHotLabels),
            "degree" | "degree_scalar" => Ok(Self::DegreeScalar),
            other => Err(Error::InvalidParameter(format!("unknown attribute mode `{other}`"))),
        }
    }
}

/// First invariant a graph breaks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EndpointOutOfRange { edge: (usize, usize), num_nodes: usize },
    SelfLoop { node: usize },
    DuplicateEdge { edge: (usize, usize) },
    AttributeRows { expected: usize, found: usize },
    RaggedAttributes { row: usize, expected: usize, found: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EndpointOutOfRange { edge, num_nodes } => write!(
                f,
                "endpoint out of range: edge ({}, {}) in a graph of {num_nodes} nodes",
                edge.0, edge.1
            ),
            Self::SelfLoop { node } => write!(f, "self-loop on node {node}"),
            Self::DuplicateEdge { edge } => write!(f, "duplicate edge ({}, {})", edge.0, edge.1),
            Self::AttributeRows { expected, found } => {
                write!(f, "attribute matrix has {found} rows, expected {expected}")
            }
            Self::RaggedAttributes { row, expected, found } => {
                write!(f, "attribute row {row} has {found} columns, expected {expected}")
            }
        }
    }
}

/// An undirected graph whose nodes carry real-valued attribute vectors.
///
/// Edges are stored once per unordered pair. Graphs built through
/// [`AttributedGraph::new`] are deduplicated and validated; the fields stay
/// public so that callers (and tests) can assemble raw graphs and run
/// [`validate_graph`] on them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributedGraph {
    pub id: usize,
    pub num_nodes: usize,
    pub edges: Vec<(usize, usize)>,
    pub attributes: Vec<Vec<f64>>,
    pub node_labels: Option<Vec<i64>>,
    pub anomaly_label: Option<bool>,
    /// Original class label, kept as metadata for benchmark preparation.
    pub class_label: Option<i64>,
}

impl AttributedGraph {
    /// Builds a graph, folding `(u, v)` / `(v, u)` duplicates into one edge.
    pub fn new(
        id: usize,
        num_nodes: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        attributes: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut kept = Vec::new();
        let mut dropped = 0usize;
        for (u, v) in edges {
            let key = (u.min(v), u.max(v));
            if seen.insert(key) {
                kept.push(key);
            } else {
                dropped += 1;
            }
        }
        if dropped > 0 {
            log::warn!("graph {id}: dropped {dropped} duplicate edge(s)");
        }
        let g = Self {
            id,
            num_nodes,
            edges: kept,
            attributes,
            node_labels: None,
            anomaly_label: None,
            class_label: None,
        };
        g.check()?;
        Ok(g)
    }

    pub fn with_node_labels(mut self, labels: Vec<i64>) -> Self {
        self.node_labels = Some(labels);
        self
    }

    pub fn with_anomaly_label(mut self, anomalous: bool) -> Self {
        self.anomaly_label = Some(anomalous);
        self
    }

    /// Attribute column count (0 for a graph without nodes).
    pub fn attr_dim(&self) -> usize {
        self.attributes.first().map_or(0, Vec::len)
    }

    pub fn check(&self) -> Result<()> {
        validate_graph(self).map_err(|violation| Error::InvalidGraph { graph_id: self.id, violation })
    }

    /// Neighbour lists indexed by node.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_nodes];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.num_nodes];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }
}

/// Returns the first violated invariant, if any.
pub fn validate_graph(g: &AttributedGraph) -> std::result::Result<(), Violation> {
    let mut seen = BTreeSet::new();
    for &(u, v) in &g.edges {
        if u >= g.num_nodes || v >= g.num_nodes {
            return Err(Violation::EndpointOutOfRange { edge: (u, v), num_nodes: g.num_nodes });
        }
        if u == v {
            return Err(Violation::SelfLoop { node: u });
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Violation::DuplicateEdge { edge: (u, v) });
        }
    }
    if g.attributes.len() != g.num_nodes {
        return Err(Violation::AttributeRows { expected: g.num_nodes, found: g.attributes.len() });
    }
    let dim = g.attr_dim();
    for (row, attrs) in g.attributes.iter().enumerate() {
        if attrs.len() != dim {
            return Err(Violation::RaggedAttributes { row, expected: dim, found: attrs.len() });
        }
    }
    Ok(())
}

/// Recomputes the attribute matrix of `g` according to `mode`.
///
/// `label_alphabet_size` is only consulted for [`AttributeMode::OneHotLabels`];
/// labels must already be dense indices in `0..label_alphabet_size`.
pub fn derive_attributes(
    g: &AttributedGraph,
    mode: AttributeMode,
    label_alphabet_size: usize,
) -> Result<AttributedGraph> {
    let attributes = match mode {
        AttributeMode::RawAttributes => g.attributes.clone(),
        AttributeMode::OneHotLabels => {
            let labels = g.node_labels.as_ref().ok_or(Error::MissingNodeLabels(g.id))?;
            labels
                .iter()
                .map(|&l| {
                    let idx = usize::try_from(l)
                        .ok()
                        .filter(|&i| i < label_alphabet_size)
                        .ok_or_else(|| {
                            Error::InvalidParameter(format!(
                                "graph {}: node label {l} outside alphabet of size {label_alphabet_size}",
                                g.id
                            ))
                        })?;
                    let mut row = vec![0.0; label_alphabet_size];
                    row[idx] = 1.0;
                    Ok(row)
                })
                .collect::<Result<Vec<_>>>()?
        }
        AttributeMode::DegreeScalar => g.degrees().into_iter().map(|d| vec![d as f64]).collect(),
    };
    Ok(AttributedGraph { attributes, ..g.clone() })
}

/// A named collection of graphs sharing one attribute dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphDataset {
    pub name: String,
    pub graphs: Vec<AttributedGraph>,
    pub attr_dim: usize,
    pub attribute_mode: AttributeMode,
}

impl GraphDataset {
    pub fn new(name: impl Into<String>, graphs: Vec<AttributedGraph>, attribute_mode: AttributeMode) -> Result<Self> {
        let attr_dim = graphs.iter().find(|g| g.num_nodes > 0).map_or(0, AttributedGraph::attr_dim);
        let ds = Self { name: name.into(), graphs, attr_dim, attribute_mode };
        ds.check()?;
        Ok(ds)
    }

    pub fn check(&self) -> Result<()> {
        for (i, g) in self.graphs.iter().enumerate() {
            if g.id != i {
                return Err(Error::InvalidDataset(format!("graph at position {i} has id {}", g.id)));
            }
            g.check()?;
            if g.num_nodes > 0 && g.attr_dim() != self.attr_dim {
                return Err(Error::InvalidDataset(format!(
                    "graph {i} has attribute dimension {}, dataset has {}",
                    g.attr_dim(),
                    self.attr_dim
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    /// All node attribute rows, graph by graph.
    pub fn pooled_node_vectors(&self) -> Vec<Vec<f64>> {
        self.graphs.iter().flat_map(|g| g.attributes.iter().cloned()).collect()
    }

    /// Anomaly ground truth, when every graph carries one.
    pub fn anomaly_labels(&self) -> Option<Vec<bool>> {
        self.graphs.iter().map(|g| g.anomaly_label).collect()
    }
}
