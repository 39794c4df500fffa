//! Reader for the TUDataset text format.
//!
//! A dataset `NAME` lives in one directory:
//!
//! * `NAME_A.txt` - one `u, v` pair per line, 1-based global node ids
//! * `NAME_graph_indicator.txt` - the 1-based graph id of node `i` on line `i`
//! * `NAME_graph_labels.txt` (optional) - one class label per graph
//! * `NAME_node_labels.txt` (optional) - one integer label per node
//! * `NAME_node_attributes.txt` (optional) - comma-separated reals per node

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graph::{derive_attributes, AttributeMode, AttributedGraph, GraphDataset};

fn file_path(dir: &Path, name: &str, suffix: &str) -> PathBuf {
    dir.join(format!("{name}_{suffix}.txt"))
}

fn read_required(path: &Path) -> Result<String> {
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    Ok(fs::read_to_string(path)?)
}

fn read_optional(path: &Path) -> Result<Option<String>> {
    if path.exists() {
        Ok(Some(fs::read_to_string(path)?))
    } else {
        Ok(None)
    }
}

/// Non-blank lines with their 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty())
}

fn parse_err(file: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        file: file.file_name().map_or_else(String::new, |f| f.to_string_lossy().into_owned()),
        line,
        message: message.into(),
    }
}

fn parse_ints(path: &Path, text: &str) -> Result<Vec<i64>> {
    lines(text)
        .map(|(no, l)| l.parse::<i64>().map_err(|e| parse_err(path, no, format!("`{l}`: {e}"))))
        .collect()
}

/// Reads dataset `name` from `dir`.
///
/// Without a node attribute file the attributes are derived with `fallback`,
/// or, when `fallback` is `None`, one-hot node labels if present and node
/// degree otherwise. Node labels are re-indexed densely in ascending label
/// order; graph class labels are kept verbatim in `class_label`.
pub fn parse_tudataset(dir: &Path, name: &str, fallback: Option<AttributeMode>) -> Result<GraphDataset> {
    let a_path = file_path(dir, name, "A");
    let ind_path = file_path(dir, name, "graph_indicator");
    let a_text = read_required(&a_path)?;
    let indicator = parse_ints(&ind_path, &read_required(&ind_path)?)?;
    let num_nodes = indicator.len();

    // Distinct graph ids in ascending order -> 0-based graph index.
    let graph_index: BTreeMap<i64, usize> = {
        let mut ids: Vec<i64> = indicator.clone();
        ids.sort_unstable();
        ids.dedup();
        ids.into_iter().enumerate().map(|(i, g)| (g, i)).collect()
    };
    let num_graphs = graph_index.len();
    let mut node_graph = Vec::with_capacity(num_nodes);
    let mut node_local = Vec::with_capacity(num_nodes);
    let mut sizes = vec![0usize; num_graphs];
    for &g in &indicator {
        let gi = graph_index[&g];
        node_graph.push(gi);
        node_local.push(sizes[gi]);
        sizes[gi] += 1;
    }

    let mut edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); num_graphs];
    for (no, line) in lines(&a_text) {
        let mut parts = line.split(',').map(str::trim);
        let (Some(u), Some(v), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(parse_err(&a_path, no, format!("expected `u, v`, found `{line}`")));
        };
        let parse_node = |s: &str| -> Result<usize> {
            let id: usize = s.parse().map_err(|e| parse_err(&a_path, no, format!("`{s}`: {e}")))?;
            if id == 0 || id > num_nodes {
                return Err(Error::NodeIndexOutOfRange { index: id, count: num_nodes });
            }
            Ok(id - 1)
        };
        let (u, v) = (parse_node(u)?, parse_node(v)?);
        if node_graph[u] != node_graph[v] {
            return Err(parse_err(&a_path, no, format!("edge joins nodes of different graphs ({}, {})", u + 1, v + 1)));
        }
        if u == v {
            log::warn!("{name}: dropping self-loop on node {}", u + 1);
            continue;
        }
        edges[node_graph[u]].push((node_local[u], node_local[v]));
    }

    let graph_labels = match read_optional(&file_path(dir, name, "graph_labels"))? {
        Some(text) => {
            let labels = parse_ints(&file_path(dir, name, "graph_labels"), &text)?;
            if labels.len() != num_graphs {
                return Err(Error::InvalidDataset(format!(
                    "{} graph labels for {num_graphs} graphs",
                    labels.len()
                )));
            }
            Some(labels)
        }
        None => None,
    };

    let node_labels = match read_optional(&file_path(dir, name, "node_labels"))? {
        Some(text) => {
            let raw = parse_ints(&file_path(dir, name, "node_labels"), &text)?;
            if raw.len() != num_nodes {
                return Err(Error::InvalidDataset(format!("{} node labels for {num_nodes} nodes", raw.len())));
            }
            let mut alphabet = raw.clone();
            alphabet.sort_unstable();
            alphabet.dedup();
            let dense = raw.iter().map(|l| alphabet.binary_search(l).unwrap() as i64).collect::<Vec<_>>();
            Some((dense, alphabet.len()))
        }
        None => None,
    };

    let attr_path = file_path(dir, name, "node_attributes");
    let attributes = match read_optional(&attr_path)? {
        Some(text) => {
            let mut rows = Vec::with_capacity(num_nodes);
            let mut width = None;
            for (no, line) in lines(&text) {
                let row = line
                    .split(',')
                    .map(|s| s.trim().parse::<f64>().map_err(|e| parse_err(&attr_path, no, format!("`{s}`: {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                match width {
                    None => width = Some(row.len()),
                    Some(w) if w != row.len() => {
                        return Err(parse_err(&attr_path, no, format!("ragged row: {} values, expected {w}", row.len())))
                    }
                    Some(_) => {}
                }
                rows.push(row);
            }
            if rows.len() != num_nodes {
                return Err(Error::InvalidDataset(format!("{} attribute rows for {num_nodes} nodes", rows.len())));
            }
            Some(rows)
        }
        None => None,
    };

    let mode = match (&attributes, fallback) {
        (Some(_), None) => AttributeMode::RawAttributes,
        (_, Some(m)) => m,
        (None, None) if node_labels.is_some() => AttributeMode::OneHotLabels,
        (None, None) => AttributeMode::DegreeScalar,
    };
    if mode == AttributeMode::RawAttributes && attributes.is_none() {
        return Err(Error::MissingFile(attr_path));
    }
    let alphabet_size = node_labels.as_ref().map_or(0, |(_, n)| *n);

    let mut node_rows: Vec<Vec<Vec<f64>>> = sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
    let mut node_label_rows: Vec<Vec<i64>> = sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
    for v in 0..num_nodes {
        let gi = node_graph[v];
        node_rows[gi].push(attributes.as_ref().map_or_else(Vec::new, |a| a[v].clone()));
        if let Some((labels, _)) = &node_labels {
            node_label_rows[gi].push(labels[v]);
        }
    }

    let mut graphs = Vec::with_capacity(num_graphs);
    for (gi, (rows, g_edges)) in node_rows.into_iter().zip(edges).enumerate() {
        let mut g = AttributedGraph::new(gi, sizes[gi], g_edges, rows)?;
        if node_labels.is_some() {
            g.node_labels = Some(std::mem::take(&mut node_label_rows[gi]));
        }
        g.class_label = graph_labels.as_ref().map(|l| l[gi]);
        graphs.push(derive_attributes(&g, mode, alphabet_size)?);
    }
    GraphDataset::new(name, graphs, mode)
}
