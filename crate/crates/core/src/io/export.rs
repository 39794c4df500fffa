//! DOT and JSON export of graphs with per-node scores.
//!
//! DOT nodes are filled in grayscale: after per-graph min-max normalization
//! the highest score gets the darkest fill (`#404040`) and the lowest the
//! lightest (`#ffffff`). Constant scores normalize to 0.5 (mid-gray).

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::AttributedGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Json,
}

/// Lightest and darkest fill levels.
const LIGHT: f64 = 255.0;
const DARK: f64 = 64.0;

/// Min-max normalized scores; constant input maps to 0.5.
pub fn normalize(scores: &[f64]) -> Vec<f64> {
    let lo = scores.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi <= lo || hi.is_nan() {
        return vec![0.5; scores.len()];
    }
    scores.iter().map(|s| (s - lo) / (hi - lo)).collect()
}

/// 8-bit gray level for a normalized score.
pub fn gray_level(normalized: f64) -> u8 {
    (LIGHT - (LIGHT - DARK) * normalized.clamp(0.0, 1.0)).round() as u8
}

pub fn to_dot(g: &AttributedGraph, node_scores: &[f64], highlight: &[usize]) -> Result<String> {
    check_len(g, node_scores)?;
    let mut out = String::new();
    writeln!(out, "graph g{} {{", g.id).unwrap();
    writeln!(out, "  node [style=filled, shape=circle];").unwrap();
    for (v, s) in normalize(node_scores).into_iter().enumerate() {
        let level = gray_level(s);
        let font = if level < 128 { "white" } else { "black" };
        let border = if highlight.contains(&v) { ", color=red, penwidth=2" } else { "" };
        writeln!(
            out,
            "  n{v} [label=\"{v}\", fillcolor=\"#{level:02x}{level:02x}{level:02x}\", fontcolor={font}, score=\"{}\"{border}];",
            node_scores[v]
        )
        .unwrap();
    }
    for &(u, v) in &g.edges {
        writeln!(out, "  n{u} -- n{v};").unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}

#[derive(Serialize)]
struct ScoredGraph<'a> {
    id: usize,
    n: usize,
    edges: Vec<[usize; 2]>,
    scores: &'a [f64],
}

pub fn to_json(g: &AttributedGraph, node_scores: &[f64]) -> Result<String> {
    check_len(g, node_scores)?;
    let doc = ScoredGraph {
        id: g.id,
        n: g.num_nodes,
        edges: g.edges.iter().map(|&(u, v)| [u, v]).collect(),
        scores: node_scores,
    };
    Ok(serde_json::to_string(&doc)?)
}

fn check_len(g: &AttributedGraph, node_scores: &[f64]) -> Result<()> {
    if node_scores.len() != g.num_nodes {
        return Err(Error::ScoreLength { expected: g.num_nodes, found: node_scores.len() });
    }
    Ok(())
}

pub fn export_scored_graph(g: &AttributedGraph, node_scores: &[f64], path: &Path, format: ExportFormat) -> Result<()> {
    export_highlighted(g, node_scores, &[], path, format)
}

/// As [`export_scored_graph`], outlining `highlight` nodes in DOT output.
pub fn export_highlighted(
    g: &AttributedGraph,
    node_scores: &[f64],
    highlight: &[usize],
    path: &Path,
    format: ExportFormat,
) -> Result<()> {
    let body = match format {
        ExportFormat::Dot => to_dot(g, node_scores, highlight)?,
        ExportFormat::Json => to_json(g, node_scores)?,
    };
    fs::write(path, body)?;
    Ok(())
}
