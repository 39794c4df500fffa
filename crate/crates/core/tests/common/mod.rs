//! Independent reference implementations used as test oracles. They are
//! written for readability, not speed, and share no code with the library
//! beyond its public data types.

#![allow(dead_code)]

use glad_core::{GraphEmbedding, IkModel};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Cell of `x` in partitioning `p`, radii recomputed from the centres.
pub fn brute_cell(centers: &[Vec<f64>], x: &[f64]) -> Option<usize> {
    let mut covering = Vec::new();
    for (j, c) in centers.iter().enumerate() {
        let mut r2 = f64::INFINITY;
        for (k, other) in centers.iter().enumerate() {
            if k != j {
                r2 = r2.min(sq(c, other));
            }
        }
        let d2 = sq(x, c);
        if d2 <= r2 {
            covering.push((d2, j));
        }
    }
    // nearest covering centre, lowest index among equals
    covering.into_iter().fold(None, |best: Option<(f64, usize)>, (d, j)| match best {
        Some((bd, _)) if bd <= d => best,
        _ => Some((d, j)),
    })
    .map(|(_, j)| j)
}

/// Fraction of partitionings that put `x` and `y` in the same cell.
pub fn brute_kernel(model: &IkModel, x: &[f64], y: &[f64]) -> f64 {
    let same = model
        .partitionings
        .iter()
        .filter(|p| matches!((brute_cell(&p.centers, x), brute_cell(&p.centers, y)), (Some(a), Some(b)) if a == b))
        .count();
    same as f64 / model.t as f64
}

/// O(n^2) concordance count: wins + half ties over all anomaly/normal pairs.
pub fn pairwise_auc(scores: &[f64], labels: &[bool]) -> f64 {
    let (mut twice, mut pairs) = (0u64, 0u64);
    for (i, &li) in labels.iter().enumerate() {
        if !li {
            continue;
        }
        for (j, &lj) in labels.iter().enumerate() {
            if lj {
                continue;
            }
            pairs += 1;
            if scores[i] > scores[j] {
                twice += 2;
            } else if scores[i] == scores[j] {
                twice += 1;
            }
        }
    }
    twice as f64 / (2 * pairs) as f64
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn mean(e: &[GraphEmbedding], set: &[usize]) -> Vec<f64> {
    let mut m = vec![0.0; e[set[0]].vector.len()];
    for &s in set {
        for (a, b) in m.iter_mut().zip(&e[s].vector) {
            *a += b;
        }
    }
    m.iter().map(|a| a / set.len() as f64).collect()
}

/// Point-set similarity of graph `g` to the set.
pub fn k_hat(e: &[GraphEmbedding], g: usize, set: &[usize]) -> f64 {
    dot(&e[g].vector, &mean(e, set)) / e[g].norm()
}

fn first_max(items: impl Iterator<Item = (usize, f64)>) -> usize {
    let mut best: Option<(usize, f64)> = None;
    for (g, v) in items {
        if best.is_none() || v > best.unwrap().1 {
            best = Some((g, v));
        }
    }
    best.unwrap().0
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleClusters {
    pub prototypes: Vec<usize>,
    pub members: Vec<Vec<usize>>,
    pub scores: Vec<f64>,
}

/// Cluster discovery and scoring, one literal step at a time.
/// `None` when no cluster forms.
pub fn algorithm1(e: &[GraphEmbedding], tau: f64, rho: f64) -> Option<OracleClusters> {
    let mut pi: Vec<usize> = (0..e.len()).collect();
    let mut prototypes = Vec::new();
    let mut members = Vec::new();
    while pi.len() > 1 {
        let p = first_max(pi.iter().map(|&g| (g, k_hat(e, g, &pi))));
        let q = first_max(pi.iter().filter(|&&g| g != p).map(|&g| (g, k_hat(e, g, &[p]))));
        let mut gamma = (1.0 - rho) * k_hat(e, q, &[p]);
        if gamma <= tau {
            break;
        }
        let mut c = vec![p, q];
        c.sort();
        while gamma > tau {
            let next: Vec<usize> = pi.iter().copied().filter(|&g| g == p || k_hat(e, g, &c) > gamma).collect();
            c = next;
            gamma *= 1.0 - rho;
        }
        pi.retain(|g| !c.contains(g));
        prototypes.push(p);
        members.push(c);
    }
    if members.is_empty() {
        return None;
    }
    let scores = (0..e.len())
        .map(|g| members.iter().map(|c| k_hat(e, g, c)).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    Some(OracleClusters { prototypes, members, scores })
}

/// Random embeddings around a few centres, with exact duplicates mixed in
/// so tie-breaking is exercised.
pub fn random_embeddings(rng: &mut ChaCha8Rng, n: usize) -> Vec<GraphEmbedding> {
    let dim = rng.random_range(2..12);
    let t = rng.random_range(1..6);
    let groups = rng.random_range(1..4);
    let centres: Vec<Vec<f64>> = (0..groups).map(|_| (0..dim).map(|_| rng.random::<f64>()).collect()).collect();
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(n);
    for _ in 0..n {
        if !vectors.is_empty() && rng.random_bool(0.15) {
            let k = rng.random_range(0..vectors.len());
            vectors.push(vectors[k].clone());
        } else {
            let c = &centres[rng.random_range(0..groups)];
            vectors.push(c.iter().map(|x| (x + rng.random_range(-0.2..0.2)).clamp(0.0, 1.0)).collect());
        }
    }
    vectors
        .into_iter()
        .enumerate()
        .map(|(graph_id, vector)| GraphEmbedding { graph_id, vector, mode: glad_core::EmbeddingMode::Final, t, levels: 1 })
        .collect()
}

/// Node set and the edges inside it.
pub type FiveSet = (Vec<usize>, Vec<(usize, usize)>);

/// Every induced 5-node subgraph with exactly one edge leaving it,
/// returned as its (sorted) node set and edge count.
pub fn pendant_five_sets(n: usize, edges: &[(usize, usize)]) -> Vec<FiveSet> {
    let mut adj = vec![vec![false; n]; n];
    for &(u, v) in edges {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    let mut out = Vec::new();
    let mut set = Vec::with_capacity(5);
    fn rec(
        start: usize,
        n: usize,
        adj: &[Vec<bool>],
        set: &mut Vec<usize>,
        out: &mut Vec<FiveSet>,
    ) {
        if set.len() == 5 {
            let inside: Vec<(usize, usize)> = edges_within(adj, set);
            let boundary = set
                .iter()
                .map(|&u| (0..n).filter(|v| !set.contains(v) && adj[u][*v]).count())
                .sum::<usize>();
            if boundary == 1 {
                out.push((set.clone(), inside));
            }
            return;
        }
        for v in start..n {
            set.push(v);
            rec(v + 1, n, adj, set, out);
            set.pop();
        }
    }
    fn edges_within(adj: &[Vec<bool>], set: &[usize]) -> Vec<(usize, usize)> {
        let mut e = Vec::new();
        for (i, &u) in set.iter().enumerate() {
            for &v in &set[i + 1..] {
                if adj[u][v] {
                    e.push((u, v));
                }
            }
        }
        e
    }
    rec(0, n, &adj, &mut set, &mut out);
    out
}

/// House: five nodes, six edges, degrees 3,3,2,2,2 with the two
/// degree-3 nodes adjacent (a 5-cycle with one chord).
pub fn is_house(set: &[usize], inside: &[(usize, usize)]) -> bool {
    if inside.len() != 6 {
        return false;
    }
    let deg = |v: usize| inside.iter().filter(|&&(a, b)| a == v || b == v).count();
    let threes: Vec<usize> = set.iter().copied().filter(|&v| deg(v) == 3).collect();
    let twos = set.iter().filter(|&&v| deg(v) == 2).count();
    threes.len() == 2 && twos == 3 && inside.iter().any(|&(a, b)| (a, b) == (threes[0], threes[1]) || (b, a) == (threes[0], threes[1]))
}

/// 5-cycle: five edges, every node degree 2, connected.
pub fn is_five_cycle(set: &[usize], inside: &[(usize, usize)]) -> bool {
    if inside.len() != 5 || set.iter().any(|&v| inside.iter().filter(|&&(a, b)| a == v || b == v).count() != 2) {
        return false;
    }
    // degree-2 everywhere on 5 nodes: either C5 or a triangle plus a
    // 2-cycle, which cannot exist in a simple graph
    true
}
