//! Isolation Kernel with hypersphere partitionings.
//!
//! Each of the `t` partitionings is built from `psi` node vectors drawn
//! without replacement from the pooled dataset. Every sampled point is the
//! centre of a ball whose radius is the distance to its nearest other centre.
//! A point falls into the ball of the nearest centre that covers it, or into
//! no cell at all, so the feature map has at most one active entry per
//! partitioning.

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;

/// One random partitioning: `psi` centres and their radii.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partitioning {
    pub centers: Vec<Vec<f64>>,
    pub radii: Vec<f64>,
    /// Squared radii as computed, so coverage tests avoid a sqrt round trip.
    pub radii_sq: Vec<f64>,
}

impl Partitioning {
    fn from_centers(centers: Vec<Vec<f64>>) -> Self {
        let radii_sq: Vec<f64> = (0..centers.len())
            .map(|i| {
                centers
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, c)| sq_dist(&centers[i], c))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        let radii = radii_sq.iter().map(|r| r.sqrt()).collect();
        Self { centers, radii, radii_sq }
    }

    /// Index of the nearest covering centre; lowest index on distance ties.
    pub fn cell(&self, x: &[f64]) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (j, (c, &r2)) in self.centers.iter().zip(&self.radii_sq).enumerate() {
            let d2 = sq_dist(x, c);
            if d2 <= r2 && best.is_none_or(|(_, bd)| d2 < bd) {
                best = Some((j, d2));
            }
        }
        best.map(|(j, _)| j)
    }
}

#[inline]
pub(crate) fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// A fitted Isolation Kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IkModel {
    pub psi: usize,
    pub t: usize,
    pub seed: u64,
    pub attr_dim: usize,
    pub partitionings: Vec<Partitioning>,
}

/// Sparse binary IK feature vector: sorted active indices in `0..t*psi`.
///
/// Index `i * psi + j` is set when the point falls into cell `j` of
/// partitioning `i`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct IkFeature {
    pub active: Vec<usize>,
}

impl IkFeature {
    /// Number of shared active indices.
    pub fn dot(&self, other: &IkFeature) -> usize {
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < self.active.len() && j < other.active.len() {
            match self.active[i].cmp(&other.active[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }

    pub fn nnz(&self) -> usize {
        self.active.len()
    }

    pub fn to_dense(&self, len: usize) -> Vec<f64> {
        let mut v = vec![0.0; len];
        for &i in &self.active {
            v[i] = 1.0;
        }
        v
    }
}

/// Fits `t` partitionings of `psi` centres each on the pooled node vectors.
pub fn fit_ik(node_vectors: &[Vec<f64>], psi: usize, t: usize, seed: u64) -> Result<IkModel> {
    if psi < 2 {
        return Err(Error::InvalidParameter(format!("psi must be at least 2, got {psi}")));
    }
    if t == 0 {
        return Err(Error::InvalidParameter("t must be at least 1".into()));
    }
    if node_vectors.len() < psi {
        return Err(Error::InvalidParameter(format!(
            "need at least psi = {psi} node vectors, got {}",
            node_vectors.len()
        )));
    }
    let attr_dim = node_vectors[0].len();
    if let Some(bad) = node_vectors.iter().find(|r| r.len() != attr_dim) {
        return Err(Error::DimensionMismatch { expected: attr_dim, found: bad.len() });
    }

    let mut rng = seed::rng(seed);
    let partitionings = (0..t)
        .map(|_| {
            let idx = sample(&mut rng, node_vectors.len(), psi);
            Partitioning::from_centers(idx.iter().map(|i| node_vectors[i].clone()).collect())
        })
        .collect();
    Ok(IkModel { psi, t, seed, attr_dim, partitionings })
}

impl IkModel {
    /// Length of the feature vector, `t * psi`.
    pub fn dim(&self) -> usize {
        self.t * self.psi
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.attr_dim {
            return Err(Error::DimensionMismatch { expected: self.attr_dim, found: x.len() });
        }
        Ok(())
    }

    pub fn map(&self, x: &[f64]) -> Result<IkFeature> {
        self.check_dim(x)?;
        Ok(self.map_unchecked(x))
    }

    pub(crate) fn map_unchecked(&self, x: &[f64]) -> IkFeature {
        let active = self
            .partitionings
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.cell(x).map(|j| i * self.psi + j))
            .collect();
        IkFeature { active }
    }

    /// `(1/t) <phi(x), phi(y)>`.
    pub fn kernel(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let fx = self.map(x)?;
        let fy = self.map(y)?;
        Ok(fx.dot(&fy) as f64 / self.t as f64)
    }
}

/// Free-function form of [`IkModel::map`].
pub fn ik_map(model: &IkModel, x: &[f64]) -> Result<IkFeature> {
    model.map(x)
}

/// Free-function form of [`IkModel::kernel`].
pub fn ik_kernel(model: &IkModel, x: &[f64], y: &[f64]) -> Result<f64> {
    model.kernel(x, y)
}
