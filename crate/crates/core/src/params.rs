//! Pipeline hyperparameters and their defaults.

use serde::{Deserialize, Serialize};

use crate::wl::EmbeddingMode;

pub const DEFAULT_PSI: usize = 16;
pub const DEFAULT_T: usize = 100;
pub const DEFAULT_H: usize = 2;
pub const DEFAULT_RHO: f64 = 0.1;
pub const DEFAULT_TAU_QUANTILE: f64 = 0.85;
pub const DEFAULT_HIGHLIGHT_FRACTION: f64 = 0.25;

/// Isolation Kernel and WL settings. `seed` is the IK fit seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbedParams {
    pub psi: usize,
    pub t: usize,
    pub h: usize,
    pub mode: EmbeddingMode,
    pub seed: u64,
}

impl Default for EmbedParams {
    fn default() -> Self {
        Self { psi: DEFAULT_PSI, t: DEFAULT_T, h: DEFAULT_H, mode: EmbeddingMode::Final, seed: 0 }
    }
}

/// Cluster growth settings. `tau = None` resolves through
/// [`crate::detect::auto_tau`] at `tau_quantile`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectParams {
    pub tau: Option<f64>,
    pub tau_quantile: f64,
    pub rho: f64,
}

impl Default for DetectParams {
    fn default() -> Self {
        Self { tau: None, tau_quantile: DEFAULT_TAU_QUANTILE, rho: DEFAULT_RHO }
    }
}
