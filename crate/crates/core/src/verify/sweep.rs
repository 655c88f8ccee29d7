use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::geometry::{curvature_with, DiffMode, Immersion};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Quantity {
    K,
    H,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantity::K => "K",
            Quantity::H => "H",
        })
    }
}

impl FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "K" | "k" => Ok(Quantity::K),
            "H" | "h" => Ok(Quantity::H),
            _ => Err(Error::Config(format!("unknown quantity {s:?} (expected K or H)"))),
        }
    }
}

pub const DEFAULT_NODES: usize = 10;
pub const DEFAULT_RANDOM: usize = 100;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Nodes per axis. Empty means `DEFAULT_NODES` on every axis.
    pub grid: Vec<usize>,
    pub random: usize,
    pub seed: u64,
    pub mode: DiffMode,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            grid: Vec::new(),
            random: DEFAULT_RANDOM,
            seed: DEFAULT_SEED,
            mode: DiffMode::Jet,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub quantity: Quantity,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    /// Largest `|q - mean|`.
    pub max_abs_dev: f64,
    /// `max_abs_dev / |mean|`; infinite when the mean is zero and the
    /// samples are not.
    pub max_rel_dev: f64,
    pub samples: usize,
}

impl SweepReport {
    /// `max_abs_dev <= tol * max(1, |mean|)`, so that quantities near zero
    /// are judged absolutely.
    pub fn is_constant(&self, tol: f64) -> bool {
        self.max_abs_dev <= tol * self.mean.abs().max(1.0)
    }
}

/// Samples `q` on the grid of the immersion's domain plus `random` seeded
/// uniform points. The first degenerate or undefined point aborts the sweep
/// with that point's error.
pub fn constancy_sweep(s: &Immersion, q: Quantity, cfg: &SweepConfig) -> Result<SweepReport> {
    let dim = s.param_dim();
    let counts = if cfg.grid.is_empty() {
        vec![DEFAULT_NODES; dim]
    } else {
        cfg.grid.clone()
    };
    let mut points = s.domain.grid(&counts)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    points.extend((0..cfg.random).map(|_| s.domain.sample(&mut rng)));

    let values = points
        .iter()
        .map(|x| {
            let r = curvature_with(s, x, cfg.mode)?;
            Ok(match q {
                Quantity::K => r.k,
                Quantity::H => r.h,
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(summarize(q, &values))
}

fn summarize(quantity: Quantity, values: &[f64]) -> SweepReport {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let max_abs_dev = values.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
    let max_rel_dev = if max_abs_dev == 0.0 {
        0.0
    } else {
        max_abs_dev / mean.abs()
    };
    SweepReport {
        quantity,
        min,
        max,
        mean,
        max_abs_dev,
        max_rel_dev,
        samples: n,
    }
}
