//! Frequency-space quadrature: log-radial composite Gauss–Legendre rules times
//! uniform directions, plus deterministic summation.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{PencilError, Result};

/// Gauss–Legendre nodes and weights on `[−1, 1]` (Golub–Welsch).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    if n == 0 {
        return (Vec::new(), Vec::new());
    }
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i.abs_diff(j) == 1 {
            let k = i.max(j) as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| (eig.eigenvalues[k], 2.0 * eig.eigenvectors[(0, k)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    // symmetrize to remove eigen-solver asymmetry
    for k in 0..n / 2 {
        let (a, b) = (pairs[k], pairs[n - 1 - k]);
        let x = 0.5 * (b.0 - a.0);
        let w = 0.5 * (a.1 + b.1);
        pairs[k] = (-x, w);
        pairs[n - 1 - k] = (x, w);
    }
    if n % 2 == 1 {
        pairs[n / 2].0 = 0.0;
    }
    pairs.into_iter().unzip()
}

/// Pairwise summation in a fixed order.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Resolution of a [`SpectralGrid`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridConfig {
    /// Radial nodes in total.
    pub radial: usize,
    /// Directions per angular dimension (ignored in dimension 1).
    pub angular: usize,
    /// Truncation radius is `truncation_factor · max(1, λ)`.
    pub truncation_factor: f64,
    /// Inner radius below which a plain Gauss–Legendre panel is used.
    pub r_min: f64,
    /// Number of log-radial panels.
    pub panels: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            radial: 256,
            angular: 64,
            truncation_factor: 32.0,
            r_min: 1e-4,
            panels: 16,
        }
    }
}

impl GridConfig {
    /// Twice the radial and angular resolution and twice the truncation radius.
    pub fn doubled(&self) -> Self {
        GridConfig {
            radial: 2 * self.radial,
            angular: 2 * self.angular,
            truncation_factor: 2.0 * self.truncation_factor,
            ..self.clone()
        }
    }

    pub fn truncation(&self, lambda: f64) -> f64 {
        self.truncation_factor * lambda.max(1.0)
    }

    pub fn grid(&self, dim: usize, lambda: f64) -> Result<SpectralGrid> {
        SpectralGrid::log_radial(dim, self, self.truncation(lambda))
    }
}

/// Quadrature nodes `ξ ∈ ℝ^d` with positive weights, symmetric under `ξ → −ξ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralGrid {
    pub dim: usize,
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub truncation: f64,
}

impl SpectralGrid {
    pub fn log_radial(dim: usize, cfg: &GridConfig, truncation: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(PencilError::input(format!("grid dimension {dim} not in 1..=3")));
        }
        if !(truncation > cfg.r_min && cfg.r_min > 0.0) || cfg.panels == 0 || cfg.radial < cfg.panels + 1 {
            return Err(PencilError::input("inconsistent grid configuration"));
        }
        let radii = radial_rule(cfg, truncation);
        let dirs = directions(dim, cfg.angular);
        let mut nodes = Vec::with_capacity(radii.len() * dirs.len());
        let mut weights = Vec::with_capacity(radii.len() * dirs.len());
        for &(rho, wr) in &radii {
            for (omega, wd) in &dirs {
                nodes.push(omega.iter().map(|x| x * rho).collect());
                weights.push(wr * wd * rho.powi(dim as i32 - 1));
            }
        }
        Ok(SpectralGrid {
            dim,
            nodes,
            weights,
            truncation,
        })
    }

    /// A discrete measure given explicitly.
    pub fn from_nodes(dim: usize, nodes: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        if nodes.len() != weights.len() || nodes.iter().any(|x| x.len() != dim) {
            return Err(PencilError::input("node and weight lists disagree"));
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return Err(PencilError::input("weights must be positive"));
        }
        let truncation = nodes
            .iter()
            .map(|x| x.iter().map(|v| v * v).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
        Ok(SpectralGrid {
            dim,
            nodes,
            weights,
            truncation,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ w_k f(ξ_k)`, evaluated in parallel and summed pairwise.
    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64 + Sync) -> f64 {
        let vals: Vec<f64> = self
            .nodes
            .par_iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(x))
            .collect();
        pairwise_sum(&vals)
    }

    /// Weighted sum of precomputed per-node values.
    pub fn sum_values(&self, values: &[f64]) -> f64 {
        let v: Vec<f64> = values.iter().zip(&self.weights).map(|(a, w)| a * w).collect();
        pairwise_sum(&v)
    }
}

fn radial_rule(cfg: &GridConfig, truncation: f64) -> Vec<(f64, f64)> {
    let per_panel = ((cfg.radial - cfg.radial / (cfg.panels + 1)) / cfg.panels).max(1);
    let inner = cfg.radial - per_panel * cfg.panels;
    let mut out = Vec::with_capacity(cfg.radial);
    let (x, w) = gauss_legendre(inner.max(1));
    for (xi, wi) in x.iter().zip(&w) {
        out.push((0.5 * cfg.r_min * (xi + 1.0), 0.5 * cfg.r_min * wi));
    }
    let (a, b) = (cfg.r_min.ln(), truncation.ln());
    let h = (b - a) / cfg.panels as f64;
    let (x, w) = gauss_legendre(per_panel);
    for p in 0..cfg.panels {
        let lo = a + h * p as f64;
        for (xi, wi) in x.iter().zip(&w) {
            let s = lo + 0.5 * h * (xi + 1.0);
            let rho = s.exp();
            out.push((rho, 0.5 * h * wi * rho));
        }
    }
    out
}

/// Unit directions with weights summing to the sphere area.
fn directions(dim: usize, angular: usize) -> Vec<(Vec<f64>, f64)> {
    match dim {
        1 => vec![(vec![1.0], 1.0), (vec![-1.0], 1.0)],
        2 => {
            let k = angular.max(2) & !1;
            (0..k)
                .map(|i| {
                    let phi = 2.0 * PI * (i as f64 + 0.5) / k as f64;
                    (vec![phi.cos(), phi.sin()], 2.0 * PI / k as f64)
                })
                .collect()
        }
        _ => {
            let k = angular.max(2) & !1;
            let (ct, wt) = gauss_legendre(k / 2);
            let mut out = Vec::new();
            for (c, w) in ct.iter().zip(&wt) {
                let s = (1.0 - c * c).sqrt();
                for i in 0..k {
                    let phi = 2.0 * PI * (i as f64 + 0.5) / k as f64;
                    out.push((vec![s * phi.cos(), s * phi.sin(), *c], w * 2.0 * PI / k as f64));
                }
            }
            out
        }
    }
}
