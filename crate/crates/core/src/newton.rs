//! Newton polygon `N_{r,s}` and the weight functions built on it.
//!
//! Norms are always evaluated through the product forms
//! `(1+|ξ|)^s (λ+|ξ|)^{r−s}`; the lattice sum over the polygon is kept for
//! polygon-level checks only. Product forms accept any real indices.

use serde::{Deserialize, Serialize};

use crate::error::{PencilError, Result};

/// Convex hull of `(0,0), (0,r−s), (s,r−s), (r,0)` and its lattice points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    pub r: u32,
    pub s: u32,
    pub vertices: Vec<[u32; 2]>,
    pub points: Vec<[u32; 2]>,
}

impl NewtonPolygon {
    pub fn new(r: i64, s: i64) -> Result<Self> {
        if !(r > s && s >= 0) {
            return Err(PencilError::input(format!("need r > s >= 0, got r = {r}, s = {s}")));
        }
        let (r, s) = (r as u32, s as u32);
        let h = r - s;
        let mut vertices = Vec::new();
        for v in [[0, 0], [0, h], [s, h], [r, 0]] {
            if !vertices.contains(&v) {
                vertices.push(v);
            }
        }
        // hull: 0 <= k <= r - s and i + k <= r (the slanted side has slope -1)
        let mut points = Vec::new();
        for k in 0..=h {
            for i in 0..=(r - k) {
                points.push([i, k]);
            }
        }
        Ok(NewtonPolygon {
            r,
            s,
            vertices,
            points,
        })
    }

    pub fn card(&self) -> usize {
        self.points.len()
    }

    /// `Σ_{(i,k) ∈ N} |ξ|^i λ^k`.
    pub fn weight_sum(&self, xi_norm: f64, lambda: f64) -> f64 {
        self.points
            .iter()
            .map(|&[i, k]| xi_norm.powi(i as i32) * lambda.powi(k as i32))
            .sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "r": self.r,
            "s": self.s,
            "vertices": self.vertices,
            "points": self.points,
        })
    }
}

/// Generalized indices `(r, s)` plus the lower parameter bound `λ₀`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    pub r: f64,
    pub s: f64,
    pub lambda0: f64,
}

impl WeightSpec {
    pub fn new(r: f64, s: f64) -> Self {
        WeightSpec {
            r,
            s,
            lambda0: 1.0,
        }
    }

    pub fn with_lambda0(mut self, lambda0: f64) -> Self {
        self.lambda0 = lambda0;
        self
    }

    /// Same spec with indices `(r + dr, s + ds)`.
    pub fn shifted(&self, dr: f64, ds: f64) -> Self {
        WeightSpec {
            r: self.r + dr,
            s: self.s + ds,
            lambda0: self.lambda0,
        }
    }

    /// `Ξ_{r,s} ≈ (1+|ξ|)^s (λ+|ξ|)^{r−s}`.
    pub fn weight_equiv(&self, xi_norm: f64, lambda: f64) -> f64 {
        (1.0 + xi_norm).powf(self.s) * (lambda + xi_norm).powf(self.r - self.s)
    }

    /// `Ξ^{(−l)}`: the weight of the polygon shifted left by `l`.
    pub fn shifted_weight(&self, l: f64, xi_norm: f64, lambda: f64) -> f64 {
        if l <= self.s {
            (1.0 + xi_norm).powf(self.s - l) * (lambda + xi_norm).powf(self.r - self.s)
        } else {
            (lambda + xi_norm).powf(self.r - l)
        }
    }

    /// `Φ ≈ |ξ|^s (λ+|ξ|)^{r−s}`, the slanted-side weight.
    pub fn phi_weight(&self, xi_norm: f64, lambda: f64) -> f64 {
        xi_norm.powf(self.s) * (lambda + xi_norm).powf(self.r - self.s)
    }

    /// `Φ^{(−l)}`: `|ξ|^{s−l}(λ+|ξ|)^{r−s}` for `l ≤ s`, `(λ+|ξ|)^{r−l}` above.
    pub fn shifted_phi(&self, l: f64, xi_norm: f64, lambda: f64) -> f64 {
        if l <= self.s {
            xi_norm.powf(self.s - l) * (lambda + xi_norm).powf(self.r - self.s)
        } else {
            (lambda + xi_norm).powf(self.r - l)
        }
    }

    /// `Θ = (1+|ξ|) Ξ_{r−2m, s−2μ}`.
    pub fn theta_weight(&self, m: usize, mu: usize, xi_norm: f64, lambda: f64) -> f64 {
        let lowered = self.shifted(-2.0 * m as f64, -2.0 * mu as f64);
        (1.0 + xi_norm) * lowered.weight_equiv(xi_norm, lambda)
    }

    /// `Ξ_ε(ξ) = (1+|ξ|)^s (1+ε|ξ|)^{r−s}`.
    pub fn epsilon_weight(&self, eps: f64, xi_norm: f64) -> Result<f64> {
        check_eps(eps)?;
        Ok((1.0 + xi_norm).powf(self.s) * (1.0 + eps * xi_norm).powf(self.r - self.s))
    }

    /// Shifted small-parameter weight `Ξ_ε^{(−l)}`, written without `λ`:
    /// `(1+|ξ|)^{s−l}(1+ε|ξ|)^{r−s}` for `l ≤ s`, `(1+ε|ξ|)^{r−l}` above.
    pub fn epsilon_shifted_weight(&self, eps: f64, l: f64, xi_norm: f64) -> Result<f64> {
        check_eps(eps)?;
        Ok(if l <= self.s {
            (1.0 + xi_norm).powf(self.s - l) * (1.0 + eps * xi_norm).powf(self.r - self.s)
        } else {
            (1.0 + eps * xi_norm).powf(self.r - l)
        })
    }

    /// Small-parameter slanted weight `Φ_ε^{(−l)}`:
    /// `|ξ|^{s−l}(1+ε|ξ|)^{r−s}` for `l ≤ s`, `ε^{l−s}(1+ε|ξ|)^{r−l}` above.
    pub fn epsilon_shifted_phi(&self, eps: f64, l: f64, xi_norm: f64) -> Result<f64> {
        check_eps(eps)?;
        Ok(if l <= self.s {
            xi_norm.powf(self.s - l) * (1.0 + eps * xi_norm).powf(self.r - self.s)
        } else {
            eps.powf(l - self.s) * (1.0 + eps * xi_norm).powf(self.r - l)
        })
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(PencilError::input(format!("epsilon must be positive, got {eps}")))
    }
}

/// Smooth cutoff equal to 1 on `[0, 1]` and 0 on `[2, ∞)`.
pub fn cutoff(x: f64) -> f64 {
    fn bump(t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else {
            (-1.0 / t).exp()
        }
    }
    let t = 2.0 - x;
    let a = bump(t);
    a / (a + bump(1.0 - t))
}
