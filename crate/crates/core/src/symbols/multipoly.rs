use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::UniPoly;
use crate::error::{PencilError, Result};

/// Exponent vector of a monomial `ξ^α = ξ_1^{α_1} ⋯ ξ_n^{α_n}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The unit index `e_k`.
    pub fn unit(n: usize, k: usize) -> Self {
        let mut e = vec![0; n];
        e[k] = 1;
        MultiIndex(e)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|α| = Σ α_k`.
    pub fn order(&self) -> usize {
        self.0.iter().map(|&a| a as usize).sum()
    }

    fn plus(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// Polynomial in `ξ ∈ ℝⁿ` with complex coefficients.
///
/// Zero coefficients are never stored: an exact-zero sum drops its term, and
/// nothing smaller than exact zero is pruned.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiPoly {
    n: usize,
    terms: BTreeMap<MultiIndex, Complex64>,
}

impl MultiPoly {
    pub fn zero(n: usize) -> Self {
        MultiPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Complex64) -> Self {
        let mut p = Self::zero(n);
        p.add_term(MultiIndex::zero(n), c);
        p
    }

    /// `c · ξ^α`.
    pub fn monomial(alpha: Vec<u32>, c: Complex64) -> Self {
        let n = alpha.len();
        let mut p = Self::zero(n);
        p.add_term(MultiIndex(alpha), c);
        p
    }

    /// `ξ_k` (zero-based `k`).
    pub fn variable(n: usize, k: usize) -> Self {
        let mut p = Self::zero(n);
        p.add_term(MultiIndex::unit(n, k), Complex64::new(1.0, 0.0));
        p
    }

    /// `|ξ|² = ξ_1² + … + ξ_n²`.
    pub fn squared_norm(n: usize) -> Self {
        let mut p = Self::zero(n);
        for k in 0..n {
            let mut e = vec![0; n];
            e[k] = 2;
            p.add_term(MultiIndex(e), Complex64::new(1.0, 0.0));
        }
        p
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Complex64)>,
    {
        let mut p = Self::zero(n);
        for (alpha, c) in terms {
            if alpha.len() != n {
                return Err(PencilError::input(format!(
                    "multi-index {alpha:?} has length {} but the dimension is {n}",
                    alpha.len()
                )));
            }
            p.add_term(MultiIndex(alpha), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, alpha: MultiIndex, c: Complex64) {
        debug_assert_eq!(alpha.dim(), self.n);
        let sum = self.terms.get(&alpha).copied().unwrap_or_default() + c;
        if sum == Complex64::new(0.0, 0.0) {
            self.terms.remove(&alpha);
        } else {
            self.terms.insert(alpha, sum);
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &[u32]) -> Complex64 {
        self.terms
            .get(&MultiIndex(alpha.to_vec()))
            .copied()
            .unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(MultiIndex::order).max()
    }

    pub fn is_homogeneous(&self, d: usize) -> bool {
        self.terms.keys().all(|a| a.order() == d)
    }

    pub fn scale_coeffs(&self, c: Complex64) -> MultiPoly {
        let mut p = MultiPoly::zero(self.n);
        for (a, &v) in &self.terms {
            p.add_term(a.clone(), v * c);
        }
        p
    }

    /// `Σ_α c_α z^α` at a complex point.
    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.n {
            return Err(PencilError::input(format!(
                "point has length {} but the polynomial lives in dimension {}",
                z.len(),
                self.n
            )));
        }
        Ok(self
            .terms
            .iter()
            .map(|(alpha, &c)| {
                alpha
                    .entries()
                    .iter()
                    .zip(z)
                    .fold(c, |acc, (&a, &zk)| acc * zk.powu(a))
            })
            .sum())
    }

    pub fn eval_real(&self, xi: &[f64]) -> Result<Complex64> {
        let z: Vec<Complex64> = xi.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.eval(&z)
    }

    /// Terms with `|α| = d` only.
    pub fn homogeneous_part(&self, d: usize) -> MultiPoly {
        MultiPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(a, _)| a.order() == d)
                .map(|(a, &c)| (a.clone(), c))
                .collect(),
        }
    }

    /// `τ ↦ p(ξ′, τ)`, the last coordinate being the normal direction.
    pub fn restrict_to_normal(&self, xi_tan: &[f64]) -> Result<UniPoly> {
        if self.n < 2 {
            return Err(PencilError::input(
                "normal restriction needs dimension n >= 2",
            ));
        }
        if xi_tan.len() != self.n - 1 {
            return Err(PencilError::input(format!(
                "tangential vector has length {} but n - 1 = {}",
                xi_tan.len(),
                self.n - 1
            )));
        }
        let deg = self.degree().unwrap_or(0);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); deg + 1];
        for (alpha, &c) in &self.terms {
            let e = alpha.entries();
            let tangential = e[..self.n - 1]
                .iter()
                .zip(xi_tan)
                .fold(1.0, |acc, (&a, &x)| acc * x.powi(a as i32));
            coeffs[e[self.n - 1] as usize] += c * tangential;
        }
        Ok(UniPoly::new(coeffs))
    }

    /// Multiplies every coefficient by `ρ^{|α|}`, so that the result evaluated
    /// at `ξ` equals `p(ρ ξ)`.
    pub fn scale_symbol(&self, rho: f64) -> Result<MultiPoly> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(PencilError::input(format!(
                "scaling factor must be positive, got {rho}"
            )));
        }
        let mut p = MultiPoly::zero(self.n);
        for (a, &c) in &self.terms {
            p.add_term(a.clone(), c * rho.powi(a.order() as i32));
        }
        Ok(p)
    }

    fn check_dims(&self, other: &MultiPoly) {
        assert_eq!(self.n, other.n, "polynomial dimensions differ");
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.check_dims(rhs);
        let mut p = self.clone();
        for (a, &c) in &rhs.terms {
            p.add_term(a.clone(), c);
        }
        p
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale_coeffs(Complex64::new(-1.0, 0.0))
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.check_dims(rhs);
        let mut p = MultiPoly::zero(self.n);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &rhs.terms {
                p.add_term(a.plus(b), ca * cb);
            }
        }
        p
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (alpha, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (k, &a) in alpha.entries().iter().enumerate() {
                match a {
                    0 => {}
                    1 => write!(f, "ξ{}", k + 1)?,
                    _ => write!(f, "ξ{}^{a}", k + 1)?,
                }
            }
        }
        Ok(())
    }
}
