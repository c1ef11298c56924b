//! Step graphons: block partition weights plus a symmetric matrix of edge
//! probabilities.
//!
//! A step graphon is constant on products of finitely many blocks, so every
//! density computed here reduces to a finite sum over block assignments. The
//! block measures `mu` must be positive and sum to one; the value matrix must
//! be symmetric with entries in `[0, 1]`.

use crate::density::conditional_density;
use crate::error::{Error, Result};
use crate::multigraph::LabeledMultigraph;

/// Tolerance for the `sum(mu) = 1` validation check.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Default tolerance for regularity predicates.
pub const REGULARITY_DEFAULT_TOL: f64 = 1e-10;

/// A step graphon on `B` blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct StepGraphon {
    mu: Vec<f64>,
    /// Flat row-major `B x B` symmetric matrix.
    values: Vec<f64>,
    blocks: usize,
}

/// A real vector indexed by the blocks of a step graphon, such as the degree
/// function or a per-block clique density profile.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockVector(Vec<f64>);

impl BlockVector {
    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    /// Max minus min entry; zero for the empty vector.
    pub fn spread(&self) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &x in &self.0 {
            lo = lo.min(x);
            hi = hi.max(x);
        }
        if self.0.is_empty() {
            0.0
        } else {
            hi - lo
        }
    }
}

impl StepGraphon {
    /// Validates raw partition weights and a value matrix.
    pub fn new(mu: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        let b = mu.len();
        if b == 0 {
            return Err(Error::InvalidGraphon("empty block partition".into()));
        }
        if values.len() != b || values.iter().any(|row| row.len() != b) {
            return Err(Error::InvalidGraphon(format!(
                "value matrix must be {b}x{b} to match {b} blocks"
            )));
        }
        let mut flat = Vec::with_capacity(b * b);
        for row in &values {
            flat.extend_from_slice(row);
        }
        Self::from_flat(mu, flat)
    }

    /// Same as [`StepGraphon::new`] but takes the matrix in flat row-major form.
    pub fn from_flat(mu: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let b = mu.len();
        if b == 0 {
            return Err(Error::InvalidGraphon("empty block partition".into()));
        }
        if values.len() != b * b {
            return Err(Error::InvalidGraphon(format!(
                "value matrix must have {} entries, got {}",
                b * b,
                values.len()
            )));
        }
        for (i, &m) in mu.iter().enumerate() {
            if !m.is_finite() || m <= 0.0 {
                return Err(Error::InvalidGraphon(format!(
                    "block weight mu[{i}] = {m} is not positive"
                )));
            }
        }
        let sum: f64 = mu.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidGraphon(format!(
                "block weights sum to {sum}, expected 1"
            )));
        }
        for i in 0..b {
            for j in 0..b {
                let v = values[i * b + j];
                if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidGraphon(format!(
                        "value[{i}][{j}] = {v} is outside [0, 1]"
                    )));
                }
                if values[i * b + j] != values[j * b + i] {
                    return Err(Error::InvalidGraphon(format!(
                        "value matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(StepGraphon {
            mu,
            values,
            blocks: b,
        })
    }

    pub fn block_count(&self) -> usize {
        self.blocks
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.blocks + j]
    }

    /// Flat row-major view of the value matrix.
    pub fn values_flat(&self) -> &[f64] {
        &self.values
    }

    /// The value matrix as rows, for serialization.
    pub fn values_rows(&self) -> Vec<Vec<f64>> {
        (0..self.blocks)
            .map(|i| self.values[i * self.blocks..(i + 1) * self.blocks].to_vec())
            .collect()
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Integral of `W^2`, i.e. the squared Hilbert-Schmidt norm of the kernel.
    pub fn square_integral(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.blocks {
            for j in 0..self.blocks {
                let v = self.value(i, j);
                acc += self.mu[i] * self.mu[j] * v * v;
            }
        }
        acc
    }

    /// Degree function: entry `i` is `sum_j mu_j * value[i][j]`.
    pub fn degree_function(&self) -> BlockVector {
        let deg = (0..self.blocks)
            .map(|i| {
                (0..self.blocks)
                    .map(|j| self.mu[j] * self.value(i, j))
                    .sum()
            })
            .collect();
        BlockVector(deg)
    }

    /// Per-block density of r-cliques through a vertex of that block.
    ///
    /// Entry `i` is the conditional density of an r-clique with one marked
    /// vertex pinned to block `i`. For `r = 2` this is the degree function.
    pub fn clique_profile(&self, r: usize) -> Result<BlockVector> {
        if r < 2 {
            return Err(Error::InvalidInput(format!(
                "clique order r = {r} must be at least 2"
            )));
        }
        let marked = LabeledMultigraph::complete(r).with_marked(vec![0])?;
        let profile = (0..self.blocks)
            .map(|i| conditional_density(&marked, self, &[i]))
            .collect::<Result<Vec<f64>>>()?;
        Ok(BlockVector(profile))
    }

    /// Whether the per-block r-clique profile is constant up to `tol`
    /// (absolute spread).
    pub fn is_kr_regular(&self, r: usize, tol: f64) -> Result<bool> {
        if tol <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "regularity tolerance {tol} must be positive"
            )));
        }
        Ok(self.clique_profile(r)?.spread() <= tol)
    }

    /// The auxiliary graphon whose value at `(x, y)` is the density of
    /// r-cliques containing both `x` and `y`.
    ///
    /// Shares this graphon's partition. For `r = 2` it is the graphon itself.
    pub fn vwr(&self, r: usize) -> Result<StepGraphon> {
        if r < 2 {
            return Err(Error::InvalidInput(format!(
                "clique order r = {r} must be at least 2"
            )));
        }
        if r == 2 {
            return Ok(self.clone());
        }
        let marked = LabeledMultigraph::complete(r).with_marked(vec![0, 1])?;
        let b = self.blocks;
        let mut flat = vec![0.0; b * b];
        for i in 0..b {
            for j in i..b {
                // Densities land in [0, 1] up to rounding; clamp so the
                // result revalidates.
                let v = conditional_density(&marked, self, &[i, j])?.clamp(0.0, 1.0);
                flat[i * b + j] = v;
                flat[j * b + i] = v;
            }
        }
        StepGraphon::from_flat(self.mu.clone(), flat)
    }
}
