use crate::error::{Error, Result};

/// Smallest grid accepted by the eigen-solvers.
pub const MIN_NODES: usize = 16;

/// Uniform grid of `n` nodes from `lo` to `hi` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    lo: f64,
    hi: f64,
    n: usize,
}

impl UniformGrid {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidInput(format!(
                "grid bounds [{lo}, {hi}] must be finite with lo < hi"
            )));
        }
        if n < 2 {
            return Err(Error::InvalidInput(format!("grid needs at least 2 nodes, got {n}")));
        }
        Ok(Self { lo, hi, n })
    }

    /// A grid usable by the finite-difference solvers (`n ≥ 16`).
    pub fn for_solver(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < MIN_NODES {
            return Err(Error::InvalidInput(format!(
                "solver grid needs at least {MIN_NODES} nodes, got {n}"
            )));
        }
        Self::new(lo, hi, n)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.n - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        // Pin the last node to `hi` exactly.
        if i + 1 == self.n {
            self.hi
        } else {
            self.lo + i as f64 * self.step()
        }
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.node(i))
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.nodes().collect()
    }

    /// Same interval with `2n − 1` nodes (step halved).
    pub fn refined(&self) -> Self {
        Self {
            n: 2 * self.n - 1,
            ..*self
        }
    }
}
