//! Standard information: algorithms see the input only through point
//! evaluations `f(i, j)`, and every evaluation is counted.
//!
//! Indices are zero-based throughout the crate.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::mixed_norm::Matrix;

/// Point-evaluation access to an `n1 x n2` input.
pub trait Information {
    fn shape(&self) -> (usize, usize);

    fn query(&mut self, row: usize, col: usize) -> Result<f64>;

    fn queries(&self) -> u64;
}

/// Wraps an input matrix, counting every query and optionally enforcing a budget.
///
/// Repeated queries of the same cell are counted each time.
#[derive(Debug)]
pub struct InfoOracle<'a> {
    target: &'a Matrix,
    count: u64,
    budget: Option<u64>,
}

impl<'a> InfoOracle<'a> {
    pub fn new(target: &'a Matrix) -> Self {
        InfoOracle { target, count: 0, budget: None }
    }

    pub fn with_budget(target: &'a Matrix, budget: u64) -> Self {
        InfoOracle { target, count: 0, budget: Some(budget) }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn budget(&self) -> Option<u64> {
        self.budget
    }
}

impl Information for InfoOracle<'_> {
    fn shape(&self) -> (usize, usize) {
        (self.target.n1(), self.target.n2())
    }

    #[inline]
    fn query(&mut self, row: usize, col: usize) -> Result<f64> {
        let (n1, n2) = self.shape();
        if row >= n1 || col >= n2 {
            return Err(Error::IndexOutOfRange { row, col, n1, n2 });
        }
        if let Some(budget) = self.budget {
            if self.count >= budget {
                return Err(Error::BudgetExceeded { attempted: self.count + 1, budget });
            }
        }
        self.count += 1;
        Ok(self.target.get(row, col))
    }

    fn queries(&self) -> u64 {
        self.count
    }
}

/// Information about `f - known`, paid for with one query of `f` per evaluation.
pub struct Residual<'a, I: Information> {
    inner: &'a mut I,
    known: &'a Matrix,
}

impl<'a, I: Information> Residual<'a, I> {
    pub fn new(inner: &'a mut I, known: &'a Matrix) -> Self {
        assert_eq!(inner.shape(), (known.n1(), known.n2()), "residual shape mismatch");
        Residual { inner, known }
    }
}

impl<I: Information> Information for Residual<'_, I> {
    fn shape(&self) -> (usize, usize) {
        self.inner.shape()
    }

    #[inline]
    fn query(&mut self, row: usize, col: usize) -> Result<f64> {
        Ok(self.inner.query(row, col)? - self.known.get(row, col))
    }

    fn queries(&self) -> u64 {
        self.inner.queries()
    }
}

/// A reproducible random stream keyed by `(master_seed, label, index)`.
///
/// The key is hashed into a ChaCha seed, so streams never depend on the order
/// in which they are created or consumed.
#[derive(Clone, Debug)]
pub struct RandomStream {
    master_seed: u64,
    label: String,
    index: u64,
    rng: ChaCha8Rng,
}

pub fn substream(master_seed: u64, label: &str, index: u64) -> RandomStream {
    let mut hasher = Sha256::new();
    hasher.update(master_seed.to_le_bytes());
    hasher.update((label.len() as u64).to_le_bytes());
    hasher.update(label.as_bytes());
    hasher.update(index.to_le_bytes());
    let seed: [u8; 32] = hasher.finalize().into();
    RandomStream {
        master_seed,
        label: label.to_owned(),
        index,
        rng: ChaCha8Rng::from_seed(seed),
    }
}

impl RandomStream {
    /// Independent stream derived from this stream's key, not its state.
    pub fn child(&self, tag: &str) -> RandomStream {
        substream(self.master_seed, &format!("{}/{}", self.label, tag), self.index)
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// Uniform in `0..n`.
    #[inline]
    pub fn uniform_index(&mut self, n: usize) -> usize {
        assert!(n > 0, "uniform_index over an empty range");
        self.rng.random_range(0..n)
    }

    /// Uniform in `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.rng.random()
    }

    /// A symmetric Bernoulli sign, `+1.0` or `-1.0`.
    #[inline]
    pub fn sign(&mut self) -> f64 {
        if self.rng.random::<bool>() {
            1.0
        } else {
            -1.0
        }
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }
}
