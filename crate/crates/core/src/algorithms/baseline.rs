//! Non-adaptive competitors: every query position is fixed before any value is seen.

use rand::seq::index;

use crate::error::Result;
use crate::information::{Information, RandomStream};
use crate::mixed_norm::{Matrix, SpacePair};

/// Always returns zero and makes no queries.
pub fn zero_algorithm(sp: &SpacePair) -> Matrix {
    Matrix::zeros(sp.n1, sp.n2)
}

/// Reads the first `floor(n/N2)` rows completely.
pub fn fixed_rows<I: Information>(info: &mut I, n: usize) -> Result<Matrix> {
    let (n1, n2) = info.shape();
    let mut out = Matrix::zeros(n1, n2);
    for i in 0..(n / n2).min(n1) {
        for j in 0..n2 {
            let x = info.query(i, j)?;
            out.set(i, j, x);
        }
    }
    Ok(out)
}

/// Reads `n` cells drawn uniformly without replacement before querying.
pub fn random_cells<I: Information>(info: &mut I, n: usize, stream: &mut RandomStream) -> Result<Matrix> {
    let (n1, n2) = info.shape();
    let grid = n1 * n2;
    let cells = index::sample(stream, grid, n.min(grid)).into_vec();
    let mut out = Matrix::zeros(n1, n2);
    for c in cells {
        let (i, j) = (c / n2, c % n2);
        out.set(i, j, info.query(i, j)?);
    }
    Ok(out)
}

/// Number of queries [`fixed_rows`] spends.
pub fn fixed_rows_queries(n1: usize, n2: usize, n: usize) -> u64 {
    ((n / n2).min(n1) * n2) as u64
}

/// Number of queries [`random_cells`] spends.
pub fn random_cells_queries(n1: usize, n2: usize, n: usize) -> u64 {
    n.min(n1 * n2) as u64
}
