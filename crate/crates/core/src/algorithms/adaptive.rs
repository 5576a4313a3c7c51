use crate::algorithms::{median_in_place, ApproxParams};
use crate::error::{Error, Result};
use crate::information::{Information, RandomStream, Residual};
use crate::mixed_norm::{Exponent, Matrix};

/// `((1/k) * sum_t |f(row, cols[t])|^v)^{1/v}` using exactly `cols.len()` queries.
///
/// With `cols` drawn i.i.d. uniformly this is an estimate of `||f_row||_{L_v}`.
pub fn estimate_norm<I: Information>(info: &mut I, row: usize, v: Exponent, cols: &[usize]) -> Result<f64> {
    if cols.is_empty() {
        return Err(Error::invalid("norm estimate needs at least one sample"));
    }
    if v.is_infinite() {
        return Err(Error::invalid("norm estimation requires a finite exponent v"));
    }
    let k = cols.len() as f64;
    let r = v.reciprocal();
    if r == 1.0 {
        let mut sum = 0.0;
        for &c in cols {
            sum += info.query(row, c)?.abs();
        }
        return Ok(sum / k);
    }
    let power = v.value();
    let mut sum = 0.0;
    for &c in cols {
        sum += info.query(row, c)?.abs().powf(power);
    }
    Ok((sum / k).powf(r))
}

/// Per-row norm estimates, their medians, and the ranking of rows.
#[derive(Clone, Debug, PartialEq)]
pub struct RowEstimates {
    /// Row-major `N1 x m`: estimate `k` of row `i` is at `i * m + k`.
    pub estimates: Vec<f64>,
    pub m: usize,
    /// Median of each row's `m` estimates.
    pub medians: Vec<f64>,
    /// Rows by non-increasing median; ties keep ascending row order.
    pub ranking: Vec<usize>,
}

impl RowEstimates {
    pub fn row(&self, i: usize) -> &[f64] {
        &self.estimates[i * self.m..(i + 1) * self.m]
    }
}

/// Draws one table of `ceil(n/N1) x m` uniform column indices, shared by all
/// rows, and estimates every row norm `m` times from it.
///
/// Spends exactly `m * N1 * ceil(n/N1)` queries.
pub fn row_estimates<I: Information>(
    info: &mut I,
    params: &ApproxParams,
    stream: &mut RandomStream,
) -> Result<RowEstimates> {
    let (n1, n2) = info.shape();
    if (n1, n2) != (params.sp.n1, params.sp.n2) {
        return Err(Error::invalid(format!(
            "input is {n1}x{n2} but parameters are for {}x{}",
            params.sp.n1, params.sp.n2
        )));
    }
    let k = params.samples_per_estimate();
    let m = params.m;
    let table: Vec<usize> = (0..k * m).map(|_| stream.uniform_index(n2)).collect();

    let mut estimates = Vec::with_capacity(n1 * m);
    let mut medians = Vec::with_capacity(n1);
    let mut scratch = vec![0.0; m];
    for i in 0..n1 {
        for (rep, cols) in table.chunks_exact(k).enumerate() {
            scratch[rep] = estimate_norm(info, i, params.sp.v, cols)?;
        }
        estimates.extend_from_slice(&scratch);
        medians.push(median_in_place(&mut scratch));
    }

    let mut ranking: Vec<usize> = (0..n1).collect();
    // Stable: equal medians stay in ascending row order.
    ranking.sort_by(|&a, &b| medians[b].total_cmp(&medians[a]));

    Ok(RowEstimates { estimates, m, medians, ranking })
}

/// Reads the `ceil(n/N2)` top-ranked rows exactly and sets all other rows to
/// zero. Every output row is either the input row or zero.
pub fn top_rows<I: Information>(info: &mut I, params: &ApproxParams, stream: &mut RandomStream) -> Result<Matrix> {
    top_rows_with_estimates(info, params, stream).map(|(out, _)| out)
}

pub fn top_rows_with_estimates<I: Information>(
    info: &mut I,
    params: &ApproxParams,
    stream: &mut RandomStream,
) -> Result<(Matrix, RowEstimates)> {
    params.check_sampling_regime()?;
    let est = row_estimates(info, params, stream)?;
    let (n1, n2) = info.shape();
    let mut out = Matrix::zeros(n1, n2);
    for &i in est.ranking.iter().take(params.rows_read()) {
        for j in 0..n2 {
            let x = info.query(i, j)?;
            out.set(i, j, x);
        }
    }
    Ok((out, est))
}

/// Row selection, then row selection again on the residual with an
/// independent stream. Each residual evaluation costs one query, so the
/// total is exactly twice that of [`top_rows`].
pub fn iterated<I: Information>(info: &mut I, params: &ApproxParams, stream: &mut RandomStream) -> Result<Matrix> {
    let first = top_rows(info, params, &mut stream.child("stage1"))?;
    let second = {
        let mut residual = Residual::new(info, &first);
        top_rows(&mut residual, params, &mut stream.child("stage2"))?
    };
    Ok(first.add(&second))
}
