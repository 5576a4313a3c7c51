//! Randomized approximation algorithms for the identity embedding
//! `L_p^{N1}(L_u^{N2}) -> L_q^{N1}(L_v^{N2})` with standard information.
//!
//! - [`estimate_norm`]: Monte Carlo estimate of one row's `L_v` norm.
//! - [`row_estimates`]: median-boosted norm estimates for all rows, ranked.
//! - [`top_rows`]: reads the highest-ranked rows exactly, zeros the rest.
//! - [`iterated`]: [`top_rows`] applied twice, the second time to the residual.
//! - [`dispatch`]: picks the zero algorithm, a full read, [`top_rows`] or
//!   [`iterated`] from the exponents.
//!
//! Non-adaptive competitors live in [`baseline`].

mod adaptive;
pub mod baseline;

pub use adaptive::{estimate_norm, iterated, row_estimates, top_rows, top_rows_with_estimates, RowEstimates};
pub use baseline::{fixed_rows, random_cells, zero_algorithm};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::information::{Information, RandomStream};
use crate::mixed_norm::{Matrix, SpacePair};

/// Space pair, information budget `n` and median repetitions `m`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxParams {
    pub sp: SpacePair,
    pub n: usize,
    pub m: usize,
}

impl ApproxParams {
    pub fn new(sp: SpacePair, n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::invalid(format!("need n >= 1 and m >= 1, got n={n}, m={m}")));
        }
        Ok(ApproxParams { sp, n, m })
    }

    /// Uses [`default_repetitions`] for `m`.
    pub fn with_default_m(sp: SpacePair, n: usize) -> Result<Self> {
        Self::new(sp, n, default_repetitions(sp.n1, sp.n2))
    }

    /// Samples per row estimate, `ceil(n / N1)`.
    pub fn samples_per_estimate(&self) -> usize {
        self.n.div_ceil(self.sp.n1)
    }

    /// Rows read exactly, `ceil(n / N2)`.
    pub fn rows_read(&self) -> usize {
        self.n.div_ceil(self.sp.n2)
    }

    pub(crate) fn check_sampling_regime(&self) -> Result<()> {
        if self.n >= self.sp.grid_size() {
            return Err(Error::invalid(format!(
                "row selection needs n < N1*N2 (n={}, N1*N2={})",
                self.n,
                self.sp.grid_size()
            )));
        }
        Ok(())
    }
}

/// Median repetitions `ceil(c * log2(N1 + N2))` with `c = 8(w+1)/log2(e)`, `w = 1`.
pub fn default_repetitions(n1: usize, n2: usize) -> usize {
    let c = 16.0 * std::f64::consts::LN_2;
    (c * ((n1 + n2) as f64).log2()).ceil().max(1.0) as usize
}

/// Median of a non-empty slice: the middle element for odd length, the mean
/// of the two middle elements for even length.
pub fn median(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::invalid("median of an empty sequence"));
    }
    let mut sorted = values.to_vec();
    Ok(median_in_place(&mut sorted))
}

pub(crate) fn median_in_place(values: &mut [f64]) -> f64 {
    values.sort_unstable_by(f64::total_cmp);
    let m = values.len();
    if m % 2 == 1 {
        values[m / 2]
    } else {
        (values[m / 2 - 1] + values[m / 2]) / 2.0
    }
}

/// Exact query count of a run together with the closed-form upper bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cardinality {
    pub exact: u64,
    pub bound: u64,
}

/// `m*N1*ceil(n/N1) + N2*ceil(n/N2)` for one row-selection pass, bounded by
/// `(m+1)n + m*N1 + N2`; both doubled for the iterated algorithm.
pub fn cardinality_count(params: &ApproxParams, iterated: bool) -> Cardinality {
    let (n1, n2) = (params.sp.n1 as u64, params.sp.n2 as u64);
    let (n, m) = (params.n as u64, params.m as u64);
    let exact = m * n1 * n.div_ceil(n1) + n2 * n.div_ceil(n2);
    let bound = (m + 1) * n + m * n1 + n2;
    let factor = if iterated { 2 } else { 1 };
    Cardinality { exact: factor * exact, bound: factor * bound }
}

/// What [`dispatch`] does for a given configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Route {
    Zero,
    FullRead,
    TopRows,
    Iterated,
}

pub fn route(sp: &SpacePair, n: usize) -> Route {
    if !sp.is_adaptive_regime() {
        Route::Zero
    } else if n >= sp.grid_size() {
        Route::FullRead
    } else if sp.v.reciprocal() - sp.u.reciprocal() <= 0.5 {
        Route::TopRows
    } else {
        Route::Iterated
    }
}

/// Exact number of queries [`dispatch`] spends.
pub fn dispatch_queries(params: &ApproxParams) -> u64 {
    match route(&params.sp, params.n) {
        Route::Zero => 0,
        Route::FullRead => params.sp.grid_size() as u64,
        Route::TopRows => cardinality_count(params, false).exact,
        Route::Iterated => cardinality_count(params, true).exact,
    }
}

/// The order-optimal algorithm for the configuration; see [`route`].
pub fn dispatch<I: Information>(info: &mut I, params: &ApproxParams, stream: &mut RandomStream) -> Result<Matrix> {
    match route(&params.sp, params.n) {
        Route::Zero => Ok(zero_algorithm(&params.sp)),
        Route::FullRead => {
            let (n1, n2) = info.shape();
            let mut out = Matrix::zeros(n1, n2);
            for i in 0..n1 {
                for j in 0..n2 {
                    out.set(i, j, info.query(i, j)?);
                }
            }
            Ok(out)
        }
        Route::TopRows => top_rows(info, params, stream),
        Route::Iterated => iterated(info, params, stream),
    }
}

/// Largest `m <= max_m`, then largest `n`, such that [`dispatch`] spends at
/// most `total` queries. `None` when not even one repetition fits, in which
/// case the zero algorithm is the only admissible choice.
pub fn plan_within_budget(sp: SpacePair, total: u64, max_m: usize) -> Option<ApproxParams> {
    let factor = match route(&sp, 1) {
        Route::Zero => return None,
        Route::Iterated => 2,
        _ => 1,
    };
    let (n1, n2) = (sp.n1 as u64, sp.n2 as u64);
    // n = 1 costs m*N1 + N2 per pass.
    let per_pass = total / factor;
    if per_pass < n1 + n2 {
        return None;
    }
    let m = (((per_pass - n2) / n1) as usize).min(max_m);
    let fits = |n: usize| cardinality_count(&ApproxParams { sp, n, m }, factor == 2).exact <= total;
    // Exact cost is nondecreasing in n.
    let (mut lo, mut hi) = (1usize, sp.grid_size() - 1);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Some(ApproxParams { sp, n: lo, m })
}

/// `N1^{1/p-1/q} (ceil(n/N1)^{1/u-1/v} + ceil(n/N2)^{1/q-1/p})`, the error
/// rate of the row-selection algorithms at parameter `n` (constant omitted).
pub fn rate_bound(sp: &SpacePair, n: usize) -> f64 {
    let (rp, rq, ru, rv) = (sp.p.reciprocal(), sp.q.reciprocal(), sp.u.reciprocal(), sp.v.reciprocal());
    let k1 = n.div_ceil(sp.n1) as f64;
    let k2 = n.div_ceil(sp.n2) as f64;
    (sp.n1 as f64).powf(rp - rq) * (k1.powf(ru - rv) + k2.powf(rq - rp))
}

/// The same rate expressed in the total number of queries `total`, with the
/// logarithmic loss: `N1^{1/p-1/q} (ceil(total/(N1 L))^{1/u-1/v} +
/// ceil(total/(N2 L))^{1/q-1/p})`, `L = log2(N1 + N2)`.
pub fn rate_bound_with_log(sp: &SpacePair, total: u64) -> f64 {
    let (rp, rq, ru, rv) = (sp.p.reciprocal(), sp.q.reciprocal(), sp.u.reciprocal(), sp.v.reciprocal());
    let log = ((sp.n1 + sp.n2) as f64).log2();
    let k1 = (total as f64 / (sp.n1 as f64 * log)).ceil().max(1.0);
    let k2 = (total as f64 / (sp.n2 as f64 * log)).ceil().max(1.0);
    (sp.n1 as f64).powf(rp - rq) * (k1.powf(ru - rv) + k2.powf(rq - rp))
}
