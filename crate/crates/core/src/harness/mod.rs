//! Monte Carlo error studies, log-log rate fits, the adaptivity-gap
//! experiment and report output.
//!
//! Trial `t` of every cell draws its input from `substream(seed, "trial", t)`
//! (child `"instance"`) and drives the algorithm from child `"algorithm"`, so
//! all algorithms in one experiment see the same inputs and results do not
//! depend on scheduling.

mod report;
pub mod selftest;

pub use report::{emit_report, parse_csv, render, Format, GapPoint, RateFit, Record, Report, CSV_HEADER};

use std::fmt;
use std::str::FromStr;

use log::info;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithms::{
    self, baseline, cardinality_count, default_repetitions, dispatch_queries, plan_within_budget, rate_bound,
    ApproxParams,
};
use crate::error::{Error, Result};
use crate::hard_instances::{Family, HardInstance, HardInstanceSpec};
use crate::information::{substream, InfoOracle, RandomStream};
use crate::mixed_norm::{embedding_norm, inner_norm, mixed_norm, Exponent, Matrix, SpacePair};

/// Note attached to every report that compares against non-adaptive methods.
pub const COMPETITOR_NOTE: &str = "non-adaptive errors are those of the concrete methods fixed_rows, random_cells \
     and zero; the non-adaptive minimal error itself is not computable";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgorithmKind {
    Dispatch,
    A2,
    A3,
    Zero,
    FixedRows,
    RandomCells,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 6] = [
        AlgorithmKind::Dispatch,
        AlgorithmKind::A2,
        AlgorithmKind::A3,
        AlgorithmKind::Zero,
        AlgorithmKind::FixedRows,
        AlgorithmKind::RandomCells,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmKind::Dispatch => "dispatch",
            AlgorithmKind::A2 => "a2",
            AlgorithmKind::A3 => "a3",
            AlgorithmKind::Zero => "zero",
            AlgorithmKind::FixedRows => "fixed_rows",
            AlgorithmKind::RandomCells => "random_cells",
        }
    }

    /// Uses median repetitions.
    pub fn is_row_selection(self) -> bool {
        matches!(self, AlgorithmKind::Dispatch | AlgorithmKind::A2 | AlgorithmKind::A3)
    }

    /// Exact number of queries one run spends.
    pub fn queries(self, params: &ApproxParams) -> u64 {
        let (n1, n2, n) = (params.sp.n1, params.sp.n2, params.n);
        match self {
            AlgorithmKind::Dispatch => dispatch_queries(params),
            AlgorithmKind::A2 => cardinality_count(params, false).exact,
            AlgorithmKind::A3 => cardinality_count(params, true).exact,
            AlgorithmKind::Zero => 0,
            AlgorithmKind::FixedRows => baseline::fixed_rows_queries(n1, n2, n),
            AlgorithmKind::RandomCells => baseline::random_cells_queries(n1, n2, n),
        }
    }

    pub fn run(self, oracle: &mut InfoOracle<'_>, params: &ApproxParams, stream: &mut RandomStream) -> Result<Matrix> {
        match self {
            AlgorithmKind::Dispatch => algorithms::dispatch(oracle, params, stream),
            AlgorithmKind::A2 => algorithms::top_rows(oracle, params, stream),
            AlgorithmKind::A3 => algorithms::iterated(oracle, params, stream),
            AlgorithmKind::Zero => Ok(algorithms::zero_algorithm(&params.sp)),
            AlgorithmKind::FixedRows => algorithms::fixed_rows(oracle, params.n),
            AlgorithmKind::RandomCells => algorithms::random_cells(oracle, params.n, stream),
        }
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AlgorithmKind::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown algorithm '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub sp: SpacePair,
    pub budgets: Vec<usize>,
    pub m_override: Option<usize>,
    pub measure: Family,
    pub algorithm: AlgorithmKind,
    pub trials: usize,
    /// Error moment, `1 <= w < inf`.
    pub w: f64,
    pub seed: u64,
    /// Run trials on the rayon pool; output is identical either way.
    pub parallel: bool,
}

impl ExperimentConfig {
    pub fn new(sp: SpacePair, budgets: Vec<usize>, measure: Family, algorithm: AlgorithmKind) -> Self {
        ExperimentConfig {
            sp,
            budgets,
            m_override: None,
            measure,
            algorithm,
            trials: 100,
            w: 1.0,
            seed: 0,
            parallel: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        if self.budgets.is_empty() || self.budgets[0] == 0 {
            return Err(Error::invalid("budgets must be a non-empty list of positive integers"));
        }
        if self.budgets.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(format!("budgets must be strictly increasing: {:?}", self.budgets)));
        }
        if !(self.w >= 1.0 && self.w.is_finite()) {
            return Err(Error::invalid(format!("moment w must satisfy 1 <= w < inf, got {}", self.w)));
        }
        if self.m_override == Some(0) {
            return Err(Error::invalid("m must be at least 1"));
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.m_override.unwrap_or_else(|| default_repetitions(self.sp.n1, self.sp.n2))
    }

    /// Experiment label used in records.
    pub fn label(&self) -> String {
        format!("{}_mu{}", self.algorithm, self.measure.id())
    }
}

/// The input distribution used at algorithm budget `n`. Hard distributions
/// only exist for `n < N1*N2/21`; larger budgets reuse the one tuned to the
/// largest admissible budget.
pub fn instance_for(family: Family, sp: SpacePair, n: usize) -> Result<HardInstance> {
    let cap = HardInstanceSpec::saturated_budget(&sp);
    if cap == 0 {
        return Err(Error::invalid(format!(
            "N1*N2 = {} is too small for any hard distribution",
            sp.grid_size()
        )));
    }
    HardInstance::new(HardInstanceSpec::new(family, sp, n.min(cap))?)
}

/// Streams of trial `t`: `(instance, algorithm)`.
pub fn trial_streams(seed: u64, t: usize) -> (RandomStream, RandomStream) {
    let trial = substream(seed, "trial", t as u64);
    (trial.child("instance"), trial.child("algorithm"))
}

/// Mean, standard error of the mean and `w`-th moment root.
pub fn summarize(errors: &[f64], w: f64) -> (f64, f64, f64) {
    let k = errors.len() as f64;
    let mean = errors.iter().sum::<f64>() / k;
    let se = if errors.len() > 1 {
        let var = errors.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (k - 1.0);
        (var / k).sqrt()
    } else {
        0.0
    };
    let moment = if w == 1.0 {
        mean
    } else {
        (errors.iter().map(|e| e.powf(w)).sum::<f64>() / k).powf(1.0 / w)
    };
    (mean, se, moment)
}

/// Inputs of one cell: an explicit input set or a distribution to draw from.
pub enum Inputs<'a> {
    Draw(&'a HardInstance),
    Fixed(&'a Matrix),
}

/// Per-trial errors `||f - A(f)||_{L_q(L_v)}` and the common query count.
pub fn trial_errors(
    kind: AlgorithmKind,
    params: &ApproxParams,
    inputs: &Inputs<'_>,
    trials: usize,
    seed: u64,
    parallel: bool,
) -> Result<(Vec<f64>, u64)> {
    let expected = kind.queries(params);
    let one = |t: usize| -> Result<f64> {
        let (mut inst_stream, mut alg_stream) = trial_streams(seed, t);
        let drawn;
        let f = match inputs {
            Inputs::Draw(inst) => {
                drawn = inst.draw(&mut inst_stream);
                &drawn
            }
            Inputs::Fixed(f) => *f,
        };
        let mut oracle = InfoOracle::with_budget(f, expected);
        let out = kind.run(&mut oracle, params, &mut alg_stream)?;
        if oracle.count() != expected {
            return Err(Error::Invariant(format!(
                "{kind} spent {} queries at n={} in trial {t}, expected {expected}",
                oracle.count(),
                params.n
            )));
        }
        Ok(mixed_norm(&f.sub(&out), params.sp.q, params.sp.v))
    };
    let errors = if parallel {
        (0..trials).into_par_iter().map(one).collect::<Result<Vec<_>>>()?
    } else {
        (0..trials).map(one).collect::<Result<Vec<_>>>()?
    };
    Ok((errors, expected))
}

/// Rate expression for adaptive algorithms in the sampling regime, otherwise
/// the trivial bound `||J||`.
pub fn bound_for(kind: AlgorithmKind, sp: &SpacePair, n: usize) -> f64 {
    if kind.is_row_selection() && sp.is_adaptive_regime() && n < sp.grid_size() {
        rate_bound(sp, n)
    } else {
        embedding_norm(sp)
    }
}

#[allow(clippy::too_many_arguments)]
fn cell(
    experiment: &str,
    kind: AlgorithmKind,
    params: &ApproxParams,
    nominal_n: usize,
    inputs: &Inputs<'_>,
    trials: usize,
    w: f64,
    seed: u64,
    parallel: bool,
) -> Result<Record> {
    let (errors, query_count) = trial_errors(kind, params, inputs, trials, seed, parallel)?;
    let (mean_error, std_error, w_moment_error) = summarize(&errors, w);
    let sp = &params.sp;
    Ok(Record {
        experiment: experiment.to_owned(),
        n: nominal_n,
        n1: sp.n1,
        n2: sp.n2,
        p: sp.p,
        q: sp.q,
        u: sp.u,
        v: sp.v,
        m: kind.is_row_selection().then_some(params.m),
        trials,
        mean_error,
        std_error,
        w_moment_error,
        query_count,
        bound_value: bound_for(kind, sp, params.n),
        seed,
    })
}

/// One record per budget for the configured algorithm and distribution.
pub fn mc_error(config: &ExperimentConfig) -> Result<Report> {
    config.validate()?;
    let label = config.label();
    let mut report = Report::default();
    for &n in &config.budgets {
        let inst = instance_for(config.measure, config.sp, n)?;
        let params = ApproxParams::new(config.sp, n, config.m())?;
        let record = cell(
            &label,
            config.algorithm,
            &params,
            n,
            &Inputs::Draw(&inst),
            config.trials,
            config.w,
            config.seed,
            config.parallel,
        )?;
        info!("{label} n={n}: mean error {:.6e}", record.mean_error);
        report.records.push(record);
    }
    report.sort();
    report.check_finite()?;
    Ok(report)
}

/// Same statistics on a fixed input instead of a distribution.
pub fn mc_error_on(config: &ExperimentConfig, f: &Matrix) -> Result<Report> {
    config.validate()?;
    if (f.n1(), f.n2()) != (config.sp.n1, config.sp.n2) {
        return Err(Error::invalid("input shape does not match N1 x N2"));
    }
    let label = format!("{}_input", config.algorithm);
    let mut report = Report::default();
    for &n in &config.budgets {
        let params = ApproxParams::new(config.sp, n, config.m())?;
        report.records.push(cell(
            &label,
            config.algorithm,
            &params,
            n,
            &Inputs::Fixed(f),
            config.trials,
            config.w,
            config.seed,
            config.parallel,
        )?);
    }
    report.sort();
    Ok(report)
}

/// OLS of `log2 error` on `log2 n`.
pub fn fit_rate(points: &[(f64, f64)]) -> Result<RateFit> {
    if points.len() < 3 {
        return Err(Error::invalid(format!("rate fit needs at least 3 points, got {}", points.len())));
    }
    if let Some(&(n, e)) = points.iter().find(|&&(n, e)| !(n > 0.0 && e > 0.0 && n.is_finite() && e.is_finite())) {
        return Err(Error::invalid(format!("rate fit needs positive finite points, got ({n}, {e})")));
    }
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.log2()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.log2()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("rate fit needs at least two distinct budgets"));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let r2 = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(RateFit { slope, intercept, r2, points: points.len(), excluded_zero: 0 })
}

/// Fit over the report's records, skipping exact-zero errors.
pub fn fit_records(records: &[Record]) -> Result<RateFit> {
    let points: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.mean_error > 0.0)
        .map(|r| (r.n as f64, r.mean_error))
        .collect();
    let excluded = records.len() - points.len();
    if excluded > 0 {
        info!("rate fit: excluded {excluded} cell(s) with zero error");
    }
    let mut fit = fit_rate(&points)?;
    fit.excluded_zero = excluded;
    Ok(fit)
}

/// [`mc_error`] followed by a rate fit when at least three cells have nonzero error.
pub fn run_rates(config: &ExperimentConfig) -> Result<Report> {
    let mut report = mc_error(config)?;
    match fit_records(&report.records) {
        Ok(fit) => report.fit = Some(fit),
        Err(e) => report.notes.push(format!("no rate fit: {e}")),
    }
    Ok(report)
}

/// `floor(sqrt(21 n)) + 1`.
pub fn gap_dimension(n: usize) -> usize {
    let target = 21 * n;
    let mut r = (target as f64).sqrt() as usize;
    while r * r > target {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= target {
        r += 1;
    }
    r + 1
}

/// Space pair of the gap experiment: `p = 1, u = inf, q = inf, v = 1`, square grid.
pub fn gap_space(n: usize) -> Result<SpacePair> {
    let dim = gap_dimension(n);
    SpacePair::new(dim, dim, Exponent::ONE, Exponent::INFINITY, Exponent::INFINITY, Exponent::ONE)
}

/// Settings of the gap experiment besides the budget.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapSettings {
    pub trials: usize,
    pub seed: u64,
    pub m_override: Option<usize>,
    pub parallel: bool,
}

impl GapSettings {
    pub fn new(trials: usize, seed: u64) -> Self {
        GapSettings { trials, seed, m_override: None, parallel: true }
    }
}

/// Adaptive dispatch against fixed rows, random cells and the zero algorithm,
/// all with budget `n` on the hidden-row distribution.
///
/// `gap_dispatch` runs with `n` as its algorithm parameter, which spends more
/// than `n` queries; `gap_dispatch_matched` is planned to spend at most `n`.
pub fn run_gap_experiment(n: usize, settings: GapSettings) -> Result<Report> {
    let GapSettings { trials, seed, m_override, parallel } = settings;
    if n < 64 {
        return Err(Error::invalid(format!("gap experiment needs n >= 64, got {n}")));
    }
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    let sp = gap_space(n)?;
    let inst = HardInstance::new(HardInstanceSpec::new(Family::HiddenRow, sp, n)?)?;
    let inputs = Inputs::Draw(&inst);
    let m = m_override.unwrap_or_else(|| default_repetitions(sp.n1, sp.n2));
    let params = ApproxParams::new(sp, n, m)?;

    let mut report = Report::default();
    let run = |label: &str, kind: AlgorithmKind, params: &ApproxParams| {
        cell(label, kind, params, n, &inputs, trials, 1.0, seed, parallel)
    };
    let adaptive = run("gap_dispatch", AlgorithmKind::Dispatch, &params)?;
    let matched = match plan_within_budget(sp, n as u64, m) {
        Some(plan) => run("gap_dispatch_matched", AlgorithmKind::Dispatch, &plan)?,
        None => Record { experiment: "gap_dispatch_matched".into(), ..run("gap_zero", AlgorithmKind::Zero, &params)? },
    };
    let competitors = [
        run("gap_fixed_rows", AlgorithmKind::FixedRows, &params)?,
        run("gap_random_cells", AlgorithmKind::RandomCells, &params)?,
        run("gap_zero", AlgorithmKind::Zero, &params)?,
    ];
    let best = competitors
        .iter()
        .min_by(|a, b| a.mean_error.total_cmp(&b.mean_error))
        .expect("three competitors");

    let (ratio, ratio_std_error) = ratio_with_error(best, &adaptive);
    let (matched_ratio, _) = ratio_with_error(best, &matched);
    let nf = n as f64;
    report.gap.push(GapPoint {
        n,
        adaptive_error: adaptive.mean_error,
        adaptive_std_error: adaptive.std_error,
        best_nonadaptive: best.experiment.trim_start_matches("gap_").to_owned(),
        nonadaptive_error: best.mean_error,
        nonadaptive_std_error: best.std_error,
        ratio,
        ratio_std_error,
        threshold: nf.sqrt() / (8.0 * nf.log2()),
        matched_ratio,
    });
    info!("gap n={n}: ratio {ratio:.3e} (best non-adaptive: {})", best.experiment);
    report.records.push(adaptive);
    report.records.push(matched);
    report.records.extend(competitors);
    report.notes.push(COMPETITOR_NOTE.to_owned());
    report.sort();
    report.check_finite()?;
    Ok(report)
}

/// `a / (b + eps)` with a first-order standard error.
fn ratio_with_error(num: &Record, den: &Record) -> (f64, f64) {
    let d = den.mean_error + f64::EPSILON;
    let r = num.mean_error / d;
    let se = ((num.std_error / d).powi(2) + (r * den.std_error / d).powi(2)).sqrt();
    (r, se)
}

/// Gap experiment over several budgets, merged into one report.
pub fn run_gap_series(budgets: &[usize], settings: GapSettings) -> Result<Report> {
    if budgets.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("budgets must be strictly increasing"));
    }
    let mut report = Report::default();
    for &n in budgets {
        report.merge(run_gap_experiment(n, settings)?);
    }
    Ok(report)
}

/// Settings of the norm-estimation study.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimateStudy {
    pub row: Vec<f64>,
    pub u: Exponent,
    pub v: Exponent,
    pub samples: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub parallel: bool,
}

impl EstimateStudy {
    /// A row of length `n2` whose first half is one and second half zero.
    pub fn half_ones(n2: usize, u: Exponent, v: Exponent, samples: Vec<usize>, trials: usize, seed: u64) -> Self {
        let row = (0..n2).map(|j| if j < n2.div_ceil(2) { 1.0 } else { 0.0 }).collect();
        EstimateStudy { row, u, v, samples, trials, seed, parallel: true }
    }
}

/// Errors `|estimate - ||row||_{L_v}|` of the single-row estimator for each
/// sample size `k`, with a rate fit. `bound_value` is
/// `k^{max(1/u-1/v, -1/2)} ||row||_{L_u}`.
pub fn run_estimate_study(study: &EstimateStudy) -> Result<Report> {
    if study.row.is_empty() || study.trials == 0 || study.samples.is_empty() {
        return Err(Error::invalid("estimate study needs a row, trials and sample sizes"));
    }
    if study.samples.windows(2).any(|w| w[0] >= w[1]) || study.samples[0] == 0 {
        return Err(Error::invalid("sample sizes must be positive and strictly increasing"));
    }
    let n2 = study.row.len();
    let f = Matrix::from_vec(1, n2, study.row.clone())?;
    let truth = inner_norm(&study.row, study.v);
    let source = inner_norm(&study.row, study.u);
    let exponent = (study.u.reciprocal() - study.v.reciprocal()).max(-0.5);
    let mut report = Report::default();
    for &k in &study.samples {
        let one = |t: usize| -> Result<f64> {
            let mut stream = substream(study.seed, "estimate", t as u64).child(&format!("k={k}"));
            let cols: Vec<usize> = (0..k).map(|_| stream.uniform_index(n2)).collect();
            let mut oracle = InfoOracle::with_budget(&f, k as u64);
            let est = algorithms::estimate_norm(&mut oracle, 0, study.v, &cols)?;
            Ok((est - truth).abs())
        };
        let errors = if study.parallel {
            (0..study.trials).into_par_iter().map(one).collect::<Result<Vec<_>>>()?
        } else {
            (0..study.trials).map(one).collect::<Result<Vec<_>>>()?
        };
        let (mean_error, std_error, w_moment_error) = summarize(&errors, 1.0);
        report.records.push(Record {
            experiment: "estimate".into(),
            n: k,
            n1: 1,
            n2,
            p: study.u,
            q: study.v,
            u: study.u,
            v: study.v,
            m: None,
            trials: study.trials,
            mean_error,
            std_error,
            w_moment_error,
            query_count: k as u64,
            bound_value: (k as f64).powf(exponent) * source,
            seed: study.seed,
        });
    }
    match fit_records(&report.records) {
        Ok(fit) => report.fit = Some(fit),
        Err(e) => report.notes.push(format!("no rate fit: {e}")),
    }
    report.sort();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(x: f64) -> Exponent {
        Exponent::new(x).unwrap()
    }

    #[test]
    fn fit_exact_power_law() {
        let pts: Vec<(f64, f64)> = (4..=10).map(|k| (2f64.powi(k), 2f64.powf(-(k as f64) / 2.0))).collect();
        let fit = fit_rate(&pts).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-12);
        assert!((fit.r2 - 1.0).abs() < 1e-12);
        let flat: Vec<(f64, f64)> = (4..=10).map(|k| (2f64.powi(k), 3.0)).collect();
        assert_eq!(fit_rate(&flat).unwrap().slope, 0.0);
    }

    #[test]
    fn fit_rejects_bad_points() {
        assert!(fit_rate(&[(1.0, 1.0), (2.0, 1.0)]).is_err());
        assert!(fit_rate(&[(1.0, 1.0), (2.0, 0.0), (4.0, 1.0)]).is_err());
    }

    #[test]
    fn fit_records_skips_zero_errors() {
        let pts = [(16, 1.0), (32, 0.5), (64, 0.0), (128, 0.125)];
        let records: Vec<Record> = pts
            .iter()
            .map(|&(n, err)| Record {
                experiment: "x".into(),
                n,
                n1: 1,
                n2: 1,
                p: Exponent::ONE,
                q: Exponent::ONE,
                u: Exponent::ONE,
                v: Exponent::ONE,
                m: None,
                trials: 1,
                mean_error: err,
                std_error: 0.0,
                w_moment_error: err,
                query_count: 0,
                bound_value: 1.0,
                seed: 0,
            })
            .collect();
        let fit = fit_records(&records).unwrap();
        assert_eq!((fit.points, fit.excluded_zero), (3, 1));
        assert!((fit.slope + 1.0).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        let sp = SpacePair::new(8, 8, Exponent::ONE, Exponent::TWO, Exponent::TWO, Exponent::ONE).unwrap();
        let mut c = ExperimentConfig::new(sp, vec![1, 2], Family::SingleSpike, AlgorithmKind::A2);
        assert!(c.validate().is_ok());
        c.budgets = vec![2, 2];
        assert!(c.validate().is_err());
        c.budgets = vec![1];
        c.trials = 0;
        assert!(c.validate().is_err());
        c.trials = 1;
        c.w = 0.5;
        assert!(c.validate().is_err());
    }

    #[test]
    fn zero_algorithm_error_is_spike_norm() {
        let sp = SpacePair::new(16, 32, Exponent::ONE, Exponent::TWO, e(3.0), Exponent::ONE).unwrap();
        let mut c = ExperimentConfig::new(sp, vec![5, 10], Family::SingleSpike, AlgorithmKind::Zero);
        c.trials = 50;
        let report = mc_error(&c).unwrap();
        for r in &report.records {
            let inst = instance_for(Family::SingleSpike, sp, r.n).unwrap();
            let f = inst.draw(&mut substream(0, "any", 0));
            let norm = mixed_norm(&f, sp.q, sp.v);
            assert!((r.mean_error - norm).abs() <= 1e-12 * norm);
            assert!(r.std_error <= 1e-12 * norm);
            assert_eq!(r.query_count, 0);
            assert_eq!(r.m, None);
        }
    }

    #[test]
    fn dispatch_outside_regime_matches_zero() {
        let sp = SpacePair::new(8, 16, Exponent::TWO, Exponent::TWO, Exponent::ONE, Exponent::ONE).unwrap();
        let mut a = ExperimentConfig::new(sp, vec![2, 4], Family::SignedRows, AlgorithmKind::Dispatch);
        a.trials = 20;
        let mut z = a.clone();
        z.algorithm = AlgorithmKind::Zero;
        let (ra, rz) = (mc_error(&a).unwrap(), mc_error(&z).unwrap());
        for (x, y) in ra.records.iter().zip(&rz.records) {
            assert_eq!(x.mean_error, y.mean_error);
            assert_eq!(x.query_count, 0);
        }
    }

    #[test]
    fn a2_recovers_constant_row_input() {
        let sp = SpacePair::new(6, 10, Exponent::ONE, Exponent::TWO, Exponent::TWO, Exponent::ONE).unwrap();
        let mut f = Matrix::zeros(6, 10);
        f.row_mut(2).fill(1.5);
        let mut c = ExperimentConfig::new(sp, vec![8, 16, 32], Family::SingleSpike, AlgorithmKind::A2);
        c.trials = 30;
        c.m_override = Some(5);
        for r in &mc_error_on(&c, &f).unwrap().records {
            assert_eq!(r.mean_error, 0.0);
        }
    }

    #[test]
    fn parallel_and_serial_agree() {
        let sp = SpacePair::new(16, 16, Exponent::ONE, Exponent::INFINITY, Exponent::INFINITY, Exponent::ONE).unwrap();
        let mut c = ExperimentConfig::new(sp, vec![4, 8], Family::HiddenRow, AlgorithmKind::RandomCells);
        c.trials = 40;
        let par = mc_error(&c).unwrap();
        c.parallel = false;
        assert_eq!(par, mc_error(&c).unwrap());
    }

    #[test]
    fn saturated_distribution_beyond_admissible_budgets() {
        let sp = SpacePair::new(8, 8, Exponent::ONE, Exponent::TWO, Exponent::TWO, Exponent::ONE).unwrap();
        let inst = instance_for(Family::SingleSpike, sp, 40).unwrap();
        assert_eq!(inst.spec().n, HardInstanceSpec::saturated_budget(&sp));
    }

    #[test]
    fn gap_dimensions() {
        assert_eq!(gap_dimension(1024), 147);
        assert_eq!(gap_dimension(4096), 294);
        assert_eq!(gap_dimension(16384), 587);
        assert!(run_gap_experiment(63, GapSettings::new(2, 0)).is_err());
    }

    #[test]
    fn small_gap_experiment() {
        let report = run_gap_experiment(64, GapSettings::new(30, 5)).unwrap();
        assert_eq!(report.records.len(), 5);
        let g = &report.gap[0];
        assert!(g.ratio > 1.0);
        let zero = report.records.iter().find(|r| r.experiment == "gap_zero").unwrap();
        // Hidden row norm in L_inf(L_1) is N1 times the covered fraction.
        let sp = gap_space(64).unwrap();
        let inst = HardInstance::new(HardInstanceSpec::new(Family::HiddenRow, sp, 64).unwrap()).unwrap();
        let b = inst.blocks().unwrap();
        let expected = sp.n1 as f64 * (b.count() * b.block_len()) as f64 / sp.n2 as f64;
        assert!((zero.mean_error - expected).abs() <= 1e-9 * expected);
        let matched = report.records.iter().find(|r| r.experiment == "gap_dispatch_matched").unwrap();
        assert!(matched.query_count <= 64);
    }

    #[test]
    fn estimate_study_shape() {
        let study = EstimateStudy::half_ones(64, Exponent::INFINITY, Exponent::ONE, vec![4, 16, 64], 200, 1);
        let report = run_estimate_study(&study).unwrap();
        assert_eq!(report.records.len(), 3);
        assert!(report.fit.unwrap().slope < 0.0);
    }
}
