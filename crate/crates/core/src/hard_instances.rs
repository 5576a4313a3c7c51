//! Finitely supported input distributions on the unit ball of
//! `L_p^{N1}(L_u^{N2})` that are hard for algorithms with budget `n`, and
//! exact evaluation of the lower-bound quantities attached to them.
//!
//! | family | draw |
//! |--------|------|
//! | 1 | `±psi_ij`, one row `i`, one column block `D_j`, uniformly chosen |
//! | 2 | independent signs on every cell of the first `M` rows |
//! | 3 | family 1 tuned to the largest admissible budget |
//! | 4 | family 2 tuned to the largest admissible budget |
//! | 5 | every row independently `±psi_j` for a uniformly chosen block |
//! | 6 | one uniformly chosen row carrying signs on all blocks |

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::information::RandomStream;
use crate::mixed_norm::{mixed_norm, Exponent, Matrix, SpacePair};

/// Budgets must satisfy `n < N1*N2 / ADMISSIBLE_RATIO`.
pub const ADMISSIBLE_RATIO: usize = 21;

/// Largest number of signs [`rademacher_expect_exact`] enumerates.
pub const MAX_ENUMERATION: usize = 20;

/// `L` consecutive column blocks of size `floor(N2/L)`; trailing columns are unused.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockPartition {
    n2: usize,
    count: usize,
    size: usize,
}

pub fn make_blocks(n2: usize, count: usize) -> Result<BlockPartition> {
    if count == 0 || count > n2 {
        return Err(Error::invalid(format!("need 1 <= L <= N2, got L={count}, N2={n2}")));
    }
    Ok(BlockPartition { n2, count, size: n2 / count })
}

impl BlockPartition {
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn block_len(&self) -> usize {
        self.size
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    /// Zero-based column range of block `j`.
    pub fn block(&self, j: usize) -> Range<usize> {
        assert!(j < self.count);
        j * self.size..(j + 1) * self.size
    }
}

/// Amplitude of a single-row single-block spike with unit norm in
/// `L_p(L_u)`: `N1^{1/p} N2^{1/u} |D|^{-1/u}`.
pub fn spike_amplitude(sp: &SpacePair, block_len: usize) -> f64 {
    let (rp, ru) = (sp.p.reciprocal(), sp.u.reciprocal());
    (sp.n1 as f64).powf(rp) * (sp.n2 as f64).powf(ru) * (block_len as f64).powf(-ru)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    SingleSpike,
    SignedRows,
    SingleSpikeSaturated,
    SignedRowsSaturated,
    RowwiseBlocks,
    HiddenRow,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::SingleSpike,
        Family::SignedRows,
        Family::SingleSpikeSaturated,
        Family::SignedRowsSaturated,
        Family::RowwiseBlocks,
        Family::HiddenRow,
    ];

    /// Families are numbered `1..=6` on the command line.
    pub fn from_id(id: u8) -> Result<Family> {
        Family::ALL
            .get((id as usize).wrapping_sub(1))
            .copied()
            .ok_or_else(|| Error::invalid(format!("measure id must be in 1..=6, got {id}")))
    }

    pub fn id(self) -> u8 {
        Family::ALL.iter().position(|&f| f == self).unwrap() as u8 + 1
    }
}

/// A family together with the space pair and the budget it is tuned against.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HardInstanceSpec {
    pub family: Family,
    pub sp: SpacePair,
    pub n: usize,
}

impl HardInstanceSpec {
    pub fn new(family: Family, sp: SpacePair, n: usize) -> Result<Self> {
        if n == 0 || ADMISSIBLE_RATIO * n >= sp.grid_size() {
            return Err(Error::invalid(format!(
                "budget must satisfy 1 <= n < N1*N2/{ADMISSIBLE_RATIO} (n={n}, N1*N2={})",
                sp.grid_size()
            )));
        }
        Ok(HardInstanceSpec { family, sp, n })
    }

    /// `ceil(N1*N2/21) - 1`, the budget the saturated families are tuned to.
    pub fn saturated_budget(sp: &SpacePair) -> usize {
        sp.grid_size().div_ceil(ADMISSIBLE_RATIO) - 1
    }

    /// Budget the construction is actually built for.
    pub fn effective_budget(&self) -> usize {
        match self.family {
            Family::SingleSpikeSaturated | Family::SignedRowsSaturated => Self::saturated_budget(&self.sp),
            _ => self.n,
        }
    }
}

/// A resolved construction, ready to draw from.
#[derive(Clone, Debug)]
pub struct HardInstance {
    spec: HardInstanceSpec,
    shape: Shape,
}

#[derive(Clone, Debug)]
enum Shape {
    SingleSpike { blocks: BlockPartition, amplitude: f64 },
    SignedRows { rows: usize, amplitude: f64 },
    RowwiseBlocks { blocks: BlockPartition, amplitude: f64 },
    HiddenRow { blocks: BlockPartition, amplitude: f64 },
}

impl HardInstance {
    pub fn new(spec: HardInstanceSpec) -> Result<Self> {
        let HardInstanceSpec { family, sp, .. } = spec;
        let spec = HardInstanceSpec::new(family, sp, spec.n)?;
        let n = spec.effective_budget();
        let (n1, n2) = (sp.n1, sp.n2);
        let (rp, ru) = (sp.p.reciprocal(), sp.u.reciprocal());
        let shape = match family {
            Family::SingleSpike | Family::SingleSpikeSaturated => {
                let blocks = make_blocks(n2, 4 * n / n1 + 1)?;
                Shape::SingleSpike { blocks, amplitude: spike_amplitude(&sp, blocks.block_len()) }
            }
            Family::SignedRows | Family::SignedRowsSaturated => {
                let rows = 4 * n / n2 + 1;
                if rows > n1 {
                    return Err(Error::invalid(format!("M={rows} exceeds N1={n1}")));
                }
                Shape::SignedRows { rows, amplitude: (n1 as f64).powf(rp) * (rows as f64).powf(-rp) }
            }
            Family::RowwiseBlocks | Family::HiddenRow => {
                let count = 4 * (4 * n).div_ceil(n1) + 1;
                let blocks = make_blocks(n2, count).map_err(|_| {
                    Error::invalid(format!(
                        "L={count} exceeds N2={n2}; this family needs n >= N1 (n={n}, N1={n1})"
                    ))
                })?;
                if family == Family::RowwiseBlocks {
                    let amplitude = (n2 as f64).powf(ru) * (blocks.block_len() as f64).powf(-ru);
                    Shape::RowwiseBlocks { blocks, amplitude }
                } else {
                    Shape::HiddenRow { blocks, amplitude: (n1 as f64).powf(rp) }
                }
            }
        };
        Ok(HardInstance { spec, shape })
    }

    pub fn spec(&self) -> &HardInstanceSpec {
        &self.spec
    }

    /// Block partition, for the families built on one.
    pub fn blocks(&self) -> Option<BlockPartition> {
        match &self.shape {
            Shape::SingleSpike { blocks, .. } | Shape::RowwiseBlocks { blocks, .. } | Shape::HiddenRow { blocks, .. } => {
                Some(*blocks)
            }
            Shape::SignedRows { .. } => None,
        }
    }

    /// Absolute value of every nonzero entry of a draw.
    pub fn amplitude(&self) -> f64 {
        match &self.shape {
            Shape::SingleSpike { amplitude, .. }
            | Shape::SignedRows { amplitude, .. }
            | Shape::RowwiseBlocks { amplitude, .. }
            | Shape::HiddenRow { amplitude, .. } => *amplitude,
        }
    }

    /// Number of rows carrying signs in the signed-rows families.
    pub fn signed_rows(&self) -> Option<usize> {
        match &self.shape {
            Shape::SignedRows { rows, .. } => Some(*rows),
            _ => None,
        }
    }

    pub fn draw(&self, stream: &mut RandomStream) -> Matrix {
        let sp = &self.spec.sp;
        let mut f = Matrix::zeros(sp.n1, sp.n2);
        match &self.shape {
            Shape::SingleSpike { blocks, amplitude } => {
                let i = stream.uniform_index(sp.n1);
                let j = stream.uniform_index(blocks.count());
                let value = stream.sign() * amplitude;
                f.row_mut(i)[blocks.block(j)].fill(value);
            }
            Shape::SignedRows { rows, amplitude } => {
                for i in 0..*rows {
                    for x in f.row_mut(i) {
                        *x = stream.sign() * amplitude;
                    }
                }
            }
            Shape::RowwiseBlocks { blocks, amplitude } => {
                for i in 0..sp.n1 {
                    let j = stream.uniform_index(blocks.count());
                    let value = stream.sign() * amplitude;
                    f.row_mut(i)[blocks.block(j)].fill(value);
                }
            }
            Shape::HiddenRow { blocks, amplitude } => {
                let k = stream.uniform_index(sp.n1);
                let row = f.row_mut(k);
                for j in 0..blocks.count() {
                    let value = stream.sign() * amplitude;
                    row[blocks.block(j)].fill(value);
                }
            }
        }
        f
    }

    /// The disjointly supported atoms the draw is built from, for the
    /// single-spike and signed-rows families.
    pub fn atoms(&self) -> Option<Vec<Matrix>> {
        let sp = &self.spec.sp;
        match &self.shape {
            Shape::SingleSpike { blocks, amplitude } => Some(
                (0..sp.n1)
                    .flat_map(|i| (0..blocks.count()).map(move |j| (i, j)))
                    .map(|(i, j)| {
                        let mut f = Matrix::zeros(sp.n1, sp.n2);
                        f.row_mut(i)[blocks.block(j)].fill(*amplitude);
                        f
                    })
                    .collect(),
            ),
            Shape::SignedRows { rows, amplitude } => Some(
                (0..*rows)
                    .flat_map(|i| (0..sp.n2).map(move |j| (i, j)))
                    .map(|(i, j)| {
                        let mut f = Matrix::zeros(sp.n1, sp.n2);
                        f.set(i, j, *amplitude);
                        f
                    })
                    .collect(),
            ),
            _ => None,
        }
    }

    /// Number of atoms, without materializing them.
    pub fn atom_count(&self) -> Option<usize> {
        match &self.shape {
            Shape::SingleSpike { blocks, .. } => Some(self.spec.sp.n1 * blocks.count()),
            Shape::SignedRows { rows, .. } => Some(rows * self.spec.sp.n2),
            _ => None,
        }
    }
}

/// One draw from the family described by `spec`.
pub fn sample_hard(spec: &HardInstanceSpec, stream: &mut RandomStream) -> Result<Matrix> {
    Ok(HardInstance::new(*spec)?.draw(stream))
}

/// Exact `E || sum_{i in subset} eps_i f_i ||_{L_q(L_v)}` over all sign patterns.
pub fn rademacher_expect_exact(vectors: &[Matrix], subset: &[usize], q: Exponent, v: Exponent) -> Result<f64> {
    if subset.len() > MAX_ENUMERATION {
        return Err(Error::EnumerationTooLarge { size: subset.len(), limit: MAX_ENUMERATION });
    }
    let Some((&first, rest)) = subset.split_first() else {
        return Ok(0.0);
    };
    validated(vectors, subset)?;
    // Patterns s and -s have the same norm: fix the first sign to +1.
    let patterns = 1usize << rest.len();
    let mut total = 0.0;
    for bits in 0..patterns {
        let mut sum = vectors[first].clone();
        for (b, &idx) in rest.iter().enumerate() {
            let sign = if bits >> b & 1 == 1 { -1.0 } else { 1.0 };
            sum = sum.add(&vectors[idx].scaled(sign));
        }
        total += mixed_norm(&sum, q, v);
    }
    Ok(total / patterns as f64)
}

/// Monte Carlo estimate of the same expectation: `(mean, standard error)`.
pub fn rademacher_expect_mc(
    vectors: &[Matrix],
    subset: &[usize],
    q: Exponent,
    v: Exponent,
    samples: usize,
    stream: &mut RandomStream,
) -> Result<(f64, f64)> {
    if subset.is_empty() {
        return Ok((0.0, 0.0));
    }
    validated(vectors, subset)?;
    if samples < 2 {
        return Err(Error::invalid("Monte Carlo needs at least two samples"));
    }
    // Welford updates: stable mean and variance.
    let (mut mean, mut m2) = (0.0, 0.0);
    for k in 1..=samples {
        let mut acc = vectors[subset[0]].scaled(stream.sign());
        for &idx in &subset[1..] {
            acc = acc.add(&vectors[idx].scaled(stream.sign()));
        }
        let x = mixed_norm(&acc, q, v);
        let delta = x - mean;
        mean += delta / k as f64;
        m2 += delta * (x - mean);
    }
    let n = samples as f64;
    let var = m2 / (n - 1.0);
    Ok((mean, (var / n).sqrt()))
}

fn validated<'a>(vectors: &'a [Matrix], subset: &[usize]) -> Result<Vec<&'a Matrix>> {
    let shape = vectors
        .first()
        .map(|f| (f.n1(), f.n2()))
        .ok_or_else(|| Error::invalid("no vectors given"))?;
    subset
        .iter()
        .map(|&i| {
            let f = vectors
                .get(i)
                .ok_or_else(|| Error::invalid(format!("subset index {i} out of range")))?;
            if (f.n1(), f.n2()) != shape {
                return Err(Error::invalid("vectors have different shapes"));
            }
            Ok(f)
        })
        .collect()
}

/// Outcome of [`lower_bound_value`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum LowerBound {
    /// Half the smallest atom norm (uniform distribution over `±f_i`).
    SmallestAtom { atoms: usize, value: f64 },
    /// Half the smallest Rademacher average over subsets of `atoms - 2n` atoms.
    Rademacher { atoms: usize, subset_size: usize, value: f64 },
    /// The construction has `atoms <= 4n`.
    Inapplicable { atoms: usize },
}

impl LowerBound {
    pub fn value(&self) -> Option<f64> {
        match self {
            LowerBound::SmallestAtom { value, .. } | LowerBound::Rademacher { value, .. } => Some(*value),
            LowerBound::Inapplicable { .. } => None,
        }
    }
}

/// Average-case lower bound for the single-spike and signed-rows families at
/// the family's effective budget.
///
/// For signed rows the Rademacher average of a subset depends only on how
/// many of its atoms fall in each row, so the minimum is taken over row
/// profiles of the smallest admissible subset size.
pub fn lower_bound_value(spec: &HardInstanceSpec) -> Result<LowerBound> {
    lower_bound_at(spec, spec.effective_budget())
}

/// As [`lower_bound_value`], for an explicit algorithm budget `n`.
pub fn lower_bound_at(spec: &HardInstanceSpec, n: usize) -> Result<LowerBound> {
    let inst = HardInstance::new(*spec)?;
    let atoms = inst
        .atom_count()
        .ok_or_else(|| Error::invalid("lower-bound values are available for families 1 to 4 only"))?;
    if 4 * n >= atoms {
        return Ok(LowerBound::Inapplicable { atoms });
    }
    let sp = &spec.sp;
    match spec.family {
        Family::SingleSpike | Family::SingleSpikeSaturated => {
            // All spikes share one norm; evaluate the first one.
            let blocks = inst.blocks().expect("spike family has blocks");
            let mut psi = Matrix::zeros(sp.n1, sp.n2);
            psi.row_mut(0)[blocks.block(0)].fill(inst.amplitude());
            Ok(LowerBound::SmallestAtom { atoms, value: 0.5 * mixed_norm(&psi, sp.q, sp.v) })
        }
        _ => {
            let rows = inst.signed_rows().expect("signed-rows family");
            let size = atoms - 2 * n;
            if size > MAX_ENUMERATION {
                return Err(Error::EnumerationTooLarge { size, limit: MAX_ENUMERATION });
            }
            let vectors = inst.atoms().expect("signed-rows family has atoms");
            let mut best = f64::INFINITY;
            for profile in row_profiles(size, rows, sp.n2) {
                let subset: Vec<usize> = profile
                    .iter()
                    .enumerate()
                    .flat_map(|(i, &c)| (0..c).map(move |j| i * sp.n2 + j))
                    .collect();
                best = best.min(rademacher_expect_exact(&vectors, &subset, sp.q, sp.v)?);
            }
            Ok(LowerBound::Rademacher { atoms, subset_size: size, value: 0.5 * best })
        }
    }
}

/// Non-increasing sequences of at most `rows` positive parts, each at most
/// `cap`, summing to `total`.
pub(crate) fn row_profiles(total: usize, rows: usize, cap: usize) -> Vec<Vec<usize>> {
    fn go(remaining: usize, rows_left: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        if rows_left == 0 {
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            prefix.push(part);
            go(remaining - part, rows_left - 1, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(total, rows, cap, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::information::substream;

    fn e(x: f64) -> Exponent {
        Exponent::new(x).unwrap()
    }

    fn sp(n1: usize, n2: usize, p: Exponent, u: Exponent, q: Exponent, v: Exponent) -> SpacePair {
        SpacePair::new(n1, n2, p, u, q, v).unwrap()
    }

    #[test]
    fn block_examples() {
        let b = make_blocks(10, 3).unwrap();
        assert_eq!((b.block(0), b.block(1), b.block(2)), (0..3, 3..6, 6..9));
        assert!(10.0 / 6.0 < b.block_len() as f64 && b.block_len() as f64 <= 10.0 / 3.0);
        let b = make_blocks(4, 4).unwrap();
        assert!((0..4).all(|j| b.block(j).len() == 1));
        assert!(make_blocks(4, 5).is_err());
        assert!(make_blocks(4, 0).is_err());
    }

    #[test]
    fn block_sandwich_holds() {
        for n2 in 1..200usize {
            for l in 1..=n2 {
                let b = make_blocks(n2, l).unwrap();
                let size = b.block_len() as f64;
                assert!(n2 as f64 / (2.0 * l as f64) < size && size <= n2 as f64 / l as f64);
            }
        }
    }

    #[test]
    fn spike_amplitude_examples() {
        let s = sp(4, 10, Exponent::ONE, Exponent::INFINITY, Exponent::INFINITY, Exponent::ONE);
        assert_eq!(spike_amplitude(&s, 3), 4.0);
        let s = sp(4, 10, Exponent::ONE, Exponent::TWO, Exponent::INFINITY, Exponent::ONE);
        let expected = 4.0 * 10f64.sqrt() / 3f64.sqrt();
        assert!((spike_amplitude(&s, 3) - expected).abs() < 1e-12);
        assert!((spike_amplitude(&s, 3) - 7.30297).abs() < 1e-5);
    }

    #[test]
    fn rejects_budget_beyond_admissible_range() {
        let s = sp(4, 10, Exponent::ONE, Exponent::TWO, Exponent::TWO, Exponent::ONE);
        assert!(HardInstanceSpec::new(Family::SingleSpike, s, 1).is_ok());
        assert!(HardInstanceSpec::new(Family::SingleSpike, s, 2).is_err());
        assert!(HardInstanceSpec::new(Family::SingleSpike, s, 0).is_err());
    }

    #[test]
    fn derived_parameters() {
        let s = sp(16, 64, Exponent::ONE, Exponent::TWO, Exponent::TWO, Exponent::ONE);
        let blocks = |f, n| HardInstance::new(HardInstanceSpec::new(f, s, n).unwrap()).unwrap().blocks();
        assert_eq!(blocks(Family::SingleSpike, 20).unwrap().count(), 4 * 20 / 16 + 1);
        assert_eq!(blocks(Family::HiddenRow, 20).unwrap().count(), 4 * 5 + 1);
        let rows = HardInstance::new(HardInstanceSpec::new(Family::SignedRows, s, 20).unwrap()).unwrap();
        assert_eq!(rows.signed_rows(), Some(4 * 20 / 64 + 1));
        let sat = HardInstanceSpec::new(Family::SignedRowsSaturated, s, 3).unwrap();
        assert_eq!(sat.effective_budget(), (16 * 64usize).div_ceil(21) - 1);
        assert!(21 * sat.effective_budget() < 16 * 64);
    }

    #[test]
    fn hidden_row_has_unit_norm_at_p1_uinf() {
        let s = sp(20, 40, Exponent::ONE, Exponent::INFINITY, Exponent::INFINITY, Exponent::ONE);
        let inst = HardInstance::new(HardInstanceSpec::new(Family::HiddenRow, s, 25).unwrap()).unwrap();
        for t in 0..200 {
            let f = inst.draw(&mut substream(1, "mu6", t));
            assert!((mixed_norm(&f, s.p, s.u) - 1.0).abs() < 1e-12);
            assert_eq!((0..20).filter(|&i| !f.is_zero_row(i)).count(), 1);
        }
    }

    #[test]
    fn spike_atoms_are_disjoint() {
        let s = sp(3, 12, Exponent::ONE, Exponent::TWO, Exponent::TWO, Exponent::ONE);
        let inst = HardInstance::new(HardInstanceSpec::new(Family::SingleSpike, s, 1).unwrap()).unwrap();
        let atoms = inst.atoms().unwrap();
        assert_eq!(atoms.len(), inst.atom_count().unwrap());
        let mut seen = [false; 36];
        for a in &atoms {
            for (c, &x) in a.entries().iter().enumerate() {
                if x != 0.0 {
                    assert!(!seen[c], "cell {c} shared");
                    seen[c] = true;
                }
            }
        }
    }

    #[test]
    fn rademacher_examples() {
        let mut a = Matrix::zeros(2, 2);
        a.set(0, 0, 1.0);
        let mut b = Matrix::zeros(2, 2);
        b.set(1, 1, 1.0);
        let vs = vec![a.clone(), b];
        assert_eq!(rademacher_expect_exact(&vs, &[0, 1], Exponent::ONE, Exponent::ONE).unwrap(), 0.5);
        let q = e(3.0);
        let v = Exponent::TWO;
        assert_eq!(rademacher_expect_exact(&vs, &[0], q, v).unwrap(), mixed_norm(&a, q, v));
        assert_eq!(rademacher_expect_exact(&vs, &[], q, v).unwrap(), 0.0);
        let many: Vec<Matrix> = (0..21).map(|_| a.clone()).collect();
        let idx: Vec<usize> = (0..21).collect();
        assert!(matches!(
            rademacher_expect_exact(&many, &idx, q, v),
            Err(Error::EnumerationTooLarge { size: 21, .. })
        ));
    }

    #[test]
    fn rademacher_matches_brute_force_sign_sum() {
        // Independent check without the sign-symmetry shortcut.
        let mut s = substream(2, "vecs", 0);
        let vs: Vec<Matrix> = (0..4)
            .map(|_| Matrix::from_vec(2, 3, (0..6).map(|_| s.uniform() - 0.5).collect()).unwrap())
            .collect();
        let (q, v) = (e(1.5), e(4.0));
        let subset = [0, 2, 3];
        let mut brute = 0.0;
        for bits in 0..8u32 {
            let mut acc = Matrix::zeros(2, 3);
            for (b, &i) in subset.iter().enumerate() {
                let sign = if bits >> b & 1 == 1 { -1.0 } else { 1.0 };
                acc = acc.add(&vs[i].scaled(sign));
            }
            brute += mixed_norm(&acc, q, v);
        }
        brute /= 8.0;
        let exact = rademacher_expect_exact(&vs, &subset, q, v).unwrap();
        assert!((exact - brute).abs() < 1e-12);
    }

    #[test]
    fn row_profiles_enumerate_partitions() {
        assert_eq!(row_profiles(6, 2, 4), vec![vec![4, 2], vec![3, 3]]);
        assert_eq!(row_profiles(3, 3, 3).len(), 3);
        assert!(row_profiles(9, 2, 4).is_empty());
    }

    #[test]
    fn spike_lower_bound_closed_form() {
        let s = sp(6, 40, Exponent::ONE, Exponent::TWO, Exponent::INFINITY, Exponent::ONE);
        let spec = HardInstanceSpec::new(Family::SingleSpike, s, 5).unwrap();
        let inst = HardInstance::new(spec).unwrap();
        let d = inst.blocks().unwrap().block_len() as f64;
        let expected = 0.5 * 6f64.powf(1.0) * 40f64.powf(0.5 - 1.0) * d.powf(1.0 - 0.5);
        match lower_bound_value(&spec).unwrap() {
            LowerBound::SmallestAtom { value, .. } => assert!((value - expected).abs() <= 1e-12 * expected),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn lower_bound_inapplicable_when_few_atoms() {
        let s = sp(6, 4, Exponent::ONE, Exponent::TWO, Exponent::TWO, Exponent::ONE);
        let spec = HardInstanceSpec::new(Family::SignedRows, s, 1).unwrap();
        // M = 2 rows of 4 atoms; at budget 2 we have 8 <= 4*2.
        assert_eq!(lower_bound_at(&spec, 2).unwrap(), LowerBound::Inapplicable { atoms: 8 });
        assert!(lower_bound_at(&spec, 1).unwrap().value().is_some());
    }

    #[test]
    fn lower_bound_refuses_families_without_atoms() {
        let s = sp(8, 64, Exponent::ONE, Exponent::TWO, Exponent::TWO, Exponent::ONE);
        let spec = HardInstanceSpec::new(Family::HiddenRow, s, 10).unwrap();
        assert!(lower_bound_value(&spec).is_err());
    }

    #[test]
    fn family_ids_round_trip() {
        for f in Family::ALL {
            assert_eq!(Family::from_id(f.id()).unwrap(), f);
        }
        assert!(Family::from_id(0).is_err());
        assert!(Family::from_id(7).is_err());
    }
}
