//! Quick invariant suite behind the `selftest` subcommand.

use crate::algorithms::{cardinality_count, iterated, top_rows, ApproxParams};
use crate::hard_instances::{rademacher_expect_exact, rademacher_expect_mc, Family, HardInstance, HardInstanceSpec};
use crate::harness::fit_rate;
use crate::information::{substream, InfoOracle, RandomStream};
use crate::mixed_norm::{embedding_norm, mixed_norm, Exponent, Matrix, SpacePair};

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check { name, passed, detail }
}

fn exponents() -> Vec<Exponent> {
    [1.0, 1.5, 2.0, 3.0, 10.0, f64::INFINITY].map(|x| Exponent::new(x).unwrap()).to_vec()
}

fn random_matrix(stream: &mut RandomStream, n1: usize, n2: usize) -> Matrix {
    Matrix::from_vec(n1, n2, (0..n1 * n2).map(|_| 4.0 * stream.uniform() - 2.0).collect()).unwrap()
}

fn norm_axioms(seed: u64) -> Check {
    let mut worst = 0.0f64;
    let mut s = substream(seed, "selftest/norms", 0);
    for _ in 0..50 {
        let (n1, n2) = (1 + s.uniform_index(6), 1 + s.uniform_index(6));
        let f = random_matrix(&mut s, n1, n2);
        let g = random_matrix(&mut s, n1, n2);
        for &p in &exponents() {
            for &u in &exponents() {
                let (nf, ng) = (mixed_norm(&f, p, u), mixed_norm(&g, p, u));
                let sum = mixed_norm(&f.add(&g), p, u);
                worst = worst.max((sum - nf - ng) / (nf + ng));
                let scaled = mixed_norm(&f.scaled(-2.5), p, u);
                worst = worst.max((scaled - 2.5 * nf).abs() / (2.5 * nf));
            }
        }
    }
    check("norm axioms", worst <= 1e-12, format!("worst relative violation {worst:.2e}"))
}

fn embedding_bound(seed: u64) -> Check {
    let mut worst = 0.0f64;
    let mut s = substream(seed, "selftest/embedding", 0);
    let es = exponents();
    for _ in 0..20 {
        let f = random_matrix(&mut s, 3, 5);
        for &p in &es {
            for &u in &es {
                let q = es[s.uniform_index(es.len())];
                let v = es[s.uniform_index(es.len())];
                let sp = SpacePair::new(3, 5, p, u, q, v).unwrap();
                let ratio = mixed_norm(&f, q, v) / (embedding_norm(&sp) * mixed_norm(&f, p, u));
                worst = worst.max(ratio - 1.0);
            }
        }
    }
    check("embedding bound", worst <= 1e-12, format!("worst excess {worst:.2e}"))
}

fn cardinality(seed: u64) -> Check {
    let mut s = substream(seed, "selftest/cardinality", 0);
    let mut bad = Vec::new();
    for _ in 0..20 {
        let (n1, n2) = (1 + s.uniform_index(12), 1 + s.uniform_index(12));
        if n1 * n2 < 2 {
            continue;
        }
        let n = 1 + s.uniform_index(n1 * n2 - 1);
        let m = 1 + s.uniform_index(5);
        let sp = SpacePair::new(n1, n2, Exponent::ONE, Exponent::INFINITY, Exponent::INFINITY, Exponent::ONE).unwrap();
        let params = ApproxParams::new(sp, n, m).unwrap();
        let f = random_matrix(&mut s, n1, n2);
        let mut o2 = InfoOracle::new(&f);
        let mut o3 = InfoOracle::new(&f);
        let ok = top_rows(&mut o2, &params, &mut s.child("a2")).is_ok()
            && iterated(&mut o3, &params, &mut s.child("a3")).is_ok();
        let c = cardinality_count(&params, false);
        if !ok || o2.count() != c.exact || c.exact > c.bound || o3.count() != 2 * c.exact {
            bad.push((n1, n2, n, m));
        }
    }
    check("cardinality", bad.is_empty(), format!("mismatches {bad:?}"))
}

fn exact_recovery(seed: u64) -> Check {
    let sp = SpacePair::new(8, 8, Exponent::ONE, Exponent::TWO, Exponent::TWO, Exponent::ONE).unwrap();
    let params = ApproxParams::new(sp, 16, 5).unwrap();
    let mut f = Matrix::zeros(8, 8);
    f.row_mut(5).fill(-0.75);
    f.row_mut(1).fill(2.0);
    let failures = (0..20)
        .filter(|&t| {
            let out = top_rows(&mut InfoOracle::new(&f), &params, &mut substream(seed, "selftest/recovery", t));
            out.map(|b| b != f).unwrap_or(true)
        })
        .count();
    check("exact recovery", failures == 0, format!("{failures} of 20 runs inexact"))
}

fn unit_ball(seed: u64) -> Check {
    let mut worst = 0.0f64;
    for &(p, u) in &[(Exponent::ONE, Exponent::INFINITY), (Exponent::TWO, Exponent::ONE), (Exponent::ONE, Exponent::TWO)] {
        let sp = SpacePair::new(8, 64, p, u, Exponent::INFINITY, Exponent::ONE).unwrap();
        for family in Family::ALL {
            let inst = HardInstance::new(HardInstanceSpec::new(family, sp, 16).unwrap()).unwrap();
            for t in 0..50 {
                let f = inst.draw(&mut substream(seed, "selftest/ball", t));
                worst = worst.max(mixed_norm(&f, p, u));
            }
        }
    }
    check("unit ball", worst <= 1.0 + 1e-12, format!("largest norm {worst:.15}"))
}

fn rademacher(seed: u64) -> Check {
    // Overlapping vectors, so the sign average is not trivial.
    let mut s = substream(seed, "selftest/rademacher", 0);
    let vectors: Vec<Matrix> = (0..6).map(|_| random_matrix(&mut s, 3, 4)).collect();
    let subset = [0, 1, 2, 4, 5];
    let (q, v) = (Exponent::TWO, Exponent::ONE);
    let exact = rademacher_expect_exact(&vectors, &subset, q, v).unwrap();
    let (mean, se) = rademacher_expect_mc(&vectors, &subset, q, v, 20_000, &mut s).unwrap();
    let ok = (mean - exact).abs() <= 4.0 * se;
    check("rademacher oracle", ok, format!("exact {exact:.6} vs Monte Carlo {mean:.6} +- {se:.2e}"))
}

fn rate_fit() -> Check {
    let pts: Vec<(f64, f64)> = (4..=10).map(|k| (2f64.powi(k), 2f64.powf(-(k as f64) / 2.0))).collect();
    match fit_rate(&pts) {
        Ok(fit) => check("rate fit", (fit.slope + 0.5).abs() < 1e-12, format!("slope {}", fit.slope)),
        Err(e) => check("rate fit", false, e.to_string()),
    }
}

/// Runs all checks with streams keyed by `seed`.
pub fn run(seed: u64) -> Vec<Check> {
    vec![
        norm_axioms(seed),
        embedding_bound(seed),
        cardinality(seed),
        exact_recovery(seed),
        unit_ball(seed),
        rademacher(seed),
        rate_fit(),
    ]
}

#[cfg(test)]
mod tests {
    #[test]
    fn suite_passes() {
        for c in super::run(3) {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
