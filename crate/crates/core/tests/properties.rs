use mixnorm_approx::algorithms::{cardinality_count, iterated, median, top_rows, ApproxParams};
use mixnorm_approx::hard_instances::{make_blocks, Family, HardInstance, HardInstanceSpec};
use mixnorm_approx::harness::fit_rate;
use mixnorm_approx::{embedding_norm, mixed_norm, substream, Exponent, InfoOracle, Matrix, SpacePair};
use proptest::prelude::*;

fn exponent() -> impl Strategy<Value = Exponent> {
    prop_oneof![
        Just(Exponent::ONE),
        Just(Exponent::TWO),
        Just(Exponent::INFINITY),
        (1.0f64..20.0).prop_map(|x| Exponent::new(x).unwrap()),
    ]
}

fn matrix() -> impl Strategy<Value = Matrix> {
    (1usize..7, 1usize..7).prop_flat_map(|(n1, n2)| {
        prop::collection::vec(-1e3f64..1e3, n1 * n2).prop_map(move |v| Matrix::from_vec(n1, n2, v).unwrap())
    })
}

fn matrix_pair() -> impl Strategy<Value = (Matrix, Matrix)> {
    (1usize..7, 1usize..7).prop_flat_map(|(n1, n2)| {
        let one = prop::collection::vec(-1e3f64..1e3, n1 * n2);
        (one.clone(), one).prop_map(move |(a, b)| (Matrix::from_vec(n1, n2, a).unwrap(), Matrix::from_vec(n1, n2, b).unwrap()))
    })
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #[test]
    fn homogeneity(f in matrix(), p in exponent(), u in exponent(), alpha in -50.0f64..50.0) {
        prop_assert!(close(mixed_norm(&f.scaled(alpha), p, u), alpha.abs() * mixed_norm(&f, p, u)));
    }

    #[test]
    fn triangle_inequality((f, g) in matrix_pair(), p in exponent(), u in exponent()) {
        let lhs = mixed_norm(&f.add(&g), p, u);
        let rhs = mixed_norm(&f, p, u) + mixed_norm(&g, p, u);
        prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn equal_exponents_collapse_to_flat_norm(f in matrix(), p in exponent()) {
        let flat = Matrix::from_vec(1, f.n1() * f.n2(), f.entries().to_vec()).unwrap();
        prop_assert!(close(mixed_norm(&f, p, p), mixed_norm(&flat, Exponent::ONE, p)));
    }

    #[test]
    fn embedding_norm_bounds_target_norm(f in matrix(), p in exponent(), u in exponent(), q in exponent(), v in exponent()) {
        let sp = SpacePair::new(f.n1(), f.n2(), p, u, q, v).unwrap();
        prop_assert!(mixed_norm(&f, q, v) <= embedding_norm(&sp) * mixed_norm(&f, p, u) * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn median_lies_between_extremes_and_ignores_order(mut xs in prop::collection::vec(-1e6f64..1e6, 1..40), seed in any::<u64>()) {
        let med = median(&xs).unwrap();
        let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(lo <= med && med <= hi);
        let mut s = substream(seed, "shuffle", 0);
        for i in (1..xs.len()).rev() {
            xs.swap(i, s.uniform_index(i + 1));
        }
        prop_assert_eq!(median(&xs).unwrap(), med);
    }

    #[test]
    fn row_selection_output_structure(
        (f, n, m) in matrix().prop_flat_map(|f| {
            let grid = f.n1() * f.n2();
            (Just(f), 1..grid.max(2), 1usize..6)
        }),
        seed in any::<u64>(),
    ) {
        prop_assume!(n < f.n1() * f.n2());
        let sp = SpacePair::new(f.n1(), f.n2(), Exponent::ONE, Exponent::TWO, Exponent::TWO, Exponent::ONE).unwrap();
        let params = ApproxParams::new(sp, n, m).unwrap();
        let mut oracle = InfoOracle::new(&f);
        let out = top_rows(&mut oracle, &params, &mut substream(seed, "prop", 0)).unwrap();
        prop_assert_eq!(oracle.count(), cardinality_count(&params, false).exact);
        let mut read = 0;
        for i in 0..f.n1() {
            if out.row(i) == f.row(i) && !f.is_zero_row(i) {
                read += 1;
            } else {
                prop_assert!(out.is_zero_row(i) || out.row(i) == f.row(i));
            }
        }
        prop_assert!(read <= params.rows_read());

        let mut oracle = InfoOracle::new(&f);
        iterated(&mut oracle, &params, &mut substream(seed, "prop", 1)).unwrap();
        prop_assert_eq!(oracle.count(), cardinality_count(&params, true).exact);
    }

    #[test]
    fn block_sandwich(n2 in 1usize..5000, frac in 0.0f64..1.0) {
        let count = 1 + ((n2 - 1) as f64 * frac) as usize;
        let b = make_blocks(n2, count).unwrap();
        let size = b.block_len() as f64;
        prop_assert!(n2 as f64 / (2.0 * count as f64) < size && size <= n2 as f64 / count as f64);
        prop_assert!(b.block(count - 1).end <= n2);
    }

    #[test]
    fn draws_stay_in_unit_ball(
        id in 1u8..=6, p in exponent(), u in exponent(),
        n1 in 4usize..20, n2 in 8usize..80, frac in 0.0f64..1.0, seed in any::<u64>(),
    ) {
        let sp = SpacePair::new(n1, n2, p, u, Exponent::INFINITY, Exponent::ONE).unwrap();
        let max_n = (n1 * n2 - 1) / 21;
        prop_assume!(max_n >= 1);
        let n = 1 + ((max_n - 1) as f64 * frac) as usize;
        let spec = HardInstanceSpec::new(Family::from_id(id).unwrap(), sp, n).unwrap();
        // Families 5 and 6 refuse budgets too small for their block count.
        if let Ok(inst) = HardInstance::new(spec) {
            let mut s = substream(seed, "ball", 0);
            for _ in 0..20 {
                prop_assert!(mixed_norm(&inst.draw(&mut s), p, u) <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn rate_fit_recovers_power_laws(slope in -2.0f64..2.0, scale in 0.01f64..100.0) {
        let pts: Vec<(f64, f64)> = (3..12).map(|k| {
            let n = 2f64.powi(k);
            (n, scale * n.powf(slope))
        }).collect();
        let fit = fit_rate(&pts).unwrap();
        prop_assert!((fit.slope - slope).abs() < 1e-9);
        prop_assert!((fit.intercept - scale.log2()).abs() < 1e-9);
    }
}
