//! Property tests across the construction layers, each checked against an
//! independent brute-force computation.

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use olhgen_core::design::{dot, levels_for};
use olhgen_core::existence::olh_exists;
use olhgen_core::kronecker::{kron_combine, kron_dense, latin_conditions, KroneckerPlan};
use olhgen_core::metrics::correlation;
use olhgen_core::propagation::predict_rho;
use olhgen_core::search::{search_olh, switch_delta, SearchConfig};
use olhgen_core::seeds::{
    fold_matrix, hadamard, hadamard_exists, max_sign_columns, seed_olh, sign_columns,
    SMALL_RUN_TARGETS,
};
use olhgen_core::stacking::{construct_best, lower_bound_m};
use olhgen_core::{DesignMatrix, SignMatrix};

fn random_lh(rng: &mut ChaCha8Rng, n: usize, m: usize) -> DesignMatrix {
    let levels = levels_for(n).unwrap();
    let cols: Vec<Vec<i64>> = (0..m)
        .map(|_| {
            let mut c = levels.clone();
            c.shuffle(rng);
            c
        })
        .collect();
    DesignMatrix::from_columns(&cols).unwrap()
}

fn random_signs(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> SignMatrix {
    let entries = (0..rows * cols).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
    SignMatrix::new(rows, cols, entries).unwrap()
}

fn transpose(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    a.iter()
        .map(|row| {
            (0..b[0].len())
                .map(|j| row.iter().zip(b).map(|(x, br)| x * br[j]).sum())
                .collect()
        })
        .collect()
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-9i64..=9, cols), rows)
}

fn column_sum_of_squares_holds(d: &DesignMatrix) -> bool {
    let n = d.runs() as i64;
    (0..d.factors()).all(|c| d.column(c).iter().map(|v| v * v).sum::<i64>() == n * (n * n - 1) / 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn kronecker_transpose_and_mixed_product(
        (a, b, c, d) in (1usize..4, 1usize..4, 1usize..4, 1usize..4, 1usize..4, 1usize..4)
            .prop_flat_map(|(p, q, r, s, t, u)| (matrix(p, q), matrix(r, s), matrix(q, t), matrix(s, u))),
    ) {
        let ab = kron_dense(&a, &b);
        prop_assert_eq!(transpose(&ab), kron_dense(&transpose(&a), &transpose(&b)));
        prop_assert_eq!(matmul(&ab, &kron_dense(&c, &d)), kron_dense(&matmul(&a, &c), &matmul(&b, &d)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn switch_delta_matches_recomputation(
        (c, x, p, q) in (2usize..30).prop_flat_map(|n| (
            prop::collection::vec(-60i64..=60, n),
            prop::collection::vec(-60i64..=60, n),
            0..n,
            0..n,
        )),
    ) {
        let mut swapped = c.clone();
        swapped.swap(p, q);
        prop_assert_eq!(dot(&swapped, &x) - dot(&c, &x), switch_delta(&c, &x, p, q));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// Whenever the conditions are reported to hold, the combination is a
    /// Latin hypercube. Half of the plans give `A` the mirrored-row
    /// structure so both outcomes are exercised.
    #[test]
    fn latin_conditions_are_sound(
        n1 in 2usize..6, n2 in 2usize..9, m1 in 1usize..4, m2 in 1usize..4,
        seed in any::<u64>(), structured in any::<bool>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (b, c) = (random_lh(&mut rng, n2, m2), random_lh(&mut rng, n1, m1));
        let mut a = random_signs(&mut rng, n1, m1);
        if structured {
            let mut rows = vec![vec![0i8; m1]; n1];
            #[allow(clippy::needless_range_loop)]
            for i in 0..m1 {
                for p in 0..n1 {
                    let partner = (0..p).find(|&q| c.get(q, i) == -c.get(p, i));
                    rows[p][i] = match partner {
                        Some(q) => rows[q][i],
                        None => a.get(p, i),
                    };
                }
            }
            a = SignMatrix::from_rows(rows).unwrap();
        }
        let d = random_signs(&mut rng, n2, m2);
        let plan = KroneckerPlan::new(a, b, c, d, n2 as i64);
        let cond = latin_conditions(&plan).unwrap();
        if structured {
            prop_assert!(cond.cond_iia);
        }
        if cond.guarantee_latin() {
            prop_assert!(kron_combine(&plan).unwrap().is_latin_hypercube());
        }
    }

    /// The predicted metrics agree with those measured on the combined
    /// design.
    #[test]
    fn propagation_matches_direct_computation(
        n1 in 2usize..7,
        n2 in prop::sample::select(vec![4usize, 8, 12, 16, 20]),
        m2_pick in 0usize..64,
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m2 = 2 + m2_pick % (max_sign_columns(n2).min(n2 - 1) - 1);
        let plan = KroneckerPlan::new(
            SignMatrix::ones(n1, 1).unwrap(),
            random_lh(&mut rng, n2, m2),
            random_lh(&mut rng, n1, 1),
            sign_columns(n2, m2).unwrap(),
            n2 as i64,
        );
        let (rb, rc) = (correlation(&plan.b).unwrap(), correlation(&plan.c).unwrap());
        let predicted = predict_rho(&plan, &rb, &rc).unwrap();
        let direct = correlation(&kron_combine(&plan).unwrap()).unwrap();
        let close = |p: f64, d: f64| (p - d).abs() <= 1e-12 * d.abs().max(f64::MIN_POSITIVE);
        prop_assert!(close(predicted.rho_sq, direct.rho_sq), "{} vs {}", predicted.rho_sq, direct.rho_sq);
        prop_assert!(close(predicted.rho_max, direct.rho_max), "{} vs {}", predicted.rho_max, direct.rho_max);
        prop_assert!(direct.rho_max + 1e-12 >= predicted.rho_max);
    }

    /// Evaluating a fold matrix at any distinct positive values gives
    /// mutually orthogonal columns.
    #[test]
    fn fold_matrices_are_orthogonal_for_any_values(
        order in prop::sample::select(vec![2usize, 4, 8, 16]),
        raw in prop::collection::vec(1i64..10_000, 8),
    ) {
        let f = fold_matrix(order).unwrap();
        let values: Vec<f64> = raw[..f.symbols()].iter().map(|&v| v as f64).collect();
        let e = f.evaluate(&values).unwrap();
        for i in 0..f.cols() {
            for j in 0..i {
                let ip: f64 = e.iter().map(|row| row[i] * row[j]).sum();
                prop_assert_eq!(ip, 0.0);
            }
        }
    }

    #[test]
    fn search_is_deterministic(n in prop::sample::select(vec![4usize, 5, 7, 8]), seed in 0u64..1000) {
        let config = SearchConfig::new(20, 3, seed).unwrap();
        let m = 2;
        let a = search_olh(n, m, &config).unwrap();
        let b = search_olh(n, m, &config).unwrap();
        prop_assert_eq!(a.design, b.design);
        prop_assert_eq!(a.restart, b.restart);
    }
}

#[test]
fn hadamard_orders_up_to_64() {
    let mut supported = 0;
    for n in 1..=64 {
        if !hadamard_exists(n) {
            assert!(hadamard(n).is_err(), "order {n}");
            continue;
        }
        let h = hadamard(n).unwrap();
        let g = h.gram();
        for i in 0..n {
            for j in 0..n {
                assert_eq!(g[i * n + j], if i == j { n as i64 } else { 0 }, "order {n}");
            }
        }
        supported += 1;
    }
    assert!(supported >= 14);
}

#[test]
fn catalog_meets_every_target() {
    for (n, m) in SMALL_RUN_TARGETS {
        let e = seed_olh(n).unwrap();
        assert_eq!(e.m, m, "n = {n}");
        assert!(e.design.is_olh(), "n = {n}");
        assert!(column_sum_of_squares_holds(&e.design), "n = {n}");
    }
}

#[test]
fn construct_best_sweep() {
    for n in 1..=300 {
        match construct_best(n) {
            Ok(d) => {
                assert!(olh_exists(n) || n == 1, "n = {n} should be impossible");
                assert_eq!(d.runs(), n);
                assert!(d.is_olh(), "n = {n}");
                assert!(d.factors() >= lower_bound_m(n), "n = {n}: {} columns", d.factors());
                assert!(column_sum_of_squares_holds(&d), "n = {n}");
                assert!(d.recipe().is_some_and(|r| r.is_well_founded()), "n = {n}");
            }
            Err(_) => assert!(!olh_exists(n), "n = {n} should be constructible"),
        }
    }
}
