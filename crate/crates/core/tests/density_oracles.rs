mod common;

use maxstab_core::density::{log_full_density, log_second_order_density, log_st_density};
use maxstab_core::{enumerate_partitions, Logistic, LogisticParam, MaxStableModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn logistic(alpha: f64) -> Logistic {
    Logistic::new(LogisticParam::new(alpha).unwrap())
}

fn random_subset(rng: &mut ChaCha8Rng, d: usize) -> Vec<usize> {
    loop {
        let s: Vec<usize> = (0..d).filter(|_| rng.random_bool(0.5)).collect();
        if !s.is_empty() {
            return s;
        }
    }
}

#[test]
fn partials_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut worst: f64 = 0.0;
    for case in 0..120 {
        let alpha = [0.3, 0.6, 0.9][case % 3];
        let d = rng.random_range(1..=5);
        let x: Vec<f64> = (0..d).map(|_| rng.random_range(0.3..4.0)).collect();
        let subset = random_subset(&mut rng, d);
        let fd = -common::logistic_partial_fd(&x, &subset, alpha);
        let closed = logistic(alpha).log_neg_partial(&x, &subset).exp();
        let rel = (closed - fd).abs() / closed;
        worst = worst.max(rel);
        assert!(rel < 1e-5, "alpha={alpha} x={x:?} S={subset:?}: {closed} vs {fd}");
    }
    println!("worst relative error {worst:.2e}");
}

#[test]
fn three_variable_example() {
    let x = [1.0, 2.0, 3.0];
    let fd = -common::logistic_partial_fd(&x, &[0, 1], 0.6);
    let closed = logistic(0.6).log_neg_partial(&x, &[0, 1]).exp();
    assert!((closed - fd).abs() / closed < 1e-6);
}

#[test]
fn st_sum_is_mixed_partial_of_cdf() {
    let alpha = 0.5;
    let cdf = |y: &[f64]| (-common::logistic_v(y, alpha)).exp();
    let fd = common::mixed_partial(&cdf, &[1.0, 1.0], &[0, 1], 0.04);
    let m = logistic(alpha);
    let sum: f64 = enumerate_partitions(2)
        .unwrap()
        .map(|p| log_st_density(&m, &[1.0, 1.0], &p).unwrap().exp())
        .sum();
    assert!((sum - fd).abs() / fd < 1e-4, "{sum} vs {fd}");
}

#[test]
fn partition_sums_reproduce_full_density() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for d in 1..=6 {
        for &alpha in &[0.15, 0.5, 0.85, 1.0] {
            let m = logistic(alpha);
            let x: Vec<f64> = (0..d).map(|_| rng.random_range(0.2..5.0)).collect();
            let full = log_full_density(&m, &x).unwrap().exp();
            let (mut st, mut so) = (0.0, 0.0);
            for p in enumerate_partitions(d).unwrap() {
                st += log_st_density(&m, &x, &p).unwrap().exp();
                so += log_second_order_density(&m, &x, &p, 30).unwrap().exp();
            }
            assert!((st - full).abs() / full < 1e-10, "d={d} alpha={alpha}");
            assert!((so - full).abs() / full < 1e-10, "d={d} alpha={alpha}: {so} vs {full}");
        }
    }
}

#[test]
fn second_order_equals_explicit_refinement_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for d in 2..=6 {
        let x: Vec<f64> = (0..d).map(|_| rng.random_range(0.2..5.0)).collect();
        let m = logistic(0.37);
        let n = 40;
        for p in enumerate_partitions(d).unwrap() {
            let prod = |q: &maxstab_core::Partition| -> f64 {
                q.blocks().iter().map(|b| m.log_neg_partial(&x, b).exp()).product()
            };
            let mm = p.len() as f64;
            let mut total = (1.0 - mm * (mm - 1.0) / (2.0 * n as f64)) * prod(&p);
            for r in p.split_block_refinements() {
                total += prod(&r) / n as f64;
            }
            let want = total.ln() - m.exponent(&x);
            let got = log_second_order_density(&m, &x, &p, n).unwrap();
            assert!((got - want).abs() < 1e-11, "{p}: {got} vs {want}");
        }
    }
}

#[test]
fn bivariate_full_density_integrates_to_one() {
    let m = logistic(0.5);
    // x = e^t on both axes; Fréchet tails beyond [-4, 16] carry < 1e-6 mass
    let (a, b, panels) = (-4.0, 16.0, 1600);
    let inner = |t1: f64| {
        common::simpson(
            |t2| {
                let x = [t1.exp(), t2.exp()];
                (log_full_density(&m, &x).unwrap() + t1 + t2).exp()
            },
            a,
            b,
            panels,
        )
    };
    let total = common::simpson(inner, a, b, panels);
    assert!((total - 1.0).abs() < 1e-3, "{total}");
}
