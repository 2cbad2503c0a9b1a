mod common;

use maxstab_core::sampler::{sample_block_weights, sample_vector};
use maxstab_core::{
    ratio_exact, sample_max_block, sample_max_block_frailty, sample_positive_stable, LogisticParam,
    ModelKind, RngStream,
};

fn param(a: f64) -> LogisticParam {
    LogisticParam::new(a).unwrap()
}

const MODELS: [ModelKind; 2] = [ModelKind::Logistic, ModelKind::OuterPowerClayton];

#[test]
fn stable_half_is_levy() {
    // S with Laplace transform exp(-sqrt t) is Lévy with scale 1/2:
    // P(S <= x) = erfc(1 / (2 sqrt x))
    let mut rng = RngStream::new(101, 0);
    let mut draws: Vec<f64> = (0..10_000).map(|_| sample_positive_stable(0.5, &mut rng)).collect();
    let ks = common::ks_statistic(&mut draws, |x| libm::erfc(0.5 / x.sqrt()));
    assert!(ks < common::ks_critical_1pct(10_000), "KS {ks}");
}

#[test]
fn margins_are_standard_frechet() {
    for model in MODELS {
        for (k, &alpha) in [0.1, 0.4, 0.7, 0.9].iter().enumerate() {
            let mut rng = RngStream::new(202, k as u64);
            let d = 6;
            let draws: Vec<Vec<f64>> = (0..10_000).map(|_| sample_vector(model, d, param(alpha), &mut rng)).collect();
            for j in [0, d - 1] {
                let mut col: Vec<f64> = draws.iter().map(|v| v[j]).collect();
                let ks = common::ks_statistic(&mut col, common::frechet_cdf);
                assert!(ks < common::ks_critical_1pct(10_000), "{model} alpha={alpha} j={j}: {ks}");
            }
        }
    }
}

#[test]
fn independence_has_uncorrelated_ranks() {
    let mut rng = RngStream::new(303, 0);
    let m = 10_000;
    let draws: Vec<Vec<f64>> = (0..m).map(|_| sample_vector(ModelKind::Logistic, 2, param(1.0), &mut rng)).collect();
    // on the uniform scale F(X) the correlation is Spearman's rho
    let u: Vec<(f64, f64)> = draws
        .iter()
        .map(|v| (common::frechet_cdf(v[0]), common::frechet_cdf(v[1])))
        .collect();
    let mean = |f: &dyn Fn(&(f64, f64)) -> f64| u.iter().map(f).sum::<f64>() / m as f64;
    let cov = mean(&|p| (p.0 - 0.5) * (p.1 - 0.5));
    let rho = cov * 12.0;
    assert!(rho.abs() < 3.0 / (m as f64).sqrt(), "rho {rho}");
}

fn corner_hits(model: ModelKind, d: usize, alpha: f64, m: usize, seed: u64) -> usize {
    let mut rng = RngStream::new(seed, d as u64);
    (0..m)
        .filter(|_| sample_vector(model, d, param(alpha), &mut rng).iter().all(|&x| x <= 1.0))
        .count()
}

#[test]
fn corner_cdf_matches_analytic() {
    for &d in &[2, 5] {
        for &alpha in &[0.5, 0.7] {
            let m = 100_000;
            let z = common::binomial_z(corner_hits(ModelKind::Logistic, d, alpha, m, 404), m, common::logistic_corner_cdf(d, alpha));
            assert!(z < 3.0, "logistic d={d} alpha={alpha}: z={z}");
            let z = common::binomial_z(
                corner_hits(ModelKind::OuterPowerClayton, d, alpha, m, 405),
                m,
                common::opc_corner_cdf(d, alpha),
            );
            assert!(z < 3.0, "opc d={d} alpha={alpha}: z={z}");
        }
    }
    // the two worked values
    assert!((common::logistic_corner_cdf(2, 0.5) - 0.2431).abs() < 1e-4);
}

#[test]
fn block_maxima_are_max_stable() {
    // M_20 / 20 of logistic vectors has the same law as one vector
    let (d, alpha, m) = (2, 0.5, 40_000);
    let target = common::logistic_corner_cdf(d, alpha);
    for frailty in [false, true] {
        let mut rng = RngStream::new(505, frailty as u64);
        let hits = (0..m)
            .filter(|_| {
                let obs = if frailty {
                    sample_max_block_frailty(20, d, ModelKind::Logistic, param(alpha), &mut rng)
                } else {
                    sample_max_block(20, d, ModelKind::Logistic, param(alpha), &mut rng)
                };
                obs.maxima.iter().all(|&x| x <= 1.0)
            })
            .count();
        let z = common::binomial_z(hits, m, target);
        assert!(z < 3.0, "frailty={frailty}: z={z}");
    }
}

#[test]
fn independence_singleton_frequency_matches_exact_ratio() {
    let (n, d, blocks) = (500, 10, 2000);
    let p = ratio_exact(n, d as u64).unwrap();
    assert!((p - 0.913_405).abs() < 1e-6);
    for frailty in [false, true] {
        let mut rng = RngStream::new(606, frailty as u64);
        let hits = (0..blocks)
            .filter(|_| {
                let obs = if frailty {
                    sample_max_block_frailty(n, d, ModelKind::Logistic, param(1.0), &mut rng)
                } else {
                    sample_max_block(n, d, ModelKind::Logistic, param(1.0), &mut rng)
                };
                obs.partition.is_all_singletons()
            })
            .count();
        let z = common::binomial_z(hits, blocks, p);
        assert!(z < 3.0, "frailty={frailty}: z={z}");
    }
}

fn size_histogram(frailty: bool, model: ModelKind, n: u64, d: usize, alpha: f64, blocks: usize, seed: u64) -> Vec<f64> {
    let mut rng = RngStream::new(seed, n);
    let mut hist = vec![0.0; d + 1];
    for _ in 0..blocks {
        let obs = if frailty {
            sample_max_block_frailty(n, d, model, param(alpha), &mut rng)
        } else {
            sample_max_block(n, d, model, param(alpha), &mut rng)
        };
        hist[obs.partition.len()] += 1.0 / blocks as f64;
    }
    hist
}

#[test]
fn frailty_shortcut_matches_direct_simulation() {
    let (n, d, blocks) = (30, 4, 20_000);
    for model in MODELS {
        let direct = size_histogram(false, model, n, d, 0.6, blocks, 707);
        let fast = size_histogram(true, model, n, d, 0.6, blocks, 708);
        for k in 1..=d {
            let (a, b) = (direct[k], fast[k]);
            let se = ((a * (1.0 - a) + b * (1.0 - b)) / blocks as f64).sqrt().max(1e-4);
            assert!((a - b).abs() < 4.0 * se, "{model} size {k}: {a} vs {b}");
        }
    }
}

#[test]
fn partition_sizes_settle_as_n_grows() {
    // distance to a large-n reference shrinks with n, and the all-singleton
    // probability rises toward its limit
    let (d, alpha, blocks) = (4, 0.7, 20_000);
    let reference = size_histogram(true, ModelKind::Logistic, 4_000, d, alpha, blocks, 809);
    let tv = |h: &[f64]| 0.5 * h.iter().zip(&reference).map(|(a, b)| (a - b).abs()).sum::<f64>();
    let small = size_histogram(true, ModelKind::Logistic, 8, d, alpha, blocks, 810);
    let medium = size_histogram(true, ModelKind::Logistic, 80, d, alpha, blocks, 811);
    assert!(tv(&small) > tv(&medium), "{} vs {}", tv(&small), tv(&medium));
    assert!(small[d] < medium[d] && medium[d] < reference[d] + 0.02);
}

#[test]
fn block_weights_are_a_distribution() {
    let mut rng = RngStream::new(909, 0);
    for model in MODELS {
        let (w, _) = sample_block_weights(200, model, param(0.3), &mut rng);
        assert!(w.iter().all(|&v| v >= 0.0));
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
