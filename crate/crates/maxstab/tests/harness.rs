use maxstab::experiment::{run_scaling_study, run_term_count, ExperimentConfig, ScalingRule, Study};
use maxstab_core::{sample_max_block_frailty, LogisticParam, ModelKind, RngStream};

#[test]
fn term_counts_agree_with_explicit_refinement_lists() {
    let (alpha, n, obs) = (0.4, 50, 4000);
    let mut cfg = ExperimentConfig::new(vec![alpha]);
    cfg.dims = vec![2, 4, 6, 8, 10];
    cfg.block_sizes = vec![n];
    cfg.num_obs = obs;
    cfg.seed = 3;
    let table = run_term_count(&cfg).unwrap();
    for d in [2, 4, 6, 8, 10] {
        let row = table.find(Some("second-order"), alpha, d, n).unwrap();
        // independent draws, terms counted by listing every refinement
        let mut rng = RngStream::new(99, d as u64);
        let param = LogisticParam::new(alpha).unwrap();
        let listed: Vec<f64> = (0..obs)
            .map(|_| {
                let p = sample_max_block_frailty(n, d, ModelKind::Logistic, param, &mut rng).partition;
                let len = p.split_block_refinements().len();
                assert_eq!(len as u128, p.refinement_count());
                1.0 + len as f64
            })
            .collect();
        let mean = listed.iter().sum::<f64>() / obs as f64;
        let var = listed.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (obs - 1) as f64;
        let se = (var / obs as f64 + row.terms_se.unwrap().powi(2)).sqrt();
        let got = row.mean_terms.unwrap();
        assert!((got - mean).abs() < 4.0 * se.max(1e-12), "d={d}: {got} vs {mean} (se {se})");
    }
}

#[test]
fn second_order_is_skipped_where_the_block_is_too_small() {
    let mut cfg = ExperimentConfig::new(vec![0.9]);
    cfg.dims = vec![6, 10];
    cfg.scaling_rule = Some(ScalingRule::TwiceD);
    cfg.replications = 5;
    cfg.num_obs = 20;
    let t = run_scaling_study(&cfg).unwrap();
    // n = 2d <= d(d-1)/2 for d = 6, 10
    assert_eq!(t.study, Study::Scaling.as_str());
    assert_eq!(t.rows.len(), 2);
    assert!(t.rows.iter().all(|r| r.kind.as_deref() == Some("st")));
    assert_eq!(t.skipped.len(), 2);
}

#[test]
fn scaling_output_is_reproducible_and_cell_local() {
    let mut cfg = ExperimentConfig::new(vec![0.9]);
    cfg.pairs = vec![(10, 50)];
    cfg.kinds = vec!["st".into()];
    cfg.replications = 6;
    cfg.num_obs = 30;
    cfg.seed = 11;
    cfg.workers = Some(1);
    let alone = run_scaling_study(&cfg).unwrap();
    cfg.pairs = vec![(20, 200), (10, 50)];
    cfg.workers = Some(2);
    let both = run_scaling_study(&cfg).unwrap();
    assert_eq!(alone.rows[0], *both.find(Some("st"), 0.9, 10, 50).unwrap());
    cfg.seed = 12;
    let other = run_scaling_study(&cfg).unwrap();
    assert_ne!(other.rows[1].mean_bias, both.rows[1].mean_bias);
}

#[test]
fn shipped_configs_validate() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let cfg = ExperimentConfig::load(&path).unwrap();
        cfg.validate().unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        seen += 1;
    }
    assert_eq!(seen, 6);
}
