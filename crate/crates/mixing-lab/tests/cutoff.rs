use group_core::{Alphabet, AnisotropyVector};
use mixing_lab::{
    cutoff_experiment, mixing_time, phi_profile, srw_entropy, CutoffConfig, DenseChain, Family,
    MixError,
};
use schreier_graphs::{random_lift, BaseGraph, ColoredWeights, LiftKernel};

fn srw_config(sizes: Vec<usize>, seeds: Vec<u64>) -> CutoffConfig {
    let p = AnisotropyVector::uniform(&Alphabet::identity(3).unwrap());
    let mut c = CutoffConfig::new(Family::Schreier { p }, sizes, seeds);
    c.starts = 4;
    c
}

#[test]
fn small_srw_experiment() {
    let mut config = srw_config(vec![256, 1024], vec![1, 2]);
    config.sigma_iters = 200;
    let s = cutoff_experiment(&config).unwrap();
    assert_eq!(s.cells.len(), 4);
    assert_eq!(s.srw_degree, Some(3));
    assert!((s.entropy - srw_entropy(3)).abs() < 1e-15);
    for c in &s.cells {
        assert_eq!(c.curves.len(), 5);
        assert_eq!(c.states, c.n);
        assert!(!c.periodic);
        assert!((c.prediction - (c.n as f64).ln() / s.entropy).abs() < 1e-12);
        let worst: Vec<usize> = c.t_mix_worst.iter().map(|t| t.unwrap()).collect();
        let best: Vec<usize> = c.t_mix_best.iter().map(|t| t.unwrap()).collect();
        assert!(worst.iter().zip(&best).all(|(w, b)| w >= b));
        // eps = 0.1, 0.25, 0.5, 0.9: times are non-increasing in eps
        assert!(worst.windows(2).all(|w| w[1] <= w[0]));
        let width = c.width.unwrap();
        assert!((width - (worst[0] - worst[3]) as f64 / worst[0] as f64).abs() < 1e-15);
        let profile = c.srw_profile.as_ref().unwrap();
        let log_n = (c.n as f64).ln();
        assert!((profile[1] - (log_n / s.entropy + phi_profile(3, 0.25) * log_n.sqrt())).abs() < 1e-12);
        assert!(c.sigma_1.unwrap() > 0.8 && c.sigma_1.unwrap() < 1.0);
        // the order of magnitude of the entropic prediction
        let r = c.ratio[1].unwrap();
        assert!((2.5..7.0).contains(&r), "ratio {r}");
    }
}

#[test]
fn results_do_not_depend_on_the_thread_count() {
    let config = srw_config(vec![512, 2048], vec![3, 4, 5]);
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| cutoff_experiment(&config).unwrap())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn anisotropic_experiment_uses_the_estimated_entropy() {
    let a = Alphabet::parse(4, "2,1,4,3").unwrap();
    let p = AnisotropyVector::from_weights(&a, &[0.35, 0.35, 0.15, 0.15]).unwrap();
    let mut config = CutoffConfig::new(Family::Schreier { p }, vec![2000], vec![1]);
    config.entropy_walks = 300;
    config.entropy_horizon = 400;
    config.starts = 2;
    let s = cutoff_experiment(&config).unwrap();
    assert!(s.srw_degree.is_none() && s.entropy_stderr > 0.0);
    assert!(s.cells[0].srw_profile.is_none());
    config.entropy = Some(0.5);
    assert_eq!(cutoff_experiment(&config).unwrap().entropy, 0.5);
}

#[test]
fn trivial_lift_mixes_like_its_base() {
    let base = BaseGraph::complete(4).unwrap();
    let colored = ColoredWeights::simple(&base).unwrap();
    let base_chain = DenseChain::new(colored.base_chain().clone()).unwrap();
    let lift = LiftKernel::new(random_lift(&colored, 1, 9).unwrap(), &colored).unwrap();
    for eps in [0.01, 0.1, 0.25, 0.5] {
        for x in 0..4 {
            assert_eq!(
                mixing_time(&lift, x, eps, 100).unwrap(),
                mixing_time(&base_chain, x, eps, 100).unwrap()
            );
        }
    }
}

#[test]
fn lift_experiment() {
    let base = BaseGraph::complete(4).unwrap();
    let colored = ColoredWeights::simple(&base).unwrap();
    let mut config = CutoffConfig::new(Family::Lift { colored }, vec![64, 256], vec![1]);
    config.starts = 3;
    let s = cutoff_experiment(&config).unwrap();
    assert_eq!(s.srw_degree, Some(3));
    assert_eq!(s.cells[1].states, 1024);
}

#[test]
fn invalid_configs() {
    let mut c = srw_config(vec![100, 100], vec![1]);
    assert!(matches!(cutoff_experiment(&c), Err(MixError::InvalidConfig(_))));
    c.sizes = vec![100];
    c.seeds = vec![1, 1];
    assert!(matches!(cutoff_experiment(&c), Err(MixError::InvalidConfig(_))));
    c.seeds = vec![1];
    c.eps = vec![0.5, 1.5];
    assert!(matches!(cutoff_experiment(&c), Err(MixError::InvalidEpsilon(_))));
    c.eps = vec![0.5];
    c.sizes = vec![101];
    assert!(matches!(cutoff_experiment(&c), Err(MixError::Graph(_))));
}
