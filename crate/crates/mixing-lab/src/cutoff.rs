use group_core::{rng, AnisotropyVector};
use rand::Rng;
use rayon::prelude::*;
use schreier_graphs::{random_lift, random_schreier, ColoredWeights, Kernel, LiftKernel, SchreierKernel};
use serde::Serialize;
use tree_calculus::entropy_green;

use crate::propagate::{check_eps, first_below};
use crate::{mixing_curve, phi_profile, singular_radius_t, srw_entropy, MixError, Result};

/// Graph family of a cutoff experiment.
#[derive(Clone, Debug)]
pub enum Family {
    /// Random Schreier graphs of the alphabet of `p`, walked with `p`.
    Schreier { p: AnisotropyVector },
    /// Random `n`-lifts of a colored base, walked with the lifted weights.
    Lift { colored: ColoredWeights },
}

#[derive(Clone, Debug)]
pub struct CutoffConfig {
    pub family: Family,
    pub sizes: Vec<usize>,
    pub seeds: Vec<u64>,
    pub eps: Vec<f64>,
    /// Random starts per graph, in addition to the first state.
    pub starts: usize,
    pub t_max: usize,
    /// Entropy of the covering walk; estimated when absent and not known in closed form.
    pub entropy: Option<f64>,
    pub entropy_walks: usize,
    pub entropy_horizon: usize,
    /// Power-iteration steps for `sigma(1)` per graph (0 skips it).
    pub sigma_iters: usize,
    /// Root seed for everything not tied to a graph seed.
    pub seed: u64,
}

impl CutoffConfig {
    pub fn new(family: Family, sizes: Vec<usize>, seeds: Vec<u64>) -> Self {
        CutoffConfig {
            family,
            sizes,
            seeds,
            eps: vec![0.1, 0.25, 0.5, 0.9],
            starts: 16,
            t_max: 2000,
            entropy: None,
            entropy_walks: 4000,
            entropy_horizon: 2000,
            sigma_iters: 0,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_eps(&self.eps)?;
        if self.sizes.is_empty() || self.seeds.is_empty() {
            return Err(MixError::InvalidConfig("sizes and seeds must be non-empty".into()));
        }
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(MixError::InvalidConfig("sizes must be strictly increasing".into()));
        }
        let mut s = self.seeds.clone();
        s.sort_unstable();
        s.dedup();
        if s.len() != self.seeds.len() {
            return Err(MixError::InvalidConfig("seeds must be distinct".into()));
        }
        Ok(())
    }
}

/// Mixing times from one start.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StartCurve {
    pub start: usize,
    pub t_mix: Vec<Option<usize>>,
    #[serde(skip)]
    pub samples: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellResult {
    pub n: usize,
    pub seed: u64,
    pub states: usize,
    pub eps: Vec<f64>,
    /// Max over the sampled starts ("worst-of-m").
    pub t_mix_worst: Vec<Option<usize>>,
    /// Min over the sampled starts.
    pub t_mix_best: Vec<Option<usize>>,
    /// From the first random start.
    pub t_mix_random: Vec<Option<usize>>,
    /// `log n / h`.
    pub prediction: f64,
    /// `T_mix(eps) / log n` for the worst-of-m times.
    pub ratio: Vec<Option<f64>>,
    /// `(T(eps_min) - T(eps_max)) / T(eps_min)` on the worst-of-m times.
    pub width: Option<f64>,
    /// `log n / h + Phi(eps) sqrt(log n)` for the simple random walk.
    pub srw_profile: Option<Vec<f64>>,
    pub sigma_1: Option<f64>,
    pub periodic: bool,
    pub curves: Vec<StartCurve>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutoffSummary {
    pub entropy: f64,
    pub entropy_stderr: f64,
    /// Degree of the regular graphs when the walk is a simple random walk.
    pub srw_degree: Option<usize>,
    pub cells: Vec<CellResult>,
}

fn entropy_of(config: &CutoffConfig) -> Result<(f64, f64, Option<usize>)> {
    match &config.family {
        Family::Schreier { p } => {
            let srw = p.is_uniform().then(|| p.d());
            if let Some(h) = config.entropy {
                return Ok((h, 0.0, srw));
            }
            if let Some(d) = srw {
                return Ok((srw_entropy(d), 0.0, srw));
            }
            let est = entropy_green(p, config.entropy_walks, config.entropy_horizon, config.seed)?;
            Ok((est.mean, est.stderr, None))
        }
        Family::Lift { colored } => {
            let base = colored.base();
            let deg = base.out_degree(0);
            let regular = (0..base.r()).all(|u| base.out_degree(u) == deg)
                && colored.weights().iter().all(|&w| (w - 1.0 / deg as f64).abs() < 1e-15);
            let srw = regular.then_some(deg).filter(|&d| d >= 3);
            match (config.entropy, srw) {
                (Some(h), _) => Ok((h, 0.0, srw)),
                (None, Some(d)) => Ok((srw_entropy(d), 0.0, srw)),
                (None, None) => Err(MixError::InvalidConfig(
                    "the entropy of a non-regular colored walk must be given".into(),
                )),
            }
        }
    }
}

fn run_cell<K: Kernel>(
    kernel: &K,
    config: &CutoffConfig,
    n: usize,
    seed: u64,
    h: f64,
    srw: Option<usize>,
) -> Result<CellResult> {
    let states = kernel.len();
    let mut r = rng::stream(seed, 1);
    let mut starts = vec![0usize];
    starts.extend((0..config.starts).map(|_| r.random_range(0..states)));
    let curves = starts
        .par_iter()
        .map(|&x| {
            let c = mixing_curve(kernel, x, &config.eps, config.t_max)?;
            Ok(StartCurve {
                start: x,
                t_mix: config.eps.iter().map(|&e| first_below(&c.samples, e)).collect(),
                samples: c.samples,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let periodic = curves.iter().any(|c| c.t_mix.iter().any(Option::is_none))
        && crate::period(kernel) > 1;
    let k = config.eps.len();
    let fold = |pick: fn(usize, usize) -> usize| -> Vec<Option<usize>> {
        (0..k)
            .map(|j| {
                curves
                    .iter()
                    .map(|c| c.t_mix[j])
                    .try_fold(None, |acc: Option<usize>, t| t.map(|t| Some(acc.map_or(t, |a| pick(a, t)))))
                    .flatten()
            })
            .collect()
    };
    let t_mix_worst = fold(usize::max);
    let t_mix_best = fold(usize::min);
    let t_mix_random = curves.get(1).unwrap_or(&curves[0]).t_mix.clone();
    let log_n = (n as f64).ln();
    let ratio = t_mix_worst
        .iter()
        .map(|t| t.map(|t| t as f64 / log_n))
        .collect();
    let (lo, hi) = {
        let mut idx: Vec<usize> = (0..k).collect();
        idx.sort_by(|&a, &b| config.eps[a].total_cmp(&config.eps[b]));
        (idx[0], idx[k - 1])
    };
    let width = match (t_mix_worst[lo], t_mix_worst[hi]) {
        (Some(a), Some(b)) if k > 1 && a > 0 => Some((a as f64 - b as f64) / a as f64),
        _ => None,
    };
    let srw_profile = srw.map(|d| {
        config
            .eps
            .iter()
            .map(|&e| log_n / h + phi_profile(d, e) * log_n.sqrt())
            .collect()
    });
    let sigma_1 = if config.sigma_iters > 0 {
        Some(singular_radius_t(kernel, 1, config.sigma_iters, seed)?.value)
    } else {
        None
    };
    Ok(CellResult {
        n,
        seed,
        states,
        eps: config.eps.clone(),
        t_mix_worst,
        t_mix_best,
        t_mix_random,
        prediction: log_n / h,
        ratio,
        width,
        srw_profile,
        sigma_1,
        periodic,
        curves,
    })
}

/// Runs every `(n, seed)` cell; cells and starts run in parallel and are
/// collected in input order, so the summary does not depend on the thread count.
pub fn cutoff_experiment(config: &CutoffConfig) -> Result<CutoffSummary> {
    config.validate()?;
    let (entropy, entropy_stderr, srw_degree) = entropy_of(config)?;
    let cells: Vec<(usize, u64)> = config
        .sizes
        .iter()
        .flat_map(|&n| config.seeds.iter().map(move |&s| (n, s)))
        .collect();
    let results = cells
        .par_iter()
        .map(|&(n, seed)| {
            let graph_seed = rng::child_seed(seed, n as u64);
            match &config.family {
                Family::Schreier { p } => {
                    let g = random_schreier(p.alphabet(), n, graph_seed)?;
                    let kernel = SchreierKernel::new(g, p)?;
                    run_cell(&kernel, config, n, graph_seed, entropy, srw_degree)
                }
                Family::Lift { colored } => {
                    let lift = random_lift(colored, n, graph_seed)?;
                    let kernel = LiftKernel::new(lift, colored)?;
                    run_cell(&kernel, config, n, graph_seed, entropy, srw_degree)
                }
            }
            .map(|mut c| {
                c.seed = seed;
                c
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CutoffSummary {
        entropy,
        entropy_stderr,
        srw_degree,
        cells: results,
    })
}
