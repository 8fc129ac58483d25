use schreier_graphs::Kernel;
use serde::Serialize;

use crate::{MixError, Result};

/// Law of the walk at a given time.
#[derive(Clone, Debug, PartialEq)]
pub struct DistributionVector {
    pub masses: Vec<f64>,
    pub time: usize,
}

impl DistributionVector {
    pub fn dirac(n: usize, x: usize) -> Self {
        let mut masses = vec![0.0; n];
        masses[x] = 1.0;
        DistributionVector { masses, time: 0 }
    }

    pub fn total(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// One step forward, reusing `scratch` as the output buffer.
    pub fn advance<K: Kernel + ?Sized>(&mut self, kernel: &K, scratch: &mut Vec<f64>) {
        scratch.resize(self.masses.len(), 0.0);
        kernel.apply_adjoint(&self.masses, scratch);
        std::mem::swap(&mut self.masses, scratch);
        self.time += 1;
    }
}

fn check_state<K: Kernel + ?Sized>(kernel: &K, x: usize) -> Result<()> {
    if x >= kernel.len() {
        return Err(MixError::StateOutOfRange { x, n: kernel.len() });
    }
    Ok(())
}

/// `delta_{x0} P^t` by `t` successive kernel applications.
pub fn propagate<K: Kernel + ?Sized>(kernel: &K, x0: usize, t: usize) -> Result<DistributionVector> {
    check_state(kernel, x0)?;
    let mut dist = DistributionVector::dirac(kernel.len(), x0);
    let mut scratch = Vec::new();
    for _ in 0..t {
        dist.advance(kernel, &mut scratch);
    }
    Ok(dist)
}

/// `max_A (mu(A) - pi(A)) = (1/2) sum |mu - pi|`.
pub fn tv_distance(mu: &[f64], pi: &[f64]) -> f64 {
    0.5 * mu.iter().zip(pi).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Period of the support graph of an irreducible kernel (1 when aperiodic).
///
/// Uses BFS levels from state 0: the period is the gcd of
/// `level(x) + 1 - level(y)` over all edges `x -> y`.
pub fn period<K: Kernel + ?Sized>(kernel: &K) -> usize {
    let n = kernel.len();
    if n == 0 {
        return 1;
    }
    let mut level = vec![usize::MAX; n];
    level[0] = 0;
    let mut queue = std::collections::VecDeque::from([0usize]);
    let mut g = 0usize;
    while let Some(x) = queue.pop_front() {
        for (y, w) in kernel.row(x) {
            if w <= 0.0 {
                continue;
            }
            if level[y] == usize::MAX {
                level[y] = level[x] + 1;
                queue.push_back(y);
            } else {
                g = gcd(g, (level[x] + 1).abs_diff(level[y]));
            }
        }
    }
    g.max(1)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `d(x, t)` for `t = 0, 1, ...` and the first time each threshold is crossed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixingCurve {
    pub start: usize,
    /// `samples[t] = d(x, t)`.
    pub samples: Vec<f64>,
    /// `(eps, T_mix(x, eps))`, `None` when not reached by the horizon.
    pub mix_times: Vec<(f64, Option<usize>)>,
    pub periodic: bool,
}

impl MixingCurve {
    pub fn t_mix(&self, eps: f64) -> Option<usize> {
        first_below(&self.samples, eps)
    }
}

pub(crate) fn first_below(samples: &[f64], eps: f64) -> Option<usize> {
    samples.iter().position(|&d| d < eps)
}

pub(crate) fn check_eps(eps: &[f64]) -> Result<()> {
    match eps.iter().find(|e| !(**e > 0.0 && **e < 1.0)) {
        Some(&e) => Err(MixError::InvalidEpsilon(e)),
        None => Ok(()),
    }
}

/// Propagates from `x` until the distance drops below every `eps` or `t_max` is reached.
pub fn mixing_curve<K: Kernel + ?Sized>(
    kernel: &K,
    x: usize,
    eps: &[f64],
    t_max: usize,
) -> Result<MixingCurve> {
    check_state(kernel, x)?;
    check_eps(eps)?;
    let pi = kernel.stationary();
    let target = eps.iter().copied().fold(1.0, f64::min);
    let mut dist = DistributionVector::dirac(kernel.len(), x);
    let mut scratch = Vec::new();
    let mut samples = vec![tv_distance(&dist.masses, &pi)];
    while dist.time < t_max && *samples.last().unwrap() >= target {
        dist.advance(kernel, &mut scratch);
        samples.push(tv_distance(&dist.masses, &pi));
    }
    let mix_times: Vec<(f64, Option<usize>)> = eps.iter().map(|&e| (e, first_below(&samples, e))).collect();
    let periodic = mix_times.iter().any(|m| m.1.is_none()) && period(kernel) > 1;
    Ok(MixingCurve {
        start: x,
        samples,
        mix_times,
        periodic,
    })
}

/// First `t <= t_max` with `d(x, t) < eps`.
pub fn mixing_time<K: Kernel + ?Sized>(kernel: &K, x: usize, eps: f64, t_max: usize) -> Result<usize> {
    let curve = mixing_curve(kernel, x, &[eps], t_max)?;
    curve.t_mix(eps).ok_or_else(|| MixError::NotMixedByHorizon {
        t_max,
        distance: *curve.samples.last().unwrap(),
        periodic: period(kernel) > 1,
    })
}
