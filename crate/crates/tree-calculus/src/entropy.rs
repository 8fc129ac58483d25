use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::BuildHasherDefault;

use group_core::{rng, AnisotropyVector, LetterSampler};
use rayon::prelude::*;

use crate::{harmonic_weights, rho, PackedWord, Result, TreeError};

/// Default cap on the number of words held by the exact distribution.
pub const DEFAULT_DP_BUDGET: usize = 2_000_000;

// fixed hasher keys keep iteration order, hence float sums, reproducible
type WordMap = HashMap<PackedWord, f64, BuildHasherDefault<DefaultHasher>>;

/// Exact law of `X_t` over reduced words, advanced one step at a time.
#[derive(Clone, Debug)]
pub struct DpWalk {
    p: Vec<f64>,
    star: Vec<usize>,
    t: usize,
    budget: usize,
    dist: WordMap,
}

impl DpWalk {
    pub fn new(p: &AnisotropyVector, budget: usize) -> Result<Self> {
        if p.d() > 15 {
            return Err(TreeError::HorizonTooLarge {
                t: 0,
                words: f64::INFINITY,
            });
        }
        let mut dist = WordMap::default();
        dist.insert(PackedWord::E, 1.0);
        Ok(DpWalk {
            p: p.as_slice().to_vec(),
            star: p.alphabet().star_table().to_vec(),
            t: 0,
            budget,
            dist,
        })
    }

    pub fn time(&self) -> usize {
        self.t
    }

    pub fn step(&mut self) -> Result<()> {
        if self.t >= PackedWord::MAX_LEN {
            return Err(TreeError::HorizonTooLarge {
                t: self.t + 1,
                words: f64::INFINITY,
            });
        }
        let mut next = WordMap::with_capacity_and_hasher(self.dist.len() * 2, Default::default());
        for (&w, &m) in &self.dist {
            for (i, &pi) in self.p.iter().enumerate() {
                if pi > 0.0 {
                    *next.entry(w.left_mul(i, &self.star)).or_insert(0.0) += m * pi;
                }
            }
            if next.len() > self.budget {
                return Err(TreeError::HorizonTooLarge {
                    t: self.t + 1,
                    words: next.len() as f64,
                });
            }
        }
        self.dist = next;
        self.t += 1;
        Ok(())
    }

    pub fn prob(&self, w: PackedWord) -> f64 {
        self.dist.get(&w).copied().unwrap_or(0.0)
    }

    pub fn support_size(&self) -> usize {
        self.dist.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (PackedWord, f64)> + '_ {
        self.dist.iter().map(|(&w, &m)| (w, m))
    }

    pub fn shannon(&self) -> f64 {
        self.dist
            .values()
            .filter(|&&m| m > 0.0)
            .map(|&m| -m * m.ln())
            .sum()
    }

    /// `||P^t delta_e||_2`.
    pub fn l2_norm(&self) -> f64 {
        self.dist.values().map(|m| m * m).sum::<f64>().sqrt()
    }

    pub fn mass(&self) -> f64 {
        self.dist.values().sum()
    }
}

#[derive(Clone, Debug)]
pub struct DpEntropy {
    /// `H(0), ..., H(t)`.
    pub h: Vec<f64>,
    /// `H(s) - H(s-1)` for `s = 1..=t`.
    pub increments: Vec<f64>,
    pub final_words: usize,
}

impl DpEntropy {
    pub fn last_increment(&self) -> f64 {
        *self.increments.last().unwrap_or(&0.0)
    }
}

/// Largest `t` for which the number of reduced words over the support of `p`
/// with length at most `t` and the parity of `t` stays within `budget`.
///
/// Every step changes the word length by one, so this count bounds the
/// support of `X_t` and `entropy_dp(p, t, budget)` cannot run out of room.
pub fn default_dp_horizon(p: &AnisotropyVector, budget: usize) -> usize {
    let star = p.alphabet().star_table();
    let support: Vec<usize> = p.support();
    // ending[i]: reduced words of the current length ending in letter i
    let mut ending: Vec<f64> = (0..p.d()).map(|i| if support.contains(&i) { 1.0 } else { 0.0 }).collect();
    // totals[l]: reduced words of length exactly l
    let mut totals = vec![1.0, ending.iter().sum::<f64>()];
    for _ in 2..=PackedWord::MAX_LEN {
        let next: Vec<f64> = (0..p.d())
            .map(|j| {
                if !support.contains(&j) {
                    return 0.0;
                }
                (0..p.d()).filter(|&i| j != star[i]).map(|i| ending[i]).sum()
            })
            .collect();
        ending = next;
        totals.push(ending.iter().sum());
    }
    let mut best = 0;
    for t in 1..=PackedWord::MAX_LEN {
        let words: f64 = (0..=t).rev().step_by(2).map(|l| totals[l]).sum();
        if words > budget as f64 {
            break;
        }
        best = t;
    }
    best
}

/// Shannon entropies of the exact laws of `X_1, ..., X_t`.
pub fn entropy_dp(p: &AnisotropyVector, t: usize, budget: usize) -> Result<DpEntropy> {
    let mut dp = DpWalk::new(p, budget)?;
    let mut h = vec![0.0];
    for _ in 0..t {
        dp.step()?;
        h.push(dp.shannon());
    }
    let increments = h.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(DpEntropy {
        h,
        increments,
        final_words: dp.support_size(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreenEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub walks: usize,
    pub t: usize,
}

/// Monte Carlo mean of `-(1/t) sum log a_i` over the letters of `X_t`.
///
/// Walk `w` uses stream `w` of the root seed, so the estimate does not depend
/// on the thread count.
pub fn entropy_green(p: &AnisotropyVector, walks: usize, t: usize, seed: u64) -> Result<GreenEstimate> {
    let (a, _) = harmonic_weights(p)?;
    let neg_log_a: Vec<f64> = a.iter().map(|x| -x.ln()).collect();
    let star = p.alphabet().star_table().to_vec();
    let sampler = LetterSampler::new(p);
    let samples: Vec<f64> = (0..walks)
        .into_par_iter()
        .map(|w| {
            let mut r = rng::stream(seed, w as u64);
            let mut stack: Vec<u8> = Vec::with_capacity(t);
            for _ in 0..t {
                let i = sampler.sample(&mut r);
                match stack.last() {
                    Some(&h) if star[h as usize] == i => {
                        stack.pop();
                    }
                    _ => stack.push(i as u8),
                }
            }
            let s: f64 = stack.iter().map(|&l| neg_log_a[l as usize]).sum();
            s / t.max(1) as f64
        })
        .collect();
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = if samples.len() > 1 {
        samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Ok(GreenEstimate {
        mean,
        stderr: (var / n).sqrt(),
        walks,
        t,
    })
}

/// Exact expectation of the Monte Carlo statistic of `entropy_green` at horizon `t`.
pub fn exact_green_statistic(p: &AnisotropyVector, t: usize, budget: usize) -> Result<f64> {
    let (a, _) = harmonic_weights(p)?;
    let mut dp = DpWalk::new(p, budget)?;
    for _ in 0..t {
        dp.step()?;
    }
    let mut acc = 0.0;
    for (w, m) in dp.iter() {
        let s: f64 = w.letters().map(|l| -a[l].ln()).sum();
        acc += m * s;
    }
    Ok(acc / t.max(1) as f64)
}

#[derive(Clone, Copy, Debug)]
pub struct HaagerupBounds {
    pub lower: f64,
    pub upper: f64,
    /// Exact `||P^t delta_e||_2` when the distribution fits the budget.
    pub exact_l2: Option<f64>,
    /// `rho^t`, which dominates `exact_l2`.
    pub l2_bound: f64,
}

/// `rho <= sigma(t) <= min(1, (t+1)^{2/t} rho)`.
pub fn haagerup_bounds(p: &AnisotropyVector, t: usize, budget: usize) -> Result<HaagerupBounds> {
    let r = rho(p)?.rho;
    let t = t.max(1);
    let upper = ((t as f64 + 1.0).powf(2.0 / t as f64) * r).min(1.0);
    let exact_l2 = (|| {
        let mut dp = DpWalk::new(p, budget).ok()?;
        for _ in 0..t {
            dp.step().ok()?;
        }
        Some(dp.l2_norm())
    })();
    Ok(HaagerupBounds {
        lower: r,
        upper,
        exact_l2,
        l2_bound: r.powi(t as i32),
    })
}

#[derive(Clone, Copy, Debug)]
pub struct SpectralSummary {
    pub rho_prime: f64,
    pub rho: f64,
    pub entropy: f64,
    pub stderr: f64,
    /// `-2 log rho`, a lower bound for the entropy.
    pub avez_bound: f64,
}

impl SpectralSummary {
    pub fn avez_holds(&self) -> bool {
        self.entropy >= self.avez_bound - 3.0 * self.stderr
    }
}

pub fn spectral_summary(p: &AnisotropyVector, walks: usize, t: usize, seed: u64) -> Result<SpectralSummary> {
    let r = rho(p)?;
    let h = entropy_green(p, walks, t, seed)?;
    Ok(SpectralSummary {
        rho_prime: r.rho_prime,
        rho: r.rho,
        entropy: h.mean,
        stderr: h.stderr,
        avez_bound: -2.0 * r.rho.ln(),
    })
}
