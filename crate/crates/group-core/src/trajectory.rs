use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;

use crate::{rng, AnisotropyVector, ReducedWord};

/// A sampled walk `X_t = xi_t ... xi_1` started at `e`.
#[derive(Clone, Debug)]
pub struct Trajectory {
    p: AnisotropyVector,
    steps: Vec<u8>,
    seed: u64,
}

impl Trajectory {
    /// Replays a given step sequence (0-based letters).
    pub fn from_steps(p: &AnisotropyVector, steps: &[usize], seed: u64) -> Self {
        Trajectory {
            p: p.clone(),
            steps: steps.iter().map(|&l| l as u8).collect(),
            seed,
        }
    }

    pub fn steps(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.steps.iter().map(|&l| l as usize)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn horizon(&self) -> usize {
        self.steps.len()
    }

    /// Position after `t` steps.
    pub fn position(&self, t: usize) -> ReducedWord {
        let mut w = ReducedWord::identity(self.p.alphabet());
        for &l in &self.steps[..t] {
            w.left_mul(l as usize);
        }
        w
    }

    pub fn final_position(&self) -> ReducedWord {
        self.position(self.steps.len())
    }

    /// `|X_t|` for `t = 0..=horizon`.
    pub fn distances(&self) -> Vec<usize> {
        let mut w = ReducedWord::identity(self.p.alphabet());
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        out.push(0);
        for &l in &self.steps {
            w.left_mul(l as usize);
            out.push(w.len());
        }
        out
    }
}

/// Draws letters with law `p`.
#[derive(Clone, Debug)]
pub struct LetterSampler(WeightedIndex<f64>);

impl LetterSampler {
    pub fn new(p: &AnisotropyVector) -> Self {
        LetterSampler(WeightedIndex::new(p.as_slice()).expect("validated probability vector"))
    }

    #[inline]
    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.0.sample(rng)
    }
}

pub fn sample_trajectory(p: &AnisotropyVector, t: usize, seed: u64) -> Trajectory {
    let sampler = LetterSampler::new(p);
    let mut r = rng::stream(seed, 0);
    let steps = (0..t).map(|_| sampler.sample(&mut r) as u8).collect();
    Trajectory {
        p: p.clone(),
        steps,
        seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Alphabet;

    #[test]
    fn trivial_cases() {
        let a = Alphabet::identity(3).unwrap();
        let u = AnisotropyVector::uniform(&a);
        assert!(sample_trajectory(&u, 0, 5).final_position().is_identity());
        // g1 is an involution: the forced path g1, g1 returns to e
        assert!(Trajectory::from_steps(&u, &[0, 0], 0).final_position().is_identity());
        let b = Alphabet::paired(4).unwrap();
        let q = AnisotropyVector::new(&b, vec![0.5, 0.0, 0.5, 0.0]).unwrap();
        // no inverse letters are ever drawn, so nothing cancels
        let tr = sample_trajectory(&q, 50, 1);
        assert_eq!(tr.final_position().len(), 50);
    }
}
