use group_core::AnisotropyVector;
use rand::RngCore;
use rayon::prelude::*;

use crate::{GraphError, Result, SchreierGraph};

/// Vectors at least this long are processed in parallel chunks.
pub(crate) const PAR_THRESHOLD: usize = 1 << 14;
pub(crate) const CHUNK: usize = 1 << 12;

/// A finite Markov kernel applied without forming its matrix.
///
/// Every entry of an output vector is computed by the same sequential sum
/// regardless of chunking, so results are bit-identical across thread counts.
pub trait Kernel: Sync {
    /// Number of states.
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `out = P f`, i.e. `out(x) = sum_y P(x,y) f(y)`.
    fn apply(&self, f: &[f64], out: &mut [f64]);

    /// `out = mu P`, i.e. `out(y) = sum_x mu(x) P(x,y)`.
    fn apply_adjoint(&self, mu: &[f64], out: &mut [f64]);

    /// The invariant law the kernel is built to preserve.
    fn stationary(&self) -> Vec<f64>;

    /// `P(x, .)` as `(y, weight)` pairs; a target may repeat when edges are parallel.
    fn row(&self, x: usize) -> Vec<(usize, f64)>;

    /// One step of the chain from `x`.
    fn sample_step(&self, x: usize, rng: &mut dyn RngCore) -> usize;

    /// Detailed balance with respect to `stationary()`.
    fn is_reversible(&self) -> bool;
}

/// Fills `out` with `entry(i)` in parallel chunks when `out` is long.
pub(crate) fn fill<F: Fn(usize) -> f64 + Sync>(out: &mut [f64], entry: F) {
    if out.len() >= PAR_THRESHOLD {
        out.par_chunks_mut(CHUNK).enumerate().for_each(|(c, chunk)| {
            let base = c * CHUNK;
            for (k, o) in chunk.iter_mut().enumerate() {
                *o = entry(base + k);
            }
        });
    } else {
        for (k, o) in out.iter_mut().enumerate() {
            *o = entry(k);
        }
    }
}

/// Draws an index from `weights` (summing to one) with a single uniform.
pub(crate) fn sample_index(weights: &[f64], rng: &mut dyn RngCore) -> usize {
    let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            acc += w;
            last = i;
            if u < acc {
                return i;
            }
        }
    }
    last
}

/// `P_{n,p} = sum_i p_i S_i` on a Schreier graph.
#[derive(Clone, Debug)]
pub struct SchreierKernel {
    graph: SchreierGraph,
    p: AnisotropyVector,
    active: Vec<usize>,
}

impl SchreierKernel {
    pub fn new(graph: SchreierGraph, p: &AnisotropyVector) -> Result<Self> {
        if graph.alphabet() != p.alphabet() {
            return Err(GraphError::AlphabetMismatch(format!(
                "graph inv={} but p inv={}",
                graph.alphabet().involution_string(),
                p.alphabet().involution_string()
            )));
        }
        let active = p.support();
        Ok(SchreierKernel {
            graph,
            p: p.clone(),
            active,
        })
    }

    pub fn graph(&self) -> &SchreierGraph {
        &self.graph
    }

    pub fn weights(&self) -> &AnisotropyVector {
        &self.p
    }
}

impl Kernel for SchreierKernel {
    fn len(&self) -> usize {
        self.graph.n()
    }

    fn apply(&self, f: &[f64], out: &mut [f64]) {
        let g = &self.graph;
        fill(out, |x| {
            self.active
                .iter()
                .map(|&i| self.p.p(i) * f[g.step(i, x)])
                .sum()
        });
    }

    fn apply_adjoint(&self, mu: &[f64], out: &mut [f64]) {
        let g = &self.graph;
        fill(out, |y| {
            self.active
                .iter()
                .map(|&i| self.p.p(i) * mu[g.act(i, y)])
                .sum()
        });
    }

    fn stationary(&self) -> Vec<f64> {
        let n = self.graph.n();
        vec![1.0 / n as f64; n]
    }

    fn row(&self, x: usize) -> Vec<(usize, f64)> {
        self.active
            .iter()
            .map(|&i| (self.graph.step(i, x), self.p.p(i)))
            .collect()
    }

    fn sample_step(&self, x: usize, rng: &mut dyn RngCore) -> usize {
        let i = sample_index(self.p.as_slice(), rng);
        self.graph.step(i, x)
    }

    fn is_reversible(&self) -> bool {
        self.p.is_reversible()
    }
}
