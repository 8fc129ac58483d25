use group_core::rng;
use rand::Rng;
use schreier_graphs::Kernel;
use serde::Serialize;

use crate::{MixError, Result};

/// Power-iteration estimate of `sigma(t) = ||(P^t)_{|1-perp}||^{1/t}` in `l2(pi)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SingularRadius {
    pub t: usize,
    /// `sigma(t)`.
    pub value: f64,
    /// `||(P^t)_{|1-perp}||`, i.e. `value^t`.
    pub norm: f64,
    pub iterations: usize,
    /// The last two Rayleigh quotients agree to `1e-9` (relative).
    pub converged: bool,
    pub last_quotients: (f64, f64),
}

impl SingularRadius {
    /// True when the iteration ran out before the certificate was met.
    pub fn stalled(&self) -> bool {
        !self.converged
    }
}

fn dot_pi(a: &[f64], b: &[f64], pi: &[f64]) -> f64 {
    a.iter().zip(b).zip(pi).map(|((x, y), w)| x * y * w).sum()
}

fn center(f: &mut [f64], pi: &[f64]) {
    let m: f64 = f.iter().zip(pi).map(|(x, w)| x * w).sum();
    f.iter_mut().for_each(|x| *x -= m);
}

/// Power iteration on `f -> (P^t)^* P^t f` with `f` re-centered against constants at
/// every step; the Rayleigh quotients increase to `||(P^t)_{|1-perp}||^2`.
pub fn singular_radius_t<K: Kernel + ?Sized>(
    kernel: &K,
    t: usize,
    iters: usize,
    seed: u64,
) -> Result<SingularRadius> {
    if t == 0 {
        return Err(MixError::InvalidConfig("singular radius needs t >= 1".into()));
    }
    let n = kernel.len();
    let pi = kernel.stationary();
    let mut r = rng::stream(seed, 0);
    let mut f: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
    center(&mut f, &pi);
    let norm = dot_pi(&f, &f, &pi).sqrt();
    if norm == 0.0 || n < 2 {
        return Ok(SingularRadius {
            t,
            value: 0.0,
            norm: 0.0,
            iterations: 0,
            converged: true,
            last_quotients: (0.0, 0.0),
        });
    }
    f.iter_mut().for_each(|x| *x /= norm);
    let mut g = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    let mut weighted = vec![0.0; n];
    let (mut prev, mut last) = (f64::NAN, 0.0);
    let mut converged = false;
    let mut it = 0;
    while it < iters {
        it += 1;
        // g = P^t f
        g.copy_from_slice(&f);
        for _ in 0..t {
            kernel.apply(&g, &mut tmp);
            std::mem::swap(&mut g, &mut tmp);
        }
        let q = dot_pi(&g, &g, &pi);
        prev = last;
        last = q;
        if it > 1 && (last - prev).abs() <= 1e-9 * last.max(f64::MIN_POSITIVE) {
            converged = true;
            break;
        }
        if q == 0.0 {
            converged = true;
            break;
        }
        // f = (P^*)^t g with P^* g = (pi g) P / pi
        for _ in 0..t {
            for ((w, &gx), &px) in weighted.iter_mut().zip(&g).zip(&pi) {
                *w = gx * px;
            }
            kernel.apply_adjoint(&weighted, &mut tmp);
            for ((gx, &tx), &px) in g.iter_mut().zip(&tmp).zip(&pi) {
                *gx = tx / px;
            }
        }
        center(&mut g, &pi);
        let nrm = dot_pi(&g, &g, &pi).sqrt();
        for (fx, gx) in f.iter_mut().zip(&g) {
            *fx = gx / nrm;
        }
    }
    let norm = last.sqrt();
    Ok(SingularRadius {
        t,
        value: norm.powf(1.0 / t as f64),
        norm,
        iterations: it,
        converged,
        last_quotients: (prev, last),
    })
}
