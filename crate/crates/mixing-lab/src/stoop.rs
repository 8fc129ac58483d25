use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::{tv_distance, DenseChain, MixError, Result};

/// Stopping times with an exactly computable law of `X_T`.
#[derive(Clone, Debug, PartialEq)]
pub enum StopSpec {
    /// `T = inf { t >= 0 : X_t not in S }` for the indicator `S`.
    Exit(Vec<bool>),
    /// `T = m`.
    Deterministic(usize),
}

/// Both sides of the stopping-time bound at one `(t, s)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StoopReport {
    pub t: usize,
    pub s: usize,
    /// `||P^{t+s}(x,.) - pi||_TV`.
    pub lhs: f64,
    /// `||nu - pi||_TV` with `nu` the law of `X_T`.
    pub nu_tv: f64,
    /// `P_x[T > t]`.
    pub tail: f64,
    /// `sigma(s)`.
    pub sigma_s: f64,
    /// `nu_tv + tail + 2 (1 - sigma(s))^{-1/3} sigma(s)^{2s/3}`.
    pub rhs: f64,
    pub holds: bool,
    /// `nu_tv + tail + 3 rho^{2s/3}` with `rho = sigma(1)`, for reversible chains.
    pub rhs_reversible: Option<f64>,
    pub holds_reversible: Option<bool>,
}

/// Law of `X_T` and `P_x[T > t]` for `t = 0..=t_max`.
fn stopping_law(chain: &DenseChain, x: usize, stop: &StopSpec, t_max: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = chain.n();
    match stop {
        StopSpec::Deterministic(m) => {
            let row = chain.power(*m).row(x).iter().copied().collect();
            let tails = (0..=t_max).map(|t| if *m > t { 1.0 } else { 0.0 }).collect();
            Ok((row, tails))
        }
        StopSpec::Exit(inside) => {
            if inside.len() != n {
                return Err(MixError::InvalidChain("exit set has the wrong length".into()));
            }
            if inside.iter().all(|&b| b) {
                return Err(MixError::StopSpecUnbounded);
            }
            if !inside[x] {
                let mut nu = vec![0.0; n];
                nu[x] = 1.0;
                return Ok((nu, vec![0.0; t_max + 1]));
            }
            let idx: Vec<usize> = (0..n).filter(|&y| inside[y]).collect();
            let m = idx.len();
            let local = |y: usize| idx.binary_search(&y).ok();
            // occupation g solves (I - P_SS)^T g = delta_x
            let mut a = DMatrix::<f64>::identity(m, m);
            for (i, &u) in idx.iter().enumerate() {
                for (j, &v) in idx.iter().enumerate() {
                    a[(j, i)] -= chain.p[(u, v)];
                }
            }
            let mut rhs = DVector::<f64>::zeros(m);
            rhs[local(x).unwrap()] = 1.0;
            let g = a.lu().solve(&rhs).ok_or(MixError::StopSpecUnbounded)?;
            let mut nu = vec![0.0; n];
            for (i, &u) in idx.iter().enumerate() {
                for y in (0..n).filter(|&y| !inside[y]) {
                    nu[y] += g[i] * chain.p[(u, y)];
                }
            }
            // killed propagation: mass still inside after t steps is P[T > t]
            let mut alive = vec![0.0; n];
            alive[x] = 1.0;
            let mut tails = vec![1.0];
            for _ in 0..t_max {
                let mut next = vec![0.0; n];
                for u in (0..n).filter(|&u| alive[u] != 0.0) {
                    for &v in &idx {
                        next[v] += alive[u] * chain.p[(u, v)];
                    }
                }
                alive = next;
                tails.push(alive.iter().sum());
            }
            Ok((nu, tails))
        }
    }
}

/// Checks `||P^{t+s}(x,.) - pi|| <= ||nu - pi|| + P[T > t] + 2 (1-sigma(s))^{-1/3} sigma(s)^{2s/3}`
/// and, on reversible chains, the variant with `3 rho^{2s/3}`, all by dense computation.
pub fn stopping_bound_check(
    chain: &DenseChain,
    x: usize,
    stop: &StopSpec,
    t: usize,
    s: usize,
) -> Result<StoopReport> {
    let n = chain.n();
    if x >= n {
        return Err(MixError::StateOutOfRange { x, n });
    }
    let (nu, tails) = stopping_law(chain, x, stop, t)?;
    let lhs_row: Vec<f64> = chain.power(t + s).row(x).iter().copied().collect();
    let lhs = tv_distance(&lhs_row, &chain.pi);
    let nu_tv = tv_distance(&nu, &chain.pi);
    let tail = tails[t];
    let sigma_s = chain.sigma(s);
    let tail_term = if sigma_s >= 1.0 {
        f64::INFINITY
    } else {
        2.0 * (1.0 - sigma_s).powf(-1.0 / 3.0) * sigma_s.powf(2.0 * s as f64 / 3.0)
    };
    let rhs = nu_tv + tail + tail_term;
    let slack = 1e-12;
    let (rhs_reversible, holds_reversible) = if chain.is_reversible() {
        let rho = chain.sigma(1);
        let r = nu_tv + tail + 3.0 * rho.powf(2.0 * s as f64 / 3.0);
        (Some(r), Some(lhs <= r + slack))
    } else {
        (None, None)
    };
    Ok(StoopReport {
        t,
        s,
        lhs,
        nu_tv,
        tail,
        sigma_s,
        rhs,
        holds: lhs <= rhs + slack,
        rhs_reversible,
        holds_reversible,
    })
}
