use num::{BigInt, BigRational, One, Zero};
use schreier_graphs::{Kernel, SchreierGraph, SchreierKernel};

use crate::{DistributionVector, MixError, Result};

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// Coefficients (constant term first) of `p_0, ..., p_k`, exactly.
///
/// `p_0 = 1`, `p_1 = x`, `p_{j+1} = (d/(d-1)) x p_j - (1/(d-1)) p_{j-1}`,
/// so that `Q_j = p_j(P)` is the `j`-step non-backtracking operator of a
/// `d`-regular graph with simple random walk `P`.
pub fn geronimus(d: usize, k: usize) -> Vec<Vec<BigRational>> {
    let d = d as i64;
    let mut out: Vec<Vec<BigRational>> = vec![vec![BigRational::one()]];
    if k >= 1 {
        out.push(vec![BigRational::zero(), BigRational::one()]);
    }
    let a = ratio(d, d - 1);
    let b = ratio(1, d - 1);
    for j in 1..k {
        let mut next = vec![BigRational::zero(); j + 2];
        for (m, c) in out[j].iter().enumerate() {
            next[m + 1] += &a * c;
        }
        for (m, c) in out[j - 1].iter().enumerate() {
            next[m] -= &b * c;
        }
        out.push(next);
    }
    out
}

/// Evaluates exact coefficients at a rational point.
pub fn geronimus_eval(coeffs: &[BigRational], x: &BigRational) -> BigRational {
    coeffs
        .iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// Chebyshev polynomial of the second kind by its three-term recursion.
pub fn chebyshev_u(k: usize, x: f64) -> f64 {
    let (mut a, mut b) = (1.0, 2.0 * x);
    if k == 0 {
        return a;
    }
    for _ in 1..k {
        let c = 2.0 * x * b - a;
        a = b;
        b = c;
    }
    b
}

/// `(d-1)^{-k/2} U_k(1 + eta)` through the closed forms: `sinh((k+1)t)/sinh t`
/// with `cosh t = 1 + eta` when `eta > 0`, and `k + 1` at `eta = 0`.
pub fn nb_spectral_radius_bound(d: usize, k: usize, eta: f64) -> f64 {
    let scale = ((d - 1) as f64).powf(-(k as f64) / 2.0);
    let x = 1.0 + eta.max(0.0);
    let u = if x > 1.0 {
        let t = x.acosh();
        ((k as f64 + 1.0) * t).sinh() / t.sinh()
    } else {
        k as f64 + 1.0
    };
    scale * u
}

fn uniform_check(kernel: &SchreierKernel) -> Result<()> {
    if !kernel.weights().is_uniform() {
        return Err(MixError::NotUniformWeights);
    }
    Ok(())
}

/// `Q_k(x, .)` by the vector form of the Geronimus recursion, matrix-free.
pub fn nonbacktracking_dist(kernel: &SchreierKernel, x: usize, k: usize) -> Result<DistributionVector> {
    uniform_check(kernel)?;
    let n = kernel.len();
    if x >= n {
        return Err(MixError::StateOutOfRange { x, n });
    }
    let d = kernel.graph().alphabet().d() as f64;
    let mut prev = vec![0.0; n];
    prev[x] = 1.0;
    if k == 0 {
        return Ok(DistributionVector { masses: prev, time: 0 });
    }
    let mut cur = vec![0.0; n];
    kernel.apply_adjoint(&prev, &mut cur);
    let mut tmp = vec![0.0; n];
    for _ in 1..k {
        kernel.apply_adjoint(&cur, &mut tmp);
        for (t, &p) in tmp.iter_mut().zip(&prev) {
            *t = d / (d - 1.0) * *t - p / (d - 1.0);
        }
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut tmp);
    }
    Ok(DistributionVector { masses: cur, time: k })
}

/// `Q_k(x, .)` for the simple random walk in exact rational arithmetic.
pub fn nonbacktracking_dist_exact(graph: &SchreierGraph, x: usize, k: usize) -> Vec<BigRational> {
    let n = graph.n();
    let d = graph.alphabet().d();
    let inv_d = ratio(1, d as i64);
    let step = |v: &[BigRational]| -> Vec<BigRational> {
        // (v P)(y) = (1/d) sum_i v(alpha_i(y))
        (0..n)
            .map(|y| {
                let s: BigRational = (0..d).map(|i| v[graph.act(i, y)].clone()).sum();
                s * &inv_d
            })
            .collect()
    };
    let mut prev = vec![BigRational::zero(); n];
    prev[x] = BigRational::one();
    if k == 0 {
        return prev;
    }
    let mut cur = step(&prev);
    let a = ratio(d as i64, d as i64 - 1);
    let b = ratio(1, d as i64 - 1);
    for _ in 1..k {
        let next: Vec<BigRational> = step(&cur)
            .into_iter()
            .zip(&prev)
            .map(|(s, p)| &a * s - &b * p)
            .collect();
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Number of non-backtracking letter paths `i_1 ... i_k` (`i_{j+1} != i_j*`)
/// from `x` to each vertex, by direct enumeration.
pub fn brute_force_nb_counts(graph: &SchreierGraph, x: usize, k: usize) -> Vec<u64> {
    let n = graph.n();
    let d = graph.alphabet().d();
    let mut counts = vec![0u64; n];
    if k == 0 {
        counts[x] = 1;
        return counts;
    }
    let mut stack: Vec<(usize, usize, usize)> = (0..d).map(|i| (graph.step(i, x), i, 1)).collect();
    while let Some((y, last, len)) = stack.pop() {
        if len == k {
            counts[y] += 1;
            continue;
        }
        let back = graph.alphabet().star(last);
        for i in (0..d).filter(|&i| i != back) {
            stack.push((graph.step(i, y), i, len + 1));
        }
    }
    counts
}
