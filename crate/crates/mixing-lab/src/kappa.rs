use group_core::{rng, AnisotropyVector};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use schreier_graphs::{Kernel, SchreierGraph, SchreierKernel};
use serde::Serialize;
use tree_calculus::{backbone_kernel, build_stopping_set, domination_check, transform_p_to_pprime};

use crate::{tv_distance, DenseChain, MixError, Result, DENSE_LIMIT};

/// Outcome of the randomized search for vectors violating `kappa_u(A) <= c sigma(B) + c/u`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KappaReport {
    pub c: f64,
    pub u: f64,
    /// `||B_{|1-perp}||`.
    pub sigma_b: f64,
    /// `c sigma(B) + c/u`.
    pub bound: f64,
    /// Largest `||Af|| / ||f||` over all admissible test vectors.
    pub max_ratio: f64,
    /// Random test vectors drawn, all admissible.
    pub trials: usize,
    /// Coordinate vectors and rows of `A` tested in addition.
    pub structured: usize,
    pub violations: usize,
}

impl KappaReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

fn ratio(a: &DMatrix<f64>, f: &DVector<f64>) -> f64 {
    (a * f).norm() / f.norm()
}

fn admissible(f: &DVector<f64>, u: f64) -> bool {
    let n = f.len() as f64;
    f.norm() >= u / n.sqrt() * f.lp_norm(1) * (1.0 - 1e-12)
}

/// Randomized falsification of `kappa_u(A) <= c sigma(B) + c/u`.
///
/// Checks `|A| <= c B` entrywise and that `B` is doubly stochastic first.
/// Test vectors are random Gaussian-like vectors on random supports of size at
/// most `n / u^2` (which forces `||f||_2 >= (u/sqrt n) ||f||_1`), every
/// coordinate vector, and every admissible row of `A`.
pub fn kappa_bound_check(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    c: f64,
    u: f64,
    trials: usize,
    seed: u64,
) -> Result<KappaReport> {
    let n = a.nrows();
    if a.shape() != (n, n) || b.shape() != (n, n) || n == 0 {
        return Err(MixError::InvalidChain("A and B must be square of the same size".into()));
    }
    if !(1.0..=(n as f64).sqrt() + 1e-12).contains(&u) {
        return Err(MixError::InvalidConfig(format!("u = {u} outside [1, sqrt(n)]")));
    }
    for x in 0..n {
        let (r, col) = (b.row(x).sum(), b.column(x).sum());
        if (r - 1.0).abs() > 1e-9 || (col - 1.0).abs() > 1e-9 {
            return Err(MixError::NotBistochastic(format!(
                "row {x} sums to {r}, column {x} sums to {col}"
            )));
        }
    }
    for x in 0..n {
        for y in 0..n {
            let (av, cb) = (a[(x, y)].abs(), c * b[(x, y)]);
            if av > cb * (1.0 + 1e-9) + 1e-15 {
                return Err(MixError::DominationViolated { x, y, a: av, cb });
            }
        }
    }
    let sigma_b = (b - DMatrix::from_element(n, n, 1.0 / n as f64))
        .singular_values()
        .max();
    let bound = c * sigma_b + c / u;
    let max_support = ((n as f64 / (u * u)).floor() as usize).clamp(1, n);
    let mut r = rng::stream(seed, 0);
    let mut max_ratio: f64 = 0.0;
    let mut violations = 0;
    let check = |f: &DVector<f64>, max_ratio: &mut f64| {
        let q = ratio(a, f);
        *max_ratio = max_ratio.max(q);
        usize::from(q > bound * (1.0 + 1e-12))
    };
    let mut order: Vec<usize> = (0..n).collect();
    for _ in 0..trials {
        let m = r.random_range(1..=max_support);
        for k in 0..m {
            let j = r.random_range(k..n);
            order.swap(k, j);
        }
        let mut f = DVector::<f64>::zeros(n);
        for &i in &order[..m] {
            // sum of uniforms: cheap, symmetric, light-tailed
            f[i] = (0..4).map(|_| r.random_range(-1.0..1.0)).sum::<f64>();
        }
        if f.norm() == 0.0 {
            f[order[0]] = 1.0;
        }
        debug_assert!(admissible(&f, u));
        violations += check(&f, &mut max_ratio);
    }
    let mut structured = 0;
    for x in 0..n {
        let mut e = DVector::<f64>::zeros(n);
        e[x] = 1.0;
        violations += check(&e, &mut max_ratio);
        let row = a.row(x).transpose();
        if row.norm() > 0.0 && admissible(&row, u) {
            violations += check(&row, &mut max_ratio);
            structured += 1;
        }
        structured += 1;
    }
    Ok(KappaReport {
        c,
        u,
        sigma_b,
        bound,
        max_ratio,
        trials,
        structured,
        violations,
    })
}

/// The backbone operator on a finite graph and its dominating bistochastic matrix.
#[derive(Clone, Debug)]
pub struct BackbonePipeline {
    pub k: u64,
    pub horizon: usize,
    /// `Q_n(x, y) = sum_{g in boundary} q_g 1{phi(g, x) = y}`.
    pub a: DMatrix<f64>,
    /// `k^{-1/2} sum_{t <= H} P_{n,p'}^t / rho_{p'}^t`, divided by its row sum.
    pub b: DMatrix<f64>,
    /// `C_hat` times that row sum, so that `|A| <= c B`.
    pub c: f64,
    pub c_hat: f64,
    pub rho_p_prime: f64,
}

/// Builds `A`, `B` and `c` for the contraction bound on a small Schreier graph.
pub fn backbone_pipeline(graph: &SchreierGraph, p: &AnisotropyVector, k: u64) -> Result<BackbonePipeline> {
    let n = graph.n();
    if n > DENSE_LIMIT {
        return Err(MixError::TooLargeForDense {
            size: n,
            limit: DENSE_LIMIT,
        });
    }
    let dom = domination_check(p, k, 2_000_000)?;
    let mut a = DMatrix::<f64>::zeros(n, n);
    for (letters, q, _) in &dom.rows {
        for x in 0..n {
            a[(x, graph.apply_letters(letters, x))] += q;
        }
    }
    let pp = transform_p_to_pprime(p)?;
    let kernel = SchreierKernel::new(graph.clone(), &pp.p_prime)?;
    let pn = DenseChain::from_kernel(&kernel)?.p;
    let mut acc = DMatrix::<f64>::identity(n, n);
    let mut power = DMatrix::<f64>::identity(n, n);
    let mut weight = 1.0;
    let mut alpha = 1.0;
    for _ in 0..dom.horizon {
        power = &power * &pn;
        weight /= dom.rho_p_prime;
        acc += &power * weight;
        alpha += weight;
    }
    let b = acc / alpha;
    let alpha = alpha / (k as f64).sqrt();
    Ok(BackbonePipeline {
        k,
        horizon: dom.horizon,
        a,
        b,
        c: dom.c_hat * alpha,
        c_hat: dom.c_hat,
        rho_p_prime: dom.rho_p_prime,
    })
}

/// Comparison of the projected tree exit law with the exit law computed on the graph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectionCheck {
    pub x: usize,
    pub set_size: usize,
    pub tv: f64,
}

/// Projects the exit law `q` of `U` through `g -> phi(g, x)` and compares it
/// with the hitting law of the complement of `phi(U, x)` solved on the graph.
///
/// Returns `None` when `phi(., x)` is not injective on `U` and its boundary,
/// since the two laws then differ for a structural reason.
pub fn backbone_projection_check(
    graph: &SchreierGraph,
    p: &AnisotropyVector,
    k: u64,
    x: usize,
) -> Result<Option<ProjectionCheck>> {
    let u = build_stopping_set(p, k, 200_000)?;
    let bb = backbone_kernel(&u, None)?;
    let members: Vec<usize> = (0..u.size())
        .map(|w| graph.apply_letters(&u.member_letters(w), x))
        .collect();
    let exits: Vec<usize> = (0..u.boundary_size())
        .map(|b| graph.apply_letters(&u.boundary_letters(b), x))
        .collect();
    let mut all: Vec<usize> = members.iter().chain(&exits).copied().collect();
    all.sort_unstable();
    all.dedup();
    if all.len() != members.len() + exits.len() {
        return Ok(None);
    }
    let n = graph.n();
    let mut projected = vec![0.0; n];
    for (b, &y) in exits.iter().enumerate() {
        projected[y] += bb.q[b];
    }
    // hitting law of the complement of phi(U, x), from x, on the graph itself
    let kernel = SchreierKernel::new(graph.clone(), p)?;
    let mut inside = vec![usize::MAX; n];
    for (i, &v) in members.iter().enumerate() {
        inside[v] = i;
    }
    let m = members.len();
    let mut sys = DMatrix::<f64>::identity(m, m);
    for (i, &v) in members.iter().enumerate() {
        for (y, w) in kernel.row(v) {
            if inside[y] != usize::MAX {
                sys[(inside[y], i)] -= w;
            }
        }
    }
    let mut rhs = DVector::<f64>::zeros(m);
    rhs[inside[x]] = 1.0;
    let g = sys
        .lu()
        .solve(&rhs)
        .ok_or(MixError::InvalidChain("singular exit system".into()))?;
    let mut direct = vec![0.0; n];
    for (i, &v) in members.iter().enumerate() {
        for (y, w) in kernel.row(v) {
            if inside[y] == usize::MAX {
                direct[y] += g[i] * w;
            }
        }
    }
    Ok(Some(ProjectionCheck {
        x,
        set_size: m,
        tv: tv_distance(&projected, &direct),
    }))
}
