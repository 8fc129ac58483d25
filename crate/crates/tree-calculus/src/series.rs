use group_core::AnisotropyVector;

use crate::{build_stopping_set, backbone_kernel, rho, transform_p_to_pprime, Result, TreeError};

/// Truncated power series in `w = 1/z` (coefficient `n` multiplies `w^n`).
type Series = Vec<f64>;

fn mul(a: &[f64], b: &[f64], n: usize) -> Series {
    let mut out = vec![0.0; n];
    for (i, &ai) in a.iter().enumerate().take(n) {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(n - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// `w / (1 - w s(w))` truncated to `n` coefficients.
fn w_over_one_minus_ws(s: &[f64], n: usize) -> Series {
    // a = w s has a_0 = 0; b = 1/(1-a) via b_m = sum_{k>=1} a_k b_{m-k}
    let mut a = vec![0.0; n];
    for k in 1..n {
        a[k] = s.get(k - 1).copied().unwrap_or(0.0);
    }
    let mut b = vec![0.0; n];
    b[0] = 1.0;
    for m in 1..n {
        let mut acc = 0.0;
        for k in 1..=m {
            acc += a[k] * b[m - k];
        }
        b[m] = acc;
    }
    let mut out = vec![0.0; n];
    out[1..n].copy_from_slice(&b[..n - 1]);
    out
}

/// Resolvent entries as power series in `1/z`, exact in the coefficients.
///
/// The coefficient of `w^{t+1}` in `R(e,g)` is `P^t(e,g)`, so this gives
/// return and hitting probabilities at horizons far beyond the word-level DP.
#[derive(Clone, Debug)]
pub struct ResolventSeries {
    pub order: usize,
    pub gamma: Vec<Series>,
    pub ree: Series,
    p: Vec<f64>,
}

pub fn resolvent_series(p: &AnisotropyVector, max_t: usize) -> ResolventSeries {
    let n = max_t + 2;
    let d = p.d();
    let c = p.products();
    let star = p.alphabet().star_table();
    let mut gamma: Vec<Series> = vec![vec![0.0; n]; d];
    // each sweep fixes at least one more coefficient
    for _ in 0..n {
        let mut total = vec![0.0; n];
        for j in 0..d {
            if c[j] != 0.0 {
                for (t, g) in total.iter_mut().zip(&gamma[j]) {
                    *t += c[j] * g;
                }
            }
        }
        let next: Vec<Series> = (0..d)
            .map(|i| {
                let j = star[i];
                let s: Series = total
                    .iter()
                    .zip(&gamma[j])
                    .map(|(t, g)| t - c[j] * g)
                    .collect();
                w_over_one_minus_ws(&s, n)
            })
            .collect();
        let done = next == gamma;
        gamma = next;
        if done {
            break;
        }
    }
    let mut total = vec![0.0; n];
    for j in 0..d {
        for (t, g) in total.iter_mut().zip(&gamma[j]) {
            *t += c[j] * g;
        }
    }
    let ree = w_over_one_minus_ws(&total, n);
    ResolventSeries {
        order: n,
        gamma,
        ree,
        p: p.as_slice().to_vec(),
    }
}

impl ResolventSeries {
    /// `r_i(w) = p_i gamma_i(w)`.
    pub fn r(&self, i: usize) -> Series {
        self.gamma[i].iter().map(|g| self.p[i] * g).collect()
    }

    /// `P^t(e,g)` for `t = 0..=max_t`, for the word with the given letters.
    pub fn transition_probabilities(&self, letters: &[usize]) -> Vec<f64> {
        let mut acc = self.ree.clone();
        for &l in letters {
            acc = mul(&acc, &self.r(l), self.order);
        }
        acc[1..].to_vec()
    }

    /// `P^t(e,e)` for `t = 0..=max_t`.
    pub fn return_probabilities(&self) -> Vec<f64> {
        self.ree[1..].to_vec()
    }
}

#[derive(Clone, Debug)]
pub struct DominationReport {
    pub k: u64,
    pub horizon: usize,
    pub rho_p_prime: f64,
    /// `(letters of g, q_g, RHS(g))` for every `g` in `∂U`.
    pub rows: Vec<(Vec<usize>, f64, f64)>,
    /// `max_g q_g / RHS(g)`.
    pub c_hat: f64,
}

/// Horizon cap for the series route.
pub const MAX_SERIES_HORIZON: usize = 700;

/// Compares the exit law `q` of `U` at scale `k` with the truncated resolvent of `p'`:
/// `RHS(g) = k^{-1/2} sum_{t <= H} P_{p'}^t(e,g) / rho_{p'}^t`.
///
/// `H = max(floor(log k)^4, longest boundary word)`, since for small `k` the
/// nominal horizon is shorter than the words it must reach.
pub fn domination_check(p: &AnisotropyVector, k: u64, node_cap: usize) -> Result<DominationReport> {
    let u = build_stopping_set(p, k, node_cap)?;
    let bb = backbone_kernel(&u, None)?;
    let pp = transform_p_to_pprime(p)?;
    let rho_pp = rho(&pp.p_prime)?.rho;
    let nominal = ((k as f64).ln().floor() as usize).pow(4);
    let horizon = nominal.max(u.max_boundary_length());
    if horizon > MAX_SERIES_HORIZON {
        return Err(TreeError::DpBudgetExceeded {
            horizon,
            cap: MAX_SERIES_HORIZON,
        });
    }
    let series = resolvent_series(&pp.p_prime, horizon);
    let scale = (k as f64).powf(-0.5);
    let mut rows = Vec::with_capacity(u.boundary_size());
    let mut c_hat: f64 = 0.0;
    for b in 0..u.boundary_size() {
        let letters = u.boundary_letters(b);
        let probs = series.transition_probabilities(&letters);
        let mut rhs = 0.0;
        let mut w = 1.0;
        for pt in &probs {
            rhs += pt * w;
            w /= rho_pp;
        }
        rhs *= scale;
        let qg = bb.q[b];
        if qg > 0.0 {
            c_hat = c_hat.max(qg / rhs);
        }
        rows.push((letters, qg, rhs));
    }
    Ok(DominationReport {
        k,
        horizon,
        rho_p_prime: rho_pp,
        rows,
        c_hat,
    })
}
