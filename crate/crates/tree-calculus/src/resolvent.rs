use group_core::AnisotropyVector;

use crate::{Result, TreeError};

/// Resolvent data at a real point `z >= rho'`.
///
/// With `c_i = p_i p_{i*}` and `s = s_z`, the closed forms are
/// `gamma_i = 1 / (s + sqrt(s^2 + c_i))`, `r_i = p_i gamma_i` and
/// `R(e,e) = 1 / (2 s)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResolventProfile {
    pub z: f64,
    pub s: f64,
    pub gamma: Vec<f64>,
    pub r: Vec<f64>,
    pub ree: f64,
    /// Max relative residual of the fixed-point recursion for `gamma` and `R(e,e)`.
    pub residual: f64,
}

/// `sqrt(s^2 + c) - s` without cancellation.
#[inline]
fn gap(s: f64, c: f64) -> f64 {
    if c == 0.0 {
        0.0
    } else {
        c / ((s * s + c).sqrt() + s)
    }
}

/// `f(s) = 2s + sum_i (sqrt(s^2 + c_i) - s)`.
fn f(s: f64, c: &[f64]) -> f64 {
    2.0 * s + c.iter().map(|&ci| gap(s, ci)).sum::<f64>()
}

fn f_prime(s: f64, c: &[f64]) -> f64 {
    2.0 - c
        .iter()
        .map(|&ci| {
            if ci == 0.0 {
                0.0
            } else {
                let q = (s * s + ci).sqrt();
                ci / (q * (q + s))
            }
        })
        .sum::<f64>()
}

fn bisect(mut lo: f64, mut hi: f64, mut below: impl FnMut(f64) -> bool) -> f64 {
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if below(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `(rho', s_min)`: the minimum of the convex `f` and where it is attained.
///
/// `f'(0+) = 2 - #{i : c_i > 0}`, so when at most two products are positive the
/// minimum sits at `s = 0` and `rho' = sum_i sqrt(c_i)`.
pub fn rho_prime_minimizer(p: &AnisotropyVector) -> (f64, f64) {
    let c = p.products();
    if f_prime(0.0, &c) >= 0.0 {
        return (f(0.0, &c), 0.0);
    }
    let mut hi = 1.0;
    while f_prime(hi, &c) <= 0.0 {
        hi *= 2.0;
    }
    let s = bisect(0.0, hi, |x| f_prime(x, &c) < 0.0);
    (f(s, &c), s)
}

pub fn rho_prime(p: &AnisotropyVector) -> f64 {
    rho_prime_minimizer(p).0
}

/// Largest root of `f(x) = z`.
fn s_of_z(c: &[f64], z: f64, s_min: f64) -> f64 {
    let hi = (0.5 * z).max(s_min);
    let mut s = bisect(s_min, hi, |x| f(x, c) < z);
    for _ in 0..3 {
        let fp = f_prime(s, c);
        if fp <= 0.0 {
            break;
        }
        let next = s - (f(s, c) - z) / fp;
        if !(next >= s_min && next <= hi) {
            break;
        }
        s = next;
    }
    s
}

fn profile_from_s(p: &AnisotropyVector, s: f64, z: f64) -> ResolventProfile {
    let c = p.products();
    let d = p.d();
    let gamma: Vec<f64> = c.iter().map(|&ci| 1.0 / (s + (s * s + ci).sqrt())).collect();
    let r: Vec<f64> = (0..d)
        .map(|i| if p.p(i) == 0.0 { 0.0 } else { p.p(i) * gamma[i] })
        .collect();
    let ree = 1.0 / (2.0 * s);
    let residual = recursion_residual(p, z, &gamma, ree);
    ResolventProfile {
        z,
        s,
        gamma,
        r,
        ree,
        residual,
    }
}

/// Relative residual of `gamma_i = 1/(z - sum_{j != i*} c_j gamma_j)` and
/// `R(e,e) = 1/(z - sum_j c_j gamma_j)`.
fn recursion_residual(p: &AnisotropyVector, z: f64, gamma: &[f64], ree: f64) -> f64 {
    let c = p.products();
    let a = p.alphabet();
    let total: f64 = c.iter().zip(gamma).map(|(ci, g)| if *ci == 0.0 { 0.0 } else { ci * g }).sum();
    let mut res = (ree * (z - total) - 1.0).abs();
    for i in 0..p.d() {
        let j = a.star(i);
        let cj = if c[j] == 0.0 { 0.0 } else { c[j] * gamma[j] };
        res = res.max((gamma[i] * (z - total + cj) - 1.0).abs());
    }
    res
}

/// Solves the resolvent recursion at `z` through the scalar `s_z`.
pub fn solve_gamma(p: &AnisotropyVector, z: f64) -> Result<ResolventProfile> {
    let (rp, s_min) = rho_prime_minimizer(p);
    if !(z >= rp * (1.0 - 1e-14)) {
        return Err(TreeError::BelowConvergenceRadius { z, rho_prime: rp });
    }
    let c = p.products();
    let s = s_of_z(&c, z, s_min);
    let prof = profile_from_s(p, s, z);
    if !(prof.residual < 1e-12) {
        return Err(TreeError::NoConvergence {
            residual: prof.residual,
        });
    }
    Ok(prof)
}

/// Damped fixed-point iteration `gamma <- (1-w) gamma + w F(gamma)` from `gamma = 1/z`.
///
/// Slow near `rho'` but independent of the closed form, so it serves as a cross-check.
pub fn solve_gamma_iterative(
    p: &AnisotropyVector,
    z: f64,
    omega: f64,
    max_iter: usize,
    tol: f64,
) -> Result<ResolventProfile> {
    let rp = rho_prime(p);
    if z < rp {
        return Err(TreeError::BelowConvergenceRadius { z, rho_prime: rp });
    }
    let c = p.products();
    let a = p.alphabet();
    let d = p.d();
    let mut g = vec![1.0 / z; d];
    let mut next = vec![0.0; d];
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        let total: f64 = c.iter().zip(&g).map(|(ci, gi)| ci * gi).sum();
        residual = 0.0;
        for i in 0..d {
            let upd = 1.0 / (z - total + c[a.star(i)] * g[a.star(i)]);
            residual = f64::max(residual, (upd - g[i]).abs() / g[i]);
            next[i] = (1.0 - omega) * g[i] + omega * upd;
        }
        std::mem::swap(&mut g, &mut next);
        if residual < tol {
            break;
        }
    }
    if !(residual < tol) {
        return Err(TreeError::NoConvergence { residual });
    }
    let total: f64 = c.iter().zip(&g).map(|(ci, gi)| ci * gi).sum();
    let ree = 1.0 / (z - total);
    let r = (0..d).map(|i| p.p(i) * g[i]).collect();
    Ok(ResolventProfile {
        z,
        s: 0.5 / ree,
        residual: recursion_residual(p, z, &g, ree),
        gamma: g,
        r,
        ree,
    })
}

/// `sum_i r_i (1 - r_{i*}) / (1 - r_i r_{i*})`, equal to 1 at `z = 1`.
pub fn criterion_linear(r: &[f64], star: &[usize]) -> f64 {
    (0..r.len())
        .map(|i| {
            let (a, b) = (r[i], r[star[i]]);
            a * (1.0 - b) / (1.0 - a * b)
        })
        .sum()
}

/// `sum_i r_i^2 (1 - r_{i*}^2) / (1 - (r_i r_{i*})^2)`, equal to 1 at `z = rho`.
pub fn criterion_squared(r: &[f64], star: &[usize]) -> f64 {
    let sq: Vec<f64> = r.iter().map(|x| x * x).collect();
    criterion_linear(&sq, star)
}

#[derive(Clone, Debug)]
pub struct RhoReport {
    pub rho: f64,
    pub rho_prime: f64,
    /// Profile at `z = rho`; its `r` is the vector `b(p)`.
    pub profile: ResolventProfile,
}

/// Spectral radius on `l^2` of the tree.
///
/// Bisects the squared criterion in the variable `s` on `[s_min, s_1]`, where
/// it is well conditioned even when `rho = rho'` sits at the edge of the
/// domain. When the criterion is already `<= 1` at `s_min` the two radii agree.
pub fn rho(p: &AnisotropyVector) -> Result<RhoReport> {
    let (rp, s_min) = rho_prime_minimizer(p);
    let c = p.products();
    let star = p.alphabet().star_table();
    let crit = |s: f64| {
        if s <= 0.0 {
            return f64::INFINITY;
        }
        criterion_squared(&profile_from_s(p, s, f(s, &c)).r, star)
    };
    let s1 = s_of_z(&c, 1.0, s_min);
    let low = crit(s_min);
    let s_star = if s_min > 0.0 && low <= 1.0 + 1e-12 {
        s_min
    } else {
        let high = crit(s1);
        if high > 1.0 + 1e-12 {
            return Err(TreeError::CriterionNeverReachesOne { low, high });
        }
        bisect(s_min, s1, |s| crit(s) > 1.0)
    };
    let z = f(s_star, &c);
    let mut profile = profile_from_s(p, s_star, z);
    if !(profile.residual < 1e-12) {
        return Err(TreeError::NoConvergence {
            residual: profile.residual,
        });
    }
    profile.z = z;
    Ok(RhoReport {
        rho: z.max(rp),
        rho_prime: rp,
        profile,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use group_core::Alphabet;

    #[test]
    fn uniform_d3_at_one() {
        let a = Alphabet::identity(3).unwrap();
        let u = AnisotropyVector::uniform(&a);
        let pr = solve_gamma(&u, 1.0).unwrap();
        assert!((pr.s - 0.25).abs() < 1e-14);
        for i in 0..3 {
            assert!((pr.gamma[i] - 1.5).abs() < 1e-13);
            assert!((pr.r[i] - 0.5).abs() < 1e-13);
        }
        assert!((pr.ree - 2.0).abs() < 1e-13);
    }

    #[test]
    fn below_radius_rejected() {
        let a = Alphabet::identity(3).unwrap();
        let u = AnisotropyVector::uniform(&a);
        assert!(matches!(
            solve_gamma(&u, 0.5),
            Err(TreeError::BelowConvergenceRadius { .. })
        ));
    }

    #[test]
    fn totally_asymmetric() {
        let a = Alphabet::paired(4).unwrap();
        let p = AnisotropyVector::new(&a, vec![0.5, 0.0, 0.5, 0.0]).unwrap();
        let (rp, s) = rho_prime_minimizer(&p);
        assert_eq!((rp, s), (0.0, 0.0));
        let r = rho(&p).unwrap();
        assert!((r.rho - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn large_z_limit() {
        let a = Alphabet::identity(3).unwrap();
        let u = AnisotropyVector::uniform(&a);
        let z = 1e6;
        let pr = solve_gamma(&u, z).unwrap();
        for g in &pr.gamma {
            assert!((g * z - 1.0).abs() < 1e-5);
        }
    }
}
