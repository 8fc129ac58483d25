use group_core::{AnisotropyVector, ReducedWord};

use crate::{rho, solve_gamma, Result, TreeError};

/// `a_i = r_i` at `z = 1` together with `R(e,e)` there.
pub fn harmonic_weights(p: &AnisotropyVector) -> Result<(Vec<f64>, f64)> {
    let r = rho(p)?;
    if r.rho >= 1.0 - 1e-12 {
        return Err(TreeError::NotTransient { rho: r.rho });
    }
    let prof = solve_gamma(p, 1.0)?;
    Ok((prof.r, prof.ree))
}

/// Expected number of visits to `g` from `e`: `u(g) = R(e,e) prod_t a_{i_t}`.
pub fn green_value(p: &AnisotropyVector, g: &ReducedWord) -> Result<f64> {
    let (a, ree) = harmonic_weights(p)?;
    Ok(g.letters().fold(ree, |acc, l| acc * a[l]))
}

#[derive(Clone, Debug)]
pub struct PPrime {
    pub p_prime: AnisotropyVector,
    /// `a(p)`.
    pub a: Vec<f64>,
    /// `b(p')`, the profile of `p'` at `z = rho_{p'}`.
    pub b: Vec<f64>,
    pub rho_p_prime: f64,
    /// `max_i |a_i - b_i^2|`.
    pub residual: f64,
}

/// `p'_i ∝ sqrt(a_i) / (1 - sqrt(a_i a_{i*}))`, checked through `a_i(p) = b_i(p')^2`.
pub fn transform_p_to_pprime(p: &AnisotropyVector) -> Result<PPrime> {
    let (a, _) = harmonic_weights(p)?;
    let alph = p.alphabet();
    let w: Vec<f64> = (0..p.d())
        .map(|i| a[i].sqrt() / (1.0 - (a[i] * a[alph.star(i)]).sqrt()))
        .collect();
    let p_prime = AnisotropyVector::from_weights(alph, &w)
        .map_err(|e| TreeError::InvalidAlpha(e.to_string()))?;
    let rr = rho(&p_prime)?;
    let b = rr.profile.r.clone();
    let residual = a
        .iter()
        .zip(&b)
        .map(|(ai, bi)| (ai - bi * bi).abs())
        .fold(0.0, f64::max);
    if !(residual < 1e-8) {
        return Err(TreeError::RoundTripResidualTooLarge { residual });
    }
    Ok(PPrime {
        p_prime,
        a,
        b,
        rho_p_prime: rr.rho,
        residual,
    })
}
