use schreier_graphs::Kernel;
use serde::Serialize;

use crate::{singular_radius_t, DenseChain, MixError, Result, SingularRadius, DENSE_LIMIT};

/// A nontrivial eigenvalue (or singular value) outside `[-rho - delta, rho + delta]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Outlier {
    pub value: f64,
    pub multiplicity: usize,
    /// `log(#{|lambda| within delta of |value|}) / log n`.
    pub i_hat: f64,
    /// Right-hand side of the outlier density condition at `u = |value|`.
    pub supoz_rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub n: usize,
    pub sigma_t: Vec<SingularRadius>,
    /// Eigenvalues in decreasing order (reversible kernels) or singular values
    /// of the centered kernel in `l2(pi)` (other kernels), when computed densely.
    pub spectrum: Option<Vec<f64>>,
    /// Largest nontrivial `|lambda|` of a reversible kernel.
    pub rho_n: Option<f64>,
    pub rho_tree: f64,
    pub delta: f64,
    pub outliers: Vec<Outlier>,
}

/// `1 - 2 log(u/rho + sqrt((u/rho)^2 - 1)) / log(d - 1)`.
pub fn supoz_rhs(u: f64, rho: f64, d: usize) -> f64 {
    let v = (u / rho).max(1.0);
    1.0 - 2.0 * (v + (v * v - 1.0).sqrt()).ln() / ((d - 1) as f64).ln()
}

/// Singular radii at `t in ts` by power iteration and, when `dense` is set,
/// the full spectrum with the outliers relative to the tree radius `rho_tree`.
pub fn spectrum_report<K: Kernel + ?Sized>(
    kernel: &K,
    dense: bool,
    rho_tree: f64,
    degree: usize,
    delta: f64,
    ts: &[usize],
    seed: u64,
) -> Result<SpectrumReport> {
    let n = kernel.len();
    let sigma_t = ts
        .iter()
        .map(|&t| singular_radius_t(kernel, t, 5000, seed))
        .collect::<Result<Vec<_>>>()?;
    if !dense {
        return Ok(SpectrumReport {
            n,
            sigma_t,
            spectrum: None,
            rho_n: None,
            rho_tree,
            delta,
            outliers: Vec::new(),
        });
    }
    if n > DENSE_LIMIT {
        return Err(MixError::TooLargeForDense {
            size: n,
            limit: DENSE_LIMIT,
        });
    }
    let chain = DenseChain::from_kernel(kernel)?;
    let reversible = kernel.is_reversible();
    let (spectrum, nontrivial) = if reversible {
        let ev = chain.reversible_spectrum();
        // drop the eigenvalue closest to 1 (the constants)
        let top = ev
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - 1.0).abs().total_cmp(&(b.1 - 1.0).abs()))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let rest: Vec<f64> = ev.iter().enumerate().filter(|&(i, _)| i != top).map(|(_, &v)| v).collect();
        (ev, rest)
    } else {
        let sq: Vec<f64> = chain.pi.iter().map(|v| v.sqrt()).collect();
        let m = nalgebra::DMatrix::from_fn(n, n, |x, y| {
            chain.p[(x, y)] * (chain.pi[x] / chain.pi[y]).sqrt() - sq[x] * sq[y]
        });
        let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        // the centered operator kills the constants: one singular value is structurally zero
        let rest = sv[..n.saturating_sub(1)].to_vec();
        (sv, rest)
    };
    let rho_n = reversible.then(|| nontrivial.iter().map(|v| v.abs()).fold(0.0, f64::max));
    let mut far: Vec<f64> = nontrivial
        .iter()
        .copied()
        .filter(|v| v.abs() > rho_tree + delta)
        .collect();
    far.sort_by(|a, b| b.total_cmp(a));
    let mut outliers: Vec<Outlier> = Vec::new();
    for v in far {
        match outliers.last_mut() {
            Some(o) if (o.value - v).abs() <= 1e-8 => o.multiplicity += 1,
            _ => {
                let u = v.abs();
                let near = nontrivial.iter().filter(|w| (w.abs() - u).abs() < delta).count();
                outliers.push(Outlier {
                    value: v,
                    multiplicity: 1,
                    i_hat: (near.max(1) as f64).ln() / (n as f64).ln(),
                    supoz_rhs: supoz_rhs(u, rho_tree, degree),
                });
            }
        }
    }
    Ok(SpectrumReport {
        n,
        sigma_t,
        spectrum: Some(spectrum),
        rho_n,
        rho_tree,
        delta,
        outliers,
    })
}

impl SpectrumReport {
    pub fn outlier_count(&self) -> usize {
        self.outliers.iter().map(|o| o.multiplicity).sum()
    }
}
