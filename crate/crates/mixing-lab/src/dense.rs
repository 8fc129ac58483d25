use group_core::rng;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, RngCore};
use schreier_graphs::Kernel;

use crate::{MixError, Result};

/// Largest state space handled by dense linear algebra.
pub const DENSE_LIMIT: usize = 4000;

/// A finite chain held as a dense matrix together with its invariant law.
#[derive(Clone, Debug)]
pub struct DenseChain {
    pub p: DMatrix<f64>,
    pub pi: Vec<f64>,
}

impl DenseChain {
    /// Validates row-stochasticity and solves `pi P = pi`.
    pub fn new(p: DMatrix<f64>) -> Result<Self> {
        let n = p.nrows();
        if n == 0 || p.ncols() != n {
            return Err(MixError::InvalidChain("matrix must be square and non-empty".into()));
        }
        if p.iter().any(|&v| v < 0.0 || !v.is_finite()) {
            return Err(MixError::InvalidChain("negative or non-finite entry".into()));
        }
        for x in 0..n {
            let s: f64 = p.row(x).sum();
            if (s - 1.0).abs() > 1e-12 {
                return Err(MixError::InvalidChain(format!("row {x} sums to {s}")));
            }
        }
        let mut m = p.transpose() - DMatrix::<f64>::identity(n, n);
        for y in 0..n {
            m[(n - 1, y)] = 1.0;
        }
        let mut rhs = DVector::<f64>::zeros(n);
        rhs[n - 1] = 1.0;
        let pi = m
            .lu()
            .solve(&rhs)
            .ok_or_else(|| MixError::InvalidChain("chain is not irreducible".into()))?;
        if pi.iter().any(|&v| v <= 0.0) {
            return Err(MixError::InvalidChain("chain is not irreducible".into()));
        }
        Ok(DenseChain {
            p,
            pi: pi.iter().copied().collect(),
        })
    }

    /// Dense copy of a matrix-free kernel, keeping its declared invariant law.
    pub fn from_kernel<K: Kernel + ?Sized>(kernel: &K) -> Result<Self> {
        let n = kernel.len();
        if n > DENSE_LIMIT {
            return Err(MixError::TooLargeForDense {
                size: n,
                limit: DENSE_LIMIT,
            });
        }
        let mut p = DMatrix::<f64>::zeros(n, n);
        for x in 0..n {
            for (y, w) in kernel.row(x) {
                p[(x, y)] += w;
            }
        }
        Ok(DenseChain {
            p,
            pi: kernel.stationary(),
        })
    }

    pub fn n(&self) -> usize {
        self.p.nrows()
    }

    pub fn power(&self, s: usize) -> DMatrix<f64> {
        let mut out = DMatrix::<f64>::identity(self.n(), self.n());
        for _ in 0..s {
            out = &out * &self.p;
        }
        out
    }

    /// `D^{1/2} M D^{-1/2}` with `D = diag(pi)`: the matrix of `M` in an orthonormal basis of `l2(pi)`.
    fn conjugate(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        let n = self.n();
        DMatrix::from_fn(n, n, |x, y| m[(x, y)] * (self.pi[x] / self.pi[y]).sqrt())
    }

    /// `|| (M)_{|1-perp} ||` in `l2(pi)` for a matrix `M` fixing constants.
    pub fn norm_perp(&self, m: &DMatrix<f64>) -> f64 {
        let n = self.n();
        let sq: Vec<f64> = self.pi.iter().map(|v| v.sqrt()).collect();
        let c = self.conjugate(m) - DMatrix::from_fn(n, n, |x, y| sq[x] * sq[y]);
        c.singular_values().max()
    }

    /// `sigma(s) = ||(P^s)_{|1-perp}||^{1/s}`.
    pub fn sigma(&self, s: usize) -> f64 {
        self.norm_perp(&self.power(s)).powf(1.0 / s.max(1) as f64)
    }

    /// Detailed balance `pi(x) P(x,y) = pi(y) P(y,x)`.
    pub fn is_reversible(&self) -> bool {
        let n = self.n();
        (0..n).all(|x| {
            (0..n).all(|y| {
                (self.pi[x] * self.p[(x, y)] - self.pi[y] * self.p[(y, x)]).abs() <= 1e-13
            })
        })
    }

    /// Eigenvalues of a reversible chain, in decreasing order.
    pub fn reversible_spectrum(&self) -> Vec<f64> {
        let s = self.conjugate(&self.p);
        let sym = (&s + s.transpose()) * 0.5;
        let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }
}

impl Kernel for DenseChain {
    fn len(&self) -> usize {
        self.n()
    }

    fn apply(&self, f: &[f64], out: &mut [f64]) {
        let v = &self.p * DVector::from_column_slice(f);
        out.copy_from_slice(v.as_slice());
    }

    fn apply_adjoint(&self, mu: &[f64], out: &mut [f64]) {
        let v = self.p.tr_mul(&DVector::from_column_slice(mu));
        out.copy_from_slice(v.as_slice());
    }

    fn stationary(&self) -> Vec<f64> {
        self.pi.clone()
    }

    fn row(&self, x: usize) -> Vec<(usize, f64)> {
        (0..self.n())
            .filter(|&y| self.p[(x, y)] > 0.0)
            .map(|y| (y, self.p[(x, y)]))
            .collect()
    }

    fn sample_step(&self, x: usize, rng: &mut dyn RngCore) -> usize {
        let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        let mut acc = 0.0;
        let mut last = x;
        for (y, w) in self.row(x) {
            acc += w;
            last = y;
            if u < acc {
                return y;
            }
        }
        last
    }

    fn is_reversible(&self) -> bool {
        DenseChain::is_reversible(self)
    }
}

/// Random symmetric conductances on a connected graph with holding at every state.
///
/// A spanning path guarantees irreducibility, the holding weights
/// aperiodicity; `P = W / rowsum` is reversible with `pi` proportional to the row sums.
pub fn random_reversible_chain(n: usize, seed: u64) -> DenseChain {
    let mut r = rng::stream(seed, 0);
    let mut w = DMatrix::<f64>::zeros(n, n);
    let mut order: Vec<usize> = (0..n).collect();
    for k in (1..n).rev() {
        order.swap(k, r.random_range(0..=k));
    }
    for k in 1..n {
        let (a, b) = (order[k - 1], order[k]);
        let c = r.random_range(0.1..1.0);
        w[(a, b)] += c;
        w[(b, a)] += c;
    }
    for _ in 0..2 * n {
        let (a, b) = (r.random_range(0..n), r.random_range(0..n));
        let c = r.random_range(0.05..1.0);
        w[(a, b)] += c;
        if a != b {
            w[(b, a)] += c;
        }
    }
    for x in 0..n {
        w[(x, x)] += r.random_range(0.05..0.5);
    }
    let p = DMatrix::from_fn(n, n, |x, y| w[(x, y)] / w.row(x).sum());
    let mut chain = DenseChain::new(p).expect("connected by construction");
    // the conductance law is exact; the solved one carries rounding
    let total: f64 = w.iter().sum();
    chain.pi = (0..n).map(|x| w.row(x).sum() / total).collect();
    chain
}

/// A random irreducible aperiodic chain without any symmetry.
pub fn random_chain(n: usize, seed: u64) -> DenseChain {
    let mut r = rng::stream(seed, 1);
    let mut w = DMatrix::<f64>::zeros(n, n);
    // a directed cycle plus random extra edges and holding
    for x in 0..n {
        w[(x, (x + 1) % n)] += r.random_range(0.2..1.0);
        w[(x, x)] += r.random_range(0.05..0.3);
        for _ in 0..2 {
            w[(x, r.random_range(0..n))] += r.random_range(0.0..1.0);
        }
    }
    let p = DMatrix::from_fn(n, n, |x, y| w[(x, y)] / w.row(x).sum());
    DenseChain::new(p).expect("irreducible by construction")
}
