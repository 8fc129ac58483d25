use group_core::{Alphabet, AnisotropyVector};
use nalgebra::{DMatrix, DVector};
use rand::RngCore;

use crate::graph::check_perms;
use crate::kernel::{fill, sample_index};
use crate::{random_schreier, GraphError, Kernel, Result, SchreierGraph};

/// A base graph on `r` colors whose directed edges are the letters.
///
/// Letter `i` is the directed edge `(u_i, v_i)`, and `i*` must be the reverse
/// edge. A loop is either a self-inverse letter (`i = i*`, lifted to a
/// fixed-point-free involution) or a free pair of letters (lifted to a
/// permutation and its inverse); the involution table decides which.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseGraph {
    r: usize,
    alphabet: Alphabet,
    edges: Vec<(usize, usize)>,
}

impl BaseGraph {
    pub fn new(r: usize, alphabet: &Alphabet, edges: Vec<(usize, usize)>) -> Result<Self> {
        if edges.len() != alphabet.d() {
            return Err(GraphError::InvalidBase(format!(
                "{} edges for d = {}",
                edges.len(),
                alphabet.d()
            )));
        }
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= r || v >= r {
                return Err(GraphError::InvalidBase(format!(
                    "edge {} = ({}, {}) leaves the {r} colors",
                    i + 1,
                    u + 1,
                    v + 1
                )));
            }
            let j = alphabet.star(i);
            if edges[j] != (v, u) {
                return Err(GraphError::InvalidBase(format!(
                    "edge {}* = {} is not the reverse of edge {}",
                    i + 1,
                    j + 1,
                    i + 1
                )));
            }
        }
        Ok(BaseGraph {
            r,
            alphabet: alphabet.clone(),
            edges,
        })
    }

    /// Every undirected edge of `K_r` as a free pair of letters `(2k, 2k+1)`.
    pub fn complete(r: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for a in 0..r {
            for b in a + 1..r {
                edges.push((a, b));
                edges.push((b, a));
            }
        }
        let alphabet = Alphabet::paired(edges.len())?;
        Self::new(r, &alphabet, edges)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn d(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, i: usize) -> (usize, usize) {
        self.edges[i]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Letters leaving color `u`.
    pub fn out_degree(&self, u: usize) -> usize {
        self.edges.iter().filter(|e| e.0 == u).count()
    }
}

/// Matrix-valued jump law with `p_{g_i} = w_i E_{u_i, v_i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ColoredWeights {
    base: BaseGraph,
    w: Vec<f64>,
    base_chain: DMatrix<f64>,
    mu: Vec<f64>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl ColoredWeights {
    /// Validates that `P_1 = sum_g p_g` is row-stochastic, irreducible and
    /// aperiodic, and solves for its stationary law.
    pub fn new(base: &BaseGraph, w: Vec<f64>) -> Result<Self> {
        if w.len() != base.d() {
            return Err(GraphError::ColorMismatch(format!(
                "{} weights for {} letters",
                w.len(),
                base.d()
            )));
        }
        if let Some(i) = w.iter().position(|x| !x.is_finite() || *x < 0.0) {
            return Err(GraphError::InvalidBase(format!("weight {} = {}", i + 1, w[i])));
        }
        let r = base.r;
        let mut chain = DMatrix::<f64>::zeros(r, r);
        for (i, &(u, v)) in base.edges.iter().enumerate() {
            chain[(u, v)] += w[i];
        }
        for u in 0..r {
            let s: f64 = chain.row(u).sum();
            if (s - 1.0).abs() > 1e-12 {
                return Err(GraphError::InvalidBase(format!(
                    "row {} of the base chain sums to {s}",
                    u + 1
                )));
            }
        }
        let reach = |forward: bool| {
            let mut seen = vec![false; r];
            let mut dist = vec![usize::MAX; r];
            let mut queue = std::collections::VecDeque::from([0usize]);
            seen[0] = true;
            dist[0] = 0;
            while let Some(u) = queue.pop_front() {
                for v in 0..r {
                    let wt = if forward { chain[(u, v)] } else { chain[(v, u)] };
                    if wt > 0.0 && !seen[v] {
                        seen[v] = true;
                        dist[v] = dist[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            (seen, dist)
        };
        let (fwd, dist) = reach(true);
        let (bwd, _) = reach(false);
        if fwd.iter().chain(&bwd).any(|s| !s) {
            return Err(GraphError::InvalidBase("base chain is not irreducible".into()));
        }
        let mut period = 0;
        for u in 0..r {
            for v in 0..r {
                if chain[(u, v)] > 0.0 {
                    period = gcd(period, (dist[u] + 1).abs_diff(dist[v]));
                }
            }
        }
        if period != 1 {
            return Err(GraphError::InvalidBase(format!(
                "base chain has period {period}"
            )));
        }
        // mu (P - I) = 0 with the last equation replaced by sum mu = 1
        let mut m = chain.transpose() - DMatrix::<f64>::identity(r, r);
        let mut rhs = DVector::<f64>::zeros(r);
        for v in 0..r {
            m[(r - 1, v)] = 1.0;
        }
        rhs[r - 1] = 1.0;
        let mu = m
            .lu()
            .solve(&rhs)
            .ok_or_else(|| GraphError::InvalidBase("singular stationarity system".into()))?;
        Ok(ColoredWeights {
            base: base.clone(),
            w,
            base_chain: chain,
            mu: mu.iter().copied().collect(),
        })
    }

    /// Simple random walk on the base: `w_i = 1 / outdeg(u_i)`.
    pub fn simple(base: &BaseGraph) -> Result<Self> {
        let w = base
            .edges
            .iter()
            .map(|&(u, _)| 1.0 / base.out_degree(u) as f64)
            .collect();
        Self::new(base, w)
    }

    pub fn base(&self) -> &BaseGraph {
        &self.base
    }

    pub fn r(&self) -> usize {
        self.base.r
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.w[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    /// `p_{g_i}` as an `r x r` matrix.
    pub fn entry(&self, i: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.base.r, self.base.r);
        let (u, v) = self.base.edges[i];
        m[(u, v)] = self.w[i];
        m
    }

    /// `P_1 = sum_g p_g`.
    pub fn base_chain(&self) -> &DMatrix<f64> {
        &self.base_chain
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    /// Scalar weights when there is a single color, for comparison with the tree walk.
    pub fn as_anisotropy(&self) -> Option<AnisotropyVector> {
        (self.base.r == 1)
            .then(|| AnisotropyVector::new(&self.base.alphabet, self.w.clone()).ok())
            .flatten()
    }
}

/// An `n`-lift: state `(x, u)` with fiber `x in [n]` and color `u in [r]`,
/// indexed as `x * r + u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftGraph {
    base: BaseGraph,
    fiber: SchreierGraph,
}

/// One uniform permutation per undirected base edge (its reverse gets the
/// inverse) and a fixed-point-free involution per self-inverse loop.
pub fn random_lift(colored: &ColoredWeights, n: usize, seed: u64) -> Result<LiftGraph> {
    let fiber = random_schreier(&colored.base.alphabet, n, seed)?;
    Ok(LiftGraph {
        base: colored.base.clone(),
        fiber,
    })
}

impl LiftGraph {
    pub fn from_permutations(base: &BaseGraph, perms: Vec<Vec<usize>>) -> Result<Self> {
        let fiber = SchreierGraph::from_permutations(&base.alphabet, perms)?;
        Ok(LiftGraph {
            base: base.clone(),
            fiber,
        })
    }

    pub(crate) fn from_raw(base: BaseGraph, perms: Vec<Vec<u32>>, n: usize) -> Result<Self> {
        check_perms(&base.alphabet, &perms, n)?;
        let perms = perms
            .into_iter()
            .map(|p| p.into_iter().map(|x| x as usize).collect())
            .collect();
        Self::from_permutations(&base, perms)
    }

    pub fn n(&self) -> usize {
        self.fiber.n()
    }

    pub fn base(&self) -> &BaseGraph {
        &self.base
    }

    /// The permutations `alpha_i` of the fibers, as a Schreier graph on `[n]`.
    pub fn fiber(&self) -> &SchreierGraph {
        &self.fiber
    }

    pub fn states(&self) -> usize {
        self.n() * self.base.r
    }

    pub fn state(&self, x: usize, u: usize) -> usize {
        x * self.base.r + u
    }

    /// `(fiber, color)` of a state.
    pub fn split(&self, s: usize) -> (usize, usize) {
        (s / self.base.r, s % self.base.r)
    }

    /// Moves along letter `i`, which must leave the color of `s`.
    pub fn step(&self, i: usize, s: usize) -> usize {
        let (x, u) = self.split(s);
        let (ui, vi) = self.base.edges[i];
        debug_assert_eq!(u, ui);
        self.state(self.fiber.step(i, x), vi)
    }

    /// Lift neighbors of `s`, one per letter leaving its color.
    pub fn neighbors(&self, s: usize) -> Vec<usize> {
        let (_, u) = self.split(s);
        (0..self.base.d())
            .filter(|&i| self.base.edges[i].0 == u)
            .map(|i| self.step(i, s))
            .collect()
    }

    /// The covering property: every lift edge projects onto the base edge of its letter.
    pub fn covers_base(&self) -> bool {
        (0..self.states()).all(|s| {
            let (_, u) = self.split(s);
            (0..self.base.d())
                .filter(|&i| self.base.edges[i].0 == u)
                .all(|i| self.split(self.step(i, s)).1 == self.base.edges[i].1)
        })
    }
}

/// `P_{n,p} = sum_g p_g (x) S_g` on a lift.
#[derive(Clone, Debug)]
pub struct LiftKernel {
    lift: LiftGraph,
    colored: ColoredWeights,
    out_letters: Vec<Vec<usize>>,
    in_letters: Vec<Vec<usize>>,
    row_weights: Vec<Vec<f64>>,
}

impl LiftKernel {
    pub fn new(lift: LiftGraph, colored: &ColoredWeights) -> Result<Self> {
        if lift.base != colored.base {
            return Err(GraphError::ColorMismatch(
                "lift and weights use different base graphs".into(),
            ));
        }
        let r = lift.base.r;
        let mut out_letters = vec![Vec::new(); r];
        let mut in_letters = vec![Vec::new(); r];
        for (i, &(u, v)) in lift.base.edges.iter().enumerate() {
            if colored.w[i] > 0.0 {
                out_letters[u].push(i);
                in_letters[v].push(i);
            }
        }
        let row_weights = (0..r)
            .map(|u| {
                (0..lift.base.d())
                    .map(|i| if lift.base.edges[i].0 == u { colored.w[i] } else { 0.0 })
                    .collect()
            })
            .collect();
        Ok(LiftKernel {
            lift,
            colored: colored.clone(),
            out_letters,
            in_letters,
            row_weights,
        })
    }

    pub fn lift(&self) -> &LiftGraph {
        &self.lift
    }

    pub fn colored(&self) -> &ColoredWeights {
        &self.colored
    }
}

impl Kernel for LiftKernel {
    fn len(&self) -> usize {
        self.lift.states()
    }

    fn apply(&self, f: &[f64], out: &mut [f64]) {
        let r = self.lift.base.r;
        let fib = &self.lift.fiber;
        let edges = &self.lift.base.edges;
        fill(out, |s| {
            let (x, u) = (s / r, s % r);
            self.out_letters[u]
                .iter()
                .map(|&i| self.colored.w[i] * f[fib.step(i, x) * r + edges[i].1])
                .sum()
        });
    }

    fn apply_adjoint(&self, mu: &[f64], out: &mut [f64]) {
        let r = self.lift.base.r;
        let fib = &self.lift.fiber;
        let edges = &self.lift.base.edges;
        fill(out, |s| {
            let (y, v) = (s / r, s % r);
            self.in_letters[v]
                .iter()
                .map(|&i| self.colored.w[i] * mu[fib.act(i, y) * r + edges[i].0])
                .sum()
        });
    }

    fn stationary(&self) -> Vec<f64> {
        let n = self.lift.n() as f64;
        let r = self.lift.base.r;
        (0..self.len()).map(|s| self.colored.mu[s % r] / n).collect()
    }

    fn row(&self, s: usize) -> Vec<(usize, f64)> {
        let (_, u) = self.lift.split(s);
        self.out_letters[u]
            .iter()
            .map(|&i| (self.lift.step(i, s), self.colored.w[i]))
            .collect()
    }

    fn sample_step(&self, s: usize, rng: &mut dyn RngCore) -> usize {
        let (_, u) = self.lift.split(s);
        let i = sample_index(&self.row_weights[u], rng);
        self.lift.step(i, s)
    }

    fn is_reversible(&self) -> bool {
        let c = &self.colored;
        let a = &self.lift.base.alphabet;
        (0..self.lift.base.d()).all(|i| {
            let j = a.star(i);
            let (u, v) = self.lift.base.edges[i];
            (c.w[i] * c.mu[u] - c.w[j] * c.mu[v]).abs() <= 1e-12
        })
    }
}
