use group_core::{AnisotropyVector, ReducedWord};
use nalgebra::{DMatrix, DVector};

use crate::{harmonic_weights, Result, TreeError};

const NONE: u32 = u32::MAX;
const BOUNDARY_BIT: u32 = 1 << 31;

/// `U = {g : u(g) > 1/k}` stored as a tree rooted at `e`.
///
/// Node `w` has parent `w` minus its head letter, so the children of `w` are
/// the words `g_i w`, which is how the left-multiplying walk moves. Because
/// `u(g)` is a product over letters and all `a_i < 1`, `U` is closed under
/// removing either end letter.
#[derive(Clone, Debug)]
pub struct StoppingSet {
    pub k: u64,
    d: usize,
    star: Vec<usize>,
    p: Vec<f64>,
    /// `R(e,e)` at `z = 1`.
    pub green_at_e: f64,
    parent: Vec<u32>,
    head: Vec<u8>,
    depth: Vec<u16>,
    value: Vec<f64>,
    /// `children[w * d + i]`: member index, `BOUNDARY_BIT | boundary index`, or `NONE`.
    children: Vec<u32>,
    /// Boundary words as `(member, letter)` meaning `g_letter · member`.
    boundary: Vec<(u32, u8)>,
    boundary_value: Vec<f64>,
}

/// Relative slack that keeps exact ties `u(g) = 1/k` outside `U`.
const TIE_SLACK: f64 = 1e-10;

/// Breadth-first enumeration of `U`, with exits restricted to letters of positive mass.
pub fn build_stopping_set(p: &AnisotropyVector, k: u64, node_cap: usize) -> Result<StoppingSet> {
    if k < 2 {
        return Err(TreeError::InvalidScale { k });
    }
    let (a, ree) = harmonic_weights(p)?;
    let d = p.d();
    let star = p.alphabet().star_table().to_vec();
    let thr = (1.0 / k as f64) * (1.0 + TIE_SLACK);
    let mut s = StoppingSet {
        k,
        d,
        star: star.clone(),
        p: p.as_slice().to_vec(),
        green_at_e: ree,
        parent: vec![NONE],
        head: vec![u8::MAX],
        depth: vec![0],
        value: vec![ree],
        children: Vec::new(),
        boundary: Vec::new(),
        boundary_value: Vec::new(),
    };
    if !(ree > thr) {
        // cannot happen for k >= 2 since R(e,e) >= 1, kept for robustness
        return Err(TreeError::InvalidScale { k });
    }
    let mut w = 0usize;
    while w < s.parent.len() {
        s.children.extend(std::iter::repeat_n(NONE, d));
        for i in 0..d {
            if p.p(i) == 0.0 {
                continue;
            }
            if w != 0 && star[s.head[w] as usize] == i {
                continue;
            }
            let v = s.value[w] * a[i];
            if v > thr {
                if s.parent.len() >= node_cap {
                    return Err(TreeError::SetTooLarge { cap: node_cap });
                }
                s.children[w * d + i] = s.parent.len() as u32;
                s.parent.push(w as u32);
                s.head.push(i as u8);
                s.depth.push(s.depth[w] + 1);
                s.value.push(v);
            } else {
                s.children[w * d + i] = BOUNDARY_BIT | s.boundary.len() as u32;
                s.boundary.push((w as u32, i as u8));
                s.boundary_value.push(v);
            }
        }
        w += 1;
    }
    Ok(s)
}

impl StoppingSet {
    pub fn size(&self) -> usize {
        self.parent.len()
    }

    pub fn boundary_size(&self) -> usize {
        self.boundary.len()
    }

    /// Letters of member `w` from left to right.
    pub fn member_letters(&self, mut w: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.depth[w] as usize);
        while w != 0 {
            out.push(self.head[w] as usize);
            w = self.parent[w] as usize;
        }
        out
    }

    pub fn boundary_letters(&self, b: usize) -> Vec<usize> {
        let (w, i) = self.boundary[b];
        let mut out = vec![i as usize];
        out.extend(self.member_letters(w as usize));
        out
    }

    pub fn members(&self, p: &AnisotropyVector) -> Vec<ReducedWord> {
        (0..self.size())
            .map(|w| ReducedWord::from_letters(p.alphabet(), &self.member_letters(w)).unwrap())
            .collect()
    }

    pub fn boundary_words(&self, p: &AnisotropyVector) -> Vec<ReducedWord> {
        (0..self.boundary_size())
            .map(|b| ReducedWord::from_letters(p.alphabet(), &self.boundary_letters(b)).unwrap())
            .collect()
    }

    pub fn member_value(&self, w: usize) -> f64 {
        self.value[w]
    }

    pub fn boundary_value(&self, b: usize) -> f64 {
        self.boundary_value[b]
    }

    pub fn max_member_length(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0) as usize
    }

    pub fn max_boundary_length(&self) -> usize {
        self.boundary
            .iter()
            .map(|&(w, _)| self.depth[w as usize] as usize + 1)
            .max()
            .unwrap_or(0)
    }

    /// Longest tree path between two members.
    pub fn diameter(&self) -> usize {
        // members are in BFS order, so a reverse sweep sees children first
        let n = self.size();
        let mut height = vec![0usize; n];
        let mut best = vec![0usize; n];
        let mut diam = 0;
        for w in (0..n).rev() {
            diam = diam.max(height[w] + best[w]);
            if w != 0 {
                let par = self.parent[w] as usize;
                let h = height[w] + 1;
                if h > height[par] {
                    best[par] = height[par];
                    height[par] = h;
                } else if h > best[par] {
                    best[par] = h;
                }
            }
        }
        diam
    }

    /// Fitted constant in `#U <= C k log k`.
    pub fn size_constant(&self) -> f64 {
        let k = self.k as f64;
        self.size() as f64 / (k * k.ln())
    }

    /// Destination of member `w` under letter `i`: `Ok(member)` or `Err(boundary)`.
    fn step(&self, w: usize, i: usize) -> std::result::Result<usize, usize> {
        if w != 0 && self.star[self.head[w] as usize] == i {
            return Ok(self.parent[w] as usize);
        }
        let c = self.children[w * self.d + i];
        debug_assert!(c != NONE);
        if c & BOUNDARY_BIT != 0 {
            Err((c & !BOUNDARY_BIT) as usize)
        } else {
            Ok(c as usize)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackboneMethod {
    /// Dense LU solve of the absorbing system.
    Dense,
    /// Forward propagation of the killed walk until the surviving mass is below `1e-15`.
    Propagation,
}

/// Law of `X_tau` on `∂U` together with `E[tau]`.
#[derive(Clone, Debug)]
pub struct BackboneKernel {
    pub q: Vec<f64>,
    pub mean_exit: f64,
    pub method: BackboneMethod,
    pub max_q: f64,
    /// `max_g q_g <= 1/k`.
    pub tandilt_holds: bool,
}

impl BackboneKernel {
    pub fn total_mass(&self) -> f64 {
        self.q.iter().sum()
    }
}

/// Dense solve up to this many states, propagation beyond.
pub const DENSE_LIMIT: usize = 1500;

pub fn backbone_kernel(u: &StoppingSet, method: Option<BackboneMethod>) -> Result<BackboneKernel> {
    let method = method.unwrap_or(if u.size() <= DENSE_LIMIT {
        BackboneMethod::Dense
    } else {
        BackboneMethod::Propagation
    });
    let n = u.size();
    let d = u.d;
    let (q, mean_exit) = match method {
        BackboneMethod::Dense => {
            // occupation x solves (I - Q)^T x = delta_e
            let mut m = DMatrix::<f64>::identity(n, n);
            for w in 0..n {
                for i in 0..d {
                    if u.p[i] == 0.0 {
                        continue;
                    }
                    if let Ok(v) = u.step(w, i) {
                        m[(v, w)] -= u.p[i];
                    }
                }
            }
            let mut rhs = DVector::<f64>::zeros(n);
            rhs[0] = 1.0;
            let x = m.lu().solve(&rhs).ok_or(TreeError::SingularSystem)?;
            let mut q = vec![0.0; u.boundary_size()];
            for w in 0..n {
                for i in 0..d {
                    if u.p[i] == 0.0 {
                        continue;
                    }
                    if let Err(b) = u.step(w, i) {
                        q[b] += x[w] * u.p[i];
                    }
                }
            }
            (q, x.iter().sum::<f64>())
        }
        BackboneMethod::Propagation => {
            let mut mass = vec![0.0; n];
            mass[0] = 1.0;
            let mut next = vec![0.0; n];
            let mut q = vec![0.0; u.boundary_size()];
            let mut mean = 0.0;
            let mut alive = 1.0;
            let mut steps = 0usize;
            while alive > 1e-15 {
                mean += alive;
                next.iter_mut().for_each(|x| *x = 0.0);
                for w in 0..n {
                    let m = mass[w];
                    if m == 0.0 {
                        continue;
                    }
                    for i in 0..d {
                        if u.p[i] == 0.0 {
                            continue;
                        }
                        match u.step(w, i) {
                            Ok(v) => next[v] += m * u.p[i],
                            Err(b) => q[b] += m * u.p[i],
                        }
                    }
                }
                std::mem::swap(&mut mass, &mut next);
                alive = mass.iter().sum();
                steps += 1;
                if steps > 10_000_000 {
                    return Err(TreeError::SingularSystem);
                }
            }
            (q, mean)
        }
    };
    let max_q = q.iter().copied().fold(0.0, f64::max);
    Ok(BackboneKernel {
        tandilt_holds: max_q <= 1.0 / u.k as f64 + 1e-12,
        q,
        mean_exit,
        method,
        max_q,
    })
}
