use group_core::{rng, Alphabet, ReducedWord};
use rand::seq::SliceRandom;

use crate::{GraphError, Result};

/// `n` vertices and one permutation `alpha_i` of `[n]` per letter.
///
/// The inverse of `alpha_i` is `alpha_{i*}`, stored explicitly, so no
/// separate inverse tables are needed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchreierGraph {
    n: usize,
    alphabet: Alphabet,
    perms: Vec<Vec<u32>>,
}

pub(crate) fn check_perms(alphabet: &Alphabet, perms: &[Vec<u32>], n: usize) -> Result<()> {
    if perms.len() != alphabet.d() {
        return Err(GraphError::AlphabetMismatch(format!(
            "{} permutations for d = {}",
            perms.len(),
            alphabet.d()
        )));
    }
    for (i, perm) in perms.iter().enumerate() {
        if perm.len() != n {
            return Err(GraphError::NotAPermutation {
                i: i + 1,
                msg: format!("length {} instead of {n}", perm.len()),
            });
        }
        let mut seen = vec![false; n];
        for &y in perm {
            let y = y as usize;
            if y >= n || seen[y] {
                return Err(GraphError::NotAPermutation {
                    i: i + 1,
                    msg: format!("value {} repeated or out of range", y + 1),
                });
            }
            seen[y] = true;
        }
    }
    for i in 0..alphabet.d() {
        let inv = &perms[alphabet.star(i)];
        if (0..n).any(|x| inv[perms[i][x] as usize] as usize != x) {
            return Err(GraphError::InvolutionConstraintViolated { i: i + 1 });
        }
    }
    Ok(())
}

/// A uniform permutation and its inverse.
pub(crate) fn uniform_pair(n: usize, r: &mut rng::Rng) -> (Vec<u32>, Vec<u32>) {
    let mut fwd: Vec<u32> = (0..n as u32).collect();
    fwd.shuffle(r);
    let mut inv = vec![0u32; n];
    for (x, &y) in fwd.iter().enumerate() {
        inv[y as usize] = x as u32;
    }
    (fwd, inv)
}

/// A uniform fixed-point-free involution: shuffle, then pair consecutive entries.
pub(crate) fn uniform_matching(n: usize, r: &mut rng::Rng) -> Result<Vec<u32>> {
    if n % 2 == 1 {
        return Err(GraphError::OddSizeWithMatchings { n });
    }
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(r);
    let mut m = vec![0u32; n];
    for pair in order.chunks_exact(2) {
        m[pair[0] as usize] = pair[1];
        m[pair[1] as usize] = pair[0];
    }
    Ok(m)
}

/// One independent uniform draw per class `{i, i*}`: a permutation for pairs,
/// a fixed-point-free involution for self-inverse letters.
pub fn random_schreier(alphabet: &Alphabet, n: usize, seed: u64) -> Result<SchreierGraph> {
    if alphabet.q1() > 0 && n % 2 == 1 {
        return Err(GraphError::OddSizeWithMatchings { n });
    }
    let d = alphabet.d();
    let mut perms = vec![Vec::new(); d];
    for (k, i) in alphabet.classes().enumerate() {
        let mut r = rng::stream(seed, k as u64);
        let j = alphabet.star(i);
        if i == j {
            perms[i] = uniform_matching(n, &mut r)?;
        } else {
            let (fwd, inv) = uniform_pair(n, &mut r);
            perms[i] = fwd;
            perms[j] = inv;
        }
    }
    Ok(SchreierGraph {
        n,
        alphabet: alphabet.clone(),
        perms,
    })
}

impl SchreierGraph {
    /// Validated construction from explicit 0-based permutations.
    pub fn from_permutations(alphabet: &Alphabet, perms: Vec<Vec<usize>>) -> Result<Self> {
        let n = perms.first().map_or(0, |p| p.len());
        let perms: Vec<Vec<u32>> = perms
            .into_iter()
            .map(|p| p.into_iter().map(|x| x as u32).collect())
            .collect();
        check_perms(alphabet, &perms, n)?;
        Ok(SchreierGraph {
            n,
            alphabet: alphabet.clone(),
            perms,
        })
    }

    /// K4 as the Schreier graph of three fixed-point-free involutions.
    pub fn k4() -> Self {
        let a = Alphabet::identity(3).unwrap();
        Self::from_permutations(
            &a,
            vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1], vec![3, 2, 1, 0]],
        )
        .unwrap()
    }

    /// The Petersen graph: outer and inner cycles as one free letter, spokes as an involution.
    pub fn petersen() -> Self {
        let a = Alphabet::from_one_based(3, &[2, 1, 3]).unwrap();
        let mut s = vec![0usize; 10];
        for j in 0..5 {
            s[j] = (j + 1) % 5;
            s[5 + j] = 5 + (j + 2) % 5;
        }
        let mut s_inv = vec![0usize; 10];
        for (x, &y) in s.iter().enumerate() {
            s_inv[y] = x;
        }
        let spokes: Vec<usize> = (0..10).map(|x| (x + 5) % 10).collect();
        Self::from_permutations(&a, vec![s, s_inv, spokes]).unwrap()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn perm(&self, i: usize) -> &[u32] {
        &self.perms[i]
    }

    /// `alpha_i(x)`.
    #[inline]
    pub fn act(&self, i: usize, x: usize) -> usize {
        self.perms[i][x] as usize
    }

    /// One step of the walk along letter `i`: `alpha_i^{-1}(x)`.
    #[inline]
    pub fn step(&self, i: usize, x: usize) -> usize {
        self.perms[self.alphabet.star(i)][x] as usize
    }

    /// `phi(w, x)` with `g_i -> alpha_i^{-1}`, rightmost letter applied first, so
    /// `phi(ab, x) = phi(a, phi(b, x))`.
    pub fn apply_word(&self, w: &ReducedWord, x: usize) -> usize {
        w.letters().rev().fold(x, |y, l| self.step(l, y))
    }

    /// Same as `apply_word` for raw 0-based letters (left to right).
    pub fn apply_letters(&self, letters: &[usize], x: usize) -> usize {
        letters.iter().rev().fold(x, |y, &l| self.step(l, y))
    }

    /// Number of letters `i` with `alpha_i(y) = x`, i.e. the edge multiplicity.
    pub fn multiplicity(&self, x: usize, y: usize) -> usize {
        (0..self.alphabet.d()).filter(|&i| self.act(i, y) == x).count()
    }

    /// Undirected simple-graph test: no loops and no repeated neighbors.
    pub fn is_simple(&self) -> bool {
        (0..self.n).all(|x| {
            let mut nb: Vec<usize> = (0..self.alphabet.d()).map(|i| self.step(i, x)).collect();
            let before = nb.len();
            nb.sort_unstable();
            nb.dedup();
            nb.len() == before && !nb.contains(&x)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structural_examples() {
        let a = Alphabet::identity(3).unwrap();
        let g = random_schreier(&a, 4, 7).unwrap();
        for i in 0..3 {
            let p = g.perm(i);
            assert!((0..4).all(|x| p[x] as usize != x && p[p[x] as usize] as usize == x));
        }
        let b = Alphabet::paired(4).unwrap();
        let h = random_schreier(&b, 5, 1).unwrap();
        assert!((0..5).all(|x| h.act(1, h.act(0, x)) == x));
        assert_eq!(
            random_schreier(&a, 5, 0).unwrap_err(),
            GraphError::OddSizeWithMatchings { n: 5 }
        );
    }

    #[test]
    fn k4_and_loops() {
        let k4 = SchreierGraph::k4();
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(k4.multiplicity(x, y), usize::from(x != y));
            }
        }
        assert!(k4.is_simple() && SchreierGraph::petersen().is_simple());
        let a = Alphabet::identity(3).unwrap();
        let loopy = SchreierGraph::from_permutations(&a, vec![vec![0, 1], vec![1, 0], vec![1, 0]]).unwrap();
        assert_eq!(loopy.multiplicity(0, 0), 1);
        assert_eq!(loopy.multiplicity(0, 1), 2);
    }

    #[test]
    fn involution_constraint_checked() {
        let b = Alphabet::paired(4).unwrap();
        let id = vec![0, 1, 2];
        let cyc = vec![1, 2, 0];
        let err = SchreierGraph::from_permutations(&b, vec![cyc.clone(), cyc, id.clone(), id]).unwrap_err();
        assert_eq!(err, GraphError::InvolutionConstraintViolated { i: 1 });
        let a = Alphabet::identity(3).unwrap();
        let bad = SchreierGraph::from_permutations(&a, vec![vec![0, 0], vec![0, 1], vec![0, 1]]);
        assert!(matches!(bad, Err(GraphError::NotAPermutation { i: 1, .. })));
    }
}
