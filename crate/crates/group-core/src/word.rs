use std::collections::VecDeque;
use std::fmt;

use crate::{Alphabet, GroupError, Result};

/// An element of the free product written as a reduced word.
///
/// Index 0 is the leftmost letter (the head). The walk multiplies on the
/// left, so `left_mul` is the hot path and costs amortized O(1).
#[derive(Clone, PartialEq, Eq)]
pub struct ReducedWord {
    alphabet: Alphabet,
    letters: VecDeque<u8>,
}

impl ReducedWord {
    /// The unit `e`.
    pub fn identity(alphabet: &Alphabet) -> Self {
        ReducedWord {
            alphabet: alphabet.clone(),
            letters: VecDeque::new(),
        }
    }

    /// Validates that `letters` (0-based, left to right) is already reduced.
    pub fn from_letters(alphabet: &Alphabet, letters: &[usize]) -> Result<Self> {
        let d = alphabet.d();
        let mut out = VecDeque::with_capacity(letters.len());
        for (pos, &l) in letters.iter().enumerate() {
            if l >= d {
                return Err(GroupError::LetterOutOfRange { letter: l + 1, d });
            }
            if let Some(&prev) = out.back() {
                if alphabet.star(prev as usize) == l {
                    return Err(GroupError::NotReduced { position: pos });
                }
            }
            out.push_back(l as u8);
        }
        Ok(ReducedWord {
            alphabet: alphabet.clone(),
            letters: out,
        })
    }

    /// Reduces an arbitrary letter sequence.
    pub fn reduce(alphabet: &Alphabet, letters: &[usize]) -> Result<Self> {
        let mut w = Self::identity(alphabet);
        for &l in letters {
            if l >= alphabet.d() {
                return Err(GroupError::LetterOutOfRange {
                    letter: l + 1,
                    d: alphabet.d(),
                });
            }
            w.right_mul(l);
        }
        Ok(w)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Word length, which is the tree distance to `e`.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> impl DoubleEndedIterator<Item = usize> + ExactSizeIterator + '_ {
        self.letters.iter().map(|&l| l as usize)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.letters().collect()
    }

    pub fn head(&self) -> Option<usize> {
        self.letters.front().map(|&l| l as usize)
    }

    pub fn last(&self) -> Option<usize> {
        self.letters.back().map(|&l| l as usize)
    }

    /// `self <- g_i · self`.
    #[inline]
    pub fn left_mul(&mut self, i: usize) {
        match self.letters.front() {
            Some(&h) if self.alphabet.star(h as usize) == i => {
                self.letters.pop_front();
            }
            _ => self.letters.push_front(i as u8),
        }
    }

    /// `self <- self · g_i`.
    #[inline]
    pub fn right_mul(&mut self, i: usize) {
        match self.letters.back() {
            Some(&h) if self.alphabet.star(h as usize) == i => {
                self.letters.pop_back();
            }
            _ => self.letters.push_back(i as u8),
        }
    }

    /// Group law, reduced form of the concatenation `self · other`.
    pub fn multiply(&self, other: &ReducedWord) -> Result<ReducedWord> {
        if self.alphabet != other.alphabet {
            return Err(GroupError::AlphabetMismatch);
        }
        let mut out = self.clone();
        for l in other.letters() {
            out.right_mul(l);
        }
        Ok(out)
    }

    /// Reversed word with `*` applied to every letter.
    pub fn inverse(&self) -> ReducedWord {
        ReducedWord {
            alphabet: self.alphabet.clone(),
            letters: self
                .letters
                .iter()
                .rev()
                .map(|&l| self.alphabet.star(l as usize) as u8)
                .collect(),
        }
    }

    /// Checks the reduced-form invariant; always true for words built through this API.
    pub fn is_reduced(&self) -> bool {
        self.letters
            .iter()
            .zip(self.letters.iter().skip(1))
            .all(|(&a, &b)| self.alphabet.star(a as usize) != b as usize)
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self.letters().map(|l| format!("g{}", l + 1)).collect();
        write!(f, "{}", parts.join("."))
    }
}

impl fmt::Debug for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ReducedWord({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(a: &Alphabet, l: &[usize]) -> ReducedWord {
        ReducedWord::from_letters(a, l).unwrap()
    }

    #[test]
    fn multiply_examples() {
        let a = Alphabet::paired(4).unwrap();
        let e = ReducedWord::identity(&a);
        let x = w(&a, &[0, 2, 2]);
        assert!(x.is_reduced());
        assert_eq!(e.multiply(&x).unwrap(), x);
        // g1 · g1* = e
        assert!(w(&a, &[0]).multiply(&w(&a, &[1])).unwrap().is_identity());
        // (g1 g3)(g3* g1) = g1 g1 with 3* = 4
        let lhs = w(&a, &[0, 2]).multiply(&w(&a, &[3, 0])).unwrap();
        assert_eq!(lhs, w(&a, &[0, 0]));
    }

    #[test]
    fn rejects_unreduced_and_mismatch() {
        let a = Alphabet::identity(3).unwrap();
        assert_eq!(
            ReducedWord::from_letters(&a, &[0, 1, 1]).unwrap_err(),
            GroupError::NotReduced { position: 2 }
        );
        let b = Alphabet::identity(4).unwrap();
        assert_eq!(
            ReducedWord::identity(&a)
                .multiply(&ReducedWord::identity(&b))
                .unwrap_err(),
            GroupError::AlphabetMismatch
        );
    }

    #[test]
    fn left_and_right_agree() {
        let a = Alphabet::parse(5, "2,1,3,5,4").unwrap();
        let seq = [0usize, 2, 2, 1, 3, 4, 4, 0, 1, 2];
        let mut left = ReducedWord::identity(&a);
        for &l in seq.iter().rev() {
            left.left_mul(l);
        }
        let right = ReducedWord::reduce(&a, &seq).unwrap();
        assert_eq!(left, right);
        assert_eq!(format!("{right}"), "g5.g3");
    }
}
