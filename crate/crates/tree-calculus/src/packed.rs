use group_core::{Alphabet, ReducedWord};

/// A reduced word of length at most 32 packed into nibbles, head in the low nibble.
/// Letter `i` is stored as `i + 1`, so alphabets up to `d = 15` fit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PackedWord(pub u128);

impl PackedWord {
    pub const E: PackedWord = PackedWord(0);
    pub const MAX_LEN: usize = 32;

    #[inline]
    pub fn len(self) -> usize {
        (128 - self.0.leading_zeros() as usize).div_ceil(4)
    }

    #[inline]
    pub fn is_identity(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn head(self) -> Option<usize> {
        let h = (self.0 & 0xF) as usize;
        (h != 0).then(|| h - 1)
    }

    /// `g_i · self` given the involution table. Panics past `MAX_LEN` letters in debug builds.
    #[inline]
    pub fn left_mul(self, i: usize, star: &[usize]) -> PackedWord {
        match self.head() {
            Some(h) if star[h] == i => PackedWord(self.0 >> 4),
            _ => {
                debug_assert!(self.len() < Self::MAX_LEN);
                PackedWord((self.0 << 4) | (i as u128 + 1))
            }
        }
    }

    /// Letters from left (head) to right.
    pub fn letters(self) -> impl Iterator<Item = usize> {
        let mut w = self.0;
        std::iter::from_fn(move || {
            let h = (w & 0xF) as usize;
            if h == 0 {
                None
            } else {
                w >>= 4;
                Some(h - 1)
            }
        })
    }

    pub fn from_word(w: &ReducedWord) -> Option<PackedWord> {
        if w.len() > Self::MAX_LEN || w.alphabet().d() > 15 {
            return None;
        }
        let mut v = 0u128;
        for l in w.letters().rev() {
            v = (v << 4) | (l as u128 + 1);
        }
        Some(PackedWord(v))
    }

    pub fn to_word(self, alphabet: &Alphabet) -> ReducedWord {
        let letters: Vec<usize> = self.letters().collect();
        ReducedWord::from_letters(alphabet, &letters).expect("packed words are reduced")
    }
}
