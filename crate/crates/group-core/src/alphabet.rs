use std::fmt;
use std::sync::Arc;

use crate::{GroupError, Result};

#[derive(Debug, PartialEq, Eq)]
struct Inner {
    star: Vec<usize>,
    q1: usize,
}

/// The generating set `[d]` together with the involution `*`.
///
/// Letters `i` with `i* = i` generate copies of `Z/2Z`, the remaining ones
/// come in pairs `{i, i*}` generating copies of `Z`. Cloning is cheap.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet(Arc<Inner>);

impl Alphabet {
    /// Builds an alphabet from a 0-based involution table.
    pub fn new(star: Vec<usize>) -> Result<Self> {
        let d = star.len();
        Self::check_involution(&star)?;
        if d < 3 {
            return Err(GroupError::DegreeTooSmall { d });
        }
        let q1 = (0..d).filter(|&i| star[i] == i).count();
        Ok(Alphabet(Arc::new(Inner { star, q1 })))
    }

    /// `make_alphabet` with the 1-based involution of the text formats.
    pub fn from_one_based(d: usize, involution: &[usize]) -> Result<Self> {
        if involution.len() != d {
            return Err(GroupError::NotAnInvolution(format!(
                "expected {d} entries, got {}",
                involution.len()
            )));
        }
        let mut star = Vec::with_capacity(d);
        for &j in involution {
            if j == 0 || j > d {
                return Err(GroupError::LetterOutOfRange { letter: j, d });
            }
            star.push(j - 1);
        }
        Self::new(star)
    }

    /// All letters are self-inverse: the free product of `d` copies of `Z/2Z`.
    pub fn identity(d: usize) -> Result<Self> {
        Self::new((0..d).collect())
    }

    /// Letters paired as `(1,2), (3,4), ...`; `d` must be even.
    pub fn paired(d: usize) -> Result<Self> {
        if d % 2 == 1 {
            return Err(GroupError::NotAnInvolution(format!(
                "cannot pair an odd number ({d}) of letters"
            )));
        }
        Self::new((0..d).map(|i| i ^ 1).collect())
    }

    /// Parses `id`, `pairs` or a comma separated 1-based table such as `2,1,4,3`.
    pub fn parse(d: usize, spec: &str) -> Result<Self> {
        match spec.trim() {
            "id" | "identity" => Self::identity(d),
            "pairs" | "paired" => Self::paired(d),
            s => {
                let mut inv = Vec::with_capacity(d);
                for (k, tok) in s.split(',').enumerate() {
                    let v = tok.trim().parse::<usize>().map_err(|e| GroupError::Parse {
                        line: 1,
                        col: k + 1,
                        msg: format!("bad involution entry {tok:?}: {e}"),
                    })?;
                    inv.push(v);
                }
                Self::from_one_based(d, &inv)
            }
        }
    }

    fn check_involution(star: &[usize]) -> Result<()> {
        let d = star.len();
        for (i, &j) in star.iter().enumerate() {
            if j >= d {
                return Err(GroupError::LetterOutOfRange { letter: j + 1, d });
            }
            if star[j] != i {
                return Err(GroupError::NotAnInvolution(format!(
                    "{} -> {} -> {}",
                    i + 1,
                    j + 1,
                    star[j] + 1
                )));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.0.star.len()
    }

    /// The involution applied to letter `i`.
    #[inline]
    pub fn star(&self, i: usize) -> usize {
        self.0.star[i]
    }

    pub fn star_table(&self) -> &[usize] {
        &self.0.star
    }

    pub fn q1(&self) -> usize {
        self.0.q1
    }

    pub fn q2(&self) -> usize {
        (self.d() - self.0.q1) / 2
    }

    pub fn is_fixed(&self, i: usize) -> bool {
        self.star(i) == i
    }

    /// One representative per class `{i, i*}`, the smaller letter.
    pub fn classes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.d()).filter(move |&i| i <= self.star(i))
    }

    /// The involution in the 1-based text form `2,1,4,3`.
    pub fn involution_string(&self) -> String {
        self.0
            .star
            .iter()
            .map(|j| (j + 1).to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Alphabet{{d={}, inv=({}), q1={}, q2={}}}",
            self.d(),
            self.involution_string(),
            self.q1(),
            self.q2()
        )
    }
}
