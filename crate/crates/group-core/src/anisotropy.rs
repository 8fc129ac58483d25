use std::fmt;

use crate::{Alphabet, GroupError, Result};

/// Jump law `p` of the walk, tied to an alphabet.
///
/// Construction checks `p_i >= 0`, `|sum p - 1| <= 1e-12` and
/// `p_i + p_{i*} > 0`, then divides by the sum once.
#[derive(Clone, PartialEq)]
pub struct AnisotropyVector {
    alphabet: Alphabet,
    p: Vec<f64>,
}

impl AnisotropyVector {
    pub fn new(alphabet: &Alphabet, masses: Vec<f64>) -> Result<Self> {
        let d = alphabet.d();
        if masses.len() != d {
            return Err(GroupError::InvalidMass(format!(
                "expected {d} masses, got {}",
                masses.len()
            )));
        }
        if let Some((i, m)) = masses
            .iter()
            .enumerate()
            .find(|(_, m)| !m.is_finite() || **m < 0.0)
        {
            return Err(GroupError::InvalidMass(format!("p_{} = {m}", i + 1)));
        }
        let sum: f64 = masses.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(GroupError::InvalidMass(format!("masses sum to {sum}")));
        }
        for i in 0..d {
            let j = alphabet.star(i);
            if masses[i] + masses[j] <= 0.0 {
                return Err(GroupError::HippoViolated { i: i + 1, j: j + 1 });
            }
        }
        let p = masses.iter().map(|m| m / sum).collect();
        Ok(AnisotropyVector {
            alphabet: alphabet.clone(),
            p,
        })
    }

    /// Like `new` but normalizes arbitrary nonnegative weights first.
    pub fn from_weights(alphabet: &Alphabet, weights: &[f64]) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if !(sum > 0.0) || !sum.is_finite() {
            return Err(GroupError::InvalidMass(format!("weights sum to {sum}")));
        }
        let mut m: Vec<f64> = weights.iter().map(|w| w / sum).collect();
        let s2: f64 = m.iter().sum();
        m.iter_mut().for_each(|x| *x /= s2);
        Self::new(alphabet, m)
    }

    pub fn uniform(alphabet: &Alphabet) -> Self {
        let d = alphabet.d();
        AnisotropyVector {
            alphabet: alphabet.clone(),
            p: vec![1.0 / d as f64; d],
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn d(&self) -> usize {
        self.p.len()
    }

    #[inline]
    pub fn p(&self, i: usize) -> f64 {
        self.p[i]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    /// `c_i = p_i p_{i*}`, the weight of a backtrack through letter `i`.
    pub fn products(&self) -> Vec<f64> {
        (0..self.d())
            .map(|i| self.p[i] * self.p[self.alphabet.star(i)])
            .collect()
    }

    /// `p_i = p_{i*}` for all `i`, i.e. the walk is reversible w.r.t. counting measure.
    pub fn is_reversible(&self) -> bool {
        (0..self.d()).all(|i| self.p[i] == self.p[self.alphabet.star(i)])
    }

    pub fn is_uniform(&self) -> bool {
        let u = 1.0 / self.d() as f64;
        self.p.iter().all(|&x| (x - u).abs() <= 1e-15)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.d()).filter(|&i| self.p[i] > 0.0).collect()
    }

    /// Parses `p d=<d> inv=<i1,...> mass=<m1,...>`; masses accept decimals or `a/b`.
    pub fn parse(line: &str) -> Result<Self> {
        let err = |col: usize, msg: String| GroupError::Parse { line: 1, col, msg };
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("p") => {}
            other => return Err(err(1, format!("expected leading 'p', found {other:?}"))),
        }
        let (mut d, mut inv, mut mass) = (None, None, None);
        for tok in toks {
            let col = line.find(tok).map_or(0, |c| c + 1);
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| err(col, format!("expected key=value, found {tok:?}")))?;
            match k {
                "d" => {
                    d = Some(
                        v.parse::<usize>()
                            .map_err(|e| err(col, format!("bad d: {e}")))?,
                    )
                }
                "inv" => inv = Some(v.to_string()),
                "mass" => {
                    let mut m = Vec::new();
                    for s in v.split(',') {
                        m.push(parse_mass(s).ok_or_else(|| err(col, format!("bad mass {s:?}")))?);
                    }
                    mass = Some(m)
                }
                _ => return Err(err(col, format!("unknown key {k:?}"))),
            }
        }
        let d = d.ok_or_else(|| err(1, "missing d=".into()))?;
        let inv = inv.ok_or_else(|| err(1, "missing inv=".into()))?;
        let mass = mass.ok_or_else(|| err(1, "missing mass=".into()))?;
        let alphabet = Alphabet::parse(d, &inv)?;
        Self::new(&alphabet, mass)
    }
}

/// Decimal via the correctly rounded `f64` parser, or an exact ratio `a/b`.
pub(crate) fn parse_mass(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: f64 = a.trim().parse().ok()?;
        let b: f64 = b.trim().parse().ok()?;
        (b != 0.0).then(|| a / b)
    } else {
        s.parse().ok()
    }
}

impl fmt::Display for AnisotropyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self.p.iter().map(|x| format!("{x}")).collect();
        write!(
            f,
            "p d={} inv={} mass={}",
            self.d(),
            self.alphabet.involution_string(),
            m.join(",")
        )
    }
}

impl fmt::Debug for AnisotropyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
