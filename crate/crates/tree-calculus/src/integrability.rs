use crate::{Result, TreeError};

/// Integrability of `F(g) = prod_t alpha_{i_t}` over the free product.
#[derive(Clone, Debug)]
pub struct TransferReport {
    /// `sum_i alpha_i (1 - alpha_{i*}) / (1 - alpha_i alpha_{i*})`.
    pub criterion: f64,
    /// Class weights: `alpha_i` for `i = i*`, `alpha_i/(1-alpha_i) + alpha_{i*}/(1-alpha_{i*})` for pairs.
    pub class_weights: Vec<f64>,
    /// Perron root of `(J - I) diag(class_weights)` over words without repetition.
    pub perron: f64,
    pub converges: bool,
    /// `criterion < 1` and `perron < 1` agree.
    pub consistent: bool,
}

fn validate(alpha: &[f64], star: &[usize]) -> Result<()> {
    if alpha.len() != star.len() {
        return Err(TreeError::InvalidAlpha("length mismatch".into()));
    }
    for (i, &a) in alpha.iter().enumerate() {
        if !(0.0..1.0).contains(&a) {
            return Err(TreeError::InvalidAlpha(format!("alpha_{} = {a}", i + 1)));
        }
        if star.get(star[i]) != Some(&i) {
            return Err(TreeError::InvalidAlpha("not an involution".into()));
        }
    }
    Ok(())
}

/// Perron root of `(J - I) diag(g)`: the positive root of `sum_j g_j / (x + g_j) = 1`.
fn class_perron(g: &[f64]) -> f64 {
    if g.iter().filter(|&&x| x > 0.0).count() < 2 {
        return 0.0;
    }
    let h = |x: f64| g.iter().map(|&gj| gj / (x + gj)).sum::<f64>();
    let (mut lo, mut hi) = (0.0, g.iter().sum::<f64>());
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `alpha` in `[0,1)^d` and an involution table (0-based, any `d >= 1`).
pub fn integrability(alpha: &[f64], star: &[usize]) -> Result<TransferReport> {
    validate(alpha, star)?;
    let criterion: f64 = (0..alpha.len())
        .map(|i| {
            let (a, b) = (alpha[i], alpha[star[i]]);
            a * (1.0 - b) / (1.0 - a * b)
        })
        .sum();
    let class_weights: Vec<f64> = (0..alpha.len())
        .filter(|&i| i <= star[i])
        .map(|i| {
            if star[i] == i {
                alpha[i]
            } else {
                let j = star[i];
                alpha[i] / (1.0 - alpha[i]) + alpha[j] / (1.0 - alpha[j])
            }
        })
        .collect();
    let perron = class_perron(&class_weights);
    Ok(TransferReport {
        criterion,
        class_weights,
        perron,
        converges: criterion < 1.0,
        consistent: (criterion < 1.0) == (perron < 1.0),
    })
}

/// Sums of `F` over reduced words by length, from the letter transfer matrix
/// `T(i,j) = alpha_j 1{j != i*}`.
#[derive(Clone, Debug)]
pub struct PartialSums {
    /// `S_0, ..., S_L`.
    pub sums: Vec<f64>,
    /// Collatz-Wielandt bracket `[lo, hi]` on the Perron root of `T` from the last two levels.
    pub bracket: (f64, f64),
    /// `Some(converges)` when the bracket excludes 1, `None` when it straddles 1.
    pub bracket_verdict: Option<bool>,
    /// Two-step growth ratio `sqrt(S_L / S_{L-2})`, robust to period-2 transfer matrices.
    pub growth_ratio: f64,
}

impl PartialSums {
    /// Bracket verdict when decisive, otherwise the growth-ratio verdict.
    pub fn verdict(&self) -> bool {
        self.bracket_verdict.unwrap_or(self.growth_ratio < 1.0)
    }
}

pub fn partial_sums(alpha: &[f64], star: &[usize], max_len: usize) -> Result<PartialSums> {
    validate(alpha, star)?;
    let d = alpha.len();
    let mut sums = vec![1.0];
    // v[j]: sum over reduced words of the current length whose last letter is j
    let mut v: Vec<f64> = alpha.to_vec();
    let mut prev = v.clone();
    if max_len >= 1 {
        sums.push(v.iter().sum());
    }
    for _ in 2..=max_len {
        let total: f64 = v.iter().sum();
        let next: Vec<f64> = (0..d).map(|j| alpha[j] * (total - v[star[j]])).collect();
        prev = std::mem::replace(&mut v, next);
        sums.push(v.iter().sum());
    }
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for j in 0..d {
        if prev[j] > 0.0 {
            let r = v[j] / prev[j];
            lo = lo.min(r);
            hi = hi.max(r);
        }
    }
    if lo == f64::INFINITY {
        lo = 0.0;
    }
    let bracket_verdict = if hi < 1.0 {
        Some(true)
    } else if lo > 1.0 {
        Some(false)
    } else {
        None
    };
    let l = sums.len() - 1;
    let growth_ratio = if l >= 2 && sums[l - 2] > 0.0 {
        (sums[l] / sums[l - 2]).sqrt()
    } else {
        0.0
    };
    Ok(PartialSums {
        sums,
        bracket: (lo, hi),
        bracket_verdict,
        growth_ratio,
    })
}
