use statrs::function::erf::erfc;

/// Entropy of the simple random walk on the `d`-regular tree: `((d-2)/d) log(d-1)`.
pub fn srw_entropy(d: usize) -> f64 {
    let d = d as f64;
    (d - 2.0) / d * (d - 1.0).ln()
}

fn gaussian_tail(z: f64) -> f64 {
    0.5 * erfc(z / std::f64::consts::SQRT_2)
}

/// `z` with `P[Z >= z] = eps` for a standard normal `Z`, by bisection.
pub fn gaussian_tail_inverse(eps: f64) -> f64 {
    let (mut lo, mut hi) = (-40.0f64, 40.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if gaussian_tail(mid) > eps {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Second-order window of the simple random walk: the inverse of
/// `s -> P[Z >= (d-2)^{3/2} s / (2 sqrt(d(d-1)))]`.
pub fn phi_profile(d: usize, eps: f64) -> f64 {
    let df = d as f64;
    gaussian_tail_inverse(eps) * 2.0 * (df * (df - 1.0)).sqrt() / (df - 2.0).powf(1.5)
}
