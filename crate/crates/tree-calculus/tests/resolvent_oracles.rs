mod common;

use common::*;
use group_core::{Alphabet, AnisotropyVector, ReducedWord};
use tree_calculus::*;

#[test]
fn rho_prime_uniform_matches_tree_radius() {
    for d in 3..=8 {
        let want = 2.0 * ((d - 1) as f64).sqrt() / d as f64;
        assert!((rho_prime(&uniform(d)) - want).abs() < 1e-10, "d = {d}");
        if d % 2 == 0 {
            let paired = AnisotropyVector::uniform(&Alphabet::paired(d).unwrap());
            assert!((rho_prime(&paired) - want).abs() < 1e-10);
        }
        assert!((rho(&uniform(d)).unwrap().rho - want).abs() < 1e-10);
    }
}

#[test]
fn totally_asymmetric_radii() {
    let p = totally_asymmetric();
    // no backtracking products at all, so the convex minimum is at s = 0
    assert_eq!(rho_prime(&p), 0.0);
    assert!((rho(&p).unwrap().rho - 0.5f64.sqrt()).abs() < 1e-8);
}

#[test]
fn reversible_radii_coincide() {
    for seed in 0..20 {
        let p = random_reversible(seed);
        let r = rho(&p).unwrap();
        assert!((r.rho - r.rho_prime).abs() < 1e-8, "{p}: {r:?}");
    }
}

#[test]
fn radii_ordered_and_below_one() {
    for seed in 0..50 {
        let p = random_p(seed);
        let r = rho(&p).unwrap();
        assert!(r.rho_prime <= r.rho + 1e-12 && r.rho < 1.0, "{p}");
    }
}

#[test]
fn closed_form_matches_damped_iteration() {
    for seed in 0..20 {
        let p = random_p(seed);
        let rp = rho_prime(&p);
        for z in [rp * 1.05 + 0.01, 1.0, 1.7, 5.0] {
            let a = solve_gamma(&p, z).unwrap();
            let b = solve_gamma_iterative(&p, z, 0.5, 100_000, 1e-14).unwrap();
            assert!(a.residual < 1e-12);
            for i in 0..p.d() {
                assert!((a.gamma[i] - b.gamma[i]).abs() < 1e-9 * a.gamma[i], "{p} z={z}");
                assert_eq!(a.gamma[i], a.gamma[p.alphabet().star(i)]);
                assert!(a.r[i] * a.r[p.alphabet().star(i)] < 1.0);
            }
            assert!((a.ree - b.ree).abs() < 1e-9 * a.ree);
        }
    }
}

#[test]
fn gamma_decreasing_in_z() {
    let p = random_p(4);
    let rp = rho_prime(&p);
    let mut last: Option<Vec<f64>> = None;
    for k in 0..20 {
        let z = rp + 1e-6 + k as f64 * 0.1;
        let g = solve_gamma(&p, z).unwrap().gamma;
        if let Some(prev) = &last {
            assert!(g.iter().zip(prev).all(|(a, b)| a < b));
        }
        last = Some(g);
    }
}

#[test]
fn qnormal_identities() {
    for seed in 0..50 {
        let p = random_p(seed);
        let star = p.alphabet().star_table();
        let a = solve_gamma(&p, 1.0).unwrap();
        assert!((criterion_linear(&a.r, star) - 1.0).abs() < 1e-8, "{p}");
        let b = rho(&p).unwrap();
        let c2 = criterion_squared(&b.profile.r, star);
        assert!((c2 - 1.0).abs() < 1e-8, "{p}: {c2}");
    }
}

#[test]
fn green_values_uniform_d3() {
    let p = uniform(3);
    let a = p.alphabet();
    let e = ReducedWord::identity(a);
    assert!((green_value(&p, &e).unwrap() - 2.0).abs() < 1e-12);
    let g1 = ReducedWord::from_letters(a, &[0]).unwrap();
    assert!((green_value(&p, &g1).unwrap() - 1.0).abs() < 1e-12);
    for w in [[0, 1, 0], [2, 1, 0], [1, 2, 1]] {
        let g = ReducedWord::from_letters(a, &w).unwrap();
        assert!((green_value(&p, &g).unwrap() - 0.25).abs() < 1e-12);
    }
}

#[test]
fn series_coefficients_match_exact_dp() {
    for seed in [0u64, 1, 2, 5] {
        let p = random_p(seed);
        let t_max = if p.d() == 3 { 16 } else { 10 };
        let series = resolvent_series(&p, t_max);
        let mut dp = DpWalk::new(&p, DEFAULT_DP_BUDGET).unwrap();
        let words: Vec<Vec<usize>> = vec![vec![], vec![0], vec![1, 0], vec![2, 2 % p.d(), 0]]
            .into_iter()
            .filter(|w| ReducedWord::from_letters(p.alphabet(), w).is_ok())
            .collect();
        let coeffs: Vec<Vec<f64>> = words.iter().map(|w| series.transition_probabilities(w)).collect();
        for t in 0..=t_max {
            for (w, c) in words.iter().zip(&coeffs) {
                let g = ReducedWord::from_letters(p.alphabet(), w).unwrap();
                let exact = dp.prob(PackedWord::from_word(&g).unwrap());
                assert!((c[t] - exact).abs() < 1e-14, "{p} t={t} w={w:?}");
            }
            if t < t_max {
                dp.step().unwrap();
            }
        }
    }
}

#[test]
fn product_formula_matches_summed_series() {
    // sum_t P^t(e,g) with a tail C rho^T / (1 - rho) far below 1e-9
    for p in [uniform(3), random_p(1), random_p(2)] {
        let r = rho(&p).unwrap().rho;
        let t_max = ((1e-12 * (1.0 - r)).ln() / r.ln()).ceil() as usize + 50;
        let series = resolvent_series(&p, t_max.min(650));
        let mut words = vec![vec![]];
        for len in 1..=4 {
            let mut w = Vec::new();
            for k in 0..len {
                let l = (k * 2 + len) % p.d();
                if w.last().is_some_and(|&x| p.alphabet().star(x) == l) {
                    w.push((l + 1) % p.d());
                } else {
                    w.push(l);
                }
            }
            words.push(w);
        }
        for w in words {
            let g = match ReducedWord::from_letters(p.alphabet(), &w) {
                Ok(g) => g,
                Err(_) => continue,
            };
            let sum: f64 = series.transition_probabilities(&w).iter().sum();
            let u = green_value(&p, &g).unwrap();
            assert!((sum - u).abs() < 1e-8, "{p} {g}: {sum} vs {u}");
        }
    }
}

#[test]
fn haagerup_examples() {
    let p = uniform(3);
    let rho3 = 2.0 * 2f64.sqrt() / 3.0;
    let h1 = haagerup_bounds(&p, 1, DEFAULT_DP_BUDGET).unwrap();
    assert!((h1.lower - rho3).abs() < 1e-10);
    assert_eq!(h1.upper, 1.0);
    let h50 = haagerup_bounds(&p, 50, 1000).unwrap();
    assert!(h50.upper <= rho3 * 51f64.powf(0.04) + 1e-12);
    assert!(h50.exact_l2.is_none());
    let h10 = haagerup_bounds(&p, 10, DEFAULT_DP_BUDGET).unwrap();
    let exact = h10.exact_l2.unwrap();
    assert!(exact <= rho3.powi(10), "{exact}");
}
