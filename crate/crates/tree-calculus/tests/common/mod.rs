#![allow(dead_code)]

use group_core::{rng, Alphabet, AnisotropyVector};
use rand::Rng;

/// Seeded random jump law over d in {3,4,5}, alternating all-fixed and paired shapes.
pub fn random_p(seed: u64) -> AnisotropyVector {
    let mut r = rng::stream(seed, 17);
    let d = 3 + (seed % 3) as usize;
    let alphabet = if seed.is_multiple_of(2) {
        Alphabet::identity(d).unwrap()
    } else {
        match d {
            3 => Alphabet::parse(3, "2,1,3").unwrap(),
            4 => Alphabet::paired(4).unwrap(),
            _ => Alphabet::parse(5, "2,1,3,5,4").unwrap(),
        }
    };
    let w: Vec<f64> = (0..d).map(|_| r.random_range(0.05..1.0)).collect();
    AnisotropyVector::from_weights(&alphabet, &w).unwrap()
}

pub fn random_reversible(seed: u64) -> AnisotropyVector {
    let mut r = rng::stream(seed, 23);
    let alphabet = if seed.is_multiple_of(2) {
        Alphabet::identity(3).unwrap()
    } else {
        Alphabet::paired(4).unwrap()
    };
    let d = alphabet.d();
    let mut w = vec![0.0; d];
    for i in alphabet.classes() {
        let x = r.random_range(0.05..1.0);
        w[i] = x;
        w[alphabet.star(i)] = x;
    }
    AnisotropyVector::from_weights(&alphabet, &w).unwrap()
}

pub fn uniform(d: usize) -> AnisotropyVector {
    AnisotropyVector::uniform(&Alphabet::identity(d).unwrap())
}

pub fn totally_asymmetric() -> AnisotropyVector {
    AnisotropyVector::new(&Alphabet::paired(4).unwrap(), vec![0.5, 0.0, 0.5, 0.0]).unwrap()
}
