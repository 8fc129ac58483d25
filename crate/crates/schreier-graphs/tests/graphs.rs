use group_core::{rng, sample_trajectory, Alphabet, AnisotropyVector, ReducedWord};
use rand::Rng;
use schreier_graphs::{
    export_graph, import, random_schreier, read_file, write_file, GraphFile, Kernel,
    SchreierGraph, SchreierKernel,
};

fn alphabet(seed: u64) -> Alphabet {
    match seed % 3 {
        0 => Alphabet::identity(3).unwrap(),
        1 => Alphabet::paired(4).unwrap(),
        _ => Alphabet::parse(5, "2,1,3,5,4").unwrap(),
    }
}

fn random_p(a: &Alphabet, seed: u64) -> AnisotropyVector {
    let mut r = rng::stream(seed, 99);
    let w: Vec<f64> = (0..a.d()).map(|_| r.random_range(0.05..1.0)).collect();
    AnisotropyVector::from_weights(a, &w).unwrap()
}

fn random_word(a: &Alphabet, r: &mut rng::Rng) -> ReducedWord {
    let len = r.random_range(0..12);
    let letters: Vec<usize> = (0..len).map(|_| r.random_range(0..a.d())).collect();
    ReducedWord::reduce(a, &letters).unwrap()
}

#[test]
fn unit_and_involution_words() {
    let k4 = SchreierGraph::k4();
    let e = ReducedWord::identity(k4.alphabet());
    let mut g1g1 = ReducedWord::identity(k4.alphabet());
    g1g1.right_mul(0);
    g1g1.right_mul(0);
    for x in 0..4 {
        assert_eq!(k4.apply_word(&e, x), x);
        assert_eq!(k4.apply_word(&g1g1, x), x);
        assert_eq!(k4.apply_letters(&[0, 0], x), x);
    }
}

#[test]
fn action_is_a_homomorphism() {
    let mut r = rng::stream(5, 0);
    for k in 0..1000u64 {
        let a = alphabet(k);
        let g = random_schreier(&a, 2 * (1 + k as usize % 20), k).unwrap();
        let u = random_word(&a, &mut r);
        let v = random_word(&a, &mut r);
        let x = r.random_range(0..g.n());
        let uv = u.multiply(&v).unwrap();
        assert_eq!(g.apply_word(&uv, x), g.apply_word(&u, g.apply_word(&v, x)));
    }
}

#[test]
fn kernels_are_doubly_stochastic() {
    for k in 0..30u64 {
        let a = alphabet(k);
        let n = 2 * (1 + k as usize * 7);
        let g = random_schreier(&a, n, k).unwrap();
        for i in 0..a.d() {
            let inv = g.perm(a.star(i));
            assert!((0..n).all(|x| inv[g.act(i, x)] as usize == x));
        }
        let kernel = SchreierKernel::new(g, &random_p(&a, k)).unwrap();
        let ones = vec![1.0; n];
        let mut out = vec![0.0; n];
        kernel.apply(&ones, &mut out);
        assert!(out.iter().all(|v| (v - 1.0).abs() < 1e-12));
        let u = kernel.stationary();
        kernel.apply_adjoint(&u, &mut out);
        assert!(out.iter().zip(&u).all(|(a, b)| (a - b).abs() < 1e-12));
    }
}

#[test]
fn large_kernels_match_sparse_rows() {
    // above the parallel threshold, every entry must equal the row sum
    let a = Alphabet::paired(4).unwrap();
    let n = 40_000;
    let g = random_schreier(&a, n, 3).unwrap();
    let kernel = SchreierKernel::new(g, &random_p(&a, 3)).unwrap();
    let f: Vec<f64> = (0..n).map(|x| ((x * 7919) % 1000) as f64).collect();
    let mut out = vec![0.0; n];
    kernel.apply(&f, &mut out);
    for x in (0..n).step_by(997) {
        let expected: f64 = kernel.row(x).iter().map(|&(y, w)| w * f[y]).sum();
        assert_eq!(out[x], expected);
    }
}

/// Frequencies of `samples` against `probs`, each within 3 standard errors.
fn within_three_se(counts: &[usize], probs: &[f64], samples: usize) {
    for (y, (&c, &p)) in counts.iter().zip(probs).enumerate() {
        let freq = c as f64 / samples as f64;
        let se = (p * (1.0 - p) / samples as f64).sqrt().max(1e-9);
        assert!((freq - p).abs() <= 3.0 * se, "state {y}: {freq} vs {p}");
    }
}

#[test]
fn tree_walk_projects_onto_graph_walk() {
    let a = Alphabet::parse(3, "2,1,3").unwrap();
    let p = AnisotropyVector::new(&a, vec![0.5, 0.2, 0.3]).unwrap();
    let g = random_schreier(&a, 8, 11).unwrap();
    let kernel = SchreierKernel::new(g.clone(), &p).unwrap();
    let x0 = 3;
    let samples = 100_000;
    for t in [1usize, 3] {
        let mut law = vec![0.0; 8];
        law[x0] = 1.0;
        let mut next = vec![0.0; 8];
        for _ in 0..t {
            kernel.apply_adjoint(&law, &mut next);
            std::mem::swap(&mut law, &mut next);
        }
        let mut counts = vec![0usize; 8];
        for s in 0..samples as u64 {
            let traj = sample_trajectory(&p, t, s);
            counts[g.apply_word(&traj.final_position(), x0)] += 1;
        }
        within_three_se(&counts, &law, samples);
    }
}

#[test]
fn export_import_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for k in 0..20u64 {
        let a = alphabet(k);
        let g = random_schreier(&a, 2 * (1 + k as usize), 100 + k).unwrap();
        let text = export_graph(&g, &["generated for a round trip"]);
        assert_eq!(import(&text).unwrap(), GraphFile::Graph(g.clone()));
        let path = dir.path().join(format!("g{k}.txt"));
        write_file(&path, &GraphFile::Graph(g.clone()), &[]).unwrap();
        assert_eq!(read_file(&path).unwrap(), GraphFile::Graph(g));
    }
}
