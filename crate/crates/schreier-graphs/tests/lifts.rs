use group_core::{rng, Alphabet};
use schreier_graphs::{
    export_lift, import, random_lift, BaseGraph, ColoredWeights, GraphFile, Kernel, LiftGraph,
    LiftKernel,
};

fn k4_srw() -> ColoredWeights {
    ColoredWeights::simple(&BaseGraph::complete(4).unwrap()).unwrap()
}

fn dense<K: Kernel>(k: &K) -> Vec<Vec<f64>> {
    let n = k.len();
    let mut m = vec![vec![0.0; n]; n];
    for (x, row) in m.iter_mut().enumerate() {
        for (y, w) in k.row(x) {
            row[y] += w;
        }
    }
    m
}

#[test]
fn trivial_lift_is_the_base() {
    let c = k4_srw();
    let lift = random_lift(&c, 1, 0).unwrap();
    let k = LiftKernel::new(lift, &c).unwrap();
    let m = dense(&k);
    for u in 0..4 {
        for v in 0..4 {
            assert!((m[u][v] - c.base_chain()[(u, v)]).abs() < 1e-15);
        }
    }
}

#[test]
fn three_lift_of_k4_is_cubic() {
    let c = k4_srw();
    let lift = random_lift(&c, 3, 9).unwrap();
    assert_eq!(lift.states(), 12);
    assert!(lift.covers_base());
    for s in 0..12 {
        let nb = lift.neighbors(s);
        assert_eq!(nb.len(), 3);
        // the lift of an undirected edge is undirected
        for y in nb {
            assert!(lift.neighbors(y).contains(&s));
        }
    }
}

#[test]
fn lifted_kernel_preserves_its_invariant_law() {
    let a = Alphabet::from_one_based(5, &[2, 1, 3, 5, 4]).unwrap();
    // colors 1,2 joined by a free edge, a self-paired loop at 2, a free loop at 1
    let base = BaseGraph::new(2, &a, vec![(0, 1), (1, 0), (1, 1), (0, 0), (0, 0)]).unwrap();
    let c = ColoredWeights::new(&base, vec![0.5, 0.4, 0.6, 0.3, 0.2]).unwrap();
    for (n, seed) in [(2usize, 1u64), (10, 2), (50, 3), (20_000, 4)] {
        for colored in [&k4_srw(), &c] {
            let lift = random_lift(colored, n, seed).unwrap();
            assert!(lift.covers_base());
            let k = LiftKernel::new(lift, colored).unwrap();
            let pi = k.stationary();
            assert!((pi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            let mut out = vec![0.0; k.len()];
            k.apply_adjoint(&pi, &mut out);
            let scale = n as f64;
            assert!(out.iter().zip(&pi).all(|(a, b)| scale * (a - b).abs() < 1e-12));
            k.apply(&vec![1.0; k.len()], &mut out);
            assert!(out.iter().all(|v| (v - 1.0).abs() < 1e-12));
        }
    }
    assert!(!LiftKernel::new(random_lift(&c, 2, 0).unwrap(), &c).unwrap().is_reversible());
    assert!(LiftKernel::new(random_lift(&k4_srw(), 2, 0).unwrap(), &k4_srw()).unwrap().is_reversible());
}

#[test]
fn sampled_lift_steps_project_to_base_chain() {
    let c = k4_srw();
    let lift = random_lift(&c, 25, 6).unwrap();
    let k = LiftKernel::new(lift.clone(), &c).unwrap();
    let mut r = rng::stream(8, 0);
    let samples = 10_000;
    let start = lift.state(7, 2);
    let mut counts = [0usize; 4];
    for _ in 0..samples {
        let s = k.sample_step(start, &mut r);
        counts[lift.split(s).1] += 1;
    }
    for v in 0..4 {
        let p = c.base_chain()[(2, v)];
        let freq = counts[v] as f64 / samples as f64;
        let se = (p * (1.0 - p) / samples as f64).sqrt().max(1e-9);
        assert!((freq - p).abs() <= 3.0 * se, "color {v}: {freq} vs {p}");
    }
}

#[test]
fn lift_file_round_trip() {
    let c = k4_srw();
    for seed in 0..5 {
        let lift = random_lift(&c, 6, seed).unwrap();
        let text = export_lift(&lift, &["k4 lift"]);
        assert!(text.contains("base r=4\nedge 1 1 2\nedge 2 2 1\n"));
        assert_eq!(import(&text).unwrap(), GraphFile::Lift(lift));
    }
}

#[test]
fn mismatched_base_is_rejected() {
    let c = k4_srw();
    let other = ColoredWeights::simple(&BaseGraph::complete(3).unwrap()).unwrap();
    let lift: LiftGraph = random_lift(&other, 4, 0).unwrap();
    assert!(LiftKernel::new(lift, &c).is_err());
}
