use group_core::{rng, Alphabet, AnisotropyVector};
use mixing_lab::{
    brute_force_nb_counts, geronimus, geronimus_eval, nonbacktracking_dist_exact, random_chain,
    random_reversible_chain, stopping_bound_check, StopSpec,
};
use num::{BigInt, BigRational, One};
use rand::Rng;
use schreier_graphs::{
    random_lift, random_schreier, BaseGraph, ColoredWeights, Kernel, LiftKernel, SchreierKernel,
};
use serde_json::{json, Value};
use tree_calculus::{
    criterion_linear, criterion_squared, integrability, partial_sums, rho, solve_gamma,
    spectral_summary, transform_p_to_pprime,
};

use crate::args::Suite;
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult, Kind};
use crate::output::{cell, Report, Table};

const IDENTITY_TOL: f64 = 1e-8;
const KERNEL_TOL: f64 = 1e-12;

/// Outcome of one suite: how many instances ran and which failed.
struct Outcome {
    name: &'static str,
    checks: usize,
    failures: Vec<String>,
    worst: f64,
}

impl Outcome {
    fn new(name: &'static str) -> Self {
        Outcome {
            name,
            checks: 0,
            failures: Vec::new(),
            worst: 0.0,
        }
    }

    /// Records one instance with deviation `err` from its identity.
    fn record(&mut self, ok: bool, err: f64, what: impl FnOnce() -> String) {
        self.checks += 1;
        if err.is_finite() {
            self.worst = self.worst.max(err);
        }
        if !ok {
            self.failures.push(what());
        }
    }

    fn json(&self) -> Value {
        json!({
            "suite": self.name,
            "checks": self.checks,
            "failed": self.failures.len(),
            "worst_deviation": self.worst,
            "failures": self.failures,
        })
    }
}

/// Seeded jump law over d in {3,4,5}, alternating all-fixed and paired alphabets.
fn random_p(seed: u64) -> AnisotropyVector {
    let mut r = rng::stream(seed, 17);
    let d = 3 + (seed % 3) as usize;
    let alphabet = if seed.is_multiple_of(2) {
        Alphabet::identity(d)
    } else {
        match d {
            3 => Alphabet::parse(3, "2,1,3"),
            4 => Alphabet::paired(4),
            _ => Alphabet::parse(5, "2,1,3,5,4"),
        }
    }
    .expect("valid alphabet");
    let w: Vec<f64> = (0..d).map(|_| r.random_range(0.05..1.0)).collect();
    AnisotropyVector::from_weights(&alphabet, &w).expect("positive weights")
}

fn qnormal(count: usize, seed: u64) -> CliResult<Outcome> {
    let mut o = Outcome::new("qnormal");
    for i in 0..count as u64 {
        let p = random_p(seed.wrapping_add(i));
        let star = p.alphabet().star_table();
        let at_one = criterion_linear(&solve_gamma(&p, 1.0)?.r, star);
        let at_rho = criterion_squared(&rho(&p)?.profile.r, star);
        let err = (at_one - 1.0).abs().max((at_rho - 1.0).abs());
        o.record(err < IDENTITY_TOL, err, || format!("{p}: linear {at_one}, squared {at_rho}"));
        let s = spectral_summary(&p, 200, 1000, seed.wrapping_add(i))?;
        o.record(s.avez_holds(), 0.0, || {
            format!("{p}: entropy {} +- {} above bound {}", s.entropy, s.stderr, s.avez_bound)
        });
    }
    Ok(o)
}

fn pprime(count: usize, seed: u64) -> CliResult<Outcome> {
    let mut o = Outcome::new("pprime");
    for i in 0..count as u64 {
        let p = random_p(seed.wrapping_add(i));
        let pp = transform_p_to_pprime(&p)?;
        o.record(pp.residual < IDENTITY_TOL, pp.residual, || {
            format!("{p}: residual {}", pp.residual)
        });
    }
    Ok(o)
}

fn integrability_suite(count: usize, seed: u64) -> CliResult<Outcome> {
    let mut o = Outcome::new("integrability");
    for i in 0..count as u64 {
        let s = seed.wrapping_add(i);
        let mut r = rng::stream(s, 5);
        let d = 3 + (s % 3) as usize;
        let star: Vec<usize> = if s % 2 == 0 {
            (0..d).collect()
        } else {
            (0..d).map(|i| if i + 1 < d || d.is_multiple_of(2) { i ^ 1 } else { i }).collect()
        };
        let scale = r.random_range(0.3..1.0);
        let alpha: Vec<f64> = (0..d).map(|_| scale * r.random_range(0.0..0.95)).collect();
        let rep = integrability(&alpha, &star)?;
        let ps = partial_sums(&alpha, &star, 18)?;
        let ok = rep.consistent && ps.verdict() == rep.converges;
        o.record(ok, 0.0, || {
            format!(
                "alpha {alpha:?}: criterion {}, perron {}, partial sums say {}",
                rep.criterion,
                rep.perron,
                ps.verdict()
            )
        });
    }
    Ok(o)
}

/// Stationarity and mass conservation of `kernel` against its stated law.
fn kernel_deviation(kernel: &dyn Kernel) -> f64 {
    let n = kernel.len();
    let pi = kernel.stationary();
    let mut out = vec![0.0; n];
    kernel.apply_adjoint(&pi, &mut out);
    let stationarity = pi.iter().zip(&out).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let ones = vec![1.0; n];
    kernel.apply(&ones, &mut out);
    let rows = out.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    let mass = (pi.iter().sum::<f64>() - 1.0).abs();
    stationarity.max(rows).max(mass)
}

fn kernels(count: usize, seed: u64) -> CliResult<Outcome> {
    let mut o = Outcome::new("kernels");
    let base = BaseGraph::complete(4)?;
    for i in 0..count as u64 {
        let s = seed.wrapping_add(i);
        let p = random_p(s);
        let n = 200 + 2 * (s % 50) as usize;
        let k = SchreierKernel::new(random_schreier(p.alphabet(), n, s)?, &p)?;
        let err = kernel_deviation(&k);
        o.record(err < KERNEL_TOL, err, || format!("schreier n = {n}, {p}: deviation {err}"));
        let mut r = rng::stream(s, 29);
        let mut w: Vec<f64> = (0..base.d()).map(|_| r.random_range(0.05..1.0)).collect();
        let mut row = vec![0.0; base.r()];
        for (i, &(u, _)) in base.edges().iter().enumerate() {
            row[u] += w[i];
        }
        for (i, &(u, _)) in base.edges().iter().enumerate() {
            w[i] /= row[u];
        }
        let colored = ColoredWeights::new(&base, w)?;
        let lk = LiftKernel::new(random_lift(&colored, 50, s)?, &colored)?;
        let err = kernel_deviation(&lk);
        o.record(err < KERNEL_TOL, err, || format!("lift of K4, n = 50: deviation {err}"));
    }
    Ok(o)
}

fn geronimus_suite(count: usize, seed: u64) -> CliResult<Outcome> {
    let mut o = Outcome::new("geronimus");
    let one = BigRational::one();
    for d in 3..=6 {
        for (k, c) in geronimus(d, 10).iter().enumerate() {
            let v = geronimus_eval(c, &one);
            o.record(v == one, 0.0, || format!("d = {d}: p_{k}(1) = {v}"));
        }
    }
    for i in 0..count as u64 {
        let s = seed.wrapping_add(i);
        let alphabet = if s % 2 == 0 { Alphabet::identity(3) } else { Alphabet::paired(4) }?;
        let d = alphabet.d() as i64;
        let g = random_schreier(&alphabet, 12, s)?;
        let k = 5;
        let exact = nonbacktracking_dist_exact(&g, 0, k);
        let counts = brute_force_nb_counts(&g, 0, k);
        let paths = d * (d - 1).pow(k as u32 - 1);
        let ok = exact
            .iter()
            .zip(&counts)
            .all(|(e, &c)| *e == BigRational::new(BigInt::from(c), BigInt::from(paths)));
        o.record(ok, 0.0, || format!("seed {s}: recursion and path counts disagree"));
    }
    Ok(o)
}

fn stoop(count: usize, seed: u64) -> CliResult<Outcome> {
    let mut o = Outcome::new("stoop");
    let mut r = rng::stream(seed, 31);
    for i in 0..count as u64 {
        let s = seed.wrapping_add(i);
        for chain in [random_reversible_chain(20, s), random_chain(20, s)] {
            let inside = loop {
                let v: Vec<bool> = (0..20).map(|_| r.random_bool(0.6)).collect();
                if v.iter().any(|&b| b) && v.iter().any(|&b| !b) {
                    break v;
                }
            };
            let x = r.random_range(0..20);
            let stop = StopSpec::Exit(inside);
            for t in 1..=6 {
                for u in 1..=6 {
                    let rep = stopping_bound_check(&chain, x, &stop, t, u)?;
                    let ok = rep.holds && rep.holds_reversible != Some(false);
                    o.record(ok, (rep.lhs - rep.rhs).max(0.0), || {
                        format!("seed {s}, x = {x}, t = {t}, s = {u}: {} > {}", rep.lhs, rep.rhs)
                    });
                }
            }
        }
    }
    Ok(o)
}

pub fn run(cfg: &ExperimentConfig, suite: Suite) -> CliResult<(Report, Option<CliError>)> {
    let seed = cfg.seed();
    let count = cfg.count;
    let suites = match suite {
        Suite::All => vec![
            Suite::Qnormal,
            Suite::Pprime,
            Suite::Integrability,
            Suite::Kernels,
            Suite::Geronimus,
            Suite::Stoop,
        ],
        s => vec![s],
    };
    let mut outcomes = Vec::new();
    for s in suites {
        outcomes.push(match s {
            Suite::Qnormal => qnormal(count.unwrap_or(50), seed)?,
            Suite::Pprime => pprime(count.unwrap_or(50), seed)?,
            Suite::Integrability => integrability_suite(count.unwrap_or(100), seed)?,
            Suite::Kernels => kernels(count.unwrap_or(10), seed)?,
            Suite::Geronimus => geronimus_suite(count.unwrap_or(10), seed)?,
            Suite::Stoop => stoop(count.unwrap_or(20), seed)?,
            Suite::All => unreachable!(),
        });
    }
    let mut table = Table::new(&["suite", "checks", "failed", "worst_deviation"]);
    for o in &outcomes {
        table.push(vec![cell(o.name), cell(o.checks), cell(o.failures.len()), cell(o.worst)]);
    }
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.failures.is_empty()).map(|o| o.name).collect();
    let json = json!({
        "passed": failed.is_empty(),
        "suites": outcomes.iter().map(Outcome::json).collect::<Vec<_>>(),
    });
    let mut report = Report::new(json);
    report.table = Some(table);
    let err = (!failed.is_empty()).then(|| {
        CliError::new(
            Kind::Numerical,
            "VerificationFailed",
            format!("failing suites: {}", failed.join(", ")),
        )
    });
    Ok((report, err))
}
