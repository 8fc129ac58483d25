use mixing_lab::{singular_radius_t, spectrum_report};
use serde_json::json;
use tree_calculus::rho;

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::output::{cell, Report, Table};
use crate::source::{self, Walk};

fn tree_radius(walk: &Walk) -> CliResult<f64> {
    match walk {
        Walk::Schreier(k) => Ok(rho(k.weights())?.rho),
        Walk::Lift(k) => {
            let c = k.colored();
            let d = walk.degree();
            let regular = (0..c.base().r()).all(|u| c.base().out_degree(u) == d)
                && c.weights().iter().all(|&w| (w - 1.0 / d as f64).abs() < 1e-15);
            if !regular || d < 3 {
                return Err(CliError::validation(
                    "the covering-tree radius of a non-regular colored walk must be given with --rho",
                ));
            }
            Ok(2.0 * ((d - 1) as f64).sqrt() / d as f64)
        }
    }
}

pub fn run(cfg: &ExperimentConfig) -> CliResult<Report> {
    let walk = source::walk(cfg)?;
    let rho_tree = match cfg.rho {
        Some(r) => r,
        None => tree_radius(&walk)?,
    };
    let ts = cfg.ts.clone().unwrap_or_else(|| vec![1, 2, 4]);
    if ts.contains(&0) {
        return Err(CliError::validation("singular radii need t >= 1"));
    }
    let delta = cfg.delta.unwrap_or(0.05);
    let dense = cfg.dense.unwrap_or(false);
    let iters = cfg.iters.unwrap_or(5000);
    let mut rep = spectrum_report(walk.kernel(), dense, rho_tree, walk.degree(), delta, &[], cfg.seed())?;
    rep.sigma_t = ts
        .iter()
        .map(|&t| singular_radius_t(walk.kernel(), t, iters, cfg.seed()))
        .collect::<Result<_, _>>()?;
    let mut table = Table::new(&["t", "sigma", "converged"]);
    for s in &rep.sigma_t {
        table.push(vec![cell(s.t), cell(s.value), cell(s.converged)]);
    }
    let mut report = Report::new(json!({ "graph": walk.describe(), "report": rep }));
    report.table = Some(table);
    report.plots.push((
        "sigma_t.dat".into(),
        "t  sigma(t)".into(),
        rep.sigma_t.iter().map(|s| (s.t as f64, s.value)).collect(),
    ));
    if let Some(spec) = &rep.spectrum {
        report.plots.push((
            "spectrum.dat".into(),
            "index  value".into(),
            spec.iter().enumerate().map(|(i, &v)| (i as f64, v)).collect(),
        ));
    }
    Ok(report)
}
