use mixing_lab::{cutoff_experiment, CutoffConfig, Family};
use serde_json::json;

use crate::args::FamilyKind;
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::output::{cell, opt_cell, Report, Table};
use crate::source;

pub fn run(cfg: &ExperimentConfig) -> CliResult<Report> {
    let family = match cfg.family.unwrap_or(FamilyKind::Schreier) {
        FamilyKind::Schreier => Family::Schreier { p: source::law(cfg)? },
        FamilyKind::Lift => {
            let b = source::base(cfg)?;
            Family::Lift {
                colored: source::colored(cfg, &b)?,
            }
        }
        FamilyKind::File => {
            return Err(CliError::validation(
                "cutoff generates its own graphs; use family = schreier or lift",
            ));
        }
    };
    let sizes = cfg.sizes.clone().unwrap_or_else(|| vec![1024, 4096, 16384]);
    let seeds = cfg.seeds.clone().unwrap_or_else(|| vec![1, 2, 3]);
    let mut c = CutoffConfig::new(family, sizes, seeds);
    if let Some(eps) = &cfg.eps {
        c.eps = eps.clone();
    }
    if let Some(v) = cfg.starts {
        c.starts = v;
    }
    if let Some(v) = cfg.t_max {
        c.t_max = v;
    }
    c.entropy = cfg.entropy;
    if let Some(v) = cfg.entropy_walks {
        c.entropy_walks = v;
    }
    if let Some(v) = cfg.entropy_horizon {
        c.entropy_horizon = v;
    }
    if let Some(v) = cfg.sigma_iters {
        c.sigma_iters = v;
    }
    c.seed = cfg.seed();
    let summary = cutoff_experiment(&c)?;

    let mut table = Table::new(&[
        "n", "seed", "eps", "t_mix_worst", "t_mix_best", "t_mix_random", "prediction", "ratio", "width",
    ]);
    let mut plots = Vec::new();
    for cell_result in &summary.cells {
        for (i, e) in cell_result.eps.iter().enumerate() {
            table.push(vec![
                cell(cell_result.n),
                cell(cell_result.seed),
                cell(e),
                opt_cell(cell_result.t_mix_worst[i]),
                opt_cell(cell_result.t_mix_best[i]),
                opt_cell(cell_result.t_mix_random[i]),
                cell(cell_result.prediction),
                opt_cell(cell_result.ratio[i]),
                opt_cell(cell_result.width),
            ]);
        }
        for curve in &cell_result.curves {
            plots.push((
                format!("curve_n{}_s{}_x{}.dat", cell_result.n, cell_result.seed, curve.start),
                format!("t  d(x,t) for n = {}, graph seed {}, start {}", cell_result.n, cell_result.seed, curve.start),
                curve.samples.iter().enumerate().map(|(t, &d)| (t as f64, d)).collect(),
            ));
        }
    }
    let ln_n_ratio: Vec<(f64, f64)> = summary
        .cells
        .iter()
        .filter_map(|c| {
            let k = c.eps.iter().position(|&e| e == 0.25).unwrap_or(0);
            c.ratio[k].map(|r| ((c.n as f64).ln(), r))
        })
        .collect();
    plots.push(("ratio.dat".into(), "log n  T_mix(1/4) / log n".into(), ln_n_ratio));
    let mut report = Report::new(json!({ "config": {
        "sizes": c.sizes, "seeds": c.seeds, "eps": c.eps, "starts": c.starts, "t_max": c.t_max,
    }, "summary": summary }));
    report.table = Some(table);
    report.plots = plots;
    Ok(report)
}
