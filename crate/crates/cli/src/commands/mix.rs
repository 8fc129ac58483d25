use mixing_lab::{mixing_curve, period};
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult, Kind};
use crate::output::{cell, Report, Table};
use crate::source;

pub fn run(cfg: &ExperimentConfig) -> CliResult<(Report, Option<CliError>)> {
    let walk = source::walk(cfg)?;
    let kernel = walk.kernel();
    let eps = cfg.eps.clone().unwrap_or_else(|| vec![0.25]);
    let start = cfg.start.unwrap_or(0);
    let t_max = cfg.t_max.unwrap_or(10_000);
    let curve = mixing_curve(kernel, start, &eps, t_max)?;
    let period = period(kernel);
    let periodic = curve.periodic;
    let times: Vec<_> = curve
        .mix_times
        .iter()
        .map(|(e, t)| json!({ "eps": e, "t_mix": t }))
        .collect();
    let json = json!({
        "graph": walk.describe(),
        "start": start,
        "t_max": t_max,
        "period": period,
        "periodic": periodic,
        "mix_times": times,
        "curve": curve.samples,
    });
    let mut table = Table::new(&["t", "tv"]);
    for (t, d) in curve.samples.iter().enumerate() {
        table.push(vec![cell(t), cell(d)]);
    }
    let mut report = Report::new(json);
    report.table = Some(table);
    report.plots.push((
        format!("curve_x{start}.dat"),
        "t  d(x,t)".into(),
        curve.samples.iter().enumerate().map(|(t, &d)| (t as f64, d)).collect(),
    ));
    let failure = curve.mix_times.iter().find(|m| m.1.is_none()).map(|_| {
        CliError::new(
            Kind::Numerical,
            "NotMixedByHorizon",
            format!(
                "distance still {} at horizon {t_max}{}",
                curve.samples.last().copied().unwrap_or(1.0),
                if periodic { " (chain is periodic)" } else { "" }
            ),
        )
    });
    Ok((report, failure))
}
