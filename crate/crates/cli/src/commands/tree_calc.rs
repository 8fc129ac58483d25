use serde_json::json;
use tree_calculus::{
    backbone_kernel, build_stopping_set, default_dp_horizon, domination_check, entropy_dp, entropy_green, rho,
    transform_p_to_pprime, DEFAULT_DP_BUDGET,
};

use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::output::Report;
use crate::source;

const NODE_CAP: usize = 5_000_000;

pub fn run(cfg: &ExperimentConfig) -> CliResult<Report> {
    let p = source::law(cfg)?;
    let radii = rho(&p)?;
    let walks = cfg.walks.unwrap_or(1000);
    let horizon = cfg.horizon.unwrap_or(1000);
    let green = entropy_green(&p, walks, horizon, cfg.seed())?;
    let dp_horizon = cfg
        .dp_horizon
        .unwrap_or_else(|| default_dp_horizon(&p, DEFAULT_DP_BUDGET));
    let dp = entropy_dp(&p, dp_horizon, DEFAULT_DP_BUDGET)?;
    let pp = transform_p_to_pprime(&p)?;
    let k = cfg.k.unwrap_or(4);
    let u = build_stopping_set(&p, k, NODE_CAP)?;
    let bb = backbone_kernel(&u, None)?;
    let dom = domination_check(&p, k, NODE_CAP)?;
    let json = json!({
        "d": p.d(),
        "inv": p.alphabet().involution_string(),
        "p": p.as_slice(),
        "reversible": p.is_reversible(),
        "rho_prime": radii.rho_prime,
        "rho": radii.rho,
        "entropy": {
            "green": green.mean,
            "stderr": green.stderr,
            "walks": green.walks,
            "horizon": green.t,
            "dp": dp.last_increment(),
            "dp_horizon": dp_horizon,
            "dp_words": dp.final_words,
            "avez_bound": -2.0 * radii.rho.ln(),
        },
        "p_prime": pp.p_prime.as_slice(),
        "p_prime_check": {
            "rho_p_prime": pp.rho_p_prime,
            "residual": pp.residual,
        },
        "stopping_set": {
            "k": k,
            "size": u.size(),
            "diameter": u.diameter(),
            "boundary_size": u.boundary_size(),
        },
        "backbone": {
            "max_q": bb.max_q,
            "mean_exit": bb.mean_exit,
            "below_one_over_k": bb.tandilt_holds,
            "q": bb.q,
        },
        "domination": {
            "horizon": dom.horizon,
            "c_hat": dom.c_hat,
        },
    });
    Ok(Report::new(json))
}
