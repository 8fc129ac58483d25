use mixing_lab::{
    brute_force_nb_counts, geronimus, geronimus_eval, nb_spectral_radius_bound, nonbacktracking_dist,
    nonbacktracking_dist_exact,
};
use num::{BigInt, BigRational, One};
use serde_json::json;

use crate::args::FamilyKind;
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::output::Report;
use crate::source::{self, Walk};

/// Geronimus coefficients, and the non-backtracking law on a graph when one is given.
pub fn run(cfg: &ExperimentConfig) -> CliResult<Report> {
    let k = cfg.k.unwrap_or(5) as usize;
    let has_graph = cfg.family == Some(FamilyKind::File) || cfg.n.is_some();
    let walk = if has_graph { Some(source::walk(cfg)?) } else { None };
    let d = match &walk {
        Some(Walk::Schreier(kern)) => kern.graph().alphabet().d(),
        Some(Walk::Lift(_)) => {
            return Err(CliError::validation("non-backtracking laws are computed on Schreier graphs"));
        }
        None => cfg.d.unwrap_or(3),
    };
    if d < 3 {
        return Err(CliError::validation("d must be at least 3"));
    }
    let polys = geronimus(d, k);
    let one = BigRational::one();
    let coeffs: Vec<Vec<String>> = polys.iter().map(|c| c.iter().map(|x| x.to_string()).collect()).collect();
    let at_one: Vec<String> = polys.iter().map(|c| geronimus_eval(c, &one).to_string()).collect();
    let bounds: Vec<f64> = (0..=k).map(|j| nb_spectral_radius_bound(d, j, 0.0)).collect();
    let mut json = json!({
        "d": d,
        "k": k,
        "coefficients": coeffs,
        "p_k_at_1": at_one,
        "radius_bound_eta0": bounds,
    });
    if let Some(Walk::Schreier(kern)) = &walk {
        let x = cfg.x.unwrap_or(0);
        let g = kern.graph();
        let q = nonbacktracking_dist(kern, x, k)?;
        let exact = nonbacktracking_dist_exact(g, x, k);
        let counts = brute_force_nb_counts(g, x, k);
        let paths = if k == 0 { 1 } else { d as i64 * (d as i64 - 1).pow(k as u32 - 1) };
        let agree = exact
            .iter()
            .zip(&counts)
            .all(|(e, &c)| *e == BigRational::new(BigInt::from(c), BigInt::from(paths)));
        let max_float_err = exact
            .iter()
            .zip(&q.masses)
            .map(|(e, &f)| (num::ToPrimitive::to_f64(e).unwrap_or(f64::NAN) - f).abs())
            .fold(0.0, f64::max);
        json["graph"] = walk.as_ref().map(Walk::describe).unwrap_or_default();
        json["x"] = json!(x);
        json["q_k"] = json!(q.masses);
        json["matches_path_counts"] = json!(agree);
        json["max_float_error"] = json!(max_float_err);
        if !agree {
            return Err(CliError::new(
                crate::error::Kind::Numerical,
                "GeronimusMismatch",
                "recursion disagrees with non-backtracking path counts",
            ));
        }
    }
    Ok(Report::new(json))
}
