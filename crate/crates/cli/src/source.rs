use std::path::Path;

use group_core::{rng, Alphabet, AnisotropyVector};
use schreier_graphs::{
    random_lift, random_schreier, read_file, BaseGraph, ColoredWeights, GraphFile, Kernel,
    LiftGraph, LiftKernel, SchreierGraph, SchreierKernel,
};
use serde_json::{json, Value};

use crate::args::FamilyKind;
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};

pub fn alphabet(cfg: &ExperimentConfig) -> CliResult<Alphabet> {
    let d = cfg.d.unwrap_or(3);
    Ok(Alphabet::parse(d, cfg.inv.as_deref().unwrap_or("id"))?)
}

fn parse_weights(spec: &str) -> CliResult<Vec<f64>> {
    spec.split(',')
        .map(|s| {
            let s = s.trim();
            let v = match s.split_once('/') {
                Some((a, b)) => a.trim().parse::<f64>().ok().zip(b.trim().parse::<f64>().ok()).map(|(a, b)| a / b),
                None => s.parse().ok(),
            };
            v.ok_or_else(|| CliError::validation(format!("bad weight {s:?}")))
        })
        .collect()
}

/// `uniform`, a weight list, or a full `p d=.. inv=.. mass=..` line over `alphabet`.
pub fn parse_law(alphabet: &Alphabet, spec: Option<&str>) -> CliResult<AnisotropyVector> {
    let spec = spec.unwrap_or("uniform").trim();
    if spec == "uniform" {
        return Ok(AnisotropyVector::uniform(alphabet));
    }
    if spec.starts_with("p ") {
        let p = AnisotropyVector::parse(spec)?;
        if p.alphabet() != alphabet {
            return Err(CliError::new(
                crate::error::Kind::Validation,
                "AlphabetMismatch",
                format!("law {spec:?} does not live on d = {} inv = {}", alphabet.d(), alphabet.involution_string()),
            ));
        }
        return Ok(p);
    }
    let w = parse_weights(spec)?;
    Ok(AnisotropyVector::from_weights(alphabet, &w)?)
}

/// The law from `d`, `inv` and `p`.
pub fn law(cfg: &ExperimentConfig) -> CliResult<AnisotropyVector> {
    parse_law(&alphabet(cfg)?, cfg.p.as_deref())
}

pub fn base(cfg: &ExperimentConfig) -> CliResult<BaseGraph> {
    let spec = cfg.base.as_deref().unwrap_or("complete:4");
    if let Some(r) = spec.strip_prefix("complete:") {
        let r: usize = r
            .trim()
            .parse()
            .map_err(|_| CliError::validation(format!("bad base {spec:?}")))?;
        return Ok(BaseGraph::complete(r)?);
    }
    match read_file(Path::new(spec))? {
        GraphFile::Lift(l) => Ok(l.base().clone()),
        GraphFile::Graph(_) => Err(CliError::validation(format!("{spec} is a graph file, not a lift file"))),
    }
}

pub fn colored(cfg: &ExperimentConfig, base: &BaseGraph) -> CliResult<ColoredWeights> {
    match cfg.weights.as_deref().map(str::trim) {
        None | Some("simple") => Ok(ColoredWeights::simple(base)?),
        Some(spec) => Ok(ColoredWeights::new(base, parse_weights(spec)?)?),
    }
}

/// A walk on a concrete finite graph.
pub enum Walk {
    Schreier(SchreierKernel),
    Lift(LiftKernel),
}

impl Walk {
    pub fn kernel(&self) -> &dyn Kernel {
        match self {
            Walk::Schreier(k) => k,
            Walk::Lift(k) => k,
        }
    }

    /// Out-degree of the underlying graph.
    pub fn degree(&self) -> usize {
        match self {
            Walk::Schreier(k) => k.graph().alphabet().d(),
            Walk::Lift(k) => {
                let b = k.colored().base();
                (0..b.r()).map(|u| b.out_degree(u)).max().unwrap_or(0)
            }
        }
    }

    pub fn describe(&self) -> Value {
        match self {
            Walk::Schreier(k) => json!({
                "family": "schreier",
                "n": k.graph().n(),
                "d": k.graph().alphabet().d(),
                "inv": k.graph().alphabet().involution_string(),
                "p": k.weights().as_slice(),
                "states": k.len(),
            }),
            Walk::Lift(k) => json!({
                "family": "lift",
                "n": k.lift().n(),
                "r": k.lift().base().r(),
                "d": k.lift().base().d(),
                "weights": k.colored().weights(),
                "states": k.len(),
            }),
        }
    }
}

/// A graph as read from a file or generated.
pub enum Graph {
    Schreier(SchreierGraph),
    Lift(LiftGraph, ColoredWeights),
}

/// Seed of the graph of size `n` under the root seed, shared with the cutoff experiment.
pub fn graph_seed(cfg: &ExperimentConfig, n: usize) -> u64 {
    rng::child_seed(cfg.seed(), n as u64)
}

pub fn graph(cfg: &ExperimentConfig) -> CliResult<Graph> {
    match cfg.family.unwrap_or(FamilyKind::Schreier) {
        FamilyKind::File => {
            let path = cfg
                .file
                .as_ref()
                .ok_or_else(|| CliError::validation("family = file needs a file"))?;
            match read_file(path)? {
                GraphFile::Graph(g) => Ok(Graph::Schreier(g)),
                GraphFile::Lift(l) => {
                    let c = colored(cfg, l.base())?;
                    Ok(Graph::Lift(l, c))
                }
            }
        }
        FamilyKind::Schreier => {
            let n = cfg.n.ok_or_else(|| CliError::validation("--n is required to generate a graph"))?;
            let a = alphabet(cfg)?;
            Ok(Graph::Schreier(random_schreier(&a, n, graph_seed(cfg, n))?))
        }
        FamilyKind::Lift => {
            let n = cfg.n.ok_or_else(|| CliError::validation("--n is required to generate a lift"))?;
            let b = base(cfg)?;
            let c = colored(cfg, &b)?;
            let l = random_lift(&c, n, graph_seed(cfg, n))?;
            Ok(Graph::Lift(l, c))
        }
    }
}

pub fn walk(cfg: &ExperimentConfig) -> CliResult<Walk> {
    match graph(cfg)? {
        Graph::Schreier(g) => {
            let p = parse_law(g.alphabet(), cfg.p.as_deref())?;
            Ok(Walk::Schreier(SchreierKernel::new(g, &p)?))
        }
        Graph::Lift(l, c) => Ok(Walk::Lift(LiftKernel::new(l, &c)?)),
    }
}
