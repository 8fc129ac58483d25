use schreier_graphs::{export_graph, export_lift};
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::output::{write_text, VERSION};
use crate::source::{self, Graph};

/// Writes the graph file itself to `--out`, or prints it; the report summarizes it.
pub fn run(cfg: &ExperimentConfig) -> CliResult<()> {
    let g = source::graph(cfg)?;
    let version = format!("anisowalk {VERSION}");
    let seed = format!("seed: {}", cfg.seed());
    let comments = [version.as_str(), seed.as_str()];
    let (text, summary) = match &g {
        Graph::Schreier(g) => (
            export_graph(g, &comments),
            json!({ "family": "schreier", "n": g.n(), "d": g.alphabet().d(), "simple": g.is_simple() }),
        ),
        Graph::Lift(l, _) => (
            export_lift(l, &comments),
            json!({ "family": "lift", "n": l.n(), "r": l.base().r(), "states": l.states() }),
        ),
    };
    match &cfg.out {
        Some(path) => {
            write_text(path, &text)?;
            let mut s = summary;
            s["file"] = json!(path.display().to_string());
            // the summary goes to standard output; the file holds the graph
            println!("{}", serde_json::to_string(&s).map_err(CliError::from)?);
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
