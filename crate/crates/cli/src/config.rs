use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::args::{
    Cli, Command, CutoffArgs, FamilyKind, Format, LawArgs, MixArgs, NbArgs, SpectraArgs,
    TreeCalcArgs, WalkArgs,
};
use crate::error::{CliError, CliResult};

/// Every setting a run can take, from the configuration file and the flags.
///
/// The file holds `key = value` pairs at top level and optionally in one
/// table per subcommand (`[cutoff]`, `[mix]`, ...); the table of the running
/// subcommand overrides the top level and flags override both.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing)]
    pub threads: Option<usize>,
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing)]
    pub format: Option<Format>,
    #[serde(skip_serializing)]
    pub emit_plotdata: Option<PathBuf>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inv: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<String>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub starts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entropy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entropy_walks: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entropy_horizon: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_iters: Option<usize>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub walks: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dp_horizon: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ts: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dense: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iters: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
}

const COMMANDS: [&str; 7] = ["tree-calc", "gen", "mix", "spectra", "nb", "verify", "cutoff"];

/// Overwrites `slot` when the flag was given.
fn set<T>(slot: &mut Option<T>, flag: Option<T>) {
    if flag.is_some() {
        *slot = flag;
    }
}

impl ExperimentConfig {
    /// Reads the file and keeps the top level plus the table of `command`.
    pub fn load(path: &Path, command: &str) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
        Self::parse(&text, command)
    }

    pub fn parse(text: &str, command: &str) -> CliResult<Self> {
        let mut table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| CliError::validation(format!("config: {}", e.message())))?;
        let section = table.remove(command);
        for c in COMMANDS {
            table.remove(c);
        }
        if let Some(section) = section {
            let section = section
                .as_table()
                .ok_or_else(|| CliError::validation(format!("config: [{command}] must be a table")))?;
            for (k, v) in section {
                table.insert(k.clone(), v.clone());
            }
        }
        table
            .try_into()
            .map_err(|e: toml::de::Error| CliError::validation(format!("config: {}", e.message())))
    }

    fn law(&mut self, a: &LawArgs) {
        set(&mut self.d, a.d);
        set(&mut self.inv, a.inv.clone());
        set(&mut self.p, a.p.clone());
    }

    fn walk(&mut self, a: &WalkArgs) {
        self.law(&a.law);
        set(&mut self.family, a.family);
        set(&mut self.file, a.file.clone());
        set(&mut self.n, a.n);
        set(&mut self.base, a.base.clone());
        set(&mut self.weights, a.weights.clone());
    }

    /// Applies the flags of `cli` on top of the file values.
    pub fn overlay(mut self, cli: &Cli) -> Self {
        set(&mut self.seed, cli.seed);
        set(&mut self.threads, cli.threads);
        set(&mut self.out, cli.out.clone());
        set(&mut self.format, cli.format);
        set(&mut self.emit_plotdata, cli.emit_plotdata.clone());
        match &cli.command {
            Command::TreeCalc(TreeCalcArgs {
                law,
                k,
                walks,
                horizon,
                dp_horizon,
            }) => {
                self.law(law);
                set(&mut self.k, *k);
                set(&mut self.walks, *walks);
                set(&mut self.horizon, *horizon);
                set(&mut self.dp_horizon, *dp_horizon);
            }
            Command::Gen(a) => self.walk(&a.walk),
            Command::Mix(MixArgs {
                walk,
                eps,
                start,
                t_max,
            }) => {
                self.walk(walk);
                set(&mut self.eps, eps.clone());
                set(&mut self.start, *start);
                set(&mut self.t_max, *t_max);
            }
            Command::Spectra(SpectraArgs {
                walk,
                ts,
                dense,
                delta,
                iters,
                rho,
            }) => {
                self.walk(walk);
                set(&mut self.ts, ts.clone());
                if *dense {
                    self.dense = Some(true);
                }
                set(&mut self.delta, *delta);
                set(&mut self.iters, *iters);
                set(&mut self.rho, *rho);
            }
            Command::Nb(NbArgs { walk, k, x }) => {
                self.walk(walk);
                set(&mut self.k, k.map(|k| k as u64));
                set(&mut self.x, *x);
            }
            Command::Verify(a) => set(&mut self.count, a.count),
            Command::Cutoff(CutoffArgs {
                walk,
                sizes,
                seeds,
                eps,
                starts,
                t_max,
                entropy,
                entropy_walks,
                entropy_horizon,
                sigma_iters,
            }) => {
                self.walk(walk);
                set(&mut self.sizes, sizes.clone());
                set(&mut self.seeds, seeds.clone());
                set(&mut self.eps, eps.clone());
                set(&mut self.starts, *starts);
                set(&mut self.t_max, *t_max);
                set(&mut self.entropy, *entropy);
                set(&mut self.entropy_walks, *entropy_walks);
                set(&mut self.entropy_horizon, *entropy_horizon);
                set(&mut self.sigma_iters, *sigma_iters);
            }
        }
        if self.file.is_some() && self.family.is_none() {
            self.family = Some(FamilyKind::File);
        }
        self
    }

    /// Checks what can be checked before any computation starts.
    pub fn validate(&self) -> CliResult<()> {
        if let Some(f) = &self.file {
            if !f.is_file() {
                return Err(CliError::validation(format!("file {} does not exist", f.display())));
            }
        }
        if let Some(b) = &self.base {
            if !b.starts_with("complete:") && !Path::new(b).is_file() {
                return Err(CliError::validation(format!("base file {b} does not exist")));
            }
        }
        if self.family == Some(FamilyKind::File) && self.file.is_none() {
            return Err(CliError::validation("family = file needs a file"));
        }
        if let Some(s) = &self.sizes {
            if s.windows(2).any(|w| w[0] >= w[1]) {
                return Err(CliError::validation("sizes must be sorted in strictly increasing order"));
            }
        }
        if let Some(s) = &self.seeds {
            let mut v = s.clone();
            v.sort_unstable();
            v.dedup();
            if v.len() != s.len() {
                return Err(CliError::validation("seeds must be distinct"));
            }
        }
        if let Some(eps) = &self.eps {
            if let Some(e) = eps.iter().find(|e| !(**e > 0.0 && **e < 1.0)) {
                return Err(CliError::new(
                    crate::error::Kind::Validation,
                    "InvalidEpsilon",
                    format!("epsilon must lie in (0,1), got {e}"),
                ));
            }
        }
        if self.threads == Some(0) {
            return Err(CliError::validation("threads must be positive"));
        }
        Ok(())
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_override_top_level() {
        let text = "seed = 3\nd = 4\n[cutoff]\nd = 3\nsizes = [10, 20]\n[mix]\nd = 5\n";
        let c = ExperimentConfig::parse(text, "cutoff").unwrap();
        assert_eq!(c.d, Some(3));
        assert_eq!(c.seed, Some(3));
        assert_eq!(c.sizes, Some(vec![10, 20]));
        let m = ExperimentConfig::parse(text, "mix").unwrap();
        assert_eq!(m.d, Some(5));
        assert_eq!(m.sizes, None);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(ExperimentConfig::parse("colour = 1\n", "mix").is_err());
    }

    #[test]
    fn ordering_rules() {
        let c = ExperimentConfig {
            sizes: Some(vec![20, 10]),
            ..Default::default()
        };
        assert!(c.validate().is_err());
        let c = ExperimentConfig {
            seeds: Some(vec![1, 1]),
            ..Default::default()
        };
        assert!(c.validate().is_err());
    }
}
