//! Run configuration: a JSON file overlaid with command-line flags.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use torus_residue::exact::rational::{fmt_rational, parse_rational};
use torus_residue::exact::Rational;
use torus_residue::mu::{MuParameters, OrbitParams};
use torus_residue::numeric::NumericConfig;
use torus_residue::roots::{RootSystem, RootType};
use torus_residue::walk::WalkConfig;

use crate::CliError;

/// Flags shared by every subcommand; each overrides the config file.
#[derive(Args, Debug, Clone, Default)]
pub struct RunFlags {
    /// JSON config file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Root system type: A, B, C, D or G2.
    #[arg(long = "type", global = true)]
    pub root_type: Option<String>,
    #[arg(long, global = true)]
    pub rank: Option<usize>,
    /// Parameter k on short roots (all roots in simply-laced types).
    #[arg(long, global = true)]
    pub k_short: Option<String>,
    #[arg(long, global = true)]
    pub k_long: Option<String>,
    /// Parameter l on short roots; adds the factors with constant -1.
    #[arg(long, global = true)]
    pub l_short: Option<String>,
    #[arg(long, global = true)]
    pub l_long: Option<String>,
    /// Numeric value of q for evaluation and quadrature.
    #[arg(long, global = true)]
    pub q: Option<f64>,
    /// Quadrature points per circle (a power of two).
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Start point of the walk as comma-separated rationals, e.g. "2,14".
    #[arg(long, global = true)]
    pub chamber: Option<String>,
    /// Write the JSON report to this path ("-" for standard output).
    #[arg(long, global = true)]
    pub json_out: Option<PathBuf>,
    /// Run the numeric verifier after the decomposition.
    #[arg(long, global = true)]
    pub verify: bool,
    /// Run on a single thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

/// Contents of a config file; every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(rename = "type")]
    pub root_type: Option<String>,
    pub rank: Option<usize>,
    pub k_short: Option<String>,
    pub k_long: Option<String>,
    pub l_short: Option<String>,
    pub l_long: Option<String>,
    pub q: Option<f64>,
    pub grid: Option<usize>,
    pub tolerance: Option<f64>,
    pub seed: Option<u64>,
    pub chamber: Option<Vec<String>>,
    pub json_out: Option<PathBuf>,
    pub verify: Option<bool>,
}

/// The resolved configuration of one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub root_type: RootType,
    pub rank: usize,
    pub params: MuParameters,
    pub start: Option<Vec<Rational>>,
    pub numeric: NumericConfig,
    pub json_out: Option<PathBuf>,
    pub verify: bool,
    pub sequential: bool,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn rational(name: &str, s: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|e| usage(format!("--{name}: {e}")))
}

fn load(path: &Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("invalid config {}: {e}", path.display())))
}

impl RunConfig {
    /// Reads the config file, if any, and applies the flags on top.
    pub fn resolve(flags: &RunFlags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(p) => load(p)?,
            None => ConfigFile::default(),
        };
        let type_str = flags.root_type.clone().or(file.root_type).ok_or_else(|| usage("missing --type"))?;
        let root_type: RootType = type_str.parse().map_err(|e| usage(format!("{e}")))?;
        let rank = match (flags.rank.or(file.rank), root_type) {
            (Some(r), _) => r,
            (None, RootType::G2) => 2,
            (None, _) => return Err(usage("missing --rank")),
        };
        let k_short = flags.k_short.clone().or(file.k_short).unwrap_or_else(|| "1".into());
        let k_long = flags.k_long.clone().or(file.k_long).unwrap_or_else(|| k_short.clone());
        let l_short = flags.l_short.clone().or(file.l_short);
        let l_long = flags.l_long.clone().or(file.l_long);
        let orbit = |k: &str, kname: &str, l: &Option<String>, lname: &str| -> Result<OrbitParams, CliError> {
            let mut p = OrbitParams::k(rational(kname, k)?);
            p.l = l.as_deref().map(|s| rational(lname, s)).transpose()?;
            Ok(p)
        };
        let params = MuParameters {
            short: Some(orbit(&k_short, "k-short", &l_short, "l-short")?),
            long: Some(orbit(&k_long, "k-long", &l_long, "l-long")?),
        };
        let start = match (&flags.chamber, file.chamber) {
            (Some(s), _) => Some(s.split(',').map(|x| rational("chamber", x.trim())).collect::<Result<Vec<_>, _>>()?),
            (None, Some(v)) => Some(v.iter().map(|x| rational("chamber", x)).collect::<Result<Vec<_>, _>>()?),
            (None, None) => None,
        };
        if let Some(s) = &start {
            if s.len() != rank {
                return Err(usage(format!("--chamber has {} coordinates, expected {rank}", s.len())));
            }
        }
        let defaults = NumericConfig::default();
        let numeric = NumericConfig {
            q: flags.q.or(file.q).unwrap_or(defaults.q),
            grid: flags.grid.or(file.grid).unwrap_or(defaults.grid),
            tolerance: flags.tolerance.or(file.tolerance).unwrap_or(defaults.tolerance),
            seed: flags.seed.or(file.seed).unwrap_or(defaults.seed),
        };
        numeric.validate().map_err(|e| usage(e.to_string()))?;
        Ok(RunConfig {
            root_type,
            rank,
            params,
            start,
            numeric,
            json_out: flags.json_out.clone().or(file.json_out),
            verify: flags.verify || file.verify.unwrap_or(false),
            sequential: flags.sequential,
        })
    }

    pub fn root_system(&self) -> Result<RootSystem, CliError> {
        RootSystem::build(self.root_type, self.rank).map_err(|e| usage(e.to_string()))
    }

    /// The walk configuration: the given start or the dominant default, with
    /// the run's seed.
    pub fn walk(&self, r: &RootSystem) -> WalkConfig {
        let mut cfg = WalkConfig::dominant(r, &self.params);
        if let Some(s) = &self.start {
            cfg.start = s.clone();
        }
        cfg.seed = self.numeric.seed;
        cfg
    }

    /// Summary echoed in every JSON report.
    pub fn summary(&self, r: &RootSystem) -> ConfigSummary {
        let short = self.params.short.as_ref().expect("resolved");
        let long = self.params.long.as_ref().expect("resolved");
        ConfigSummary {
            root_system: r.label(),
            k_short: fmt_rational(&short.k),
            k_long: fmt_rational(&long.k),
            l_short: short.l.as_ref().map(fmt_rational),
            l_long: long.l.as_ref().map(fmt_rational),
            start: self.walk(r).start.iter().map(fmt_rational).collect(),
            q: self.numeric.q.to_string(),
            seed: self.numeric.seed,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigSummary {
    pub root_system: String,
    pub k_short: String,
    pub k_long: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_short: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_long: Option<String>,
    pub start: Vec<String>,
    pub q: String,
    pub seed: u64,
}
