use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use super::experiments::{log_grid, COMPARE_C, DEFAULT_DELTA, DEFAULT_EPS};
use super::CliError;
use crate::objective::Point;
use crate::optimizers::Method;

/// Experiment knobs as given on the command line or in a flat TOML file.
/// Command-line values win over file values.
#[derive(Clone, Debug, Default, PartialEq, clap::Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentArgs {
    /// Flat key = value TOML file with any of the options below.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// octopus or bump
    #[arg(long)]
    pub problem: Option<String>,
    /// ppd, pd, gd or pgd
    #[arg(long)]
    pub method: Option<String>,
    /// Stepsize for the baselines (PPD uses c / ell).
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// l1 weight of the octopus objective.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Comma-separated dimensions for `compare`.
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Trials per grid point (`sweep`) or seeds per dimension (`compare`).
    #[arg(long)]
    pub trials: Option<usize>,
    /// Comma-separated stepsizes for `sweep`.
    #[arg(long, value_delimiter = ',')]
    pub eta_grid: Option<Vec<f64>>,
    /// Add x_1..x_d columns to trace CSVs.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub trace_points: Option<bool>,
    /// Perturbation radius; defaults to 0.1 on the octopus.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Comma-separated starting point.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x0: Option<Vec<f64>>,
    /// Comma-separated point for `classify`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub point: Option<Vec<f64>>,
    /// Nondegenerate-saddle margin for `classify`.
    #[arg(long)]
    pub margin: Option<f64>,
}

impl ExperimentArgs {
    /// Fill unset fields from `file`.
    pub fn or(self, file: ExperimentArgs) -> ExperimentArgs {
        ExperimentArgs {
            config: self.config,
            problem: self.problem.or(file.problem),
            method: self.method.or(file.method),
            eta: self.eta.or(file.eta),
            eps: self.eps.or(file.eps),
            c: self.c.or(file.c),
            delta: self.delta.or(file.delta),
            lambda: self.lambda.or(file.lambda),
            dim: self.dim.or(file.dim),
            dims: self.dims.or(file.dims),
            max_iter: self.max_iter.or(file.max_iter),
            seed: self.seed.or(file.seed),
            out_dir: self.out_dir.or(file.out_dir),
            trials: self.trials.or(file.trials),
            eta_grid: self.eta_grid.or(file.eta_grid),
            trace_points: self.trace_points.or(file.trace_points),
            radius: self.radius.or(file.radius),
            x0: self.x0.or(file.x0),
            point: self.point.or(file.point),
            margin: self.margin.or(file.margin),
        }
    }

    /// Merge in the config file, if any.
    pub fn load(self) -> Result<ExperimentArgs, CliError> {
        match self.config.clone() {
            Some(path) => Ok(self.or(read_config(&path)?)),
            None => Ok(self),
        }
    }
}

pub fn read_config(path: &Path) -> Result<ExperimentArgs, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<ExperimentArgs, CliError> {
    let args: ExperimentArgs =
        toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))?;
    Ok(args)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProblemKind {
    Octopus,
    Bump,
}

impl FromStr for ProblemKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "octopus" => Ok(ProblemKind::Octopus),
            "bump" | "gaussian_bump" => Ok(ProblemKind::Bump),
            _ => Err(CliError::Usage(format!(
                "unknown problem {s:?}; expected octopus or bump"
            ))),
        }
    }
}

/// Fully resolved settings; unset knobs take their defaults here.
#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    pub problem: ProblemKind,
    pub method: Method,
    pub eta: Option<f64>,
    pub eps: f64,
    pub c: f64,
    pub delta: f64,
    pub lambda: f64,
    pub dim: usize,
    pub dims: Vec<usize>,
    pub max_iter: Option<usize>,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub trials: Option<usize>,
    pub eta_grid: Vec<f64>,
    pub trace_points: bool,
    pub radius: Option<f64>,
    pub x0: Option<Point>,
    pub point: Option<Point>,
    pub margin: Option<f64>,
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("--{name} must be positive, got {v}")))
    }
}

fn point(name: &str, v: Option<Vec<f64>>) -> Result<Option<Point>, CliError> {
    v.map(|c| Point::new(c).map_err(|e| CliError::Usage(format!("--{name}: {e}"))))
        .transpose()
}

impl Settings {
    pub fn resolve(args: ExperimentArgs) -> Result<Settings, CliError> {
        let args = args.load()?;
        let problem = args
            .problem
            .as_deref()
            .map(ProblemKind::from_str)
            .transpose()?
            .unwrap_or(ProblemKind::Octopus);
        let method = match args.method.as_deref() {
            Some(m) => Method::from_str(m).map_err(|e| CliError::Usage(e.to_string()))?,
            None => Method::Ppd,
        };
        let default_c = match problem {
            ProblemKind::Octopus => COMPARE_C,
            ProblemKind::Bump => 0.5,
        };
        let dim = match (problem, args.dim) {
            (ProblemKind::Bump, Some(d)) if d != 2 => {
                return Err(CliError::Usage(format!("the bump problem is 2-d, got --dim {d}")))
            }
            (ProblemKind::Bump, _) => 2,
            (ProblemKind::Octopus, Some(d)) if d < 2 => {
                return Err(CliError::Usage("octopus needs --dim >= 2".to_string()))
            }
            (ProblemKind::Octopus, d) => d.unwrap_or(2),
        };
        let dims = args.dims.unwrap_or_else(|| vec![2, 5, 10, 20]);
        if dims.is_empty() || dims.iter().any(|d| *d < 2) {
            return Err(CliError::Usage("--dims needs values >= 2".to_string()));
        }
        let eta_grid = args.eta_grid.unwrap_or_else(|| log_grid(1e-3, 1.0, 20));
        if eta_grid.is_empty() {
            return Err(CliError::Usage("--eta-grid is empty".to_string()));
        }
        for e in &eta_grid {
            positive("eta-grid", *e)?;
        }
        let delta = args.delta.unwrap_or(DEFAULT_DELTA);
        if !(delta > 0.0 && delta < 1.0) {
            return Err(CliError::Usage(format!("--delta must lie in (0, 1), got {delta}")));
        }
        let lambda = args.lambda.unwrap_or(0.01);
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(CliError::Usage(format!("--lambda must be nonnegative, got {lambda}")));
        }
        if args.trials == Some(0) {
            return Err(CliError::Usage("--trials must be at least 1".to_string()));
        }
        if args.max_iter == Some(0) {
            return Err(CliError::Usage("--max-iter must be at least 1".to_string()));
        }
        Ok(Settings {
            problem,
            method,
            eta: args.eta.map(|e| positive("eta", e)).transpose()?,
            eps: positive("eps", args.eps.unwrap_or(DEFAULT_EPS))?,
            c: positive("c", args.c.unwrap_or(default_c))?,
            delta,
            lambda,
            dim,
            dims,
            max_iter: args.max_iter,
            seed: args.seed.unwrap_or(0),
            out_dir: args.out_dir.unwrap_or_else(|| PathBuf::from("out")),
            trials: args.trials,
            eta_grid,
            trace_points: args.trace_points.unwrap_or(false),
            radius: args.radius.map(|r| positive("radius", r)).transpose()?,
            x0: point("x0", args.x0)?,
            point: point("point", args.point)?,
            margin: args.margin.map(|m| positive("margin", m)).transpose()?,
        })
    }
}
