//! Batch experiments: repeated random splits, committees, error rates and
//! timings.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use mucca_core::baselines::{
    label_propagation, wmv_predict, DEFAULT_LABPROP_MAX_ITERS, DEFAULT_LABPROP_TOL,
};
use mucca_core::eval::{build_tree, error_rate, majority_vote, sample_split, test_nodes, TreeMode};
use mucca_core::game::{default_ess_max_iters, GameInstance, DEFAULT_ESS_TOL};
use mucca_core::graph::{FullLabeling, PartialLabeling, WeightedGraph};
use mucca_core::mucca::predict;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Mucca,
    Wmv,
    Labprop,
    GtgEss,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Mucca => "mucca",
            Algorithm::Wmv => "wmv",
            Algorithm::Labprop => "labprop",
            Algorithm::GtgEss => "gtg-ess",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "mucca" => Ok(Algorithm::Mucca),
            "wmv" => Ok(Algorithm::Wmv),
            "labprop" => Ok(Algorithm::Labprop),
            "gtg-ess" => Ok(Algorithm::GtgEss),
            _ => Err(ConfigError::Invalid(format!("unknown algorithm `{s}`"))),
        }
    }
}

/// Graph a predictor runs on: the input graph itself or spanning trees of
/// it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TreeChoice {
    None,
    Mst,
    Rst,
}

impl TreeChoice {
    pub fn as_str(self) -> &'static str {
        match self {
            TreeChoice::None => "none",
            TreeChoice::Mst => "mst",
            TreeChoice::Rst => "rst",
        }
    }

    fn mode(self) -> Option<TreeMode> {
        match self {
            TreeChoice::None => None,
            TreeChoice::Mst => Some(TreeMode::Mst),
            TreeChoice::Rst => Some(TreeMode::Rst),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{0}")]
    Parse(#[from] toml::de::Error),
    #[error("{0}")]
    Invalid(String),
}

pub const DEFAULT_FRACTIONS: [f64; 4] = [0.005, 0.01, 0.02, 0.05];
pub const DEFAULT_RUNS: usize = 10;

/// One experiment: an algorithm, the graph it runs on and the grid of
/// training fractions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    #[serde(default = "default_tree")]
    pub tree: TreeChoice,
    #[serde(default = "default_committee")]
    pub committee: usize,
    #[serde(default = "default_fractions")]
    pub fractions: Vec<f64>,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default)]
    pub seed: u64,
    /// Edge-list file; may be supplied on the command line instead.
    #[serde(default)]
    pub graph: Option<String>,
    /// Ground-truth label file.
    #[serde(default)]
    pub labels: Option<String>,
    /// Number of classes, when more than the labels file shows.
    #[serde(default)]
    pub classes: Option<usize>,
}

fn default_tree() -> TreeChoice {
    TreeChoice::None
}

fn default_committee() -> usize {
    1
}

fn default_fractions() -> Vec<f64> {
    DEFAULT_FRACTIONS.to_vec()
}

fn default_runs() -> usize {
    DEFAULT_RUNS
}

impl ExperimentConfig {
    pub fn new(algorithm: Algorithm, tree: TreeChoice) -> Self {
        ExperimentConfig {
            algorithm,
            tree,
            committee: 1,
            fractions: default_fractions(),
            runs: DEFAULT_RUNS,
            seed: 0,
            graph: None,
            labels: None,
            classes: None,
        }
    }

    /// Parses `key = value` lines, e.g.
    ///
    /// ```text
    /// algorithm = "mucca"
    /// tree = "rst"
    /// committee = 11
    /// fractions = [0.005, 0.01]
    /// runs = 10
    /// seed = 42
    /// ```
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |m: &str| Err(ConfigError::Invalid(m.to_owned()));
        if self.committee == 0 || self.committee.is_multiple_of(2) {
            return invalid("committee size must be odd and at least 1");
        }
        if self.fractions.is_empty() {
            return invalid("at least one training fraction is required");
        }
        if let Some(f) = self.fractions.iter().find(|&&f| !(f > 0.0 && f <= 1.0)) {
            return Err(ConfigError::Invalid(format!(
                "training fraction {f} is outside (0, 1]"
            )));
        }
        if self.runs == 0 {
            return invalid("runs must be at least 1");
        }
        if self.algorithm == Algorithm::Mucca && self.tree == TreeChoice::None {
            return invalid("mucca needs tree = \"mst\" or \"rst\"");
        }
        if self.tree == TreeChoice::None && self.committee > 1 {
            return invalid("a committee needs spanning trees");
        }
        Ok(())
    }

    /// Row label such as `11*mucca+rst`.
    pub fn name(&self) -> String {
        let mut s = String::new();
        if self.committee > 1 {
            s += &format!("{}*", self.committee);
        }
        s += self.algorithm.as_str();
        if self.tree != TreeChoice::None {
            s += "+";
            s += self.tree.as_str();
        }
        s
    }
}

/// Ground truth for an experiment.
#[derive(Debug, Clone, Copy)]
pub struct Truth<'a> {
    pub labels: &'a [Option<usize>],
    pub classes: usize,
}

/// One predictor call.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: String,
    pub tree_mode: String,
    pub committee: usize,
    pub fraction: f64,
    pub run: usize,
    pub seed: u64,
    pub error: f64,
    pub seconds: f64,
}

/// Aggregate of all runs at one training fraction.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub name: String,
    pub fraction: f64,
    pub mean_error: f64,
    /// Sample standard deviation; zero for a single run.
    pub std_error: f64,
    pub mean_seconds: f64,
    pub seeds: Vec<u64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultTable {
    pub records: Vec<RunRecord>,
}

impl ResultTable {
    pub fn extend(&mut self, other: ResultTable) {
        self.records.extend(other.records);
    }

    /// Summaries per (configuration, fraction), in first-seen order.
    pub fn summaries(&self) -> Vec<CellSummary> {
        let mut cells: Vec<(String, f64, Vec<&RunRecord>)> = Vec::new();
        for r in &self.records {
            let name = record_name(r);
            match cells
                .iter_mut()
                .find(|(n, f, _)| *n == name && *f == r.fraction)
            {
                Some(cell) => cell.2.push(r),
                None => cells.push((name, r.fraction, vec![r])),
            }
        }
        cells
            .into_iter()
            .map(|(name, fraction, runs)| {
                let k = runs.len() as f64;
                let mean_error = runs.iter().map(|r| r.error).sum::<f64>() / k;
                let var = if runs.len() > 1 {
                    runs.iter()
                        .map(|r| (r.error - mean_error).powi(2))
                        .sum::<f64>()
                        / (k - 1.0)
                } else {
                    0.0
                };
                CellSummary {
                    name,
                    fraction,
                    mean_error,
                    std_error: var.sqrt(),
                    mean_seconds: runs.iter().map(|r| r.seconds).sum::<f64>() / k,
                    seeds: runs.iter().map(|r| r.seed).collect(),
                }
            })
            .collect()
    }

    pub fn write_csv(&self, out: impl Write) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.records {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn record_name(r: &RunRecord) -> String {
    let mut s = String::new();
    if r.committee > 1 {
        s += &format!("{}*", r.committee);
    }
    s += &r.algorithm;
    if r.tree_mode != "none" {
        s += "+";
        s += &r.tree_mode;
    }
    s
}

/// Seeds of every (fraction, run) cell, fraction-major, drawn from a
/// ChaCha8 stream keyed by the master seed. They depend only on the master
/// seed and the grid shape, so configurations sharing both are evaluated
/// on the same splits.
pub fn run_seeds(master: u64, fractions: usize, runs: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    (0..fractions * runs).map(|_| rng.next_u64()).collect()
}

/// Seeds of the committee members of a run.
pub fn member_seeds(run_seed: u64, committee: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(run_seed);
    rng.set_stream(1);
    (0..committee).map(|_| rng.next_u64()).collect()
}

/// Predicts with `cfg`'s algorithm, tree choice and committee, given the
/// member seeds.
pub fn predict_with(
    cfg: &ExperimentConfig,
    g: &WeightedGraph,
    y: &PartialLabeling,
    seeds: &[u64],
) -> mucca_core::Result<FullLabeling> {
    let Some(mode) = cfg.tree.mode() else {
        return run_algorithm(cfg.algorithm, g, y);
    };
    let members = seeds
        .iter()
        .map(|&seed| {
            let t = build_tree(g, mode, seed);
            match cfg.algorithm {
                Algorithm::Mucca => predict(&t, y),
                other => run_algorithm(other, &t.to_graph(), y),
            }
        })
        .collect::<mucca_core::Result<Vec<_>>>()?;
    if members.len() == 1 {
        return Ok(members.into_iter().next().expect("one member"));
    }
    majority_vote(&members)
}

fn run_algorithm(
    algorithm: Algorithm,
    g: &WeightedGraph,
    y: &PartialLabeling,
) -> mucca_core::Result<FullLabeling> {
    match algorithm {
        Algorithm::Mucca => Err(mucca_core::Error::InvalidParameter(
            "mucca runs on spanning trees",
        )),
        Algorithm::Wmv => wmv_predict(g, y),
        Algorithm::Labprop => {
            Ok(label_propagation(g, y, DEFAULT_LABPROP_TOL, DEFAULT_LABPROP_MAX_ITERS)?.labels)
        }
        Algorithm::GtgEss => {
            let game = GameInstance::new(g, y)?;
            let init = game.uniform_profile();
            Ok(game
                .gtg_ess_solve(
                    &init,
                    DEFAULT_ESS_TOL,
                    default_ess_max_iters(g.node_count()),
                )?
                .labeling)
        }
    }
}

/// Runs every (fraction, run) cell of `cfg`. Each run draws a fresh split
/// and fresh trees; only the predictor call is timed.
pub fn run_experiment(
    cfg: &ExperimentConfig,
    g: &WeightedGraph,
    truth: Truth<'_>,
) -> mucca_core::Result<ResultTable> {
    cfg.validate()
        .map_err(|_| mucca_core::Error::InvalidParameter("invalid experiment configuration"))?;
    if truth.labels.len() != g.node_count() {
        return Err(mucca_core::Error::SizeMismatch {
            expected: g.node_count(),
            got: truth.labels.len(),
        });
    }
    let seeds = run_seeds(cfg.seed, cfg.fractions.len(), cfg.runs);
    let mut records = Vec::with_capacity(seeds.len());
    for (fi, &fraction) in cfg.fractions.iter().enumerate() {
        for run in 0..cfg.runs {
            let seed = seeds[fi * cfg.runs + run];
            let y = sample_split(truth.labels, truth.classes, fraction, seed)?;
            let test = test_nodes(truth.labels, &y);
            if test.is_empty() {
                return Err(mucca_core::Error::EmptyTestSet);
            }
            let members = member_seeds(seed, cfg.committee);
            let start = Instant::now();
            let pred = predict_with(cfg, g, &y, &members)?;
            let seconds = start.elapsed().as_secs_f64();
            records.push(RunRecord {
                algorithm: cfg.algorithm.as_str().to_owned(),
                tree_mode: cfg.tree.as_str().to_owned(),
                committee: cfg.committee,
                fraction,
                run,
                seed,
                error: error_rate(&pred, truth.labels, &test)?,
                seconds,
            });
        }
    }
    Ok(ResultTable { records })
}
