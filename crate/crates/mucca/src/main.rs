use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mucca::experiment::{
    member_seeds, predict_with, run_experiment, Algorithm, ExperimentConfig, ResultTable,
    TreeChoice, Truth,
};
use mucca::io;
use mucca_core::baselines::{
    label_propagation, wmv_predict, DEFAULT_LABPROP_MAX_ITERS, DEFAULT_LABPROP_TOL,
};
use mucca_core::eval::{build_tree, TreeMode};
use mucca_core::game::{default_ess_max_iters, GameInstance, DEFAULT_ESS_TOL};
use mucca_core::graph::{PartialLabeling, WeightedGraph};
use mucca_core::knn::knn_graph;

/// Node classification on weighted graphs by tree-based equilibria.
#[derive(Parser)]
#[command(name = "mucca", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Writes a spanning tree of a graph as an edge list.
    Spanning {
        #[arg(long, value_enum, default_value = "mst")]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Edge list to read (`-` for stdin).
        #[arg(long, default_value = "-")]
        graph: PathBuf,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Labels every node with MUCCA on spanning trees of the graph.
    Predict {
        #[arg(long, value_enum, default_value = "mst")]
        tree: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of trees voting on each label (odd).
        #[arg(long, default_value_t = 1)]
        committee: usize,
        #[command(flatten)]
        io: Shared,
    },
    /// Finds an equilibrium by replicator dynamics.
    SolveEss {
        #[arg(long, default_value_t = DEFAULT_ESS_TOL)]
        tol: f64,
        /// Defaults to ten times the node count.
        #[arg(long)]
        max_iters: Option<usize>,
        /// CSV file for the convergence log.
        #[arg(long)]
        log: Option<PathBuf>,
        #[command(flatten)]
        io: Shared,
    },
    /// Runs a baseline predictor on the whole graph.
    Baseline {
        #[arg(long, value_enum)]
        algo: Baseline,
        #[arg(long, default_value_t = DEFAULT_LABPROP_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_LABPROP_MAX_ITERS)]
        max_iters: usize,
        #[command(flatten)]
        io: Shared,
    },
    /// Builds a k-nearest-neighbor graph from a feature CSV.
    BuildGraph {
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        out_graph: PathBuf,
        /// Where to write the `label` column, if the CSV has one.
        #[arg(long)]
        out_labels: Option<PathBuf>,
    },
    /// Runs experiment configurations and writes one CSV row per run.
    Experiment {
        /// Configuration file; repeat to run several into one table.
        #[arg(long, required = true)]
        config: Vec<PathBuf>,
        /// Edge list, overriding the configuration's `graph`.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Ground-truth labels, overriding the configuration's `labels`.
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct Shared {
    #[arg(long)]
    graph: PathBuf,
    /// Training labels as `node class` lines.
    #[arg(long)]
    labels: PathBuf,
    #[arg(long, default_value = "-")]
    out: PathBuf,
    /// Number of classes, if larger than the labels file implies.
    #[arg(long)]
    classes: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Mst,
    Rst,
}

impl From<Mode> for TreeMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Mst => TreeMode::Mst,
            Mode::Rst => TreeMode::Rst,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Baseline {
    Wmv,
    Labprop,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Spanning {
            mode,
            seed,
            graph,
            out,
        } => {
            let g = load_graph(&graph)?;
            let t = build_tree(&g, mode.into(), seed);
            io::write_tree(&t, io::create_output(&out)?)?;
        }
        Command::Predict {
            tree,
            seed,
            committee,
            io: shared,
        } => {
            if committee == 0 || committee.is_multiple_of(2) {
                bail!("--committee must be odd and at least 1");
            }
            let (g, y) = shared.load()?;
            let mut cfg = ExperimentConfig::new(Algorithm::Mucca, TreeChoice::Mst);
            cfg.tree = match tree {
                Mode::Mst => TreeChoice::Mst,
                Mode::Rst => TreeChoice::Rst,
            };
            cfg.committee = committee;
            let seeds = if committee == 1 {
                vec![seed]
            } else {
                member_seeds(seed, committee)
            };
            let labels = predict_with(&cfg, &g, &y, &seeds)?;
            io::write_labels(&labels, io::create_output(&shared.out)?)?;
        }
        Command::SolveEss {
            tol,
            max_iters,
            log,
            io: shared,
        } => {
            let (g, y) = shared.load()?;
            let game = GameInstance::new(&g, &y)?;
            let max_iters = max_iters.unwrap_or_else(|| default_ess_max_iters(g.node_count()));
            let outcome = game.gtg_ess_solve(&game.uniform_profile(), tol, max_iters)?;
            if !outcome.converged {
                eprintln!(
                    "warning: no convergence within {} iterations",
                    outcome.iterations
                );
            }
            io::write_labels(&outcome.labeling, io::create_output(&shared.out)?)?;
            if let Some(path) = log {
                let mut w = csv::Writer::from_path(&path)
                    .with_context(|| format!("writing {}", path.display()))?;
                w.write_record(["iteration", "potential", "max_delta"])?;
                for e in &outcome.log {
                    w.write_record([
                        e.iteration.to_string(),
                        e.potential.to_string(),
                        e.max_delta.to_string(),
                    ])?;
                }
                w.flush()?;
            }
        }
        Command::Baseline {
            algo,
            tol,
            max_iters,
            io: shared,
        } => {
            let (g, y) = shared.load()?;
            let labels = match algo {
                Baseline::Wmv => wmv_predict(&g, &y)?,
                Baseline::Labprop => label_propagation(&g, &y, tol, max_iters)?.labels,
            };
            io::write_labels(&labels, io::create_output(&shared.out)?)?;
        }
        Command::BuildGraph {
            k,
            features,
            out_graph,
            out_labels,
        } => {
            let f = io::load_features(&features)
                .with_context(|| format!("reading {}", features.display()))?;
            let g = knn_graph(&f.matrix, k)?;
            io::write_edge_list(&g, io::create_output(&out_graph)?)?;
            if let Some(path) = out_labels {
                let Some(labels) = f.matrix.labels() else {
                    bail!("{} has no label column", features.display());
                };
                io::write_partial_labels(labels, io::create_output(&path)?)?;
                if let Some(names) = f.class_names {
                    for (id, name) in names.iter().enumerate() {
                        eprintln!("class {id} = {name}");
                    }
                }
            }
        }
        Command::Experiment {
            config,
            graph,
            labels,
            out,
        } => {
            let mut table = ResultTable::default();
            for path in &config {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                let cfg = ExperimentConfig::parse(&text)
                    .with_context(|| format!("in {}", path.display()))?;
                let base = path.parent().unwrap_or(Path::new("."));
                let graph_path = resolve(graph.as_deref(), cfg.graph.as_deref(), base, "graph")?;
                let labels_path =
                    resolve(labels.as_deref(), cfg.labels.as_deref(), base, "labels")?;
                let g = load_graph(&graph_path)?;
                let truth = io::load_labels(&labels_path, g.node_count())
                    .with_context(|| format!("reading {}", labels_path.display()))?;
                let classes = truth.classes.max(cfg.classes.unwrap_or(0));
                let result = run_experiment(
                    &cfg,
                    &g,
                    Truth {
                        labels: &truth.labels,
                        classes,
                    },
                )?;
                for s in result.summaries() {
                    eprintln!(
                        "{:<16} fraction {:<6} error {:.4} ± {:.4}  {:.4} s/run",
                        s.name, s.fraction, s.mean_error, s.std_error, s.mean_seconds
                    );
                }
                table.extend(result);
            }
            let mut w = io::create_output(&out)?;
            table.write_csv(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn load_graph(path: &Path) -> Result<WeightedGraph> {
    io::load_edge_list(path).with_context(|| format!("reading {}", path.display()))
}

fn resolve(flag: Option<&Path>, config: Option<&str>, base: &Path, what: &str) -> Result<PathBuf> {
    match (flag, config) {
        (Some(p), _) => Ok(p.to_owned()),
        (None, Some(p)) => Ok(base.join(p)),
        (None, None) => bail!("no {what} file: set `{what}` in the configuration or pass --{what}"),
    }
}

impl Shared {
    fn load(&self) -> Result<(WeightedGraph, PartialLabeling)> {
        let g = load_graph(&self.graph)?;
        let f = io::load_labels(&self.labels, g.node_count())
            .with_context(|| format!("reading {}", self.labels.display()))?;
        let classes = f.classes.max(self.classes.unwrap_or(0));
        Ok((g, PartialLabeling::new(f.labels, classes)?))
    }
}
