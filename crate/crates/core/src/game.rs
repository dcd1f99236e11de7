//! The graph transduction game.
//!
//! Nodes are players and classes are pure strategies. A player's payoff is
//! the total weight of the edges to neighbors that chose the same class.
//! Training nodes are determined players whose strategy is fixed. The
//! remaining undetermined players are free.
//!
//! Besides payoffs this module checks pure Nash equilibria, enumerates them
//! exhaustively for small games, and searches for one with discrete
//! multi-population replicator dynamics (GTG-ESS).

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{argmax_score, FullLabeling, PartialLabeling, WeightedGraph};
use crate::{Error, Result};

/// A deviation counts as an improvement only if it gains more than this
/// fraction of the player's total incident weight. Absorbs summation-order
/// rounding; exact ties are never improvements.
pub const NASH_RELATIVE_TOLERANCE: f64 = 1e-12;

/// Largest search space accepted by [`GameInstance::enumerate_pure_nash`].
pub const ENUMERATION_LIMIT: u64 = 1_000_000;

pub const DEFAULT_ESS_TOL: f64 = 1e-6;

/// Iteration cap used when none is given: ten sweeps per node.
pub fn default_ess_max_iters(n: usize) -> usize {
    10 * n.max(1)
}

/// A game over a graph with a set of determined players.
#[derive(Debug, Clone, Copy)]
pub struct GameInstance<'a> {
    graph: &'a WeightedGraph,
    training: &'a PartialLabeling,
}

/// Outcome of a pure Nash check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NashVerdict {
    Equilibrium,
    /// `player` strictly gains `gain` by switching to `class`.
    Deviation {
        player: usize,
        class: usize,
        gain: f64,
    },
}

impl NashVerdict {
    pub fn is_equilibrium(&self) -> bool {
        matches!(self, NashVerdict::Equilibrium)
    }
}

/// Mixed strategies: an `n x c` row-stochastic matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyProfile {
    data: Vec<f64>,
    classes: usize,
}

impl StrategyProfile {
    /// Wraps a row-major matrix; rows must be distributions within 1e-9.
    pub fn from_rows(data: Vec<f64>, classes: usize) -> Result<Self> {
        if classes == 0 || !data.len().is_multiple_of(classes) {
            return Err(Error::InvalidProfile(
                "matrix shape does not match class count",
            ));
        }
        let x = Self { data, classes };
        for i in 0..x.len() {
            let row = x.row(i);
            if row.iter().any(|&p| !(p >= 0.0 && p.is_finite())) {
                return Err(Error::InvalidProfile("negative or non-finite probability"));
            }
            if libm::fabs(row.iter().sum::<f64>() - 1.0) > 1e-9 {
                return Err(Error::InvalidProfile("row does not sum to one"));
            }
        }
        Ok(x)
    }

    /// One-hot rows for every node.
    pub fn from_labeling(s: &FullLabeling) -> Self {
        let c = s.classes();
        let mut data = vec![0.0; s.len() * c];
        for (i, &k) in s.as_slice().iter().enumerate() {
            data[i * c + k] = 1.0;
        }
        Self { data, classes: c }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len() / self.classes
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn classes(&self) -> usize {
        self.classes
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.classes..(i + 1) * self.classes]
    }

    /// Largest absolute entry-wise difference to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| f64::max(m, libm::fabs(a - b)))
    }

    /// True if every row is within `tol` of a one-hot vector.
    pub fn is_nearly_pure(&self, tol: f64) -> bool {
        (0..self.len()).all(|i| self.row(i).iter().any(|&p| p >= 1.0 - tol))
    }
}

/// Result of a GTG-ESS run.
#[derive(Debug, Clone)]
pub struct EssOutcome {
    pub profile: StrategyProfile,
    pub labeling: FullLabeling,
    pub iterations: usize,
    pub converged: bool,
    pub log: Vec<EssLogEntry>,
}

/// One line of the convergence log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EssLogEntry {
    pub iteration: usize,
    pub potential: f64,
    pub max_delta: f64,
}

impl<'a> GameInstance<'a> {
    pub fn new(graph: &'a WeightedGraph, training: &'a PartialLabeling) -> Result<Self> {
        training.check_len(graph.node_count())?;
        if training.classes() < 2 {
            return Err(Error::TooFewClasses(training.classes()));
        }
        Ok(Self { graph, training })
    }

    #[inline]
    pub fn graph(&self) -> &'a WeightedGraph {
        self.graph
    }

    #[inline]
    pub fn training(&self) -> &'a PartialLabeling {
        self.training
    }

    #[inline]
    pub fn classes(&self) -> usize {
        self.training.classes()
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn undetermined(&self) -> impl Iterator<Item = usize> + 'a {
        let t = self.training;
        (0..t.len()).filter(move |&i| !t.is_revealed(i))
    }

    /// `pi_i(s)`: weight of the edges from `i` to same-labeled neighbors.
    pub fn payoff_pure(&self, s: &FullLabeling, i: usize) -> f64 {
        let own = s.get(i);
        self.graph
            .neighbors(i)
            .iter()
            .filter(|nb| s.get(nb.node) == own)
            .map(|nb| nb.weight)
            .sum()
    }

    /// Payoff of player `i` for each class, with the neighbors' labels fixed.
    pub fn class_payoffs(&self, s: &[usize], i: usize, out: &mut [f64]) {
        out.fill(0.0);
        for nb in self.graph.neighbors(i) {
            out[s[nb.node]] += nb.weight;
        }
    }

    /// `u_i(x) = sum_j w_ij <x_i, x_j>`.
    pub fn utility_mixed(&self, x: &StrategyProfile, i: usize) -> f64 {
        let xi = x.row(i);
        self.graph
            .neighbors(i)
            .iter()
            .map(|nb| nb.weight * dot(xi, x.row(nb.node)))
            .sum()
    }

    /// Total weighted agreement `sum_{(i,j) in E} w_ij <x_i, x_j>`, the
    /// potential ascended by the replicator dynamics.
    pub fn potential(&self, x: &StrategyProfile) -> f64 {
        self.graph
            .edges()
            .iter()
            .map(|e| e.weight * dot(x.row(e.u), x.row(e.v)))
            .sum()
    }

    /// Checks that no undetermined player can strictly raise its payoff by
    /// switching class alone. On failure the witness is the first such
    /// player (by id) with its best alternative class.
    pub fn is_pure_nash(&self, s: &FullLabeling) -> Result<NashVerdict> {
        self.check_profile(s)?;
        let mut pay = vec![0.0; self.classes()];
        for i in self.undetermined() {
            self.class_payoffs(s.as_slice(), i, &mut pay);
            let own = s.get(i);
            let best = argmax_score(&pay);
            let gain = pay[best] - pay[own];
            if gain > NASH_RELATIVE_TOLERANCE * self.graph.strength(i) {
                return Ok(NashVerdict::Deviation {
                    player: i,
                    class: best,
                    gain,
                });
            }
        }
        Ok(NashVerdict::Equilibrium)
    }

    fn check_profile(&self, s: &FullLabeling) -> Result<()> {
        if s.len() != self.node_count() {
            return Err(Error::SizeMismatch {
                expected: self.node_count(),
                got: s.len(),
            });
        }
        if s.classes() > self.classes() {
            if let Some(&class) = s.as_slice().iter().find(|&&k| k >= self.classes()) {
                return Err(Error::ClassOutOfRange {
                    class,
                    classes: self.classes(),
                });
            }
        }
        for (node, expected) in self.training.revealed() {
            if s.get(node) != expected {
                return Err(Error::InconsistentWithTraining {
                    node,
                    expected,
                    got: s.get(node),
                });
            }
        }
        Ok(())
    }

    /// Every pure Nash equilibrium, by exhaustive search over the
    /// undetermined players, in lexicographic order of the labelings.
    pub fn enumerate_pure_nash(&self) -> Result<Vec<FullLabeling>> {
        let free: Vec<usize> = self.undetermined().collect();
        let c = self.classes();
        let too_large = Error::TooLarge {
            classes: c,
            players: free.len(),
            limit: ENUMERATION_LIMIT,
        };
        let total = u32::try_from(free.len())
            .ok()
            .and_then(|p| (c as u64).checked_pow(p))
            .filter(|&t| t <= ENUMERATION_LIMIT)
            .ok_or(too_large)?;

        let mut labels: Vec<usize> = self
            .training
            .as_slice()
            .iter()
            .map(|l| l.unwrap_or(0))
            .collect();
        let mut pay = vec![0.0; c];
        let mut out = Vec::new();
        for _ in 0..total {
            let stable = free.iter().all(|&i| {
                self.class_payoffs(&labels, i, &mut pay);
                let best = argmax_score(&pay);
                pay[best] - pay[labels[i]] <= NASH_RELATIVE_TOLERANCE * self.graph.strength(i)
            });
            if stable {
                out.push(FullLabeling::new(labels.clone(), c)?);
            }
            // Odometer step, last free player least significant.
            for &i in free.iter().rev() {
                labels[i] += 1;
                if labels[i] < c {
                    break;
                }
                labels[i] = 0;
            }
        }
        Ok(out)
    }

    /// Uniform rows for undetermined players, one-hot rows for the rest.
    pub fn uniform_profile(&self) -> StrategyProfile {
        let c = self.classes();
        let mut data = vec![1.0 / c as f64; self.node_count() * c];
        for (i, k) in self.training.revealed() {
            let row = &mut data[i * c..(i + 1) * c];
            row.fill(0.0);
            row[k] = 1.0;
        }
        StrategyProfile { data, classes: c }
    }

    /// Checks shape and that determined players play their training class.
    pub fn validate_profile(&self, x: &StrategyProfile) -> Result<()> {
        if x.classes() != self.classes() || x.len() != self.node_count() {
            return Err(Error::InvalidProfile(
                "profile shape does not match the game",
            ));
        }
        for (i, k) in self.training.revealed() {
            if x.row(i)[k] != 1.0 {
                return Err(Error::InvalidProfile(
                    "determined player is not one-hot at its class",
                ));
            }
        }
        Ok(())
    }

    /// One synchronous step `x_ih <- x_ih * u_i(e_h) / u_i(x)` for every
    /// undetermined player.
    pub fn replicator_step(&self, x: &StrategyProfile) -> Result<StrategyProfile> {
        self.validate_profile(x)?;
        let mut next = x.clone();
        let skip = vec![false; self.node_count()];
        self.step_into(x, &mut next, &skip)?;
        Ok(next)
    }

    /// Writes the update of `x` into `out`. Returns the largest entry change
    /// and the largest relative gain `(u_i(e_h) - u_i(x)) / u_i(x)` any
    /// player could get from a pure strategy. Players flagged in `skip` keep
    /// their row.
    fn step_into(
        &self,
        x: &StrategyProfile,
        out: &mut StrategyProfile,
        skip: &[bool],
    ) -> Result<(f64, f64)> {
        let c = self.classes();
        let mut pure = vec![0.0; c];
        let mut delta: f64 = 0.0;
        let mut gain: f64 = 0.0;
        for i in 0..self.node_count() {
            if self.training.is_revealed(i) || skip[i] {
                continue;
            }
            pure.fill(0.0);
            for nb in self.graph.neighbors(i) {
                for (p, &xj) in pure.iter_mut().zip(x.row(nb.node)) {
                    *p += nb.weight * xj;
                }
            }
            let xi = x.row(i);
            let u = dot(xi, &pure);
            if !(u > 0.0) {
                return Err(Error::ZeroUtility(i));
            }
            let row = &mut out.data[i * c..(i + 1) * c];
            for h in 0..c {
                row[h] = xi[h] * pure[h] / u;
                delta = delta.max(libm::fabs(row[h] - xi[h]));
                gain = gain.max(pure[h] / u - 1.0);
            }
        }
        Ok((delta, gain))
    }

    /// GTG-ESS: iterates the replicator dynamics from `init` until the
    /// largest row change drops below `tol` or `max_iters` steps ran, then
    /// decodes each row by argmax (ties to the smallest class).
    ///
    /// A small change alone does not count as convergence: near a rest point
    /// that is not an equilibrium, a strategy with almost no mass grows by
    /// tiny absolute amounts even though it pays best. The run only stops
    /// once, in addition, no pure strategy beats a player's current utility
    /// by a relative margin of `tol` or more.
    ///
    /// Undetermined players without neighbors have zero utility forever;
    /// they are left out of the dynamics and take the training plurality.
    pub fn gtg_ess_solve(
        &self,
        init: &StrategyProfile,
        tol: f64,
        max_iters: usize,
    ) -> Result<EssOutcome> {
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter("tolerance must be positive"));
        }
        self.validate_profile(init)?;
        let n = self.node_count();
        let skip: Vec<bool> = (0..n).map(|i| self.graph.degree(i) == 0).collect();

        let mut x = init.clone();
        let mut next = init.clone();
        let mut log = Vec::new();
        let mut iterations = 0;
        let mut converged = false;
        while iterations < max_iters {
            let (delta, gain) = self.step_into(&x, &mut next, &skip)?;
            core::mem::swap(&mut x, &mut next);
            iterations += 1;
            log.push(EssLogEntry {
                iteration: iterations,
                potential: self.potential(&x),
                max_delta: delta,
            });
            if delta < tol && gain < tol {
                converged = true;
                break;
            }
        }

        let fallback = self.training.plurality().unwrap_or(0);
        let labels = (0..n)
            .map(|i| match self.training.get(i) {
                Some(k) => k,
                None if skip[i] => fallback,
                None => argmax_score(x.row(i)),
            })
            .collect();
        Ok(EssOutcome {
            labeling: FullLabeling::new(labels, self.classes())?,
            profile: x,
            iterations,
            converged,
            log,
        })
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
