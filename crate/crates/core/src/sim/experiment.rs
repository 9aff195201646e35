use serde::{Deserialize, Serialize};

use crate::benchmarks::solve_mu_star;
use crate::error::{Error, Result};
use crate::model::{experiment_instance, BudgetPlan, ExperimentKind};
use crate::policy::DualConfig;

use super::episode::monte_carlo;

/// Budget plan handed to the bidder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// `rho_hat_t = B/T`.
    Uninformative,
    /// `rho_hat_t = rho_t`, the ideal allocation.
    Informative,
    /// `rho_hat_t = max(rho_t - eps, 0)`.
    Predicted,
}

impl Policy {
    pub fn label(self) -> &'static str {
        match self {
            Policy::Uninformative => "uninformative",
            Policy::Informative => "informative",
            Policy::Predicted => "predicted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    /// Horizons swept by the horizon experiment; the other kinds use the
    /// first entry.
    pub horizons: Vec<usize>,
    /// Shift `W` or bias `eps`; ignored by the horizon experiment.
    pub knobs: Vec<f64>,
    pub reps: usize,
    pub seed: u64,
    /// Step size; `1/sqrt(T)` when absent.
    pub eta: Option<f64>,
    pub mu1: f64,
}

impl ExperimentConfig {
    /// Default grids: `T = 100, 200, ..., 1000`; `W = 0, 10, ..., 50` at
    /// `T = 200`; `eps = 0, 0.02, ..., 0.1` at `T = 200`.
    pub fn new(kind: ExperimentKind, reps: usize, seed: u64) -> Self {
        let (horizons, knobs) = match kind {
            ExperimentKind::Horizon => ((1..=10).map(|k| 100 * k).collect(), vec![]),
            ExperimentKind::Shift => (vec![200], (0..=5).map(|k| 10.0 * k as f64).collect()),
            ExperimentKind::Prediction => {
                (vec![200], (0..=5).map(|k| 0.02 * k as f64).collect())
            }
        };
        ExperimentConfig {
            kind,
            horizons,
            knobs,
            reps,
            seed,
            eta: None,
            mu1: 0.0,
        }
    }

    fn points(&self) -> Result<Vec<(usize, f64)>> {
        if self.horizons.is_empty() {
            return Err(Error::InvalidInput("experiment needs at least one horizon".into()));
        }
        Ok(match self.kind {
            ExperimentKind::Horizon => self.horizons.iter().map(|&t| (t, t as f64)).collect(),
            _ => self.knobs.iter().map(|&k| (self.horizons[0], k)).collect(),
        })
    }
}

/// One (knob, policy) cell of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub knob: f64,
    pub horizon: usize,
    pub reps: usize,
    pub mean_reward: f64,
    pub stderr: f64,
    /// `V^LR(mu*)`.
    pub benchmark: f64,
    /// `(benchmark - mean_reward) / benchmark`.
    pub relative_error: f64,
    /// `stderr / benchmark`.
    pub relative_error_stderr: f64,
    pub policy: Policy,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub kind: ExperimentKind,
    pub rows: Vec<ExperimentRow>,
}

impl ExperimentReport {
    /// Rows of one policy in knob order.
    pub fn series(&self, policy: Policy) -> Vec<&ExperimentRow> {
        self.rows.iter().filter(|r| r.policy == policy).collect()
    }

    pub fn policies(&self) -> Vec<Policy> {
        let mut out: Vec<Policy> = Vec::new();
        for row in &self.rows {
            if !out.contains(&row.policy) {
                out.push(row.policy);
            }
        }
        out
    }
}

/// Runs one experiment over its knob grid. Every grid point reuses the same
/// seed, so knob values are compared under common random numbers.
pub fn experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let mut rows = Vec::new();
    for (horizon, knob) in config.points()? {
        let setup = experiment_instance(config.kind, horizon, knob, config.seed)?;
        let instance = &setup.instance;
        let params = instance.params;
        let dual = DualConfig {
            eta: config.eta.unwrap_or_else(|| params.default_step()),
            mu1: config.mu1,
        };
        let solution = solve_mu_star(instance);
        let plans: Vec<(Policy, BudgetPlan)> = match config.kind {
            ExperimentKind::Horizon => vec![
                (Policy::Uninformative, BudgetPlan::uniform(&params)),
                (Policy::Informative, BudgetPlan::prediction(solution.rho.clone())?),
            ],
            ExperimentKind::Shift => vec![(Policy::Uninformative, BudgetPlan::uniform(&params))],
            ExperimentKind::Prediction => {
                let plan = setup
                    .plan
                    .clone()
                    .ok_or_else(|| Error::InvalidInput("prediction instance without plan".into()))?;
                vec![(Policy::Predicted, plan)]
            }
        };
        for (policy, plan) in plans {
            let mc = monte_carlo(instance, &plan, dual, config.reps, config.seed)?;
            let benchmark = solution.v_lr;
            let (relative_error, relative_error_stderr) = if benchmark > 0.0 {
                ((benchmark - mc.mean) / benchmark, mc.stderr / benchmark)
            } else {
                (0.0, 0.0)
            };
            rows.push(ExperimentRow {
                knob,
                horizon,
                reps: config.reps,
                mean_reward: mc.mean,
                stderr: mc.stderr,
                benchmark,
                relative_error,
                relative_error_stderr,
                policy,
            });
        }
    }
    Ok(ExperimentReport {
        kind: config.kind,
        rows,
    })
}
