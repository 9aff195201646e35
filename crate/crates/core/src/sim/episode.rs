use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::model::{ArrivalStream, BudgetPlan, Instance};
use crate::policy::{run_path, DualConfig, StepRecord};

#[derive(Debug, Clone, Serialize)]
pub struct EpisodeResult {
    pub seed: u64,
    pub episode: u64,
    pub total_reward: f64,
    pub total_spend: f64,
    pub trajectory: Vec<StepRecord>,
}

/// Episode `episode` of the stream family keyed by `seed`.
pub fn run_episode_at(
    instance: &Instance,
    plan: &BudgetPlan,
    config: DualConfig,
    seed: u64,
    episode: u64,
) -> Result<EpisodeResult> {
    let arrivals = ArrivalStream::new(seed, episode).episode(instance);
    let trajectory = run_path(instance.params, plan.clone(), config, &arrivals)?;
    Ok(EpisodeResult {
        seed,
        episode,
        total_reward: trajectory.iter().map(|r| r.reward).sum(),
        total_spend: trajectory.iter().map(|r| r.payment).sum(),
        trajectory,
    })
}

/// Runs the dual-descent bidder over episode 0 of `seed`.
pub fn run_episode(
    instance: &Instance,
    plan: &BudgetPlan,
    config: DualConfig,
    seed: u64,
) -> Result<EpisodeResult> {
    run_episode_at(instance, plan, config, seed, 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarlo {
    pub mean: f64,
    /// Standard error of the mean; zero for a single repetition.
    pub stderr: f64,
    pub reps: usize,
}

/// Mean total reward over episodes `0..reps` of `base_seed`.
///
/// Episodes run in parallel; totals are reduced in episode order so the
/// result does not depend on scheduling.
pub fn monte_carlo(
    instance: &Instance,
    plan: &BudgetPlan,
    config: DualConfig,
    reps: usize,
    base_seed: u64,
) -> Result<MonteCarlo> {
    if reps == 0 {
        return Err(crate::error::Error::InvalidInput("reps must be at least 1".into()));
    }
    let totals = (0..reps as u64)
        .into_par_iter()
        .map(|k| run_episode_at(instance, plan, config, base_seed, k).map(|e| e.total_reward))
        .collect::<Result<Vec<f64>>>()?;
    let n = reps as f64;
    let mean = totals.iter().sum::<f64>() / n;
    let stderr = if reps > 1 {
        let var = totals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    Ok(MonteCarlo { mean, stderr, reps })
}
