//! One episode of the dual-descent bidder on a stationary instance.

use fpa_bidding::model::{AuctionParams, BudgetPlan, CompetitorModel, Instance, ValueDistribution};
use fpa_bidding::policy::DualConfig;
use fpa_bidding::sim::run_episode;

fn main() -> fpa_bidding::Result<()> {
    let params = AuctionParams::new(1.0, 2.0, 500, 100.0)?;
    let instance = Instance::stationary(
        params,
        ValueDistribution::uniform(1.0, 2.0),
        CompetitorModel::uniform(1.0, 2.0),
    )?;
    let plan = BudgetPlan::uniform(&params);
    let episode = run_episode(&instance, &plan, DualConfig::default_for(&params), 42)?;

    for step in episode.trajectory.iter().step_by(50) {
        println!(
            "t={:>3} v={:.3} bid={:.3} won={:<5} mu={:.4} budget={:.2}",
            step.t, step.value, step.bid, step.won, step.mu_after, step.budget_after
        );
    }
    println!(
        "total reward {:.3}, spent {:.3} of {}",
        episode.total_reward, episode.total_spend, params.budget
    );
    Ok(())
}
