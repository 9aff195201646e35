//! Lagrangian bound, ideal allocation and the plan benchmarks of a
//! nonstationary instance.

use fpa_bidding::benchmarks::{plan_benchmark, relaxed_plan_benchmark, solve_mu_star};
use fpa_bidding::model::{AuctionParams, BudgetPlan, CompetitorModel, Instance, ValueDistribution};

fn main() -> fpa_bidding::Result<()> {
    let horizon = 40;
    let params = AuctionParams::new(1.0, 2.0, horizon, 6.0)?;
    // values drift upward over the horizon
    let values = (0..horizon)
        .map(|t| {
            let lo = 1.0 + 0.5 * t as f64 / horizon as f64;
            ValueDistribution::uniform(lo, lo + 0.5)
        })
        .collect();
    let instance = Instance::new(params, values, CompetitorModel::uniform(1.0, 2.0))?;

    let solution = solve_mu_star(&instance);
    println!("mu* = {:.6}, V^LR = {:.6}, slack = {:.2e}", solution.mu_star, solution.v_lr, solution.slack);
    println!(
        "ideal allocation: first {:.4}, last {:.4}",
        solution.rho[0],
        solution.rho[horizon - 1]
    );

    let uniform = BudgetPlan::uniform(&params);
    let ideal = BudgetPlan::prediction(solution.rho.clone())?;
    println!("plan benchmark, uniform plan: {:.6}", plan_benchmark(&instance, &uniform)?);
    println!("plan benchmark, ideal plan:   {:.6}", plan_benchmark(&instance, &ideal)?);
    for eps in [0.0, 0.05, 0.1, 2.0] {
        let relaxed = relaxed_plan_benchmark(&instance, &uniform, &vec![eps; horizon], params.budget)?;
        println!("relaxed by {eps:<4}: {:.6} (price {:.4})", relaxed.value, relaxed.lambda);
    }
    Ok(())
}
