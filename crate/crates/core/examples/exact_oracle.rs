//! Exact grid-restricted optimum of a small instance, next to the dual bound.

use fpa_bidding::benchmarks::{exhaustive_oracle, lagrangian_value, solve_mu_star, OracleConstraint};
use fpa_bidding::model::{random_discrete_instance, BudgetPlan};

fn main() -> fpa_bidding::Result<()> {
    let instance = random_discrete_instance(5, 4, 3)?;
    let grid = [0.0, 1.0, 1.25, 1.5, 1.75];
    let global = exhaustive_oracle(&instance, &grid, OracleConstraint::Global)?;
    let plan = BudgetPlan::uniform(&instance.params);
    let per_period = exhaustive_oracle(&instance, &grid, OracleConstraint::PerPeriod(&plan))?;
    let solution = solve_mu_star(&instance);

    println!("budget {:.3} over {} periods", instance.params.budget, instance.horizon());
    println!("grid optimum, total budget:      {global:.6}");
    println!("grid optimum, per-period budget: {per_period:.6}");
    println!("V^LR(mu*) = {:.6} at mu* = {:.4}", solution.v_lr, solution.mu_star);
    for mu in [0.0, 0.5, 1.0, 2.0] {
        println!("V^LR({mu}) = {:.6}", lagrangian_value(&instance, mu));
    }
    Ok(())
}
