//! The bidder with and without its budget gate on the same arrivals.

use fpa_bidding::model::{sample_arrivals, AuctionParams, BudgetPlan, CompetitorModel, Instance, ValueDistribution};
use fpa_bidding::policy::{run_alternate, run_path, DualConfig};

fn main() -> fpa_bidding::Result<()> {
    let params = AuctionParams::new(1.0, 2.0, 300, 15.0)?;
    let instance = Instance::stationary(
        params,
        ValueDistribution::uniform(1.5, 2.0),
        CompetitorModel::uniform(1.0, 2.0),
    )?;
    let arrivals = sample_arrivals(&instance, 9);
    let plan = BudgetPlan::uniform(&params);
    // aggressive start so the budget runs dry
    let config = DualConfig { eta: 0.05, mu1: 0.0 };

    let gated = run_path(params, plan.clone(), config, &arrivals)?;
    let alternate = run_alternate(params, plan, config, &arrivals)?;
    let gated_total: f64 = gated.iter().map(|s| s.reward).sum();
    let penalized = alternate.records.iter().filter(|s| s.penalized).count();
    println!("gated reward      {gated_total:.4}");
    println!("alternate reward  {:.4} ({penalized} penalized wins)", alternate.penalized_total);
    println!(
        "alternate overspend {:.4} <= {:.1}",
        alternate.total_spend - params.budget,
        params.dual_bound() / config.eta
    );
    Ok(())
}
