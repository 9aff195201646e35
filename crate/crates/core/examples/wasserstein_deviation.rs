//! Nonstationarity `W_T` of a two-block instance and the prediction error
//! `V_T` of a biased plan.

use fpa_bidding::benchmarks::ideal_allocation;
use fpa_bidding::model::{experiment_instance, BudgetPlan, ExperimentKind, ValueDistribution};
use fpa_bidding::nonstationarity::{v_total, w_total, wasserstein};

fn main() -> fpa_bidding::Result<()> {
    let a = ValueDistribution::uniform(1.0, 1.5);
    let b = ValueDistribution::point_mass(1.25);
    println!("W(U(1, 1.5), delta_1.25) = {:.6}", wasserstein(&a, &b));

    for shift in [0.0, 20.0, 40.0] {
        let inst = experiment_instance(ExperimentKind::Shift, 200, shift, 0)?.instance;
        let report = w_total(&inst);
        println!("shift {shift:>4}: W_T = {:.4} (+/- {:.4})", report.w_total, report.w_error);
    }

    let inst = experiment_instance(ExperimentKind::Horizon, 200, 0.0, 0)?.instance;
    let rho = ideal_allocation(&inst);
    for eps in [0.0, 0.05] {
        let plan = BudgetPlan::prediction(rho.iter().map(|r| (r - eps).max(0.0)).collect())?;
        println!("eps {eps}: V_T = {:.4}", v_total(&rho, &plan)?);
    }
    Ok(())
}
