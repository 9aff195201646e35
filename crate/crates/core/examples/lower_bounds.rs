//! Both lower-bound families: offline optima checked three ways, and the
//! bidder's realized regret on each instance of the pair.

use fpa_bidding::sim::{lower_bound_check, LowerBoundKind};

fn main() -> fpa_bidding::Result<()> {
    let horizon = 200;
    for (kind, knob) in [(LowerBoundKind::ValueShift, 40.0), (LowerBoundKind::PlanError, 40.0)] {
        let report = lower_bound_check(kind, horizon, knob, 50, 1)?;
        println!("{kind:?}, T={horizon}, knob={knob}");
        println!("  closed form   {:?}", report.closed_form);
        println!("  grid oracle   {:?}", report.oracle);
        println!("  dual bound    {:?}", report.v_lr);
        println!("  T=4 oracle    {:?} vs {:?}", report.reduced.oracle, report.reduced.closed_form);
        println!("  deviation     {:?}", report.deviation);
        println!("  regret        {:?}", report.regret);
    }
    Ok(())
}
