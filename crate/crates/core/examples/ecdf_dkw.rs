//! Empirical CDF of competing bids against its DKW band.

use fpa_bidding::ecdf::{dkw_bound, err_envelope, EmpiricalCdf};
use fpa_bidding::model::{AuctionParams, CompetitorModel, Instance, ValueDistribution};
use fpa_bidding::model::ArrivalStream;

fn main() -> fpa_bidding::Result<()> {
    let horizon = 2000;
    let params = AuctionParams::new(1.0, 2.0, horizon, 1.0)?;
    let competitor = CompetitorModel::uniform(1.0, 2.0);
    let instance = Instance::stationary(params, ValueDistribution::point_mass(1.5), competitor.clone())?;
    let mut stream = ArrivalStream::new(3, 0);
    let mut cdf = EmpiricalCdf::new(1.0, 2.0);
    for t in 0..horizon {
        cdf.insert(stream.arrival(&instance, t).competitor_bid)?;
        let n = t + 1;
        if n.is_power_of_two() || n == horizon {
            let sup = cdf.sup_distance(|x| competitor.cdf(x));
            println!(
                "n={n:>4} sup|F_n - G| = {sup:.4}  DKW(95%) = {:.4}  envelope = {:.4}",
                dkw_bound(n, 0.05)?,
                err_envelope(n, horizon)
            );
        }
    }
    Ok(())
}
