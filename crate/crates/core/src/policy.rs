//! Dual-gradient-descent bidder for repeated first-price auctions with a
//! budget.
//!
//! Each period the bidder shades its value through the dual variable `mu`,
//! picks the best bid against the empirical CDF of past competing bids,
//! submits it only if it fits in the remaining budget, then takes a
//! projected subgradient step `mu <- max(0, mu - eta * (rho_hat_t - z_t))`.

use serde::{Deserialize, Serialize};

use crate::ecdf::EmpiricalCdf;
use crate::error::{Error, Result};
use crate::model::{ArrivalSample, AuctionParams, BudgetPlan};
use crate::optimizer::{best_bid_step, BidChoice, BidRange};

/// Step size and initial dual variable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualConfig {
    pub eta: f64,
    pub mu1: f64,
}

impl DualConfig {
    /// `eta = 1/sqrt(T)`, `mu1 = 0`.
    pub fn default_for(params: &AuctionParams) -> Self {
        DualConfig {
            eta: params.default_step(),
            mu1: 0.0,
        }
    }

    /// `0 < eta <= 1` and `0 <= mu1 <= b/a + b`; outside these the dual
    /// variable is no longer guaranteed to stay below `b/a + b`.
    pub fn validate(&self, params: &AuctionParams) -> Result<()> {
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(Error::InvalidPolicy(format!(
                "step size must lie in (0, 1], got {}",
                self.eta
            )));
        }
        let bound = params.dual_bound();
        if !(self.mu1 >= 0.0 && self.mu1 <= bound) {
            return Err(Error::InvalidPolicy(format!(
                "initial dual must lie in [0, {bound}], got {}",
                self.mu1
            )));
        }
        Ok(())
    }
}

/// One period of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    /// One-based period index.
    pub t: usize,
    pub value: f64,
    pub competitor_bid: f64,
    pub bid: f64,
    pub won: bool,
    pub payment: f64,
    /// Realized surplus, net of the overspending penalty in the alternate
    /// system.
    pub reward: f64,
    pub penalized: bool,
    pub gradient: f64,
    pub mu_after: f64,
    pub budget_after: f64,
}

/// State of the bidder between periods.
#[derive(Debug, Clone)]
pub struct DualBidder {
    params: AuctionParams,
    plan: BudgetPlan,
    eta: f64,
    mu: f64,
    budget_left: f64,
    cdf: EmpiricalCdf,
    /// Zero-based index of the next period.
    t: usize,
}

impl DualBidder {
    pub fn new(params: AuctionParams, plan: BudgetPlan, config: DualConfig) -> Result<Self> {
        params.validate()?;
        config.validate(&params)?;
        if plan.len() != params.horizon {
            return Err(Error::InvalidPlan(format!(
                "plan length {} does not match horizon {}",
                plan.len(),
                params.horizon
            )));
        }
        Ok(DualBidder {
            params,
            plan,
            eta: config.eta,
            mu: config.mu1,
            budget_left: params.budget,
            cdf: EmpiricalCdf::new(params.reserve, params.max_value),
            t: 0,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn budget_left(&self) -> f64 {
        self.budget_left
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// One-based index of the upcoming period.
    pub fn period(&self) -> usize {
        self.t + 1
    }

    pub fn cdf(&self) -> &EmpiricalCdf {
        &self.cdf
    }

    pub fn params(&self) -> &AuctionParams {
        &self.params
    }

    /// Unconstrained target bid for value `v` under the current estimates.
    pub fn target(&self, value: f64) -> BidChoice {
        best_bid_step(value, self.mu, &self.cdf, BidRange::from(&self.params))
    }

    /// The target bid if it fits in the remaining budget, otherwise 0.
    pub fn bid(&self, value: f64) -> f64 {
        let target = self.target(value).bid;
        if target <= self.budget_left {
            target
        } else {
            0.0
        }
    }

    /// Settles the current period: charges the payment, steps the dual
    /// variable and records the competing bid.
    pub fn observe(&mut self, arrival: ArrivalSample, bid: f64) -> Result<StepRecord> {
        if bid > self.budget_left {
            return Err(Error::InvalidInput(format!(
                "bid {bid} exceeds the remaining budget {}",
                self.budget_left
            )));
        }
        self.settle(arrival, bid, 0.0)
    }

    /// Shared bookkeeping of the original and the alternate system. A win
    /// whose payment exceeds the pre-payment budget costs `penalty`.
    fn settle(&mut self, arrival: ArrivalSample, bid: f64, penalty: f64) -> Result<StepRecord> {
        let Some(&rho_hat) = self.plan.rho_hat.get(self.t) else {
            return Err(Error::InvalidInput("run is past its horizon".into()));
        };
        let won = bid > 0.0 && bid >= arrival.competitor_bid;
        let payment = if won { bid } else { 0.0 };
        let penalized = won && payment > self.budget_left;
        let mut reward = if won { arrival.value - bid } else { 0.0 };
        if penalized {
            reward -= penalty;
        }
        let gradient = rho_hat - payment;
        self.mu = (self.mu - self.eta * gradient).max(0.0);
        self.budget_left -= payment;
        self.cdf.insert(arrival.competitor_bid)?;
        self.t += 1;
        Ok(StepRecord {
            t: self.t,
            value: arrival.value,
            competitor_bid: arrival.competitor_bid,
            bid,
            won,
            payment,
            reward,
            penalized,
            gradient,
            mu_after: self.mu,
            budget_after: self.budget_left,
        })
    }
}

/// Runs the budget-gated bidder over a fixed arrival path.
pub fn run_path(
    params: AuctionParams,
    plan: BudgetPlan,
    config: DualConfig,
    arrivals: &[ArrivalSample],
) -> Result<Vec<StepRecord>> {
    let mut bidder = DualBidder::new(params, plan, config)?;
    arrivals
        .iter()
        .map(|&arrival| {
            let bid = bidder.bid(arrival.value);
            bidder.observe(arrival, bid)
        })
        .collect()
}

/// Outcome of the unbudgeted run with overspending penalties.
#[derive(Debug, Clone)]
pub struct AlternateRun {
    pub records: Vec<StepRecord>,
    pub penalized_total: f64,
    pub total_spend: f64,
}

/// Runs the alternate system: the target bid is always submitted, the
/// remaining budget may go negative, and every win whose payment exceeds
/// the remaining budget before payment costs an extra `b`. Its total is a
/// lower bound on the budget-gated run over the same arrivals.
pub fn run_alternate(
    params: AuctionParams,
    plan: BudgetPlan,
    config: DualConfig,
    arrivals: &[ArrivalSample],
) -> Result<AlternateRun> {
    let mut bidder = DualBidder::new(params, plan, config)?;
    let penalty = params.max_value;
    let records = arrivals
        .iter()
        .map(|&arrival| {
            let bid = bidder.target(arrival.value).bid;
            bidder.settle(arrival, bid, penalty)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AlternateRun {
        penalized_total: records.iter().map(|r| r.reward).sum(),
        total_spend: records.iter().map(|r| r.payment).sum(),
        records,
    })
}
