use serde::Serialize;

use crate::benchmarks::{exhaustive_oracle, ideal_allocation, solve_mu_star, OracleConstraint};
use crate::error::{Error, Result};
use crate::model::{prop1_pair, prop2_pair, BudgetPlan, LowerBoundPair, SCENARIO_RESERVE};
use crate::nonstationarity::{v_total, w_total};
use crate::policy::DualConfig;

use super::episode::monte_carlo;

/// Horizon of the reduced instances checked by exhaustive search.
const REDUCED_HORIZON: usize = 4;

/// Bids that suffice against the constant competitor bid 1/2.
const ORACLE_GRID: [f64; 3] = [0.0, SCENARIO_RESERVE, 0.5];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerBoundKind {
    /// Two-block value shift of total size `W`.
    ValueShift = 1,
    /// Alternating plan against `V` high- or low-value closing periods.
    PlanError = 2,
}

impl TryFrom<u8> for LowerBoundKind {
    type Error = Error;

    fn try_from(prop: u8) -> Result<Self> {
        match prop {
            1 => Ok(LowerBoundKind::ValueShift),
            2 => Ok(LowerBoundKind::PlanError),
            other => Err(Error::InvalidInput(format!("unknown lower-bound family {other}"))),
        }
    }
}

impl LowerBoundKind {
    fn pair(self, horizon: usize, knob: f64) -> Result<LowerBoundPair> {
        match self {
            LowerBoundKind::ValueShift => prop1_pair(horizon, knob),
            LowerBoundKind::PlanError => prop2_pair(horizon, knob),
        }
    }
}

/// Closed forms against exhaustive search on the same family at `T = 4`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReducedCheck {
    pub horizon: usize,
    pub knob: f64,
    pub closed_form: [f64; 2],
    pub oracle: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundReport {
    pub kind: LowerBoundKind,
    pub horizon: usize,
    pub knob: f64,
    pub closed_form: [f64; 2],
    /// Exhaustive search at the full horizon.
    pub oracle: [f64; 2],
    pub v_lr: [f64; 2],
    pub reduced: ReducedCheck,
    /// `W_T` of each instance (value shift) or `V_T` of the plan against
    /// each instance's ideal allocation (plan error).
    pub deviation: [f64; 2],
    pub reps: usize,
    pub mean_reward: [f64; 2],
    /// `closed_form - mean_reward` for each instance.
    pub regret: [f64; 2],
}

impl LowerBoundReport {
    /// Largest disagreement between the closed forms and the independent
    /// computations.
    pub fn max_gap(&self) -> f64 {
        let mut gap: f64 = 0.0;
        for i in 0..2 {
            gap = gap
                .max((self.closed_form[i] - self.oracle[i]).abs())
                .max((self.closed_form[i] - self.v_lr[i]).abs())
                .max((self.reduced.closed_form[i] - self.reduced.oracle[i]).abs());
        }
        gap
    }
}

fn oracle_pair(pair: &LowerBoundPair) -> Result<[f64; 2]> {
    Ok([
        exhaustive_oracle(&pair.first, &ORACLE_GRID, OracleConstraint::Global)?,
        exhaustive_oracle(&pair.second, &ORACLE_GRID, OracleConstraint::Global)?,
    ])
}

/// Builds both instances of a lower-bound family, checks their offline
/// optima three ways and measures the bidder's realized regret on each.
pub fn lower_bound_check(
    kind: LowerBoundKind,
    horizon: usize,
    knob: f64,
    reps: usize,
    seed: u64,
) -> Result<LowerBoundReport> {
    let pair = kind.pair(horizon, knob)?;
    let closed_form = [pair.optimum_first, pair.optimum_second];
    let oracle = oracle_pair(&pair)?;
    let v_lr = [
        solve_mu_star(&pair.first).v_lr,
        solve_mu_star(&pair.second).v_lr,
    ];

    let small_knob = knob * REDUCED_HORIZON as f64 / horizon as f64;
    let small = kind.pair(REDUCED_HORIZON, small_knob)?;
    let reduced = ReducedCheck {
        horizon: REDUCED_HORIZON,
        knob: small_knob,
        closed_form: [small.optimum_first, small.optimum_second],
        oracle: oracle_pair(&small)?,
    };

    let plan = match &pair.plan {
        Some(plan) => plan.clone(),
        None => BudgetPlan::uniform(&pair.first.params),
    };
    let deviation = match kind {
        LowerBoundKind::ValueShift => [w_total(&pair.first).w_total, w_total(&pair.second).w_total],
        LowerBoundKind::PlanError => [
            v_total(&ideal_allocation(&pair.first), &plan)?,
            v_total(&ideal_allocation(&pair.second), &plan)?,
        ],
    };

    let config = DualConfig::default_for(&pair.first.params);
    let first = monte_carlo(&pair.first, &plan, config, reps, seed)?;
    let second = monte_carlo(&pair.second, &plan, config, reps, seed)?;
    Ok(LowerBoundReport {
        kind,
        horizon,
        knob,
        closed_form,
        oracle,
        v_lr,
        reduced,
        deviation,
        reps,
        mean_reward: [first.mean, second.mean],
        regret: [closed_form[0] - first.mean, closed_form[1] - second.mean],
    })
}
