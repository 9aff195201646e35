//! Constructive instance families: the two-scenario lower-bound pairs and
//! the instances behind the three numerical experiments.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Atom, AuctionParams, BudgetPlan, CompetitorModel, Instance, ValueDistribution};
use crate::benchmarks;
use crate::error::{Error, Result};

/// Reserve used by the lower-bound families, which are stated on `[0, 1]`.
/// Bids below the constant competitor bid of 1/2 never win, so every
/// closed-form value is unaffected.
pub const SCENARIO_RESERVE: f64 = 1e-9;

const INSTANCE_STREAM: u64 = u64::MAX;

/// Two instances that share their first periods, together with their offline
/// optima. A policy cannot tell them apart until the shared prefix ends.
#[derive(Debug, Clone)]
pub struct LowerBoundPair {
    pub first: Instance,
    pub second: Instance,
    /// Alternating plan handed to the bidder (value-prediction family only).
    pub plan: Option<BudgetPlan>,
    pub optimum_first: f64,
    pub optimum_second: f64,
}

fn scenario_params(horizon: usize) -> Result<AuctionParams> {
    if horizon == 0 || horizon % 4 != 0 {
        return Err(Error::InvalidInput(format!(
            "horizon must be a positive multiple of 4, got {horizon}"
        )));
    }
    AuctionParams::new(SCENARIO_RESERVE, 1.0, horizon, horizon as f64 / 4.0)
}

/// Value-shift family: value 3/4 in the first half, `3/4 + W/T` (first
/// instance) or `3/4 - W/T` (second) in the second half, competitor bid
/// fixed at 1/2, budget `T/4`. Offline optima are `T/8 + W/2` and `T/8`.
pub fn prop1_pair(horizon: usize, shift_total: f64) -> Result<LowerBoundPair> {
    let params = scenario_params(horizon)?;
    let t = horizon as f64;
    if !(shift_total >= 0.0 && shift_total / t <= 0.25) {
        return Err(Error::InvalidInput(format!(
            "shift W must satisfy 0 <= W/T <= 1/4, got W={shift_total}, T={horizon}"
        )));
    }
    let delta = shift_total / t;
    let build = |sign: f64| {
        let values = (0..horizon)
            .map(|k| {
                if k < horizon / 2 {
                    ValueDistribution::point_mass(0.75)
                } else {
                    ValueDistribution::point_mass(0.75 + sign * delta)
                }
            })
            .collect();
        Instance::new(params, values, CompetitorModel::constant(0.5))
    };
    Ok(LowerBoundPair {
        first: build(1.0)?,
        second: build(-1.0)?,
        plan: None,
        optimum_first: t / 8.0 + shift_total / 2.0,
        optimum_second: t / 8.0,
    })
}

/// Plan-error family: value 3/4 except in the last `V` periods, which carry
/// 7/8 (first instance) or 5/8 (second); the bidder receives the plan
/// `1/2, 0, 1/2, 0, ...`. Offline optima are `T/8 + V/8` and `T/8`.
///
/// A fractional `V` puts its fractional part `f` on the period just before
/// the last `floor(V)`, with value `3/4 +- f/8`, which keeps both closed
/// forms exact.
pub fn prop2_pair(horizon: usize, tail: f64) -> Result<LowerBoundPair> {
    let params = scenario_params(horizon)?;
    let t = horizon as f64;
    if !(tail >= 0.0 && tail <= t / 2.0) {
        return Err(Error::InvalidInput(format!(
            "V must satisfy 0 <= V <= T/2, got V={tail}, T={horizon}"
        )));
    }
    let whole = tail.floor() as usize;
    let frac = tail - tail.floor();
    let build = |high: f64, sign: f64| {
        let values = (0..horizon)
            .map(|k| {
                if k >= horizon - whole {
                    ValueDistribution::point_mass(high)
                } else if frac > 0.0 && k == horizon - whole - 1 {
                    ValueDistribution::point_mass(0.75 + sign * frac / 8.0)
                } else {
                    ValueDistribution::point_mass(0.75)
                }
            })
            .collect();
        Instance::new(params, values, CompetitorModel::constant(0.5))
    };
    let rho_hat = (0..horizon)
        .map(|k| if k % 2 == 0 { 0.5 } else { 0.0 })
        .collect();
    Ok(LowerBoundPair {
        first: build(0.875, 1.0)?,
        second: build(0.625, -1.0)?,
        plan: Some(BudgetPlan::new(rho_hat, params.budget)?),
        optimum_first: t / 8.0 + tail / 8.0,
        optimum_second: t / 8.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// Relative error against the horizon.
    Horizon = 1,
    /// Relative error against a two-block mean shift `W`.
    Shift = 2,
    /// Relative error against a biased plan `rho_t - eps`.
    Prediction = 3,
}

impl TryFrom<u8> for ExperimentKind {
    type Error = Error;

    fn try_from(kind: u8) -> Result<Self> {
        match kind {
            1 => Ok(ExperimentKind::Horizon),
            2 => Ok(ExperimentKind::Shift),
            3 => Ok(ExperimentKind::Prediction),
            other => Err(Error::InvalidInput(format!("unknown experiment kind {other}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentInstance {
    pub instance: Instance,
    /// The perturbed plan for [`ExperimentKind::Prediction`].
    pub plan: Option<BudgetPlan>,
}

fn experiment_params(horizon: usize) -> Result<AuctionParams> {
    AuctionParams::new(1.0, 2.0, horizon, 0.2 * horizon as f64)
}

/// Per-period uniform laws with mean and spread drawn from `[1, 2]`,
/// endpoints `mean -+ sqrt(3) * sd` clipped to `[1, 2]`.
fn randomized_values(horizon: usize, seed: u64) -> Vec<ValueDistribution> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(INSTANCE_STREAM);
    let half_width = 3f64.sqrt();
    (0..horizon)
        .map(|_| {
            let mean: f64 = rng.random_range(1.0..=2.0);
            let sd: f64 = rng.random_range(1.0..=2.0);
            let lo = (mean - half_width * sd).clamp(1.0, 2.0);
            let hi = (mean + half_width * sd).clamp(1.0, 2.0);
            ValueDistribution::uniform(lo, hi)
        })
        .collect()
}

/// Base value law of the shift experiment; leaves room for a shift of 1/4.
const SHIFT_BASE: (f64, f64) = (1.0, 1.75);

/// Builds the instance for one knob value of an experiment.
///
/// * `Horizon` ignores `knob`.
/// * `Shift` reads `knob` as `W`: periods in the second half have their
///   value law shifted up by `W/T` (requires `W/T <= 1/4`).
/// * `Prediction` reads `knob` as `eps` and also returns the plan
///   `max(rho_t - eps, 0)` built from the ideal allocation.
pub fn experiment_instance(
    kind: ExperimentKind,
    horizon: usize,
    knob: f64,
    seed: u64,
) -> Result<ExperimentInstance> {
    let params = experiment_params(horizon)?;
    let competitor = CompetitorModel::uniform(1.0, 2.0);
    match kind {
        ExperimentKind::Horizon => Ok(ExperimentInstance {
            instance: Instance::new(params, randomized_values(horizon, seed), competitor)?,
            plan: None,
        }),
        ExperimentKind::Shift => {
            let delta = knob / horizon as f64;
            if !(knob >= 0.0 && delta <= 2.0 - SHIFT_BASE.1) {
                return Err(Error::InvalidInput(format!(
                    "shift W={knob} out of range for T={horizon}"
                )));
            }
            let base = ValueDistribution::uniform(SHIFT_BASE.0, SHIFT_BASE.1);
            let values = (0..horizon)
                .map(|k| {
                    if k < horizon / 2 {
                        base.clone()
                    } else {
                        base.shifted(delta)
                    }
                })
                .collect();
            Ok(ExperimentInstance {
                instance: Instance::new(params, values, competitor)?,
                plan: None,
            })
        }
        ExperimentKind::Prediction => {
            if !(knob >= 0.0 && knob.is_finite()) {
                return Err(Error::InvalidInput(format!("eps must be nonnegative, got {knob}")));
            }
            let instance = Instance::new(params, randomized_values(horizon, seed), competitor)?;
            let solution = benchmarks::solve_mu_star(&instance);
            let rho_hat = solution.rho.iter().map(|r| (r - knob).max(0.0)).collect();
            Ok(ExperimentInstance {
                instance,
                plan: Some(BudgetPlan::prediction(rho_hat)?),
            })
        }
    }
}

fn random_atoms(rng: &mut ChaCha8Rng, count: usize) -> Vec<Atom> {
    let raw: Vec<(f64, f64)> = (0..count)
        .map(|_| (rng.random_range(1.0..=2.0), rng.random_range(0.1..1.0)))
        .collect();
    let total: f64 = raw.iter().map(|r| r.1).sum();
    let mut atoms: Vec<Atom> = raw.iter().map(|&(v, p)| Atom::new(v, p / total)).collect();
    // exact unit mass
    let rest: f64 = atoms[1..].iter().map(|a| a.prob).sum();
    atoms[0].prob = 1.0 - rest;
    atoms
}

/// Small random instance on `[1, 2]` with `atoms`-point value laws, a
/// three-point competitor law and a budget in `[0, 0.6 T]`.
pub fn random_discrete_instance(seed: u64, horizon: usize, atoms: usize) -> Result<Instance> {
    if atoms == 0 {
        return Err(Error::InvalidInput("need at least one atom".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(INSTANCE_STREAM);
    let budget = rng.random_range(0.0..=0.6) * horizon as f64;
    let params = AuctionParams::new(1.0, 2.0, horizon, budget)?;
    let values = (0..horizon)
        .map(|_| ValueDistribution::discrete(random_atoms(&mut rng, atoms)))
        .collect();
    let competitor = CompetitorModel::discrete(random_atoms(&mut rng, 3));
    Instance::new(params, values, competitor)
}
