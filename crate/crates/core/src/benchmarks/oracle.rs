//! Exact expected-spend optimum over a finite bid grid for small instances.
//!
//! Each (period, value atom) pair is an item that picks a distribution over
//! grid bids; every bid `x` costs `p x G(x)` in expectation and earns
//! `p (v - x) G(x)`. With linear spend constraints this is a multiple-choice
//! knapsack LP. Its optimum is reached by walking the upper concave hull of
//! each item's (cost, reward) points and filling budget greedily by
//! decreasing marginal reward per unit of spend. At most one item ends up
//! randomized between two neighbouring hull bids per binding constraint.

use crate::error::{Error, Result};
use crate::model::{BudgetPlan, Instance, ValueDistribution};

pub const MAX_GRID: usize = 8;
pub const MAX_ATOMS: usize = 3;
pub const MAX_HORIZON: usize = 256;

/// Which expected-spend constraints the oracle enforces.
#[derive(Debug, Clone, Copy)]
pub enum OracleConstraint<'a> {
    /// `sum_t E[x_t G(x_t)] <= B`.
    Global,
    /// `E[x_t G(x_t)] <= rho_hat_t` for every period.
    PerPeriod(&'a BudgetPlan),
    /// `E[x_t G(x_t)] <= rho_hat_t + eps_t` for every period and the
    /// global constraint.
    Both {
        plan: &'a BudgetPlan,
        eps: &'a [f64],
    },
}

/// A linear piece of an item's efficient frontier.
#[derive(Debug, Clone, Copy)]
struct Segment {
    cost: f64,
    gain: f64,
}

impl Segment {
    fn slope(&self) -> f64 {
        self.gain / self.cost
    }
}

/// Upper concave hull of `points` starting at the origin, keeping only the
/// increasing part, as consecutive segments.
fn frontier(mut points: Vec<(f64, f64)>) -> Vec<Segment> {
    points.push((0.0, 0.0));
    points.sort_by(|p, q| p.0.total_cmp(&q.0).then(q.1.total_cmp(&p.1)));
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for p in points {
        if p.0 < 0.0 {
            continue;
        }
        if let Some(last) = hull.last() {
            if p.0 == last.0 || p.1 <= last.1 {
                continue;
            }
        }
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (a.0 - o.0) * (p.1 - o.1) - (a.1 - o.1) * (p.0 - o.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull.windows(2)
        .map(|w| Segment {
            cost: w[1].0 - w[0].0,
            gain: w[1].1 - w[0].1,
        })
        .collect()
}

/// Spends up to `budget` on `segments` in decreasing slope order; returns
/// the reward collected and the truncated segments actually bought.
fn greedy_fill(mut segments: Vec<Segment>, budget: f64) -> (f64, Vec<Segment>) {
    segments.sort_by(|s, t| t.slope().total_cmp(&s.slope()));
    let mut left = budget.max(0.0);
    let mut value = 0.0;
    let mut bought = Vec::new();
    for seg in segments {
        if left <= 0.0 {
            break;
        }
        let take = seg.cost.min(left);
        let gain = seg.gain * (take / seg.cost);
        value += gain;
        left -= take;
        bought.push(Segment { cost: take, gain });
    }
    (value, bought)
}

fn validate(instance: &Instance, grid: &[f64]) -> Result<()> {
    let params = &instance.params;
    if grid.is_empty() || grid.len() > MAX_GRID {
        return Err(Error::InvalidInput(format!(
            "bid grid must have 1..={MAX_GRID} points, got {}",
            grid.len()
        )));
    }
    if let Some(x) = grid.iter().find(|&&x| x != 0.0 && !params.contains(x)) {
        return Err(Error::InvalidInput(format!(
            "grid bid {x} is neither 0 nor in [{}, {}]",
            params.reserve, params.max_value
        )));
    }
    if instance.horizon() > MAX_HORIZON {
        return Err(Error::InvalidInput(format!(
            "horizon {} exceeds oracle limit {MAX_HORIZON}",
            instance.horizon()
        )));
    }
    for law in &instance.values {
        match law {
            ValueDistribution::Uniform { .. } => {
                return Err(Error::InvalidInput(
                    "oracle needs atomic value distributions".into(),
                ))
            }
            other => {
                let n = other.atoms().map_or(0, |a| a.len());
                if n > MAX_ATOMS {
                    return Err(Error::InvalidInput(format!(
                        "value distribution has {n} atoms, oracle limit is {MAX_ATOMS}"
                    )));
                }
            }
        }
    }
    Ok(())
}

fn check_lengths(instance: &Instance, plan: &BudgetPlan, eps: Option<&[f64]>) -> Result<()> {
    let t = instance.horizon();
    if plan.len() != t || eps.is_some_and(|e| e.len() != t) {
        return Err(Error::InvalidPlan(format!(
            "plan or slack length does not match horizon {t}"
        )));
    }
    Ok(())
}

/// Frontier segments of every item in period `t`.
fn period_segments(instance: &Instance, t: usize, grid: &[f64]) -> Vec<Segment> {
    let g = &instance.competitor;
    let atoms = instance.values[t].atoms().unwrap_or_default();
    atoms
        .iter()
        .flat_map(|atom| {
            let points = grid
                .iter()
                .filter(|&&x| x > 0.0)
                .map(|&x| {
                    let win = g.cdf(x);
                    (atom.prob * x * win, atom.prob * (atom.value - x) * win)
                })
                .collect();
            frontier(points)
        })
        .collect()
}

/// Exact optimum of the expected-spend LP restricted to bids in `grid`
/// (abstention is always available).
pub fn exhaustive_oracle(
    instance: &Instance,
    grid: &[f64],
    constraint: OracleConstraint<'_>,
) -> Result<f64> {
    validate(instance, grid)?;
    let horizon = instance.horizon();
    let budget = instance.params.budget;
    let per_period = |t: usize| period_segments(instance, t, grid);
    match constraint {
        OracleConstraint::Global => {
            let all = (0..horizon).flat_map(per_period).collect();
            Ok(greedy_fill(all, budget).0)
        }
        OracleConstraint::PerPeriod(plan) => {
            check_lengths(instance, plan, None)?;
            Ok((0..horizon)
                .map(|t| greedy_fill(per_period(t), plan.rho_hat[t]).0)
                .sum())
        }
        OracleConstraint::Both { plan, eps } => {
            check_lengths(instance, plan, Some(eps))?;
            let capped = (0..horizon)
                .flat_map(|t| greedy_fill(per_period(t), plan.rho_hat[t] + eps[t]).1)
                .collect();
            Ok(greedy_fill(capped, budget).0)
        }
    }
}
