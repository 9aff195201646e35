//! Offline benchmarks: the Lagrangian relaxation `V^LR(mu)`, its minimizer
//! and the ideal per-period allocation, the per-period plan benchmark and
//! its relaxed variant, and an exact primal oracle for small instances.
//!
//! For a dual price `mu`, one period contributes
//!
//! ```text
//! L(mu, F) = E_v[(v - (1 + mu) x*(v, mu)) G(x*(v, mu))]
//! c(mu, F) = E_v[x*(v, mu) G(x*(v, mu))]
//! ```
//!
//! and `V^LR(mu) = mu B + sum_t L(mu, F_t)`, which is convex in `mu` with
//! subgradient `B - sum_t c(mu, F_t)`. Uniform value laws are integrated
//! with composite Gauss–Legendre split where `x*(v, mu)` changes regime, so
//! the piecewise-polynomial integrands are integrated exactly.

pub mod oracle;
mod quadrature;
mod search;

pub use oracle::{exhaustive_oracle, OracleConstraint};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{BudgetPlan, CompetitorModel, Instance, ValueDistribution};
use crate::optimizer::{atomic_candidates, best_bid_analytic, BidRange};

/// Golden-section width on the dual price.
const GOLDEN_TOL: f64 = 1e-8;
/// Final bracket width of the bisections on expected consumption.
const BISECT_TOL: f64 = 1e-13;

/// Lagrangian-adjusted reward and expected spend of one period at a price.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodDual {
    /// `L(mu, F)`.
    pub lagrangian: f64,
    /// `c(mu, F)`.
    pub consumption: f64,
}

impl PeriodDual {
    /// Unshaded expected surplus `L + mu * c` of the same bids.
    pub fn reward(&self, mu: f64) -> f64 {
        self.lagrangian + mu * self.consumption
    }
}

/// Values of `v` where `x*(v, mu)` switches regime.
fn regime_breaks(competitor: &CompetitorModel, range: BidRange, mu: f64) -> Vec<f64> {
    let shade = 1.0 + mu;
    match competitor {
        CompetitorModel::Uniform { lo, hi } => {
            let left = range.lo.max(*lo);
            let right = range.hi.min(*hi);
            vec![
                shade * left,
                shade * (2.0 * left - lo),
                shade * (2.0 * right - lo),
            ]
        }
        _ => {
            // upper envelope of the lines v -> G_k (v - shade x_k), plus the
            // abstention line 0
            let mut lines = atomic_candidates(competitor, range);
            lines.push((0.0, 0.0));
            let mut breaks = Vec::new();
            for (i, &(xi, gi)) in lines.iter().enumerate() {
                for &(xj, gj) in &lines[i + 1..] {
                    if gi != gj {
                        breaks.push(shade * (gi * xi - gj * xj) / (gi - gj));
                    }
                }
            }
            breaks
        }
    }
}

/// `L(mu, F)` and `c(mu, F)` for one period.
pub fn single_period_dual(
    value: &ValueDistribution,
    competitor: &CompetitorModel,
    range: BidRange,
    mu: f64,
) -> PeriodDual {
    let point = |v: f64| {
        let choice = best_bid_analytic(v, mu, competitor, range);
        let spend = if choice.is_abstain() {
            0.0
        } else {
            choice.bid * competitor.cdf(choice.bid)
        };
        (choice.objective, spend)
    };
    match value {
        ValueDistribution::Uniform { lo, hi } if hi > lo => {
            let breaks = regime_breaks(competitor, range, mu);
            let (l, c) = quadrature::integrate_pair(point, *lo, *hi, &breaks);
            let width = hi - lo;
            PeriodDual {
                lagrangian: l / width,
                consumption: c / width,
            }
        }
        _ => {
            let atoms = value.atoms().unwrap_or_default();
            let (l, c) = atoms.iter().fold((0.0, 0.0), |acc, atom| {
                let (l, c) = point(atom.value);
                (acc.0 + atom.prob * l, acc.1 + atom.prob * c)
            });
            PeriodDual {
                lagrangian: l,
                consumption: c,
            }
        }
    }
}

/// Periods grouped by identical value law so each law is integrated once.
struct PeriodGroups<'a> {
    competitor: &'a CompetitorModel,
    range: BidRange,
    laws: Vec<&'a ValueDistribution>,
    group_of: Vec<usize>,
}

impl<'a> PeriodGroups<'a> {
    fn new(instance: &'a Instance) -> Self {
        let mut laws: Vec<&ValueDistribution> = Vec::new();
        let group_of = instance
            .values
            .iter()
            .map(|law| match laws.iter().position(|&known| known == law) {
                Some(g) => g,
                None => {
                    laws.push(law);
                    laws.len() - 1
                }
            })
            .collect();
        PeriodGroups {
            competitor: &instance.competitor,
            range: BidRange::from(&instance.params),
            laws,
            group_of,
        }
    }

    fn duals(&self, mu: f64) -> Vec<PeriodDual> {
        let per_law: Vec<PeriodDual> = if self.laws.len() > 8 {
            self.laws
                .par_iter()
                .map(|law| single_period_dual(law, self.competitor, self.range, mu))
                .collect()
        } else {
            self.laws
                .iter()
                .map(|law| single_period_dual(law, self.competitor, self.range, mu))
                .collect()
        };
        self.group_of.iter().map(|&g| per_law[g]).collect()
    }

    fn totals(&self, mu: f64) -> (f64, f64) {
        self.duals(mu)
            .iter()
            .fold((0.0, 0.0), |acc, d| (acc.0 + d.lagrangian, acc.1 + d.consumption))
    }
}

/// Per-period `L(mu, F_t)` and `c(mu, F_t)`.
pub fn period_duals(instance: &Instance, mu: f64) -> Vec<PeriodDual> {
    PeriodGroups::new(instance).duals(mu)
}

/// `V^LR(mu) = mu B + sum_t L(mu, F_t)`.
pub fn lagrangian_value(instance: &Instance, mu: f64) -> f64 {
    let (l, _) = PeriodGroups::new(instance).totals(mu);
    mu * instance.params.budget + l
}

/// Minimizer of the Lagrangian relaxation with its ideal allocation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LagrangianSolution {
    pub mu_star: f64,
    /// `V^LR(mu*)`, an upper bound on the expected offline optimum.
    pub v_lr: f64,
    /// Ideal allocation `rho_t`: expected spend of period `t` at `mu*`.
    pub rho: Vec<f64>,
    /// `B - sum_t rho_t`.
    pub slack: f64,
}

impl LagrangianSolution {
    /// `D_t(mu) = mu rho_t + L(mu, F_t)` for every period.
    pub fn period_objectives(&self, instance: &Instance, mu: f64) -> Vec<f64> {
        period_duals(instance, mu)
            .iter()
            .zip(&self.rho)
            .map(|(d, rho)| mu * rho + d.lagrangian)
            .collect()
    }
}

/// Solves `min_{mu >= 0} V^LR(mu)`.
///
/// Golden-section search on `[0, b/a + b]` locates the minimizer; the bracket
/// is then tightened by bisection on the total expected spend. When the
/// spend jumps across `B` at the optimum (atomic laws), the ideal allocation
/// mixes the spend on both sides so that it sums to `B`.
pub fn solve_mu_star(instance: &Instance) -> LagrangianSolution {
    let groups = PeriodGroups::new(instance);
    let budget = instance.params.budget;
    let bound = instance.params.dual_bound();
    let consumption = |mu: f64| groups.totals(mu).1;

    let at_zero = groups.duals(0.0);
    let spend_zero: f64 = at_zero.iter().map(|d| d.consumption).sum();
    if spend_zero <= budget {
        let v_lr = at_zero.iter().map(|d| d.lagrangian).sum();
        let rho: Vec<f64> = at_zero.iter().map(|d| d.consumption).collect();
        return LagrangianSolution {
            mu_star: 0.0,
            v_lr,
            slack: budget - spend_zero,
            rho,
        };
    }

    let objective = |mu: f64| {
        let (l, _) = groups.totals(mu);
        mu * budget + l
    };
    let (a, b) = search::golden_section(objective, 0.0, bound, GOLDEN_TOL);
    let pad = 1e-6 * (1.0 + b);
    let mut lo = (a - pad).max(0.0);
    let mut hi = (b + pad).min(bound);
    if !(consumption(lo) > budget) {
        lo = 0.0;
    }
    if consumption(hi) > budget {
        hi = bound;
    }
    let (lo, hi) = search::bisect_crossing(consumption, budget, lo, hi, BISECT_TOL);

    let left = groups.duals(lo);
    let right = groups.duals(hi);
    let spend_left: f64 = left.iter().map(|d| d.consumption).sum();
    let spend_right: f64 = right.iter().map(|d| d.consumption).sum();
    let theta = mix_weight(budget, spend_left, spend_right);
    let rho: Vec<f64> = left
        .iter()
        .zip(&right)
        .map(|(l, r)| theta * l.consumption + (1.0 - theta) * r.consumption)
        .collect();
    let mu_star = hi;
    let v_lr = mu_star * budget + right.iter().map(|d| d.lagrangian).sum::<f64>();
    let slack = budget - rho.iter().sum::<f64>();
    LagrangianSolution {
        mu_star,
        v_lr,
        rho,
        slack,
    }
}

/// Weight on the left (high-spend) side so the mixture spends `target`.
fn mix_weight(target: f64, spend_left: f64, spend_right: f64) -> f64 {
    let gap = spend_left - spend_right;
    if gap > 0.0 {
        ((target - spend_right) / gap).clamp(0.0, 1.0)
    } else {
        0.0
    }
}

/// Ideal allocation `rho_t = c(mu*, F_t)`.
pub fn ideal_allocation(instance: &Instance) -> Vec<f64> {
    solve_mu_star(instance).rho
}

/// Best expected surplus of one period under an expected-spend cap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CappedPeriod {
    pub reward: f64,
    pub consumption: f64,
    /// Price on the cap; zero when the cap does not bind.
    pub multiplier: f64,
}

/// Maximizes `E_v[(v - x) G(x)]` subject to `E_v[x G(x)] <= cap` over
/// randomized bid maps, via bisection on the period's own price.
pub fn capped_period(
    value: &ValueDistribution,
    competitor: &CompetitorModel,
    range: BidRange,
    cap: f64,
    price_bound: f64,
) -> CappedPeriod {
    let dual = |mu: f64| single_period_dual(value, competitor, range, mu);
    let free = dual(0.0);
    if free.consumption <= cap {
        return CappedPeriod {
            reward: free.lagrangian,
            consumption: free.consumption,
            multiplier: 0.0,
        };
    }
    let (lo, hi) =
        search::bisect_crossing(|mu| dual(mu).consumption, cap, 0.0, price_bound, BISECT_TOL);
    let (left, right) = (dual(lo), dual(hi));
    let theta = mix_weight(cap, left.consumption, right.consumption);
    CappedPeriod {
        reward: theta * left.reward(lo) + (1.0 - theta) * right.reward(hi),
        consumption: theta * left.consumption + (1.0 - theta) * right.consumption,
        multiplier: hi,
    }
}

fn check_plan_len(instance: &Instance, plan: &BudgetPlan) -> Result<()> {
    if plan.len() != instance.horizon() {
        return Err(Error::InvalidPlan(format!(
            "plan length {} does not match horizon {}",
            plan.len(),
            instance.horizon()
        )));
    }
    Ok(())
}

/// Optimum under per-period expected-spend caps `rho_hat_t`.
pub fn plan_benchmark(instance: &Instance, plan: &BudgetPlan) -> Result<f64> {
    check_plan_len(instance, plan)?;
    let range = BidRange::from(&instance.params);
    let bound = instance.params.dual_bound();
    Ok(instance
        .values
        .par_iter()
        .zip(plan.rho_hat.par_iter())
        .map(|(law, &cap)| capped_period(law, &instance.competitor, range, cap, bound).reward)
        .sum())
}

/// Relaxed plan benchmark and the global price that attains it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RelaxedBenchmark {
    pub value: f64,
    /// Price on the total-budget constraint.
    pub lambda: f64,
    pub consumption: f64,
}

/// Optimum under caps `rho_hat_t + eps_t` in every period together with the
/// total expected-spend constraint `<= budget`.
///
/// For a global price `lambda` each period either follows the unconstrained
/// price-`lambda` bids or, if its cap binds at that price, its capped
/// solution; `lambda` is then found by bisection on the total spend.
pub fn relaxed_plan_benchmark(
    instance: &Instance,
    plan: &BudgetPlan,
    eps: &[f64],
    budget: f64,
) -> Result<RelaxedBenchmark> {
    check_plan_len(instance, plan)?;
    if eps.len() != plan.len() {
        return Err(Error::InvalidPlan(format!(
            "slack length {} does not match horizon {}",
            eps.len(),
            plan.len()
        )));
    }
    if let Some(bad) = eps.iter().find(|e| !(**e >= 0.0)) {
        return Err(Error::InvalidPlan(format!("slack {bad} is negative")));
    }
    let range = BidRange::from(&instance.params);
    let bound = instance.params.dual_bound();
    let groups = PeriodGroups::new(instance);
    let capped: Vec<CappedPeriod> = instance
        .values
        .par_iter()
        .zip(plan.rho_hat.par_iter().zip(eps.par_iter()))
        .map(|(law, (&rho, &e))| capped_period(law, &instance.competitor, range, rho + e, bound))
        .collect();

    // (reward, spend) of the whole horizon at global price lambda
    let response = |lambda: f64| -> (f64, f64) {
        let duals = groups.duals(lambda);
        duals
            .iter()
            .zip(&capped)
            .fold((0.0, 0.0), |acc, (d, cap)| {
                if cap.multiplier > 0.0 && lambda <= cap.multiplier {
                    (acc.0 + cap.reward, acc.1 + cap.consumption)
                } else {
                    (acc.0 + d.reward(lambda), acc.1 + d.consumption)
                }
            })
    };

    let (reward0, spend0) = response(0.0);
    if spend0 <= budget {
        return Ok(RelaxedBenchmark {
            value: reward0,
            lambda: 0.0,
            consumption: spend0,
        });
    }
    let (lo, hi) =
        search::bisect_crossing(|l| response(l).1, budget, 0.0, bound, BISECT_TOL);
    let (reward_lo, spend_lo) = response(lo);
    let (reward_hi, spend_hi) = response(hi);
    let theta = mix_weight(budget, spend_lo, spend_hi);
    Ok(RelaxedBenchmark {
        value: theta * reward_lo + (1.0 - theta) * reward_hi,
        lambda: hi,
        consumption: theta * spend_lo + (1.0 - theta) * spend_hi,
    })
}
