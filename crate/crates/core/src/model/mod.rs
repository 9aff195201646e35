//! Auction instances, value and competitor-bid distributions, budget plans
//! and seeded arrival sampling.
//!
//! All types validate on construction and are immutable afterwards, so an
//! [`Instance`] can be shared freely across worker threads.

mod scenarios;

pub use scenarios::{
    experiment_instance, prop1_pair, prop2_pair, random_discrete_instance, ExperimentInstance,
    ExperimentKind, LowerBoundPair, SCENARIO_RESERVE,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const PROB_TOL: f64 = 1e-12;
const PLAN_TOL: f64 = 1e-9;

/// Horizon, budget and the common range `[reserve, max_value]` of values,
/// bids and competitor bids.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuctionParams {
    /// Lower end of the range (the platform's reserve price), strictly positive.
    pub reserve: f64,
    /// Upper end of the range.
    pub max_value: f64,
    pub horizon: usize,
    pub budget: f64,
}

impl AuctionParams {
    pub fn new(reserve: f64, max_value: f64, horizon: usize, budget: f64) -> Result<Self> {
        let params = AuctionParams {
            reserve,
            max_value,
            horizon,
            budget,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.reserve.is_finite() && self.reserve > 0.0) {
            return Err(Error::InvalidParams(format!(
                "reserve must be positive and finite, got {}",
                self.reserve
            )));
        }
        if !(self.max_value.is_finite() && self.max_value > self.reserve) {
            return Err(Error::InvalidParams(format!(
                "max_value must be finite and exceed reserve {}, got {}",
                self.reserve, self.max_value
            )));
        }
        if self.horizon == 0 {
            return Err(Error::InvalidParams("horizon must be at least 1".into()));
        }
        if !(self.budget.is_finite() && self.budget >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "budget must be nonnegative and finite, got {}",
                self.budget
            )));
        }
        Ok(())
    }

    /// Upper bound `b/a + b` on the dual variable; beyond `b/a` every bid
    /// has negative shaded surplus.
    pub fn dual_bound(&self) -> f64 {
        self.max_value / self.reserve + self.max_value
    }

    /// Default step size `1/sqrt(T)`.
    pub fn default_step(&self) -> f64 {
        1.0 / (self.horizon as f64).sqrt()
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.reserve && x <= self.max_value
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub value: f64,
    pub prob: f64,
}

impl Atom {
    pub fn new(value: f64, prob: f64) -> Self {
        Atom { value, prob }
    }
}

fn validate_atoms(atoms: &[Atom], lo: f64, hi: f64) -> Result<()> {
    if atoms.is_empty() {
        return Err(Error::InvalidDistribution("discrete law has no atoms".into()));
    }
    let mut total = 0.0;
    for atom in atoms {
        if !(atom.prob.is_finite() && atom.prob >= 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "atom probability {} is not a probability",
                atom.prob
            )));
        }
        check_support(atom.value, lo, hi)?;
        total += atom.prob;
    }
    if (total - 1.0).abs() > PROB_TOL {
        return Err(Error::InvalidDistribution(format!(
            "atom probabilities sum to {total}, expected 1"
        )));
    }
    Ok(())
}

fn check_support(x: f64, lo: f64, hi: f64) -> Result<()> {
    if !(x.is_finite() && x >= lo && x <= hi) {
        return Err(Error::InvalidDistribution(format!(
            "support point {x} outside [{lo}, {hi}]"
        )));
    }
    Ok(())
}

/// Sorts atoms by value and merges duplicates.
pub(crate) fn normalized_atoms(atoms: &[Atom]) -> Vec<Atom> {
    let mut sorted: Vec<Atom> = atoms.iter().copied().filter(|a| a.prob > 0.0).collect();
    sorted.sort_by(|x, y| x.value.total_cmp(&y.value));
    let mut out: Vec<Atom> = Vec::with_capacity(sorted.len());
    for atom in sorted {
        match out.last_mut() {
            Some(last) if last.value == atom.value => last.prob += atom.prob,
            _ => out.push(atom),
        }
    }
    out
}

fn discrete_quantile(atoms: &[Atom], u: f64) -> f64 {
    let mut cum = 0.0;
    for atom in atoms {
        cum += atom.prob;
        if u < cum {
            return atom.value;
        }
    }
    atoms.last().map(|a| a.value).unwrap_or(f64::NAN)
}

/// Law of the private value in one period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValueDistribution {
    PointMass { value: f64 },
    Uniform { lo: f64, hi: f64 },
    Discrete { atoms: Vec<Atom> },
}

impl ValueDistribution {
    pub fn point_mass(value: f64) -> Self {
        ValueDistribution::PointMass { value }
    }

    pub fn uniform(lo: f64, hi: f64) -> Self {
        ValueDistribution::Uniform { lo, hi }
    }

    pub fn discrete(atoms: Vec<Atom>) -> Self {
        ValueDistribution::Discrete { atoms }
    }

    pub fn validate(&self, params: &AuctionParams) -> Result<()> {
        let (lo, hi) = (params.reserve, params.max_value);
        match self {
            ValueDistribution::PointMass { value } => check_support(*value, lo, hi),
            ValueDistribution::Uniform { lo: l, hi: h } => {
                if !(l <= h) {
                    return Err(Error::InvalidDistribution(format!(
                        "uniform endpoints out of order: [{l}, {h}]"
                    )));
                }
                check_support(*l, lo, hi)?;
                check_support(*h, lo, hi)
            }
            ValueDistribution::Discrete { atoms } => validate_atoms(atoms, lo, hi),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            ValueDistribution::PointMass { value } => *value,
            ValueDistribution::Uniform { lo, hi } => 0.5 * (lo + hi),
            ValueDistribution::Discrete { atoms } => atoms.iter().map(|a| a.value * a.prob).sum(),
        }
    }

    /// Inverse CDF at `u` in `[0, 1)`.
    pub fn quantile(&self, u: f64) -> f64 {
        match self {
            ValueDistribution::PointMass { value } => *value,
            ValueDistribution::Uniform { lo, hi } => lo + u * (hi - lo),
            ValueDistribution::Discrete { atoms } => discrete_quantile(atoms, u),
        }
    }

    /// Finite atom list when the law is atomic; `None` for `Uniform` with
    /// positive width.
    pub fn atoms(&self) -> Option<Vec<Atom>> {
        match self {
            ValueDistribution::PointMass { value } => Some(vec![Atom::new(*value, 1.0)]),
            ValueDistribution::Uniform { lo, hi } if lo == hi => Some(vec![Atom::new(*lo, 1.0)]),
            ValueDistribution::Uniform { .. } => None,
            ValueDistribution::Discrete { atoms } => Some(normalized_atoms(atoms)),
        }
    }

    /// Translates the whole law by `delta`.
    pub fn shifted(&self, delta: f64) -> Self {
        match self {
            ValueDistribution::PointMass { value } => ValueDistribution::point_mass(value + delta),
            ValueDistribution::Uniform { lo, hi } => ValueDistribution::uniform(lo + delta, hi + delta),
            ValueDistribution::Discrete { atoms } => ValueDistribution::discrete(
                atoms
                    .iter()
                    .map(|a| Atom::new(a.value + delta, a.prob))
                    .collect(),
            ),
        }
    }
}

/// Law of the highest competing bid, identical in every period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CompetitorModel {
    Uniform { lo: f64, hi: f64 },
    Discrete { atoms: Vec<Atom> },
    Constant { value: f64 },
}

impl CompetitorModel {
    pub fn uniform(lo: f64, hi: f64) -> Self {
        CompetitorModel::Uniform { lo, hi }
    }

    pub fn discrete(atoms: Vec<Atom>) -> Self {
        CompetitorModel::Discrete {
            atoms: normalized_atoms(&atoms),
        }
    }

    pub fn constant(value: f64) -> Self {
        CompetitorModel::Constant { value }
    }

    pub fn validate(&self, params: &AuctionParams) -> Result<()> {
        let (lo, hi) = (params.reserve, params.max_value);
        match self {
            CompetitorModel::Uniform { lo: l, hi: h } => {
                if !(l < h) {
                    return Err(Error::InvalidDistribution(format!(
                        "uniform competitor needs lo < hi, got [{l}, {h}]"
                    )));
                }
                check_support(*l, lo, hi)?;
                check_support(*h, lo, hi)
            }
            CompetitorModel::Discrete { atoms } => validate_atoms(atoms, lo, hi),
            CompetitorModel::Constant { value } => check_support(*value, lo, hi),
        }
    }

    /// `G(x) = P(m <= x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            CompetitorModel::Uniform { lo, hi } => ((x - lo) / (hi - lo)).clamp(0.0, 1.0),
            CompetitorModel::Discrete { atoms } => atoms
                .iter()
                .filter(|a| a.value <= x)
                .map(|a| a.prob)
                .sum::<f64>()
                .min(1.0),
            CompetitorModel::Constant { value } => {
                if x >= *value {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn quantile(&self, u: f64) -> f64 {
        match self {
            CompetitorModel::Uniform { lo, hi } => lo + u * (hi - lo),
            CompetitorModel::Discrete { atoms } => discrete_quantile(atoms, u),
            CompetitorModel::Constant { value } => *value,
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            CompetitorModel::Uniform { lo, hi } => 0.5 * (lo + hi),
            CompetitorModel::Discrete { atoms } => atoms.iter().map(|a| a.value * a.prob).sum(),
            CompetitorModel::Constant { value } => *value,
        }
    }
}

/// Per-period spend targets `rho_hat_t`, with optional per-period slacks
/// `eps_t` used by the relaxed plan benchmark.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetPlan {
    pub rho_hat: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<Vec<f64>>,
}

impl BudgetPlan {
    /// A plan whose entries sum to `budget` (within `1e-9 * budget`, or
    /// `1e-9` absolute when the budget is zero).
    pub fn new(rho_hat: Vec<f64>, budget: f64) -> Result<Self> {
        let plan = Self::prediction(rho_hat)?;
        plan.check_sum(budget)?;
        Ok(plan)
    }

    /// A predicted plan: entries must be nonnegative but need not add up to
    /// the budget (e.g. a biased forecast of the ideal allocation).
    pub fn prediction(rho_hat: Vec<f64>) -> Result<Self> {
        if let Some(bad) = rho_hat.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
            return Err(Error::InvalidPlan(format!("entry {bad} is not a nonnegative number")));
        }
        Ok(BudgetPlan { rho_hat, eps: None })
    }

    /// `B/T` in every period.
    pub fn uniform(params: &AuctionParams) -> Self {
        let rho = params.budget / params.horizon as f64;
        BudgetPlan {
            rho_hat: vec![rho; params.horizon],
            eps: None,
        }
    }

    pub fn with_slack(mut self, eps: Vec<f64>) -> Result<Self> {
        if eps.len() != self.rho_hat.len() {
            return Err(Error::InvalidPlan(format!(
                "slack length {} does not match plan length {}",
                eps.len(),
                self.rho_hat.len()
            )));
        }
        if let Some(bad) = eps.iter().find(|e| !(e.is_finite() && **e >= 0.0)) {
            return Err(Error::InvalidPlan(format!("slack {bad} is not a nonnegative number")));
        }
        self.eps = Some(eps);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.rho_hat.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho_hat.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.rho_hat.iter().sum()
    }

    pub fn check_sum(&self, budget: f64) -> Result<()> {
        let tol = if budget == 0.0 { PLAN_TOL } else { PLAN_TOL * budget };
        let total = self.total();
        if (total - budget).abs() > tol {
            return Err(Error::InvalidPlan(format!(
                "plan sums to {total}, budget is {budget}"
            )));
        }
        Ok(())
    }
}

/// One period's private value and highest competing bid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrivalSample {
    pub value: f64,
    pub competitor_bid: f64,
}

#[derive(Deserialize)]
struct InstanceDoc {
    params: AuctionParams,
    values: Vec<ValueDistribution>,
    competitor: CompetitorModel,
    #[serde(default)]
    plan: Option<BudgetPlan>,
}

impl TryFrom<InstanceDoc> for Instance {
    type Error = Error;

    fn try_from(doc: InstanceDoc) -> Result<Self> {
        let instance = Instance::new(doc.params, doc.values, doc.competitor)?;
        match doc.plan {
            Some(plan) => instance.with_plan(plan),
            None => Ok(instance),
        }
    }
}

/// A full problem: parameters, per-period value laws, the competitor law
/// and optionally an attached budget plan.
///
/// JSON form: `{"params": {...}, "values": [...], "competitor": {...},
/// "plan": {...}}` where `plan` may be omitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InstanceDoc")]
pub struct Instance {
    pub params: AuctionParams,
    pub values: Vec<ValueDistribution>,
    pub competitor: CompetitorModel,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plan: Option<BudgetPlan>,
}

impl Instance {
    pub fn new(
        params: AuctionParams,
        values: Vec<ValueDistribution>,
        competitor: CompetitorModel,
    ) -> Result<Self> {
        params.validate()?;
        if values.len() != params.horizon {
            return Err(Error::InvalidInput(format!(
                "{} value distributions for horizon {}",
                values.len(),
                params.horizon
            )));
        }
        for (t, dist) in values.iter().enumerate() {
            dist.validate(&params)
                .map_err(|e| Error::InvalidDistribution(format!("period {}: {e}", t + 1)))?;
        }
        competitor.validate(&params)?;
        Ok(Instance {
            params,
            values,
            competitor,
            plan: None,
        })
    }

    /// Same law in every period.
    pub fn stationary(
        params: AuctionParams,
        value: ValueDistribution,
        competitor: CompetitorModel,
    ) -> Result<Self> {
        let values = vec![value; params.horizon];
        Self::new(params, values, competitor)
    }

    /// Attaches a plan; its length must match the horizon. The sum is not
    /// re-checked so that predicted plans can be carried too.
    pub fn with_plan(mut self, plan: BudgetPlan) -> Result<Self> {
        if plan.len() != self.params.horizon {
            return Err(Error::InvalidPlan(format!(
                "plan length {} does not match horizon {}",
                plan.len(),
                self.params.horizon
            )));
        }
        self.plan = Some(plan);
        Ok(self)
    }

    pub fn horizon(&self) -> usize {
        self.params.horizon
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Uniform allocation `rho_hat_t = B/T`.
pub fn uniform_plan(params: &AuctionParams) -> BudgetPlan {
    BudgetPlan::uniform(params)
}

/// ChaCha words reserved per period; each period draws two `u64`s.
const WORDS_PER_PERIOD: u128 = 8;

/// Counter-addressed arrival generator: one ChaCha stream per episode,
/// a fixed block of the keystream per period. Draws for period `t` do not
/// depend on which other periods were sampled.
#[derive(Debug, Clone)]
pub struct ArrivalStream {
    rng: ChaCha8Rng,
}

impl ArrivalStream {
    pub fn new(seed: u64, episode: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(episode);
        ArrivalStream { rng }
    }

    /// Arrival for zero-based period `t`.
    pub fn arrival(&mut self, instance: &Instance, t: usize) -> ArrivalSample {
        self.rng.set_word_pos(t as u128 * WORDS_PER_PERIOD);
        let u_value: f64 = self.rng.random();
        let u_comp: f64 = self.rng.random();
        ArrivalSample {
            value: instance.values[t].quantile(u_value),
            competitor_bid: instance.competitor.quantile(u_comp),
        }
    }

    pub fn episode(&mut self, instance: &Instance) -> Vec<ArrivalSample> {
        (0..instance.horizon()).map(|t| self.arrival(instance, t)).collect()
    }
}

/// All `T` arrivals of episode 0 under `seed`.
pub fn sample_arrivals(instance: &Instance, seed: u64) -> Vec<ArrivalSample> {
    ArrivalStream::new(seed, 0).episode(instance)
}
