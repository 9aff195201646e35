//! Single-period bid selection: maximize the shaded surplus
//! `(v - (1 + mu) x) * G(x)` over the decision space `{0} ∪ [a, b]`.
//!
//! Bidding 0 means abstaining: it never wins, earns nothing and spends
//! nothing, so the returned objective is never negative. Ties go to the
//! smallest bid.

use crate::ecdf::EmpiricalCdf;
use crate::model::{AuctionParams, CompetitorModel};

/// Probability of winning with a given bid, i.e. the CDF of the highest
/// competing bid.
pub trait WinProbability {
    fn win_probability(&self, bid: f64) -> f64;
}

impl WinProbability for EmpiricalCdf {
    fn win_probability(&self, bid: f64) -> f64 {
        self.query(bid)
    }
}

impl WinProbability for CompetitorModel {
    fn win_probability(&self, bid: f64) -> f64 {
        self.cdf(bid)
    }
}

impl<F: Fn(f64) -> f64> WinProbability for F {
    fn win_probability(&self, bid: f64) -> f64 {
        self(bid)
    }
}

/// Admissible positive bids `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BidRange {
    pub lo: f64,
    pub hi: f64,
}

impl BidRange {
    pub fn new(lo: f64, hi: f64) -> Self {
        BidRange { lo, hi }
    }
}

impl From<&AuctionParams> for BidRange {
    fn from(params: &AuctionParams) -> Self {
        BidRange::new(params.reserve, params.max_value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BidChoice {
    pub bid: f64,
    /// Shaded surplus `(v - (1 + mu) * bid) * G(bid)`; zero for abstention.
    pub objective: f64,
}

impl BidChoice {
    pub const ABSTAIN: BidChoice = BidChoice {
        bid: 0.0,
        objective: 0.0,
    };

    pub fn is_abstain(&self) -> bool {
        self.bid == 0.0
    }
}

/// Scans `(x, G(x))` pairs in increasing `x` and keeps the first strict
/// improvement over abstention.
fn best_of<I>(value: f64, shade: f64, candidates: I) -> BidChoice
where
    I: IntoIterator<Item = (f64, f64)>,
{
    let mut best = BidChoice::ABSTAIN;
    for (x, g) in candidates {
        if shade * x >= value {
            break;
        }
        let objective = (value - shade * x) * g;
        if objective > best.objective {
            best = BidChoice { bid: x, objective };
        }
    }
    best
}

/// Target bid against an empirical step CDF.
///
/// On each interval where the step CDF is constant the objective is linear
/// with negative slope, so the maximum over `[a, b]` sits on `a` or on a
/// sample point; those are the only candidates examined.
pub fn best_bid_step(value: f64, mu: f64, cdf: &EmpiricalCdf, range: BidRange) -> BidChoice {
    let shade = 1.0 + mu;
    let n = cdf.len();
    if n == 0 {
        return best_of(value, shade, [(range.lo, 1.0)]);
    }
    let inv_n = 1.0 / n as f64;
    let head = (range.lo, cdf.query(range.lo));
    let tail = cdf
        .steps()
        .skip_while(|&(x, _)| x <= range.lo)
        .take_while(|&(x, _)| x <= range.hi)
        .map(|(x, cum)| (x, cum as f64 * inv_n));
    best_of(value, shade, std::iter::once(head).chain(tail))
}

/// Candidate bids `{a} ∪ atoms` with their win probabilities, for atomic
/// competitor laws.
pub(crate) fn atomic_candidates(competitor: &CompetitorModel, range: BidRange) -> Vec<(f64, f64)> {
    let mut out = vec![(range.lo, competitor.cdf(range.lo))];
    match competitor {
        CompetitorModel::Constant { value } => {
            if *value > range.lo && *value <= range.hi {
                out.push((*value, 1.0));
            }
        }
        CompetitorModel::Discrete { atoms } => {
            let mut cum = 0.0;
            for atom in atoms {
                cum += atom.prob;
                if atom.value > range.lo && atom.value <= range.hi {
                    out.push((atom.value, cum.min(1.0)));
                }
            }
        }
        CompetitorModel::Uniform { .. } => {}
    }
    out
}

/// Ideal bid `x*(v, mu)` when the competitor law is known.
///
/// For a uniform competitor on `[lo, hi]` the objective is a concave
/// quadratic on `[max(a, lo), min(b, hi)]` with vertex
/// `(v / (1 + mu) + lo) / 2`; below `lo` it is zero and above `hi` it
/// decreases, so the clipped vertex is optimal unless abstention ties or
/// beats it.
pub fn best_bid_analytic(
    value: f64,
    mu: f64,
    competitor: &CompetitorModel,
    range: BidRange,
) -> BidChoice {
    let shade = 1.0 + mu;
    match competitor {
        CompetitorModel::Uniform { lo, hi } => {
            let left = range.lo.max(*lo);
            let right = range.hi.min(*hi);
            if left > right {
                return BidChoice::ABSTAIN;
            }
            let bid = (0.5 * (value / shade + lo)).clamp(left, right);
            let objective = (value - shade * bid) * competitor.cdf(bid);
            if objective > 0.0 {
                BidChoice { bid, objective }
            } else {
                BidChoice::ABSTAIN
            }
        }
        _ => best_of(value, shade, atomic_candidates(competitor, range)),
    }
}

/// Expected spend `x * G(x)` of a bid; zero when abstaining.
pub fn expected_consumption<G: WinProbability + ?Sized>(bid: f64, g: &G) -> f64 {
    if bid <= 0.0 {
        0.0
    } else {
        bid * g.win_probability(bid)
    }
}

/// Expected surplus `(v - x) * G(x)` of a bid; zero when abstaining.
pub fn expected_reward<G: WinProbability + ?Sized>(value: f64, bid: f64, g: &G) -> f64 {
    if bid <= 0.0 {
        0.0
    } else {
        (value - bid) * g.win_probability(bid)
    }
}
