#![allow(dead_code)]

use fpa_bidding::model::{Atom, AuctionParams, CompetitorModel, Instance, ValueDistribution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Probability vector of length `n` with entries bounded away from zero.
pub fn simplex(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut p: Vec<f64> = raw.iter().map(|x| x / total).collect();
    let rest: f64 = p[1..].iter().sum();
    p[0] = 1.0 - rest;
    p
}

pub fn random_atoms(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<Atom> {
    let probs = simplex(rng, n);
    probs
        .into_iter()
        .map(|p| Atom::new(rng.random_range(lo..=hi), p))
        .collect()
}

/// Tiny instance on `[1, 2]` with atomic value and competitor laws.
pub fn tiny_instance(rng: &mut ChaCha8Rng, max_horizon: usize, max_atoms: usize) -> Instance {
    let horizon = rng.random_range(1..=max_horizon);
    let budget = rng.random_range(0.0..=0.8) * horizon as f64;
    let params = AuctionParams::new(1.0, 2.0, horizon, budget).unwrap();
    let values = (0..horizon)
        .map(|_| {
            let n = rng.random_range(1..=max_atoms);
            ValueDistribution::discrete(random_atoms(rng, n, 1.0, 2.0))
        })
        .collect();
    let n = rng.random_range(1..=3);
    let competitor = CompetitorModel::discrete(random_atoms(rng, n, 1.0, 2.0));
    Instance::new(params, values, competitor).unwrap()
}

/// `P(m <= x)` straight from the atom list.
pub fn win_probability(competitor: &CompetitorModel, x: f64) -> f64 {
    match competitor {
        CompetitorModel::Discrete { atoms } => {
            atoms.iter().filter(|a| a.value <= x).map(|a| a.prob).sum()
        }
        CompetitorModel::Constant { value } => f64::from(u8::from(*value <= x)),
        CompetitorModel::Uniform { lo, hi } => ((x - lo) / (hi - lo)).clamp(0.0, 1.0),
    }
}

/// Brute-force LP optimum over grid bids: every deterministic bid map,
/// plus every one-item deviation mixed to spend exactly `cap`.
pub fn enumerate_lp(instance: &Instance, grid: &[f64], cap: f64, periods: &[usize]) -> f64 {
    let mut options = vec![0.0];
    options.extend(grid.iter().copied().filter(|&x| x > 0.0));
    let items: Vec<(f64, f64)> = periods
        .iter()
        .flat_map(|&t| match &instance.values[t] {
            ValueDistribution::Discrete { atoms } => {
                atoms.iter().map(|a| (a.value, a.prob)).collect::<Vec<_>>()
            }
            ValueDistribution::PointMass { value } => vec![(*value, 1.0)],
            ValueDistribution::Uniform { .. } => panic!("atomic laws only"),
        })
        .collect();
    let g = &instance.competitor;
    let cell = |item: (f64, f64), x: f64| {
        let win = if x > 0.0 { win_probability(g, x) } else { 0.0 };
        (item.1 * x * win, item.1 * (item.0 - x) * win)
    };
    let n = items.len();
    let k = options.len();
    let totals = |choice: &[usize]| {
        choice.iter().zip(&items).fold((0.0, 0.0), |acc, (&c, &it)| {
            let (cost, gain) = cell(it, options[c]);
            (acc.0 + cost, acc.1 + gain)
        })
    };
    let mut best = 0.0f64;
    let mut choice = vec![0usize; n];
    loop {
        let (cost, gain) = totals(&choice);
        if cost <= cap + 1e-14 {
            best = best.max(gain);
            for i in 0..n {
                for alt in 0..k {
                    let mut other = choice.clone();
                    other[i] = alt;
                    let (c2, g2) = totals(&other);
                    if c2 > cap {
                        best = best.max(gain + (cap - cost) / (c2 - cost) * (g2 - gain));
                    }
                }
            }
        }
        let mut pos = 0;
        while pos < n {
            choice[pos] += 1;
            if choice[pos] < k {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
        if pos == n {
            return best;
        }
    }
}

/// Kolmogorov–Smirnov distance of sorted samples from the reference CDF.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            ((i as f64 + 1.0) / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max)
}
