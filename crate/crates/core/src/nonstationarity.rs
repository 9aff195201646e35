//! How far an instance is from stationary, and how far a plan is from the
//! ideal allocation.
//!
//! `W_T = sum_t W(F_t, F_bar)` where `F_bar` is the uniform mixture of the
//! `F_t` and `W` is the 1-Wasserstein distance with ground cost `|v1 - v2|`.
//! In one dimension the optimal coupling is the quantile coupling, so
//! `W(F1, F2) = int_0^1 |F1^{-1}(u) - F2^{-1}(u)| du`.
//!
//! Uniform laws are replaced by 256 equal-mass atoms at mid-quantiles, which
//! moves each by at most `(hi - lo) / 512`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Atom, BudgetPlan, Instance, ValueDistribution};

pub const UNIFORM_ATOMS: usize = 256;

/// Atom list used for transport computations.
pub fn transport_atoms(dist: &ValueDistribution) -> Vec<Atom> {
    match dist.atoms() {
        Some(atoms) => atoms,
        None => {
            let n = UNIFORM_ATOMS as f64;
            (0..UNIFORM_ATOMS)
                .map(|k| Atom::new(dist.quantile((k as f64 + 0.5) / n), 1.0 / n))
                .collect()
        }
    }
}

/// Upper bound on `W(F, transport_atoms(F))`.
pub fn discretization_error(dist: &ValueDistribution) -> f64 {
    match dist {
        ValueDistribution::Uniform { lo, hi } => (hi - lo) / (2 * UNIFORM_ATOMS) as f64,
        _ => 0.0,
    }
}

fn sorted(mut atoms: Vec<Atom>) -> Vec<Atom> {
    atoms.retain(|a| a.prob > 0.0);
    atoms.sort_by(|a, b| a.value.total_cmp(&b.value));
    atoms
}

/// Quantile-coupling distance between two atom lists with equal total mass.
pub fn wasserstein_atoms(first: &[Atom], second: &[Atom]) -> f64 {
    let p = sorted(first.to_vec());
    let q = sorted(second.to_vec());
    quantile_coupling(&p, &q)
}

fn quantile_coupling(p: &[Atom], q: &[Atom]) -> f64 {
    let (mut i, mut j) = (0, 0);
    let (mut left_p, mut left_q) = match (p.first(), q.first()) {
        (Some(a), Some(b)) => (a.prob, b.prob),
        _ => return 0.0,
    };
    let mut cost = 0.0;
    loop {
        let moved = left_p.min(left_q);
        cost += moved * (p[i].value - q[j].value).abs();
        left_p -= moved;
        left_q -= moved;
        if left_p <= 0.0 {
            i += 1;
            match p.get(i) {
                Some(a) => left_p = a.prob,
                None => break,
            }
        }
        if left_q <= 0.0 {
            j += 1;
            match q.get(j) {
                Some(b) => left_q = b.prob,
                None => break,
            }
        }
    }
    cost
}

/// `W(F1, F2)`; exact on atomic laws, within the discretization error of
/// both arguments otherwise.
pub fn wasserstein(first: &ValueDistribution, second: &ValueDistribution) -> f64 {
    wasserstein_atoms(&transport_atoms(first), &transport_atoms(second))
}

/// Non-stationarity and prediction-error summary of an instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationReport {
    /// `W_T`.
    pub w_total: f64,
    /// `W(F_t, F_bar)` for each period.
    pub per_period: Vec<f64>,
    /// Bound on the error of `w_total` from discretizing uniform laws.
    pub w_error: f64,
    /// `V_T`, when a plan and allocation were supplied.
    pub v_total: Option<f64>,
}

/// Uniform mixture `F_bar` of the period laws, as merged sorted atoms.
pub fn mixture(instance: &Instance) -> Vec<Atom> {
    let weight = 1.0 / instance.horizon() as f64;
    let mut atoms: Vec<Atom> = instance
        .values
        .iter()
        .flat_map(transport_atoms)
        .map(|a| Atom::new(a.value, a.prob * weight))
        .collect();
    atoms = sorted(atoms);
    let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
    for atom in atoms {
        match merged.last_mut() {
            Some(last) if last.value == atom.value => last.prob += atom.prob,
            _ => merged.push(atom),
        }
    }
    merged
}

/// `W_T` of an instance with its per-period terms.
pub fn w_total(instance: &Instance) -> DeviationReport {
    let bar = mixture(instance);
    let mut laws: Vec<&ValueDistribution> = Vec::new();
    let group_of: Vec<usize> = instance
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
    let per_law: Vec<f64> = laws
        .par_iter()
        .map(|law| quantile_coupling(&sorted(transport_atoms(law)), &bar))
        .collect();
    let per_period: Vec<f64> = group_of.iter().map(|&g| per_law[g]).collect();
    let errors: Vec<f64> = instance.values.iter().map(discretization_error).collect();
    let mean_error = errors.iter().sum::<f64>() / errors.len().max(1) as f64;
    DeviationReport {
        w_total: per_period.iter().sum(),
        per_period,
        w_error: errors.iter().map(|e| e + mean_error).sum(),
        v_total: None,
    }
}

/// `V_T = sum_t |rho_t - rho_hat_t|`.
pub fn v_total(rho: &[f64], plan: &BudgetPlan) -> Result<f64> {
    if rho.len() != plan.len() {
        return Err(Error::InvalidPlan(format!(
            "allocation has {} periods, plan has {}",
            rho.len(),
            plan.len()
        )));
    }
    Ok(rho.iter().zip(&plan.rho_hat).map(|(r, h)| (r - h).abs()).sum())
}

/// `W_T` together with `V_T` of `plan` against `rho`.
pub fn deviation_report(instance: &Instance, rho: &[f64], plan: &BudgetPlan) -> Result<DeviationReport> {
    let v = v_total(rho, plan)?;
    Ok(DeviationReport {
        v_total: Some(v),
        ..w_total(instance)
    })
}
