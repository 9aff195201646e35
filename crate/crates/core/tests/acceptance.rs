//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::process::{Command, ExitCode};
use std::time::Instant;

use fpa_bidding::benchmarks::{
    exhaustive_oracle, lagrangian_value, plan_benchmark, relaxed_plan_benchmark, solve_mu_star,
    OracleConstraint,
};
use fpa_bidding::ecdf::{dkw_tail, EmpiricalCdf};
use fpa_bidding::model::{
    experiment_instance, ArrivalStream, AuctionParams, BudgetPlan, CompetitorModel,
    ExperimentKind, Instance, ValueDistribution,
};
use fpa_bidding::optimizer::{best_bid_step, BidRange};
use fpa_bidding::policy::{run_alternate, run_path, DualConfig};
use fpa_bidding::sim::{
    experiment, lower_bound_check, monte_carlo, ExperimentConfig, ExperimentRow, LowerBoundKind,
    Policy,
};
use rand::Rng;

use common::{enumerate_lp, ks_statistic, rng, simplex, tiny_instance};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lower_bound_optima() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for prop in [LowerBoundKind::ValueShift, LowerBoundKind::PlanError] {
        for horizon in [8usize, 200] {
            let t = horizon as f64;
            for knob in [0.0, t / 10.0] {
                let report = lower_bound_check(prop, horizon, knob, 10, 1).map_err(|e| e.to_string())?;
                let expected = match prop {
                    LowerBoundKind::ValueShift => [t / 8.0 + knob / 2.0, t / 8.0],
                    LowerBoundKind::PlanError => [t / 8.0 + knob / 8.0, t / 8.0],
                };
                let small_knob = knob * 4.0 / t;
                let small_expected = match prop {
                    LowerBoundKind::ValueShift => [0.5 + small_knob / 2.0, 0.5],
                    LowerBoundKind::PlanError => [0.5 + small_knob / 8.0, 0.5],
                };
                for i in 0..2 {
                    let gaps = [
                        (report.closed_form[i] - expected[i]).abs(),
                        (report.oracle[i] - expected[i]).abs(),
                        (report.v_lr[i] - expected[i]).abs(),
                        (report.reduced.oracle[i] - small_expected[i]).abs(),
                    ];
                    let gap = gaps.iter().copied().fold(0.0, f64::max);
                    worst = worst.max(gap);
                    ensure(gap <= 1e-9, || {
                        format!("{prop:?} T={horizon} knob={knob}: gaps {gaps:?}")
                    })?;
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} pairs, max gap {worst:.1e}"))
}

fn weak_duality() -> Outcome {
    let mut r = rng(2);
    let mut min_margin = f64::INFINITY;
    let mut enumerated = 0;
    for _ in 0..100 {
        let inst = tiny_instance(&mut r, 5, 3);
        let mut grid = vec![0.0, 1.0];
        grid.extend((0..3).map(|_| r.random_range(1.0..=2.0)));
        let primal = exhaustive_oracle(&inst, &grid, OracleConstraint::Global).map_err(|e| e.to_string())?;
        let items: usize = inst.values.iter().map(|d| d.atoms().unwrap().len()).sum();
        if items <= 5 {
            let periods: Vec<usize> = (0..inst.horizon()).collect();
            let slow = enumerate_lp(&inst, &grid, inst.params.budget, &periods);
            ensure((slow - primal).abs() <= 1e-9, || {
                format!("oracle {primal} disagrees with enumeration {slow}")
            })?;
            enumerated += 1;
        }
        for _ in 0..20 {
            let mu = r.random_range(0.0..=inst.params.dual_bound());
            let dual = lagrangian_value(&inst, mu);
            min_margin = min_margin.min(dual - primal);
            ensure(dual >= primal - 1e-9, || format!("V^LR({mu}) = {dual} < {primal}"))?;
        }
    }
    Ok(format!(
        "2000 (instance, mu) pairs, min V^LR - OPT {min_margin:.3e}; {enumerated} oracles re-enumerated"
    ))
}

fn dual_bound() -> Outcome {
    let mut r = rng(3);
    let mut worst_ratio: f64 = 0.0;
    for episode in 0..10_000u64 {
        let reserve = r.random_range(0.2..1.5);
        let max_value = reserve + r.random_range(0.1..2.0);
        let horizon = r.random_range(10..=60);
        let budget = r.random_range(0.0..=0.5) * horizon as f64 * max_value;
        let params = AuctionParams::new(reserve, max_value, horizon, budget).unwrap();
        let width = max_value - reserve;
        let values = match episode % 3 {
            0 => ValueDistribution::point_mass(max_value),
            1 => ValueDistribution::uniform(reserve, max_value),
            _ => {
                let lo = reserve + r.random_range(0.0..0.5) * width;
                ValueDistribution::uniform(lo, lo + r.random_range(0.0..0.5) * width)
            }
        };
        let competitor = if episode % 2 == 0 {
            CompetitorModel::uniform(reserve, max_value)
        } else {
            CompetitorModel::constant(reserve + r.random_range(0.0..=1.0) * width)
        };
        let inst = Instance::stationary(params, values, competitor).unwrap();
        let bound = params.dual_bound();
        let config = DualConfig {
            eta: r.random_range(0.01..=1.0),
            mu1: r.random_range(0.0..=bound),
        };
        let arrivals = ArrivalStream::new(3, episode).episode(&inst);
        let path = run_path(params, BudgetPlan::uniform(&params), config, &arrivals)
            .map_err(|e| e.to_string())?;
        let max_mu = path.iter().map(|s| s.mu_after).fold(config.mu1, f64::max);
        worst_ratio = worst_ratio.max(max_mu / bound);
        ensure(max_mu <= bound, || format!("episode {episode}: mu reached {max_mu} > {bound}"))?;
    }
    Ok(format!("10^4 episodes, max mu_t / (b/a + b) = {worst_ratio:.4}"))
}

fn alternate_system() -> Outcome {
    let mut r = rng(4);
    let mut worst_gap = f64::NEG_INFINITY;
    for path_id in 0..1000u64 {
        let horizon = r.random_range(20..=200);
        let budget = r.random_range(0.02..=0.5) * horizon as f64;
        let params = AuctionParams::new(1.0, 2.0, horizon, budget).unwrap();
        let inst = Instance::new(
            params,
            (0..horizon)
                .map(|_| {
                    let lo = r.random_range(1.0..2.0);
                    ValueDistribution::uniform(lo, r.random_range(lo..=2.0))
                })
                .collect(),
            CompetitorModel::uniform(1.0, 2.0),
        )
        .unwrap();
        let config = DualConfig {
            eta: r.random_range(0.01..=1.0),
            mu1: r.random_range(0.0..=params.dual_bound()),
        };
        let plan = BudgetPlan::uniform(&params);
        let arrivals = ArrivalStream::new(4, path_id).episode(&inst);
        let original: f64 = run_path(params, plan.clone(), config, &arrivals)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|s| s.reward)
            .sum();
        let alt = run_alternate(params, plan, config, &arrivals).map_err(|e| e.to_string())?;
        ensure(alt.penalized_total <= original, || {
            format!("path {path_id}: alternate {} > original {original}", alt.penalized_total)
        })?;
        let overspend = alt.total_spend - budget;
        let cap = params.dual_bound() / config.eta;
        worst_gap = worst_gap.max(overspend / cap);
        ensure(overspend <= cap, || format!("path {path_id}: overspend {overspend} > {cap}"))?;
    }
    Ok(format!("10^3 paths, max overspend / ((b/a + b)/eta) = {worst_gap:.4}"))
}

fn random_uniform_instance(r: &mut rand_chacha::ChaCha8Rng) -> Instance {
    let horizon = r.random_range(2..=12);
    let budget = r.random_range(0.05..=0.6) * horizon as f64;
    let params = AuctionParams::new(1.0, 2.0, horizon, budget).unwrap();
    let values = (0..horizon)
        .map(|_| {
            let lo = r.random_range(1.0..2.0);
            ValueDistribution::uniform(lo, r.random_range(lo..=2.0))
        })
        .collect();
    let lo = r.random_range(1.0..1.5);
    Instance::new(params, values, CompetitorModel::uniform(lo, r.random_range(lo + 0.1..=2.0))).unwrap()
}

fn period_decomposition() -> Outcome {
    let mut r = rng(5);
    let mut worst_excess: f64 = f64::NEG_INFINITY;
    let mut worst_slack: f64 = 0.0;
    let mut binding = 0;
    for k in 0..20 {
        let inst = if k % 2 == 0 { random_uniform_instance(&mut r) } else { tiny_instance(&mut r, 6, 3) };
        let sol = solve_mu_star(&inst);
        let budget = inst.params.budget;
        let cs = (sol.mu_star * (budget - sol.rho.iter().sum::<f64>())).abs();
        worst_slack = worst_slack.max(cs / (1.0 + budget));
        ensure(cs <= 1e-6 * (1.0 + budget), || format!("instance {k}: |mu* slack| = {cs}"))?;
        if sol.mu_star > 0.0 {
            binding += 1;
        }
        let at = sol.period_objectives(&inst, sol.mu_star);
        let neighbours: Vec<Vec<f64>> = [1e-3, 1e-2, -1e-3, -1e-2]
            .iter()
            .map(|d| sol.mu_star + d)
            .filter(|&mu| mu >= 0.0)
            .map(|mu| sol.period_objectives(&inst, mu))
            .collect();
        for (t, d_star) in at.iter().enumerate() {
            let best = neighbours.iter().map(|n| n[t]).fold(f64::INFINITY, f64::min);
            worst_excess = worst_excess.max(d_star - best);
            ensure(*d_star <= best + 1e-9, || {
                format!("instance {k} period {t}: D_t(mu*) = {d_star} > {best}")
            })?;
        }
    }
    Ok(format!(
        "20 instances ({binding} with binding budget), max D_t(mu*) - min neighbour {worst_excess:.2e}, max |mu* slack|/(1+B) {worst_slack:.1e}"
    ))
}

fn dkw_coverage() -> Outcome {
    let mut r = rng(6);
    let trials = 2000;
    let mut lines = Vec::new();
    for n in [25usize, 100, 400] {
        for eps in [0.1, 0.2] {
            let mut exceed = 0;
            for _ in 0..trials {
                let mut samples: Vec<f64> = (0..n).map(|_| r.random_range(1.0..2.0)).collect();
                let mut cdf = EmpiricalCdf::new(1.0, 2.0);
                for &s in &samples {
                    cdf.insert(s).map_err(|e| e.to_string())?;
                }
                let sup = cdf.sup_distance(|x| (x - 1.0).clamp(0.0, 1.0));
                let ks = ks_statistic(&mut samples, |x| (x - 1.0).clamp(0.0, 1.0));
                ensure((sup - ks).abs() < 1e-12, || format!("sup distance {sup} vs KS {ks}"))?;
                if sup >= eps {
                    exceed += 1;
                }
            }
            let bound = dkw_tail(n, eps).min(1.0);
            let slack = 3.0 * (bound * (1.0 - bound) / trials as f64).sqrt();
            let freq = exceed as f64 / trials as f64;
            ensure(freq <= bound + slack, || {
                format!("n={n} eps={eps}: exceedance {freq} > {bound} + {slack}")
            })?;
            lines.push(format!("n={n},eps={eps}: {freq:.4}<={bound:.4}+{slack:.4}"));
        }
    }
    Ok(lines.join("; "))
}

fn optimizer_grid() -> Outcome {
    let mut r = rng(7);
    let points = 10_000;
    let mut worst: f64 = 0.0;
    for case in 0..1000 {
        let lo = r.random_range(0.1..1.5);
        let hi = lo + r.random_range(0.2..2.0);
        let range = BidRange::new(lo, hi);
        let n = r.random_range(0..=40);
        let samples: Vec<f64> = (0..n).map(|_| r.random_range(lo..=hi)).collect();
        let mut cdf = EmpiricalCdf::new(lo, hi);
        for &s in &samples {
            cdf.insert(s).map_err(|e| e.to_string())?;
        }
        let g = |x: f64| {
            if n == 0 {
                1.0
            } else {
                samples.iter().filter(|&&s| s <= x).count() as f64 / n as f64
            }
        };
        let value = r.random_range(lo..=hi);
        let mu = r.random_range(0.0..=3.0);
        let shade = 1.0 + mu;
        let choice = best_bid_step(value, mu, &cdf, range);
        let achieved = if choice.bid == 0.0 { 0.0 } else { (value - shade * choice.bid) * g(choice.bid) };
        ensure((achieved - choice.objective).abs() < 1e-12, || {
            format!("case {case}: reported {} but bid earns {achieved}", choice.objective)
        })?;
        let h = (hi - lo) / (points - 1) as f64;
        let grid_best = (0..points)
            .map(|k| lo + h * k as f64)
            .map(|x| (value - shade * x) * g(x))
            .fold(0.0, f64::max);
        let gap = choice.objective - grid_best;
        ensure(gap >= -1e-12 && gap <= shade * h, || {
            format!("case {case}: optimizer {} vs grid {grid_best}", choice.objective)
        })?;
        worst = worst.max(gap / (shade * h));
    }
    Ok(format!("1000 cases, max gap / ((1+mu) h) = {worst:.3}"))
}

fn pooled(a: &ExperimentRow, b: &ExperimentRow) -> f64 {
    (a.relative_error_stderr.powi(2) + b.relative_error_stderr.powi(2)).sqrt()
}

fn nondecreasing(rows: &[&ExperimentRow], name: &str) -> Result<String, String> {
    for w in rows.windows(2) {
        let slack = 2.0 * pooled(w[0], w[1]);
        ensure(w[1].relative_error >= w[0].relative_error - slack, || {
            format!(
                "{name}: rel.err {} at knob {} below {} at knob {} by more than {slack}",
                w[1].relative_error, w[1].knob, w[0].relative_error, w[0].knob
            )
        })?;
    }
    let series: Vec<String> = rows.iter().map(|r| format!("{:.4}", r.relative_error)).collect();
    Ok(format!("{name} [{}]", series.join(", ")))
}

fn experiment_trends() -> Outcome {
    let reps = 200;
    let seed = 8;
    let mut horizon_cfg = ExperimentConfig::new(ExperimentKind::Horizon, reps, seed);
    horizon_cfg.horizons = vec![100, 1000];
    let horizon = experiment(&horizon_cfg).map_err(|e| e.to_string())?;
    let mut notes = Vec::new();
    for policy in [Policy::Uninformative, Policy::Informative] {
        let s = horizon.series(policy);
        ensure(s[1].relative_error < s[0].relative_error, || {
            format!("{policy:?}: rel.err {} at T=1000 not below {} at T=100", s[1].relative_error, s[0].relative_error)
        })?;
        notes.push(format!("{} {:.4}->{:.4}", policy.label(), s[0].relative_error, s[1].relative_error));
    }
    let un = horizon.series(Policy::Uninformative);
    let inf = horizon.series(Policy::Informative);
    for (u, i) in un.iter().zip(&inf) {
        ensure(i.relative_error <= u.relative_error + 2.0 * pooled(u, i), || {
            format!("T={}: informative {} above uninformative {}", u.horizon, i.relative_error, u.relative_error)
        })?;
    }

    let shift = experiment(&ExperimentConfig::new(ExperimentKind::Shift, reps, seed)).map_err(|e| e.to_string())?;
    notes.push(nondecreasing(&shift.series(Policy::Uninformative), "W")?);
    let predicted =
        experiment(&ExperimentConfig::new(ExperimentKind::Prediction, reps, seed)).map_err(|e| e.to_string())?;
    notes.push(nondecreasing(&predicted.series(Policy::Predicted), "eps")?);
    Ok(notes.join("; "))
}

fn sublinear_regret() -> Outcome {
    let reps = 200;
    let ratio = |horizon: usize| -> Result<(f64, f64), String> {
        let inst = experiment_instance(ExperimentKind::Horizon, horizon, 0.0, 9)
            .map_err(|e| e.to_string())?
            .instance;
        let params = inst.params;
        let mc = monte_carlo(&inst, &BudgetPlan::uniform(&params), DualConfig::default_for(&params), reps, 9)
            .map_err(|e| e.to_string())?;
        let regret = solve_mu_star(&inst).v_lr - mc.mean;
        let t = horizon as f64;
        Ok((regret, regret / (t * t.ln()).sqrt()))
    };
    let (r400, q400) = ratio(400)?;
    let (r1600, q1600) = ratio(1600)?;
    ensure(q1600 <= 2.0 * q400, || {
        format!("regret/sqrt(T ln T): {q1600} at T=1600 vs {q400} at T=400")
    })?;
    Ok(format!(
        "regret {r400:.3} -> {r1600:.3}; normalized {q400:.4} -> {q1600:.4}"
    ))
}

fn plan_benchmarks() -> Outcome {
    let mut r = rng(10);
    let mut worst: f64 = 0.0;
    let mut worst_dual: f64 = 0.0;
    for k in 0..50 {
        let inst = tiny_instance(&mut r, 4, 3);
        let horizon = inst.horizon();
        let budget = inst.params.budget;
        let mut grid = vec![0.0, inst.params.reserve];
        if let CompetitorModel::Discrete { atoms } = &inst.competitor {
            grid.extend(atoms.iter().map(|a| a.value).filter(|&v| v > inst.params.reserve));
        }
        let rho_hat: Vec<f64> = simplex(&mut r, horizon).iter().map(|p| p * budget).collect();
        let plan = BudgetPlan::new(rho_hat, budget).map_err(|e| e.to_string())?;
        let eps: Vec<f64> = (0..horizon).map(|_| r.random_range(0.0..0.3)).collect();

        let strict = plan_benchmark(&inst, &plan).map_err(|e| e.to_string())?;
        let oracle_strict =
            exhaustive_oracle(&inst, &grid, OracleConstraint::PerPeriod(&plan)).map_err(|e| e.to_string())?;
        let relaxed = relaxed_plan_benchmark(&inst, &plan, &eps, budget).map_err(|e| e.to_string())?;
        let oracle_relaxed = exhaustive_oracle(&inst, &grid, OracleConstraint::Both { plan: &plan, eps: &eps })
            .map_err(|e| e.to_string())?;
        if horizon <= 2 {
            let by_period: f64 = (0..horizon)
                .map(|t| enumerate_lp(&inst, &grid, plan.rho_hat[t], &[t]))
                .sum();
            ensure((by_period - oracle_strict).abs() <= 1e-9, || {
                format!("instance {k}: per-period oracle {oracle_strict} vs enumeration {by_period}")
            })?;
        }
        let gap = (strict - oracle_strict).abs().max((relaxed.value - oracle_relaxed).abs());
        worst = worst.max(gap);
        ensure(gap <= 1e-9, || {
            format!(
                "instance {k}: plan {strict} vs {oracle_strict}, relaxed {} vs {oracle_relaxed}",
                relaxed.value
            )
        })?;

        let wide = vec![inst.params.max_value; horizon];
        let recovered = relaxed_plan_benchmark(&inst, &plan, &wide, budget).map_err(|e| e.to_string())?;
        let v_lr = solve_mu_star(&inst).v_lr;
        worst_dual = worst_dual.max((recovered.value - v_lr).abs());
        ensure((recovered.value - v_lr).abs() <= 1e-6, || {
            format!("instance {k}: relaxed with eps=b {} vs V^LR {v_lr}", recovered.value)
        })?;
    }
    Ok(format!("50 instances, max oracle gap {worst:.1e}, max |relaxed(b) - V^LR| {worst_dual:.1e}"))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        let status = Command::new(env!("CARGO_BIN_EXE_fpa"))
            .args(["experiment", "--kind", "1", "--seed", "7", "--out"])
            .arg(&out)
            .env_remove("FPA_SEED")
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.success(), || {
            format!("run {run} failed: {}", String::from_utf8_lossy(&status.stderr))
        })?;
        outputs.push(std::fs::read(out.join("experiment_1.csv")).map_err(|e| e.to_string())?);
    }
    ensure(outputs[0] == outputs[1], || "CSV outputs differ".into())?;
    Ok(format!("{} bytes identical", outputs[0].len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("lower-bound closed forms", lower_bound_optima),
        ("weak duality", weak_duality),
        ("dual variable bound", dual_bound),
        ("alternate-system dominance and telescoping", alternate_system),
        ("per-period minimization and complementary slackness", period_decomposition),
        ("DKW coverage", dkw_coverage),
        ("optimizer vs grid oracle", optimizer_grid),
        ("experiment trends", experiment_trends),
        ("sublinear regret ratio", sublinear_regret),
        ("plan benchmarks vs oracle", plan_benchmarks),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
