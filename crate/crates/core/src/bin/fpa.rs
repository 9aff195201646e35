use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fpa_bidding::benchmarks::{
    exhaustive_oracle, lagrangian_value, plan_benchmark, relaxed_plan_benchmark, solve_mu_star,
    OracleConstraint,
};
use fpa_bidding::model::{
    experiment_instance, random_discrete_instance, sample_arrivals, BudgetPlan, ExperimentKind,
    Instance,
};
use fpa_bidding::policy::{run_alternate, run_path, DualConfig};
use fpa_bidding::sim::{
    emit_benchmark_csv, emit_csv, emit_svg, emit_trajectory_csv, experiment, lower_bound_check,
    run_episode, BenchmarkRow, ExperimentConfig, LowerBoundKind, RunConfig, DEFAULT_REPS,
    DEFAULT_SEED,
};
use fpa_bidding::Error;

const EXIT_RUNTIME: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_INVARIANT: u8 = 3;

#[derive(Parser)]
#[command(name = "fpa", version, about = "Budget-paced bidding in repeated first-price auctions")]
struct Cli {
    /// JSON run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Base seed; defaults to $FPA_SEED, then the built-in seed
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte-Carlo repetitions
    #[arg(long, global = true)]
    reps: Option<usize>,
    /// Output directory
    #[arg(long, global = true, default_value = "fpa-out")]
    out: PathBuf,
    /// Also write SVG charts
    #[arg(long, global = true)]
    svg: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one episode and write its trajectory
    Simulate,
    /// Run one of the three experiments
    Experiment {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        kind: u8,
    },
    /// Compute the offline benchmarks of an instance
    Benchmark,
    /// Check a lower-bound instance pair
    Lowerbound {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        prop: u8,
        #[arg(long, default_value_t = 200)]
        horizon: usize,
        /// Shift W or tail length V; defaults to T/10
        #[arg(long)]
        knob: Option<f64>,
    },
    /// Check core invariants on randomized inputs
    Selftest,
}

enum Failure {
    Config(String),
    Runtime(String),
    Invariant(usize),
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        match err {
            Error::Io { .. } => Failure::Runtime(err.to_string()),
            other => Failure::Config(other.to_string()),
        }
    }
}

struct Settings {
    config: RunConfig,
    seed: u64,
    reps: usize,
    out: PathBuf,
    svg: bool,
}

impl Settings {
    fn from_cli(cli: &Cli) -> Result<Self, Failure> {
        let config = match &cli.config {
            Some(path) => RunConfig::load(path).map_err(|e| Failure::Config(e.to_string()))?,
            None => RunConfig::default(),
        };
        let env_seed = match std::env::var("FPA_SEED") {
            Ok(text) => Some(
                text.trim()
                    .parse::<u64>()
                    .map_err(|_| Failure::Config(format!("FPA_SEED is not a u64: {text:?}")))?,
            ),
            Err(_) => None,
        };
        let seed = cli.seed.or(config.seed).or(env_seed).unwrap_or(DEFAULT_SEED);
        let reps = cli.reps.or(config.reps).unwrap_or(DEFAULT_REPS);
        if reps == 0 {
            return Err(Failure::Config("reps must be at least 1".into()));
        }
        Ok(Settings {
            config,
            seed,
            reps,
            out: cli.out.clone(),
            svg: cli.svg,
        })
    }

    fn instance(&self) -> Result<Instance, Failure> {
        match &self.config.instance {
            Some(instance) => Ok(instance.clone()),
            None => Ok(experiment_instance(ExperimentKind::Horizon, 200, 0.0, self.seed)?.instance),
        }
    }

    fn plan(&self, instance: &Instance) -> BudgetPlan {
        instance
            .plan
            .clone()
            .unwrap_or_else(|| BudgetPlan::uniform(&instance.params))
    }

    fn dual(&self, instance: &Instance) -> Result<DualConfig, Failure> {
        let config = DualConfig {
            eta: self.config.eta.unwrap_or_else(|| instance.params.default_step()),
            mu1: self.config.mu1.unwrap_or(0.0),
        };
        config.validate(&instance.params)?;
        Ok(config)
    }
}

fn simulate(settings: &Settings) -> Result<(), Failure> {
    let instance = settings.instance()?;
    let plan = settings.plan(&instance);
    let dual = settings.dual(&instance)?;
    let episode = run_episode(&instance, &plan, dual, settings.seed)?;
    let path = settings.out.join("trajectory.csv");
    emit_trajectory_csv(&episode.trajectory, &path)?;
    println!(
        "seed {} T {} reward {:.6} spend {:.6} budget {} -> {}",
        settings.seed,
        instance.horizon(),
        episode.total_reward,
        episode.total_spend,
        instance.params.budget,
        path.display()
    );
    Ok(())
}

fn run_experiment(settings: &Settings, kind: u8) -> Result<(), Failure> {
    let kind = ExperimentKind::try_from(kind)?;
    let mut config = ExperimentConfig::new(kind, settings.reps, settings.seed);
    if let Some(horizons) = &settings.config.horizons {
        config.horizons = horizons.clone();
    }
    if let Some(knobs) = &settings.config.knobs {
        config.knobs = knobs.clone();
    }
    config.eta = settings.config.eta;
    config.mu1 = settings.config.mu1.unwrap_or(0.0);
    let report = experiment(&config)?;
    let stem = format!("experiment_{}", kind as u8);
    let csv = settings.out.join(format!("{stem}.csv"));
    emit_csv(&report, &csv)?;
    if settings.svg {
        emit_svg(&report, &settings.out.join(format!("{stem}.svg")))?;
    }
    for row in &report.rows {
        println!(
            "{:>14} knob {:>8} T {:>5} rel.err {:.5} (+/- {:.5})",
            row.policy.label(),
            row.knob,
            row.horizon,
            row.relative_error,
            row.relative_error_stderr
        );
    }
    println!("-> {}", csv.display());
    Ok(())
}

fn benchmark(settings: &Settings) -> Result<(), Failure> {
    let instance = settings.instance()?;
    let plan = settings.plan(&instance);
    let id = match &settings.config.instance {
        Some(_) => "config".to_string(),
        None => format!("horizon-200-seed-{}", settings.seed),
    };
    let solution = solve_mu_star(&instance);
    let mut rows = vec![
        BenchmarkRow {
            instance_id: id.clone(),
            kind: "lagrangian".into(),
            value: solution.v_lr,
            mu_star: solution.mu_star,
            slack: solution.slack,
        },
        BenchmarkRow {
            instance_id: id.clone(),
            kind: "plan".into(),
            value: plan_benchmark(&instance, &plan)?,
            mu_star: solution.mu_star,
            slack: instance.params.budget - plan.total(),
        },
    ];
    let eps = settings.config.eps.clone().or_else(|| plan.eps.clone());
    if let Some(eps) = eps {
        let relaxed = relaxed_plan_benchmark(&instance, &plan, &eps, instance.params.budget)?;
        rows.push(BenchmarkRow {
            instance_id: id,
            kind: "relaxed_plan".into(),
            value: relaxed.value,
            mu_star: relaxed.lambda,
            slack: instance.params.budget - relaxed.consumption,
        });
    }
    let path = settings.out.join("benchmarks.csv");
    emit_benchmark_csv(&rows, &path)?;
    for row in &rows {
        println!("{:<14} {:.9} (price {:.6})", row.kind, row.value, row.mu_star);
    }
    println!("-> {}", path.display());
    Ok(())
}

fn lowerbound(
    settings: &Settings,
    prop: u8,
    horizon: usize,
    knob: Option<f64>,
) -> Result<(), Failure> {
    let kind = LowerBoundKind::try_from(prop)?;
    let knob = knob.unwrap_or(horizon as f64 / 10.0);
    let report = lower_bound_check(kind, horizon, knob, settings.reps, settings.seed)?;
    let path = settings.out.join(format!("lowerbound_{prop}.json"));
    write_json(&path, &report)?;
    println!(
        "offline optima {:?} (oracle {:?}, dual {:?}); T=4 oracle {:?} vs {:?}",
        report.closed_form, report.oracle, report.v_lr, report.reduced.oracle, report.reduced.closed_form
    );
    println!("realized regrets {:?} over {} reps -> {}", report.regret, report.reps, path.display());
    Ok(())
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(Error::from)?;
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Failure::Runtime(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, text).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))
}

fn check(name: &str, ok: bool, failures: &mut usize) {
    println!("{} {name}", if ok { "ok  " } else { "FAIL" });
    if !ok {
        *failures += 1;
    }
}

fn selftest(settings: &Settings) -> Result<(), Failure> {
    let mut failures = 0;
    let seed = settings.seed;

    let mut duality = true;
    let mut slackness = true;
    for k in 0..20 {
        let inst = random_discrete_instance(seed.wrapping_add(k), 1 + (k % 4) as usize, 2)?;
        let grid = [0.0, 1.0, 1.25, 1.5, 1.75];
        let primal = exhaustive_oracle(&inst, &grid, OracleConstraint::Global)?;
        for j in 0..5 {
            duality &= lagrangian_value(&inst, 0.5 * j as f64) >= primal - 1e-9;
        }
        let sol = solve_mu_star(&inst);
        duality &= sol.v_lr >= primal - 1e-9;
        slackness &= (sol.mu_star * sol.slack).abs() <= 1e-6 * (1.0 + inst.params.budget);
    }
    check("weak duality on random small instances", duality, &mut failures);
    check("complementary slackness at mu*", slackness, &mut failures);

    let mut bounded = true;
    let mut feasible = true;
    let mut dominated = true;
    for k in 0..100u64 {
        let inst = experiment_instance(ExperimentKind::Horizon, 100, 0.0, seed.wrapping_add(k))?.instance;
        let params = inst.params;
        let plan = BudgetPlan::uniform(&params);
        let config = DualConfig {
            eta: 1.0 / (1.0 + (k % 10) as f64),
            mu1: params.dual_bound() * (k % 3) as f64 / 2.0,
        };
        let arrivals = sample_arrivals(&inst, seed.wrapping_add(k));
        let path = run_path(params, plan.clone(), config, &arrivals)?;
        bounded &= path.iter().all(|r| r.mu_after <= params.dual_bound());
        feasible &= path.iter().all(|r| r.budget_after >= 0.0);
        let original: f64 = path.iter().map(|r| r.reward).sum();
        let alternate = run_alternate(params, plan, config, &arrivals)?;
        dominated &= alternate.penalized_total <= original;
        dominated &= alternate.total_spend - params.budget <= params.dual_bound() / config.eta;
    }
    check("dual variable stays below b/a + b", bounded, &mut failures);
    check("remaining budget never negative", feasible, &mut failures);
    check("alternate system bounds the original", dominated, &mut failures);

    if failures > 0 {
        Err(Failure::Invariant(failures))
    } else {
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = Settings::from_cli(&cli).and_then(|settings| match &cli.command {
        Command::Simulate => simulate(&settings),
        Command::Experiment { kind } => run_experiment(&settings, *kind),
        Command::Benchmark => benchmark(&settings),
        Command::Lowerbound { prop, horizon, knob } => lowerbound(&settings, *prop, *horizon, *knob),
        Command::Selftest => selftest(&settings),
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("fpa: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("fpa: {msg}");
            ExitCode::from(EXIT_RUNTIME)
        }
        Err(Failure::Invariant(n)) => {
            eprintln!("fpa: {n} invariant check(s) failed");
            ExitCode::from(EXIT_INVARIANT)
        }
    }
}
