use clap::{Args, Parser, Subcommand};
use invasim::harness::config::ExperimentConfig;
use invasim::harness::eoc::eoc_study;
use invasim::harness::metrics::{compare_runs, sweep_tau, write_sweep_csv};
use invasim::harness::run::run_simulation;
use invasim::harness::{io, metrics};
use invasim::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "invasim", about = "Finite-volume IMEX solver for a delayed tumour invasion model", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single simulation and write snapshots.
    Simulate(SimulateArgs),
    /// Grid convergence study over doubling levels.
    Eoc(EocArgs),
    /// Run the simulation across a range of delay values.
    Sweep(SweepArgs),
    /// Componentwise difference norms of two finished runs.
    Compare(CompareArgs),
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    config: PathBuf,
    /// Override the delay parameter tau.
    #[arg(long)]
    tau: Option<f64>,
    /// Override the scale separation parameter chi.
    #[arg(long)]
    chi: Option<f64>,
    /// Override the grid to n x n cells.
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    t_final: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EocArgs {
    #[arg(long)]
    config: PathBuf,
    /// Comma-separated doubling grid sizes, e.g. 25,50,100,200.
    #[arg(long, value_delimiter = ',')]
    levels: Vec<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    /// Delay values: either a comma list (0,5,10) or a range start:stop:step
    /// with an exclusive stop.
    #[arg(long)]
    tau: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    run_a: PathBuf,
    run_b: PathBuf,
}

fn parse_tau_list(text: &str) -> Result<Vec<f64>, Error> {
    let bad = |m: &str| Error::Config(format!("invalid tau list '{text}': {m}"));
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("range form is start:stop:step"));
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| p.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| bad(&e.to_string()))?;
        let (start, stop, step) = (nums[0], nums[1], nums[2]);
        if !(step > 0.0) || stop < start {
            return Err(bad("need step > 0 and stop >= start"));
        }
        let mut out = Vec::new();
        let mut k = 0u64;
        loop {
            let v = start + k as f64 * step;
            if v >= stop {
                break;
            }
            out.push(v);
            k += 1;
        }
        if out.is_empty() {
            return Err(bad("empty range"));
        }
        Ok(out)
    } else {
        let out: Vec<f64> = text
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| bad(&e.to_string()))?;
        if out.is_empty() {
            return Err(bad("empty list"));
        }
        Ok(out)
    }
}

fn load_config(args: &SimulateArgs) -> Result<ExperimentConfig, Error> {
    let mut cfg = ExperimentConfig::from_file(&args.config)?;
    if let Some(tau) = args.tau {
        cfg.params.tau = tau;
    }
    if let Some(chi) = args.chi {
        cfg.params.chi = chi;
    }
    if let Some(n) = args.grid {
        cfg = cfg.with_grid_size(n)?;
    }
    if let Some(t) = args.t_final {
        cfg.t_final = t;
        cfg.step_control = invasim::timestep::StepControlConfig::for_final_time(t);
        cfg.snapshot_times.retain(|&s| s <= t + 1e-12);
        if !cfg.snapshot_times.iter().any(|&s| (s - t).abs() <= 1e-12) {
            cfg.snapshot_times.push(t);
        }
    }
    cfg.out_dir = args.out.clone();
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Simulate(args) => {
            let cfg = load_config(&args)?;
            let art = run_simulation(&cfg)?;
            let fm = metrics::front_metrics(&art.grid, &art.final_state, cfg.front_threshold);
            println!(
                "{}",
                serde_json::json!({
                    "status": "ok",
                    "steps": art.report.steps.len(),
                    "t_final": cfg.t_final,
                    "front_position": fm.front_position,
                    "front_height": fm.front_height,
                    "mass_c1": fm.mass_c1,
                    "mass_c2": fm.mass_c2,
                })
            );
        }
        Command::Eoc(args) => {
            let cfg = ExperimentConfig::from_file(&args.config)?;
            let study = eoc_study(&cfg, &args.levels)?;
            io::ensure_dir(&args.out)?;
            study.write_csv(&args.out.join("eoc.csv"))?;
            study.write_timing_csv(&args.out.join("timing.csv"))?;
            for (p, pair) in study.pairs.iter().enumerate() {
                for (c, comp) in invasim::harness::eoc::EOC_COMPONENTS.iter().enumerate() {
                    for (nrm, norm) in invasim::harness::eoc::EOC_NORMS.iter().enumerate() {
                        let order = if p == 0 {
                            "-".to_string()
                        } else {
                            format!("{:.4}", study.eoc[p - 1][c][nrm])
                        };
                        println!(
                            "{}x{}/{}x{} {comp} {norm}: error {:.6e} eoc {order}",
                            pair.n_coarse, pair.n_coarse, pair.n_fine, pair.n_fine,
                            pair.errors[c][nrm]
                        );
                    }
                }
            }
        }
        Command::Sweep(args) => {
            let cfg = ExperimentConfig::from_file(&args.config)?;
            let taus = parse_tau_list(&args.tau)?;
            let rows = sweep_tau(&cfg, &taus)?;
            io::ensure_dir(&args.out)?;
            write_sweep_csv(&args.out.join("sweep.csv"), &rows)?;
            for row in &rows {
                match (&row.metrics, &row.error) {
                    (Some(m), _) => println!(
                        "tau {}: front_position {:.6} front_height {:.6} mass_c2 {:.6}",
                        row.tau, m.front_position, m.front_height, m.mass_c2
                    ),
                    (None, Some(e)) => println!("tau {}: failed ({e})", row.tau),
                    _ => {}
                }
            }
            if rows.iter().any(|r| r.error.is_some()) {
                return Err(Error::Config("one or more sweep runs failed".into()));
            }
        }
        Command::Compare(args) => {
            let diffs = compare_runs(&args.run_a, &args.run_b)?;
            for d in diffs {
                for c in d.components {
                    println!(
                        "t {:.6}: {} linf {:.6e} l1 {:.6e}",
                        d.time, c.component, c.linf, c.l1
                    );
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            // machine-readable single error line on stderr
            eprintln!(
                "{}",
                serde_json::json!({ "status": "error", "message": e.to_string() })
            );
            ExitCode::FAILURE
        }
    }
}
