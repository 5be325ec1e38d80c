use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use anyhow::{bail, Context as _, Result};
use clap::{Args, Parser, Subcommand};

use linjam::analytic::{optimal_pulsed_strategy, pe_at_phase, pe_phase_averaged, rho_grid, AnalyticQuery};
use linjam::channel::db_to_linear;
use linjam::harness::{format_g9, terminal_mean, write_log, Execution, Experiment, ExperimentConfig, Metric};
use linjam::signal::Scheme;

#[derive(Parser)]
#[command(name = "linjam", version, about = "Pulsed jamming simulator and bandit learners")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its CSV log plus JSON sidecar.
    Simulate(SimulateArgs),
    /// Closed-form SER tables, phase sweeps and pulsed-jamming optima.
    Analytic(AnalyticArgs),
    /// Re-run a config for several values of one parameter.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = "run.csv")]
    output: PathBuf,
    /// Run replications one after another instead of in parallel.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct AnalyticArgs {
    #[arg(long)]
    victim: Scheme,
    #[arg(long)]
    snr_db: f64,
    #[arg(long)]
    jnr_db: f64,
    /// Tabulate SER of the optimal strategy at N phase offsets over [0, 2π).
    #[arg(long, value_name = "N", conflicts_with = "optimal")]
    phase_sweep: Option<usize>,
    /// Print the optimal (scheme, ρ) only.
    #[arg(long)]
    optimal: bool,
    /// Duty-cycle grid {1/K, …, 1}.
    #[arg(long, value_name = "K", default_value_t = 100)]
    rho_grid: usize,
    #[arg(long, value_delimiter = ',', default_value = "BPSK,QPSK,AWGN")]
    schemes: Vec<Scheme>,
    /// Write the table here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    /// One of m_disc, snr_db, jnr_db, sample_scale, tau, horizon.
    #[arg(long)]
    param: String,
    #[arg(long, value_delimiter = ',', required = true)]
    values: Vec<String>,
    #[arg(long, default_value = ".")]
    output_dir: PathBuf,
    /// Steps in the terminal window of the printed summary.
    #[arg(long, default_value_t = 1000)]
    window: usize,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Simulate(args) => simulate(args),
        Command::Analytic(args) => analytic(args),
        Command::Sweep(args) => sweep(args),
    }
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn simulate(args: SimulateArgs) -> Result<()> {
    let cfg = ExperimentConfig::load(&args.config)?;
    if args.output.with_extension("json") == args.config {
        bail!("the sidecar of {} would overwrite the config file", args.output.display());
    }
    let experiment = Experiment::new(cfg.clone())?;
    let records = experiment.run(execution(args.sequential))?;
    write_log(&records, &cfg, &args.output)?;
    let ser = terminal_mean(&records, 1000, Metric::Ser).unwrap_or(0.0);
    eprintln!(
        "{} records -> {} (terminal mean SER over last 1000 steps: {})",
        records.len(),
        args.output.display(),
        format_g9(ser)
    );
    Ok(())
}

fn analytic(args: AnalyticArgs) -> Result<()> {
    if args.rho_grid == 0 {
        bail!("--rho-grid must be at least 1");
    }
    let snr = db_to_linear(args.snr_db);
    let jnr = db_to_linear(args.jnr_db);
    let grid = rho_grid(args.rho_grid);
    let mut out = String::new();

    if args.optimal || args.phase_sweep.is_some() {
        let opt = optimal_pulsed_strategy(args.victim, snr, jnr, &grid, &args.schemes)?;
        match args.phase_sweep {
            None => {
                out.push_str("victim,snr_db,jnr_db,scheme,rho_star,on_jnr_db,expected_ser\n");
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    args.victim,
                    format_g9(args.snr_db),
                    format_g9(args.jnr_db),
                    opt.jammer_scheme,
                    format_g9(opt.rho_star),
                    format_g9(10.0 * opt.on_power(jnr).log10()),
                    format_g9(opt.expected_ser)
                ));
            }
            Some(n) => {
                if n == 0 {
                    bail!("--phase-sweep needs at least one point");
                }
                let q = AnalyticQuery {
                    victim_scheme: args.victim,
                    jammer_scheme: opt.jammer_scheme,
                    snr_linear: snr,
                    jnr_linear: jnr,
                    rho: opt.rho_star,
                };
                eprintln!(
                    "optimal strategy: {} at rho = {}",
                    opt.jammer_scheme,
                    format_g9(opt.rho_star)
                );
                out.push_str("phi,ser\n");
                for k in 0..n {
                    let phi = std::f64::consts::TAU * k as f64 / n as f64;
                    out.push_str(&format!("{},{}\n", format_g9(phi), format_g9(pe_at_phase(&q, phi)?)));
                }
            }
        }
    } else {
        out.push_str("scheme,rho,ser\n");
        for &scheme in &args.schemes {
            for &rho in &grid {
                let q = AnalyticQuery {
                    victim_scheme: args.victim,
                    jammer_scheme: scheme,
                    snr_linear: snr,
                    jnr_linear: jnr,
                    rho,
                };
                out.push_str(&format!("{scheme},{},{}\n", format_g9(rho), format_g9(pe_phase_averaged(&q)?)));
            }
        }
    }

    match args.output {
        Some(path) => fs::write(&path, out).with_context(|| format!("writing {}", path.display()))?,
        None => io::stdout().write_all(out.as_bytes())?,
    }
    Ok(())
}

fn apply_param(cfg: &mut ExperimentConfig, param: &str, value: &str) -> Result<()> {
    let num = || value.parse::<f64>().with_context(|| format!("{param}: `{value}` is not a number"));
    match param {
        "m_disc" => cfg.action_cfg.m_disc = value.parse().with_context(|| format!("m_disc: `{value}`"))?,
        "horizon" => cfg.horizon = value.parse().with_context(|| format!("horizon: `{value}`"))?,
        "snr_db" => cfg.channel.snr_db = num()?,
        "sample_scale" => cfg.sample_scale = num()?,
        "tau" => cfg.tau = num()?,
        "jnr_db" => match &mut cfg.action_cfg.jnr_mode {
            linjam::bandit::JnrMode::Fixed { jnr_db } => *jnr_db = num()?,
            linjam::bandit::JnrMode::Range { .. } => bail!("jnr_db sweep needs a fixed-JNR config"),
        },
        other => bail!("unsupported sweep parameter `{other}`"),
    }
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<()> {
    let base = ExperimentConfig::load(&args.config)?;
    fs::create_dir_all(&args.output_dir).with_context(|| format!("creating {}", args.output_dir.display()))?;
    println!("{},learner,terminal_ser,terminal_per,log", args.param);
    for value in &args.values {
        let mut cfg = base.clone();
        apply_param(&mut cfg, &args.param, value)?;
        let records = Experiment::new(cfg.clone())?.run(Execution::Parallel)?;
        let path = args
            .output_dir
            .join(format!("sweep_{}_{}_{}.csv", cfg.learner, args.param, value));
        write_log(&records, &cfg, &path)?;
        println!(
            "{value},{},{},{},{}",
            cfg.learner,
            format_g9(terminal_mean(&records, args.window, Metric::Ser).unwrap_or(0.0)),
            format_g9(terminal_mean(&records, args.window, Metric::PacketError).unwrap_or(0.0)),
            path.display()
        );
    }
    Ok(())
}
