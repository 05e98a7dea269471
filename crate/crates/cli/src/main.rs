//! Command-line front end: solve single operating points, run the Monte
//! Carlo speed sweeps and estimator comparisons, and emit ergodic mode
//! maps as CSV (plus SVG charts for the sweeps).

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use bitjoule::harness::{
    emit_plot, load_config, run_estimator_comparison, run_mode_map, run_single, run_speed_sweep,
    write_mode_map_csv, write_single_csv, write_sweep_csv, RunConfig,
};
use bitjoule::linkcap::Mode;
use bitjoule::modeswitch::{enumerate_modes, Estimator};

#[derive(Parser)]
#[command(
    name = "bitjoule",
    version,
    about = "Bits-per-Joule link adaptation simulator for the multi-antenna downlink"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Config file with `key = value` lines; every key has a default.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override run.seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override run.trials.
    #[arg(long)]
    trials: Option<usize>,
    /// Override run.estimator (zhang|lower|upper|optimal).
    #[arg(long)]
    estimator: Option<String>,
    /// Additional config overrides, e.g. --set scenario.speed_kmh=50.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// Directory for CSV/SVG outputs.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve one mode's ergodic operating point at one (distance, speed).
    Single {
        #[command(flatten)]
        common: Common,
        /// Mode label: simo, su-MxN or mu-MxNxK.
        #[arg(long, default_value = "simo")]
        mode: String,
        #[arg(long, default_value_t = 1.0)]
        distance: f64,
        /// Speed in km/h; defaults to the configured scenario speed.
        #[arg(long)]
        speed: Option<f64>,
    },
    /// Mean achieved efficiency of each mode across speeds.
    SweepSpeed {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "3,30,60,90,120")]
        speeds: String,
        #[arg(long, default_value_t = 1.0)]
        distance: f64,
    },
    /// The speed sweep with all four estimators side by side.
    Estimators {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "3,30,60,90,120")]
        speeds: String,
        #[arg(long, default_value_t = 1.0)]
        distance: f64,
    },
    /// Ergodic mode decision over a (speed, distance) grid.
    ModeMap {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "3,30,60,90,120")]
        speeds: String,
        #[arg(long, default_value = "0.5,1.0,1.5,2.0,2.5,3.0")]
        distances: String,
    },
}

fn load(common: &Common) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => load_config(path).with_context(|| format!("loading {}", path.display()))?,
        None => RunConfig::default(),
    };
    for kv in &common.sets {
        let (key, value) = kv
            .split_once('=')
            .with_context(|| format!("--set needs KEY=VALUE, got '{kv}'"))?;
        cfg.apply_kv(key.trim(), value.trim())?;
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = common.trials {
        cfg.trials = trials;
    }
    if let Some(est) = &common.estimator {
        cfg.estimator = Estimator::parse(est)?;
    }
    Ok(cfg.finalize()?)
}

fn parse_mode(s: &str, n_default: usize) -> Result<Mode> {
    let t = s.trim().to_ascii_lowercase();
    if t == "simo" {
        return Ok(Mode::svd(1, n_default));
    }
    let dims = |rest: &str| -> Result<Vec<usize>> {
        rest.split('x')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .context("mode dimensions must be integers")
            })
            .collect()
    };
    if let Some(rest) = t.strip_prefix("su-") {
        let d = dims(rest)?;
        if d.len() != 2 {
            bail!("single-user modes are su-MxN");
        }
        return Ok(Mode::svd(d[0], d[1]));
    }
    if let Some(rest) = t.strip_prefix("mu-") {
        let d = dims(rest)?;
        if d.len() != 3 {
            bail!("multi-user modes are mu-MxNxK");
        }
        return Ok(Mode::bd(d[0], d[2], d[1]));
    }
    bail!("unrecognized mode '{s}' (expected simo, su-MxN or mu-MxNxK)")
}

fn parse_grid(s: &str, what: &str) -> Result<Vec<f64>> {
    let values: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("{what} must be a comma-separated list of numbers"))?;
    if values.is_empty() {
        bail!("{what} must not be empty");
    }
    Ok(values)
}

fn out_dir(common: &Common) -> Result<Option<PathBuf>> {
    match &common.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)
                .with_context(|| format!("creating output directory {}", dir.display()))?;
            Ok(Some(dir.clone()))
        }
        None => Ok(None),
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Single {
            common,
            mode,
            distance,
            speed,
        } => {
            let cfg = load(&common)?;
            let mode = parse_mode(&mode, cfg.n)?;
            let speed = speed.unwrap_or(cfg.scenario.speed_kmh);
            let row = run_single(&cfg, &mode, distance, speed)?;
            println!("mode           {}", row.mode.label());
            println!("distance_km    {distance:.6e}");
            println!("speed_kmh      {speed:.6e}");
            println!("w_hz           {:.6e}", row.op.w_hz);
            println!("p_t_w          {:.6e}", row.op.p_t_w);
            println!("capacity_bps   {:.6e}", row.op.capacity_bps);
            println!("total_power_w  {:.6e}", row.op.total_power_w);
            println!("xi_bpj         {:.6e}", row.op.xi_bpj);
            if let Some(dir) = out_dir(&common)? {
                let path = dir.join("single.csv");
                write_single_csv(&row, &path)?;
                println!("wrote {}", path.display());
            }
        }
        Cmd::SweepSpeed {
            common,
            speeds,
            distance,
        } => {
            let cfg = load(&common)?;
            let speeds = parse_grid(&speeds, "--speeds")?;
            let modes = enumerate_modes(cfg.m, cfg.n, cfg.k, cfg.catalog)?;
            let result = run_speed_sweep(&cfg, &speeds, distance, &modes)?;
            println!(
                "sweep-speed: {} rows ({} speeds x {} modes, {} trials)",
                result.rows.len(),
                speeds.len(),
                modes.modes.len(),
                cfg.trials
            );
            if let Some(dir) = out_dir(&common)? {
                let csv = dir.join("speed_sweep.csv");
                write_sweep_csv(&result, &csv)?;
                println!("wrote {}", csv.display());
                let svg = dir.join("speed_sweep.svg");
                emit_plot(&result, &svg)?;
                println!("wrote {}", svg.display());
            }
        }
        Cmd::Estimators {
            common,
            speeds,
            distance,
        } => {
            let cfg = load(&common)?;
            let speeds = parse_grid(&speeds, "--speeds")?;
            let modes = enumerate_modes(cfg.m, cfg.n, cfg.k, cfg.catalog)?;
            let result = run_estimator_comparison(&cfg, &speeds, distance, &modes)?;
            println!(
                "estimators: {} rows ({} speeds x {} modes x 4 estimators, {} trials)",
                result.rows.len(),
                speeds.len(),
                modes.modes.len(),
                cfg.trials
            );
            if let Some(dir) = out_dir(&common)? {
                let csv = dir.join("estimator_comparison.csv");
                write_sweep_csv(&result, &csv)?;
                println!("wrote {}", csv.display());
                let svg = dir.join("estimator_comparison.svg");
                emit_plot(&result, &svg)?;
                println!("wrote {}", svg.display());
            }
        }
        Cmd::ModeMap {
            common,
            speeds,
            distances,
        } => {
            let cfg = load(&common)?;
            let speeds = parse_grid(&speeds, "--speeds")?;
            let distances = parse_grid(&distances, "--distances")?;
            let modes = enumerate_modes(cfg.m, cfg.n, cfg.k, cfg.catalog)?;
            let rows = run_mode_map(&cfg, &speeds, &distances, &modes)?;
            println!("mode-map: {} cells", rows.len());
            for row in &rows {
                println!(
                    "v={:<6} d={:<5} -> {:<14} p_t={:.3e} xi={:.3e}",
                    row.speed_kmh,
                    row.distance_km,
                    row.mode.label(),
                    row.op.p_t_w,
                    row.op.xi_bpj
                );
            }
            if let Some(dir) = out_dir(&common)? {
                let path = dir.join("mode_map.csv");
                write_mode_map_csv(&rows, &path)?;
                println!("wrote {}", path.display());
            }
        }
    }
    Ok(())
}
