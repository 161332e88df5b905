//! Command-line front end: thin argument handling over the library harness.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use polariton_rc::harness::appendix::{run_appendix_b, AppendixGrids};
use polariton_rc::harness::compare::{build_comparison, DEFAULT_THRESHOLDS};
use polariton_rc::harness::config::{ExperimentConfig, Mode};
use polariton_rc::harness::plots;
use polariton_rc::harness::record::{read_records, write_records};
use polariton_rc::harness::sweeps::{
    run_baseline, run_classical_sweep, run_quantum_sweep, write_baseline,
};
use polariton_rc::qreservoir::SchemeTag;
use polariton_rc::{Error, Result};

#[derive(Parser)]
#[command(
    name = "polariton-rc",
    version,
    about = "Quantum Kerr-mode reservoir vs classical polariton lattice on downsampled MNIST"
)]
struct Cli {
    /// TOML experiment file; command-line flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Master seed for every derived random stream.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory for result files and figures.
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,
    /// Directory holding the four MNIST IDX files.
    #[arg(long, global = true, value_name = "DIR")]
    data_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct SweepArgs {
    /// Comma-separated reservoir sizes (Fock levels N or lattice modes N_c).
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Pump scheme: sp, tp, sptp, sptp-prime.
    #[arg(long)]
    scheme: Option<SchemeTag>,
    #[arg(long)]
    realizations: Option<u64>,
    #[arg(long)]
    train: Option<usize>,
    #[arg(long)]
    test: Option<usize>,
    /// Input-weight bound (defaults to the calibrated per-scheme value).
    #[arg(long)]
    w_in_max: Option<f64>,
    /// Phase-encoding range for SPTP′.
    #[arg(long)]
    theta_max: Option<f64>,
    /// Detuning-fluctuation strength δ.
    #[arg(long)]
    detuning: Option<f64>,
    /// Classical coupling bound K_max (defaults to γ).
    #[arg(long)]
    k_max: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    /// Phase-space grid points per axis.
    #[arg(long)]
    grid_points: Option<usize>,
    /// Phase-space half range L (grid spans [−L, L]²).
    #[arg(long)]
    grid_range: Option<f64>,
    /// Integrator steps per pixel interval.
    #[arg(long)]
    steps: Option<usize>,
    /// Ridge coefficient β (defaults to the trace-scaled value).
    #[arg(long)]
    beta: Option<f64>,
    /// Output file stem.
    #[arg(long)]
    stem: Option<String>,
}

#[derive(Args)]
struct AppendixArgs {
    /// Fock dimension of the scanned reservoir.
    #[arg(long, default_value_t = 10)]
    size: usize,
    #[arg(long, default_value_t = 1000)]
    train: usize,
    #[arg(long, default_value_t = 500)]
    test: usize,
    #[arg(long, default_value_t = 3)]
    realizations: u64,
    /// Input-amplitude scan values (units of γ applied afterwards).
    #[arg(long, value_delimiter = ',')]
    w_in_grid: Option<Vec<f64>>,
    /// Kerr-strength scan values.
    #[arg(long, value_delimiter = ',')]
    alpha_grid: Option<Vec<f64>>,
    /// Fluctuation strength of the noisy run.
    #[arg(long)]
    detuning: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
}

#[derive(Args)]
struct BaselineArgs {
    #[arg(long)]
    train: Option<usize>,
    #[arg(long)]
    test: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
}

#[derive(Args)]
struct WignerArgs {
    /// Pump scheme: sp, tp, sptp, sptp-prime.
    #[arg(long, default_value = "sp")]
    scheme: SchemeTag,
    /// Constant pump strength over one interval τ.
    #[arg(long, default_value_t = 0.5)]
    strength: f64,
    /// Fock truncation of the rendered state.
    #[arg(long, default_value_t = 16)]
    dim: usize,
    /// Grid points per axis (odd values sample the origin).
    #[arg(long, default_value_t = 81)]
    grid_points: usize,
    #[arg(long, default_value_t = 5.0)]
    grid_range: f64,
    /// Also write the x,p,w CSV.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct CompareArgs {
    /// Quantum sweep record file (JSON).
    #[arg(long, value_name = "FILE")]
    quantum: PathBuf,
    /// Classical sweep record file (JSON).
    #[arg(long, value_name = "FILE")]
    classical: PathBuf,
    /// Error thresholds for the table rows.
    #[arg(long, value_delimiter = ',')]
    thresholds: Option<Vec<f64>>,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the quantum Kerr-mode reservoir over Fock dimensions.
    QuantumSweep(SweepArgs),
    /// Sweep the classical DNLS lattice over mode counts.
    ClassicalSweep(SweepArgs),
    /// Linear classifier on the raw 16-value signals.
    Baseline(BaselineArgs),
    /// Robustness scans: input amplitude, Kerr strength, detuning noise.
    AppendixB(AppendixArgs),
    /// Render the Wigner field of a pump scheme at one strength.
    WignerPlot(WignerArgs),
    /// Build the resource-comparison table from two sweep outputs.
    Compare(CompareArgs),
}

fn base_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.master_seed = seed;
    }
    if let Some(threads) = cli.threads {
        cfg.threads = threads;
    }
    if let Some(dir) = &cli.out_dir {
        cfg.out_dir = dir.clone();
    }
    if let Some(dir) = &cli.data_dir {
        cfg.data_dir = Some(dir.clone());
    }
    Ok(cfg)
}

fn apply_sweep_args(cfg: &mut ExperimentConfig, args: &SweepArgs) {
    if let Some(sizes) = &args.sizes {
        cfg.sizes = sizes.clone();
    }
    if let Some(s) = args.scheme {
        cfg.scheme = s;
    }
    if let Some(v) = args.realizations {
        cfg.realizations = v;
    }
    if let Some(v) = args.train {
        cfg.n_train = v;
    }
    if let Some(v) = args.test {
        cfg.n_test = v;
    }
    if args.w_in_max.is_some() {
        cfg.w_in_max = args.w_in_max;
    }
    if let Some(v) = args.theta_max {
        cfg.theta_max = v;
    }
    if let Some(v) = args.detuning {
        cfg.detuning = v;
    }
    if args.k_max.is_some() {
        cfg.k_max = args.k_max;
    }
    if let Some(v) = args.delta {
        cfg.delta = v;
    }
    if let Some(v) = args.alpha {
        cfg.alpha = v;
    }
    if let Some(v) = args.gamma {
        cfg.gamma = v;
    }
    if let Some(v) = args.tau {
        cfg.tau = v;
    }
    if let Some(v) = args.grid_points {
        cfg.grid_points = v;
    }
    if let Some(v) = args.grid_range {
        cfg.grid_half_range = v;
    }
    if let Some(v) = args.steps {
        cfg.steps_per_interval = v;
    }
    if args.beta.is_some() {
        cfg.beta = args.beta;
    }
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    let mut cfg = base_config(&cli)?;
    match &cli.command {
        Command::QuantumSweep(args) => {
            cfg.mode = Mode::Quantum;
            apply_sweep_args(&mut cfg, args);
            let records = run_quantum_sweep(&cfg)?;
            let stem = args.stem.as_deref().unwrap_or("quantum");
            let (json, csv) = write_records(&cfg.out_dir, stem, &records)?;
            plots::plot_error_curves(
                &records,
                &format!("quantum reservoir, {} scheme", cfg.scheme),
                "Fock dimension N",
                &cfg.out_dir.join(format!("{stem}.svg")),
            )?;
            for rec in &records {
                println!(
                    "N={:<4} best {:.4}  mean {:.4}",
                    rec.size, rec.best_error, rec.mean_error
                );
            }
            println!("wrote {} and {}", json.display(), csv.display());
        }
        Command::ClassicalSweep(args) => {
            cfg.mode = Mode::Classical;
            apply_sweep_args(&mut cfg, args);
            let records = run_classical_sweep(&cfg)?;
            let stem = args.stem.as_deref().unwrap_or("classical");
            let (json, csv) = write_records(&cfg.out_dir, stem, &records)?;
            plots::plot_error_curves(
                &records,
                "classical DNLS lattice",
                "lattice modes N_c",
                &cfg.out_dir.join(format!("{stem}.svg")),
            )?;
            for rec in &records {
                println!(
                    "N_c={:<4} best {:.4}  mean {:.4}",
                    rec.size, rec.best_error, rec.mean_error
                );
            }
            println!("wrote {} and {}", json.display(), csv.display());
        }
        Command::Baseline(args) => {
            cfg.mode = Mode::LinearBaseline;
            if let Some(v) = args.train {
                cfg.n_train = v;
            }
            if let Some(v) = args.test {
                cfg.n_test = v;
            }
            if args.beta.is_some() {
                cfg.beta = args.beta;
            }
            let report = run_baseline(&cfg)?;
            let path = write_baseline(&cfg.out_dir, "baseline", &report)?;
            println!(
                "baseline error: normalized {:.4}, unnormalized {:.4} ({} train / {} test)",
                report.normalized_error, report.unnormalized_error, cfg.n_train, cfg.n_test
            );
            println!("wrote {}", path.display());
        }
        Command::AppendixB(args) => {
            cfg.mode = Mode::Quantum;
            cfg.scheme = SchemeTag::Sp;
            cfg.sizes = vec![args.size];
            cfg.n_train = args.train;
            cfg.n_test = args.test;
            cfg.realizations = args.realizations;
            if let Some(v) = args.steps {
                cfg.steps_per_interval = v;
            }
            let mut grids = AppendixGrids::default_for(cfg.gamma);
            if let Some(values) = &args.w_in_grid {
                grids.w_in_values = values.clone();
            }
            if let Some(values) = &args.alpha_grid {
                grids.alpha_values = values.clone();
            }
            if let Some(d) = args.detuning {
                grids.detuning = d;
            }
            let report = run_appendix_b(&cfg, &grids)?;
            std::fs::create_dir_all(&cfg.out_dir).map_err(|e| Error::io(&cfg.out_dir, e))?;
            let path = cfg.out_dir.join("appendix-b.json");
            report.save(&path)?;
            plots::plot_scan(
                &report.w_in_scan,
                "error vs input-weight bound",
                "W_in_max",
                &cfg.out_dir.join("appendix-b-w-in.svg"),
            )?;
            plots::plot_scan(
                &report.alpha_scan,
                "error vs Kerr strength (fixed mask)",
                "alpha",
                &cfg.out_dir.join("appendix-b-alpha.svg"),
            )?;
            for p in &report.w_in_scan {
                println!("W_in_max={:<6} best {:.4}  mean {:.4}", p.value, p.best_error, p.mean_error);
            }
            for p in &report.alpha_scan {
                println!("alpha={:<6} best {:.4}  mean {:.4}", p.value, p.best_error, p.mean_error);
            }
            println!(
                "detuning δ={}: clean mean {:.4} vs noisy mean {:.4}",
                report.detuning_pair.delta,
                report.detuning_pair.clean_mean_error,
                report.detuning_pair.noisy_mean_error
            );
            println!("wrote {}", path.display());
        }
        Command::WignerPlot(args) => {
            let params = cfg.model_params();
            let grid = polariton_rc::wigner::PhaseSpaceGrid::new(
                args.grid_points,
                args.grid_points,
                args.grid_range,
                args.grid_range,
            )?;
            let icfg = cfg.integrator();
            let sample =
                plots::render_scheme_wigner(args.scheme, args.strength, &params, args.dim, &grid, &icfg)?;
            std::fs::create_dir_all(&cfg.out_dir).map_err(|e| Error::io(&cfg.out_dir, e))?;
            let tag = format!("{}", args.scheme)
                .to_ascii_lowercase()
                .replace('\'', "-prime");
            let png = cfg.out_dir.join(format!("wigner-{tag}-{}.png", args.strength));
            plots::wigner_png(&sample, &png, 8)?;
            let (x, p) = sample.max_location();
            let (vx, vp) = sample.quadrature_variances();
            println!(
                "W max at ({x:.3}, {p:.3}); Var x {vx:.4}, Var p {vp:.4}; ∫W = {:.4}",
                sample.integral()
            );
            println!("wrote {}", png.display());
            if args.csv {
                let csv = png.with_extension("csv");
                plots::wigner_csv(&sample, &csv)?;
                println!("wrote {}", csv.display());
            }
        }
        Command::Compare(args) => {
            let quantum = read_records(&args.quantum)?;
            let classical = read_records(&args.classical)?;
            let thresholds = args
                .thresholds
                .clone()
                .unwrap_or_else(|| DEFAULT_THRESHOLDS.to_vec());
            let table = build_comparison(&quantum, &classical, &thresholds)?;
            print!("{}", table.render());
            std::fs::create_dir_all(&cfg.out_dir).map_err(|e| Error::io(&cfg.out_dir, e))?;
            let path = cfg.out_dir.join("comparison.json");
            table.save(&path)?;
            println!("wrote {}", path.display());
            // A table whose rows are all unbounded has nothing to draw.
            match plots::plot_comparison(&table, &cfg.out_dir.join("comparison.svg")) {
                Ok(()) => println!("wrote {}", cfg.out_dir.join("comparison.svg").display()),
                Err(e) => println!("figure skipped: {e}"),
            }
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
