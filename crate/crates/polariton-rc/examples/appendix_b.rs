//! Robustness scans of the quantum reservoir at fixed size N = 10, SP
//! scheme, reduced split: input-weight amplitude, Kerr strength (mask held
//! fixed), and a detuning-fluctuation on/off pair. Writes the report JSON
//! and one SVG per scan.
//!
//!     cargo run --release --example appendix_b

use polariton_rc::harness::appendix::{run_appendix_b, AppendixGrids};
use polariton_rc::harness::config::{ExperimentConfig, Mode};
use polariton_rc::harness::plots::plot_scan;
use polariton_rc::qreservoir::SchemeTag;

fn main() -> polariton_rc::Result<()> {
    let mut cfg = ExperimentConfig::default();
    cfg.mode = Mode::Quantum;
    cfg.scheme = SchemeTag::Sp;
    cfg.sizes = vec![10];
    cfg.realizations = 2;
    cfg.n_train = 300;
    cfg.n_test = 150;
    cfg.out_dir = "out/examples".into();

    // Shortened grids so the example stays fast; the CLI `appendix-b`
    // subcommand runs the full defaults.
    let mut grids = AppendixGrids::default_for(cfg.gamma);
    grids.w_in_values.truncate(3);
    grids.alpha_values = vec![0.05, 0.2];

    let report = run_appendix_b(&cfg, &grids)?;

    std::fs::create_dir_all(&cfg.out_dir)
        .map_err(|e| polariton_rc::Error::io(&cfg.out_dir, e))?;
    report.save(&cfg.out_dir.join("appendix-b-demo.json"))?;
    plot_scan(
        &report.w_in_scan,
        "Error vs input-weight amplitude",
        "W_in_max / gamma",
        &cfg.out_dir.join("appendix-b-demo-w-in.svg"),
    )?;
    plot_scan(
        &report.alpha_scan,
        "Error vs Kerr strength (fixed mask)",
        "alpha / gamma",
        &cfg.out_dir.join("appendix-b-demo-alpha.svg"),
    )?;

    println!();
    println!("input-amplitude scan (mean error):");
    for p in &report.w_in_scan {
        println!("  W_in_max = {:>4.2}  ->  {:.1}%", p.value, 100.0 * p.mean_error);
    }
    println!("Kerr scan, fixed mask (mean error):");
    for p in &report.alpha_scan {
        println!("  alpha    = {:>5.3}  ->  {:.1}%", p.value, 100.0 * p.mean_error);
    }
    let d = &report.detuning_pair;
    println!(
        "detuning fluctuation delta = {:.2}: clean {:.1}% vs noisy {:.1}% ({:+.1} points)",
        d.delta,
        100.0 * d.clean_mean_error,
        100.0 * d.noisy_mean_error,
        100.0 * (d.noisy_mean_error - d.clean_mean_error)
    );
    println!();
    println!("report and figures under {}", cfg.out_dir.display());
    Ok(())
}
