//! Error rate versus lattice size for the classical reservoir: a square
//! lattice of nonlinear polariton modes driven by the masked input signals,
//! read out through the mode intensities |ψ_n(τ)|². Small split, three
//! lattice realizations per size.
//!
//!     cargo run --release --example classical_sweep

use polariton_rc::harness::config::{ExperimentConfig, Mode};
use polariton_rc::harness::plots::plot_error_curves;
use polariton_rc::harness::record::write_records;
use polariton_rc::harness::sweeps::run_classical_sweep;

fn main() -> polariton_rc::Result<()> {
    let mut cfg = ExperimentConfig::default();
    cfg.mode = Mode::Classical;
    cfg.sizes = vec![16, 64, 100];
    cfg.realizations = 3;
    cfg.n_train = 400;
    cfg.n_test = 200;
    cfg.out_dir = "out/examples".into();

    let records = run_classical_sweep(&cfg)?;
    let (json, csv) = write_records(&cfg.out_dir, "classical-sweep-demo", &records)?;
    let svg = cfg.out_dir.join("classical-sweep-demo.svg");
    plot_error_curves(
        &records,
        "Classical lattice reservoir (small split)",
        "lattice modes N_c",
        &svg,
    )?;

    println!();
    for rec in &records {
        println!(
            "N_c = {:>3}: best {:.1}%, mean {:.1}% over {} realizations",
            rec.size,
            100.0 * rec.best_error,
            100.0 * rec.mean_error,
            rec.realizations.len()
        );
    }
    println!();
    println!("records:  {}", json.display());
    println!("errors:   {}", csv.display());
    println!("figure:   {}", svg.display());
    Ok(())
}
