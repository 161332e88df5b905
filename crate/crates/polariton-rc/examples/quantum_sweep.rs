//! Error rate versus Fock dimension for the quantum reservoir, small-split
//! edition: sweeps N ∈ {4, 8, 12} with two input-mask realizations each,
//! persists the records (JSON + CSV) and renders the error curve as SVG.
//!
//!     cargo run --release --example quantum_sweep

use polariton_rc::harness::config::{ExperimentConfig, Mode};
use polariton_rc::harness::plots::plot_error_curves;
use polariton_rc::harness::record::write_records;
use polariton_rc::harness::sweeps::run_quantum_sweep;
use polariton_rc::qreservoir::SchemeTag;

fn main() -> polariton_rc::Result<()> {
    let mut cfg = ExperimentConfig::default();
    cfg.mode = Mode::Quantum;
    cfg.scheme = SchemeTag::SptpPrime;
    cfg.sizes = vec![4, 8, 12];
    cfg.realizations = 2;
    cfg.n_train = 400;
    cfg.n_test = 200;
    cfg.out_dir = "out/examples".into();

    let records = run_quantum_sweep(&cfg)?;
    let (json, csv) = write_records(&cfg.out_dir, "quantum-sweep-demo", &records)?;
    let svg = cfg.out_dir.join("quantum-sweep-demo.svg");
    plot_error_curves(
        &records,
        "Quantum reservoir (SPTP', small split)",
        "Fock dimension N",
        &svg,
    )?;

    println!();
    for rec in &records {
        println!(
            "N = {:>2}: best {:.1}%, mean {:.1}% over {} realizations",
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
