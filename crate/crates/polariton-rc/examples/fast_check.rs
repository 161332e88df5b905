//! Quick end-to-end sanity run: a single-photon-pumped quantum reservoir at
//! Fock dimension 10 on a small MNIST split, compared against the linear
//! classifier on the same split. Finishes in well under a minute.
//!
//!     cargo run --release --example fast_check

use polariton_rc::harness::config::{ExperimentConfig, Mode};
use polariton_rc::harness::sweeps::{baseline_on, prepare_dataset, quantum_sweep_on};
use polariton_rc::qreservoir::SchemeTag;

fn main() -> polariton_rc::Result<()> {
    let mut cfg = ExperimentConfig::default();
    cfg.mode = Mode::Quantum;
    cfg.scheme = SchemeTag::Sp;
    cfg.sizes = vec![10];
    cfg.realizations = 1;
    cfg.n_train = 300;
    cfg.n_test = 150;

    let data = prepare_dataset(&cfg)?;
    let records = quantum_sweep_on(&cfg, &data)?;
    let baseline = baseline_on(&cfg, &data)?;

    let rec = &records[0];
    println!();
    println!(
        "quantum SP reservoir, N = {}: test error {:.1}% ({} train / {} test images)",
        rec.size,
        100.0 * rec.mean_error,
        cfg.n_train,
        cfg.n_test
    );
    println!(
        "linear classifier, same split:  {:.1}% (unnormalized input)",
        100.0 * baseline.unnormalized_error
    );
    println!(
        "reservoir gain over baseline:   {:+.1} points",
        100.0 * (baseline.unnormalized_error - rec.mean_error)
    );
    println!();
    println!("This split is deliberately tiny; full-split runs use the CLI:");
    println!("  cargo run --release -- quantum-sweep --scheme sptp-prime --sizes 4,8,16");
    Ok(())
}
