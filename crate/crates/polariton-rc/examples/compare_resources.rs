//! Quantum-versus-classical resource comparison: run both sweeps on one
//! small split, then tabulate, for each error threshold, the smallest Fock
//! dimension (as effective qubits log₂N) and the smallest lattice mode count
//! whose mean error reaches it.
//!
//!     cargo run --release --example compare_resources

use polariton_rc::harness::compare::build_comparison;
use polariton_rc::harness::config::{ExperimentConfig, Mode};
use polariton_rc::harness::plots::plot_comparison;
use polariton_rc::harness::sweeps::{classical_sweep_on, prepare_dataset, quantum_sweep_on};
use polariton_rc::qreservoir::SchemeTag;

fn main() -> polariton_rc::Result<()> {
    let mut qcfg = ExperimentConfig::default();
    qcfg.mode = Mode::Quantum;
    qcfg.scheme = SchemeTag::SptpPrime;
    qcfg.sizes = vec![4, 8, 12];
    qcfg.realizations = 2;
    qcfg.n_train = 400;
    qcfg.n_test = 200;

    let mut ccfg = qcfg.clone();
    ccfg.mode = Mode::Classical;
    ccfg.sizes = vec![16, 64, 100];

    let data = prepare_dataset(&qcfg)?;
    eprintln!("quantum side:");
    let quantum = quantum_sweep_on(&qcfg, &data)?;
    eprintln!("classical side:");
    let classical = classical_sweep_on(&ccfg, &data)?;

    // Thresholds matched to what a small split can reach; the CLI `compare`
    // subcommand applies the headline defaults to full-split records.
    let table = build_comparison(&quantum, &classical, &[0.40, 0.35, 0.30, 0.25])?;

    let out_dir = std::path::PathBuf::from("out/examples");
    std::fs::create_dir_all(&out_dir).map_err(|e| polariton_rc::Error::io(&out_dir, e))?;
    table.save(&out_dir.join("compare-demo.json"))?;
    plot_comparison(&table, &out_dir.join("compare-demo.svg"))?;

    println!();
    print!("{}", table.render());
    println!();
    println!("table and figure under {}", out_dir.display());
    Ok(())
}
