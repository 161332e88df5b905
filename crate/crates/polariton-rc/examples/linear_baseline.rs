//! Linear-classifier reference point: ridge regression on the 16 compressed
//! pixel values alone (design matrix [1, u]), full 4000/1000 split, reported
//! for raw and per-sample unit-norm inputs. Every reservoir result in this
//! project is judged against these two numbers.
//!
//!     cargo run --release --example linear_baseline

use polariton_rc::harness::config::{ExperimentConfig, Mode};
use polariton_rc::harness::sweeps::{run_baseline, write_baseline};

fn main() -> polariton_rc::Result<()> {
    let mut cfg = ExperimentConfig::default();
    cfg.mode = Mode::LinearBaseline;
    cfg.out_dir = "out/examples".into();

    let report = run_baseline(&cfg)?;
    let path = write_baseline(&cfg.out_dir, "linear-baseline", &report)?;

    println!(
        "linear baseline on {} train / {} test images (seed {}):",
        report.n_train, report.n_test, cfg.master_seed
    );
    println!("  raw signals        {:.1}% error", 100.0 * report.unnormalized_error);
    println!("  unit-norm signals  {:.1}% error", 100.0 * report.normalized_error);
    println!("report written to {}", path.display());
    Ok(())
}
