//! Phase-space portraits of the four pump schemes: evolve the vacuum under a
//! constant pump for one interval τ at a weak and a strong amplitude, and
//! render each Wigner field as a PNG heatmap (red positive, blue negative)
//! with a CSV of the raw values alongside.
//!
//!     cargo run --release --example wigner_plot

use std::path::PathBuf;

use polariton_rc::fock::ModelParams;
use polariton_rc::harness::plots::{render_scheme_wigner, wigner_csv, wigner_png};
use polariton_rc::lindblad::IntegratorConfig;
use polariton_rc::qreservoir::SchemeTag;
use polariton_rc::wigner::PhaseSpaceGrid;

fn main() -> polariton_rc::Result<()> {
    let params = ModelParams::default();
    let icfg = IntegratorConfig::default_for(&params);
    // Odd point count so the grid samples the exact origin.
    let grid = PhaseSpaceGrid::new(81, 81, 4.0, 4.0)?;
    let dim = 24;

    let out_dir = PathBuf::from("out/examples/wigner");
    std::fs::create_dir_all(&out_dir).map_err(|e| polariton_rc::Error::io(&out_dir, e))?;

    for (tag, name) in [
        (SchemeTag::Sp, "sp"),
        (SchemeTag::Tp, "tp"),
        (SchemeTag::Sptp, "sptp"),
        (SchemeTag::SptpPrime, "sptp-prime"),
    ] {
        for (strength, level) in [(0.25, "weak"), (0.75, "strong")] {
            let sample = render_scheme_wigner(tag, strength, &params, dim, &grid, &icfg)?;
            let stem = format!("{name}-{level}");
            wigner_png(&sample, &out_dir.join(format!("{stem}.png")), 6)?;
            wigner_csv(&sample, &out_dir.join(format!("{stem}.csv")))?;

            let (min, max) = sample
                .values
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                    (lo.min(v), hi.max(v))
                });
            println!("{stem:>18}: W in [{min:+.4}, {max:+.4}]");
        }
    }

    println!();
    println!("portraits under {}", out_dir.display());
    println!("single-photon pumping displaces the Gaussian; two-photon pumping");
    println!("squeezes it in place; the primed scheme rotates the squeezing axis.");
    Ok(())
}
