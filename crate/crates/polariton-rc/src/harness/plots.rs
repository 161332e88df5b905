//! Figure reproduction: error-rate curves and the resource-comparison chart
//! as SVG line plots, and Wigner fields as PNG heatmaps (plus CSV export).

use std::path::Path;

use plotters::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, ModelParams};
use crate::harness::appendix::ScanPoint;
use crate::harness::compare::ComparisonTable;
use crate::harness::record::ResultRecord;
use crate::lindblad::{evolve, IntegratorConfig, PumpSchedule};
use crate::qreservoir::SchemeTag;
use crate::wigner::{precompute_kernels, wigner_of, PhaseSpaceGrid, WignerSample};

fn plot_err(e: impl std::fmt::Display) -> Error {
    Error::Config(format!("plot: {e}"))
}

fn error_axis_max(values: impl Iterator<Item = f64>) -> f64 {
    let max = values.fold(0.0f64, f64::max);
    (max * 1.15).clamp(0.05, 1.0)
}

/// Best/mean error versus reservoir size, one SVG per sweep.
pub fn plot_error_curves(records: &[ResultRecord], title: &str, x_label: &str, path: &Path) -> Result<()> {
    if records.is_empty() {
        return Err(Error::invalid("nothing to plot: no records"));
    }
    let xs: Vec<f64> = records.iter().map(|r| r.size as f64).collect();
    let x_range = xs[0].min(xs[xs.len() - 1])..xs[0].max(xs[xs.len() - 1]) + 1.0;
    let y_max = error_axis_max(records.iter().map(|r| r.mean_error));

    let root = SVGBackend::new(path, (800, 560)).into_drawing_area();
    root.fill(&WHITE).map_err(plot_err)?;
    let mut chart = ChartBuilder::on(&root)
        .margin(16)
        .caption(title, ("sans-serif", 22))
        .x_label_area_size(44)
        .y_label_area_size(56)
        .build_cartesian_2d(x_range, 0.0..y_max)
        .map_err(plot_err)?;
    chart
        .configure_mesh()
        .x_desc(x_label)
        .y_desc("classification error rate")
        .draw()
        .map_err(plot_err)?;

    let mean: Vec<(f64, f64)> = records.iter().map(|r| (r.size as f64, r.mean_error)).collect();
    let best: Vec<(f64, f64)> = records.iter().map(|r| (r.size as f64, r.best_error)).collect();
    chart
        .draw_series(LineSeries::new(mean.clone(), &BLUE))
        .map_err(plot_err)?
        .label("mean")
        .legend(|(x, y)| PathElement::new(vec![(x, y), (x + 18, y)], BLUE));
    chart
        .draw_series(mean.iter().map(|&(x, y)| Circle::new((x, y), 3, BLUE.filled())))
        .map_err(plot_err)?;
    chart
        .draw_series(LineSeries::new(best.clone(), &RED))
        .map_err(plot_err)?
        .label("best")
        .legend(|(x, y)| PathElement::new(vec![(x, y), (x + 18, y)], RED));
    chart
        .draw_series(best.iter().map(|&(x, y)| Circle::new((x, y), 3, RED.filled())))
        .map_err(plot_err)?;
    chart
        .configure_series_labels()
        .border_style(BLACK)
        .background_style(WHITE.mix(0.85))
        .draw()
        .map_err(plot_err)?;
    root.present().map_err(plot_err)
}

/// Appendix scan curve: best/mean error versus the scanned parameter.
pub fn plot_scan(points: &[ScanPoint], title: &str, x_label: &str, path: &Path) -> Result<()> {
    if points.is_empty() {
        return Err(Error::invalid("nothing to plot: empty scan"));
    }
    let x_min = points.iter().map(|p| p.value).fold(f64::INFINITY, f64::min);
    let x_max = points.iter().map(|p| p.value).fold(f64::NEG_INFINITY, f64::max);
    let y_max = error_axis_max(points.iter().map(|p| p.mean_error));

    let root = SVGBackend::new(path, (800, 560)).into_drawing_area();
    root.fill(&WHITE).map_err(plot_err)?;
    let mut chart = ChartBuilder::on(&root)
        .margin(16)
        .caption(title, ("sans-serif", 22))
        .x_label_area_size(44)
        .y_label_area_size(56)
        .build_cartesian_2d(x_min..x_max + 1e-12, 0.0..y_max)
        .map_err(plot_err)?;
    chart
        .configure_mesh()
        .x_desc(x_label)
        .y_desc("classification error rate")
        .draw()
        .map_err(plot_err)?;
    for (series, color, name) in [
        (
            points.iter().map(|p| (p.value, p.mean_error)).collect::<Vec<_>>(),
            BLUE,
            "mean",
        ),
        (
            points.iter().map(|p| (p.value, p.best_error)).collect::<Vec<_>>(),
            RED,
            "best",
        ),
    ] {
        chart
            .draw_series(LineSeries::new(series.clone(), &color))
            .map_err(plot_err)?
            .label(name)
            .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 18, y)], color));
        chart
            .draw_series(series.iter().map(|&(x, y)| Circle::new((x, y), 3, color.filled())))
            .map_err(plot_err)?;
    }
    chart
        .configure_series_labels()
        .border_style(BLACK)
        .background_style(WHITE.mix(0.85))
        .draw()
        .map_err(plot_err)?;
    root.present().map_err(plot_err)
}

/// Resource-comparison chart: modes required per system versus error
/// threshold, log-scaled resource axis. Unbounded rows are skipped.
pub fn plot_comparison(table: &ComparisonTable, path: &Path) -> Result<()> {
    let q: Vec<(f64, f64)> = table
        .rows
        .iter()
        .filter_map(|r| r.quantum_size.map(|n| (r.threshold, n as f64)))
        .collect();
    let c: Vec<(f64, f64)> = table
        .rows
        .iter()
        .filter_map(|r| r.classical_size.map(|n| (r.threshold, n as f64)))
        .collect();
    if q.is_empty() && c.is_empty() {
        return Err(Error::invalid("nothing to plot: all rows unbounded"));
    }
    let t_min = table.rows.iter().map(|r| r.threshold).fold(f64::INFINITY, f64::min);
    let t_max = table.rows.iter().map(|r| r.threshold).fold(f64::NEG_INFINITY, f64::max);
    let n_max = q.iter().chain(c.iter()).map(|&(_, n)| n).fold(1.0, f64::max);

    let root = SVGBackend::new(path, (800, 560)).into_drawing_area();
    root.fill(&WHITE).map_err(plot_err)?;
    let mut chart = ChartBuilder::on(&root)
        .margin(16)
        .caption("modes required vs target error rate", ("sans-serif", 22))
        .x_label_area_size(44)
        .y_label_area_size(56)
        .build_cartesian_2d(t_min..t_max, (1.0..n_max * 2.0).log_scale())
        .map_err(plot_err)?;
    chart
        .configure_mesh()
        .x_desc("error-rate threshold")
        .y_desc("reservoir size (modes / Fock levels)")
        .draw()
        .map_err(plot_err)?;
    for (series, color, name) in [(q, BLUE, "quantum N"), (c, RED, "classical N_c")] {
        if series.is_empty() {
            continue;
        }
        chart
            .draw_series(LineSeries::new(series.clone(), &color))
            .map_err(plot_err)?
            .label(name)
            .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 18, y)], color));
        chart
            .draw_series(series.iter().map(|&(x, y)| Circle::new((x, y), 3, color.filled())))
            .map_err(plot_err)?;
    }
    chart
        .configure_series_labels()
        .border_style(BLACK)
        .background_style(WHITE.mix(0.85))
        .draw()
        .map_err(plot_err)?;
    root.present().map_err(plot_err)
}

/// Evolve the vacuum under a constant pump of the given scheme and strength
/// for one interval τ and return the resulting Wigner field.
pub fn render_scheme_wigner(
    tag: SchemeTag,
    strength: f64,
    params: &ModelParams,
    dim: usize,
    grid: &PhaseSpaceGrid,
    icfg: &IntegratorConfig,
) -> Result<WignerSample> {
    if !(strength >= 0.0) {
        return Err(Error::invalid(format!("pump strength must be ≥ 0, got {strength}")));
    }
    let (f_drive, p_drive, theta) = match tag {
        SchemeTag::Sp => (strength, 0.0, 0.0),
        SchemeTag::Tp => (0.0, strength, 0.0),
        SchemeTag::Sptp => (strength, strength, 0.0),
        // Fixed quarter-turn phase so the squeezing axis is visibly rotated.
        SchemeTag::SptpPrime => (strength, strength, std::f64::consts::FRAC_PI_2),
    };
    let schedule = PumpSchedule::constant(params.tau, f_drive, p_drive, theta)?;
    let rho0 = DensityMatrix::vacuum(dim)?;
    let rho = evolve(&rho0, params, &schedule, icfg)?;
    let kernels = precompute_kernels(grid, dim)?;
    wigner_of(&rho, &kernels)
}

fn diverging_rgb(v: f64) -> image::Rgb<u8> {
    let clamped = v.clamp(-1.0, 1.0);
    let chan = |x: f64| (x * 255.0).round().clamp(0.0, 255.0) as u8;
    if clamped >= 0.0 {
        image::Rgb([255, chan(1.0 - clamped), chan(1.0 - clamped)])
    } else {
        image::Rgb([chan(1.0 + clamped), chan(1.0 + clamped), 255])
    }
}

/// Render a Wigner field as a PNG heatmap (red positive, blue negative,
/// white zero), `upscale` pixels per grid cell, +p upward.
pub fn wigner_png(sample: &WignerSample, path: &Path, upscale: u32) -> Result<()> {
    if upscale == 0 {
        return Err(Error::invalid("upscale must be ≥ 1"));
    }
    let nx = sample.grid.x_points as u32;
    let np = sample.grid.p_points as u32;
    let scale = sample
        .values
        .iter()
        .map(|v| v.abs())
        .fold(f64::MIN_POSITIVE, f64::max);
    let mut img = image::RgbImage::new(nx * upscale, np * upscale);
    for i in 0..nx {
        for j in 0..np {
            let v = sample.values[(i as usize, j as usize)] / scale;
            let rgb = diverging_rgb(v);
            for dx in 0..upscale {
                for dy in 0..upscale {
                    // Row 0 is the top of the image: highest p first.
                    img.put_pixel(i * upscale + dx, (np - 1 - j) * upscale + dy, rgb);
                }
            }
        }
    }
    img.save(path)
        .map_err(|e| Error::Config(format!("writing {}: {e}", path.display())))
}

/// Write the `x,p,w` CSV next to a plot.
pub fn wigner_csv(sample: &WignerSample, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    sample
        .write_csv(std::io::BufWriter::new(file))
        .map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn setup() -> (ModelParams, PhaseSpaceGrid, IntegratorConfig) {
        let params = ModelParams::default();
        let grid = PhaseSpaceGrid::default_readout();
        let icfg = IntegratorConfig::default_for(&params);
        (params, grid, icfg)
    }

    #[test]
    fn zero_strength_renders_the_vacuum_gaussian() {
        // Odd point count so the grid samples the exact origin.
        let (params, _, icfg) = setup();
        let grid = PhaseSpaceGrid::new(21, 21, 5.0, 5.0).unwrap();
        let w = render_scheme_wigner(SchemeTag::Sp, 0.0, &params, 12, &grid, &icfg).unwrap();
        let (x, p) = w.max_location();
        assert!(x.abs() <= 1e-9 && p.abs() <= 1e-9);
        let peak = w.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!((peak - 1.0 / PI).abs() < 1e-6, "peak {peak}");
    }

    #[test]
    fn sp_pump_moves_the_center_but_keeps_the_shape() {
        let (params, grid, icfg) = setup();
        let weak = render_scheme_wigner(SchemeTag::Sp, 0.25, &params, 16, &grid, &icfg).unwrap();
        let strong = render_scheme_wigner(SchemeTag::Sp, 0.75, &params, 16, &grid, &icfg).unwrap();
        let (xw, pw) = weak.max_location();
        let (xs, ps) = strong.max_location();
        assert!(
            (xw - xs).abs() + (pw - ps).abs() > 1e-9,
            "maximum must move with the pump"
        );
        let (vxw, vpw) = weak.quadrature_variances();
        let (vxs, vps) = strong.quadrature_variances();
        assert!((vxs - vxw).abs() / vxw < 0.10, "Var x {vxw} vs {vxs}");
        assert!((vps - vpw).abs() / vpw < 0.10, "Var p {vpw} vs {vps}");
    }

    #[test]
    fn tp_pump_squeezes_around_a_fixed_center() {
        let (params, grid, icfg) = setup();
        let weak = render_scheme_wigner(SchemeTag::Tp, 0.2, &params, 16, &grid, &icfg).unwrap();
        let strong = render_scheme_wigner(SchemeTag::Tp, 0.4, &params, 16, &grid, &icfg).unwrap();
        let step = 10.0 / 19.0;
        for w in [&weak, &strong] {
            let (x, p) = w.max_location();
            assert!(x.abs() <= step + 1e-9 && p.abs() <= step + 1e-9, "center at ({x},{p})");
        }
        let (vxw, vpw) = weak.quadrature_variances();
        let (vxs, vps) = strong.quadrature_variances();
        assert!(
            (vxs - vxw).abs() / vxw > 0.05 || (vps - vpw).abs() / vpw > 0.05,
            "stronger pump must change the second moments: ({vxw},{vpw}) vs ({vxs},{vps})"
        );
    }

    #[test]
    fn files_are_written() {
        let (params, grid, icfg) = setup();
        let dir = tempfile::tempdir().unwrap();
        let w = render_scheme_wigner(SchemeTag::Sptp, 0.3, &params, 12, &grid, &icfg).unwrap();

        let png = dir.path().join("w.png");
        wigner_png(&w, &png, 8).unwrap();
        let img = image::open(&png).unwrap();
        assert_eq!(img.width(), 160);

        let csv = dir.path().join("w.csv");
        wigner_csv(&w, &csv).unwrap();
        let text = std::fs::read_to_string(&csv).unwrap();
        assert!(text.starts_with("x,p,w\n"));
        assert_eq!(text.lines().count(), 401);
    }

    #[test]
    fn colormap_endpoints_are_blue_white_red() {
        assert_eq!(diverging_rgb(1.0), image::Rgb([255, 0, 0]));
        assert_eq!(diverging_rgb(0.0), image::Rgb([255, 255, 255]));
        assert_eq!(diverging_rgb(-1.0), image::Rgb([0, 0, 255]));
    }
}
