//! Cauchy convergence study: evolve the same initial data on a ladder of
//! doubling resolutions along the quadratic refinement path `s = h^2 / 10`,
//! then measure the norm of the difference between consecutive levels at
//! the final time.

use std::io::Write;
use std::time::Instant;

use gridflow::grid::norms::norm2;
use gridflow::grid::{CellField, GridSpec};
use gridflow::models::{initial_sinusoidal, thin_film_step, ThinFilmParams};
use gridflow::psd::PsdConfig;
use gridflow::spectral::SpectralWorkspace;

use crate::config::{ConvergeKind, ConvergeParams};
use crate::error::Result;
use crate::interp::interpolate_coarse_to_fine;

/// One row of the convergence table: the Cauchy difference between the runs
/// at spacings `h_c` and `h_f = h_c / 2`.
#[derive(Debug, Clone)]
pub struct RateTableRow {
    pub h_c: f64,
    pub h_f: f64,
    pub cauchy_norm: f64,
    /// `log2` of the ratio of consecutive Cauchy norms; absent on the first row.
    pub rate: Option<f64>,
    /// Mean PSD iterations per time step of the fine run.
    pub avg_iters: f64,
    /// Mean wall-clock seconds per time step of the fine run.
    pub cpu_s: f64,
}

struct LevelRun {
    field: CellField<f64>,
    avg_iters: f64,
    avg_step_seconds: f64,
}

fn run_level(n: usize, params: &ConvergeParams) -> Result<LevelRun> {
    let grid = GridSpec::new(n, params.l)?;
    let h = grid.h();
    let p = match params.kind {
        ConvergeKind::P4 => 4,
        ConvergeKind::P6 => 6,
    };
    // quadratic refinement path, snapped so the steps land exactly on tmax
    let s_nominal = 0.1 * h * h;
    let steps = (params.tmax / s_nominal).round().max(1.0) as usize;
    let s = params.tmax / steps as f64;

    let tf = ThinFilmParams::new(grid, p, params.eps, s)?;
    let cfg = PsdConfig { tol_rel: params.tol, ..PsdConfig::default() };
    let mut ws = SpectralWorkspace::new(grid);
    let mut u = initial_sinusoidal(grid);
    let mut total_iters = 0usize;
    let start = Instant::now();
    for _ in 0..steps {
        let (next, report) = thin_film_step(&u, &tf, &mut ws, &cfg)?;
        total_iters += report.iterations;
        u = next;
    }
    let elapsed = start.elapsed().as_secs_f64();
    Ok(LevelRun {
        field: u,
        avg_iters: total_iters as f64 / steps as f64,
        avg_step_seconds: elapsed / steps as f64,
    })
}

/// Run every level once and difference consecutive pairs.
pub fn cauchy_convergence(params: &ConvergeParams) -> Result<Vec<RateTableRow>> {
    let mut rows = Vec::new();
    let mut prev: Option<(usize, LevelRun)> = None;
    let mut prev_norm: Option<f64> = None;
    for &n in &params.levels {
        let run = run_level(n, params)?;
        if let Some((n_coarse, coarse_run)) = prev.take() {
            let fine_grid = run.field.grid();
            let lifted = interpolate_coarse_to_fine(&coarse_run.field, fine_grid)?;
            let cauchy_norm = norm2(&(&run.field - &lifted));
            let rate = prev_norm.map(|prev| (prev / cauchy_norm).log2());
            rows.push(RateTableRow {
                h_c: params.l / n_coarse as f64,
                h_f: params.l / n as f64,
                cauchy_norm,
                rate,
                avg_iters: run.avg_iters,
                cpu_s: run.avg_step_seconds,
            });
            prev_norm = Some(cauchy_norm);
        }
        prev = Some((n, run));
    }
    Ok(rows)
}

pub fn write_rate_table<W: Write>(w: &mut W, rows: &[RateTableRow]) -> std::io::Result<()> {
    writeln!(w, "h_c,h_f,cauchy_norm,rate,avg_iters,cpu_s")?;
    for r in rows {
        let rate = r.rate.map(|v| format!("{v:.4}")).unwrap_or_default();
        writeln!(
            w,
            "{:.16e},{:.16e},{:.16e},{},{:.4},{:.6}",
            r.h_c, r.h_f, r.cauchy_norm, rate, r.avg_iters, r.cpu_s
        )?;
    }
    Ok(())
}
