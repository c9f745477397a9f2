//! Long-time evolution runs: a time loop around the convex-splitting
//! steppers with streaming CSV diagnostics, field snapshots at requested
//! times, and log-log slope fits of the roughness and energy histories.

use std::fs::{create_dir_all, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use gridflow::grid::{CellField, GridSpec};
use gridflow::io::save_field;
use gridflow::models::{
    add_nucleation_sites, initial_random, initial_sinusoidal, roughness, spfc_energy, spfc_step,
    thin_film_energy, thin_film_step, EvolutionRecord, SpfcParams, ThinFilmParams,
};
use gridflow::psd::PsdConfig;
use gridflow::spectral::SpectralWorkspace;

use crate::config::{EvolveKind, EvolveParams, InitKind};
use crate::error::Result;

pub struct EvolveSummary {
    pub records: Vec<EvolutionRecord<f64>>,
    pub roughness_slope: Option<f64>,
    pub energy_slope: Option<f64>,
    pub final_state: CellField<f64>,
    pub out_dir: PathBuf,
}

enum Stepper {
    ThinFilm(ThinFilmParams<f64>),
    Spfc(SpfcParams<f64>),
}

impl Stepper {
    fn advance(
        &self,
        u: &CellField<f64>,
        ws: &mut SpectralWorkspace<f64>,
        cfg: &PsdConfig<f64>,
    ) -> Result<(CellField<f64>, usize)> {
        Ok(match self {
            Stepper::ThinFilm(p) => {
                let (next, report) = thin_film_step(u, p, ws, cfg)?;
                (next, report.iterations)
            }
            Stepper::Spfc(p) => {
                let (next, _w, report) = spfc_step(u, p, ws, cfg)?;
                (next, report.iterations)
            }
        })
    }

    fn energy(&self, u: &CellField<f64>) -> f64 {
        match self {
            Stepper::ThinFilm(p) => thin_film_energy(u, p),
            Stepper::Spfc(p) => spfc_energy(u, p),
        }
    }
}

fn initial_state(params: &EvolveParams, grid: GridSpec<f64>) -> CellField<f64> {
    let mut u = match params.init {
        InitKind::Random => initial_random(grid, params.seed, params.amplitude),
        InitKind::Sinusoidal => initial_sinusoidal(grid),
    };
    if !params.nucleation.is_empty() {
        add_nucleation_sites(
            &mut u,
            &params.nucleation,
            params.nucleation_amplitude,
            params.nucleation_sigma,
        );
    }
    u
}

fn write_record<W: Write>(w: &mut W, step: usize, r: &EvolutionRecord<f64>) -> std::io::Result<()> {
    writeln!(
        w,
        "{step},{:.16e},{:.16e},{:.16e},{},{:.3}",
        r.time, r.energy, r.roughness, r.solver_iters, r.wall_ms
    )
}

/// Run the time loop, streaming `timeseries.csv`, dropping snapshots at the
/// requested times, and writing `slopes.json` at the end.
pub fn evolve(params: &EvolveParams) -> Result<EvolveSummary> {
    let grid = GridSpec::new(params.n, params.l)?;
    let stepper = match params.kind {
        EvolveKind::ThinFilm => {
            Stepper::ThinFilm(ThinFilmParams::new(grid, params.p, params.eps, params.s)?)
        }
        EvolveKind::Spfc => Stepper::Spfc(SpfcParams::new(
            grid,
            params.eps,
            params.gamma0,
            params.gamma1,
            params.s,
        )?),
    };
    create_dir_all(&params.out)?;
    let mut csv = BufWriter::new(File::create(params.out.join("timeseries.csv"))?);
    writeln!(csv, "step,t,energy,roughness,iters,wall_ms")?;

    let steps = (params.tmax / params.s).ceil() as usize;
    let mut snapshots: Vec<f64> = params.snapshot_times.clone();
    snapshots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut next_snapshot = 0usize;

    let cfg = PsdConfig { tol_rel: params.tol, ..PsdConfig::default() };
    let mut ws = SpectralWorkspace::new(grid);
    let mut u = initial_state(params, grid);
    let mut records = Vec::with_capacity(steps + 1);

    let initial = EvolutionRecord {
        time: 0.0,
        energy: stepper.energy(&u),
        roughness: roughness(&u),
        solver_iters: 0,
        wall_ms: 0.0,
    };
    write_record(&mut csv, 0, &initial)?;
    records.push(initial);
    while next_snapshot < snapshots.len() && snapshots[next_snapshot] <= 0.0 {
        save_field(&params.out.join(format!("snapshot_t{}.field", snapshots[next_snapshot])), &u, 0.0)?;
        next_snapshot += 1;
    }

    for step in 1..=steps {
        let start = Instant::now();
        let (next, iters) = match stepper.advance(&u, &mut ws, &cfg) {
            Ok(v) => v,
            Err(e) => {
                // leave a usable partial record behind
                csv.flush()?;
                return Err(e);
            }
        };
        let wall_ms = start.elapsed().as_secs_f64() * 1e3;
        u = next;
        let t = params.s * step as f64;
        let record = EvolutionRecord {
            time: t,
            energy: stepper.energy(&u),
            roughness: roughness(&u),
            solver_iters: iters,
            wall_ms,
        };
        write_record(&mut csv, step, &record)?;
        records.push(record);

        while next_snapshot < snapshots.len() && t >= snapshots[next_snapshot] - 1e-12 {
            save_field(
                &params.out.join(format!("snapshot_t{}.field", snapshots[next_snapshot])),
                &u,
                t,
            )?;
            next_snapshot += 1;
        }
    }
    csv.flush()?;

    let rough_pts: Vec<(f64, f64)> = records.iter().map(|r| (r.time, r.roughness)).collect();
    let energy_pts: Vec<(f64, f64)> =
        records.iter().map(|r| (r.time, r.energy + params.energy_offset)).collect();
    let roughness_slope = crate::slope::log_log_slope(&rough_pts, params.window.0, params.window.1);
    let energy_slope = crate::slope::log_log_slope(&energy_pts, params.window.0, params.window.1);

    let slopes = serde_json::json!({
        "roughness_slope": roughness_slope,
        "energy_slope": energy_slope,
        "window": [params.window.0, params.window.1],
        "energy_offset": params.energy_offset,
    });
    let mut sfile = File::create(params.out.join("slopes.json"))?;
    writeln!(sfile, "{}", serde_json::to_string_pretty(&slopes).expect("serializable"))?;

    Ok(EvolveSummary {
        records,
        roughness_slope,
        energy_slope,
        final_state: u,
        out_dir: params.out.clone(),
    })
}
