use gridflow_cli::config::{EvolveKind, EvolveParams, InitKind};
use gridflow_cli::evolve;
use std::path::PathBuf;

fn main() {
    let params = EvolveParams {
        kind: EvolveKind::ThinFilm,
        n: 128,
        l: 12.8,
        p: 4,
        eps: 0.03,
        s: 0.02,
        gamma0: 0.5,
        gamma1: 2.0,
        seed: 7,
        amplitude: 0.05,
        init: InitKind::Random,
        nucleation: vec![],
        nucleation_amplitude: 0.3,
        nucleation_sigma: 2.0,
        tmax: 400.0,
        tol: 1e-9,
        snapshot_times: vec![40.0, 400.0],
        window: (20.0, 400.0),
        energy_offset: 0.25 * 12.8 * 12.8,
        out: PathBuf::from("/tmp/c8run"),
    };
    let summary = evolve(&params).unwrap();
    println!(
        "roughness slope {:?}  energy slope {:?}",
        summary.roughness_slope, summary.energy_slope
    );
    let last = summary.records.last().unwrap();
    println!("final: t={} energy={} roughness={}", last.time, last.energy, last.roughness);
}
