use gridflow::grid::GridSpec;
use gridflow::models::*;
use gridflow::psd::PsdConfig;
use gridflow::spectral::SpectralWorkspace;

fn main() {
    let cfg = PsdConfig::default();
    for s in [0.01f64, 0.1, 1.0] {
        let g = GridSpec::new(128usize, 12.8).unwrap();
        let params = ThinFilmParams::new(g, 4, 0.03, s).unwrap();
        let mut ws = SpectralWorkspace::new(g);
        let mut u = initial_random(g, 42, 0.05);
        let m0 = u.mean();
        let mut e = thin_film_energy(&u, &params);
        let mut worst_rise = 0.0f64;
        let mut max_drift = 0.0f64;
        for _ in 0..500 {
            let (next, _) = thin_film_step(&u, &params, &mut ws, &cfg).unwrap();
            let e2 = thin_film_energy(&next, &params);
            worst_rise = worst_rise.max((e2 - e) / (1.0 + e.abs()));
            max_drift = max_drift.max((next.mean() - m0).abs());
            u = next;
            e = e2;
        }
        println!("thin film s={s}: worst energy rise {worst_rise:.2e} (slack 1e-10), mass drift {max_drift:.2e}");
    }
    for s in [0.01f64, 0.1, 1.0] {
        let g = GridSpec::new(128usize, 100.0).unwrap();
        let params = SpfcParams::new(g, 1.0, 0.5, 2.0, s).unwrap();
        let mut ws = SpectralWorkspace::new(g);
        let mut u = initial_random(g, 43, 0.05);
        let m0 = u.mean();
        let mut e = spfc_energy(&u, &params);
        let mut worst_rise = 0.0f64;
        let mut max_drift = 0.0f64;
        let mut worst_wmean = 0.0f64;
        for _ in 0..500 {
            let f_mean = u.laplacian().scale(-params.s * params.gamma1).mean();
            let (next, w, _) = spfc_step(&u, &params, &mut ws, &cfg).unwrap();
            let e2 = spfc_energy(&next, &params);
            worst_rise = worst_rise.max((e2 - e) / (1.0 + e.abs()));
            max_drift = max_drift.max((next.mean() - m0).abs());
            worst_wmean = worst_wmean
                .max((w.mean() - (params.s * params.gamma0 * next.mean() - f_mean)).abs());
            u = next;
            e = e2;
        }
        println!("spfc s={s}: worst energy rise {worst_rise:.2e}, mass drift {max_drift:.2e}, w-mean err {worst_wmean:.2e}");
    }
}
