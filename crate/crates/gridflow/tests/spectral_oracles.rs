//! FFT solves checked against dense linear algebra on small grids: the
//! matrices are assembled from the very stencils the solves must invert.

mod common;

use common::{
    dense_operator, field_to_vec, grid, max_abs_diff, random_field, solve_dense,
    solve_dense_mean_zero, vec_to_field,
};
use gridflow::grid::norms::{norm2, norm_inf};
use gridflow::spectral::SpectralWorkspace;

#[test]
fn fourth_order_solve_matches_dense_inverse() {
    let g = grid(8, 1.0);
    let (s, eps) = (0.1, 0.5);
    let mut ws = SpectralWorkspace::new(g);

    let a = dense_operator(g, |v| {
        let mut out = v.clone();
        out.axpy(-s, &v.laplacian());
        out.axpy(s * eps * eps, &v.biharmonic());
        out
    });
    let r = random_field(g, 11, 1.0);
    let dense = solve_dense(&a, &field_to_vec(&r));
    let fft = ws.solve_fourth_order(&r, s, eps);
    let diff = max_abs_diff(&fft, &vec_to_field(g, &dense));
    assert!(diff <= 1e-12 * norm_inf(&fft).max(1.0), "diff {diff:.3e}");
}

#[test]
fn sixth_order_solve_matches_dense_inverse_on_mean_zero_subspace() {
    let g = grid(8, 1.0);
    let (s, eps, lambda) = (0.01, 1.0, 0.5);
    let mut ws = SpectralWorkspace::new(g);

    // dense negated Laplacian for the dense inverse-Laplacian action
    let neg_lap = dense_operator(g, |v| v.laplacian().scale(-1.0));
    let a = dense_operator(g, |v| {
        // columns from mean-zero projected basis vectors so the dense T
        // action is well-defined
        let vz = v.project_mean_zero();
        let mut out = vz.scale(s * lambda);
        out.axpy(-s, &vz.laplacian());
        out.axpy(s * eps * eps, &vz.biharmonic());
        let t = solve_dense_mean_zero(&neg_lap, &field_to_vec(&vz));
        out.axpy(1.0, &vec_to_field(g, &t));
        out
    });

    let r = random_field(g, 13, 1.0).project_mean_zero();
    let dense = solve_dense_mean_zero(&a, &field_to_vec(&r));
    let fft = ws.solve_sixth_order(&r, s, eps, lambda).unwrap();
    let diff = max_abs_diff(&fft, &vec_to_field(g, &dense));
    assert!(diff <= 1e-11 * norm_inf(&fft).max(1.0), "diff {diff:.3e}");
}

#[test]
fn poisson_solve_matches_dense_constrained_inverse() {
    let g = grid(8, 1.3);
    let mut ws = SpectralWorkspace::new(g);
    let neg_lap = dense_operator(g, |v| v.laplacian().scale(-1.0));
    let zeta = random_field(g, 17, 1.0).project_mean_zero();
    let dense = solve_dense_mean_zero(&neg_lap, &field_to_vec(&zeta));
    let fft = ws.solve_poisson(&zeta).unwrap();
    let diff = max_abs_diff(&fft, &vec_to_field(g, &dense));
    assert!(diff <= 1e-12 * norm_inf(&fft).max(1.0), "diff {diff:.3e}");
    // the solution is itself mean-zero
    assert!(fft.mean().abs() <= 1e-14 * norm2(&zeta).max(1.0));
}
