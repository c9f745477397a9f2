#![allow(dead_code)]

//! Shared helpers for the oracle test suites: seeded random fields, dense
//! operator assembly, and dense linear solves (including the mean-zero
//! constrained variant used by the conserved problem).

use gridflow::grid::{CellField, GridSpec};
use gridflow::models::initial_random;
use nalgebra::{DMatrix, DVector};

pub fn grid(n: usize, l: f64) -> GridSpec<f64> {
    GridSpec::new(n, l).unwrap()
}

pub fn random_field(g: GridSpec<f64>, seed: u64, amplitude: f64) -> CellField<f64> {
    initial_random(g, seed, amplitude)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

pub fn max_abs_diff(a: &CellField<f64>, b: &CellField<f64>) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

pub fn field_to_vec(f: &CellField<f64>) -> DVector<f64> {
    DVector::from_iterator(f.grid().cell_count(), f.values().iter().copied())
}

pub fn vec_to_field(g: GridSpec<f64>, v: &DVector<f64>) -> CellField<f64> {
    let mut out = CellField::zeros(g);
    for (dst, src) in out.values_mut().iter_mut().zip(v.iter()) {
        *dst = *src;
    }
    out
}

/// Assemble the dense matrix of a linear field operator by applying it to
/// every basis vector.
pub fn dense_operator(
    g: GridSpec<f64>,
    apply: impl Fn(&CellField<f64>) -> CellField<f64>,
) -> DMatrix<f64> {
    let m = g.cell_count();
    let mut mat = DMatrix::zeros(m, m);
    for col in 0..m {
        let mut e = CellField::zeros(g);
        e.values_mut().as_slice_mut().unwrap()[col] = 1.0;
        let out = apply(&e);
        for (row, v) in out.values().iter().enumerate() {
            mat[(row, col)] = *v;
        }
    }
    mat
}

/// Direct dense solve.
pub fn solve_dense(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    a.clone().lu().solve(b).expect("dense system solvable")
}

/// Solve `A x = b` restricted to mean-zero `x` (and mean-zero `b`) via the
/// bordered system `[A, 1; 1^T, 0]`.
pub fn solve_dense_mean_zero(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let m = a.nrows();
    let mut k = DMatrix::zeros(m + 1, m + 1);
    k.view_mut((0, 0), (m, m)).copy_from(a);
    for i in 0..m {
        k[(i, m)] = 1.0;
        k[(m, i)] = 1.0;
    }
    let mut rhs = DVector::zeros(m + 1);
    rhs.rows_mut(0, m).copy_from(b);
    let sol = k.lu().solve(&rhs).expect("bordered system solvable");
    sol.rows(0, m).into_owned()
}
