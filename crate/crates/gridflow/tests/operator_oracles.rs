//! Per-point oracle checks of the difference operators, inner products, and
//! norms: every expected value is recomputed here from the raw stencil
//! formulas, independent of the library's implementation paths.

mod common;

use common::{grid, random_field, rel_err};
use gridflow::grid::norms::{
    grad_norm_2_edge, grad_norm_p, grad_norm_p_pow, ip_cell, ip_edge_ew, ip_edge_ns, ip_vertex,
    norm2, normp,
};
use gridflow::grid::{CellField, VertexField};
use std::f64::consts::PI;

#[test]
fn diff_x_matches_pointwise_forward_difference() {
    let g = grid(32, 3.2);
    let l = g.length();
    let v = CellField::from_fn(g, |x, _| (2.0 * PI * x / l).cos());
    let d = v.diff_x();
    let h = g.h();
    let n = g.n();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let xi = g.cell_x(i);
            let xip = g.cell_x((i + 1) % n) + if i + 1 == n { l } else { 0.0 };
            let expect = ((2.0 * PI * xip / l).cos() - (2.0 * PI * xi / l).cos()) / h;
            worst = worst.max((d[(i, j)] - expect).abs());
        }
    }
    assert!(worst <= 1e-13, "max error {worst:.3e}");
}

#[test]
fn vertex_gradient_matches_four_point_formula() {
    let g = grid(64, 2.0);
    let l = g.length();
    let v = CellField::from_fn(g, |x, y| (2.0 * PI * x / l).sin() * (2.0 * PI * y / l).sin());
    let gx = v.grad_x_vertex();
    let gy = v.grad_y_vertex();
    let n = g.n();
    let two_h = 2.0 * g.h();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let (ip, jp) = ((i + 1) % n, (j + 1) % n);
            let ex = (v[(ip, jp)] - v[(i, jp)] + v[(ip, j)] - v[(i, j)]) / two_h;
            let ey = (v[(ip, jp)] - v[(ip, j)] + v[(i, jp)] - v[(i, j)]) / two_h;
            worst = worst.max((gx[(i, j)] - ex).abs()).max((gy[(i, j)] - ey).abs());
        }
    }
    assert!(worst <= 1e-13, "max error {worst:.3e}");
}

#[test]
fn laplacian_eigenmode_relation() {
    let g = grid(32, 3.2);
    let l = g.length();
    let n = g.n() as f64;
    let h = g.h();
    let v = CellField::from_fn(g, |x, _| (2.0 * PI * x / l).cos());
    let lap = v.laplacian();
    let lam1 = 4.0 / (h * h) * (PI / n).sin().powi(2);
    let mut worst = 0.0f64;
    for (a, b) in lap.values().iter().zip(v.values()) {
        worst = worst.max((a + lam1 * b).abs() / lam1);
    }
    assert!(worst <= 1e-12, "relative error {worst:.3e}");
}

#[test]
fn p_laplacian_matches_two_pass_oracle() {
    let g = grid(16, 1.0);
    let l = g.length();
    let v = CellField::from_fn(g, |x, y| (2.0 * PI * x / l).sin() * (2.0 * PI * y / l).cos());
    let p = 4.0;
    let result = v.p_laplacian(p);

    // literal oracle: gradient components and weight at each vertex, then
    // the four-point differences back to cells
    let n = g.n();
    let two_h = 2.0 * g.h();
    let mut rx = VertexField::zeros(g);
    let mut ry = VertexField::zeros(g);
    for i in 0..n {
        for j in 0..n {
            let (ip, jp) = ((i + 1) % n, (j + 1) % n);
            let dx = (v[(ip, jp)] - v[(i, jp)] + v[(ip, j)] - v[(i, j)]) / two_h;
            let dy = (v[(ip, jp)] - v[(ip, j)] + v[(i, jp)] - v[(i, j)]) / two_h;
            let r = (dx * dx + dy * dy).powf((p - 2.0) / 2.0);
            rx[(i, j)] = r * dx;
            ry[(i, j)] = r * dy;
        }
    }
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let (im, jm) = ((i + n - 1) % n, (j + n - 1) % n);
            let ox = (rx[(i, j)] - rx[(im, j)] + rx[(i, jm)] - rx[(im, jm)]) / two_h;
            let oy = (ry[(i, j)] - ry[(i, jm)] + ry[(im, j)] - ry[(im, jm)]) / two_h;
            let expect = ox + oy;
            scale = scale.max(expect.abs());
            worst = worst.max((result[(i, j)] - expect).abs());
        }
    }
    assert!(worst <= 1e-13 * scale.max(1.0), "max error {worst:.3e}");
}

#[test]
fn vertex_inner_product_equals_averaged_form() {
    let g = grid(12, 2.0);
    let a = random_field(g, 7, 1.0);
    let b = random_field(g, 8, 1.0);
    let (va, vb) = (a.grad_x_vertex(), b.grad_y_vertex());
    let direct = ip_vertex(&va, &vb);

    // oracle: cell average of the vertex product, then the plain cell sum
    let n = g.n();
    let h = g.h();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let (im, jm) = ((i + n - 1) % n, (j + n - 1) % n);
            let prod = |ii: usize, jj: usize| va[(ii, jj)] * vb[(ii, jj)];
            acc += 0.25 * (prod(i, j) + prod(im, j) + prod(i, jm) + prod(im, jm));
        }
    }
    let oracle = h * h * acc;
    assert!(rel_err(direct, oracle) <= 1e-13, "{direct} vs {oracle}");
}

#[test]
fn edge_norm_matches_direct_summation() {
    let g = grid(128, 2.0);
    let a = 0.8;
    let l = g.length();
    let v = CellField::from_fn(g, |x, _| a * (2.0 * PI * x / l).sin());
    let n = g.n();
    let h = g.h();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let dx = (v[((i + 1) % n, j)] - v[(i, j)]) / h;
            let dy = (v[(i, (j + 1) % n)] - v[(i, j)]) / h;
            acc += h * h * (dx * dx + dy * dy);
        }
    }
    let direct = grad_norm_2_edge(&v).powi(2);
    assert!(rel_err(direct, acc) <= 1e-12, "{direct} vs {acc}");
}

#[test]
fn lp_norms_match_direct_summation() {
    let g = grid(16, 1.5);
    let v = random_field(g, 3, 1.3);
    let h = g.h();
    for p in [2.0, 3.0, 4.0] {
        let oracle = (h * h * v.values().iter().map(|x| x.abs().powf(p)).sum::<f64>())
            .powf(1.0 / p);
        assert!(rel_err(normp(&v, p), oracle) <= 1e-13);
    }
    assert!(rel_err(norm2(&v), normp(&v, 2.0)) <= 1e-13);

    // gradient p-norm against pointwise accumulation
    let p = 4.0;
    let gx = v.grad_x_vertex();
    let gy = v.grad_y_vertex();
    let mut acc = 0.0;
    for (x, y) in gx.values().iter().zip(gy.values()) {
        acc += (x * x + y * y).powf(p / 2.0);
    }
    let oracle = h * h * acc;
    assert!(rel_err(grad_norm_p_pow(&v, p), oracle) <= 1e-12);
    assert!(rel_err(grad_norm_p(&v, p), oracle.powf(1.0 / p)) <= 1e-12);
}

#[test]
fn summation_by_parts_vertex_and_edge() {
    for seed in 0..8u64 {
        let g = grid(16, 2.7);
        let a = random_field(g, seed, 1.0);
        let b = random_field(g, seed + 100, 1.0);

        // vertex identity: (-skew_lap a, b)_2 = (grad a, grad b)_vertex
        let lhs_v = ip_cell(&a.skew_laplacian().scale(-1.0), &b);
        let ga = a.grad_vertex();
        let gb = b.grad_vertex();
        let rhs_v = ip_vertex(&ga.x, &gb.x) + ip_vertex(&ga.y, &gb.y);
        assert!(rel_err(lhs_v, rhs_v) <= 1e-12, "vertex sbp: {lhs_v} vs {rhs_v}");

        // edge identity: (-lap a, b)_2 = (Dx a, Dx b)_ew + (Dy a, Dy b)_ns
        let lhs_e = ip_cell(&a.laplacian().scale(-1.0), &b);
        let rhs_e = ip_edge_ew(&a.diff_x(), &b.diff_x()) + ip_edge_ns(&a.diff_y(), &b.diff_y());
        assert!(rel_err(lhs_e, rhs_e) <= 1e-12, "edge sbp: {lhs_e} vs {rhs_e}");
    }
}

#[test]
fn laplacians_are_symmetric() {
    let g = grid(12, 1.0);
    let a = random_field(g, 21, 1.0);
    let b = random_field(g, 22, 1.0);
    let s1 = ip_cell(&a.laplacian(), &b);
    let s2 = ip_cell(&a, &b.laplacian());
    assert!(rel_err(s1, s2) <= 1e-12);
    let k1 = ip_cell(&a.skew_laplacian(), &b);
    let k2 = ip_cell(&a, &b.skew_laplacian());
    assert!(rel_err(k1, k2) <= 1e-12);
}
