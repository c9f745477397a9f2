//! Discrete inner products and norms.
//!
//! Under periodicity the averaged vertex/edge inner products collapse to
//! plain h^2-weighted sums over all locations of one family, which is what
//! these implement; the averaged forms are checked against this in tests.

use super::{CellField, EdgeFieldEW, EdgeFieldNS, VertexField};
use crate::scalar::{cast, Scalar};

#[inline]
fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        acc += *x * *y;
    }
    acc
}

/// h^2-weighted inner product of two cell fields.
pub fn ip_cell<T: Scalar>(a: &CellField<T>, b: &CellField<T>) -> T {
    assert_eq!(a.grid(), b.grid(), "fields must share a grid");
    let h = a.grid().h();
    h * h * dot(a.slice(), b.slice())
}

/// h^2-weighted inner product of two vertex fields.
pub fn ip_vertex<T: Scalar>(a: &VertexField<T>, b: &VertexField<T>) -> T {
    assert_eq!(a.grid(), b.grid(), "fields must share a grid");
    let h = a.grid().h();
    h * h * dot(a.slice(), b.slice())
}

/// h^2-weighted inner product of two east-west edge fields.
pub fn ip_edge_ew<T: Scalar>(a: &EdgeFieldEW<T>, b: &EdgeFieldEW<T>) -> T {
    assert_eq!(a.grid(), b.grid(), "fields must share a grid");
    let h = a.grid().h();
    h * h * dot(a.slice(), b.slice())
}

/// h^2-weighted inner product of two north-south edge fields.
pub fn ip_edge_ns<T: Scalar>(a: &EdgeFieldNS<T>, b: &EdgeFieldNS<T>) -> T {
    assert_eq!(a.grid(), b.grid(), "fields must share a grid");
    let h = a.grid().h();
    h * h * dot(a.slice(), b.slice())
}

/// Discrete L2 norm of a cell field.
pub fn norm2<T: Scalar>(a: &CellField<T>) -> T {
    ip_cell(a, a).sqrt()
}

/// Discrete Lp norm, `p in [2, inf)`.
pub fn normp<T: Scalar>(a: &CellField<T>, p: T) -> T {
    assert!(p >= cast(2.0), "normp requires p >= 2");
    let h = a.grid().h();
    let mut acc = T::zero();
    for v in a.slice() {
        acc += v.abs().powf(p);
    }
    (h * h * acc).powf(T::one() / p)
}

/// Max-norm of a cell field.
pub fn norm_inf<T: Scalar>(a: &CellField<T>) -> T {
    a.slice().iter().fold(T::zero(), |m, v| m.max(v.abs()))
}

/// p-th power of the vertex-gradient Lp norm:
/// `h^2 sum_v (gx^2 + gy^2)^(p/2)`.
pub fn grad_norm_p_pow<T: Scalar>(a: &CellField<T>, p: T) -> T {
    assert!(p >= cast(2.0), "gradient norm requires p >= 2");
    let gx = a.grad_x_vertex();
    let gy = a.grad_y_vertex();
    let e = p * cast(0.5);
    let h = a.grid().h();
    let mut acc = T::zero();
    for (x, y) in gx.slice().iter().zip(gy.slice()) {
        acc += super::ops::pow_nonneg(*x * *x + *y * *y, e);
    }
    h * h * acc
}

/// Vertex-gradient Lp norm.
pub fn grad_norm_p<T: Scalar>(a: &CellField<T>, p: T) -> T {
    grad_norm_p_pow(a, p).powf(T::one() / p)
}

/// Squared edge-gradient L2 norm: the sum of the squared edge inner products
/// of the forward differences in both axes.
pub fn grad_norm_2_edge_sq<T: Scalar>(a: &CellField<T>) -> T {
    let dx = a.diff_x();
    let dy = a.diff_y();
    ip_edge_ew(&dx, &dx) + ip_edge_ns(&dy, &dy)
}

/// Edge-gradient L2 norm.
pub fn grad_norm_2_edge<T: Scalar>(a: &CellField<T>) -> T {
    grad_norm_2_edge_sq(a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    #[test]
    fn unit_field_measures_the_domain() {
        let g = GridSpec::<f64>::new(16, 3.2).unwrap();
        let one = CellField::from_fn(g, |_, _| 1.0);
        assert!((ip_cell(&one, &one) - 3.2 * 3.2).abs() < 1e-12);
    }

    #[test]
    fn constant_field_norms() {
        let g = GridSpec::<f64>::new(16, 2.0).unwrap();
        let c = CellField::from_fn(g, |_, _| -3.0);
        assert!((norm2(&c) - 3.0 * 2.0).abs() < 1e-12);
        assert!((normp(&c, 4.0) - 3.0 * 2.0f64.sqrt()).abs() < 1e-12);
        assert_eq!(norm_inf(&c), 3.0);
        assert_eq!(grad_norm_p(&c, 2.0), 0.0);
        assert_eq!(grad_norm_2_edge(&c), 0.0);
    }

    #[test]
    fn inner_products_are_symmetric() {
        let g = GridSpec::<f64>::new(8, 1.0).unwrap();
        let a = CellField::from_fn(g, |x, y| (3.0 * x + y).sin());
        let b = CellField::from_fn(g, |x, y| (x - 2.0 * y).cos());
        assert_eq!(ip_cell(&a, &b), ip_cell(&b, &a));
    }

    #[test]
    fn grad_norm2_matches_vertex_inner_product() {
        let g = GridSpec::<f64>::new(12, 2.5).unwrap();
        let a = CellField::from_fn(g, |x, y| (2.0 * x).sin() + (3.0 * y).cos());
        let grad = a.grad_vertex();
        let by_ip = ip_vertex(&grad.x, &grad.x) + ip_vertex(&grad.y, &grad.y);
        let by_norm = grad_norm_p(&a, 2.0).powi(2);
        assert!((by_ip - by_norm).abs() <= 1e-13 * by_ip.abs().max(1.0));
    }
}
