//! Finite-difference calculus on the staggered grid.
//!
//! Cell-to-edge differences/averages move a field half a cell in one axis;
//! the edge-to-cell versions move it back. The vertex gradient and vertex
//! divergence are the collocated four-point operators, which compose into
//! the skew Laplacian and the p-Laplacian.

use super::{CellField, EdgeFieldEW, EdgeFieldNS, VertexField, VertexVectorField};
use crate::scalar::{cast, Scalar};

#[inline]
fn wrap_up(i: usize, n: usize) -> usize {
    if i + 1 == n {
        0
    } else {
        i + 1
    }
}

#[inline]
fn wrap_down(i: usize, n: usize) -> usize {
    if i == 0 {
        n - 1
    } else {
        i - 1
    }
}

impl<T: Scalar> CellField<T> {
    /// Forward x-difference onto east-west edges: `(v[i+1][j] - v[i][j]) / h`.
    pub fn diff_x(&self) -> EdgeFieldEW<T> {
        let (n, inv_h) = (self.grid().n(), T::one() / self.grid().h());
        let a = self.slice();
        let mut out = EdgeFieldEW::zeros(self.grid());
        let o = out.slice_mut();
        for i in 0..n {
            let r0 = &a[i * n..(i + 1) * n];
            let up = wrap_up(i, n);
            let r1 = &a[up * n..(up + 1) * n];
            let dst = &mut o[i * n..(i + 1) * n];
            for j in 0..n {
                dst[j] = (r1[j] - r0[j]) * inv_h;
            }
        }
        out
    }

    /// Forward y-difference onto north-south edges.
    pub fn diff_y(&self) -> EdgeFieldNS<T> {
        let (n, inv_h) = (self.grid().n(), T::one() / self.grid().h());
        let a = self.slice();
        let mut out = EdgeFieldNS::zeros(self.grid());
        let o = out.slice_mut();
        for i in 0..n {
            let r = &a[i * n..(i + 1) * n];
            let dst = &mut o[i * n..(i + 1) * n];
            for j in 0..n - 1 {
                dst[j] = (r[j + 1] - r[j]) * inv_h;
            }
            dst[n - 1] = (r[0] - r[n - 1]) * inv_h;
        }
        out
    }

    /// Two-point x-average onto east-west edges.
    pub fn avg_x(&self) -> EdgeFieldEW<T> {
        let n = self.grid().n();
        let half = cast::<T>(0.5);
        let a = self.slice();
        let mut out = EdgeFieldEW::zeros(self.grid());
        let o = out.slice_mut();
        for i in 0..n {
            let r0 = &a[i * n..(i + 1) * n];
            let up = wrap_up(i, n);
            let r1 = &a[up * n..(up + 1) * n];
            let dst = &mut o[i * n..(i + 1) * n];
            for j in 0..n {
                dst[j] = half * (r1[j] + r0[j]);
            }
        }
        out
    }

    /// Two-point y-average onto north-south edges.
    pub fn avg_y(&self) -> EdgeFieldNS<T> {
        let n = self.grid().n();
        let half = cast::<T>(0.5);
        let a = self.slice();
        let mut out = EdgeFieldNS::zeros(self.grid());
        let o = out.slice_mut();
        for i in 0..n {
            let r = &a[i * n..(i + 1) * n];
            let dst = &mut o[i * n..(i + 1) * n];
            for j in 0..n - 1 {
                dst[j] = half * (r[j + 1] + r[j]);
            }
            dst[n - 1] = half * (r[0] + r[n - 1]);
        }
        out
    }

    /// Four-point x-derivative collocated at vertices:
    /// `(v[i+1][j+1] - v[i][j+1] + v[i+1][j] - v[i][j]) / (2h)`.
    pub fn grad_x_vertex(&self) -> VertexField<T> {
        let n = self.grid().n();
        let c = cast::<T>(0.5) / self.grid().h();
        let a = self.slice();
        let mut out = VertexField::zeros(self.grid());
        let o = out.slice_mut();
        for i in 0..n {
            let r0 = &a[i * n..(i + 1) * n];
            let up = wrap_up(i, n);
            let r1 = &a[up * n..(up + 1) * n];
            let dst = &mut o[i * n..(i + 1) * n];
            for j in 0..n {
                let jp = wrap_up(j, n);
                dst[j] = (r1[jp] - r0[jp] + r1[j] - r0[j]) * c;
            }
        }
        out
    }

    /// Four-point y-derivative collocated at vertices.
    pub fn grad_y_vertex(&self) -> VertexField<T> {
        let n = self.grid().n();
        let c = cast::<T>(0.5) / self.grid().h();
        let a = self.slice();
        let mut out = VertexField::zeros(self.grid());
        let o = out.slice_mut();
        for i in 0..n {
            let r0 = &a[i * n..(i + 1) * n];
            let up = wrap_up(i, n);
            let r1 = &a[up * n..(up + 1) * n];
            let dst = &mut o[i * n..(i + 1) * n];
            for j in 0..n {
                let jp = wrap_up(j, n);
                dst[j] = (r1[jp] - r1[j] + r0[jp] - r0[j]) * c;
            }
        }
        out
    }

    /// Vertex-centered discrete gradient (both four-point components).
    pub fn grad_vertex(&self) -> VertexVectorField<T> {
        VertexVectorField::new(self.grad_x_vertex(), self.grad_y_vertex())
    }

    /// Standard five-point Laplacian.
    pub fn laplacian(&self) -> CellField<T> {
        let n = self.grid().n();
        let h = self.grid().h();
        let inv_h2 = T::one() / (h * h);
        let four = cast::<T>(4.0);
        let a = self.slice();
        let mut out = CellField::zeros(self.grid());
        let o = out.slice_mut();
        for i in 0..n {
            let rm = &a[wrap_down(i, n) * n..wrap_down(i, n) * n + n];
            let r0 = &a[i * n..(i + 1) * n];
            let rp = &a[wrap_up(i, n) * n..wrap_up(i, n) * n + n];
            let dst = &mut o[i * n..(i + 1) * n];
            for j in 0..n {
                let jp = wrap_up(j, n);
                let jm = wrap_down(j, n);
                dst[j] = (rp[j] + rm[j] + r0[jp] + r0[jm] - four * r0[j]) * inv_h2;
            }
        }
        out
    }

    /// Diagonal (skew) Laplacian from the vertex-centered gradient calculus:
    /// `(v[i+1][j+1] + v[i-1][j+1] + v[i+1][j-1] + v[i-1][j-1] - 4 v[i][j]) / (2h^2)`.
    pub fn skew_laplacian(&self) -> CellField<T> {
        let n = self.grid().n();
        let h = self.grid().h();
        let c = cast::<T>(0.5) / (h * h);
        let four = cast::<T>(4.0);
        let a = self.slice();
        let mut out = CellField::zeros(self.grid());
        let o = out.slice_mut();
        for i in 0..n {
            let rm = &a[wrap_down(i, n) * n..wrap_down(i, n) * n + n];
            let r0 = &a[i * n..(i + 1) * n];
            let rp = &a[wrap_up(i, n) * n..wrap_up(i, n) * n + n];
            let dst = &mut o[i * n..(i + 1) * n];
            for j in 0..n {
                let jp = wrap_up(j, n);
                let jm = wrap_down(j, n);
                dst[j] = (rp[jp] + rm[jp] + rp[jm] + rm[jm] - four * r0[j]) * c;
            }
        }
        out
    }

    /// Biharmonic operator, the five-point Laplacian applied twice.
    pub fn biharmonic(&self) -> CellField<T> {
        self.laplacian().laplacian()
    }

    /// Discrete p-Laplacian in divergence form: the vertex divergence of
    /// `|grad v|^(p-2) grad v`, with the weight evaluated pointwise at
    /// vertices. Requires `p >= 2`.
    pub fn p_laplacian(&self, p: T) -> CellField<T> {
        assert!(p >= cast(2.0), "p-Laplacian requires p >= 2");
        let gx = self.grad_x_vertex();
        let gy = self.grad_y_vertex();
        let (wx, wy) = weighted_gradient(&gx, &gy, p);
        &wx.diff_x() + &wy.diff_y()
    }
}

impl<T: Scalar> EdgeFieldEW<T> {
    /// Backward x-difference onto cells: `(e[i][j] - e[i-1][j]) / h`.
    pub fn diff_x(&self) -> CellField<T> {
        let (n, inv_h) = (self.grid().n(), T::one() / self.grid().h());
        let a = self.slice();
        let mut out = CellField::zeros(self.grid());
        let o = out.slice_mut();
        for i in 0..n {
            let r0 = &a[i * n..(i + 1) * n];
            let dn = wrap_down(i, n);
            let rm = &a[dn * n..(dn + 1) * n];
            let dst = &mut o[i * n..(i + 1) * n];
            for j in 0..n {
                dst[j] = (r0[j] - rm[j]) * inv_h;
            }
        }
        out
    }

    /// Two-point x-average onto cells.
    pub fn avg_x(&self) -> CellField<T> {
        let n = self.grid().n();
        let half = cast::<T>(0.5);
        let a = self.slice();
        let mut out = CellField::zeros(self.grid());
        let o = out.slice_mut();
        for i in 0..n {
            let r0 = &a[i * n..(i + 1) * n];
            let dn = wrap_down(i, n);
            let rm = &a[dn * n..(dn + 1) * n];
            let dst = &mut o[i * n..(i + 1) * n];
            for j in 0..n {
                dst[j] = half * (r0[j] + rm[j]);
            }
        }
        out
    }
}

impl<T: Scalar> EdgeFieldNS<T> {
    /// Backward y-difference onto cells.
    pub fn diff_y(&self) -> CellField<T> {
        let (n, inv_h) = (self.grid().n(), T::one() / self.grid().h());
        let a = self.slice();
        let mut out = CellField::zeros(self.grid());
        let o = out.slice_mut();
        for i in 0..n {
            let r = &a[i * n..(i + 1) * n];
            let dst = &mut o[i * n..(i + 1) * n];
            dst[0] = (r[0] - r[n - 1]) * inv_h;
            for j in 1..n {
                dst[j] = (r[j] - r[j - 1]) * inv_h;
            }
        }
        out
    }

    /// Two-point y-average onto cells.
    pub fn avg_y(&self) -> CellField<T> {
        let n = self.grid().n();
        let half = cast::<T>(0.5);
        let a = self.slice();
        let mut out = CellField::zeros(self.grid());
        let o = out.slice_mut();
        for i in 0..n {
            let r = &a[i * n..(i + 1) * n];
            let dst = &mut o[i * n..(i + 1) * n];
            dst[0] = half * (r[0] + r[n - 1]);
            for j in 1..n {
                dst[j] = half * (r[j] + r[j - 1]);
            }
        }
        out
    }
}

impl<T: Scalar> VertexField<T> {
    /// Four-point x-difference back onto cells:
    /// `(v[i][j] - v[i-1][j] + v[i][j-1] - v[i-1][j-1]) / (2h)`.
    pub fn diff_x(&self) -> CellField<T> {
        let n = self.grid().n();
        let c = cast::<T>(0.5) / self.grid().h();
        let a = self.slice();
        let mut out = CellField::zeros(self.grid());
        let o = out.slice_mut();
        for i in 0..n {
            let r0 = &a[i * n..(i + 1) * n];
            let dn = wrap_down(i, n);
            let rm = &a[dn * n..(dn + 1) * n];
            let dst = &mut o[i * n..(i + 1) * n];
            for j in 0..n {
                let jm = wrap_down(j, n);
                dst[j] = (r0[j] - rm[j] + r0[jm] - rm[jm]) * c;
            }
        }
        out
    }

    /// Four-point y-difference back onto cells.
    pub fn diff_y(&self) -> CellField<T> {
        let n = self.grid().n();
        let c = cast::<T>(0.5) / self.grid().h();
        let a = self.slice();
        let mut out = CellField::zeros(self.grid());
        let o = out.slice_mut();
        for i in 0..n {
            let r0 = &a[i * n..(i + 1) * n];
            let dn = wrap_down(i, n);
            let rm = &a[dn * n..(dn + 1) * n];
            let dst = &mut o[i * n..(i + 1) * n];
            for j in 0..n {
                let jm = wrap_down(j, n);
                dst[j] = (r0[j] - r0[jm] + rm[j] - rm[jm]) * c;
            }
        }
        out
    }

    /// Average of the four vertices surrounding each cell.
    pub fn avg_cell(&self) -> CellField<T> {
        let n = self.grid().n();
        let quarter = cast::<T>(0.25);
        let a = self.slice();
        let mut out = CellField::zeros(self.grid());
        let o = out.slice_mut();
        for i in 0..n {
            let r0 = &a[i * n..(i + 1) * n];
            let dn = wrap_down(i, n);
            let rm = &a[dn * n..(dn + 1) * n];
            let dst = &mut o[i * n..(i + 1) * n];
            for j in 0..n {
                let jm = wrap_down(j, n);
                dst[j] = quarter * (r0[j] + rm[j] + r0[jm] + rm[jm]);
            }
        }
        out
    }
}

/// Multiply both gradient components by the p-Laplacian vertex weight
/// `(gx^2 + gy^2)^((p-2)/2)`.
pub(crate) fn weighted_gradient<T: Scalar>(
    gx: &VertexField<T>,
    gy: &VertexField<T>,
    p: T,
) -> (VertexField<T>, VertexField<T>) {
    let grid = gx.grid();
    let e = (p - cast(2.0)) * cast(0.5);
    let mut wx = VertexField::zeros(grid);
    let mut wy = VertexField::zeros(grid);
    {
        let (xs, ys) = (gx.slice(), gy.slice());
        let ox = wx.slice_mut();
        let oy = wy.slice_mut();
        for k in 0..xs.len() {
            let r = pow_nonneg(xs[k] * xs[k] + ys[k] * ys[k], e);
            ox[k] = r * xs[k];
            oy[k] = r * ys[k];
        }
    }
    (wx, wy)
}

/// `base^e` for `base >= 0`, `e >= 0`, with fast paths for the small integer
/// exponents that even p produce.
#[inline]
pub(crate) fn pow_nonneg<T: Scalar>(base: T, e: T) -> T {
    if e == T::zero() {
        T::one()
    } else if e == T::one() {
        base
    } else if e == cast(2.0) {
        base * base
    } else if e == cast(3.0) {
        base * base * base
    } else {
        base.powf(e)
    }
}
