//! Staggered periodic grid: cell-, vertex-, and edge-centered fields on a
//! uniform n-by-n mesh of a square domain (0,L)^2, plus the finite-difference
//! calculus ([`ops`]) and discrete inner products and norms ([`norms`]).
//!
//! Layout conventions:
//! - storage is 0-based row-major with x as the first axis: `field[(i, j)]`
//!   holds the value at x-index `i`, y-index `j`;
//! - cell centers sit at `(i + 1/2) h`, vertices at `(i + 1) h`, so vertex
//!   `(i, j)` is the upper-right corner of cell `(i, j)`;
//! - east-west edges carry x-differences (vertex x, cell y), north-south
//!   edges carry y-differences (cell x, vertex y);
//! - all index arithmetic wraps modulo n.

pub mod norms;
pub mod ops;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::scalar::{cast, Scalar};

/// Geometry of a periodic square grid: `n` cells per axis on `(0, L)^2`,
/// spacing `h = L / n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    n: usize,
    length: T,
    h: T,
}

impl<T: Scalar> GridSpec<T> {
    pub fn new(n: usize, length: T) -> Result<Self> {
        if n < 4 {
            return Err(Error::InvalidParameter("grid needs at least 4 cells per axis"));
        }
        if !(length > T::zero()) || !length.is_finite() {
            return Err(Error::InvalidParameter("domain length must be positive and finite"));
        }
        let h = length / T::from_usize(n).unwrap();
        Ok(Self { n, length, h })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn length(&self) -> T {
        self.length
    }

    /// Grid spacing h = L / n.
    #[inline]
    pub fn h(&self) -> T {
        self.h
    }

    /// Number of cells (equivalently vertices or edges of one family).
    #[inline]
    pub fn cell_count(&self) -> usize {
        self.n * self.n
    }

    /// Domain area L^2.
    #[inline]
    pub fn area(&self) -> T {
        self.length * self.length
    }

    /// x-coordinate of cell center i.
    #[inline]
    pub fn cell_x(&self, i: usize) -> T {
        (T::from_usize(i).unwrap() + cast(0.5)) * self.h
    }

    /// x-coordinate of vertex i (the corner shared by cells i and i+1).
    #[inline]
    pub fn vertex_x(&self, i: usize) -> T {
        T::from_usize(i + 1).unwrap() * self.h
    }
}

macro_rules! staggered_field {
    ($(#[$doc:meta])* $name:ident, x: $xc:ident, y: $yc:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name<T> {
            grid: GridSpec<T>,
            data: Array2<T>,
        }

        impl<T: Scalar> $name<T> {
            pub fn zeros(grid: GridSpec<T>) -> Self {
                Self { grid, data: Array2::zeros((grid.n, grid.n)) }
            }

            /// Sample `f(x, y)` at this field's native locations.
            pub fn from_fn(grid: GridSpec<T>, mut f: impl FnMut(T, T) -> T) -> Self {
                let data = Array2::from_shape_fn((grid.n, grid.n), |(i, j)| {
                    f(grid.$xc(i), grid.$yc(j))
                });
                Self { grid, data }
            }

            pub fn from_values(grid: GridSpec<T>, data: Array2<T>) -> Self {
                assert_eq!(data.dim(), (grid.n, grid.n), "field shape must match grid");
                Self { grid, data }
            }

            #[inline]
            pub fn grid(&self) -> GridSpec<T> {
                self.grid
            }

            #[inline]
            pub fn values(&self) -> &Array2<T> {
                &self.data
            }

            #[inline]
            pub fn values_mut(&mut self) -> &mut Array2<T> {
                &mut self.data
            }

            #[inline]
            pub(crate) fn slice(&self) -> &[T] {
                self.data.as_slice().expect("standard layout")
            }

            #[inline]
            pub(crate) fn slice_mut(&mut self) -> &mut [T] {
                self.data.as_slice_mut().expect("standard layout")
            }

            /// Elementwise map into a new field at the same locations.
            pub fn map(&self, f: impl Fn(T) -> T) -> Self {
                Self { grid: self.grid, data: self.data.map(|&v| f(v)) }
            }

            /// In-place `self += alpha * other`.
            pub fn axpy(&mut self, alpha: T, other: &Self) {
                assert_eq!(self.grid, other.grid, "fields must share a grid");
                let a = self.data.as_slice_mut().expect("standard layout");
                let b = other.data.as_slice().expect("standard layout");
                for (x, &y) in a.iter_mut().zip(b) {
                    *x += alpha * y;
                }
            }

            pub fn scale(&self, c: T) -> Self {
                self.map(|v| c * v)
            }
        }

        impl<T> std::ops::Index<(usize, usize)> for $name<T> {
            type Output = T;
            #[inline]
            fn index(&self, idx: (usize, usize)) -> &T {
                &self.data[[idx.0, idx.1]]
            }
        }

        impl<T> std::ops::IndexMut<(usize, usize)> for $name<T> {
            #[inline]
            fn index_mut(&mut self, idx: (usize, usize)) -> &mut T {
                &mut self.data[[idx.0, idx.1]]
            }
        }

        impl<T: Scalar> std::ops::Add for &$name<T> {
            type Output = $name<T>;
            fn add(self, rhs: Self) -> $name<T> {
                assert_eq!(self.grid, rhs.grid, "fields must share a grid");
                $name { grid: self.grid, data: &self.data + &rhs.data }
            }
        }

        impl<T: Scalar> std::ops::Sub for &$name<T> {
            type Output = $name<T>;
            fn sub(self, rhs: Self) -> $name<T> {
                assert_eq!(self.grid, rhs.grid, "fields must share a grid");
                $name { grid: self.grid, data: &self.data - &rhs.data }
            }
        }
    };
}

staggered_field!(
    /// Cell-centered scalar field; value `(i, j)` lives at `((i+1/2)h, (j+1/2)h)`.
    CellField, x: cell_x, y: cell_x
);
staggered_field!(
    /// Vertex-centered scalar field; value `(i, j)` lives at `((i+1)h, (j+1)h)`.
    VertexField, x: vertex_x, y: vertex_x
);
staggered_field!(
    /// East-west edge field (x-staggered); value `(i, j)` lives at `((i+1)h, (j+1/2)h)`.
    EdgeFieldEW, x: vertex_x, y: cell_x
);
staggered_field!(
    /// North-south edge field (y-staggered); value `(i, j)` lives at `((i+1/2)h, (j+1)h)`.
    EdgeFieldNS, x: cell_x, y: vertex_x
);

/// Vertex-centered vector field, the codomain of the discrete gradient.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexVectorField<T> {
    pub x: VertexField<T>,
    pub y: VertexField<T>,
}

impl<T: Scalar> VertexVectorField<T> {
    pub fn new(x: VertexField<T>, y: VertexField<T>) -> Self {
        assert_eq!(x.grid(), y.grid(), "components must share a grid");
        Self { x, y }
    }

    pub fn grid(&self) -> GridSpec<T> {
        self.x.grid()
    }
}

impl<T: Scalar> CellField<T> {
    /// Discrete average (h^2 / L^2) sum of all values.
    pub fn mean(&self) -> T {
        let sum: T = self.slice().iter().copied().sum();
        sum / T::from_usize(self.grid.cell_count()).unwrap()
    }

    /// Subtract the mean; idempotent.
    pub fn project_mean_zero(&self) -> Self {
        let m = self.mean();
        self.map(|v| v - m)
    }

    /// Projection applied twice. When the input is a small difference of
    /// large fields, the first pass subtracts a mean much larger than the
    /// surviving values and leaves per-element roundoff at the scale of the
    /// cancelled terms; the second pass removes that residue.
    pub(crate) fn project_mean_zero_strict(&self) -> Self {
        self.project_mean_zero().project_mean_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.slice().iter().all(|v| v.is_finite())
    }
}
