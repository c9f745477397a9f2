//! Fourier diagonalization of the constant-coefficient periodic operators.
//!
//! On the periodic grid the five-point Laplacian has eigenvalues
//! `-lam[k][l]` with `lam[k][l] = (4/h^2) (sin^2(pi k/n) + sin^2(pi l/n))`
//! on the sampled Fourier modes, so the inverse Laplacian and the
//! fourth/sixth-order preconditioner solves are all per-mode divisions.

use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::norms::norm_inf;
use crate::grid::{CellField, GridSpec};
use crate::scalar::{cast, Scalar};

/// Default mean-zero tolerance factor, relative to the max-norm of the field.
/// Chosen to flag genuine mass-conservation drift while tolerating roundoff.
pub const DEFAULT_MEAN_TOL: f64 = 1e-12;

/// Cached transforms and operator symbols for one grid.
///
/// Solve calls take `&mut self` because they reuse internal buffers; distinct
/// workspaces are fully independent. Rebuild the workspace when the grid
/// changes.
pub struct SpectralWorkspace<T: Scalar> {
    grid: GridSpec<T>,
    lam: Array2<T>,
    fwd: Arc<dyn Fft<T>>,
    inv: Arc<dyn Fft<T>>,
    buf: Vec<Complex<T>>,
    buf_t: Vec<Complex<T>>,
    scratch: Vec<Complex<T>>,
    mean_tol_factor: T,
}

impl<T: Scalar> SpectralWorkspace<T> {
    pub fn new(grid: GridSpec<T>) -> Self {
        Self::with_mean_tol(grid, cast(DEFAULT_MEAN_TOL))
    }

    /// Workspace with a custom mean-zero tolerance factor (useful on tiny
    /// grids where single-mode roundoff is comparatively large).
    pub fn with_mean_tol(grid: GridSpec<T>, mean_tol_factor: T) -> Self {
        let n = grid.n();
        let h = grid.h();
        let four_over_h2 = cast::<T>(4.0) / (h * h);
        let pi_over_n = T::PI() / T::from_usize(n).unwrap();
        let sin2: Vec<T> = (0..n)
            .map(|k| {
                let s = (pi_over_n * T::from_usize(k).unwrap()).sin();
                s * s
            })
            .collect();
        let lam = Array2::from_shape_fn((n, n), |(k, l)| four_over_h2 * (sin2[k] + sin2[l]));

        let mut planner = FftPlanner::<T>::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let scratch_len = fwd.get_inplace_scratch_len().max(inv.get_inplace_scratch_len());
        Self {
            grid,
            lam,
            fwd,
            inv,
            buf: vec![Complex::new(T::zero(), T::zero()); n * n],
            buf_t: vec![Complex::new(T::zero(), T::zero()); n * n],
            scratch: vec![Complex::new(T::zero(), T::zero()); scratch_len],
            mean_tol_factor: mean_tol_factor,
        }
    }

    pub fn grid(&self) -> GridSpec<T> {
        self.grid
    }

    /// Eigenvalue of the negated five-point Laplacian at mode `(k, l)`.
    pub fn lam(&self, k: usize, l: usize) -> T {
        self.lam[[k, l]]
    }

    pub fn eigenvalues(&self) -> &Array2<T> {
        &self.lam
    }

    /// Mean-zero tolerance for a given field: `factor * norm_inf(field)`.
    pub fn mean_tol(&self, field: &CellField<T>) -> T {
        self.mean_tol_factor * norm_inf(field)
    }

    /// Check the mean-zero precondition, returning the mean on success.
    pub fn check_mean_zero(&self, field: &CellField<T>) -> Result<T> {
        let mean = field.mean();
        let tol = self.mean_tol(field);
        if mean.abs() > tol {
            return Err(Error::NonZeroMean {
                mean: mean.to_f64().unwrap_or(f64::NAN),
                tol: tol.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(mean)
    }

    /// Apply a per-mode multiplier `g(k, l, lam[k][l])` to a field:
    /// transform, scale each mode, transform back.
    fn apply_symbol(&mut self, field: &CellField<T>, g: impl Fn(usize, usize, T) -> T) -> CellField<T> {
        let n = self.grid.n();
        assert_eq!(field.grid(), self.grid, "field grid must match workspace");

        let Self { buf, buf_t, scratch, fwd, inv, lam, .. } = self;
        let src = field.values().as_slice().expect("standard layout");
        for (b, &v) in buf.iter_mut().zip(src) {
            *b = Complex::new(v, T::zero());
        }
        // rows (y-axis), transpose, rows again (x-axis)
        for chunk in buf.chunks_exact_mut(n) {
            fwd.process_with_scratch(chunk, scratch);
        }
        transpose(buf, buf_t, n);
        for chunk in buf_t.chunks_exact_mut(n) {
            fwd.process_with_scratch(chunk, scratch);
        }
        // buf_t[l * n + k] now holds the coefficient of mode (k, l)
        let lam_s = lam.as_slice().expect("standard layout");
        for l in 0..n {
            for k in 0..n {
                let m = g(k, l, lam_s[k * n + l]);
                buf_t[l * n + k] = buf_t[l * n + k].scale(m);
            }
        }
        for chunk in buf_t.chunks_exact_mut(n) {
            inv.process_with_scratch(chunk, scratch);
        }
        transpose(buf_t, buf, n);
        for chunk in buf.chunks_exact_mut(n) {
            inv.process_with_scratch(chunk, scratch);
        }

        let norm = T::one() / T::from_usize(n * n).unwrap();
        let mut out = CellField::zeros(self.grid);
        for (o, b) in out.slice_mut().iter_mut().zip(buf.iter()) {
            *o = b.re * norm;
        }
        out
    }

    /// Forward transform; entry `(k, l)` is the coefficient of the sampled
    /// mode `exp(2 pi i (k x + l y) / L)` (unnormalized).
    pub fn forward(&mut self, field: &CellField<T>) -> Array2<Complex<T>> {
        let n = self.grid.n();
        assert_eq!(field.grid(), self.grid, "field grid must match workspace");
        let Self { buf, buf_t, scratch, fwd, .. } = self;
        let src = field.values().as_slice().expect("standard layout");
        for (b, &v) in buf.iter_mut().zip(src) {
            *b = Complex::new(v, T::zero());
        }
        for chunk in buf.chunks_exact_mut(n) {
            fwd.process_with_scratch(chunk, scratch);
        }
        transpose(buf, buf_t, n);
        for chunk in buf_t.chunks_exact_mut(n) {
            fwd.process_with_scratch(chunk, scratch);
        }
        transpose(buf_t, buf, n);
        Array2::from_shape_vec((n, n), buf.clone()).expect("shape")
    }

    /// Inverse of [`Self::forward`] (normalized so the round trip is the
    /// identity); returns the real part.
    pub fn inverse(&mut self, coeffs: &Array2<Complex<T>>) -> CellField<T> {
        let n = self.grid.n();
        assert_eq!(coeffs.dim(), (n, n));
        let Self { buf, buf_t, scratch, inv, .. } = self;
        buf.copy_from_slice(coeffs.as_slice().expect("standard layout"));
        transpose(buf, buf_t, n);
        for chunk in buf_t.chunks_exact_mut(n) {
            inv.process_with_scratch(chunk, scratch);
        }
        transpose(buf_t, buf, n);
        for chunk in buf.chunks_exact_mut(n) {
            inv.process_with_scratch(chunk, scratch);
        }
        let norm = T::one() / T::from_usize(n * n).unwrap();
        let mut out = CellField::zeros(self.grid);
        for (o, b) in out.slice_mut().iter_mut().zip(buf.iter()) {
            *o = b.re * norm;
        }
        out
    }

    /// Solve `-laplacian(x) = zeta` for the unique mean-zero solution.
    ///
    /// `zeta` must be mean-zero up to the workspace tolerance; a violation
    /// signals a mass-conservation bug upstream.
    pub fn solve_poisson(&mut self, zeta: &CellField<T>) -> Result<CellField<T>> {
        self.check_mean_zero(zeta)?;
        Ok(self.apply_symbol(zeta, |k, l, lam| {
            if k == 0 && l == 0 {
                T::zero()
            } else {
                T::one() / lam
            }
        }))
    }

    /// Solve the fourth-order preconditioner system
    /// `(I - s laplacian + s eps^2 laplacian^2) d = r`.
    ///
    /// The symbol `1 + s lam + s eps^2 lam^2` is at least 1, so this is total.
    pub fn solve_fourth_order(&mut self, r: &CellField<T>, s: T, eps: T) -> CellField<T> {
        let se2 = s * eps * eps;
        self.apply_symbol(r, |_, _, lam| T::one() / (T::one() + s * lam + se2 * lam * lam))
    }

    /// Solve the sixth-order preconditioner system
    /// `(s lambda I - s laplacian + s eps^2 laplacian^2 + T) d = r`
    /// on mean-zero fields, where `T` is the inverse of the negated
    /// Laplacian (symbol `1/lam`).
    pub fn solve_sixth_order(
        &mut self,
        r: &CellField<T>,
        s: T,
        eps: T,
        lambda: T,
    ) -> Result<CellField<T>> {
        self.check_mean_zero(r)?;
        let se2 = s * eps * eps;
        let sl = s * lambda;
        Ok(self.apply_symbol(r, |k, l, lam| {
            if k == 0 && l == 0 {
                T::zero()
            } else {
                T::one() / (sl + s * lam + se2 * lam * lam + T::one() / lam)
            }
        }))
    }
}

fn transpose<T: Scalar>(src: &[Complex<T>], dst: &mut [Complex<T>], n: usize) {
    for i in 0..n {
        for j in 0..n {
            dst[j * n + i] = src[i * n + j];
        }
    }
}
