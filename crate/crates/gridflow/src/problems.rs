//! The two discrete minimization problems behind the solver.
//!
//! The fourth-order problem seeks `u` with
//! `u - s div(|grad u|^(p-2) grad u) + s eps^2 lap^2 u = f`;
//! the sixth-order (conserved) problem couples that structure with the
//! inverse Laplacian and works on the affine slice `mean(u) = mean(g)`.
//! Both are gradients of strictly convex energies, which is what the PSD
//! iteration exploits.

use crate::error::{Error, Result};
use crate::grid::norms::{
    grad_norm_2_edge_sq, grad_norm_p_pow, ip_cell, norm2, norm_inf,
};
use crate::grid::{CellField, GridSpec};
use crate::scalar::{cast, Scalar};
use crate::spectral::SpectralWorkspace;

/// Default envelope for the discrete Sobolev constant entering the
/// convergence-constant report. The closed-form bound with unit elliptic
/// regularity constant is about 5.1; sampled ratios stay well below it.
pub const DEFAULT_C9: f64 = 6.0;

/// Apply the fourth-order nonlinear operator `N[v] = v - s pLap(v) + s eps^2 lap^2 v`.
pub fn nonlinear_fourth<T: Scalar>(v: &CellField<T>, s: T, eps: T, p: T) -> CellField<T> {
    let mut out = v.clone();
    out.axpy(-s, &v.p_laplacian(p));
    out.axpy(s * eps * eps, &v.biharmonic());
    out
}

/// Apply the sixth-order nonlinear operator
/// `N[v] = s lambda v - s pLap(v) + s eps^2 lap^2 v - T[g - v]`.
///
/// `v` must satisfy `mean(v) = mean(g)` so that `g - v` is mean-zero.
pub fn nonlinear_sixth<T: Scalar>(
    v: &CellField<T>,
    s: T,
    eps: T,
    p: T,
    lambda: T,
    g: &CellField<T>,
    ws: &mut SpectralWorkspace<T>,
) -> Result<CellField<T>> {
    let mut out = v.scale(s * lambda);
    out.axpy(-s, &v.p_laplacian(p));
    out.axpy(s * eps * eps, &v.biharmonic());
    // the projection strips mean roundoff so the Poisson solve sees an
    // exactly mean-zero right-hand side
    let t = ws.solve_poisson(&(g - v).project_mean_zero_strict())?;
    out.axpy(-T::one(), &t);
    Ok(out)
}

/// Theoretical convergence constants of the PSD contraction,
/// `gap(k+1) <= c7 * gap(k)` with `c7 = 1 - c5 / (2 c6)`.
///
/// Diagnostic only; the solver never consults these.
#[derive(Debug, Clone, Copy)]
pub struct ConvergenceConstants<T> {
    /// Monotonicity constant of the gradient against the preconditioner norm.
    pub c5: T,
    /// Bound on the second variation against the preconditioner norm.
    pub c6: T,
    /// Contraction factor, in (0, 1).
    pub c7: T,
    /// Strong-convexity constant (equals c5 here).
    pub c8: T,
    /// Energy-derived gradient bound `(p E0)^(1/p)`.
    pub c10: T,
}

fn assemble_constants<T: Scalar>(c5: T, c6: T, c10: T) -> ConvergenceConstants<T> {
    let c7 = T::one() - c5 / (cast::<T>(2.0) * c6);
    ConvergenceConstants { c5, c6, c7, c8: c5, c10 }
}

fn c10_from_e0<T: Scalar>(e0: T, p: T, data_nonzero: bool) -> Result<T> {
    if e0 <= T::zero() {
        if data_nonzero {
            return Err(Error::InvalidE0 { e0: e0.to_f64().unwrap_or(f64::NAN) });
        }
        return Ok(T::zero());
    }
    Ok((p * e0).powf(T::one() / p))
}

/// A nonlinear problem solvable by the PSD loop. Implementations provide the
/// energy, its gradient (as the negated residual), the preconditioner solve,
/// and the problem-specific linear pieces of the line-search function.
pub trait Problem<T: Scalar> {
    fn grid(&self) -> GridSpec<T>;
    /// Time-step-like weight multiplying the nonlinear term.
    fn s(&self) -> T;
    /// p-Laplacian exponent.
    fn p(&self) -> T;
    /// L2 norm of the data `f`, the scale of the relative stopping test.
    fn data_norm2(&self) -> T;

    fn energy(&self, u: &CellField<T>, ws: &mut SpectralWorkspace<T>) -> Result<T>;

    /// `f - N[u]`, the negated energy gradient (projected to mean zero for
    /// the conserved problem).
    fn residual(&self, u: &CellField<T>, ws: &mut SpectralWorkspace<T>)
        -> Result<CellField<T>>;

    /// Solve the preconditioner system `L d = r`.
    fn solve_preconditioner(
        &self,
        r: &CellField<T>,
        ws: &mut SpectralWorkspace<T>,
    ) -> Result<CellField<T>>;

    /// Squared preconditioner norm `(v, L v)`.
    fn precond_norm_sq(&self, v: &CellField<T>, ws: &mut SpectralWorkspace<T>) -> Result<T>;

    /// Constant and linear coefficients `(a0, a1)` contributed to
    /// `q(alpha) = (N[u + alpha d] - f, d)` by everything except the
    /// p-Laplacian term.
    fn line_search_linear_part(
        &self,
        u: &CellField<T>,
        d: &CellField<T>,
        ws: &mut SpectralWorkspace<T>,
    ) -> Result<(T, T)>;

    /// Closed-form convergence constants given an energy bound `E0` on the
    /// initial iterate and a Sobolev constant `c9` (see [`DEFAULT_C9`]).
    fn convergence_constants(&self, e0: T, c9: T) -> Result<ConvergenceConstants<T>>;
}

/// Fourth-order problem: parameters and data of one nonlinear solve.
#[derive(Debug, Clone)]
pub struct FourthOrderProblem<T> {
    s: T,
    eps: T,
    p: T,
    f: CellField<T>,
}

impl<T: Scalar> FourthOrderProblem<T> {
    pub fn new(s: T, eps: T, p: T, f: CellField<T>) -> Result<Self> {
        if !(s > T::zero()) {
            return Err(Error::InvalidParameter("s must be positive"));
        }
        if !(eps > T::zero() && eps <= T::one()) {
            return Err(Error::InvalidParameter("eps must lie in (0, 1]"));
        }
        if !(p >= cast(2.0)) {
            return Err(Error::InvalidParameter("p must be >= 2"));
        }
        Ok(Self { s, eps, p, f })
    }

    pub fn eps(&self) -> T {
        self.eps
    }

    pub fn f(&self) -> &CellField<T> {
        &self.f
    }

    pub fn apply_nonlinear(&self, v: &CellField<T>) -> CellField<T> {
        nonlinear_fourth(v, self.s, self.eps, self.p)
    }
}

impl<T: Scalar> Problem<T> for FourthOrderProblem<T> {
    fn grid(&self) -> GridSpec<T> {
        self.f.grid()
    }

    fn s(&self) -> T {
        self.s
    }

    fn p(&self) -> T {
        self.p
    }

    fn data_norm2(&self) -> T {
        norm2(&self.f)
    }

    fn energy(&self, u: &CellField<T>, _ws: &mut SpectralWorkspace<T>) -> Result<T> {
        let half = cast::<T>(0.5);
        let diff = u - &self.f;
        let lap = u.laplacian();
        Ok(half * ip_cell(&diff, &diff)
            + self.s / self.p * grad_norm_p_pow(u, self.p)
            + half * self.s * self.eps * self.eps * ip_cell(&lap, &lap))
    }

    fn residual(&self, u: &CellField<T>, _ws: &mut SpectralWorkspace<T>) -> Result<CellField<T>> {
        Ok(&self.f - &self.apply_nonlinear(u))
    }

    fn solve_preconditioner(
        &self,
        r: &CellField<T>,
        ws: &mut SpectralWorkspace<T>,
    ) -> Result<CellField<T>> {
        Ok(ws.solve_fourth_order(r, self.s, self.eps))
    }

    fn precond_norm_sq(&self, v: &CellField<T>, _ws: &mut SpectralWorkspace<T>) -> Result<T> {
        let lap = v.laplacian();
        Ok(ip_cell(v, v)
            + self.s * grad_norm_2_edge_sq(v)
            + self.s * self.eps * self.eps * ip_cell(&lap, &lap))
    }

    fn line_search_linear_part(
        &self,
        u: &CellField<T>,
        d: &CellField<T>,
        _ws: &mut SpectralWorkspace<T>,
    ) -> Result<(T, T)> {
        let se2 = self.s * self.eps * self.eps;
        let lap_u = u.laplacian();
        let lap_d = d.laplacian();
        let a0 = ip_cell(&(u - &self.f), d) + se2 * ip_cell(&lap_u, &lap_d);
        let a1 = ip_cell(d, d) + se2 * ip_cell(&lap_d, &lap_d);
        Ok((a0, a1))
    }

    fn convergence_constants(&self, e0: T, c9: T) -> Result<ConvergenceConstants<T>> {
        let p = self.p;
        let c5 = (cast::<T>(0.5)).min(self.eps / self.s.sqrt());
        let c10 = c10_from_e0(e0, p, norm_inf(&self.f) > T::zero())?;
        let one = T::one();
        let two = cast::<T>(2.0);
        let c6 = one
            + (one / p)
                * (p - one).powf((two * p - one) / p)
                * self.eps.powf(-two * (p - one) / p)
                * self.s.powf(one / p)
                * c9
                * c9
                * crate::grid::ops::pow_nonneg(c10, p - two);
        Ok(assemble_constants(c5, c6, c10))
    }
}

/// Sixth-order (conserved) problem. The solver works with the physical-mean
/// unknown `u` satisfying `mean(u) = mean(g)`; search directions are
/// mean-zero so the constraint is preserved automatically.
#[derive(Debug, Clone)]
pub struct SixthOrderProblem<T> {
    s: T,
    eps: T,
    p: T,
    lambda: T,
    f: CellField<T>,
    g: CellField<T>,
    g_bar: T,
}

impl<T: Scalar> SixthOrderProblem<T> {
    pub fn new(s: T, eps: T, p: T, lambda: T, f: CellField<T>, g: CellField<T>) -> Result<Self> {
        if !(s > T::zero()) {
            return Err(Error::InvalidParameter("s must be positive"));
        }
        if !(eps > T::zero() && eps <= T::one()) {
            return Err(Error::InvalidParameter("eps must lie in (0, 1]"));
        }
        if !(p >= cast(2.0)) {
            return Err(Error::InvalidParameter("p must be >= 2"));
        }
        if !(lambda >= T::zero()) {
            return Err(Error::InvalidParameter("lambda must be nonnegative"));
        }
        assert_eq!(f.grid(), g.grid(), "fields must share a grid");
        let g_bar = g.mean();
        Ok(Self { s, eps, p, lambda, f, g, g_bar })
    }

    pub fn eps(&self) -> T {
        self.eps
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn f(&self) -> &CellField<T> {
        &self.f
    }

    pub fn g(&self) -> &CellField<T> {
        &self.g
    }

    /// Mean of `g`, the value `mean(u)` is pinned to.
    pub fn g_bar(&self) -> T {
        self.g_bar
    }

    pub fn apply_nonlinear(
        &self,
        v: &CellField<T>,
        ws: &mut SpectralWorkspace<T>,
    ) -> Result<CellField<T>> {
        self.check_mean(v, ws)?;
        nonlinear_sixth(v, self.s, self.eps, self.p, self.lambda, &self.g, ws)
    }

    fn check_mean(&self, u: &CellField<T>, ws: &SpectralWorkspace<T>) -> Result<()> {
        let drift = u.mean() - self.g_bar;
        // scale by whichever of u and g is larger: mean(g) itself carries
        // roundoff at the level of norm_inf(g)
        let tol = ws.mean_tol(u).max(ws.mean_tol(&self.g));
        if drift.abs() > tol {
            return Err(Error::NonZeroMean {
                mean: drift.to_f64().unwrap_or(f64::NAN),
                tol: tol.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }
}

impl<T: Scalar> Problem<T> for SixthOrderProblem<T> {
    fn grid(&self) -> GridSpec<T> {
        self.f.grid()
    }

    fn s(&self) -> T {
        self.s
    }

    fn p(&self) -> T {
        self.p
    }

    fn data_norm2(&self) -> T {
        norm2(&self.f)
    }

    fn energy(&self, u: &CellField<T>, ws: &mut SpectralWorkspace<T>) -> Result<T> {
        self.check_mean(u, ws)?;
        let half = cast::<T>(0.5);
        // with nu = u - mean(g): nu - g + mean(g) = u - g, nu + mean(g) = u
        let w = (u - &self.g).project_mean_zero_strict();
        let tw = ws.solve_poisson(&w)?;
        let shifted = u.map(|v| v - self.g_bar);
        let lap = u.laplacian();
        Ok(half * ip_cell(&w, &tw)
            + half * self.lambda * self.s * ip_cell(u, u)
            - ip_cell(&shifted, &self.f)
            + self.s / self.p * grad_norm_p_pow(u, self.p)
            + half * self.s * self.eps * self.eps * ip_cell(&lap, &lap))
    }

    fn residual(&self, u: &CellField<T>, ws: &mut SpectralWorkspace<T>) -> Result<CellField<T>> {
        let n = self.apply_nonlinear(u, ws)?;
        Ok((&self.f - &n).project_mean_zero_strict())
    }

    fn solve_preconditioner(
        &self,
        r: &CellField<T>,
        ws: &mut SpectralWorkspace<T>,
    ) -> Result<CellField<T>> {
        ws.solve_sixth_order(r, self.s, self.eps, self.lambda)
    }

    fn precond_norm_sq(&self, v: &CellField<T>, ws: &mut SpectralWorkspace<T>) -> Result<T> {
        ws.check_mean_zero(v)?;
        let tv = ws.solve_poisson(&v.project_mean_zero_strict())?;
        let lap = v.laplacian();
        Ok(self.s * self.lambda * ip_cell(v, v)
            + ip_cell(v, &tv)
            + self.s * grad_norm_2_edge_sq(v)
            + self.s * self.eps * self.eps * ip_cell(&lap, &lap))
    }

    fn line_search_linear_part(
        &self,
        u: &CellField<T>,
        d: &CellField<T>,
        ws: &mut SpectralWorkspace<T>,
    ) -> Result<(T, T)> {
        // one Poisson solve serves both alpha coefficients
        let td = ws.solve_poisson(&d.project_mean_zero_strict())?;
        let se2 = self.s * self.eps * self.eps;
        let sl = self.s * self.lambda;
        let lap_u = u.laplacian();
        let lap_d = d.laplacian();
        let a0 = sl * ip_cell(u, d) + se2 * ip_cell(&lap_u, &lap_d) - ip_cell(&self.f, d)
            + ip_cell(&(u - &self.g), &td);
        let a1 = sl * ip_cell(d, d) + se2 * ip_cell(&lap_d, &lap_d) + ip_cell(d, &td);
        Ok((a0, a1))
    }

    fn convergence_constants(&self, e0: T, c9: T) -> Result<ConvergenceConstants<T>> {
        let p = self.p;
        let one = T::one();
        let two = cast::<T>(2.0);
        let three = cast::<T>(3.0);
        let c5 = (one / three).min(self.eps.powf(cast::<T>(4.0) / three) / self.s.powf(one / three));
        let data_nonzero = norm_inf(&self.f) > T::zero() || norm_inf(&self.g) > T::zero();
        let c10 = c10_from_e0(e0, p, data_nonzero)?;
        let tp = three * p;
        let c6 = one
            + (p - one)
                * (tp / two).powf(-two / tp)
                * (tp / (tp - two)).powf((two - tp) / tp)
                * self.eps.powf((cast::<T>(4.0) - cast::<T>(6.0) * p) / tp)
                * self.s.powf(two / tp)
                * c9
                * c9
                * crate::grid::ops::pow_nonneg(c10, p - two);
        Ok(assemble_constants(c5, c6, c10))
    }
}
