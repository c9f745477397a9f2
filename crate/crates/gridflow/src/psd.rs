//! The preconditioned steepest descent iteration.
//!
//! Each sweep solves the constant-coefficient preconditioner system for the
//! search direction, then finds the unique zero of
//! `q(alpha) = (N[u + alpha d] - f, d)` along it. `q` is strictly increasing
//! (the energy is strictly convex), and for even integer p it is a
//! polynomial of degree p-1 whose coefficients are assembled exactly from
//! per-vertex gradient data; otherwise `q` is evaluated directly inside the
//! same safeguarded root finder.

use crate::error::{Error, Result};
use crate::grid::norms::norm2;
use crate::grid::CellField;
use crate::problems::Problem;
use crate::scalar::{cast, Scalar};
use crate::spectral::SpectralWorkspace;

/// Solver controls.
#[derive(Debug, Clone, Copy)]
pub struct PsdConfig<T> {
    /// Relative residual tolerance (against the L2 norm of the data).
    pub tol_rel: T,
    /// Absolute residual tolerance.
    pub tol_abs: T,
    /// Iteration cap; exceeding it is reported, not an error.
    pub max_iter: usize,
    /// Line-search residual tolerance, relative to `|q(0)|`.
    pub ls_tol: T,
    pub ls_max_iter: usize,
}

impl<T: Scalar> Default for PsdConfig<T> {
    fn default() -> Self {
        Self {
            tol_rel: cast(1e-9),
            tol_abs: cast(1e-14),
            max_iter: 200,
            ls_tol: cast(1e-12),
            ls_max_iter: 100,
        }
    }
}

/// Per-iteration history of one solve.
#[derive(Debug, Clone)]
pub struct PsdReport<T> {
    /// Number of update steps taken.
    pub iterations: usize,
    pub converged: bool,
    /// L2 residual norms, one per visited iterate (length `iterations + 1`).
    pub residual_history: Vec<T>,
    /// Accepted step lengths, one per update.
    pub alpha_history: Vec<T>,
    /// Energies of the visited iterates; nonincreasing.
    pub energy_history: Vec<T>,
}

impl<T> Default for PsdReport<T> {
    fn default() -> Self {
        Self {
            iterations: 0,
            converged: false,
            residual_history: Vec::new(),
            alpha_history: Vec::new(),
            energy_history: Vec::new(),
        }
    }
}

impl<T: Scalar> PsdReport<T> {
    pub fn final_residual(&self) -> T {
        *self.residual_history.last().expect("history never empty")
    }
}

/// Solve the preconditioner system against the current residual.
pub fn search_direction<T: Scalar, P: Problem<T>>(
    u: &CellField<T>,
    prob: &P,
    ws: &mut SpectralWorkspace<T>,
) -> Result<CellField<T>> {
    let r = prob.residual(u, ws)?;
    prob.solve_preconditioner(&r, ws)
}

/// Find the zero of `q(alpha) = (N[u + alpha d] - f, d)`.
///
/// Requires `q(0) < 0`, which holds whenever `d` is the preconditioned
/// residual of a non-converged iterate.
pub fn line_search<T: Scalar, P: Problem<T>>(
    u: &CellField<T>,
    d: &CellField<T>,
    prob: &P,
    ws: &mut SpectralWorkspace<T>,
    cfg: &PsdConfig<T>,
) -> Result<T> {
    let (a0, a1) = prob.line_search_linear_part(u, d, ws)?;
    let s = prob.s();
    let p = prob.p();
    let h = u.grid().h();
    let quad = gradient_quadratics(u, d);
    let weight = s * h * h;

    match even_exponent(p) {
        Some(m) => {
            let coeffs = assemble_polynomial(&quad, m, weight, a0, a1);
            let deriv: Vec<T> = coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| T::from_usize(k).unwrap() * *c)
                .collect();
            let q = |x: T| horner(&coeffs, x);
            let dq = |x: T| horner(&deriv, x);
            find_root(q, Some(dq), cfg)
        }
        None => {
            let e = (p - cast(2.0)) * cast::<T>(0.5);
            let q = |x: T| {
                let mut acc = T::zero();
                for t in quad.iter() {
                    let base = t.a + (t.b + t.b) * x + t.c * x * x;
                    acc += crate::grid::ops::pow_nonneg(base.max(T::zero()), e) * (t.b + t.c * x);
                }
                a0 + a1 * x + weight * acc
            };
            find_root(q, None::<fn(T) -> T>, cfg)
        }
    }
}

/// Run the PSD loop from `u0` until the residual satisfies
/// `|r| <= tol_abs + tol_rel |f|` or the iteration cap is hit.
pub fn psd_solve<T: Scalar, P: Problem<T>>(
    u0: &CellField<T>,
    prob: &P,
    ws: &mut SpectralWorkspace<T>,
    cfg: &PsdConfig<T>,
) -> Result<(CellField<T>, PsdReport<T>)> {
    let threshold = cfg.tol_abs + cfg.tol_rel * prob.data_norm2();
    let mut u = u0.clone();
    let mut report = PsdReport::default();
    loop {
        let r = prob.residual(&u, ws)?;
        let rnorm = norm2(&r);
        report.residual_history.push(rnorm);
        report.energy_history.push(prob.energy(&u, ws)?);
        if rnorm <= threshold {
            report.converged = true;
            break;
        }
        if report.iterations >= cfg.max_iter {
            report.converged = false;
            break;
        }
        let d = prob.solve_preconditioner(&r, ws)?;
        let alpha = line_search(&u, &d, prob, ws, cfg)?;
        u.axpy(alpha, &d);
        report.alpha_history.push(alpha);
        report.iterations += 1;
    }
    Ok((u, report))
}

/// Per-vertex quadratic data of `|grad(u + alpha d)|^2 = a + 2 b alpha + c alpha^2`.
struct VertexQuadratic<T> {
    a: T,
    b: T,
    c: T,
}

fn gradient_quadratics<T: Scalar>(u: &CellField<T>, d: &CellField<T>) -> Vec<VertexQuadratic<T>> {
    let gxu = u.grad_x_vertex();
    let gyu = u.grad_y_vertex();
    let gxd = d.grad_x_vertex();
    let gyd = d.grad_y_vertex();
    let (xu, yu, xd, yd) = (gxu.slice(), gyu.slice(), gxd.slice(), gyd.slice());
    (0..xu.len())
        .map(|k| VertexQuadratic {
            a: xu[k] * xu[k] + yu[k] * yu[k],
            b: xu[k] * xd[k] + yu[k] * yd[k],
            c: xd[k] * xd[k] + yd[k] * yd[k],
        })
        .collect()
}

/// For even integer `p >= 2`, returns `(p - 2) / 2`.
fn even_exponent<T: Scalar>(p: T) -> Option<usize> {
    let pf = p.to_f64()?;
    let rounded = pf.round();
    if (pf - rounded).abs() < 1e-9 && rounded >= 2.0 && (rounded as u64) % 2 == 0 {
        Some(((rounded as usize) - 2) / 2)
    } else {
        None
    }
}

/// Coefficients of `q` for even p: per vertex, expand
/// `(a + 2b x + c x^2)^m (b + c x)`, sum over vertices, scale by `s h^2`,
/// and add the linear contributions.
fn assemble_polynomial<T: Scalar>(
    quad: &[VertexQuadratic<T>],
    m: usize,
    weight: T,
    a0: T,
    a1: T,
) -> Vec<T> {
    let degree = 2 * m + 1;
    let mut acc = vec![T::zero(); degree + 1];
    let mut cur: Vec<T> = Vec::with_capacity(degree + 1);
    let mut nxt: Vec<T> = Vec::with_capacity(degree + 1);
    for t in quad {
        cur.clear();
        cur.push(T::one());
        let base = [t.a, t.b + t.b, t.c];
        for _ in 0..m {
            nxt.clear();
            nxt.resize(cur.len() + 2, T::zero());
            for (i, &ci) in cur.iter().enumerate() {
                for (j, &bj) in base.iter().enumerate() {
                    nxt[i + j] += ci * bj;
                }
            }
            std::mem::swap(&mut cur, &mut nxt);
        }
        // multiply by (b + c x) and accumulate
        for (i, &ci) in cur.iter().enumerate() {
            acc[i] += ci * t.b;
            acc[i + 1] += ci * t.c;
        }
    }
    for a in acc.iter_mut() {
        *a *= weight;
    }
    acc[0] += a0;
    acc[1] += a1;
    acc
}

fn horner<T: Scalar>(coeffs: &[T], x: T) -> T {
    let mut acc = T::zero();
    for &c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Safeguarded root finder for a strictly increasing function with
/// `q(0) < 0`: bracket by doubling from [0, 1], then Newton (when a
/// derivative is available) or secant steps, falling back to bisection
/// whenever a candidate leaves the bracket.
fn find_root<T: Scalar>(
    q: impl Fn(T) -> T,
    dq: Option<impl Fn(T) -> T>,
    cfg: &PsdConfig<T>,
) -> Result<T> {
    let q0 = q(T::zero());
    let scale = q0.abs();
    if q0 >= T::zero() {
        // already orthogonal (or numerically so): accept a zero step rather
        // than hunting for a root left of the origin
        if q0 <= cfg.ls_tol {
            return Ok(T::zero());
        }
        return Err(Error::NotDescent { q0: q0.to_f64().unwrap_or(f64::NAN) });
    }
    let tol_q = cfg.ls_tol * scale;

    let cap = cast::<T>((1u64 << 60) as f64);
    let mut lo = T::zero();
    let mut qlo = q0;
    let mut hi = T::one();
    let mut qhi = q(hi);
    while qhi <= T::zero() {
        lo = hi;
        qlo = qhi;
        hi = hi + hi;
        if hi > cap {
            return Err(Error::NoBracket);
        }
        qhi = q(hi);
    }

    let mut x = cast::<T>(0.5) * (lo + hi);
    for _ in 0..cfg.ls_max_iter {
        let qx = q(x);
        if qx.abs() <= tol_q {
            return Ok(x);
        }
        if qx < T::zero() {
            lo = x;
            qlo = qx;
        } else {
            hi = x;
            qhi = qx;
        }
        if hi - lo <= cfg.ls_tol * (T::one() + hi) {
            return Ok(hi);
        }
        let candidate = match &dq {
            Some(dq) => {
                let slope = dq(x);
                if slope > T::zero() {
                    x - qx / slope
                } else {
                    T::nan()
                }
            }
            // secant through the bracket endpoints; qlo < 0 < qhi
            None => lo + (hi - lo) * (-qlo) / (qhi - qlo),
        };
        x = if candidate.is_finite() && candidate > lo && candidate < hi {
            candidate
        } else {
            cast::<T>(0.5) * (lo + hi)
        };
    }
    Ok(cast::<T>(0.5) * (lo + hi))
}
