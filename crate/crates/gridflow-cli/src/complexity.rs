//! Solver-complexity study on a manufactured solution: build the data so a
//! known profile solves the fourth-order problem exactly, start from a
//! perturbed sample, and record the sup-norm error against the target after
//! every PSD sweep until it falls below the threshold.

use std::f64::consts::PI;
use std::io::Write;

use gridflow::grid::norms::norm_inf;
use gridflow::grid::{CellField, GridSpec};
use gridflow::problems::{nonlinear_fourth, FourthOrderProblem};
use gridflow::psd::{line_search, search_direction, PsdConfig};
use gridflow::spectral::SpectralWorkspace;

use crate::config::ComplexityParams;
use crate::error::Result;

/// Error trace of one parameter combination.
#[derive(Debug, Clone)]
pub struct ComplexityTrace {
    pub p: f64,
    pub eps: f64,
    pub s: f64,
    pub n: usize,
    /// `gamma[k]` is the sup-norm error of iterate `k`; `gamma[0]` is the
    /// initial error.
    pub gammas: Vec<f64>,
    pub converged: bool,
}

impl ComplexityTrace {
    /// Number of PSD sweeps performed.
    pub fn iterations(&self) -> usize {
        self.gammas.len() - 1
    }

    pub fn label(&self) -> String {
        format!("p{}_eps{}_s{}_n{}", self.p, self.eps, self.s, self.n)
    }
}

fn run_one(p: f64, eps: f64, s: f64, n: usize, params: &ComplexityParams) -> Result<ComplexityTrace> {
    let grid = GridSpec::new(n, 1.0)?;
    let target = CellField::from_fn(grid, |x, y| {
        (2.0 * PI * x).sin() * (2.0 * PI * y).cos() * s.cos() / (2.0 * PI)
    });
    let f = nonlinear_fourth(&target, s, eps, p);
    let prob = FourthOrderProblem::new(s, eps, p, f)?;
    let mut ws = SpectralWorkspace::new(grid);
    let cfg = PsdConfig::default();

    let mut u = CellField::from_fn(grid, |x, y| {
        (2.0 * PI * x).sin() * (2.0 * PI * y).cos() / (2.0 * PI)
            + s * s * (4.0 * PI * x).sin() * (6.0 * PI * y).sin()
    });
    let mut gammas = vec![norm_inf(&(&u - &target))];
    while *gammas.last().unwrap() > params.gamma_tol && gammas.len() <= params.max_iter {
        let d = search_direction(&u, &prob, &mut ws)?;
        let alpha = line_search(&u, &d, &prob, &mut ws, &cfg)?;
        u.axpy(alpha, &d);
        gammas.push(norm_inf(&(&u - &target)));
    }
    let converged = *gammas.last().unwrap() <= params.gamma_tol;
    Ok(ComplexityTrace { p, eps, s, n, gammas, converged })
}

/// Run the full cartesian sweep.
pub fn complexity_study(params: &ComplexityParams) -> Result<Vec<ComplexityTrace>> {
    let mut traces = Vec::new();
    for &p in &params.ps {
        for &eps in &params.epss {
            for &s in &params.ss {
                for &n in &params.ns {
                    traces.push(run_one(p, eps, s, n, params)?);
                }
            }
        }
    }
    Ok(traces)
}

pub fn write_trace<W: Write>(w: &mut W, trace: &ComplexityTrace) -> std::io::Result<()> {
    writeln!(w, "k,gamma")?;
    for (k, g) in trace.gammas.iter().enumerate() {
        writeln!(w, "{k},{g:.16e}")?;
    }
    Ok(())
}
