//! Bilinear coarse-to-fine transfer between nested periodic grids.
//!
//! With cell-centered staggering, every fine cell center sits a quarter
//! coarse-cell away from its parent center in each axis, so the 1D weights
//! are always {3/4, 1/4} toward the nearer and farther coarse neighbors.

use gridflow::grid::{CellField, GridSpec};

use crate::error::{HarnessError, Result};

/// Interpolate onto a grid with twice the resolution (same domain).
pub fn interpolate_coarse_to_fine(
    coarse: &CellField<f64>,
    fine_grid: GridSpec<f64>,
) -> Result<CellField<f64>> {
    let nc = coarse.grid().n();
    if fine_grid.n() != 2 * nc {
        return Err(HarnessError::GridMismatch { expected: 2 * nc, got: fine_grid.n() });
    }
    if (fine_grid.length() - coarse.grid().length()).abs()
        > 1e-12 * coarse.grid().length().abs()
    {
        return Err(HarnessError::Config(format!(
            "domain lengths differ: coarse {} vs fine {}",
            coarse.grid().length(),
            fine_grid.length()
        )));
    }

    // 1D stencil per fine index: fine 2I leans on coarse I-1, fine 2I+1 on I+1
    let neighbor = |i_fine: usize| -> (usize, usize) {
        let parent = i_fine / 2;
        if i_fine % 2 == 0 {
            (parent, (parent + nc - 1) % nc)
        } else {
            (parent, (parent + 1) % nc)
        }
    };

    let mut fine = CellField::zeros(fine_grid);
    for i in 0..fine_grid.n() {
        let (ix0, ix1) = neighbor(i);
        for j in 0..fine_grid.n() {
            let (jy0, jy1) = neighbor(j);
            fine[(i, j)] = 0.5625 * coarse[(ix0, jy0)]
                + 0.1875 * (coarse[(ix1, jy0)] + coarse[(ix0, jy1)])
                + 0.0625 * coarse[(ix1, jy1)];
        }
    }
    Ok(fine)
}
