//! Direct linear solver: Gaussian elimination with partial pivoting.
//!
//! This is the back-end of the verification oracle only — the online
//! learner never solves a system. Plain elimination is entirely adequate
//! for the oracle's symmetric positive-definite normal matrices.

use crate::error::{Error, Result};
use crate::numerics::mat::Mat;

/// Pivot magnitudes below this are treated as exact zeros.
const PIVOT_TOL: f64 = 1e-12;

/// Solves `a · X = b` for `X` by Gaussian elimination with partial
/// pivoting. `b` may carry multiple right-hand sides as columns.
///
/// # Errors
/// `Error::Dimension` if `a` is not square or `b.rows != a.rows`;
/// `Error::Singular` if the best available pivot falls below `1e-12` in
/// magnitude.
pub fn solve_linear(a: &Mat, b: &Mat) -> Result<Mat> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::Dimension(format!(
            "coefficient matrix must be square, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if b.rows() != n {
        return Err(Error::Dimension(format!(
            "right-hand side has {} rows, expected {}",
            b.rows(),
            n
        )));
    }

    let mut lhs = a.clone();
    let mut rhs = b.clone();
    let nrhs = rhs.cols();

    for col in 0..n {
        // Partial pivoting: bring the largest remaining entry of this
        // column to the diagonal.
        let mut pivot_row = col;
        let mut pivot_mag = lhs.get(col, col).abs();
        for r in col + 1..n {
            let mag = lhs.get(r, col).abs();
            if mag > pivot_mag {
                pivot_row = r;
                pivot_mag = mag;
            }
        }
        if pivot_mag < PIVOT_TOL {
            return Err(Error::Singular(format!(
                "pivot {pivot_mag:.3e} below {PIVOT_TOL:.0e} at column {col}"
            )));
        }
        if pivot_row != col {
            swap_rows(&mut lhs, col, pivot_row);
            swap_rows(&mut rhs, col, pivot_row);
        }

        let pivot = lhs.get(col, col);
        for r in col + 1..n {
            let factor = lhs.get(r, col) / pivot;
            if factor == 0.0 {
                continue;
            }
            lhs.set(r, col, 0.0);
            for c in col + 1..n {
                let v = lhs.get(r, c) - factor * lhs.get(col, c);
                lhs.set(r, c, v);
            }
            for c in 0..nrhs {
                let v = rhs.get(r, c) - factor * rhs.get(col, c);
                rhs.set(r, c, v);
            }
        }
    }

    // Back substitution.
    let mut x = Mat::zeros(n, nrhs);
    for col in (0..n).rev() {
        for c in 0..nrhs {
            let mut acc = rhs.get(col, c);
            for k in col + 1..n {
                acc -= lhs.get(col, k) * x.get(k, c);
            }
            x.set(col, c, acc / lhs.get(col, col));
        }
    }
    x.ensure_finite("solve_linear")?;
    Ok(x)
}

fn swap_rows(m: &mut Mat, r1: usize, r2: usize) {
    if r1 == r2 {
        return;
    }
    let cols = m.cols();
    let data = m.as_mut_slice();
    let (lo, hi) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
    let (head, tail) = data.split_at_mut(hi * cols);
    head[lo * cols..(lo + 1) * cols].swap_with_slice(&mut tail[..cols]);
}
