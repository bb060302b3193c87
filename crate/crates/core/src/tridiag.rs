//! Lowest eigenvalues of a real symmetric tridiagonal matrix by Sturm-sequence
//! bisection.

use crate::error::{Error, Result};

/// Upper bound on bisection steps per eigenvalue. 64-bit floats need ~1100
/// halvings in the very worst case; well-scaled problems use fewer than 70.
pub const MAX_BISECTION_STEPS: usize = 1200;

/// Number of eigenvalues strictly below `lambda`, counted from the negative
/// pivots of the LDLᵀ factorisation of `T − λI`.
pub fn sturm_count(diag: &[f64], off: &[f64], lambda: f64) -> usize {
    debug_assert_eq!(off.len() + 1, diag.len().max(1));
    let pivmin = pivot_floor(off);
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let coupling = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] / q };
        q = diag[i] - lambda - coupling;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn pivot_floor(off: &[f64]) -> f64 {
    let max_sq = off.iter().fold(1.0_f64, |acc, e| acc.max(e * e));
    f64::MIN_POSITIVE * max_sq
}

/// Gershgorin enclosure of the spectrum.
pub fn gershgorin_bounds(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let radius = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - radius);
        hi = hi.max(diag[i] + radius);
    }
    (lo, hi)
}

/// The `count` smallest eigenvalues in ascending order.
pub fn lowest_eigenvalues(diag: &[f64], off: &[f64], count: usize) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 || off.len() + 1 != n {
        return Err(Error::InvalidInput(format!(
            "tridiagonal shape mismatch: {} diagonal, {} off-diagonal entries",
            n,
            off.len()
        )));
    }
    if count > n {
        return Err(Error::InvalidInput(format!(
            "requested {count} eigenvalues of a {n}×{n} matrix"
        )));
    }
    if diag.iter().chain(off).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("tridiagonal matrix has non-finite entries".into()));
    }
    let (glo, ghi) = gershgorin_bounds(diag, off);
    let pad = f64::EPSILON * glo.abs().max(ghi.abs()).max(1.0);
    let (glo, ghi) = (glo - pad, ghi + pad);
    // Bisection cannot resolve eigenvalues beyond ~ε‖T‖ anyway.
    let abs_floor = 0.5 * f64::EPSILON * glo.abs().max(ghi.abs());

    let mut values = Vec::with_capacity(count);
    let mut floor = glo;
    for k in 0..count {
        // Invariant: sturm_count(lo) ≤ k < sturm_count(hi).
        let mut lo = floor;
        let mut hi = ghi;
        let mut converged = false;
        for _ in 0..MAX_BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= (2.0 * f64::EPSILON * lo.abs().max(hi.abs())).max(abs_floor) {
                converged = true;
                break;
            }
            if sturm_count(diag, off, mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        if !converged {
            return Err(Error::Solver {
                iterations: MAX_BISECTION_STEPS,
            });
        }
        let value = 0.5 * (lo + hi);
        values.push(value);
        floor = lo;
    }
    Ok(values)
}
