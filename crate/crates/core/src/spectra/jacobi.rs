//! Cyclic Jacobi eigensolver for symmetric matrices.
//!
//! Row-major sweeps of plane rotations, each annihilating one off-diagonal
//! entry (Golub & Van Loan, section 8.5). Deterministic pivot order; the
//! iteration stops when the off-diagonal Frobenius norm drops below a fixed
//! fraction of its initial value.

use super::{IntegerMatrix, NumericSpectrum, SpectraError};

/// Relative off-diagonal convergence target.
pub const JACOBI_RELATIVE_TOL: f64 = 1e-12;
/// Maximum number of full sweeps before giving up.
pub const JACOBI_SWEEP_CAP: usize = 50;

pub fn eigenvalues(matrix: &IntegerMatrix) -> Result<NumericSpectrum, SpectraError> {
    let n = matrix.dim();
    let mut a: Vec<f64> = (0..n * n).map(|i| matrix.get(i / n, i % n) as f64).collect();
    let initial = off_diagonal_norm(&a, n);
    let threshold = JACOBI_RELATIVE_TOL * initial;
    if initial == 0.0 {
        return Ok(finish(&a, n, 0.0, threshold));
    }
    for _ in 0..JACOBI_SWEEP_CAP {
        let off = off_diagonal_norm(&a, n);
        if off < threshold {
            return Ok(finish(&a, n, off, threshold));
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, n, p, q);
            }
        }
    }
    let off = off_diagonal_norm(&a, n);
    if off < threshold {
        return Ok(finish(&a, n, off, threshold));
    }
    Err(SpectraError::NonConvergence {
        sweeps: JACOBI_SWEEP_CAP,
    })
}

fn finish(a: &[f64], n: usize, residual: f64, threshold: f64) -> NumericSpectrum {
    let mut values: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    values.sort_by(|x, y| x.partial_cmp(y).unwrap());
    NumericSpectrum {
        values,
        residual,
        threshold,
    }
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            sum += 2.0 * a[i * n + j] * a[i * n + j];
        }
    }
    sum.sqrt()
}

/// One plane rotation zeroing a[p][q], applied symmetrically.
fn rotate(a: &mut [f64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    if apq == 0.0 {
        return;
    }
    let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
    let t = if theta >= 0.0 {
        1.0 / (theta + (1.0 + theta * theta).sqrt())
    } else {
        -1.0 / (-theta + (1.0 + theta * theta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let app = a[p * n + p];
    let aqq = a[q * n + q];
    a[p * n + p] = c * c * app - 2.0 * s * c * apq + s * s * aqq;
    a[q * n + q] = s * s * app + 2.0 * s * c * apq + c * c * aqq;
    a[p * n + q] = 0.0;
    a[q * n + p] = 0.0;
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = c * akp - s * akq;
        a[p * n + k] = a[k * n + p];
        a[k * n + q] = s * akp + c * akq;
        a[q * n + k] = a[k * n + q];
    }
}
