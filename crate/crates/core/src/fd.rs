//! Finite-difference oracle: central differences with one Richardson step.

use nalgebra::{DMatrix, DVector};

#[derive(Clone, Debug)]
pub struct Gradient {
    pub value: DVector<f64>,
    /// Per-component difference between the extrapolated and the fine estimate.
    pub error: DVector<f64>,
}

fn central(f: &dyn Fn(&DVector<f64>) -> f64, x0: &DVector<f64>, i: usize, h: f64) -> f64 {
    let mut xp = x0.clone();
    let mut xm = x0.clone();
    xp[i] += h;
    xm[i] -= h;
    (f(&xp) - f(&xm)) / (2.0 * h)
}

/// Gradient of a scalar function at `x0`.
pub fn fd_oracle(f: &dyn Fn(&DVector<f64>) -> f64, x0: &DVector<f64>, h: f64) -> Gradient {
    let n = x0.len();
    let mut value = DVector::zeros(n);
    let mut error = DVector::zeros(n);
    for i in 0..n {
        let coarse = central(f, x0, i, h);
        let fine = central(f, x0, i, h / 2.0);
        let rich = (4.0 * fine - coarse) / 3.0;
        value[i] = rich;
        error[i] = (rich - fine).abs();
    }
    Gradient { value, error }
}

/// Fallible vector-valued function of a vector.
pub type VectorFn<'a, E> = dyn Fn(&DVector<f64>) -> Result<DVector<f64>, E> + 'a;

/// Jacobian of a vector function; column `j` is the derivative along `x0[j]`,
/// taken with step `h[j]`.
pub fn fd_jacobian<E>(
    f: &VectorFn<E>,
    x0: &DVector<f64>,
    h: &[f64],
) -> Result<(DMatrix<f64>, DMatrix<f64>), E> {
    let rows = f(x0)?.len();
    let n = x0.len();
    let mut jac = DMatrix::zeros(rows, n);
    let mut err = DMatrix::zeros(rows, n);
    let diff = |i: usize, step: f64| -> Result<DVector<f64>, E> {
        let mut xp = x0.clone();
        let mut xm = x0.clone();
        xp[i] += step;
        xm[i] -= step;
        Ok((f(&xp)? - f(&xm)?) / (2.0 * step))
    };
    for j in 0..n {
        let coarse = diff(j, h[j])?;
        let fine = diff(j, h[j] / 2.0)?;
        for r in 0..rows {
            let rich = (4.0 * fine[r] - coarse[r]) / 3.0;
            jac[(r, j)] = rich;
            err[(r, j)] = (rich - fine[r]).abs();
        }
    }
    Ok((jac, err))
}

/// Like [`fd_jacobian`], but each column is evaluated at the steps
/// `h[j] * factor` (decreasing factors) and the estimate is taken where two
/// neighbouring steps agree best, balancing truncation against roundoff.
/// Steps whose evaluation fails are skipped.
pub fn fd_jacobian_adaptive<E>(
    f: &VectorFn<E>,
    x0: &DVector<f64>,
    h: &[f64],
    factors: &[f64],
) -> Result<(DMatrix<f64>, DMatrix<f64>), E> {
    let rows = f(x0)?.len();
    let n = x0.len();
    let mut jac = DMatrix::zeros(rows, n);
    let mut err = DMatrix::zeros(rows, n);
    for j in 0..n {
        let col = |step: f64| -> Result<DVector<f64>, E> {
            let mut xp = x0.clone();
            let mut xm = x0.clone();
            xp[j] += step;
            xm[j] -= step;
            Ok((f(&xp)? - f(&xm)?) / (2.0 * step))
        };
        let mut estimates = Vec::new();
        let mut last_err = None;
        for &fac in factors {
            let step = h[j] * fac;
            match col(step).and_then(|c| Ok((c, col(step / 2.0)?))) {
                Ok((coarse, fine)) => estimates.push((&fine * 4.0 - coarse) / 3.0),
                Err(e) => last_err = Some(e),
            }
        }
        let Some(first) = estimates.first() else {
            return Err(last_err.expect("at least one factor"));
        };
        let mut best = (f64::INFINITY, first.clone(), DVector::zeros(rows));
        for pair in estimates.windows(2) {
            let diff = (&pair[0] - &pair[1]).abs();
            let score = diff.amax() / pair[0].amax().max(f64::MIN_POSITIVE);
            if score < best.0 {
                best = (score, pair[0].clone(), diff);
            }
        }
        jac.set_column(j, &best.1);
        err.set_column(j, &best.2);
    }
    Ok((jac, err))
}

/// Largest relative disagreement between an analytic and a numeric matrix.
///
/// Each entry is compared relative to `max(|a|, |n|, floor * max|entry|)`, so
/// entries that vanish analytically are judged against the matrix scale.
pub fn max_relative_error(analytic: &DMatrix<f64>, numeric: &DMatrix<f64>, floor: f64) -> f64 {
    let scale = analytic.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut worst = 0.0f64;
    for (a, n) in analytic.iter().zip(numeric.iter()) {
        let denom = a.abs().max(n.abs()).max(floor * scale);
        if denom > 0.0 {
            worst = worst.max((a - n).abs() / denom);
        }
    }
    worst
}
