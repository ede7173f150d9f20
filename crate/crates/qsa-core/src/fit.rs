//! Nonlinear least squares (Levenberg-Marquardt) and small fitting helpers.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FitError {
    #[error("fit did not converge within {0} iterations")]
    NonConvergence(usize),
    #[error("normal equations are singular or ill-conditioned")]
    IllConditioned,
    #[error("need at least {needed} data points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
}

#[derive(Clone, Debug)]
pub struct LmResult {
    pub params: Vec<f64>,
    /// Parameter covariance σ²(JᵀJ)⁻¹ at the optimum.
    pub covariance: DMatrix<f64>,
    pub chi2: f64,
    pub n_iter: usize,
    /// Degrees of freedom m − n.
    pub dof: usize,
}

impl LmResult {
    /// Half-width of the 95% confidence interval of parameter `i`
    /// (1.96 σ under the linearized-covariance approximation).
    pub fn ci95(&self, i: usize) -> f64 {
        1.96 * self.covariance[(i, i)].max(0.0).sqrt()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LmOptions {
    pub max_iter: usize,
    /// Relative chi² improvement below which we stop.
    pub ftol: f64,
    /// Relative parameter step below which we stop.
    pub xtol: f64,
    pub lambda_init: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        Self { max_iter: 200, ftol: 1e-12, xtol: 1e-12, lambda_init: 1e-3 }
    }
}

/// Minimize ‖r(p)‖² with Levenberg-Marquardt.
///
/// `residuals(p, out)` fills the residual vector; `jacobian(p, out)` fills an
/// m×n matrix, or pass `None` for forward differences.
pub fn levenberg_marquardt<R>(
    mut residuals: R,
    jacobian: Option<&dyn Fn(&[f64], &mut DMatrix<f64>)>,
    p0: &[f64],
    m: usize,
    opts: &LmOptions,
) -> Result<LmResult, FitError>
where
    R: FnMut(&[f64], &mut DVector<f64>),
{
    let n = p0.len();
    if m < n {
        return Err(FitError::TooFewPoints { needed: n, got: m });
    }
    let mut p = DVector::from_column_slice(p0);
    let mut r = DVector::zeros(m);
    let mut r_trial = DVector::zeros(m);
    let mut jac = DMatrix::zeros(m, n);

    let fill_jacobian = |p: &DVector<f64>, r0: &DVector<f64>, jac: &mut DMatrix<f64>, res: &mut R| {
        if let Some(j) = jacobian {
            j(p.as_slice(), jac);
        } else {
            let mut pp = p.clone();
            let mut rp = DVector::zeros(m);
            for k in 0..n {
                let h = 1e-7 * p[k].abs().max(1e-7);
                pp[k] = p[k] + h;
                res(pp.as_slice(), &mut rp);
                for i in 0..m {
                    jac[(i, k)] = (rp[i] - r0[i]) / h;
                }
                pp[k] = p[k];
            }
        }
    };

    residuals(p.as_slice(), &mut r);
    let mut chi2 = r.norm_squared();
    let mut lambda = opts.lambda_init;
    let mut n_iter = 0;

    for iter in 0..opts.max_iter {
        n_iter = iter + 1;
        fill_jacobian(&p, &r, &mut jac, &mut residuals);
        let jtj = jac.transpose() * &jac;
        let jtr = jac.transpose() * &r;

        let mut improved = false;
        for _ in 0..30 {
            let mut a = jtj.clone();
            for k in 0..n {
                a[(k, k)] += lambda * jtj[(k, k)].max(1e-30);
            }
            let Some(chol) = a.cholesky() else {
                lambda *= 10.0;
                continue;
            };
            let delta = chol.solve(&(-&jtr));
            let p_trial = &p + &delta;
            residuals(p_trial.as_slice(), &mut r_trial);
            let chi2_trial = r_trial.norm_squared();
            if chi2_trial.is_finite() && chi2_trial < chi2 {
                let step_small = delta
                    .iter()
                    .zip(p.iter())
                    .all(|(d, pk)| d.abs() <= opts.xtol * pk.abs().max(1e-30));
                let chi_small = (chi2 - chi2_trial) <= opts.ftol * chi2.max(1e-300);
                p = p_trial;
                std::mem::swap(&mut r, &mut r_trial);
                chi2 = chi2_trial;
                lambda = (lambda * 0.3).max(1e-14);
                improved = true;
                if step_small || chi_small {
                    return finish(residuals, jacobian, p, r, chi2, m, n, n_iter);
                }
                break;
            }
            lambda *= 10.0;
            if lambda > 1e14 {
                // cannot improve further; treat current point as the optimum
                return finish(residuals, jacobian, p, r, chi2, m, n, n_iter);
            }
        }
        if !improved {
            return finish(residuals, jacobian, p, r, chi2, m, n, n_iter);
        }
    }
    // iteration budget exhausted while still improving: report the optimum
    // reached (n_iter == max_iter marks it)
    finish(residuals, jacobian, p, r, chi2, m, n, n_iter)
}

fn finish<R>(
    mut residuals: R,
    jacobian: Option<&dyn Fn(&[f64], &mut DMatrix<f64>)>,
    p: DVector<f64>,
    r: DVector<f64>,
    chi2: f64,
    m: usize,
    n: usize,
    n_iter: usize,
) -> Result<LmResult, FitError>
where
    R: FnMut(&[f64], &mut DVector<f64>),
{
    let mut jac = DMatrix::zeros(m, n);
    if let Some(j) = jacobian {
        j(p.as_slice(), &mut jac);
    } else {
        let mut pp = p.clone();
        let mut rp = DVector::zeros(m);
        for k in 0..n {
            let h = 1e-7 * p[k].abs().max(1e-7);
            pp[k] = p[k] + h;
            residuals(pp.as_slice(), &mut rp);
            for i in 0..m {
                jac[(i, k)] = (rp[i] - r[i]) / h;
            }
            pp[k] = p[k];
        }
    }
    let jtj = jac.transpose() * &jac;
    let dof = m.saturating_sub(n);
    let sigma2 = if dof > 0 { chi2 / dof as f64 } else { 0.0 };
    let covariance = jtj
        .clone()
        .try_inverse()
        .map(|inv| inv * sigma2)
        .ok_or(FitError::IllConditioned)?;
    Ok(LmResult { params: p.as_slice().to_vec(), covariance, chi2, n_iter, dof })
}

/// Gaussian `a·exp(−(x−mu)²/(2 s²)) + offset` fitted to (x, y) data.
///
/// Returns (a, mu, s, offset).
pub fn fit_gaussian(x: &[f64], y: &[f64], guess: (f64, f64, f64, f64)) -> Result<[f64; 4], FitError> {
    if x.len() != y.len() {
        return Err(FitError::InvalidInput("x and y lengths differ"));
    }
    let xs = x.to_vec();
    let ys = y.to_vec();
    let res = levenberg_marquardt(
        move |p, out| {
            for i in 0..xs.len() {
                let dx = xs[i] - p[1];
                out[i] = p[0] * (-dx * dx / (2.0 * p[2] * p[2])).exp() + p[3] - ys[i];
            }
        },
        None,
        &[guess.0, guess.1, guess.2, guess.3],
        x.len(),
        &LmOptions::default(),
    )?;
    Ok([res.params[0], res.params[1], res.params[2].abs(), res.params[3]])
}

/// Fit `a·cos(k φ) + b·sin(k φ) + c` by linear least squares and return
/// (amplitude A, phase ψ, offset c) with the data modeled as A·cos(kφ − ψ) + c.
pub fn fit_harmonic(phase: &[f64], y: &[f64], k: f64) -> Result<(f64, f64, f64), FitError> {
    if phase.len() != y.len() || phase.len() < 3 {
        return Err(FitError::TooFewPoints { needed: 3, got: phase.len() });
    }
    let m = phase.len();
    let mut design = DMatrix::zeros(m, 3);
    for i in 0..m {
        design[(i, 0)] = (k * phase[i]).cos();
        design[(i, 1)] = (k * phase[i]).sin();
        design[(i, 2)] = 1.0;
    }
    let rhs = DVector::from_column_slice(y);
    let sol = (design.transpose() * &design)
        .try_inverse()
        .ok_or(FitError::IllConditioned)?
        * design.transpose()
        * rhs;
    Ok(((sol[0] * sol[0] + sol[1] * sol[1]).sqrt(), sol[1].atan2(sol[0]), sol[2]))
}
