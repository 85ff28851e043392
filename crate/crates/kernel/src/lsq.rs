use nalgebra::{DMatrix, DVector};

use crate::KernelError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LsqOptions {
    /// Stop once `‖r‖`, the gradient `‖Jᵀr‖` or the relative step falls below this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for LsqOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LsqOutcome {
    pub x: DVector<f64>,
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn jacobian<F>(f: &F, x: &DVector<f64>, m: usize) -> Option<DMatrix<f64>>
where
    F: Fn(&DVector<f64>) -> DVector<f64>,
{
    let n = x.len();
    let mut jac = DMatrix::zeros(m, n);
    let mut xp = x.clone();
    for i in 0..n {
        let h = 1e-6_f64.max(1e-6 * x[i].abs());
        let xi = x[i];
        xp[i] = xi + h;
        let fp = f(&xp);
        xp[i] = xi - h;
        let fm = f(&xp);
        xp[i] = xi;
        let col = (fp - fm) / (2.0 * h);
        if col.iter().any(|v| !v.is_finite()) {
            return None;
        }
        jac.set_column(i, &col);
    }
    Some(jac)
}

/// Levenberg–Marquardt minimization of `½‖r(x)‖²`.
///
/// Jacobians are central differences with step `max(1e-6, 1e-6·|xᵢ|)`.
/// Non-convergence is not an error: the best iterate is returned with
/// `converged = false`. A non-finite residual at the start point is.
pub fn least_squares_solve<F>(residual: F, x0: &DVector<f64>, opts: LsqOptions) -> Result<LsqOutcome, KernelError>
where
    F: Fn(&DVector<f64>) -> DVector<f64>,
{
    let mut x = x0.clone();
    let mut r = residual(&x);
    if r.iter().any(|v| !v.is_finite()) {
        return Err(KernelError::Diverged);
    }
    let m = r.len();
    let n = x.len();
    let mut cost = r.norm();
    let mut lambda = 1e-3;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        if cost <= opts.tol {
            return Ok(LsqOutcome {
                x,
                residual_norm: cost,
                iterations,
                converged: true,
            });
        }
        iterations += 1;
        let Some(jac) = jacobian(&residual, &x, m) else {
            return Err(KernelError::Diverged);
        };
        let jt = jac.transpose();
        let grad = &jt * &r;
        if grad.amax() <= opts.tol * opts.tol.max(cost) {
            return Ok(LsqOutcome {
                x,
                residual_norm: cost,
                iterations,
                converged: true,
            });
        }
        let jtj = &jt * &jac;
        let mut improved = false;
        while lambda < 1e16 {
            let mut a = jtj.clone();
            for i in 0..n {
                a[(i, i)] += lambda * (jtj[(i, i)] + 1e-12);
            }
            let Some(step) = a.cholesky().map(|c| c.solve(&(-&grad))) else {
                lambda *= 10.0;
                continue;
            };
            let trial = &x + &step;
            let rt = residual(&trial);
            let ct = rt.norm();
            if ct.is_finite() && ct < cost {
                let small = step.norm() <= opts.tol * (x.norm() + opts.tol);
                x = trial;
                r = rt;
                cost = ct;
                lambda = (lambda / 3.0).max(1e-12);
                improved = true;
                if small {
                    return Ok(LsqOutcome {
                        x,
                        residual_norm: cost,
                        iterations,
                        converged: true,
                    });
                }
                break;
            }
            lambda *= 4.0;
        }
        if !improved {
            // stationary to the resolution of the damped model
            let converged = cost <= opts.tol;
            return Ok(LsqOutcome {
                x,
                residual_norm: cost,
                iterations,
                converged,
            });
        }
    }
    Ok(LsqOutcome {
        x,
        residual_norm: cost,
        iterations,
        converged: cost <= opts.tol,
    })
}
