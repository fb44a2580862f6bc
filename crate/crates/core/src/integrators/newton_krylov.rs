//! Restarted GMRES and a Jacobian-free Newton-Krylov driver.

use crate::error::StepError;

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonKrylovConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub linear_rel_tol: f64,
    pub linear_abs_tol: f64,
    pub max_newton: usize,
    pub krylov_dim: usize,
    pub max_restarts: usize,
    /// Base perturbation; the directional step is `fd_base (1 + ‖x‖) / ‖v‖`.
    pub fd_base: f64,
    /// Residuals below `roundoff_floor · ε_mach · ‖x‖` count as converged.
    pub roundoff_floor: f64,
}

impl Default for NewtonKrylovConfig {
    fn default() -> Self {
        NewtonKrylovConfig {
            rel_tol: 1e-8,
            abs_tol: 1e-50,
            linear_rel_tol: 1e-5,
            linear_abs_tol: 1e-50,
            max_newton: 30,
            krylov_dim: 40,
            max_restarts: 20,
            fd_base: f64::EPSILON.sqrt(),
            roundoff_floor: 10.0,
        }
    }
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct GmresOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

/// Solves `A x = b` from `x = 0`, stopping when `‖b − Ax‖ ≤ max(rel‖b‖, abs)`.
pub fn gmres_solve(
    matvec: &mut dyn FnMut(&[f64], &mut [f64]),
    b: &[f64],
    rel_tol: f64,
    abs_tol: f64,
    restart: usize,
    max_restarts: usize,
) -> Result<GmresOutcome, StepError> {
    let n = b.len();
    let mut x = vec![0.0; n];
    let bnorm = norm(b);
    let target = (rel_tol * bnorm).max(abs_tol);
    if bnorm <= target || bnorm == 0.0 {
        return Ok(GmresOutcome {
            x,
            iterations: 0,
            residual: bnorm,
        });
    }
    let m = restart.max(1);
    let mut r = b.to_vec();
    let mut beta = bnorm;
    let mut iterations = 0;
    let mut w = vec![0.0; n];
    for _ in 0..=max_restarts {
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
        basis.push(r.iter().map(|v| v / beta).collect());
        let mut h = vec![vec![0.0; m]; m + 1];
        let (mut cs, mut sn) = (vec![0.0; m], vec![0.0; m]);
        let mut g = vec![0.0; m + 1];
        g[0] = beta;
        let mut k_used = 0;
        let mut resid = beta;
        for k in 0..m {
            matvec(&basis[k], &mut w);
            iterations += 1;
            for (i, vi) in basis.iter().enumerate() {
                let hik = dot(&w, vi);
                h[i][k] = hik;
                for (wj, vj) in w.iter_mut().zip(vi) {
                    *wj -= hik * vj;
                }
            }
            let hn = norm(&w);
            h[k + 1][k] = hn;
            for i in 0..k {
                let t = cs[i] * h[i][k] + sn[i] * h[i + 1][k];
                h[i + 1][k] = -sn[i] * h[i][k] + cs[i] * h[i + 1][k];
                h[i][k] = t;
            }
            let denom = h[k][k].hypot(h[k + 1][k]);
            if denom == 0.0 {
                k_used = k;
                break;
            }
            cs[k] = h[k][k] / denom;
            sn[k] = h[k + 1][k] / denom;
            h[k][k] = denom;
            h[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];
            resid = g[k + 1].abs();
            k_used = k + 1;
            if resid <= target || hn == 0.0 {
                break;
            }
            basis.push(w.iter().map(|v| v / hn).collect());
        }
        // Back substitution on the k_used × k_used triangle.
        let mut yk = vec![0.0; k_used];
        for i in (0..k_used).rev() {
            let mut s = g[i];
            for j in i + 1..k_used {
                s -= h[i][j] * yk[j];
            }
            yk[i] = s / h[i][i];
        }
        for (j, yj) in yk.iter().enumerate() {
            for (xi, vi) in x.iter_mut().zip(&basis[j]) {
                *xi += yj * vi;
            }
        }
        matvec(&x, &mut w);
        for i in 0..n {
            r[i] = b[i] - w[i];
        }
        beta = norm(&r);
        if beta <= target || resid <= target {
            return Ok(GmresOutcome {
                x,
                iterations,
                residual: beta,
            });
        }
        if k_used == 0 {
            break;
        }
    }
    Err(StepError::GmresDiverged {
        restarts: max_restarts,
        residual: beta,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub linear_iterations: usize,
    pub initial_residual: f64,
    pub residual: f64,
    /// Residual norm after each Newton iteration, starting with the guess.
    pub history: Vec<f64>,
}

/// Newton's method on `residual(x) = 0` with finite-difference Jacobian-vector products.
pub fn jfnk_solve(
    residual: &dyn Fn(&[f64], &mut [f64]),
    guess: Vec<f64>,
    nk: &NewtonKrylovConfig,
) -> Result<NewtonOutcome, StepError> {
    let n = guess.len();
    let mut x = guess;
    let mut r = vec![0.0; n];
    residual(&x, &mut r);
    let r0 = norm(&r);
    let target = (nk.rel_tol * r0).max(nk.abs_tol);
    let floor = |x: &[f64]| nk.roundoff_floor * f64::EPSILON * norm(x);
    let mut history = vec![r0];
    let mut rnorm = r0;
    let mut linear_iterations = 0;
    let mut iterations = 0;
    let mut xp = vec![0.0; n];
    let mut rp = vec![0.0; n];
    while rnorm > target.max(floor(&x)) {
        if !rnorm.is_finite() || iterations >= nk.max_newton {
            return Err(StepError::NewtonDiverged {
                iterations,
                residual: rnorm,
            });
        }
        let xnorm = norm(&x);
        let rhs: Vec<f64> = r.iter().map(|v| -v).collect();
        let mut jv = |v: &[f64], out: &mut [f64]| {
            let vn = norm(v);
            if vn == 0.0 {
                out.iter_mut().for_each(|o| *o = 0.0);
                return;
            }
            let eps = nk.fd_base * (1.0 + xnorm) / vn;
            for i in 0..n {
                xp[i] = x[i] + eps * v[i];
            }
            residual(&xp, &mut rp);
            for i in 0..n {
                out[i] = (rp[i] - r[i]) / eps;
            }
        };
        let sol = gmres_solve(
            &mut jv,
            &rhs,
            nk.linear_rel_tol,
            nk.linear_abs_tol,
            nk.krylov_dim,
            nk.max_restarts,
        )?;
        linear_iterations += sol.iterations;
        for (xi, d) in x.iter_mut().zip(&sol.x) {
            *xi += d;
        }
        residual(&x, &mut r);
        rnorm = norm(&r);
        history.push(rnorm);
        iterations += 1;
    }
    Ok(NewtonOutcome {
        x,
        iterations,
        linear_iterations,
        initial_residual: r0,
        residual: rnorm,
        history,
    })
}
