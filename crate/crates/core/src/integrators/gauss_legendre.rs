use super::newton_krylov::{jfnk_solve, NewtonKrylovConfig};
use super::tableau::ButcherTableau;
use super::{EnergyFunctionals, OdeSystem, StepReport};
use crate::error::StepError;

/// Implicit collocation step. The coupled stage system
/// `Y_i − y − Δt Σ_j a_ij F(Y_j) = 0` is solved by JFNK from `Y_i = y`,
/// then `y + Δt Σ b_i F(Y_i)` is returned.
pub fn gl_step(
    y: &[f64],
    dt: f64,
    tableau: &ButcherTableau,
    sys: &dyn OdeSystem,
    nk: &NewtonKrylovConfig,
    energy: Option<&dyn EnergyFunctionals>,
) -> Result<(Vec<f64>, StepReport), StepError> {
    let s = tableau.stages();
    let n = y.len();
    let residual = |z: &[f64], r: &mut [f64]| {
        let mut f = vec![0.0; n];
        r.iter_mut().for_each(|v| *v = 0.0);
        for j in 0..s {
            sys.rhs(&z[j * n..(j + 1) * n], &mut f);
            for i in 0..s {
                let c = dt * tableau.a[i][j];
                if c != 0.0 {
                    let ri = &mut r[i * n..(i + 1) * n];
                    for (rv, fv) in ri.iter_mut().zip(&f) {
                        *rv -= c * fv;
                    }
                }
            }
        }
        for i in 0..s {
            for k in 0..n {
                r[i * n + k] += z[i * n + k] - y[k];
            }
        }
    };
    let guess: Vec<f64> = (0..s).flat_map(|_| y.iter().copied()).collect();
    let sol = jfnk_solve(&residual, guess, nk)?;
    let mut out = y.to_vec();
    let mut report = StepReport {
        newton_iterations: sol.iterations,
        linear_iterations: sol.linear_iterations,
        residual_norm: sol.residual,
        ..StepReport::default()
    };
    let mut f = vec![0.0; n];
    for i in 0..s {
        let stage = &sol.x[i * n..(i + 1) * n];
        if stage.iter().any(|v| !v.is_finite()) {
            return Err(StepError::NonFinite { stage: i });
        }
        sys.rhs(stage, &mut f);
        let c = dt * tableau.b[i];
        for (o, fv) in out.iter_mut().zip(&f) {
            *o += c * fv;
        }
        if let Some(e) = energy {
            report.delta_e_jump += c * e.jump(stage);
            report.delta_e_bnd += c * e.boundary(stage);
        }
    }
    Ok((out, report))
}
