use super::tableau::ButcherTableau;
use super::{EnergyFunctionals, OdeSystem, StepReport};
use crate::error::StepError;

/// Explicit Runge-Kutta step `y + Δt Σ b_i F(Y_i)`.
///
/// With `energy`, the stage quadratures `Δt Σ b_i E_jump(Y_i)` and
/// `Δt Σ b_i E_bnd(Y_i)` are accumulated into the report.
pub fn rk_step(
    y: &[f64],
    dt: f64,
    tableau: &ButcherTableau,
    sys: &dyn OdeSystem,
    energy: Option<&dyn EnergyFunctionals>,
) -> Result<(Vec<f64>, StepReport), StepError> {
    if !tableau.is_explicit() {
        return Err(StepError::UnsupportedTableau);
    }
    let s = tableau.stages();
    let n = y.len();
    let mut k: Vec<Vec<f64>> = Vec::with_capacity(s);
    let mut stage = vec![0.0; n];
    let mut report = StepReport::default();
    for i in 0..s {
        stage.copy_from_slice(y);
        for (j, kj) in k.iter().enumerate() {
            let c = dt * tableau.a[i][j];
            if c != 0.0 {
                for (st, kv) in stage.iter_mut().zip(kj) {
                    *st += c * kv;
                }
            }
        }
        if stage.iter().any(|v| !v.is_finite()) {
            return Err(StepError::NonFinite { stage: i });
        }
        if let Some(e) = energy {
            if tableau.b[i] != 0.0 {
                report.delta_e_jump += dt * tableau.b[i] * e.jump(&stage);
                report.delta_e_bnd += dt * tableau.b[i] * e.boundary(&stage);
            }
        }
        let mut ki = vec![0.0; n];
        sys.rhs(&stage, &mut ki);
        if ki.iter().any(|v| !v.is_finite()) {
            return Err(StepError::NonFinite { stage: i });
        }
        k.push(ki);
    }
    let mut out = y.to_vec();
    for (i, ki) in k.iter().enumerate() {
        let c = dt * tableau.b[i];
        for (o, kv) in out.iter_mut().zip(ki) {
            *o += c * kv;
        }
    }
    Ok((out, report))
}
