//! Projection-modified explicit Runge-Kutta: `y + γ(ȳ − y)` with γ chosen
//! so the discrete energy balance holds exactly.

use super::explicit::rk_step;
use super::tableau::ButcherTableau;
use super::{EnergyFunctionals, OdeSystem, StepReport};
use crate::error::StepError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegenerateGamma {
    pub denominator: f64,
}

/// `γ = 1 − [E_tot(ȳ) − E_tot(y) + δE_bnd + ε δE_jump] / E_EB(ȳ − y)`.
///
/// The energy increment is evaluated as `E_kin(δ) + 2⟨y, δ⟩_EB + E_EB(δ)`,
/// `δ = ȳ − y`, which avoids cancelling two large totals.
pub fn compute_gamma(
    y: &[f64],
    y_bar: &[f64],
    delta_e_jump: f64,
    delta_e_bnd: f64,
    epsilon: f64,
    energy: &dyn EnergyFunctionals,
) -> Result<f64, DegenerateGamma> {
    let delta: Vec<f64> = y_bar.iter().zip(y).map(|(b, a)| b - a).collect();
    let denom = energy.em_energy(&delta);
    let threshold = 1e-30 * energy.total(y).abs().max(1.0);
    if !(denom.abs() > threshold) {
        return Err(DegenerateGamma { denominator: denom });
    }
    let increment = energy.kinetic(&delta) + 2.0 * energy.em_inner(y, &delta) + denom;
    Ok(1.0 - (increment + delta_e_bnd + epsilon * delta_e_jump) / denom)
}

pub fn modified_rk_step(
    y: &[f64],
    dt: f64,
    tableau: &ButcherTableau,
    sys: &dyn OdeSystem,
    energy: &dyn EnergyFunctionals,
    epsilon: f64,
) -> Result<(Vec<f64>, StepReport), StepError> {
    if tableau.stages() < 2 || !tableau.is_explicit() {
        return Err(StepError::UnsupportedTableau);
    }
    let (y_bar, mut report) = rk_step(y, dt, tableau, sys, Some(energy))?;
    match compute_gamma(
        y,
        &y_bar,
        report.delta_e_jump,
        report.delta_e_bnd,
        epsilon,
        energy,
    ) {
        Ok(gamma) => {
            report.gamma = gamma;
            let out = y
                .iter()
                .zip(&y_bar)
                .map(|(a, b)| a + gamma * (b - a))
                .collect();
            Ok((out, report))
        }
        Err(d) => {
            log::warn!(
                "energy projection skipped: E_EB(ȳ − y) = {:e} below threshold",
                d.denominator
            );
            report.gamma = 1.0;
            report.degenerate = true;
            Ok((y_bar, report))
        }
    }
}
