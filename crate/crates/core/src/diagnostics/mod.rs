//! Conserved quantities, jump dissipation and wave diagnostics.

pub mod fourier;

pub use fourier::{fourier_mode, spectrum_2d, FieldHistory, SpectrumGrid};

use crate::error::DiagnosticError;
use crate::integrators::StepReport;
use crate::maxwell::{divergence_residuals, FluxMode, MaxwellWorkspace};
use crate::state::{StateLayout, StateVector};
use crate::system::VlasovMaxwell;

const SQRT2: f64 = std::f64::consts::SQRT_2;

pub fn particle_number_raw(layout: &StateLayout, y: &[f64], s: usize) -> f64 {
    let sp = &layout.species()[s];
    let sum: f64 = (0..layout.n_cells())
        .map(|cell| y[layout.hermite_block(s, cell, 0)])
        .sum();
    layout.mesh().cell_volume() * sp.alpha_volume() * sum
}

pub fn particle_number(state: &StateVector, s: usize) -> f64 {
    particle_number_raw(state.layout(), state.data(), s)
}

/// `½ Σ_s m ∫∫ |v|² f` in closed form; linear in the coefficients.
pub fn kinetic_energy_raw(layout: &StateLayout, y: &[f64]) -> f64 {
    let vol = layout.mesh().cell_volume();
    let mut total = 0.0;
    for (s, sp) in layout.species().iter().enumerate() {
        let idx = |a: usize, k: usize| {
            (sp.hermite_orders[a] >= k).then(|| {
                let mut t = [0; 3];
                t[a] = k;
                sp.hermite_index(t)
            })
        };
        let first = [0, 1, 2].map(|a| idx(a, 1));
        let second = [0, 1, 2].map(|a| idx(a, 2));
        let c0_coef: f64 = (0..3).map(|a| sp.alpha[a].powi(2) + 2.0 * sp.shift[a].powi(2)).sum();
        let mut sum = 0.0;
        for cell in 0..layout.n_cells() {
            let b = layout.hermite_block(s, cell, 0);
            let mut v = c0_coef * y[b];
            for a in 0..3 {
                if let Some(i) = first[a] {
                    v += 2.0 * SQRT2 * sp.alpha[a] * sp.shift[a] * y[b + i];
                }
                if let Some(i) = second[a] {
                    v += SQRT2 * sp.alpha[a].powi(2) * y[b + i];
                }
            }
            sum += v;
        }
        total += 0.25 * vol * sp.alpha_volume() * sp.mass * sum;
    }
    total
}

pub fn kinetic_energy(state: &StateVector) -> f64 {
    kinetic_energy_raw(state.layout(), state.data())
}

/// `½ (ω_ce/ω_pe)² ∫ (E_a·E_b + B_a·B_b)`.
pub fn em_inner_raw(layout: &StateLayout, omega_ratio: f64, a: &[f64], b: &[f64]) -> f64 {
    let nm = layout.n_modes();
    let mesh = layout.mesh();
    let mass: Vec<f64> = (0..nm).map(|l| mesh.mode_mass(mesh.mode_tuple(l))).collect();
    let r = layout.em_range();
    let mut sum = 0.0;
    for (k, (x, y)) in a[r.clone()].iter().zip(&b[r]).enumerate() {
        sum += mass[k % nm] * x * y;
    }
    0.5 * sum / (omega_ratio * omega_ratio)
}

pub fn em_energy(state: &StateVector, omega_ratio: f64) -> f64 {
    em_inner_raw(state.layout(), omega_ratio, state.data(), state.data())
}

/// `(ω_ce/ω_pe)² Σ_f ½ ∫_f [u]ᵀ |F_n| [u]`; zero for central flux.
pub fn jump_dissipation_raw(ws: &MaxwellWorkspace, layout: &StateLayout, y: &[f64]) -> f64 {
    if ws.mode == FluxMode::Central {
        return 0.0;
    }
    let u = ws.gather(layout, y);
    let mut sum = 0.0;
    for &axis in &ws.dg.active_axes {
        let abs = &ws.flux.abs[axis];
        ws.dg.for_each_face_jump(axis, 6, &u, |w, jump| {
            let mut q = 0.0;
            for i in 0..6 {
                for j in 0..6 {
                    q += jump[i] * abs[i][j] * jump[j];
                }
            }
            sum += 0.5 * w * q;
        });
    }
    sum / (ws.source_prefactor * ws.source_prefactor)
}

pub fn jump_dissipation(state: &StateVector, ws: &MaxwellWorkspace) -> f64 {
    jump_dissipation_raw(ws, state.layout(), state.data())
}

/// Energy flux through the domain boundary; identically zero on periodic meshes.
pub fn boundary_energy_flux(_state: &StateVector) -> f64 {
    0.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub particle_numbers: Vec<f64>,
    pub e_kin: f64,
    pub e_em: f64,
    pub e_tot: f64,
    pub de_tot_rel: f64,
    pub cum_jump_dissipation: f64,
    pub gamma: f64,
    pub div_e_residual: f64,
    pub div_b_residual: f64,
    pub newton_iters: usize,
}

/// Samples every diagnostic at `y`; `e0` is the reference total energy.
pub fn sample(
    sys: &VlasovMaxwell,
    y: &StateVector,
    t: f64,
    e0: Option<f64>,
    cum_jump: f64,
    report: Option<&StepReport>,
) -> DiagnosticsRecord {
    let layout = sys.layout.as_ref();
    let data = y.data();
    let e_kin = kinetic_energy_raw(layout, data);
    let e_em = em_inner_raw(layout, sys.physics.omega_ratio, data, data);
    let e_tot = e_kin + e_em;
    let e0 = e0.unwrap_or(e_tot);
    let (div_e, div_b) = divergence_residuals(y, &sys.maxwell);
    DiagnosticsRecord {
        t,
        particle_numbers: (0..layout.species().len())
            .map(|s| particle_number_raw(layout, data, s))
            .collect(),
        e_kin,
        e_em,
        e_tot,
        de_tot_rel: if e0 != 0.0 { (e_tot - e0) / e0.abs() } else { e_tot - e0 },
        cum_jump_dissipation: cum_jump,
        gamma: report.map_or(1.0, |r| r.gamma),
        div_e_residual: div_e,
        div_b_residual: div_b,
        newton_iters: report.map_or(0, |r| r.newton_iterations),
    }
}

/// Per-step residual `ΔE_tot + γ(δE_bnd + w δE_jump)`, where `w` is the jump
/// weight of the method's balance law (ε for modified RK, 1 otherwise).
pub fn energy_balance_residual(
    records: &[DiagnosticsRecord],
    reports: &[StepReport],
    jump_weight: f64,
) -> Result<Vec<f64>, DiagnosticError> {
    if records.len() != reports.len() + 1 {
        return Err(DiagnosticError::LengthMismatch {
            records: records.len(),
            reports: reports.len(),
        });
    }
    Ok(reports
        .iter()
        .enumerate()
        .map(|(k, r)| {
            records[k + 1].e_tot - records[k].e_tot
                + r.gamma * (r.delta_e_bnd + jump_weight * r.delta_e_jump)
        })
        .collect())
}

/// Field component values at cell centres, one per cell.
pub fn cell_center_values(state: &StateVector, component: usize) -> Vec<f64> {
    let layout = state.layout();
    let mesh = layout.mesh();
    let center: Vec<f64> = (0..layout.n_modes())
        .map(|l| {
            let t = mesh.mode_tuple(l);
            (0..3).map(|a| crate::basis::legendre(t[a], 0.0)).product()
        })
        .collect();
    (0..layout.n_cells())
        .map(|cell| {
            (0..layout.n_modes())
                .map(|l| center[l] * state.data()[layout.field_offset(component, cell, l)])
                .sum()
        })
        .collect()
}
