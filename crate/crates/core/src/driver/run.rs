use std::sync::Arc;

use thiserror::Error;

use crate::config::SimConfig;
use crate::diagnostics::{cell_center_values, fourier_mode, sample, DiagnosticsRecord};
use crate::error::{ConfigError, IoError, StepError};
use crate::integrators::{Integrator, StepReport};
use crate::state::{FieldComponent, StateVector};
use crate::system::VlasovMaxwell;

/// Receives run events from the time loop.
pub trait Sink {
    fn on_record(&mut self, _ctx: &RunContext, _state: &StateVector, _rec: &DiagnosticsRecord) -> Result<(), IoError> {
        Ok(())
    }

    fn on_snapshot(&mut self, _ctx: &RunContext, _state: &StateVector, _t: f64) -> Result<(), IoError> {
        Ok(())
    }

    /// Called once with the final state, or with the last good state on failure.
    fn on_finish(&mut self, _ctx: &RunContext, _state: &StateVector, _t: f64) -> Result<(), IoError> {
        Ok(())
    }
}

pub struct RunContext<'a> {
    pub config: &'a SimConfig,
    pub system: &'a VlasovMaxwell,
    pub step: usize,
}

impl RunContext<'_> {
    /// True on cadence steps of the uniform `dt` grid; a shortened final step is off-grid.
    pub fn on_history_grid(&self, t: f64) -> bool {
        let grid = self.config.dt * self.step as f64;
        self.step.is_multiple_of(self.config.output.cadence) && (t - grid).abs() <= 1e-9 * grid.max(1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourierSample {
    pub t: f64,
    pub modes: Vec<(i64, rustfft::num_complex::Complex64)>,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub state: StateVector,
    pub t: f64,
    pub steps: usize,
    pub records: Vec<DiagnosticsRecord>,
    /// One report per step.
    pub reports: Vec<StepReport>,
    /// `B̂_z(k)` for each configured mode at every record.
    pub fourier: Vec<FourierSample>,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("step {step} at t = {t}: {source}")]
    Step {
        step: usize,
        t: f64,
        source: StepError,
        last_state: Box<StateVector>,
    },
    #[error(transparent)]
    Io(#[from] IoError),
}

pub fn build_system(config: &SimConfig, state: &StateVector) -> VlasovMaxwell {
    VlasovMaxwell::new(Arc::clone(state.layout()), config.physics, config.maxwell_flux)
}

pub fn build_integrator(config: &SimConfig) -> Integrator {
    Integrator {
        method: config.method,
        tableau: config.tableau.clone(),
        nk: config.solver.clone(),
        epsilon: config.epsilon,
    }
}

fn fourier_sample(config: &SimConfig, state: &StateVector, t: f64) -> FourierSample {
    let bz = cell_center_values(state, FieldComponent::Bz.index());
    let mesh = state.layout().mesh();
    let centers: Vec<f64> = (0..mesh.n_cells()).map(|c| mesh.cell_center(c)[0]).collect();
    FourierSample {
        t,
        modes: config
            .output
            .fourier_modes
            .iter()
            .map(|&k| (k, fourier_mode(&bz, &centers, mesh.lengths[0], k)))
            .collect(),
    }
}

/// Fixed-step loop from `t = 0` to `config.t_end`.
pub fn run_simulation(
    config: &SimConfig,
    initial: StateVector,
    sinks: &mut [&mut dyn Sink],
) -> Result<RunResult, RunError> {
    config.validate()?;
    if initial.layout().mesh() != &config.mesh || initial.layout().species() != config.species.as_slice() {
        return Err(ConfigError::invalid("initial state", "layout does not match the configuration").into());
    }
    let system = build_system(config, &initial);
    let integrator = build_integrator(config);
    let n_steps = config.n_steps();
    let cadence = config.output.cadence;
    let snap = config.output.snapshot_every;

    let mut state = initial;
    let mut t = 0.0;
    let mut cum_jump = 0.0;
    let first = sample(&system, &state, t, None, cum_jump, None);
    let e0 = first.e_tot;
    let mut records = vec![first];
    let mut reports = Vec::with_capacity(n_steps);
    let mut fourier = vec![fourier_sample(config, &state, t)];
    {
        let ctx = RunContext { config, system: &system, step: 0 };
        for s in sinks.iter_mut() {
            s.on_record(&ctx, &state, &records[0])?;
        }
    }

    for step in 1..=n_steps {
        let t_next = if step == n_steps { config.t_end } else { config.dt * step as f64 };
        let (next, report) = match integrator.step(state.data(), t_next - t, &system) {
            Ok(r) if r.0.iter().all(|v| v.is_finite()) => r,
            Ok(_) => return Err(fail(config, &system, sinks, step, t, &state, StepError::NonFinite { stage: 0 })),
            Err(e) => return Err(fail(config, &system, sinks, step, t, &state, e)),
        };
        state = StateVector::from_vec(Arc::clone(state.layout()), next).expect("integrator preserves length");
        t = t_next;
        cum_jump += report.gamma * report.delta_e_jump;
        let ctx = RunContext { config, system: &system, step };
        if step % cadence == 0 || step == n_steps {
            let rec = sample(&system, &state, t, Some(e0), cum_jump, Some(&report));
            for s in sinks.iter_mut() {
                s.on_record(&ctx, &state, &rec)?;
            }
            records.push(rec);
            fourier.push(fourier_sample(config, &state, t));
        }
        if snap > 0 && step % snap == 0 {
            for s in sinks.iter_mut() {
                s.on_snapshot(&ctx, &state, t)?;
            }
        }
        reports.push(report);
    }
    let ctx = RunContext { config, system: &system, step: n_steps };
    for s in sinks.iter_mut() {
        s.on_finish(&ctx, &state, t)?;
    }
    Ok(RunResult {
        state,
        t,
        steps: n_steps,
        records,
        reports,
        fourier,
    })
}

fn fail(
    config: &SimConfig,
    system: &VlasovMaxwell,
    sinks: &mut [&mut dyn Sink],
    step: usize,
    t: f64,
    state: &StateVector,
    source: StepError,
) -> RunError {
    log::error!("step {step} failed at t = {t}: {source}");
    let ctx = RunContext { config, system, step: step - 1 };
    for s in sinks.iter_mut() {
        if let Err(e) = s.on_finish(&ctx, state, t) {
            return RunError::Io(e);
        }
    }
    RunError::Step {
        step,
        t,
        source,
        last_state: Box::new(state.clone()),
    }
}

/// Collects cell-centre `E_y` every record for the ω-k spectrum.
#[derive(Debug, Default)]
pub struct HistorySink {
    pub history: crate::diagnostics::FieldHistory,
}

impl Sink for HistorySink {
    fn on_record(&mut self, ctx: &RunContext, state: &StateVector, rec: &DiagnosticsRecord) -> Result<(), IoError> {
        if !ctx.on_history_grid(rec.t) {
            return Ok(());
        }
        if self.history.centers.is_empty() {
            let mesh = state.layout().mesh();
            self.history.centers = (0..mesh.n_cells()).map(|c| mesh.cell_center(c)[0]).collect();
        }
        self.history.push(rec.t, cell_center_values(state, FieldComponent::Ey.index()));
        Ok(())
    }
}
