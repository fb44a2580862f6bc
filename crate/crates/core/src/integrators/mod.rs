//! Time integrators over flat coefficient vectors.

use std::fmt;
use std::str::FromStr;

pub mod explicit;
pub mod gauss_legendre;
pub mod modified;
pub mod newton_krylov;
pub mod tableau;

pub use explicit::rk_step;
pub use gauss_legendre::gl_step;
pub use modified::{compute_gamma, modified_rk_step, DegenerateGamma};
pub use newton_krylov::{gmres_solve, jfnk_solve, NewtonKrylovConfig};
pub use tableau::ButcherTableau;

use crate::error::StepError;
use crate::maxwell::FluxMode;

/// An autonomous system `y' = F(y)`.
pub trait OdeSystem {
    fn dim(&self) -> usize;
    /// Writes `F(y)` into `out`.
    fn rhs(&self, y: &[f64], out: &mut [f64]);
}

/// Energy evaluators: kinetic energy is linear in the state, field energy quadratic.
pub trait EnergyFunctionals {
    fn kinetic(&self, y: &[f64]) -> f64;
    fn em_inner(&self, a: &[f64], b: &[f64]) -> f64;
    fn em_energy(&self, y: &[f64]) -> f64 {
        self.em_inner(y, y)
    }
    fn total(&self, y: &[f64]) -> f64 {
        self.kinetic(y) + self.em_energy(y)
    }
    /// Rate of energy removed by numerical flux jumps.
    fn jump(&self, y: &[f64]) -> f64;
    /// Net energy flux through the domain boundary.
    fn boundary(&self, _y: &[f64]) -> f64 {
        0.0
    }
}

pub trait EnergySystem: OdeSystem + EnergyFunctionals {}
impl<T: OdeSystem + EnergyFunctionals> EnergySystem for T {}

#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    pub gamma: f64,
    /// Set when the energy projection was skipped for a vanishing update.
    pub degenerate: bool,
    pub delta_e_jump: f64,
    pub delta_e_bnd: f64,
    pub newton_iterations: usize,
    pub linear_iterations: usize,
    pub residual_norm: f64,
}

impl Default for StepReport {
    fn default() -> Self {
        StepReport {
            gamma: 1.0,
            degenerate: false,
            delta_e_jump: 0.0,
            delta_e_bnd: 0.0,
            newton_iterations: 0,
            linear_iterations: 0,
            residual_norm: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Imc,
    Imu,
    Rkc,
    Rku,
    Mrkc,
    Mrku0,
    Mrku1,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Imc,
        Method::Imu,
        Method::Rkc,
        Method::Rku,
        Method::Mrkc,
        Method::Mrku0,
        Method::Mrku1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Imc => "imc",
            Method::Imu => "imu",
            Method::Rkc => "rkc",
            Method::Rku => "rku",
            Method::Mrkc => "mrkc",
            Method::Mrku0 => "mrku0",
            Method::Mrku1 => "mrku1",
        }
    }

    pub fn flux_mode(self) -> FluxMode {
        match self {
            Method::Imc | Method::Rkc | Method::Mrkc => FluxMode::Central,
            _ => FluxMode::Upwind,
        }
    }

    /// Weight of the jump dissipation in the energy projection; 0 for central flux.
    pub fn epsilon(self) -> f64 {
        match self {
            Method::Imu | Method::Rku | Method::Mrku1 => 1.0,
            _ => 0.0,
        }
    }

    pub fn is_implicit(self) -> bool {
        matches!(self, Method::Imc | Method::Imu)
    }

    pub fn is_modified(self) -> bool {
        matches!(self, Method::Mrkc | Method::Mrku0 | Method::Mrku1)
    }

    pub fn default_tableau(self) -> ButcherTableau {
        if self.is_implicit() {
            ButcherTableau::implicit_midpoint()
        } else {
            ButcherTableau::bogacki_shampine3()
        }
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s.to_ascii_lowercase())
            .ok_or_else(|| {
                format!("unknown method `{s}` (expected one of imc, imu, rkc, rku, mrkc, mrku0, mrku1)")
            })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Integrator {
    pub method: Method,
    pub tableau: ButcherTableau,
    pub nk: NewtonKrylovConfig,
    /// Jump weight in the modified-RK energy target.
    pub epsilon: f64,
}

impl Integrator {
    pub fn new(method: Method) -> Self {
        Integrator {
            method,
            tableau: method.default_tableau(),
            nk: NewtonKrylovConfig::default(),
            epsilon: method.epsilon(),
        }
    }

    pub fn step(
        &self,
        y: &[f64],
        dt: f64,
        sys: &dyn EnergySystem,
    ) -> Result<(Vec<f64>, StepReport), StepError> {
        let energy: &dyn EnergyFunctionals = sys_as_energy(sys);
        let ode: &dyn OdeSystem = sys_as_ode(sys);
        if self.method.is_implicit() {
            gl_step(y, dt, &self.tableau, ode, &self.nk, Some(energy))
        } else if self.method.is_modified() {
            modified_rk_step(y, dt, &self.tableau, ode, energy, self.epsilon)
        } else {
            rk_step(y, dt, &self.tableau, ode, Some(energy))
        }
    }
}

fn sys_as_ode(s: &dyn EnergySystem) -> &dyn OdeSystem {
    s
}

fn sys_as_energy(s: &dyn EnergySystem) -> &dyn EnergyFunctionals {
    s
}
