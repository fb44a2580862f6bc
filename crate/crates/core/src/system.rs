//! The coupled semi-discrete Vlasov-Maxwell system.

use std::sync::Arc;

use crate::diagnostics;
use crate::integrators::{EnergyFunctionals, OdeSystem};
use crate::maxwell::{FluxMode, MaxwellWorkspace};
use crate::state::{PhysicsConstants, StateLayout, StateVector};
use crate::vlasov::VlasovWorkspace;

#[derive(Debug, Clone)]
pub struct VlasovMaxwell {
    pub layout: Arc<StateLayout>,
    pub physics: PhysicsConstants,
    pub vlasov: VlasovWorkspace,
    pub maxwell: MaxwellWorkspace,
}

impl VlasovMaxwell {
    pub fn new(layout: Arc<StateLayout>, physics: PhysicsConstants, flux: FluxMode) -> Self {
        let vlasov = VlasovWorkspace::new(&layout, &physics);
        let maxwell = MaxwellWorkspace::new(&layout, &physics, flux);
        VlasovMaxwell {
            layout,
            physics,
            vlasov,
            maxwell,
        }
    }

    pub fn flux_mode(&self) -> FluxMode {
        self.maxwell.mode
    }

    pub fn rhs_state(&self, y: &StateVector) -> StateVector {
        let mut out = StateVector::zeros(self.layout.clone());
        self.rhs(y.data(), out.data_mut());
        out
    }
}

impl OdeSystem for VlasovMaxwell {
    fn dim(&self) -> usize {
        self.layout.total_len()
    }

    fn rhs(&self, y: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        self.vlasov.add_rhs(&self.layout, y, out);
        self.maxwell.add_rhs(&self.layout, y, out);
    }
}

impl EnergyFunctionals for VlasovMaxwell {
    fn kinetic(&self, y: &[f64]) -> f64 {
        diagnostics::kinetic_energy_raw(&self.layout, y)
    }

    fn em_inner(&self, a: &[f64], b: &[f64]) -> f64 {
        diagnostics::em_inner_raw(&self.layout, self.physics.omega_ratio, a, b)
    }

    fn jump(&self, y: &[f64]) -> f64 {
        diagnostics::jump_dissipation_raw(&self.maxwell, &self.layout, y)
    }
}
