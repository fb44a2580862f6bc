//! Hermite spectral velocity / discontinuous Galerkin space solver for the
//! Vlasov-Maxwell system, with energy-conserving time integrators.

pub mod basis;
pub mod config;
pub mod dg;
pub mod diagnostics;
pub mod driver;
pub mod error;
pub mod integrators;
pub mod maxwell;
pub mod state;
pub mod system;
pub mod vlasov;

pub use config::{load_config, parse_config, ScenarioId, SimConfig};
pub use error::{ConfigError, IoError, LayoutError, StepError};
pub use integrators::{Integrator, Method, StepReport};
pub use maxwell::FluxMode;
pub use state::{MeshSpec, PhysicsConstants, SpeciesSpec, StateLayout, StateVector};
pub use system::VlasovMaxwell;
