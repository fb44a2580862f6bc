pub mod coupling;
pub mod hermite;
pub mod legendre;
pub mod maxwellian;
pub mod quadrature;

pub use coupling::{build_velocity_coupling, AxisCoupling, VelocityCoupling};
pub use hermite::{aw_function, dual_function, HermiteBasis};
pub use legendre::{legendre, legendre_cell_eval, LegendreBasis};
pub use maxwellian::project_shifted_maxwellian;
