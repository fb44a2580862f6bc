//! Velocity-space coupling coefficients of the AW Hermite basis.

use crate::state::SpeciesSpec;

/// Per-axis recurrence data.
///
/// `v ψ_n = α(√((n+1)/2) ψ_{n+1} + √(n/2) ψ_{n-1}) + u ψ_n`, truncated at `order`;
/// `d ψ^n / dv = √(2n)/α ψ^{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisCoupling {
    pub order: usize,
    pub alpha: f64,
    pub shift: f64,
    /// `off[k] = α √(k/2)` links modes `k-1` and `k` (`off[0] = 0`).
    pub off: Vec<f64>,
    /// `lowering[k] = √(2k)/α`.
    pub lowering: Vec<f64>,
}

impl AxisCoupling {
    pub fn new(order: usize, alpha: f64, shift: f64) -> Self {
        let off = (0..=order).map(|k| alpha * (k as f64 / 2.0).sqrt()).collect();
        let lowering = (0..=order).map(|k| (2.0 * k as f64).sqrt() / alpha).collect();
        AxisCoupling {
            order,
            alpha,
            shift,
            off,
            lowering,
        }
    }

    /// Dense symmetric matrix acting on coefficients: `(M C)_k = ∫ v f ψ^k dξ`.
    pub fn moment_matrix(&self) -> Vec<f64> {
        let d = self.order + 1;
        let mut m = vec![0.0; d * d];
        for k in 0..d {
            m[k * d + k] = self.shift;
            if k > 0 {
                m[k * d + k - 1] = self.off[k];
                m[(k - 1) * d + k] = self.off[k];
            }
        }
        m
    }

    /// Coefficient of `ψ_{target}` in `v ψ_source`.
    pub fn trial_coefficient(&self, source: usize, target: usize) -> f64 {
        if target > self.order || source > self.order {
            0.0
        } else if target == source {
            self.shift
        } else if target == source + 1 {
            self.off[target]
        } else if source == target + 1 {
            self.off[source]
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VelocityCoupling {
    pub axes: [AxisCoupling; 3],
}

pub fn build_velocity_coupling(species: &SpeciesSpec) -> VelocityCoupling {
    VelocityCoupling {
        axes: [0, 1, 2].map(|a| {
            AxisCoupling::new(species.hermite_orders[a], species.alpha[a], species.shift[a])
        }),
    }
}
