//! Projection of drifting Maxwellians onto the AW Hermite basis.

use std::f64::consts::PI;

use super::hermite::dual_values;
use super::quadrature::gauss_hermite;
use crate::state::SpeciesSpec;

/// Per-axis projection `c_n = ∫ g(αξ+u) ψ^n(ξ) dξ` of a unit-density 1D Maxwellian
/// with mean `bulk` and thermal speed `thermal`.
pub fn axis_projection(order: usize, alpha: f64, shift: f64, bulk: f64, thermal: f64) -> Vec<f64> {
    // In w = (v - bulk)/(√2 v_T) the integrand is e^{-w²} times a polynomial of degree ≤ order.
    let (nodes, weights) = gauss_hermite(order + 4);
    let mut c = vec![0.0; order + 1];
    for (&w_node, &w) in nodes.iter().zip(&weights) {
        let v = bulk + 2f64.sqrt() * thermal * w_node;
        let duals = dual_values(order, (v - shift) / alpha);
        for (cn, d) in c.iter_mut().zip(duals) {
            *cn += w * d;
        }
    }
    let scale = 1.0 / (alpha * PI.sqrt());
    c.iter_mut().for_each(|x| *x *= scale);
    c
}

/// Hermite coefficient block of `density · Π_β g_β(v_β)`.
pub fn project_shifted_maxwellian(
    species: &SpeciesSpec,
    density: f64,
    bulk: [f64; 3],
    thermal: [f64; 3],
) -> Vec<f64> {
    let per_axis: [Vec<f64>; 3] = [0, 1, 2].map(|a| {
        axis_projection(
            species.hermite_orders[a],
            species.alpha[a],
            species.shift[a],
            bulk[a],
            thermal[a],
        )
    });
    let mut out = vec![0.0; species.n_hermite()];
    for (h, c) in out.iter_mut().enumerate() {
        let k = species.hermite_tuple(h);
        *c = density * per_axis[0][k[0]] * per_axis[1][k[1]] * per_axis[2][k[2]];
    }
    out
}
