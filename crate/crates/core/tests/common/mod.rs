#![allow(dead_code)]

pub mod oracle;

use std::sync::Arc;

use hermite_dg::state::{MeshSpec, PhysicsConstants, SpeciesSpec, StateLayout, StateVector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn species(name: &str, mass: f64, charge: f64, orders: [usize; 3], alpha: [f64; 3], shift: [f64; 3]) -> SpeciesSpec {
    SpeciesSpec {
        name: name.into(),
        mass,
        charge,
        hermite_orders: orders,
        alpha,
        shift,
    }
}

pub fn physics(omega_ratio: f64, collision_rate: f64) -> PhysicsConstants {
    PhysicsConstants {
        omega_ratio,
        collision_rate,
        background_charge: 0.0,
    }
}

/// Two species on a short periodic line.
pub fn small_line(cells: usize, degree: usize, orders: [usize; 3]) -> Arc<StateLayout> {
    Arc::new(StateLayout::new(
        MeshSpec::line(cells, 3.0, degree),
        vec![
            species("e", 1.0, -1.0, orders, [0.9, 0.7, 1.1], [0.2, -0.1, 0.05]),
            species("i", 4.0, 1.0, orders, [0.5, 0.6, 0.4], [0.0, 0.1, -0.2]),
        ],
    ))
}

pub fn small_plane(cells: [usize; 2], degree: usize, orders: [usize; 3]) -> Arc<StateLayout> {
    Arc::new(StateLayout::new(
        MeshSpec::new([cells[0], cells[1], 1], [2.0, 1.5, 1.0], degree),
        vec![species("e", 1.0, -1.0, orders, [0.8, 1.2, 0.9], [0.1, 0.3, -0.2])],
    ))
}

pub fn random_state(layout: &Arc<StateLayout>, seed: u64) -> StateVector {
    let mut rng = StdRng::seed_from_u64(seed);
    let data = (0..layout.total_len()).map(|_| rng.random_range(-1.0..1.0)).collect();
    StateVector::from_vec(layout.clone(), data).unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}
