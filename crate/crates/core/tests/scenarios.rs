use std::f64::consts::PI;

use hermite_dg::config::ScenarioId;
use hermite_dg::diagnostics::{fourier_mode, particle_number};
use hermite_dg::driver::scenarios::*;
use hermite_dg::integrators::Method;
use hermite_dg::maxwell::{charge_density_raw, current_density_raw, maxwell_rhs, FluxMode, MaxwellWorkspace};
use hermite_dg::parse_config;
use hermite_dg::state::StateVector;

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1e-300)
}

#[test]
fn whistler_preset_values() {
    let c = whistler_config(&Overrides::default());
    assert_eq!(c.scenario, ScenarioId::Whistler);
    assert_eq!(c.mesh.cells, [72, 1, 1]);
    assert_eq!(c.mesh.lengths[0], 2.0 * PI);
    assert_eq!(c.species.len(), 2);
    assert_eq!(c.physics.omega_ratio, 4.0);
    assert_eq!(c.physics.collision_rate, 1.0);
    assert_eq!(c.dt, 0.01);
    assert_eq!(c.method, Method::Rkc);
    assert_eq!(c.initial.background_b, [1.0, 0.0, 0.0]);
    assert_eq!(c.initial.perturbation, 1e-3);
    let (e, i) = (&c.species[0], &c.species[1]);
    assert_eq!((e.mass, e.charge), (1.0, -1.0));
    assert_eq!((i.mass, i.charge), (1836.0, 1.0));
    assert_eq!(e.hermite_orders, [9, 9, 9]);
    assert_eq!(i.hermite_orders, [9, 9, 9]);
    for (a, vt) in [0.056, 0.125, 0.125].iter().enumerate() {
        assert!(close(e.alpha[a], 2f64.sqrt() * vt, 1e-15));
        assert!(close(i.alpha[a], 2f64.sqrt() * vt / 1836f64.sqrt(), 1e-15));
    }
    assert_eq!(e.shift, [0.0; 3]);
}

#[test]
fn xmode_preset_values() {
    let c = xmode_config(&Overrides::default());
    assert_eq!(c.mesh.cells, [500, 1, 1]);
    assert_eq!(c.mesh.lengths[0], 100.0 * PI);
    assert_eq!(c.dt, PI / 25.0);
    assert_eq!(c.species.len(), 1);
    assert_eq!(c.species[0].hermite_orders, [3, 3, 3]);
    assert_eq!(c.species[0].alpha, [0.002; 3]);
    assert_eq!(c.physics.omega_ratio, 1.0);
    assert_eq!(c.physics.collision_rate, 0.0);
    assert_eq!(c.initial.background_b, [0.0, 0.0, 1.0]);
    assert_eq!(XMODE_AMPLITUDES, [0.598, 0.517, 0.193, 0.218]);
    assert_eq!(XMODE_PHASES, [0.305, 0.586, 0.050, 0.089]);
    assert!(c.output.field_history);
}

#[test]
fn orszag_tang_preset_values() {
    let c = orszag_tang_config(&Overrides::default());
    assert_eq!(c.mesh.cells, [54, 54, 1]);
    let full = orszag_tang_config(&Overrides { paper_scale: true, ..Default::default() });
    assert_eq!(full.mesh.cells, [108, 108, 1]);
    assert_eq!(c.mesh.lengths[..2], [50.0, 50.0]);
    assert_eq!(c.mesh.dg_degree, 1);
    assert_eq!(c.physics.omega_ratio, 2.0);
    assert_eq!(c.species[1].mass / c.species[0].mass, 25.0);
    assert_eq!(c.species[0].alpha, [0.25; 3]);
    assert_eq!(c.species[1].alpha, [0.05; 3]);
    assert!(c.species.iter().all(|s| s.hermite_orders == [3, 3, 3]));
    assert_eq!(c.initial.perturbation, 0.2);
    assert_eq!(c.t_end, 1000.0);
}

#[test]
fn overrides_apply_and_rederive_method() {
    let o = Overrides {
        cells: Some(16),
        hermite_orders: Some([2, 2, 2]),
        method: Some(Method::Mrku1),
        dt: Some(0.02),
        ..Default::default()
    };
    let c = orszag_tang_config(&o);
    assert_eq!(c.mesh.cells, [16, 16, 1]);
    assert_eq!(c.maxwell_flux, FluxMode::Upwind);
    assert_eq!(c.epsilon, 1.0);
    assert_eq!(c.dt, 0.02);
    assert!(c.validate().is_ok());
    assert!(preset(ScenarioId::Custom, &o).is_err());
}

#[test]
fn checked_in_configs_match_presets() {
    let root = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs");
    for (file, id) in [
        ("whistler.toml", ScenarioId::Whistler),
        ("xmode.toml", ScenarioId::Xmode),
        ("orszag_tang.toml", ScenarioId::OrszagTang),
    ] {
        let src = std::fs::read_to_string(format!("{root}/{file}")).unwrap();
        assert_eq!(parse_config(&src).unwrap(), preset(id, &Overrides::default()).unwrap(), "{file}");
    }
}

fn small_whistler() -> (hermite_dg::SimConfig, StateVector) {
    init_whistler(&Overrides {
        hermite_orders: Some([3, 3, 3]),
        ..Default::default()
    })
}

#[test]
fn whistler_particle_number_is_domain_length() {
    let (_, y) = small_whistler();
    for s in 0..2 {
        assert!(close(particle_number(&y, s), 2.0 * PI, 1e-13));
    }
}

#[test]
fn whistler_seed_current_mode() {
    let (cfg, y) = small_whistler();
    let layout = y.layout();
    let nm = layout.n_modes();
    let mesh = layout.mesh();
    let n = mesh.cells[0];
    let h = mesh.spacing()[0];
    // electrons only: the ion block carries no first moment
    let j = current_density_raw(layout, y.data());
    let jx: Vec<f64> = (0..n).map(|c| j[c * nm * 3]).collect();
    let centers: Vec<f64> = (0..n).map(|c| mesh.cell_center(c)[0]).collect();
    let m = fourier_mode(&jx, &centers, mesh.lengths[0], 1).norm();
    // cell means of cos x shrink by sin(h/2)/(h/2)
    let sinc = (h / 2.0).sin() / (h / 2.0);
    let want = cfg.initial.perturbation * n as f64 / 2.0;
    assert!(close(m, want * sinc, 1e-12), "{m} vs {}", want * sinc);
    assert!(close(m, want, 1e-3));
    for (c, x) in centers.iter().enumerate() {
        assert!((jx[c] - 1e-3 * sinc * x.cos()).abs() < 1e-15);
    }
}

#[test]
fn xmode_is_neutral_and_envelope_peaks() {
    let (cfg, y) = init_xmode(&Overrides { cells: Some(50), ..Default::default() });
    let rho = charge_density_raw(y.layout(), y.data(), cfg.physics.background_charge);
    assert!(rho.iter().all(|r| r.abs() < 1e-14), "max {}", rho.iter().fold(0.0f64, |a, r| a.max(r.abs())));
    let l = cfg.mesh.lengths[0];
    let carrier = |x: f64| -> f64 {
        (0..4)
            .map(|i| XMODE_AMPLITUDES[i] * (50.0 * (i + 1) as f64 * 2.0 * PI / l * x + XMODE_PHASES[i]).sin())
            .sum()
    };
    assert!(close(xmode_current(1.0, l, l / 2.0), carrier(l / 2.0), 1e-14));
    let x = 0.6 * l;
    let env = (-((x - l / 2.0) / (0.15 * l)).powi(2)).exp();
    assert!(close(xmode_current(1e-4, l, x), 1e-4 * env * carrier(x), 1e-13));
}

#[test]
fn orszag_tang_field_formulas() {
    let (cfg, y) = init_orszag_tang(&Overrides {
        cells: Some(12),
        hermite_orders: Some([1, 1, 1]),
        ..Default::default()
    });
    let mesh = y.layout().mesh();
    let k = 2.0 * PI / 50.0;
    let h = mesh.spacing();
    // cell means of sin(kx + φ) shrink by the sinc factor of the cell width
    let sx = (k * h[0]).sin() / (k * h[0]);
    let sy = (k * h[1] / 2.0).sin() / (k * h[1] / 2.0);
    for cell in [0, 5, 77, 143] {
        let c = mesh.cell_center(cell);
        let bx = y.data()[y.layout().field_offset(3, cell, 0)];
        let by = y.data()[y.layout().field_offset(4, cell, 0)];
        let bz = y.data()[y.layout().field_offset(5, cell, 0)];
        assert!((bx + 0.2 * sy * (k * c[1] + 4.1).sin()).abs() < 1e-13);
        // five-point Gauss rule over 2kh ≈ 1 rad
        assert!((by - 0.2 * sx * (2.0 * k * c[0] + 2.3).sin()).abs() < 1e-12);
        assert!((bz - 1.0).abs() < 1e-15);
    }
    assert_eq!(cfg.physics.omega_ratio, 2.0);
}

/// E-block L2 norms of `∂E/∂t` relative to the bare curl term: (cell means, all modes).
fn ampere_ratios(cells: usize) -> (f64, f64) {
    let (cfg, y) = init_orszag_tang(&Overrides {
        cells: Some(cells),
        hermite_orders: Some([1, 1, 1]),
        ..Default::default()
    });
    let layout = y.layout();
    let mesh = layout.mesh();
    let ws = MaxwellWorkspace::new(layout, &cfg.physics, FluxMode::Central);
    let full = maxwell_rhs(&y, &ws);
    let mut curl = StateVector::zeros(layout.clone());
    ws.add_field_terms(layout, y.data(), curl.data_mut());
    let norm = |s: &StateVector, modes: usize| -> f64 {
        let mut acc = 0.0;
        for c in 0..3 {
            for cell in 0..layout.n_cells() {
                for l in 0..modes {
                    acc += mesh.mode_mass(mesh.mode_tuple(l)) * s.data()[layout.field_offset(c, cell, l)].powi(2);
                }
            }
        }
        acc.sqrt()
    };
    let nm = layout.n_modes();
    (norm(&full, 1) / norm(&curl, 1), norm(&full, nm) / norm(&curl, nm))
}

#[test]
fn orszag_tang_satisfies_ampere_at_start() {
    let (mean_c, all_c) = ampere_ratios(27);
    let (mean_f, all_f) = ampere_ratios(54);
    // cell means cancel at second order
    assert!(mean_c < 0.02, "{mean_c}");
    assert!(mean_f < mean_c / 3.5, "{mean_f} vs {mean_c}");
    // in-cell slopes of J_z are not reproduced by the linear-element curl
    assert!(all_c < 0.15, "{all_c}");
    assert!(all_f < all_c / 1.8, "{all_f} vs {all_c}");
}
