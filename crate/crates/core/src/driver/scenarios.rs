//! Benchmark presets and initial states.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::basis::legendre::legendre;
use crate::basis::quadrature::gauss_legendre;
use crate::basis::project_shifted_maxwellian;
use crate::config::{InitialSpec, OutputSpec, ScenarioId, SimConfig};
use crate::error::ConfigError;
use crate::integrators::{Method, NewtonKrylovConfig};
use crate::state::{MeshSpec, PhysicsConstants, SpeciesSpec, StateLayout, StateVector};

pub const WHISTLER_MASS_RATIO: f64 = 1836.0;
pub const WHISTLER_VT_E: [f64; 3] = [0.056, 0.125, 0.125];
pub const XMODE_AMPLITUDES: [f64; 4] = [0.598, 0.517, 0.193, 0.218];
pub const XMODE_PHASES: [f64; 4] = [0.305, 0.586, 0.050, 0.089];
pub const OT_DELTA_B: f64 = 0.2;
pub const OT_ALFVEN: f64 = 0.1;
pub const OT_LENGTH: f64 = 50.0;
pub const OT_MASS_RATIO: f64 = 25.0;

/// Optional changes applied on top of a preset.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    /// Cells along each non-degenerate axis.
    pub cells: Option<usize>,
    pub hermite_orders: Option<[usize; 3]>,
    pub dg_degree: Option<usize>,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub method: Option<Method>,
    pub cadence: Option<usize>,
    /// Orszag-Tang only: use the full 108² grid.
    pub paper_scale: bool,
}

fn species(name: &str, mass: f64, charge: f64, orders: [usize; 3], alpha: [f64; 3]) -> SpeciesSpec {
    SpeciesSpec {
        name: name.into(),
        mass,
        charge,
        hermite_orders: orders,
        alpha,
        shift: [0.0; 3],
    }
}

fn base(
    scenario: ScenarioId,
    mesh: MeshSpec,
    species: Vec<SpeciesSpec>,
    physics: PhysicsConstants,
    method: Method,
    dt: f64,
    t_end: f64,
    initial_b: [f64; 3],
    perturbation: f64,
) -> SimConfig {
    let n = species.len();
    SimConfig {
        scenario,
        mesh,
        species,
        physics,
        method,
        maxwell_flux: method.flux_mode(),
        epsilon: method.epsilon(),
        tableau: method.default_tableau(),
        dt,
        t_end,
        solver: NewtonKrylovConfig::default(),
        output: OutputSpec::default(),
        initial: InitialSpec {
            background_b: initial_b,
            perturbation,
            density: vec![1.0; n],
            bulk: vec![[0.0; 3]; n],
        },
    }
}

/// Applies `o` on top of `cfg`; the method change re-derives flux, ε and tableau.
pub fn apply_overrides(mut cfg: SimConfig, o: &Overrides) -> SimConfig {
    if let Some(n) = o.cells {
        for a in 0..3 {
            if cfg.mesh.cells[a] > 1 {
                cfg.mesh.cells[a] = n;
            }
        }
    }
    if let Some(h) = o.hermite_orders {
        cfg.species.iter_mut().for_each(|s| s.hermite_orders = h);
    }
    if let Some(d) = o.dg_degree {
        cfg.mesh.dg_degree = d;
    }
    if let Some(dt) = o.dt {
        cfg.dt = dt;
    }
    if let Some(t) = o.t_end {
        cfg.t_end = t;
    }
    if let Some(m) = o.method {
        cfg.set_method(m);
    }
    if let Some(c) = o.cadence {
        cfg.output.cadence = c;
    }
    cfg
}

pub fn whistler_config(o: &Overrides) -> SimConfig {
    let alpha_e = WHISTLER_VT_E.map(|v| 2f64.sqrt() * v);
    let alpha_i = alpha_e.map(|a| a / WHISTLER_MASS_RATIO.sqrt());
    let mut cfg = base(
        ScenarioId::Whistler,
        MeshSpec::line(72, 2.0 * PI, 1),
        vec![
            species("electron", 1.0, -1.0, [9, 9, 9], alpha_e),
            species("ion", WHISTLER_MASS_RATIO, 1.0, [9, 9, 9], alpha_i),
        ],
        PhysicsConstants {
            omega_ratio: 4.0,
            collision_rate: 1.0,
            background_charge: 0.0,
        },
        Method::Rkc,
        0.01,
        400.0,
        [1.0, 0.0, 0.0],
        1e-3,
    );
    cfg.output.cadence = 10;
    apply_overrides(cfg, o)
}

pub fn xmode_config(o: &Overrides) -> SimConfig {
    let mut cfg = base(
        ScenarioId::Xmode,
        MeshSpec::line(500, 100.0 * PI, 1),
        vec![species("electron", 1.0, -1.0, [3, 3, 3], [0.002; 3])],
        PhysicsConstants {
            omega_ratio: 1.0,
            collision_rate: 0.0,
            background_charge: 1.0,
        },
        Method::Rkc,
        PI / 25.0,
        100.0 * PI,
        [0.0, 0.0, 1.0],
        1e-4,
    );
    cfg.output.field_history = true;
    apply_overrides(cfg, o)
}

pub fn orszag_tang_config(o: &Overrides) -> SimConfig {
    let n = if o.paper_scale { 108 } else { 54 };
    let mut cfg = base(
        ScenarioId::OrszagTang,
        MeshSpec::new([n, n, 1], [OT_LENGTH, OT_LENGTH, 1.0], 1),
        vec![
            species("electron", 1.0, -1.0, [3, 3, 3], [0.25; 3]),
            species("ion", OT_MASS_RATIO, 1.0, [3, 3, 3], [0.05; 3]),
        ],
        PhysicsConstants {
            omega_ratio: 2.0,
            collision_rate: 1.0,
            background_charge: 0.0,
        },
        Method::Rkc,
        0.05,
        1000.0,
        [0.0, 0.0, 1.0],
        OT_DELTA_B,
    );
    cfg.output.cadence = 20;
    cfg.output.fourier_modes = vec![];
    apply_overrides(cfg, o)
}

pub fn preset(id: ScenarioId, o: &Overrides) -> Result<SimConfig, ConfigError> {
    match id {
        ScenarioId::Whistler => Ok(whistler_config(o)),
        ScenarioId::Xmode => Ok(xmode_config(o)),
        ScenarioId::OrszagTang => Ok(orszag_tang_config(o)),
        ScenarioId::Custom => Err(ConfigError::invalid(
            "scenario",
            "the custom scenario has no preset; supply a config file",
        )),
    }
}

/// DG projection per cell of a block-valued function, laid out `[cell][mode][block]`.
pub fn project_cells(
    mesh: &MeshSpec,
    bs: usize,
    f: &dyn Fn([f64; 3]) -> Vec<f64>,
) -> Vec<f64> {
    let nq = mesh.dg_degree + 4;
    let (rq, wq) = gauss_legendre(nq);
    let axis_points: [Vec<(f64, f64)>; 3] = [0, 1, 2].map(|a| {
        if mesh.active(a) {
            rq.iter().copied().zip(wq.iter().map(|w| w / 2.0)).collect()
        } else {
            vec![(0.0, 1.0)]
        }
    });
    let nm = mesh.n_modes();
    let modes: Vec<[usize; 3]> = (0..nm).map(|l| mesh.mode_tuple(l)).collect();
    let h = mesh.spacing();
    let mut out = vec![0.0; mesh.n_cells() * nm * bs];
    for cell in 0..mesh.n_cells() {
        let c = mesh.cell_center(cell);
        for &(rx, wx) in &axis_points[0] {
            for &(ry, wy) in &axis_points[1] {
                for &(rz, wz) in &axis_points[2] {
                    let r = [rx, ry, rz];
                    let x = [0, 1, 2].map(|a| c[a] + 0.5 * h[a] * r[a]);
                    let v = f(x);
                    let w = wx * wy * wz;
                    for (l, lt) in modes.iter().enumerate() {
                        let phi: f64 = (0..3)
                            .map(|a| (2 * lt[a] + 1) as f64 * legendre(lt[a], r[a]))
                            .product();
                        let dst = &mut out[(cell * nm + l) * bs..(cell * nm + l + 1) * bs];
                        for (d, vi) in dst.iter_mut().zip(&v) {
                            *d += w * phi * vi;
                        }
                    }
                }
            }
        }
    }
    out
}

fn set_species(state: &mut StateVector, s: usize, blocks: &[f64]) {
    let layout = state.layout().clone();
    let r = layout.species_range(s);
    state.data_mut()[r].copy_from_slice(blocks);
}

fn set_fields(state: &mut StateVector, fields: &[f64]) {
    let layout = state.layout().clone();
    let (nc, nm) = (layout.n_cells(), layout.n_modes());
    let d = state.data_mut();
    for cell in 0..nc {
        for l in 0..nm {
            for c in 0..6 {
                d[layout.field_offset(c, cell, l)] = fields[(cell * nm + l) * 6 + c];
            }
        }
    }
}

fn unit_index(sp: &SpeciesSpec, axis: usize) -> Option<usize> {
    (sp.hermite_orders[axis] >= 1).then(|| {
        let mut k = [0; 3];
        k[axis] = 1;
        sp.hermite_index(k)
    })
}

/// Adds a first-moment perturbation realising current `j(x)` along `axis`.
fn seed_current(
    state: &mut StateVector,
    s: usize,
    axis: usize,
    j: &dyn Fn([f64; 3]) -> f64,
) -> Result<(), ConfigError> {
    let layout = state.layout().clone();
    let sp = &layout.species()[s];
    let idx = unit_index(sp, axis).ok_or_else(|| {
        ConfigError::invalid(
            format!("species.{}.hermite_orders", sp.name),
            "the current perturbation needs at least one Hermite mode along its axis",
        )
    })?;
    let scale = 1.0 / (sp.charge * sp.alpha_volume() * sp.alpha[axis] / 2f64.sqrt());
    let proj = project_cells(layout.mesh(), 1, &|x| vec![scale * j(x)]);
    let nm = layout.n_modes();
    for cell in 0..layout.n_cells() {
        for l in 0..nm {
            state.hermite_block_mut(s, cell, l)[idx] += proj[cell * nm + l];
        }
    }
    Ok(())
}

fn uniform_maxwellians(cfg: &SimConfig, state: &mut StateVector) {
    let layout = state.layout().clone();
    for (s, sp) in cfg.species.iter().enumerate() {
        let thermal = sp.alpha.map(|a| a / 2f64.sqrt());
        let block = project_shifted_maxwellian(sp, cfg.initial.density[s], cfg.initial.bulk[s], thermal);
        for cell in 0..layout.n_cells() {
            state.hermite_block_mut(s, cell, 0).copy_from_slice(&block);
        }
    }
}

fn uniform_field(cfg: &SimConfig, state: &mut StateVector) {
    for cell in 0..state.layout().n_cells() {
        for a in 0..3 {
            state.set_field(crate::state::FieldComponent::ALL[3 + a], cell, 0, cfg.initial.background_b[a]);
        }
    }
}

fn first_negative(cfg: &SimConfig) -> Result<usize, ConfigError> {
    cfg.species
        .iter()
        .position(|s| s.charge < 0.0)
        .ok_or_else(|| ConfigError::invalid("species", "scenario needs a negatively charged species"))
}

/// Builds the initial state described by `cfg`.
pub fn initial_state(cfg: &SimConfig) -> Result<StateVector, ConfigError> {
    let layout = Arc::new(StateLayout::new(cfg.mesh.clone(), cfg.species.clone()));
    let mut state = StateVector::zeros(layout.clone());
    match cfg.scenario {
        ScenarioId::Whistler => {
            uniform_maxwellians(cfg, &mut state);
            uniform_field(cfg, &mut state);
            let e = first_negative(cfg)?;
            let amp = cfg.initial.perturbation;
            seed_current(&mut state, e, 0, &|x| amp * x[0].cos())?;
        }
        ScenarioId::Xmode => {
            uniform_maxwellians(cfg, &mut state);
            uniform_field(cfg, &mut state);
            let e = first_negative(cfg)?;
            let amp = cfg.initial.perturbation;
            let l = cfg.mesh.lengths[0];
            seed_current(&mut state, e, 1, &|x| xmode_current(amp, l, x[0]))?;
        }
        ScenarioId::OrszagTang => {
            let db = cfg.initial.perturbation;
            let (lx, ly) = (cfg.mesh.lengths[0], cfg.mesh.lengths[1]);
            let (kx, ky) = (2.0 * PI / lx, 2.0 * PI / ly);
            let bz = cfg.initial.background_b[2];
            let fields = project_cells(&cfg.mesh, 6, &|x| {
                vec![
                    0.0,
                    0.0,
                    0.0,
                    -db * (ky * x[1] + 4.1).sin(),
                    db * (2.0 * kx * x[0] + 2.3).sin(),
                    bz,
                ]
            });
            set_fields(&mut state, &fields);
            let omega = cfg.physics.omega_ratio;
            for (s, sp) in cfg.species.iter().enumerate() {
                let thermal = sp.alpha.map(|a| a / 2f64.sqrt());
                let electron = sp.charge < 0.0;
                let density = cfg.initial.density[s];
                let blocks = project_cells(&cfg.mesh, sp.n_hermite(), &|x| {
                    let u = orszag_tang_velocity(db, kx, ky, omega, electron, x);
                    project_shifted_maxwellian(sp, density, u, thermal)
                });
                set_species(&mut state, s, &blocks);
            }
        }
        ScenarioId::Custom => {
            uniform_maxwellians(cfg, &mut state);
            uniform_field(cfg, &mut state);
        }
    }
    Ok(state)
}

/// `10⁻⁴`-scale X-mode seed current with Gaussian envelope at the domain centre.
pub fn xmode_current(amp: f64, length: f64, x: f64) -> f64 {
    let env = (-((x - length / 2.0) / (0.15 * length)).powi(2)).exp();
    let kmin = 2.0 * PI / length;
    let s: f64 = (0..4)
        .map(|i| {
            let k = 50.0 * (i + 1) as f64 * kmin;
            XMODE_AMPLITUDES[i] * (k * x + XMODE_PHASES[i]).sin()
        })
        .sum();
    amp * env * s
}

pub fn orszag_tang_velocity(
    db: f64,
    kx: f64,
    ky: f64,
    omega_ratio: f64,
    electron: bool,
    x: [f64; 3],
) -> [f64; 3] {
    let ux = -db * OT_ALFVEN * (ky * x[1] + 0.5).sin();
    let uy = db * OT_ALFVEN * (kx * x[0] + 1.4).sin();
    let uz = if electron {
        -(db / omega_ratio) * (2.0 * kx * (2.0 * kx * x[0] + 2.3).cos() + ky * (ky * x[1] + 4.1).cos())
    } else {
        0.0
    };
    [ux, uy, uz]
}

pub fn init_whistler(o: &Overrides) -> (SimConfig, StateVector) {
    let cfg = whistler_config(o);
    let state = initial_state(&cfg).expect("whistler preset is valid");
    (cfg, state)
}

pub fn init_xmode(o: &Overrides) -> (SimConfig, StateVector) {
    let cfg = xmode_config(o);
    let state = initial_state(&cfg).expect("x-mode preset is valid");
    (cfg, state)
}

pub fn init_orszag_tang(o: &Overrides) -> (SimConfig, StateVector) {
    let cfg = orszag_tang_config(o);
    let state = initial_state(&cfg).expect("Orszag-Tang preset is valid");
    (cfg, state)
}
