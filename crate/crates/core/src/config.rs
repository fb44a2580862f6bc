//! Run configuration and its TOML form. See `docs/config.md` for the schema.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::ConfigError;
use crate::integrators::{ButcherTableau, Method, NewtonKrylovConfig};
use crate::maxwell::FluxMode;
use crate::state::{MeshSpec, PhysicsConstants, SpeciesSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioId {
    Whistler,
    Xmode,
    OrszagTang,
    Custom,
}

impl ScenarioId {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioId::Whistler => "whistler",
            ScenarioId::Xmode => "xmode",
            ScenarioId::OrszagTang => "orszag-tang",
            ScenarioId::Custom => "custom",
        }
    }
}

impl FromStr for ScenarioId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "whistler" => Ok(ScenarioId::Whistler),
            "xmode" => Ok(ScenarioId::Xmode),
            "orszag-tang" | "orszag_tang" => Ok(ScenarioId::OrszagTang),
            "custom" => Ok(ScenarioId::Custom),
            other => Err(format!(
                "unknown scenario `{other}` (expected whistler, xmode, orszag-tang or custom)"
            )),
        }
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    /// Diagnostics row every `cadence` steps.
    pub cadence: usize,
    /// Field snapshot every this many steps; 0 writes only the final state.
    pub snapshot_every: usize,
    pub coefficients: bool,
    /// Record E_y at cell centres every `cadence` steps for the ω-k spectrum.
    pub field_history: bool,
    pub fourier_modes: Vec<i64>,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            cadence: 1,
            snapshot_every: 0,
            coefficients: false,
            field_history: false,
            fourier_modes: vec![1],
        }
    }
}

/// Scenario knobs for the initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialSpec {
    pub background_b: [f64; 3],
    pub perturbation: f64,
    /// Per species: density, bulk velocity, thermal speed (custom scenario).
    pub density: Vec<f64>,
    pub bulk: Vec<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub scenario: ScenarioId,
    pub mesh: MeshSpec,
    pub species: Vec<SpeciesSpec>,
    pub physics: PhysicsConstants,
    pub method: Method,
    pub maxwell_flux: FluxMode,
    pub epsilon: f64,
    pub tableau: ButcherTableau,
    pub dt: f64,
    pub t_end: f64,
    pub solver: NewtonKrylovConfig,
    pub output: OutputSpec,
    pub initial: InitialSpec,
}

impl SimConfig {
    /// Re-derives flux, ε and the default tableau after the method changes.
    pub fn set_method(&mut self, method: Method) {
        self.method = method;
        self.maxwell_flux = method.flux_mode();
        self.epsilon = method.epsilon();
        self.tableau = method.default_tableau();
    }

    pub fn n_steps(&self) -> usize {
        let n = self.t_end / self.dt;
        let r = n.round();
        if (n - r).abs() < 1e-9 * n.max(1.0) {
            r as usize
        } else {
            n.ceil() as usize
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.mesh.validate()?;
        if self.species.is_empty() && self.scenario != ScenarioId::Custom {
            return Err(ConfigError::invalid("species", "at least one species is required"));
        }
        for s in &self.species {
            s.validate()?;
        }
        self.physics.validate()?;
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(ConfigError::invalid("integrator.dt", "must be positive"));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(ConfigError::invalid("integrator.t_end", "must be non-negative"));
        }
        if self.epsilon != 0.0 && self.epsilon != 1.0 {
            return Err(ConfigError::invalid("integrator.epsilon", "must be 0 or 1"));
        }
        if self.maxwell_flux != self.method.flux_mode() {
            return Err(ConfigError::invalid(
                "integrator.flux",
                format!("method {} uses {} flux", self.method, self.method.flux_mode()),
            ));
        }
        if self.method.is_implicit() == self.tableau.is_explicit() {
            return Err(ConfigError::invalid(
                "integrator.tableau",
                format!("tableau {} does not fit method {}", self.tableau.name, self.method),
            ));
        }
        if self.method.is_modified() && self.tableau.stages() < 2 {
            return Err(ConfigError::invalid(
                "integrator.tableau",
                "modified Runge-Kutta needs at least two stages",
            ));
        }
        let s = &self.solver;
        for (k, v) in [
            ("rel_tol", s.rel_tol),
            ("abs_tol", s.abs_tol),
            ("linear_rel_tol", s.linear_rel_tol),
            ("linear_abs_tol", s.linear_abs_tol),
            ("roundoff_floor", s.roundoff_floor),
        ] {
            if !(v > 0.0) {
                return Err(ConfigError::invalid(format!("integrator.solver.{k}"), "must be positive"));
            }
        }
        if self.output.cadence == 0 {
            return Err(ConfigError::invalid("output.cadence", "must be positive"));
        }
        let ns = self.species.len();
        if self.initial.density.len() != ns || self.initial.bulk.len() != ns {
            return Err(ConfigError::invalid("initial", "per-species data length mismatch"));
        }
        Ok(())
    }

    /// SHA-256 of the canonical TOML form.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_toml().as_bytes()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&RawConfig::from_config(self)).expect("config serialises")
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: Option<String>,
    mesh: Option<RawMesh>,
    #[serde(default)]
    species: IndexMap<String, RawSpecies>,
    physics: Option<RawPhysics>,
    integrator: Option<RawIntegrator>,
    output: Option<RawOutput>,
    initial: Option<RawInitial>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMesh {
    cells: Option<[usize; 3]>,
    lengths: Option<[f64; 3]>,
    dg_degree: Option<usize>,
    periodic: Option<[bool; 3]>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpecies {
    mass: Option<f64>,
    charge: Option<f64>,
    hermite_orders: Option<[usize; 3]>,
    alpha: Option<[f64; 3]>,
    shift: Option<[f64; 3]>,
    density: Option<f64>,
    bulk: Option<[f64; 3]>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPhysics {
    omega_ratio: Option<f64>,
    collision_rate: Option<f64>,
    background_charge: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIntegrator {
    method: Option<String>,
    dt: Option<f64>,
    t_end: Option<f64>,
    tableau: Option<String>,
    flux: Option<String>,
    epsilon: Option<f64>,
    solver: Option<RawSolver>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    rel_tol: Option<f64>,
    abs_tol: Option<f64>,
    linear_rel_tol: Option<f64>,
    linear_abs_tol: Option<f64>,
    max_newton: Option<usize>,
    krylov_dim: Option<usize>,
    max_restarts: Option<usize>,
    roundoff_floor: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    cadence: Option<usize>,
    snapshot_every: Option<usize>,
    coefficients: Option<bool>,
    field_history: Option<bool>,
    fourier_modes: Option<Vec<i64>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInitial {
    background_b: Option<[f64; 3]>,
    perturbation: Option<f64>,
}

fn required<T>(v: Option<T>, field: &str) -> Result<T, ConfigError> {
    v.ok_or_else(|| ConfigError::invalid(field, "missing required key"))
}

impl RawConfig {
    fn into_config(self) -> Result<SimConfig, ConfigError> {
        let scenario: ScenarioId = match self.scenario {
            Some(s) => s.parse().map_err(|m: String| ConfigError::invalid("scenario", m))?,
            None => ScenarioId::Custom,
        };
        let mesh = required(self.mesh, "mesh")?;
        let mesh = MeshSpec {
            cells: required(mesh.cells, "mesh.cells")?,
            lengths: required(mesh.lengths, "mesh.lengths")?,
            dg_degree: mesh.dg_degree.unwrap_or(1),
            periodic: mesh.periodic.unwrap_or([true; 3]),
        };
        let mut species = Vec::new();
        let mut density = Vec::new();
        let mut bulk = Vec::new();
        for (name, s) in self.species {
            let f = |k: &str| format!("species.{name}.{k}");
            species.push(SpeciesSpec {
                mass: required(s.mass, &f("mass"))?,
                charge: required(s.charge, &f("charge"))?,
                hermite_orders: required(s.hermite_orders, &f("hermite_orders"))?,
                alpha: required(s.alpha, &f("alpha"))?,
                shift: s.shift.unwrap_or([0.0; 3]),
                name,
            });
            density.push(s.density.unwrap_or(1.0));
            bulk.push(s.bulk.unwrap_or([0.0; 3]));
        }
        let ph = self.physics.unwrap_or_default();
        let physics = PhysicsConstants {
            omega_ratio: required(ph.omega_ratio, "physics.omega_ratio")?,
            collision_rate: ph.collision_rate.unwrap_or(0.0),
            background_charge: ph.background_charge.unwrap_or(0.0),
        };
        let it = required(self.integrator, "integrator")?;
        let method: Method = required(it.method, "integrator.method")?
            .parse()
            .map_err(|m: String| ConfigError::invalid("integrator.method", m))?;
        let maxwell_flux = match it.flux {
            Some(f) => f.parse().map_err(|m: String| ConfigError::invalid("integrator.flux", m))?,
            None => method.flux_mode(),
        };
        let tableau = match it.tableau {
            Some(name) => ButcherTableau::by_name(&name).ok_or_else(|| {
                ConfigError::invalid(
                    "integrator.tableau",
                    format!("unknown tableau `{name}` (known: {})", ButcherTableau::NAMES.join(", ")),
                )
            })?,
            None => method.default_tableau(),
        };
        if let Some(e) = it.epsilon {
            if method.flux_mode() == FluxMode::Upwind && e != method.epsilon() {
                return Err(ConfigError::invalid(
                    "integrator.epsilon",
                    format!("method {method} implies epsilon = {}", method.epsilon()),
                ));
            }
        }
        let d = NewtonKrylovConfig::default();
        let sv = it.solver.unwrap_or_default();
        let solver = NewtonKrylovConfig {
            rel_tol: sv.rel_tol.unwrap_or(d.rel_tol),
            abs_tol: sv.abs_tol.unwrap_or(d.abs_tol),
            linear_rel_tol: sv.linear_rel_tol.unwrap_or(d.linear_rel_tol),
            linear_abs_tol: sv.linear_abs_tol.unwrap_or(d.linear_abs_tol),
            max_newton: sv.max_newton.unwrap_or(d.max_newton),
            krylov_dim: sv.krylov_dim.unwrap_or(d.krylov_dim),
            max_restarts: sv.max_restarts.unwrap_or(d.max_restarts),
            roundoff_floor: sv.roundoff_floor.unwrap_or(d.roundoff_floor),
            fd_base: d.fd_base,
        };
        let od = OutputSpec::default();
        let out = self.output.unwrap_or_default();
        let output = OutputSpec {
            cadence: out.cadence.unwrap_or(od.cadence),
            snapshot_every: out.snapshot_every.unwrap_or(od.snapshot_every),
            coefficients: out.coefficients.unwrap_or(od.coefficients),
            field_history: out.field_history.unwrap_or(od.field_history),
            fourier_modes: out.fourier_modes.unwrap_or(od.fourier_modes),
        };
        let ini = self.initial.unwrap_or_default();
        let initial = InitialSpec {
            background_b: ini.background_b.unwrap_or([0.0; 3]),
            perturbation: ini.perturbation.unwrap_or(0.0),
            density,
            bulk,
        };
        let cfg = SimConfig {
            scenario,
            mesh,
            species,
            physics,
            method,
            maxwell_flux,
            epsilon: method.epsilon(),
            tableau,
            dt: required(it.dt, "integrator.dt")?,
            t_end: required(it.t_end, "integrator.t_end")?,
            solver,
            output,
            initial,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn from_config(c: &SimConfig) -> Self {
        let species = c
            .species
            .iter()
            .enumerate()
            .map(|(i, s)| {
                (
                    s.name.clone(),
                    RawSpecies {
                        mass: Some(s.mass),
                        charge: Some(s.charge),
                        hermite_orders: Some(s.hermite_orders),
                        alpha: Some(s.alpha),
                        shift: Some(s.shift),
                        density: Some(c.initial.density[i]),
                        bulk: Some(c.initial.bulk[i]),
                    },
                )
            })
            .collect();
        RawConfig {
            scenario: Some(c.scenario.name().into()),
            mesh: Some(RawMesh {
                cells: Some(c.mesh.cells),
                lengths: Some(c.mesh.lengths),
                dg_degree: Some(c.mesh.dg_degree),
                periodic: Some(c.mesh.periodic),
            }),
            species,
            physics: Some(RawPhysics {
                omega_ratio: Some(c.physics.omega_ratio),
                collision_rate: Some(c.physics.collision_rate),
                background_charge: Some(c.physics.background_charge),
            }),
            integrator: Some(RawIntegrator {
                method: Some(c.method.name().into()),
                dt: Some(c.dt),
                t_end: Some(c.t_end),
                tableau: Some(c.tableau.name.into()),
                flux: Some(c.maxwell_flux.to_string()),
                epsilon: Some(c.epsilon),
                solver: Some(RawSolver {
                    rel_tol: Some(c.solver.rel_tol),
                    abs_tol: Some(c.solver.abs_tol),
                    linear_rel_tol: Some(c.solver.linear_rel_tol),
                    linear_abs_tol: Some(c.solver.linear_abs_tol),
                    max_newton: Some(c.solver.max_newton),
                    krylov_dim: Some(c.solver.krylov_dim),
                    max_restarts: Some(c.solver.max_restarts),
                    roundoff_floor: Some(c.solver.roundoff_floor),
                }),
            }),
            output: Some(RawOutput {
                cadence: Some(c.output.cadence),
                snapshot_every: Some(c.output.snapshot_every),
                coefficients: Some(c.output.coefficients),
                field_history: Some(c.output.field_history),
                fourier_modes: Some(c.output.fourier_modes.clone()),
            }),
            initial: Some(RawInitial {
                background_b: Some(c.initial.background_b),
                perturbation: Some(c.initial.perturbation),
            }),
        }
    }
}

/// Line (1-based) where `field` (dotted path) is set in `src`, if found.
pub fn locate_field(src: &str, field: &str) -> Option<usize> {
    let (section, key) = match field.rsplit_once('.') {
        Some((s, k)) => (s, k),
        None => ("", field),
    };
    let mut current = String::new();
    let mut section_line = None;
    for (i, line) in src.lines().enumerate() {
        let t = line.trim();
        if let Some(h) = t.strip_prefix('[').and_then(|h| h.strip_suffix(']')) {
            current = h.trim().trim_matches('[').trim_matches(']').to_string();
            if current == field {
                section_line = Some(i + 1);
            }
            continue;
        }
        if current == section {
            if let Some(rest) = t.strip_prefix(key) {
                if rest.trim_start().starts_with('=') {
                    return Some(i + 1);
                }
            }
        }
    }
    section_line
}

pub fn parse_config(src: &str) -> Result<SimConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(src).map_err(|e| ConfigError::Parse {
        message: e.message().to_string(),
        line: e.span().map(|s| src[..s.start.min(src.len())].lines().count().max(1)),
    })?;
    raw.into_config().map_err(|e| match e {
        ConfigError::Invalid { field, message, .. } => {
            let line = locate_field(src, &field);
            ConfigError::Invalid { field, message, line }
        }
        other => other,
    })
}

pub fn load_config(path: impl AsRef<Path>) -> Result<SimConfig, ConfigError> {
    let path = path.as_ref();
    let src = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&src)
}
