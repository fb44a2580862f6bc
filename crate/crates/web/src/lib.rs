//! Browser demo: Hermite basis curves, energy drift per integrator and a
//! vacuum Maxwell pulse under central or upwind fluxes.
//!
//! The `demo` functions are plain Rust; the `#[wasm_bindgen]` wrappers only
//! marshal arguments.

use wasm_bindgen::prelude::*;

pub mod demo {
    use hermite_dg::basis::hermite::aw_values;
    use hermite_dg::basis::legendre;
    use hermite_dg::driver::scenarios::{init_whistler, project_cells, Overrides};
    use hermite_dg::driver::{initial_state, run_simulation};
    use hermite_dg::state::{FieldComponent, StateVector};
    use hermite_dg::{parse_config, Method};

    /// `ψ_0..=ψ_max` of the asymmetrically weighted basis on `samples` points of
    /// `[v_min, v_max]`, flattened order-major.
    pub fn hermite_curves(max: usize, alpha: f64, shift: f64, v_min: f64, v_max: f64, samples: usize) -> Vec<f64> {
        let n = samples.max(2);
        let mut out = vec![0.0; (max + 1) * n];
        for i in 0..n {
            let v = v_min + (v_max - v_min) * i as f64 / (n - 1) as f64;
            let vals = aw_values(max, (v - shift) / alpha);
            for (k, val) in vals.iter().enumerate() {
                out[k * n + i] = val / alpha;
            }
        }
        out
    }

    /// `|ΔE_tot / E_tot(0)|` after every step of a reduced whistler run.
    pub fn energy_drift(method: Method, steps: usize, dt: f64) -> Result<Vec<f64>, String> {
        let (cfg, y) = init_whistler(&Overrides {
            cells: Some(12),
            hermite_orders: Some([2, 2, 2]),
            method: Some(method),
            dt: Some(dt),
            t_end: Some(dt * steps as f64),
            cadence: Some(1),
            ..Default::default()
        });
        let r = run_simulation(&cfg, y, &mut []).map_err(|e| e.to_string())?;
        Ok(r.records.iter().map(|rec| rec.de_tot_rel.abs()).collect())
    }

    #[derive(Debug, Clone, PartialEq)]
    pub struct Pulse {
        pub x: Vec<f64>,
        pub ey: Vec<f64>,
        /// Electromagnetic energy after every step.
        pub energy: Vec<f64>,
    }

    /// Right-moving Gaussian `E_y = B_z` on a periodic vacuum line.
    pub fn maxwell_pulse(upwind: bool, cells: usize, degree: usize, t_end: f64) -> Result<Pulse, String> {
        let length = 10.0;
        let h = length / cells as f64;
        let dt = 0.2 * h / (2 * degree + 1) as f64;
        let method = if upwind { "mrku1" } else { "mrkc" };
        let src = format!(
            "scenario = \"custom\"\n[mesh]\ncells = [{cells}, 1, 1]\nlengths = [{length}, 1.0, 1.0]\ndg_degree = {degree}\n\
             [physics]\nomega_ratio = 1.0\n[integrator]\nmethod = \"{method}\"\ndt = {dt}\nt_end = {t_end}\n"
        );
        let cfg = parse_config(&src).map_err(|e| e.to_string())?;
        let mut y = initial_state(&cfg).map_err(|e| e.to_string())?;
        let g = project_cells(&cfg.mesh, 1, &|x| vec![(-((x[0] - 0.5 * length) / 0.6).powi(2)).exp()]);
        let nm = cfg.mesh.n_modes();
        for cell in 0..cells {
            for l in 0..nm {
                y.set_field(FieldComponent::Ey, cell, l, g[cell * nm + l]);
                y.set_field(FieldComponent::Bz, cell, l, g[cell * nm + l]);
            }
        }
        let r = run_simulation(&cfg, y, &mut []).map_err(|e| e.to_string())?;
        let (x, ey) = sample_line(&r.state, FieldComponent::Ey, 8);
        Ok(Pulse {
            x,
            ey,
            energy: r.records.iter().map(|rec| rec.e_em).collect(),
        })
    }

    /// Field values at `per_cell` evenly spaced points inside every cell.
    pub fn sample_line(state: &StateVector, c: FieldComponent, per_cell: usize) -> (Vec<f64>, Vec<f64>) {
        let mesh = state.layout().mesh();
        let h = mesh.spacing()[0];
        let (mut xs, mut vs) = (vec![], vec![]);
        for cell in 0..mesh.n_cells() {
            let x0 = mesh.cell_center(cell)[0] - h / 2.0;
            for i in 0..per_cell {
                let r = -1.0 + (2 * i + 1) as f64 / per_cell as f64;
                xs.push(x0 + 0.5 * h * (r + 1.0));
                vs.push((0..mesh.n_modes()).map(|l| state.field(c, cell, l) * legendre(l, r)).sum());
            }
        }
        (xs, vs)
    }
}

fn js_err(e: String) -> JsValue {
    JsValue::from_str(&e)
}

#[wasm_bindgen(js_name = hermiteCurves)]
pub fn hermite_curves(max: usize, alpha: f64, shift: f64, v_min: f64, v_max: f64, samples: usize) -> Vec<f64> {
    demo::hermite_curves(max, alpha, shift, v_min, v_max, samples)
}

#[wasm_bindgen(js_name = energyDrift)]
pub fn energy_drift(method: &str, steps: usize, dt: f64) -> Result<Vec<f64>, JsValue> {
    let m: hermite_dg::Method = method.parse().map_err(|e: String| js_err(e))?;
    demo::energy_drift(m, steps, dt).map_err(js_err)
}

#[wasm_bindgen]
pub struct PulseRun(demo::Pulse);

#[wasm_bindgen]
impl PulseRun {
    pub fn x(&self) -> Vec<f64> {
        self.0.x.clone()
    }

    pub fn ey(&self) -> Vec<f64> {
        self.0.ey.clone()
    }

    pub fn energy(&self) -> Vec<f64> {
        self.0.energy.clone()
    }
}

#[wasm_bindgen(js_name = maxwellPulse)]
pub fn maxwell_pulse(upwind: bool, cells: usize, degree: usize, t_end: f64) -> Result<PulseRun, JsValue> {
    demo::maxwell_pulse(upwind, cells, degree, t_end).map(PulseRun).map_err(js_err)
}
