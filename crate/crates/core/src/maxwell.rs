//! Maxwell's equations in conservative form, `∂_t u + Σ_β ∂_β(F_β u) = S(u)`,
//! with `u = (E, B)`, `F_β u = (-e_β × B, e_β × E)` and `S = (-(ω_pe/ω_ce) J, 0)`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix6, SymmetricEigen};

use crate::dg::{AxisScratch, DgOperators};
use crate::state::{PhysicsConstants, StateLayout, StateVector};

pub type Mat6 = [[f64; 6]; 6];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FluxMode {
    Central,
    Upwind,
}

impl FromStr for FluxMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "central" => Ok(FluxMode::Central),
            "upwind" => Ok(FluxMode::Upwind),
            other => Err(format!("unknown flux `{other}` (expected central or upwind)")),
        }
    }
}

impl fmt::Display for FluxMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FluxMode::Central => "central",
            FluxMode::Upwind => "upwind",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FluxMatrices {
    pub f: [Mat6; 3],
    pub plus: [Mat6; 3],
    pub minus: [Mat6; 3],
    pub abs: [Mat6; 3],
    pub eigenvalues: [[f64; 6]; 3],
}

fn cross_block(axis: usize) -> [[f64; 3]; 3] {
    // K v = e_axis × v
    let mut k = [[0.0; 3]; 3];
    let (i, j) = ((axis + 1) % 3, (axis + 2) % 3);
    k[j][i] = 1.0;
    k[i][j] = -1.0;
    k
}

fn flux_matrix(axis: usize) -> Mat6 {
    let k = cross_block(axis);
    let mut f = [[0.0; 6]; 6];
    for r in 0..3 {
        for c in 0..3 {
            f[r][3 + c] = -k[r][c];
            f[3 + r][c] = k[r][c];
        }
    }
    f
}

pub fn build_flux_matrices() -> FluxMatrices {
    let f = [0, 1, 2].map(flux_matrix);
    let mut plus = [[[0.0; 6]; 6]; 3];
    let mut minus = [[[0.0; 6]; 6]; 3];
    let mut abs = [[[0.0; 6]; 6]; 3];
    let mut eigenvalues = [[0.0; 6]; 3];
    for a in 0..3 {
        let m = Matrix6::from_fn(|i, j| f[a][i][j]);
        let eig = SymmetricEigen::new(m);
        let mut order: Vec<usize> = (0..6).collect();
        order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
        for (slot, &k) in order.iter().enumerate() {
            let lam = eig.eigenvalues[k];
            eigenvalues[a][slot] = lam.round();
            let v = eig.eigenvectors.column(k);
            let (lp, lm) = (0.5 * (lam + lam.abs()), 0.5 * (lam - lam.abs()));
            for i in 0..6 {
                for j in 0..6 {
                    plus[a][i][j] += lp * v[i] * v[j];
                    minus[a][i][j] += lm * v[i] * v[j];
                }
            }
        }
        for i in 0..6 {
            for j in 0..6 {
                plus[a][i][j] = clean(plus[a][i][j]);
                minus[a][i][j] = clean(minus[a][i][j]);
                abs[a][i][j] = plus[a][i][j] - minus[a][i][j];
            }
        }
    }
    FluxMatrices {
        f,
        plus,
        minus,
        abs,
        eigenvalues,
    }
}

/// Entries of the split are multiples of ½; snapping removes eigen-solver noise.
fn clean(v: f64) -> f64 {
    let r = (2.0 * v).round() / 2.0;
    if (v - r).abs() < 1e-12 {
        r
    } else {
        v
    }
}

#[inline]
pub fn mat6_apply(m: &Mat6, u: &[f64], out: &mut [f64]) {
    for i in 0..6 {
        let mut acc = 0.0;
        for j in 0..6 {
            acc += m[i][j] * u[j];
        }
        out[i] = acc;
    }
}

#[derive(Debug, Clone)]
pub struct MaxwellWorkspace {
    pub dg: DgOperators,
    pub flux: FluxMatrices,
    pub mode: FluxMode,
    /// ω_pe/ω_ce multiplying the current in Ampère's law.
    pub source_prefactor: f64,
    pub background_charge: f64,
}

impl MaxwellWorkspace {
    pub fn new(layout: &StateLayout, physics: &PhysicsConstants, mode: FluxMode) -> Self {
        MaxwellWorkspace {
            dg: DgOperators::new(layout.mesh()),
            flux: build_flux_matrices(),
            mode,
            source_prefactor: physics.omega_ratio,
            background_charge: physics.background_charge,
        }
    }

    /// Gathers the EM block into `[cell][mode][component]` order.
    pub fn gather(&self, layout: &StateLayout, y: &[f64]) -> Vec<f64> {
        let (nc, nm) = (layout.n_cells(), layout.n_modes());
        let mut u = vec![0.0; nc * nm * 6];
        for c in 0..6 {
            for cell in 0..nc {
                for l in 0..nm {
                    u[(cell * nm + l) * 6 + c] = y[layout.field_offset(c, cell, l)];
                }
            }
        }
        u
    }

    /// Adds the field operator (without the current source) to `out`.
    pub fn add_field_terms(&self, layout: &StateLayout, y: &[f64], out: &mut [f64]) {
        let u = self.gather(layout, y);
        let mut acc = vec![0.0; u.len()];
        let mut scratch = AxisScratch::default();
        for &axis in &self.dg.active_axes {
            let f = &self.flux.f[axis];
            let fa = &self.flux.abs[axis];
            let mode = self.mode;
            self.dg.add_axis_terms(
                axis,
                6,
                &u,
                &mut acc,
                &mut scratch,
                |v, g| mat6_apply(f, v, g),
                |um, up, fhat| {
                    let mut avg = [0.0; 6];
                    for i in 0..6 {
                        avg[i] = 0.5 * (um[i] + up[i]);
                    }
                    mat6_apply(f, &avg, fhat);
                    // F⁺u⁻ + F⁻u⁺ written as central minus ½|F|[u]
                    if mode == FluxMode::Upwind {
                        let mut jump = [0.0; 6];
                        for i in 0..6 {
                            jump[i] = up[i] - um[i];
                        }
                        let mut d = [0.0; 6];
                        mat6_apply(fa, &jump, &mut d);
                        for i in 0..6 {
                            fhat[i] -= 0.5 * d[i];
                        }
                    }
                },
            );
        }
        let (nc, nm) = (layout.n_cells(), layout.n_modes());
        for c in 0..6 {
            for cell in 0..nc {
                for l in 0..nm {
                    out[layout.field_offset(c, cell, l)] += acc[(cell * nm + l) * 6 + c];
                }
            }
        }
    }

    pub fn add_source(&self, layout: &StateLayout, y: &[f64], out: &mut [f64]) {
        let j = current_density_raw(layout, y);
        let (nc, nm) = (layout.n_cells(), layout.n_modes());
        for c in 0..3 {
            for cell in 0..nc {
                for l in 0..nm {
                    out[layout.field_offset(c, cell, l)] -=
                        self.source_prefactor * j[(cell * nm + l) * 3 + c];
                }
            }
        }
    }

    pub fn add_rhs(&self, layout: &StateLayout, y: &[f64], out: &mut [f64]) {
        self.add_field_terms(layout, y, out);
        self.add_source(layout, y, out);
    }
}

/// Current density per `(cell, mode)` as `[cell][mode][component]`.
pub fn current_density_raw(layout: &StateLayout, y: &[f64]) -> Vec<f64> {
    let (nc, nm) = (layout.n_cells(), layout.n_modes());
    let mut j = vec![0.0; nc * nm * 3];
    for (s, sp) in layout.species().iter().enumerate() {
        let scale = sp.charge * sp.alpha_volume();
        let unit = [0, 1, 2].map(|a| {
            (sp.hermite_orders[a] >= 1).then(|| {
                let mut k = [0; 3];
                k[a] = 1;
                sp.hermite_index(k)
            })
        });
        for cell in 0..nc {
            for l in 0..nm {
                let start = layout.hermite_block(s, cell, l);
                let c0 = y[start];
                for a in 0..3 {
                    let mut v = sp.shift[a] * c0;
                    if let Some(i) = unit[a] {
                        v += sp.alpha[a] / 2f64.sqrt() * y[start + i];
                    }
                    j[(cell * nm + l) * 3 + a] += scale * v;
                }
            }
        }
    }
    j
}

/// Charge density per `(cell, mode)`, including the immobile background.
pub fn charge_density_raw(layout: &StateLayout, y: &[f64], background: f64) -> Vec<f64> {
    let (nc, nm) = (layout.n_cells(), layout.n_modes());
    let mut rho = vec![0.0; nc * nm];
    for cell in 0..nc {
        rho[cell * nm] += background;
    }
    for (s, sp) in layout.species().iter().enumerate() {
        let scale = sp.charge * sp.alpha_volume();
        for cell in 0..nc {
            for l in 0..nm {
                rho[cell * nm + l] += scale * y[layout.hermite_block(s, cell, l)];
            }
        }
    }
    rho
}

/// Current density DG coefficients, `[cell][mode] → (J_x, J_y, J_z)`.
pub fn current_density_dg(state: &StateVector) -> Vec<[f64; 3]> {
    current_density_raw(state.layout(), state.data())
        .chunks_exact(3)
        .map(|c| [c[0], c[1], c[2]])
        .collect()
}

pub fn maxwell_rhs(state: &StateVector, ws: &MaxwellWorkspace) -> StateVector {
    let mut out = StateVector::zeros(state.layout().clone());
    ws.add_rhs(state.layout(), state.data(), out.data_mut());
    out
}

/// L2 norms of the weak divergence mismatch `∇·E − (ω_pe/ω_ce)ρ` and `∇·B`.
pub fn divergence_residuals(state: &StateVector, ws: &MaxwellWorkspace) -> (f64, f64) {
    let layout = state.layout();
    let y = state.data();
    let dg = &ws.dg;
    let (nc, nm) = (layout.n_cells(), layout.n_modes());
    let mut div = [vec![0.0; nc * nm], vec![0.0; nc * nm]];
    let mut scratch = AxisScratch::default();
    for &axis in &dg.active_axes {
        for (which, d) in div.iter_mut().enumerate() {
            let comp = 3 * which + axis;
            let u: Vec<f64> = (0..nc * nm)
                .map(|i| y[layout.field_offset(comp, i / nm, i % nm)])
                .collect();
            let mut neg = vec![0.0; nc * nm];
            dg.add_axis_terms(
                axis,
                1,
                &u,
                &mut neg,
                &mut scratch,
                |v, g| g[0] = v[0],
                |m, p, f| f[0] = 0.5 * (m[0] + p[0]),
            );
            for (di, ni) in d.iter_mut().zip(&neg) {
                *di -= ni;
            }
        }
    }
    let rho = charge_density_raw(layout, y, ws.background_charge);
    let norm = |r: &dyn Fn(usize) -> f64| -> f64 {
        (0..nc * nm)
            .map(|i| dg.mass[i % nm] * r(i).powi(2))
            .sum::<f64>()
            .sqrt()
    };
    let e = norm(&|i| div[0][i] - ws.source_prefactor * rho[i]);
    let b = norm(&|i| div[1][i]);
    (e, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flux_matrix_structure() {
        let fm = build_flux_matrices();
        let mut out = [0.0; 6];
        mat6_apply(&fm.f[0], &[0., 0., 0., 0., 0., 1.], &mut out);
        assert_eq!(out, [0., 1., 0., 0., 0., 0.]);
        for a in 0..3 {
            assert_eq!(fm.eigenvalues[a], [-1., -1., 0., 0., 1., 1.]);
            for i in 0..6 {
                for j in 0..6 {
                    assert_eq!(fm.plus[a][i][j] + fm.minus[a][i][j], fm.f[a][i][j]);
                    assert_eq!(fm.f[a][i][j], fm.f[a][j][i]);
                    assert_eq!(fm.abs[a][i][j], fm.abs[a][j][i]);
                }
            }
        }
    }

    #[test]
    fn flux_is_cross_product_form() {
        // F(u)·x̂ = (-x̂×B, x̂×E)
        let fm = build_flux_matrices();
        let u = [0.3, -1.2, 0.7, 2.0, 0.5, -0.4];
        let mut out = [0.0; 6];
        mat6_apply(&fm.f[0], &u, &mut out);
        let (e, b) = ([u[0], u[1], u[2]], [u[3], u[4], u[5]]);
        let cx = |v: [f64; 3]| [0.0, -v[2], v[1]];
        let xb = cx(b);
        let xe = cx(e);
        let expect = [-xb[0], -xb[1], -xb[2], xe[0], xe[1], xe[2]];
        for i in 0..6 {
            assert_eq!(out[i], expect[i]);
        }
    }
}
