//! Semi-discrete Vlasov operator: DG upwind streaming, Lorentz force in the
//! AW Hermite basis, and the hypercollision damping of high modes.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::basis::{build_velocity_coupling, VelocityCoupling};
use crate::dg::{AxisScratch, DgOperators};
use crate::state::{PhysicsConstants, SpeciesSpec, StateLayout, StateVector};

#[derive(Debug, Clone)]
pub struct SpeciesOperator {
    pub spec: SpeciesSpec,
    pub coupling: VelocityCoupling,
    n_h: usize,
    strides: [usize; 3],
    dims: [usize; 3],
    upwind_plus: [Vec<f64>; 3],
    upwind_minus: [Vec<f64>; 3],
    /// `(q/m)(ω_ce/ω_pe)`.
    pub force_prefactor: f64,
    /// `Σ_β n_β(n_β-1)(n_β-2)/κ_β` per Hermite index.
    pub damping: Vec<f64>,
}

/// Positive and negative parts `R diag(max(λ,0)) Rᵀ`, `R diag(min(λ,0)) Rᵀ` of a symmetric matrix.
pub fn split_symmetric(m: &[f64], dim: usize) -> (Vec<f64>, Vec<f64>) {
    let mat = DMatrix::from_row_slice(dim, dim, m);
    let eig = SymmetricEigen::new(mat);
    let mut plus = vec![0.0; dim * dim];
    let mut minus = vec![0.0; dim * dim];
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        let v = eig.eigenvectors.column(k);
        let target = if lam > 0.0 { &mut plus } else { &mut minus };
        for i in 0..dim {
            for j in 0..dim {
                target[i * dim + j] += lam * v[i] * v[j];
            }
        }
    }
    (plus, minus)
}

pub fn collision_damping(spec: &SpeciesSpec) -> Vec<f64> {
    let term = |n: usize, max: usize| -> f64 {
        if max < 3 || n < 3 {
            return 0.0;
        }
        let f = |k: usize| (k * (k - 1) * (k - 2)) as f64;
        f(n) / f(max)
    };
    (0..spec.n_hermite())
        .map(|h| {
            let k = spec.hermite_tuple(h);
            (0..3).map(|a| term(k[a], spec.hermite_orders[a])).sum()
        })
        .collect()
}

impl SpeciesOperator {
    pub fn new(spec: &SpeciesSpec, physics: &PhysicsConstants) -> Self {
        let coupling = build_velocity_coupling(spec);
        let dims = spec.hermite_orders.map(|n| n + 1);
        let strides = [0, 1, 2].map(|a| spec.hermite_stride(a));
        let mut upwind_plus: [Vec<f64>; 3] = Default::default();
        let mut upwind_minus: [Vec<f64>; 3] = Default::default();
        for a in 0..3 {
            let (p, m) = split_symmetric(&coupling.axes[a].moment_matrix(), dims[a]);
            upwind_plus[a] = p;
            upwind_minus[a] = m;
        }
        SpeciesOperator {
            spec: spec.clone(),
            coupling,
            n_h: spec.n_hermite(),
            strides,
            dims,
            upwind_plus,
            upwind_minus,
            force_prefactor: spec.charge / spec.mass / physics.omega_ratio,
            damping: collision_damping(spec),
        }
    }

    pub fn n_hermite(&self) -> usize {
        self.n_h
    }

    /// `out = M_β c` (first velocity moment along `axis`).
    pub fn moment(&self, axis: usize, c: &[f64], out: &mut [f64]) {
        let ax = &self.coupling.axes[axis];
        let (stride, dim) = (self.strides[axis], self.dims[axis]);
        let outer = self.n_h / (stride * dim);
        for o in 0..outer {
            for k in 0..dim {
                let base = o * stride * dim + k * stride;
                for i in base..base + stride {
                    let mut v = ax.shift * c[i];
                    if k > 0 {
                        v += ax.off[k] * c[i - stride];
                    }
                    if k + 1 < dim {
                        v += ax.off[k + 1] * c[i + stride];
                    }
                    out[i] = v;
                }
            }
        }
    }

    /// `out += sign · L_β x` with `(L_β x)_k = √(2k_β)/α_β x_{k-e_β}`.
    fn add_lowered(&self, axis: usize, sign: f64, x: &[f64], out: &mut [f64]) {
        let ax = &self.coupling.axes[axis];
        let (stride, dim) = (self.strides[axis], self.dims[axis]);
        let outer = self.n_h / (stride * dim);
        for o in 0..outer {
            for k in 1..dim {
                let base = o * stride * dim + k * stride;
                let f = sign * ax.lowering[k];
                for i in base..base + stride {
                    out[i] += f * x[i - stride];
                }
            }
        }
    }

    /// `out += P c` for the dense per-axis matrix `p`.
    fn add_line_matrix(&self, axis: usize, p: &[f64], c: &[f64], out: &mut [f64]) {
        let (stride, dim) = (self.strides[axis], self.dims[axis]);
        let outer = self.n_h / (stride * dim);
        for o in 0..outer {
            for i0 in 0..stride {
                let base = o * stride * dim + i0;
                for i in 0..dim {
                    let row = &p[i * dim..(i + 1) * dim];
                    let mut acc = 0.0;
                    for (j, &pij) in row.iter().enumerate() {
                        acc += pij * c[base + j * stride];
                    }
                    out[base + i * stride] += acc;
                }
            }
        }
    }

    /// The six force kernels `H_c` so that `dC/dt += P Σ_c field_c H_c(C)`.
    fn force_kernels(&self, c: &[f64], scratch: &mut [Vec<f64>; 3], h: &mut [Vec<f64>; 6]) {
        for hv in h.iter_mut() {
            hv.iter_mut().for_each(|v| *v = 0.0);
        }
        for a in 0..3 {
            self.moment(a, c, &mut scratch[a]);
        }
        let [vx, vy, vz] = &*scratch;
        self.add_lowered(0, 1.0, c, &mut h[0]);
        self.add_lowered(1, 1.0, c, &mut h[1]);
        self.add_lowered(2, 1.0, c, &mut h[2]);
        self.add_lowered(1, 1.0, vz, &mut h[3]);
        self.add_lowered(2, -1.0, vy, &mut h[3]);
        self.add_lowered(2, 1.0, vx, &mut h[4]);
        self.add_lowered(0, -1.0, vz, &mut h[4]);
        self.add_lowered(0, 1.0, vy, &mut h[5]);
        self.add_lowered(1, -1.0, vx, &mut h[5]);
    }
}

#[derive(Debug, Clone)]
pub struct VlasovWorkspace {
    pub dg: DgOperators,
    pub species: Vec<SpeciesOperator>,
    pub collision_rate: f64,
}

impl VlasovWorkspace {
    pub fn new(layout: &StateLayout, physics: &PhysicsConstants) -> Self {
        VlasovWorkspace {
            dg: DgOperators::new(layout.mesh()),
            species: layout
                .species()
                .iter()
                .map(|s| SpeciesOperator::new(s, physics))
                .collect(),
            collision_rate: physics.collision_rate,
        }
    }

    pub fn add_streaming(&self, layout: &StateLayout, y: &[f64], out: &mut [f64]) {
        let mut scratch = AxisScratch::default();
        for (s, op) in self.species.iter().enumerate() {
            let r = layout.species_range(s);
            let (u, o) = (&y[r.clone()], &mut out[r]);
            for &axis in &self.dg.active_axes {
                self.dg.add_axis_terms(
                    axis,
                    op.n_h,
                    u,
                    o,
                    &mut scratch,
                    |c, g| op.moment(axis, c, g),
                    |cm, cp, f| {
                        f.iter_mut().for_each(|v| *v = 0.0);
                        op.add_line_matrix(axis, &op.upwind_plus[axis], cm, f);
                        op.add_line_matrix(axis, &op.upwind_minus[axis], cp, f);
                    },
                );
            }
        }
    }

    pub fn add_lorentz(&self, layout: &StateLayout, y: &[f64], out: &mut [f64]) {
        let nm = self.dg.n_modes();
        let nc = self.dg.n_cells();
        let mut fields = vec![[0.0; 6]; nm];
        let mut weights = vec![[0.0; 6]; nm * nm];
        for cell in 0..nc {
            let mut any = false;
            for (l, f) in fields.iter_mut().enumerate() {
                for c in 0..6 {
                    f[c] = y[layout.field_offset(c, cell, l)];
                    any |= f[c] != 0.0;
                }
            }
            if !any {
                continue;
            }
            weights.iter_mut().for_each(|w| *w = [0.0; 6]);
            for &(l, a, b, t) in &self.dg.triple {
                let w = &mut weights[l * nm + b];
                for c in 0..6 {
                    w[c] += t * fields[a][c];
                }
            }
            for (s, op) in self.species.iter().enumerate() {
                let n_h = op.n_h;
                let mut scratch = [vec![0.0; n_h], vec![0.0; n_h], vec![0.0; n_h]];
                let mut h: [Vec<f64>; 6] = Default::default();
                for hv in h.iter_mut() {
                    *hv = vec![0.0; n_h];
                }
                for b in 0..nm {
                    let start = layout.hermite_block(s, cell, b);
                    op.force_kernels(&y[start..start + n_h], &mut scratch, &mut h);
                    for l in 0..nm {
                        let w = weights[l * nm + b];
                        let o = layout.hermite_block(s, cell, l);
                        let dst = &mut out[o..o + n_h];
                        for c in 0..6 {
                            let f = op.force_prefactor * w[c];
                            if f == 0.0 {
                                continue;
                            }
                            for (d, hv) in dst.iter_mut().zip(&h[c]) {
                                *d += f * hv;
                            }
                        }
                    }
                }
            }
        }
    }

    pub fn add_collisions(&self, layout: &StateLayout, y: &[f64], out: &mut [f64]) {
        if self.collision_rate == 0.0 {
            return;
        }
        for (s, op) in self.species.iter().enumerate() {
            let r = layout.species_range(s);
            let (u, o) = (&y[r.clone()], &mut out[r]);
            for (blk_u, blk_o) in u.chunks_exact(op.n_h).zip(o.chunks_exact_mut(op.n_h)) {
                for ((x, d), &k) in blk_u.iter().zip(blk_o.iter_mut()).zip(&op.damping) {
                    *d -= self.collision_rate * k * x;
                }
            }
        }
    }

    /// Adds the full Vlasov right-hand side to `out`.
    pub fn add_rhs(&self, layout: &StateLayout, y: &[f64], out: &mut [f64]) {
        self.add_streaming(layout, y, out);
        self.add_lorentz(layout, y, out);
        self.add_collisions(layout, y, out);
    }
}

fn increment(
    state: &StateVector,
    f: impl FnOnce(&StateLayout, &[f64], &mut [f64]),
) -> StateVector {
    let mut out = StateVector::zeros(state.layout().clone());
    f(state.layout(), state.data(), out.data_mut());
    out
}

pub fn vlasov_streaming_rhs(state: &StateVector, ws: &VlasovWorkspace) -> StateVector {
    increment(state, |l, y, o| ws.add_streaming(l, y, o))
}

pub fn vlasov_lorentz_rhs(state: &StateVector, ws: &VlasovWorkspace) -> StateVector {
    increment(state, |l, y, o| ws.add_lorentz(l, y, o))
}

pub fn collision_rhs(state: &StateVector, ws: &VlasovWorkspace) -> StateVector {
    increment(state, |l, y, o| ws.add_collisions(l, y, o))
}

pub fn vlasov_rhs(state: &StateVector, ws: &VlasovWorkspace) -> StateVector {
    increment(state, |l, y, o| ws.add_rhs(l, y, o))
}
