//! Tensor-product DG tables on a periodic mesh and the shared per-axis
//! volume/face kernel used by the Vlasov and Maxwell operators.
//!
//! Every kernel acts on arrays laid out `[cell][mode][block]`.

use crate::basis::LegendreBasis;
use crate::state::MeshSpec;

#[derive(Debug, Clone)]
pub struct DgOperators {
    pub mesh: MeshSpec,
    pub basis: LegendreBasis,
    pub spacing: [f64; 3],
    pub modes: Vec<[usize; 3]>,
    pub mass: Vec<f64>,
    pub active_axes: Vec<usize>,
    /// Per axis, `(l, a, (2l_β+1)/Δ_β · ∫ L_l' L_a)` with transverse indices equal.
    pub volume: [Vec<(usize, usize, f64)>; 3],
    /// Per axis, lines of mode indices `(t, 0..=N)` along the axis.
    pub lines: [Vec<Vec<usize>>; 3],
    /// `(l, a, b, ∫φ_l φ_a φ_b / ∫φ_l²)` for nonzero entries.
    pub triple: Vec<(usize, usize, usize, f64)>,
}

impl DgOperators {
    pub fn new(mesh: &MeshSpec) -> Self {
        let basis = LegendreBasis::new(mesh.dg_degree);
        let spacing = mesh.spacing();
        let n_modes = mesh.n_modes();
        let modes: Vec<[usize; 3]> = (0..n_modes).map(|l| mesh.mode_tuple(l)).collect();
        let mass = modes.iter().map(|&l| mesh.mode_mass(l)).collect();
        let active_axes = (0..3).filter(|&a| mesh.active(a)).collect();
        let mut volume: [Vec<(usize, usize, f64)>; 3] = Default::default();
        let mut lines: [Vec<Vec<usize>>; 3] = Default::default();
        for axis in 0..3 {
            for (l, lt) in modes.iter().enumerate() {
                for (a, at) in modes.iter().enumerate() {
                    let same = (0..3).all(|b| b == axis || lt[b] == at[b]);
                    let s = basis.stiffness[lt[axis]][at[axis]];
                    if same && s != 0.0 {
                        let scale = (2 * lt[axis] + 1) as f64 / spacing[axis];
                        volume[axis].push((l, a, scale * s));
                    }
                }
                if lt[axis] == 0 {
                    let line = (0..=mesh.degree(axis))
                        .map(|k| {
                            let mut m = *lt;
                            m[axis] = k;
                            mesh.mode_index(m)
                        })
                        .collect();
                    lines[axis].push(line);
                }
            }
        }
        let mut triple = Vec::new();
        for (l, lt) in modes.iter().enumerate() {
            for (a, at) in modes.iter().enumerate() {
                for (b, bt) in modes.iter().enumerate() {
                    let mut c = 1.0;
                    for ax in 0..3 {
                        c *= (2 * lt[ax] + 1) as f64 / 2.0 * basis.triple[lt[ax]][at[ax]][bt[ax]];
                    }
                    if c != 0.0 {
                        triple.push((l, a, b, c));
                    }
                }
            }
        }
        DgOperators {
            mesh: mesh.clone(),
            basis,
            spacing,
            modes,
            mass,
            active_axes,
            volume,
            lines,
            triple,
        }
    }

    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn n_cells(&self) -> usize {
        self.mesh.n_cells()
    }

    /// Area-weighted mass of transverse mode `t` on a face normal to `axis`.
    pub fn face_mass(&self, axis: usize, t: usize) -> f64 {
        let lt = self.modes[t];
        (0..3)
            .filter(|&b| b != axis)
            .map(|b| self.spacing[b] / (2 * lt[b] + 1) as f64)
            .product()
    }

    /// Adds the DG volume and face contributions of `-∂_β F(u)` to `out`.
    ///
    /// `flux(u, g)` must write `g = F u` for one block; `numerical(u_minus, u_plus, fhat)`
    /// writes the face flux given the traces on the left (-) and right (+) of a face.
    pub fn add_axis_terms<F, N>(
        &self,
        axis: usize,
        bs: usize,
        u: &[f64],
        out: &mut [f64],
        scratch: &mut AxisScratch,
        mut flux: F,
        mut numerical: N,
    ) where
        F: FnMut(&[f64], &mut [f64]),
        N: FnMut(&[f64], &[f64], &mut [f64]),
    {
        let nm = self.n_modes();
        let nc = self.n_cells();
        let h = self.spacing[axis];
        scratch.resize(nc * nm * bs, bs);
        let g = &mut scratch.g;
        for blk in 0..nc * nm {
            flux(&u[blk * bs..(blk + 1) * bs], &mut g[blk * bs..(blk + 1) * bs]);
        }
        for cell in 0..nc {
            let base = cell * nm;
            for &(l, a, c) in &self.volume[axis] {
                let src = &g[(base + a) * bs..(base + a + 1) * bs];
                let dst = &mut out[(base + l) * bs..(base + l + 1) * bs];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += c * s;
                }
            }
        }
        let (tm, tp, fhat) = (&mut scratch.tm, &mut scratch.tp, &mut scratch.fhat);
        for cell in 0..nc {
            let next = self.mesh.neighbor(cell, axis, true);
            for line in &self.lines[axis] {
                tm.iter_mut().for_each(|v| *v = 0.0);
                tp.iter_mut().for_each(|v| *v = 0.0);
                for (k, &m) in line.iter().enumerate() {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    let um = &u[(cell * nm + m) * bs..(cell * nm + m + 1) * bs];
                    let up = &u[(next * nm + m) * bs..(next * nm + m + 1) * bs];
                    for i in 0..bs {
                        tm[i] += um[i];
                        tp[i] += sign * up[i];
                    }
                }
                numerical(tm, tp, fhat);
                for (k, &m) in line.iter().enumerate() {
                    let scale = (2 * k + 1) as f64 / h;
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    let o = (cell * nm + m) * bs;
                    for i in 0..bs {
                        out[o + i] -= scale * fhat[i];
                    }
                    let o = (next * nm + m) * bs;
                    for i in 0..bs {
                        out[o + i] += scale * sign * fhat[i];
                    }
                }
            }
        }
    }

    /// Trace jumps `u(+) - u(-)` of every face normal to `axis`, with weights.
    pub fn for_each_face_jump<G>(&self, axis: usize, bs: usize, u: &[f64], mut visit: G)
    where
        G: FnMut(f64, &[f64]),
    {
        let nm = self.n_modes();
        let mut jump = vec![0.0; bs];
        for cell in 0..self.n_cells() {
            let next = self.mesh.neighbor(cell, axis, true);
            for line in &self.lines[axis] {
                jump.iter_mut().for_each(|v| *v = 0.0);
                for (k, &m) in line.iter().enumerate() {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    let um = &u[(cell * nm + m) * bs..(cell * nm + m + 1) * bs];
                    let up = &u[(next * nm + m) * bs..(next * nm + m + 1) * bs];
                    for i in 0..bs {
                        jump[i] += sign * up[i] - um[i];
                    }
                }
                visit(self.face_mass(axis, line[0]), &jump);
            }
        }
    }
}

#[derive(Debug, Default, Clone)]
pub struct AxisScratch {
    g: Vec<f64>,
    tm: Vec<f64>,
    tp: Vec<f64>,
    fhat: Vec<f64>,
}

impl AxisScratch {
    fn resize(&mut self, len: usize, bs: usize) {
        self.g.clear();
        self.g.resize(len, 0.0);
        for v in [&mut self.tm, &mut self.tp, &mut self.fhat] {
            v.clear();
            v.resize(bs, 0.0);
        }
    }
}
