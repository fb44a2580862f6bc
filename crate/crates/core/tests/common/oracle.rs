//! Dense-quadrature reference implementation of the semi-discrete operator.
//!
//! Everything here is computed from point values: Hermite and Legendre
//! polynomials by their classical three-term recurrences, quadrature rules by
//! Golub-Welsch with a cyclic Jacobi eigensolver, and every bilinear form by
//! tensor quadrature in `x` and `ξ`. Only the state layout is shared with the
//! library, and only to read and write coefficients.

#![allow(dead_code)]

use std::f64::consts::PI;

use hermite_dg::state::{MeshSpec, PhysicsConstants, SpeciesSpec, StateLayout};

pub type Mat = Vec<Vec<f64>>;

/// Cyclic Jacobi for a symmetric matrix: eigenvalues and column eigenvectors.
pub fn jacobi_eigen(a: &Mat) -> (Vec<f64>, Mat) {
    let n = a.len();
    let mut a = a.clone();
    let mut v: Mat = (0..n).map(|i| (0..n).map(|j| (i == j) as u8 as f64).collect()).collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let scale: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum::<f64>().max(1e-300);
        if off <= 1e-32 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k][p], v[k][q]);
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), v)
}

fn golub_welsch(diag: Vec<f64>, off: Vec<f64>, mu0: f64) -> (Vec<f64>, Vec<f64>) {
    let n = diag.len();
    let mut j: Mat = vec![vec![0.0; n]; n];
    for i in 0..n {
        j[i][i] = diag[i];
        if i + 1 < n {
            j[i][i + 1] = off[i];
            j[i + 1][i] = off[i];
        }
    }
    let (vals, vecs) = jacobi_eigen(&j);
    let mut pairs: Vec<(f64, f64)> = (0..n).map(|k| (vals[k], mu0 * vecs[0][k] * vecs[0][k])).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    pairs.into_iter().unzip()
}

/// Gauss-Legendre on [-1, 1].
pub fn gl_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let off = (1..n).map(|k| k as f64 / ((4 * k * k - 1) as f64).sqrt()).collect();
    golub_welsch(vec![0.0; n], off, 2.0)
}

/// Gauss-Hermite for weight `e^{-ξ²}`.
pub fn gh_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let off = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
    golub_welsch(vec![0.0; n], off, PI.sqrt())
}

/// Physicists' Hermite polynomials `H_0..H_n`.
pub fn hermite_h(n: usize, x: f64) -> Vec<f64> {
    let mut h = vec![1.0; n + 1];
    if n >= 1 {
        h[1] = 2.0 * x;
    }
    for k in 1..n {
        h[k + 1] = 2.0 * x * h[k] - 2.0 * k as f64 * h[k - 1];
    }
    h
}

fn norm(n: usize) -> f64 {
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    1.0 / (2f64.powi(n as i32) * fact).sqrt()
}

/// `ψ_n(ξ) e^{ξ²}`.
pub fn aw_poly(n: usize, x: f64) -> f64 {
    norm(n) * hermite_h(n, x)[n] / PI.sqrt()
}

pub fn dual(n: usize, x: f64) -> f64 {
    norm(n) * hermite_h(n, x)[n]
}

/// `d ψ^n / dξ`.
pub fn dual_deriv(n: usize, x: f64) -> f64 {
    if n == 0 {
        0.0
    } else {
        norm(n) * 2.0 * n as f64 * hermite_h(n, x)[n - 1]
    }
}

/// Legendre values and derivatives `P_0..P_n` at `r`.
pub fn legendre_pd(n: usize, r: f64) -> (Vec<f64>, Vec<f64>) {
    let mut p = vec![1.0; n + 1];
    let mut d = vec![0.0; n + 1];
    if n >= 1 {
        p[1] = r;
        d[1] = 1.0;
    }
    for k in 1..n {
        let kf = k as f64;
        p[k + 1] = ((2.0 * kf + 1.0) * r * p[k] - kf * p[k - 1]) / (kf + 1.0);
        // d/dr of the three-term recurrence
        d[k + 1] = ((2.0 * kf + 1.0) * (p[k] + r * d[k]) - kf * d[k - 1]) / (kf + 1.0);
    }
    (p, d)
}

pub fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Maxwell flux `F_β u = (−e_β×B, e_β×E)` as a dense 6×6 matrix.
pub fn maxwell_flux(beta: usize) -> Mat {
    let mut e = [0.0; 3];
    e[beta] = 1.0;
    let mut m = vec![vec![0.0; 6]; 6];
    for col in 0..6 {
        let mut u = [0.0; 6];
        u[col] = 1.0;
        let ef = [u[0], u[1], u[2]];
        let bf = [u[3], u[4], u[5]];
        let top = cross(e, bf);
        let bot = cross(e, ef);
        for i in 0..3 {
            m[i][col] = -top[i];
            m[3 + i][col] = bot[i];
        }
    }
    m
}

/// `(A⁺, A⁻, |A|)` from the spectral decomposition.
pub fn sign_parts(a: &Mat) -> (Mat, Mat, Mat) {
    let n = a.len();
    let (vals, v) = jacobi_eigen(a);
    let build = |g: &dyn Fn(f64) -> f64| -> Mat {
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| v[i][k] * g(vals[k]) * v[j][k]).sum()).collect())
            .collect()
    };
    (build(&|x| x.max(0.0)), build(&|x| x.min(0.0)), build(&|x| x.abs()))
}

fn matvec(m: &Mat, x: &[f64]) -> Vec<f64> {
    m.iter().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

/// Tensor Gauss-Hermite quadrature over the three velocity axes.
struct VelocityQuad {
    /// `(ξ, weight)` with the Gaussian factor folded into the AW polynomials.
    points: Vec<([f64; 3], f64)>,
}

impl VelocityQuad {
    fn new(orders: [usize; 3]) -> Self {
        let rules: Vec<_> = (0..3).map(|a| gh_rule(orders[a] + 3)).collect();
        let mut points = Vec::new();
        for (i, &x) in rules[0].0.iter().enumerate() {
            for (j, &y) in rules[1].0.iter().enumerate() {
                for (k, &z) in rules[2].0.iter().enumerate() {
                    points.push(([x, y, z], rules[0].1[i] * rules[1].1[j] * rules[2].1[k]));
                }
            }
        }
        VelocityQuad { points }
    }
}

/// Per-species dense velocity matrices.
pub struct SpeciesMatrices {
    pub spec: SpeciesSpec,
    /// `moment[β][k][n] = ∫ v_β ψ_n ψ^k dξ`.
    pub moment: [Mat; 3],
    pub plus: [Mat; 3],
    pub minus: [Mat; 3],
    /// `force[c][k][n] = ∫ ψ_n g_c · ∇_v ψ^k dξ`, `g = e_c` for E and `v × e_c` for B.
    pub force: [Mat; 6],
    /// `first[β][n] = ∫ v_β ψ_n dξ`.
    pub first: [Vec<f64>; 3],
    /// `∫ |v|² ψ_n dξ`.
    pub second: Vec<f64>,
    pub zeroth: Vec<f64>,
}

impl SpeciesMatrices {
    pub fn new(spec: &SpeciesSpec) -> Self {
        let nh = spec.n_hermite();
        let tuples: Vec<[usize; 3]> = (0..nh).map(|h| spec.hermite_tuple(h)).collect();
        let q = VelocityQuad::new(spec.hermite_orders);
        let zero = || vec![vec![0.0; nh]; nh];
        let mut moment = [zero(), zero(), zero()];
        let mut force = [zero(), zero(), zero(), zero(), zero(), zero()];
        let mut first = [vec![0.0; nh], vec![0.0; nh], vec![0.0; nh]];
        let mut second = vec![0.0; nh];
        let mut zeroth = vec![0.0; nh];
        for (xi, w) in &q.points {
            let v: [f64; 3] = [0, 1, 2].map(|a| spec.alpha[a] * xi[a] + spec.shift[a]);
            let trial: Vec<f64> = tuples
                .iter()
                .map(|t| (0..3).map(|a| aw_poly(t[a], xi[a])).product())
                .collect();
            let test: Vec<f64> = tuples
                .iter()
                .map(|t| (0..3).map(|a| dual(t[a], xi[a])).product())
                .collect();
            // ∇_v ψ^k
            let grad: Vec<[f64; 3]> = tuples
                .iter()
                .map(|t| {
                    [0, 1, 2].map(|b| {
                        (0..3)
                            .map(|a| if a == b { dual_deriv(t[a], xi[a]) / spec.alpha[a] } else { dual(t[a], xi[a]) })
                            .product()
                    })
                })
                .collect();
            let v2 = v.iter().map(|x| x * x).sum::<f64>();
            for n in 0..nh {
                let wn = w * trial[n];
                zeroth[n] += wn;
                second[n] += wn * v2;
                for b in 0..3 {
                    first[b][n] += wn * v[b];
                }
                for k in 0..nh {
                    for b in 0..3 {
                        moment[b][k][n] += wn * v[b] * test[k];
                    }
                    for c in 0..3 {
                        let mut e = [0.0; 3];
                        e[c] = 1.0;
                        force[c][k][n] += wn * grad[k][c];
                        let g = cross(v, e);
                        force[3 + c][k][n] += wn * (0..3).map(|b| g[b] * grad[k][b]).sum::<f64>();
                    }
                }
            }
        }
        let split = |m: &Mat| {
            let (p, mi, _) = sign_parts(m);
            (p, mi)
        };
        let (p0, m0) = split(&moment[0]);
        let (p1, m1) = split(&moment[1]);
        let (p2, m2) = split(&moment[2]);
        SpeciesMatrices {
            spec: spec.clone(),
            moment,
            plus: [p0, p1, p2],
            minus: [m0, m1, m2],
            force,
            first,
            second,
            zeroth,
        }
    }
}

/// Spatial tensor rule on one cell, reference coordinates and physical weights.
fn cell_rule(mesh: &MeshSpec, nq: usize, skip: Option<usize>) -> Vec<([f64; 3], f64)> {
    let (r, w) = gl_rule(nq);
    let h = mesh.spacing();
    let axis = |a: usize| -> Vec<(f64, f64)> {
        if Some(a) == skip {
            vec![(0.0, 1.0)]
        } else if mesh.active(a) {
            r.iter().zip(&w).map(|(&r, &w)| (r, 0.5 * h[a] * w)).collect()
        } else {
            vec![(0.0, h[a])]
        }
    };
    let (ax, ay, az) = (axis(0), axis(1), axis(2));
    let mut out = Vec::new();
    for &(x, wx) in &ax {
        for &(y, wy) in &ay {
            for &(z, wz) in &az {
                out.push(([x, y, z], wx * wy * wz));
            }
        }
    }
    out
}

pub struct Oracle {
    pub layout: StateLayout,
    pub physics: PhysicsConstants,
    pub upwind: bool,
    pub species: Vec<SpeciesMatrices>,
    pub flux: [Mat; 3],
    pub flux_plus: [Mat; 3],
    pub flux_minus: [Mat; 3],
    pub flux_abs: [Mat; 3],
    nq: usize,
}

struct Basis {
    modes: Vec<[usize; 3]>,
    deg: usize,
}

impl Basis {
    fn phi(&self, r: [f64; 3]) -> (Vec<f64>, Vec<[f64; 3]>) {
        let pd: Vec<_> = (0..3).map(|a| legendre_pd(self.deg, r[a])).collect();
        let vals = self.modes.iter().map(|l| (0..3).map(|a| pd[a].0[l[a]]).product()).collect();
        let grads = self
            .modes
            .iter()
            .map(|l| {
                [0, 1, 2].map(|b| {
                    (0..3).map(|a| if a == b { pd[a].1[l[a]] } else { pd[a].0[l[a]] }).product()
                })
            })
            .collect();
        (vals, grads)
    }
}

impl Oracle {
    pub fn new(layout: StateLayout, physics: PhysicsConstants, upwind: bool) -> Self {
        let species = layout.species().iter().map(SpeciesMatrices::new).collect();
        let flux = [0, 1, 2].map(maxwell_flux);
        let parts = flux.clone().map(|f| sign_parts(&f));
        Oracle {
            nq: layout.mesh().dg_degree + 3,
            layout,
            physics,
            upwind,
            species,
            flux_plus: [0, 1, 2].map(|a| parts[a].0.clone()),
            flux_minus: [0, 1, 2].map(|a| parts[a].1.clone()),
            flux_abs: [0, 1, 2].map(|a| parts[a].2.clone()),
            flux,
        }
    }

    fn basis(&self) -> Basis {
        let mesh = self.layout.mesh();
        Basis {
            modes: (0..mesh.n_modes()).map(|l| mesh.mode_tuple(l)).collect(),
            deg: mesh.dg_degree,
        }
    }

    fn mass(&self, l: [usize; 3]) -> f64 {
        let mesh = self.layout.mesh();
        let h = mesh.spacing();
        (0..3).map(|a| h[a] / (2 * l[a] + 1) as f64).product()
    }

    /// Hermite coefficient vector of species `s` at reference point `r` of `cell`.
    fn coeffs_at(&self, y: &[f64], s: usize, cell: usize, phi: &[f64]) -> Vec<f64> {
        let nh = self.layout.species()[s].n_hermite();
        let mut c = vec![0.0; nh];
        for (l, p) in phi.iter().enumerate() {
            let b = self.layout.hermite_block(s, cell, l);
            for n in 0..nh {
                c[n] += p * y[b + n];
            }
        }
        c
    }

    fn fields_at(&self, y: &[f64], cell: usize, phi: &[f64]) -> [f64; 6] {
        let mut u = [0.0; 6];
        for (l, p) in phi.iter().enumerate() {
            for c in 0..6 {
                u[c] += p * y[self.layout.field_offset(c, cell, l)];
            }
        }
        u
    }

    pub fn current_at(&self, y: &[f64], cell: usize, phi: &[f64]) -> [f64; 3] {
        let mut j = [0.0; 3];
        for (s, sm) in self.species.iter().enumerate() {
            let c = self.coeffs_at(y, s, cell, phi);
            let scale = sm.spec.charge * sm.spec.alpha_volume();
            for b in 0..3 {
                j[b] += scale * sm.first[b].iter().zip(&c).map(|(a, b)| a * b).sum::<f64>();
            }
        }
        j
    }

    fn neighbor(&self, cell: usize, axis: usize) -> usize {
        let mesh = self.layout.mesh();
        let mut t = mesh.cell_tuple(cell);
        t[axis] = (t[axis] + 1) % mesh.cells[axis];
        mesh.cell_index(t)
    }

    fn active_axes(&self) -> Vec<usize> {
        let mesh = self.layout.mesh();
        (0..3).filter(|&a| mesh.active(a)).collect()
    }

    pub fn rhs(&self, y: &[f64]) -> Vec<f64> {
        let layout = &self.layout;
        let mesh = layout.mesh();
        let basis = self.basis();
        let nm = basis.modes.len();
        let h = mesh.spacing();
        let mut out = vec![0.0; layout.total_len()];
        let omega = self.physics.omega_ratio;

        // volume terms
        let rule = cell_rule(mesh, self.nq, None);
        for cell in 0..mesh.n_cells() {
            for &(r, wq) in &rule {
                let (phi, grad) = basis.phi(r);
                let u = self.fields_at(y, cell, &phi);
                for (s, sm) in self.species.iter().enumerate() {
                    let c = self.coeffs_at(y, s, cell, &phi);
                    let nh = c.len();
                    let pref = sm.spec.charge / sm.spec.mass / omega;
                    let mut stream = [vec![0.0; nh], vec![0.0; nh], vec![0.0; nh]];
                    for b in self.active_axes() {
                        stream[b] = matvec(&sm.moment[b], &c);
                    }
                    let mut lorentz = vec![0.0; nh];
                    for f in 0..6 {
                        let fc = matvec(&sm.force[f], &c);
                        for k in 0..nh {
                            lorentz[k] += pref * u[f] * fc[k];
                        }
                    }
                    for l in 0..nm {
                        let b0 = layout.hermite_block(s, cell, l);
                        for k in 0..nh {
                            let mut v = lorentz[k] * phi[l];
                            for b in self.active_axes() {
                                v += stream[b][k] * grad[l][b] * 2.0 / h[b];
                            }
                            out[b0 + k] += wq * v / self.mass(basis.modes[l]);
                        }
                    }
                }
                let fu: Vec<Vec<f64>> = (0..3).map(|b| matvec(&self.flux[b], &u)).collect();
                let j = self.current_at(y, cell, &phi);
                for l in 0..nm {
                    for c in 0..6 {
                        let mut v = 0.0;
                        for b in self.active_axes() {
                            v += fu[b][c] * grad[l][b] * 2.0 / h[b];
                        }
                        if c < 3 {
                            v -= omega * j[c] * phi[l];
                        }
                        out[layout.field_offset(c, cell, l)] += wq * v / self.mass(basis.modes[l]);
                    }
                }
            }
        }

        // faces: right face of `cell` against the left face of its neighbour
        for axis in self.active_axes() {
            let frule = cell_rule(mesh, self.nq, Some(axis));
            for cell in 0..mesh.n_cells() {
                let nb = self.neighbor(cell, axis);
                for &(r, wq) in &frule {
                    let mut rm = r;
                    rm[axis] = 1.0;
                    let mut rp = r;
                    rp[axis] = -1.0;
                    let (phim, _) = basis.phi(rm);
                    let (phip, _) = basis.phi(rp);
                    for (s, sm) in self.species.iter().enumerate() {
                        let cm = self.coeffs_at(y, s, cell, &phim);
                        let cp = self.coeffs_at(y, s, nb, &phip);
                        let a = matvec(&sm.plus[axis], &cm);
                        let b = matvec(&sm.minus[axis], &cp);
                        for l in 0..nm {
                            let m = self.mass(basis.modes[l]);
                            let (bm, bp) = (layout.hermite_block(s, cell, l), layout.hermite_block(s, nb, l));
                            for k in 0..cm.len() {
                                let fhat = a[k] + b[k];
                                out[bm + k] -= wq * fhat * phim[l] / m;
                                out[bp + k] += wq * fhat * phip[l] / m;
                            }
                        }
                    }
                    let um = self.fields_at(y, cell, &phim);
                    let up = self.fields_at(y, nb, &phip);
                    let fhat: Vec<f64> = if self.upwind {
                        let a = matvec(&self.flux_plus[axis], &um);
                        let b = matvec(&self.flux_minus[axis], &up);
                        a.iter().zip(&b).map(|(a, b)| a + b).collect()
                    } else {
                        let avg: Vec<f64> = um.iter().zip(&up).map(|(a, b)| 0.5 * (a + b)).collect();
                        matvec(&self.flux[axis], &avg)
                    };
                    for l in 0..nm {
                        let m = self.mass(basis.modes[l]);
                        for c in 0..6 {
                            out[layout.field_offset(c, cell, l)] -= wq * fhat[c] * phim[l] / m;
                            out[layout.field_offset(c, nb, l)] += wq * fhat[c] * phip[l] / m;
                        }
                    }
                }
            }
        }

        // collisions
        let nu = self.physics.collision_rate;
        for (s, sp) in layout.species().iter().enumerate() {
            for h in 0..sp.n_hermite() {
                let k = sp.hermite_tuple(h);
                let mut d = 0.0;
                for a in 0..3 {
                    let n = sp.hermite_orders[a] as f64;
                    let kk = k[a] as f64;
                    if sp.hermite_orders[a] >= 3 {
                        d += kk * (kk - 1.0) * (kk - 2.0) / (n * (n - 1.0) * (n - 2.0));
                    }
                }
                for cell in 0..mesh.n_cells() {
                    for l in 0..nm {
                        let i = layout.hermite_block(s, cell, l) + h;
                        out[i] -= nu * d * y[i];
                    }
                }
            }
        }
        out
    }

    fn integrate(&self, g: &dyn Fn(usize, &[f64]) -> f64) -> f64 {
        let mesh = self.layout.mesh();
        let basis = self.basis();
        let rule = cell_rule(mesh, self.nq, None);
        let mut sum = 0.0;
        for cell in 0..mesh.n_cells() {
            for &(r, w) in &rule {
                let (phi, _) = basis.phi(r);
                sum += w * g(cell, &phi);
            }
        }
        sum
    }

    pub fn particle_number(&self, y: &[f64], s: usize) -> f64 {
        let sm = &self.species[s];
        sm.spec.alpha_volume()
            * self.integrate(&|cell, phi| {
                let c = self.coeffs_at(y, s, cell, phi);
                sm.zeroth.iter().zip(&c).map(|(a, b)| a * b).sum()
            })
    }

    pub fn kinetic(&self, y: &[f64]) -> f64 {
        self.species
            .iter()
            .enumerate()
            .map(|(s, sm)| {
                0.5 * sm.spec.mass
                    * sm.spec.alpha_volume()
                    * self.integrate(&|cell, phi| {
                        let c = self.coeffs_at(y, s, cell, phi);
                        sm.second.iter().zip(&c).map(|(a, b)| a * b).sum()
                    })
            })
            .sum()
    }

    pub fn em(&self, y: &[f64]) -> f64 {
        let w = self.physics.omega_ratio;
        0.5 / (w * w)
            * self.integrate(&|cell, phi| {
                let u = self.fields_at(y, cell, phi);
                u.iter().map(|v| v * v).sum()
            })
    }

    /// `(1/ω²) Σ_f ½ ∫_f [u]ᵀ|F|[u]`.
    pub fn jump(&self, y: &[f64]) -> f64 {
        let mesh = self.layout.mesh();
        let basis = self.basis();
        let mut sum = 0.0;
        for axis in self.active_axes() {
            let frule = cell_rule(mesh, self.nq, Some(axis));
            for cell in 0..mesh.n_cells() {
                let nb = self.neighbor(cell, axis);
                for &(r, wq) in &frule {
                    let mut rm = r;
                    rm[axis] = 1.0;
                    let mut rp = r;
                    rp[axis] = -1.0;
                    let um = self.fields_at(y, cell, &basis.phi(rm).0);
                    let up = self.fields_at(y, nb, &basis.phi(rp).0);
                    let d: Vec<f64> = up.iter().zip(&um).map(|(a, b)| a - b).collect();
                    let ad = matvec(&self.flux_abs[axis], &d);
                    sum += 0.5 * wq * d.iter().zip(&ad).map(|(a, b)| a * b).sum::<f64>();
                }
            }
        }
        let w = self.physics.omega_ratio;
        sum / (w * w)
    }
}
