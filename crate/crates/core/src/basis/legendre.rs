//! Legendre polynomials and the one-dimensional DG reference tables.

use thiserror::Error;

use super::quadrature::gauss_legendre;
use crate::state::MeshSpec;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CellEvalError {
    #[error("point {x:?} lies outside cell {cell}")]
    Outside { cell: usize, x: [f64; 3] },
    #[error("mode {mode:?} exceeds the DG degree")]
    Mode { mode: [usize; 3] },
}

pub fn legendre(n: usize, r: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, r);
    if n == 0 {
        return 1.0;
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * r * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    p1
}

pub fn legendre_derivative(n: usize, r: f64) -> f64 {
    // P_n' = Σ_{k = n-1, n-3, ...} (2k+1) P_k
    let mut d = 0.0;
    let mut k = n as isize - 1;
    while k >= 0 {
        d += (2 * k + 1) as f64 * legendre(k as usize, r);
        k -= 2;
    }
    d
}

/// Reference-interval tables for degree `N_DG`.
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreBasis {
    pub degree: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `stiffness[l][a] = ∫ L_l' L_a dr`.
    pub stiffness: Vec<Vec<f64>>,
    /// `triple[l][a][b] = ∫ L_l L_a L_b dr`.
    pub triple: Vec<Vec<Vec<f64>>>,
}

impl LegendreBasis {
    pub fn new(degree: usize) -> Self {
        let n = (degree + 2).max((3 * degree + 2).div_ceil(2));
        let (nodes, weights) = gauss_legendre(n);
        let d = degree + 1;
        let quad = |f: &dyn Fn(f64) -> f64| -> f64 {
            nodes.iter().zip(&weights).map(|(&r, &w)| w * f(r)).sum()
        };
        let mut stiffness = vec![vec![0.0; d]; d];
        let mut triple = vec![vec![vec![0.0; d]; d]; d];
        for l in 0..d {
            for a in 0..d {
                stiffness[l][a] = if a < l && (l + a) % 2 == 1 { 2.0 } else { 0.0 };
                for b in 0..d {
                    triple[l][a][b] =
                        snap(quad(&|r| legendre(l, r) * legendre(a, r) * legendre(b, r)));
                }
            }
        }
        LegendreBasis {
            degree,
            nodes,
            weights,
            stiffness,
            triple,
        }
    }

    pub fn mass(&self, i: usize) -> f64 {
        2.0 / (2 * i + 1) as f64
    }
}

fn snap(v: f64) -> f64 {
    if v.abs() < 1e-14 {
        0.0
    } else {
        v
    }
}

/// Tensor-product Legendre value of `mode` at physical point `x` inside `cell`.
pub fn legendre_cell_eval(
    mesh: &MeshSpec,
    mode: [usize; 3],
    cell: usize,
    x: [f64; 3],
) -> Result<f64, CellEvalError> {
    let r = reference_coords(mesh, cell, x)?;
    let mut v = 1.0;
    for a in 0..3 {
        if mode[a] > mesh.degree(a) {
            return Err(CellEvalError::Mode { mode });
        }
        v *= legendre(mode[a], r[a]);
    }
    Ok(v)
}

/// Reference coordinates in `[-1, 1]^3` of a physical point in `cell`.
pub fn reference_coords(mesh: &MeshSpec, cell: usize, x: [f64; 3]) -> Result<[f64; 3], CellEvalError> {
    let c = mesh.cell_center(cell);
    let h = mesh.spacing();
    let mut r = [0.0; 3];
    for a in 0..3 {
        r[a] = 2.0 * (x[a] - c[a]) / h[a];
        if !(r[a].abs() <= 1.0 + 1e-12) {
            return Err(CellEvalError::Outside { cell, x });
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthogonality_and_tables() {
        for deg in 0..5 {
            let b = LegendreBasis::new(deg);
            for i in 0..=deg {
                for j in 0..=deg {
                    let m: f64 = b
                        .nodes
                        .iter()
                        .zip(&b.weights)
                        .map(|(&r, &w)| w * legendre(i, r) * legendre(j, r))
                        .sum();
                    let e = if i == j { b.mass(i) } else { 0.0 };
                    assert!((m - e).abs() < 1e-15);
                }
            }
            for l in 0..=deg {
                for a in 0..=deg {
                    let q: f64 = b
                        .nodes
                        .iter()
                        .zip(&b.weights)
                        .map(|(&r, &w)| w * legendre_derivative(l, r) * legendre(a, r))
                        .sum();
                    assert!((b.stiffness[l][a] - q).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn triple_products_p1() {
        let b = LegendreBasis::new(1);
        assert!((b.triple[0][0][0] - 2.0).abs() < 1e-15);
        assert!((b.triple[1][1][0] - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(b.triple[1][1][1], 0.0);
    }

    #[test]
    fn cell_eval() {
        let mesh = MeshSpec::new([4, 1, 1], [2.0, 1.0, 1.0], 2);
        assert_eq!(legendre_cell_eval(&mesh, [0, 0, 0], 1, [0.6, 0.3, 0.5]).unwrap(), 1.0);
        assert_eq!(legendre_cell_eval(&mesh, [1, 0, 0], 1, [0.75, 0.5, 0.5]).unwrap(), 0.0);
        assert!((legendre_cell_eval(&mesh, [1, 0, 0], 1, [1.0, 0.5, 0.5]).unwrap() - 1.0).abs() < 1e-12);
        assert!(legendre_cell_eval(&mesh, [0, 0, 0], 1, [1.2, 0.5, 0.5]).is_err());
        assert!(legendre_cell_eval(&mesh, [0, 1, 0], 1, [0.6, 0.5, 0.5]).is_err());
    }

    #[test]
    fn derivative_matches_difference() {
        for n in 0..6 {
            for r in [-0.7, 0.1, 0.9] {
                let fd = (legendre(n, r + 1e-6) - legendre(n, r - 1e-6)) / 2e-6;
                assert!((legendre_derivative(n, r) - fd).abs() < 1e-7);
            }
        }
    }
}
