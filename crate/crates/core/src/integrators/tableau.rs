//! Butcher tableaux.

#[derive(Debug, Clone, PartialEq)]
pub struct ButcherTableau {
    pub name: &'static str,
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub order: usize,
}

impl ButcherTableau {
    pub fn stages(&self) -> usize {
        self.b.len()
    }

    /// True when `a_ij = 0` for all `j ≥ i`.
    pub fn is_explicit(&self) -> bool {
        self.a
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().skip(i).all(|&v| v == 0.0))
    }

    /// `max_ij |b_i b_j − a_ij b_i − a_ji b_j|`; zero for quadratic-invariant-preserving methods.
    pub fn symplectic_defect(&self) -> f64 {
        let s = self.stages();
        let mut worst: f64 = 0.0;
        for i in 0..s {
            for j in 0..s {
                let d = self.b[i] * self.b[j] - self.a[i][j] * self.b[i] - self.a[j][i] * self.b[j];
                worst = worst.max(d.abs());
            }
        }
        worst
    }

    pub fn weight_sum_defect(&self) -> f64 {
        (self.b.iter().sum::<f64>() - 1.0).abs()
    }

    pub fn forward_euler() -> Self {
        ButcherTableau {
            name: "euler",
            a: vec![vec![0.0]],
            b: vec![1.0],
            c: vec![0.0],
            order: 1,
        }
    }

    /// Three-stage, third-order method of Bogacki and Shampine (without the embedded pair).
    pub fn bogacki_shampine3() -> Self {
        ButcherTableau {
            name: "bs3",
            a: vec![
                vec![0.0, 0.0, 0.0],
                vec![0.5, 0.0, 0.0],
                vec![0.0, 0.75, 0.0],
            ],
            b: vec![2.0 / 9.0, 1.0 / 3.0, 4.0 / 9.0],
            c: vec![0.0, 0.5, 0.75],
            order: 3,
        }
    }

    pub fn heun2() -> Self {
        ButcherTableau {
            name: "heun2",
            a: vec![vec![0.0, 0.0], vec![1.0, 0.0]],
            b: vec![0.5, 0.5],
            c: vec![0.0, 1.0],
            order: 2,
        }
    }

    pub fn rk4() -> Self {
        ButcherTableau {
            name: "rk4",
            a: vec![
                vec![0.0, 0.0, 0.0, 0.0],
                vec![0.5, 0.0, 0.0, 0.0],
                vec![0.0, 0.5, 0.0, 0.0],
                vec![0.0, 0.0, 1.0, 0.0],
            ],
            b: vec![1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0],
            c: vec![0.0, 0.5, 0.5, 1.0],
            order: 4,
        }
    }

    /// Implicit midpoint rule (one-stage Gauss-Legendre).
    pub fn implicit_midpoint() -> Self {
        ButcherTableau {
            name: "gl1",
            a: vec![vec![0.5]],
            b: vec![1.0],
            c: vec![0.5],
            order: 2,
        }
    }

    /// Two-stage, fourth-order Gauss-Legendre collocation.
    pub fn gauss_legendre2() -> Self {
        let r = 3f64.sqrt() / 6.0;
        ButcherTableau {
            name: "gl2",
            a: vec![vec![0.25, 0.25 - r], vec![0.25 + r, 0.25]],
            b: vec![0.5, 0.5],
            c: vec![0.5 - r, 0.5 + r],
            order: 4,
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        Some(match name {
            "euler" => Self::forward_euler(),
            "heun2" => Self::heun2(),
            "bs3" => Self::bogacki_shampine3(),
            "rk4" => Self::rk4(),
            "gl1" => Self::implicit_midpoint(),
            "gl2" => Self::gauss_legendre2(),
            _ => return None,
        })
    }

    pub const NAMES: [&'static str; 6] = ["euler", "heun2", "bs3", "rk4", "gl1", "gl2"];
}
