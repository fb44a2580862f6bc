//! Gauss-Legendre and Gauss-Hermite rules.

use std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Nodes and weights of the `n`-point Gauss-Hermite rule for `∫ e^{-x²} g(x) dx`.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    // Eigenvalues of the Jacobi matrix seed a Newton polish on the orthonormal recurrence.
    let jac = nalgebra::DMatrix::from_fn(n, n, |i, j| {
        if i + 1 == j || j + 1 == i {
            ((i.max(j)) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let mut nodes: Vec<f64> = jac.symmetric_eigen().eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.total_cmp(b));
    let mut weights = vec![0.0; n];
    for (x, w) in nodes.iter_mut().zip(weights.iter_mut()) {
        for _ in 0..4 {
            let (p, dp) = orthonormal_hermite(n, *x);
            if dp == 0.0 {
                break;
            }
            *x -= p / dp;
        }
        let mut sum = 0.0;
        let (mut h0, mut h1) = (PI.powf(-0.25), 0.0);
        for k in 0..n {
            sum += h0 * h0;
            let next = ((2.0 / (k + 1) as f64).sqrt()) * *x * h0 - ((k as f64) / (k + 1) as f64).sqrt() * h1;
            h1 = h0;
            h0 = next;
        }
        *w = 1.0 / sum;
    }
    // Symmetrise to remove eigen-solver asymmetry.
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let xm = 0.5 * (nodes[j] - nodes[i]);
        let wm = 0.5 * (weights[i] + weights[j]);
        nodes[i] = -xm;
        nodes[j] = xm;
        weights[i] = wm;
        weights[j] = wm;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Orthonormal Hermite polynomial `h_n(x)` (weight `e^{-x²}`) and its derivative.
fn orthonormal_hermite(n: usize, x: f64) -> (f64, f64) {
    let (mut h0, mut h1) = (PI.powf(-0.25), 0.0);
    for k in 0..n {
        let next = (2.0 / (k + 1) as f64).sqrt() * x * h0 - (k as f64 / (k + 1) as f64).sqrt() * h1;
        h1 = h0;
        h0 = next;
    }
    // h_n' = sqrt(2n) h_{n-1}
    (h0, (2.0 * n as f64).sqrt() * h1)
}
