use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::DiagnosticError;

/// `Σ_I u(x_I) e^{i k x_I}` with `k = 2π mode / length`.
pub fn fourier_mode(samples: &[f64], centers: &[f64], length: f64, mode: i64) -> Complex64 {
    let k = 2.0 * PI * mode as f64 / length;
    samples
        .iter()
        .zip(centers)
        .map(|(&u, &x)| u * Complex64::from_polar(1.0, k * x))
        .sum()
}

/// Uniformly sampled history of a 1D field at cell centres.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FieldHistory {
    pub times: Vec<f64>,
    pub centers: Vec<f64>,
    /// `values[n][I]` at time `times[n]` and position `centers[I]`.
    pub values: Vec<Vec<f64>>,
}

impl FieldHistory {
    pub fn push(&mut self, t: f64, values: Vec<f64>) {
        self.times.push(t);
        self.values.push(values);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumGrid {
    pub n_t: usize,
    pub dt: f64,
    pub centers: Vec<f64>,
    /// `ω_j = 2πj / (N_t Δt)`.
    pub omegas: Vec<f64>,
    /// `k_i = 2πi / L`.
    pub wavenumbers: Vec<f64>,
    /// `magnitude[j][i] = |Ê(ω_j, k_i)|`.
    pub magnitude: Vec<Vec<f64>>,
}

pub fn hann(n: usize, n_t: usize) -> f64 {
    (PI * n as f64 / n_t as f64).sin().powi(2)
}

/// Hann-windowed `|Σ_{n,I} E(x_I,t_n) e^{iω t_n} e^{ik x_I} H_n|` on the DFT lattice.
pub fn spectrum_2d(history: &FieldHistory, length: f64) -> Result<SpectrumGrid, DiagnosticError> {
    let n_t = history.times.len();
    let n_x = history.centers.len();
    if n_t < 2 || n_x == 0 {
        return Err(DiagnosticError::Empty);
    }
    let dt = history.times[1] - history.times[0];
    let tol = 1e-9 * dt.abs().max(history.times[n_t - 1].abs());
    for (n, &t) in history.times.iter().enumerate() {
        if (t - history.times[0] - n as f64 * dt).abs() > tol || history.values[n].len() != n_x {
            return Err(DiagnosticError::IrregularCadence { index: n });
        }
    }
    let dx = length / n_x as f64;
    for (i, &x) in history.centers.iter().enumerate() {
        if (x - history.centers[0] - i as f64 * dx).abs() > 1e-9 * length {
            return Err(DiagnosticError::IrregularCadence { index: i });
        }
    }
    // Uniform lattices make the sums inverse DFTs up to unit-modulus phases.
    let mut data: Vec<Complex64> = Vec::with_capacity(n_t * n_x);
    for (n, row) in history.values.iter().enumerate() {
        let h = hann(n, n_t);
        data.extend(row.iter().map(|&v| Complex64::new(h * v, 0.0)));
    }
    let mut planner = FftPlanner::new();
    let fx = planner.plan_fft_inverse(n_x);
    for row in data.chunks_exact_mut(n_x) {
        fx.process(row);
    }
    let ft = planner.plan_fft_inverse(n_t);
    let mut col = vec![Complex64::new(0.0, 0.0); n_t];
    for i in 0..n_x {
        for n in 0..n_t {
            col[n] = data[n * n_x + i];
        }
        ft.process(&mut col);
        for n in 0..n_t {
            data[n * n_x + i] = col[n];
        }
    }
    let magnitude = data.chunks_exact(n_x).map(|r| r.iter().map(|c| c.norm()).collect()).collect();
    Ok(SpectrumGrid {
        n_t,
        dt,
        centers: history.centers.clone(),
        omegas: (0..n_t).map(|j| 2.0 * PI * j as f64 / (n_t as f64 * dt)).collect(),
        wavenumbers: (0..n_x).map(|i| 2.0 * PI * i as f64 / length).collect(),
        magnitude,
    })
}
