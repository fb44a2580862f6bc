//! Asymmetrically weighted Hermite functions.
//!
//! `ψ_n(ξ) = (π 2^n n!)^{-1/2} H_n(ξ) e^{-ξ²}` and its dual
//! `ψ^n(ξ) = (2^n n!)^{-1/2} H_n(ξ)`, with `∫ ψ_n ψ^m dξ = δ_nm`.
//! Both obey `ξ f_n = √((n+1)/2) f_{n+1} + √(n/2) f_{n-1}`.

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("Hermite order {order} exceeds maximum {max}")]
pub struct OrderError {
    pub order: usize,
    pub max: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HermiteBasis {
    pub max_order: [usize; 3],
    pub alpha: [f64; 3],
    pub shift: [f64; 3],
}

impl HermiteBasis {
    pub fn for_species(s: &crate::state::SpeciesSpec) -> Self {
        HermiteBasis {
            max_order: s.hermite_orders,
            alpha: s.alpha,
            shift: s.shift,
        }
    }

    pub fn xi(&self, axis: usize, v: f64) -> f64 {
        (v - self.shift[axis]) / self.alpha[axis]
    }

    /// `ψ_order(ξ)` along `axis`.
    pub fn aw_eval(&self, axis: usize, order: usize, xi: f64) -> Result<f64, OrderError> {
        self.check(axis, order)?;
        Ok(aw_function(order, xi))
    }

    /// `ψ^order(ξ)` along `axis`.
    pub fn dual_eval(&self, axis: usize, order: usize, xi: f64) -> Result<f64, OrderError> {
        self.check(axis, order)?;
        Ok(dual_function(order, xi))
    }

    fn check(&self, axis: usize, order: usize) -> Result<(), OrderError> {
        let max = self.max_order[axis];
        if order > max {
            Err(OrderError { order, max })
        } else {
            Ok(())
        }
    }
}

fn recurrence(order: usize, xi: f64, start: f64) -> f64 {
    let (mut cur, mut prev) = (start, 0.0);
    for n in 0..order {
        let next = (2.0 / (n + 1) as f64).sqrt() * xi * cur - (n as f64 / (n + 1) as f64).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

pub fn aw_function(order: usize, xi: f64) -> f64 {
    recurrence(order, xi, (-xi * xi).exp() / PI.sqrt())
}

pub fn dual_function(order: usize, xi: f64) -> f64 {
    recurrence(order, xi, 1.0)
}

/// All dual values `ψ^0..=ψ^max` at `xi`.
pub fn dual_values(max: usize, xi: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(max + 1);
    let (mut cur, mut prev) = (1.0, 0.0);
    for n in 0..=max {
        out.push(cur);
        let next = (2.0 / (n + 1) as f64).sqrt() * xi * cur - (n as f64 / (n + 1) as f64).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    out
}

/// All weighted values `ψ_0..=ψ_max` at `xi`.
pub fn aw_values(max: usize, xi: f64) -> Vec<f64> {
    let g = (-xi * xi).exp() / PI.sqrt();
    dual_values(max, xi).into_iter().map(|d| d * g).collect()
}
