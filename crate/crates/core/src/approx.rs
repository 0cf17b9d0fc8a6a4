//! The simultaneous approximation functional T_{M,N}(α, β).

use crate::arith::dist_to_int;
use crate::error::{domain, Result};
use serde::Serialize;
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApproxTarget {
    pub m: f64,
    pub n: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl ApproxTarget {
    /// Weights must be positive; α and β are reduced into [0, 1).
    pub fn new(m: f64, n: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !(m > 0.0 && n > 0.0 && m.is_finite() && n.is_finite()) {
            return domain(format!("weights must be positive and finite, got M={m}, N={n}"));
        }
        if !(alpha.is_finite() && beta.is_finite()) {
            return domain("alpha and beta must be finite");
        }
        Ok(Self {
            m,
            n,
            alpha: frac(alpha),
            beta: frac(beta),
        })
    }

    /// t + M‖αt‖ + N‖βt‖
    pub fn objective(&self, t: u64) -> f64 {
        let (a, b) = self.dists(t);
        t as f64 + self.m * a + self.n * b
    }

    fn dists(&self, t: u64) -> (f64, f64) {
        (
            dist_to_int(self.alpha * t as f64),
            dist_to_int(self.beta * t as f64),
        )
    }
}

fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApproxResult {
    pub t_star: u64,
    pub value: f64,
    pub alpha_dist: f64,
    pub beta_dist: f64,
}

/// Exact minimizer of t + M‖αt‖ + N‖βt‖ over positive integers t.
///
/// The objective is at least t, so the scan stops once t reaches the best
/// value found. Ties go to the smaller t.
pub fn t_value(target: &ApproxTarget) -> ApproxResult {
    let (a, b) = target.dists(1);
    let mut best = ApproxResult {
        t_star: 1,
        value: target.objective(1),
        alpha_dist: a,
        beta_dist: b,
    };
    let mut t = 2u64;
    while (t as f64) < best.value {
        let v = target.objective(t);
        if v < best.value {
            let (a, b) = target.dists(t);
            best = ApproxResult {
                t_star: t,
                value: v,
                alpha_dist: a,
                beta_dist: b,
            };
        }
        t += 1;
    }
    best
}

/// T_{M,N}(α, β) as a plain number.
pub fn t_mn(m: f64, n: f64, alpha: f64, beta: f64) -> Result<f64> {
    Ok(t_value(&ApproxTarget::new(m, n, alpha, beta)?).value)
}

/// A positive t with t ≤ ⌈A⌉⌈B⌉, ‖αt‖ ≤ 1/⌈A⌉ and ‖βt‖ ≤ 1/⌈B⌉.
///
/// The points (αt, βt) mod 1 for t = 0..=⌈A⌉⌈B⌉ fall into ⌈A⌉⌈B⌉ cells,
/// so two share a cell and their difference is the witness. Since
/// ⌈A⌉ ≤ 2A, this meets the constant 4 in t ≤ 4AB, ‖αt‖ ≤ 4/A, ‖βt‖ ≤ 4/B.
pub fn dirichlet_witness(alpha: f64, beta: f64, a: f64, b: f64) -> Result<u64> {
    if !(a >= 1.0 && b >= 1.0 && a.is_finite() && b.is_finite()) {
        return domain(format!("A and B must be at least 1, got A={a}, B={b}"));
    }
    let (alpha, beta) = (frac(alpha), frac(beta));
    let (ca, cb) = (a.ceil() as u64, b.ceil() as u64);
    let cell = |x: f64, k: u64| ((frac(x) * k as f64) as u64).min(k - 1);
    let mut seen: HashMap<(u64, u64), u64> = HashMap::new();
    for t in 0..=ca * cb {
        let key = (cell(alpha * t as f64, ca), cell(beta * t as f64, cb));
        if let Some(&s) = seen.get(&key) {
            return Ok(t - s);
        }
        seen.insert(key, t);
    }
    unreachable!("pigeonhole guarantees a collision")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tv(m: f64, n: f64, a: f64, b: f64) -> ApproxResult {
        t_value(&ApproxTarget::new(m, n, a, b).unwrap())
    }

    #[test]
    fn examples() {
        let r = tv(100.0, 100.0, 0.0, 0.0);
        assert_eq!((r.t_star, r.value), (1, 1.0));
        let r = tv(12.0, 12.0, 1.0 / 3.0, 1.0 / 3.0);
        assert_eq!(r.t_star, 3);
        assert!((r.value - 3.0).abs() < 1e-12);
        let r = tv(1.0, 1.0, 0.5, 0.5);
        assert_eq!((r.t_star, r.value), (1, 2.0));
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(ApproxTarget::new(0.0, 1.0, 0.1, 0.1).is_err());
        assert!(ApproxTarget::new(1.0, -1.0, 0.1, 0.1).is_err());
    }

    #[test]
    fn reduces_mod_one() {
        let t = ApproxTarget::new(1.0, 1.0, -0.25, 3.5).unwrap();
        assert_eq!((t.alpha, t.beta), (0.75, 0.5));
    }

    #[test]
    fn witness_examples() {
        assert_eq!(dirichlet_witness(0.0, 0.0, 10.0, 10.0).unwrap(), 1);
        let t = dirichlet_witness(1.0 / 7.0, 0.0, 7.0, 1.0).unwrap();
        assert!(t <= 7 && dist_to_int(t as f64 / 7.0) <= 4.0 / 7.0);
        let (a, b) = (2f64.sqrt() - 1.0, 3f64.sqrt() - 1.0);
        let t = dirichlet_witness(a, b, 5.0, 5.0).unwrap();
        assert!(t <= 100);
        assert!(dist_to_int(a * t as f64) <= 0.8 && dist_to_int(b * t as f64) <= 0.8);
    }
}
