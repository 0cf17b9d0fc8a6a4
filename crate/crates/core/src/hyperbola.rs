//! Lattice points on xy ≡ λ (mod c) inside boxes.

use crate::approx::t_mn;
use crate::arith::{gcd, inv_mod, Modulus};
use crate::error::{domain, Result};
use crate::par;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// The integers start, start + 1, …, start + len − 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DiscreteInterval {
    pub start: i64,
    pub len: u64,
}

impl DiscreteInterval {
    pub fn new(start: i64, len: u64) -> Self {
        Self { start, len }
    }

    /// The closed range [lo, hi]; empty when hi < lo.
    pub fn closed(lo: i64, hi: i64) -> Self {
        Self {
            start: lo,
            len: if hi < lo { 0 } else { (hi - lo + 1) as u64 },
        }
    }

    pub fn end(&self) -> i64 {
        self.start + self.len as i64
    }

    pub fn midpoint(&self) -> f64 {
        self.start as f64 + (self.len as f64 - 1.0).max(0.0) / 2.0
    }

    pub fn contains_real(&self, v: f64) -> bool {
        self.len > 0 && v >= self.start as f64 - 1e-9 && v <= (self.end() - 1) as f64 + 1e-9
    }

    /// Members congruent to r modulo q.
    pub fn count_congruent(&self, r: u64, q: u64) -> u64 {
        if self.len == 0 {
            return 0;
        }
        let (q, r) = (q as i128, r as i128);
        let below = |v: i128| (v - r).div_euclid(q);
        (below(self.end() as i128 - 1) - below(self.start as i128 - 1)) as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Box {
    pub x: DiscreteInterval,
    pub y: DiscreteInterval,
}

impl Box {
    pub fn new(x: DiscreteInterval, y: DiscreteInterval) -> Self {
        Self { x, y }
    }
}

/// #{(x, y) ∈ I × J : xy ≡ λ (mod c)}.
///
/// For each x with g = (x, c) dividing λ there is exactly one class of y
/// modulo c/g, counted in J directly.
pub fn count_points(c: &Modulus, lambda: i64, b: &Box) -> u64 {
    let q = c.get();
    let lam = c.reduce(lambda);
    let mut total = 0u64;
    for x in b.x.start..b.x.end() {
        let xr = c.reduce(x);
        let g = gcd(xr, q);
        if lam % g != 0 {
            continue;
        }
        let q1 = q / g;
        let inv = inv_mod((xr / g) % q1, q1).expect("x/g is a unit mod c/g");
        let r = ((lam / g) as u128 * inv as u128 % q1 as u128) as u64;
        total += b.y.count_congruent(r, q1);
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CgBound {
    pub t_term: f64,
    pub gcd_term: f64,
}

impl CgBound {
    pub fn total(&self) -> f64 {
        self.t_term + self.gcd_term
    }
}

/// (XY/c)·T_{c/X, c/Y}(α, β) and (λ, c).
///
/// `center` defaults to the box midpoint scaled by 1/c.
pub fn cg_bound(c: &Modulus, lambda: i64, b: &Box, center: Option<(f64, f64)>) -> Result<CgBound> {
    let q = c.get() as f64;
    let (x, y) = (b.x.len as f64, b.y.len as f64);
    if x > 4.0 * q || y > 4.0 * q {
        return domain(format!("box {x}x{y} exceeds 4c = {}", 4.0 * q));
    }
    let gcd_term = c.gcd_with(lambda) as f64;
    if b.x.len == 0 || b.y.len == 0 {
        return Ok(CgBound { t_term: 0.0, gcd_term });
    }
    let (alpha, beta) = center.unwrap_or((b.x.midpoint() / q, b.y.midpoint() / q));
    if !b.x.contains_real(q * alpha) || !b.y.contains_real(q * beta) {
        return domain(format!("(c·alpha, c·beta) = ({}, {}) lies outside the box", q * alpha, q * beta));
    }
    let t = t_mn(q / x, q / y, alpha, beta)?;
    Ok(CgBound {
        t_term: x * y / q * t,
        gcd_term,
    })
}

/// Largest observed count / ((1 + log c)²·(T_term + gcd_term)) over a random grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundSweep {
    pub c_max: u64,
    pub samples: u64,
    pub max_k: f64,
    pub worst_c: u64,
    pub worst_lambda: u64,
    pub worst_box: Box,
}

pub fn bound_sweep(c_max: u64, boxes_per_lambda: usize, seed: u64) -> BoundSweep {
    let per_c = par::map_range(2..c_max as usize + 1, |c| {
        let c = c as u64;
        let m = Modulus::new(c).expect("c >= 2");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(c);
        let mut best = (0.0f64, 0u64, Box::new(DiscreteInterval::new(0, 0), DiscreteInterval::new(0, 0)));
        let log2 = (1.0 + (c as f64).ln()).powi(2);
        for lambda in 0..c {
            for _ in 0..boxes_per_lambda {
                let bx = Box::new(
                    DiscreteInterval::new(rng.gen_range(-(c as i64)..2 * c as i64), rng.gen_range(1..=c)),
                    DiscreteInterval::new(rng.gen_range(-(c as i64)..2 * c as i64), rng.gen_range(1..=c)),
                );
                let n = count_points(&m, lambda as i64, &bx) as f64;
                let bound = cg_bound(&m, lambda as i64, &bx, None).expect("box within 4c");
                let k = n / (log2 * bound.total());
                if k > best.0 {
                    best = (k, lambda, bx);
                }
            }
        }
        (c, best)
    });
    let mut out = BoundSweep {
        c_max,
        samples: (2..=c_max).sum::<u64>() * boxes_per_lambda as u64,
        max_k: 0.0,
        worst_c: 0,
        worst_lambda: 0,
        worst_box: Box::new(DiscreteInterval::new(0, 0), DiscreteInterval::new(0, 0)),
    };
    for (c, (k, lambda, bx)) in per_c {
        if k > out.max_k {
            out.max_k = k;
            out.worst_c = c;
            out.worst_lambda = lambda;
            out.worst_box = bx;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full(c: i64) -> Box {
        Box::new(DiscreteInterval::closed(0, c - 1), DiscreteInterval::closed(0, c - 1))
    }

    #[test]
    fn examples() {
        let m5 = Modulus::new(5).unwrap();
        assert_eq!(count_points(&m5, 1, &full(5)), 4);
        assert_eq!(count_points(&Modulus::new(7).unwrap(), 0, &full(7)), 13);
        let empty = Box::new(DiscreteInterval::new(3, 0), DiscreteInterval::new(0, 5));
        assert_eq!(count_points(&m5, 1, &empty), 0);
    }

    #[test]
    fn congruent_counting() {
        let iv = DiscreteInterval::new(-7, 20);
        for q in 1..9u64 {
            for r in 0..q {
                let brute = (iv.start..iv.end()).filter(|v| v.rem_euclid(q as i64) as u64 == r).count();
                assert_eq!(iv.count_congruent(r, q), brute as u64);
            }
        }
    }

    #[test]
    fn bound_examples() {
        let m5 = Modulus::new(5).unwrap();
        let b = cg_bound(&m5, 1, &full(5), Some((0.4, 0.4))).unwrap();
        assert!((b.t_term - 5.0 * t_mn(1.0, 1.0, 0.4, 0.4).unwrap()).abs() < 1e-12);
        assert_eq!(b.gcd_term, 1.0);

        let m = Modulus::new(11).unwrap();
        let b = cg_bound(&m, 0, &full(11), None).unwrap();
        assert_eq!(b.gcd_term, 11.0);
        assert!(count_points(&m, 0, &full(11)) as f64 <= 3.0 * b.total());

        let degenerate = Box::new(DiscreteInterval::new(0, 0), DiscreteInterval::new(0, 4));
        let b = cg_bound(&m5, 1, &degenerate, None).unwrap();
        assert_eq!(b.t_term, 0.0);
    }

    #[test]
    fn oversized_box_is_rejected() {
        let m = Modulus::new(3).unwrap();
        let b = Box::new(DiscreteInterval::new(0, 13), DiscreteInterval::new(0, 1));
        assert!(cg_bound(&m, 1, &b, None).is_err());
    }
}
