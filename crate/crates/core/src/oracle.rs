//! Brute-force references. Slow on purpose; used by tests and `verify`.

use crate::arith::{gcd, Modulus};
use crate::bilinear::SmoothWindow;
use crate::hyperbola::Box;
use num_complex::Complex64;
use std::f64::consts::TAU;

/// S(m, n; c) by a plain loop with x̄ found by search.
pub fn kloosterman(m: i64, n: i64, c: u64) -> Complex64 {
    let q = c as i128;
    let mut acc = Complex64::new(0.0, 0.0);
    for x in 0..c {
        if gcd(x, c) != 1 {
            continue;
        }
        let xbar = (0..c).find(|&y| (x as i128 * y as i128) % q == 1 % q).unwrap();
        let r = (m as i128 * x as i128 + n as i128 * xbar as i128).rem_euclid(q);
        acc += Complex64::from_polar(1.0, TAU * r as f64 / c as f64);
    }
    acc
}

/// #{x mod q : x² ≡ −1}.
pub fn sqrt_minus_one(q: u64) -> Vec<u64> {
    (0..q)
        .filter(|&x| (x as u128 * x as u128 + 1) % q as u128 == 0)
        .collect()
}

/// Double loop over the box.
pub fn hyperbola_count(c: &Modulus, lambda: i64, b: &Box) -> u64 {
    let lam = c.reduce(lambda);
    let mut n = 0;
    for x in b.x.start..b.x.end() {
        for y in b.y.start..b.y.end() {
            n += u64::from(c.reduce(((x as i128 * y as i128) % c.get() as i128) as i64) == lam);
        }
    }
    n
}

/// min over 1 ≤ t ≤ t_max of t + M‖αt‖ + N‖βt‖.
pub fn t_value(m: f64, n: f64, alpha: f64, beta: f64, t_max: u64) -> f64 {
    let d = |x: f64| {
        let f = x - x.floor();
        f.min(1.0 - f)
    };
    (1..=t_max)
        .map(|t| {
            let tf = t as f64;
            tf + m * d(alpha * tf) + n * d(beta * tf)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Σ_{n ≡ a (mod q)} w(n/N) by trial over every integer in the support.
pub fn progression_sum(window: &SmoothWindow, n: f64, q: u64, a: i64) -> f64 {
    let (lo, hi) = window.support();
    let r = a.rem_euclid(q as i64);
    ((lo * n).floor() as i64..=(hi * n).ceil() as i64)
        .filter(|m| m.rem_euclid(q as i64) == r)
        .map(|m| window.eval(m as f64 / n))
        .sum()
}

/// Σ_m Σ_n a_m b_n S(sm, sn; c) with the plain Kloosterman loop.
pub fn bilinear_form(a: &[(i64, Complex64)], b: &[(i64, Complex64)], scalar: i64, c: u64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &(m, am) in a {
        for &(n, bn) in b {
            acc += am * bn * kloosterman(scalar * m, scalar * n, c);
        }
    }
    acc
}

/// Largest prime factor by trial division.
pub fn gpf(mut n: u64) -> u64 {
    let mut best = 1;
    let mut p = 2;
    while p * p <= n {
        while n % p == 0 {
            best = p;
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        best = n;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let s = kloosterman(1, 1, 5);
        assert!((s.re - (2.0 + 2.0 * (0.4 * TAU).cos())).abs() < 1e-12 && s.im.abs() < 1e-12);
        assert_eq!(sqrt_minus_one(10), vec![3, 7]);
        assert_eq!(gpf(50), 5);
        assert!((t_value(12.0, 12.0, 1.0 / 3.0, 1.0 / 3.0, 100) - 3.0).abs() < 1e-9);
    }
}
