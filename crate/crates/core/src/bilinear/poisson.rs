use super::sequence::e;
use super::window::SmoothWindow;
use crate::arith::Modulus;
use crate::error::{domain, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoissonResult {
    pub main_term: f64,
    pub corrected_sum: f64,
    /// Truncation point H of the dual sum.
    pub h_max: f64,
    /// Number of dual frequencies actually summed.
    pub terms: u64,
}

/// Σ_{n ≡ a (mod q)} w(n/N), stepping through the progression.
pub fn progression_sum(window: &SmoothWindow, n: f64, q: &Modulus, a: i64) -> f64 {
    let (lo, hi) = window.support();
    let qq = q.get() as i64;
    let first = (lo * n).floor() as i64 - 1;
    let last = (hi * n).ceil() as i64 + 1;
    let r = q.reduce(a) as i64;
    let mut m = first + (r - first).rem_euclid(qq);
    let mut acc = 0.0;
    while m <= last {
        acc += window.eval(m as f64 / n);
        m += qq;
    }
    acc
}

/// Poisson summation over the progression a mod q, truncated at |h| ≤ H.
///
/// H = x^δ·Q/N with x = qN and Q = q. The dual term for h is
/// (N/q)·ŵ(hN/q)·e(ah/q). Frequencies past the window's transform cutoff
/// are at roundoff level and are not summed.
pub fn poisson_complete(window: &SmoothWindow, n: f64, q: &Modulus, a: i64, delta: f64) -> Result<PoissonResult> {
    if !window.is_smooth() {
        return domain("Poisson completion needs a smooth window");
    }
    if !(n >= 1.0 && n.is_finite()) {
        return domain(format!("N must be at least 1, got {n}"));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return domain(format!("delta must be positive, got {delta}"));
    }
    let qf = q.get() as f64;
    let scale = n / qf;
    let h_max = (qf * n).powf(delta) * qf / n;
    let reach = (window.fourier_cutoff() / scale).floor();
    let h_last = h_max.min(reach).floor().max(0.0) as u64;
    let main_term = scale * window.integral();
    let a = q.reduce(a);
    let mut dual = 0.0;
    for h in 1..=h_last {
        let w_hat = window.fourier(h as f64 * scale);
        let phase = e((a as u128 * h as u128 % q.get() as u128) as f64 / qf);
        // h and −h are complex conjugates of each other.
        dual += 2.0 * (w_hat * phase).re;
    }
    Ok(PoissonResult {
        main_term,
        corrected_sum: main_term + scale * dual,
        h_max,
        terms: 2 * h_last,
    })
}


#[cfg(test)]
mod tests {
    use super::*;

    fn md(q: u64) -> Modulus {
        Modulus::new(q).unwrap()
    }

    #[test]
    fn full_lattice() {
        let w = SmoothWindow::bump_on(1.0, 4.0);
        let r = poisson_complete(&w, 37.0, &md(1), 0, 1.0).unwrap();
        let direct = progression_sum(&w, 37.0, &md(1), 0);
        assert!((r.corrected_sum - direct).abs() < 1e-8, "{} vs {}", r.corrected_sum, direct);
    }

    #[test]
    fn progression_example() {
        let w = SmoothWindow::bump_on(1.0, 4.0);
        let r = poisson_complete(&w, 1000.0, &md(7), 3, 1.0).unwrap();
        let direct = progression_sum(&w, 1000.0, &md(7), 3);
        assert!((r.corrected_sum - direct).abs() < 1e-8);
    }

    #[test]
    fn sparse_progression() {
        let w = SmoothWindow::bump_on(1.0, 4.0);
        let r = poisson_complete(&w, 3.0, &md(101), 5, 1.0).unwrap();
        let direct = progression_sum(&w, 3.0, &md(101), 5);
        assert!(direct.abs() < 1.0);
        assert!((r.corrected_sum - direct).abs() < 1e-8);
    }

    #[test]
    fn rejects_sharp_window() {
        let w = SmoothWindow::sharp(1.0, 2.0);
        assert!(poisson_complete(&w, 10.0, &md(3), 0, 1.0).is_err());
    }
}
