use super::sequence::{e, SequenceKind, WindowedSequence};
use super::window::SmoothWindow;
use crate::arith::{dist_to_int, gcd};
use crate::error::{domain, Result};
use num_complex::Complex64;
use serde::Serialize;

/// a_n = Σ_{h₁ℓ₁ − h₂ℓ₂ = n} Φ₁(h₁/H)·Φ₂(h₂/H)·e(h₁α₁ + h₂α₂) over h₁, h₂ ≥ 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DispersionSequence {
    pub h: f64,
    pub l: f64,
    pub ell1: u64,
    pub ell2: u64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub window1: SmoothWindow,
    pub window2: SmoothWindow,
}

/// Default weight for both h-variables, supported on (0, 6).
pub fn default_window() -> SmoothWindow {
    SmoothWindow::bump(3.0, 3.0)
}

impl DispersionSequence {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        h: f64,
        l: f64,
        ell1: u64,
        ell2: u64,
        alpha1: f64,
        alpha2: f64,
        window1: SmoothWindow,
        window2: SmoothWindow,
    ) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return domain(format!("H must be positive, got {h}"));
        }
        if ell1 == 0 || ell2 == 0 {
            return domain("ell1 and ell2 must be positive");
        }
        if ell1 == ell2 || gcd(ell1, ell2) != 1 {
            return domain(format!("ell1 = {ell1} and ell2 = {ell2} must be distinct and coprime"));
        }
        Ok(Self {
            h,
            l,
            ell1,
            ell2,
            alpha1: alpha1 - alpha1.floor(),
            alpha2: alpha2 - alpha2.floor(),
            window1,
            window2,
        })
    }

    /// The standard instance used for the concentration checks: ℓ₁ = L, ℓ₂ = L + 1.
    pub fn standard(h: f64, l: u64, alpha1: f64, alpha2: f64) -> Result<Self> {
        let w = default_window();
        Self::new(h, l as f64, l, l + 1, alpha1, alpha2, w, w)
    }

    fn weights(&self, w: &SmoothWindow, alpha: f64) -> Vec<(i64, Complex64)> {
        // With bump weights nothing below H = 1 is kept.
        if w.is_smooth() && self.h < 1.0 {
            return Vec::new();
        }
        let (lo, hi) = w.support();
        let first = ((lo * self.h).ceil() as i64).max(1);
        let last = (hi * self.h).floor() as i64;
        (first..=last)
            .filter_map(|k| {
                let v = w.eval(k as f64 / self.h);
                (v != 0.0).then(|| (k, v * e(super::sequence::frac_product(k, alpha))))
            })
            .collect()
    }

    /// Coefficients on their natural support, or on `range` when given.
    pub fn values(&self, range: Option<(i64, i64)>) -> WindowedSequence {
        let kind = SequenceKind::Dispersion {
            h: self.h,
            ell1: self.ell1,
            ell2: self.ell2,
            alpha1: self.alpha1,
            alpha2: self.alpha2,
        };
        let w1 = self.weights(&self.window1, self.alpha1);
        let w2 = self.weights(&self.window2, self.alpha2);
        let (l1, l2) = (self.ell1 as i64, self.ell2 as i64);
        let (lo, hi) = match range {
            Some(r) => r,
            None if w1.is_empty() || w2.is_empty() => (0, -1),
            None => (
                w1[0].0 * l1 - w2[w2.len() - 1].0 * l2,
                w1[w1.len() - 1].0 * l1 - w2[0].0 * l2,
            ),
        };
        let len = if hi < lo { 0 } else { (hi - lo + 1) as usize };
        let mut values = vec![Complex64::new(0.0, 0.0); len];
        for &(h1, a) in &w1 {
            for &(h2, b) in &w2 {
                let n = h1 * l1 - h2 * l2;
                if n >= lo && n <= hi {
                    values[(n - lo) as usize] += a * b;
                }
            }
        }
        WindowedSequence {
            start: lo,
            values,
            kind,
        }
    }

    /// Spike radius H^{ε−1}.
    pub fn spike_radius(&self, eps: f64) -> f64 {
        self.h.powf(eps - 1.0)
    }

    /// Whether ξ lies where â may be large: ‖ℓ₁ξ − α₁‖ ≤ r and ‖ℓ₂ξ + α₂‖ ≤ r.
    ///
    /// The second condition carries a plus sign because h₂ enters n with a
    /// minus sign.
    pub fn in_spike(&self, xi: f64, radius: f64) -> bool {
        dist_to_int(self.ell1 as f64 * xi - self.alpha1) <= radius
            && dist_to_int(self.ell2 as f64 * xi + self.alpha2) <= radius
    }
}
