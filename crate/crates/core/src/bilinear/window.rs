use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;

/// Smooth compactly supported weight, or a sharp indicator for oracle tests.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SmoothWindow {
    /// exp(1 − 1/(1 − u²)) with u = (t − center)/halfwidth, peak value 1.
    Bump { center: f64, halfwidth: f64 },
    /// Indicator of the closed interval [lo, hi].
    Sharp { lo: f64, hi: f64 },
}

// Nodes for the trapezoid rule on the bump support at frequency zero.
const BASE_NODES: usize = 4096;

impl SmoothWindow {
    pub fn bump(center: f64, halfwidth: f64) -> Self {
        assert!(halfwidth > 0.0, "bump halfwidth must be positive");
        SmoothWindow::Bump { center, halfwidth }
    }

    /// Bump supported on the open interval (lo, hi).
    pub fn bump_on(lo: f64, hi: f64) -> Self {
        Self::bump((lo + hi) / 2.0, (hi - lo) / 2.0)
    }

    pub fn sharp(lo: f64, hi: f64) -> Self {
        SmoothWindow::Sharp { lo, hi }
    }

    pub fn is_smooth(&self) -> bool {
        matches!(self, SmoothWindow::Bump { .. })
    }

    /// Closure of the support.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            SmoothWindow::Bump { center, halfwidth } => (center - halfwidth, center + halfwidth),
            SmoothWindow::Sharp { lo, hi } => (lo, hi),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            SmoothWindow::Bump { center, halfwidth } => {
                let u = (t - center) / halfwidth;
                let s = 1.0 - u * u;
                if s <= 0.0 {
                    0.0
                } else {
                    (1.0 - 1.0 / s).exp()
                }
            }
            SmoothWindow::Sharp { lo, hi } => {
                if t >= lo && t <= hi {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn integral(&self) -> f64 {
        self.fourier(0.0).re
    }

    /// ŵ(ξ) = ∫ w(t) e(−tξ) dt.
    ///
    /// The bump is flat to all orders at its endpoints, so the trapezoid rule
    /// converges faster than any power once the nodes resolve the oscillation.
    pub fn fourier(&self, xi: f64) -> Complex64 {
        match *self {
            SmoothWindow::Sharp { lo, hi } => {
                if xi == 0.0 {
                    return Complex64::new(hi - lo, 0.0);
                }
                let e = |t: f64| Complex64::from_polar(1.0, -TAU * t * xi);
                (e(lo) - e(hi)) / Complex64::new(0.0, TAU * xi)
            }
            SmoothWindow::Bump { .. } => {
                let (lo, hi) = self.support();
                let width = hi - lo;
                let nodes = BASE_NODES + (16.0 * width * xi.abs()).ceil() as usize;
                let h = width / nodes as f64;
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 1..nodes {
                    let t = lo + k as f64 * h;
                    acc += self.eval(t) * Complex64::from_polar(1.0, -TAU * t * xi);
                }
                acc * h
            }
        }
    }

    /// A frequency beyond which the computed |ŵ| sits at the roundoff floor.
    ///
    /// The bump transform decays like exp(−c√|ξ|). The cutoff is the first
    /// integer frequency followed by eight consecutive values below 1e-13·∫w.
    pub fn fourier_cutoff(&self) -> f64 {
        match *self {
            SmoothWindow::Sharp { .. } => f64::INFINITY,
            SmoothWindow::Bump { .. } => {
                let target = 1e-13 * self.integral();
                let mut xi = 1.0;
                let mut quiet = 0;
                while quiet < 8 {
                    let v = self.fourier(xi).norm();
                    quiet = if v < target { quiet + 1 } else { 0 };
                    xi += 1.0;
                }
                xi
            }
        }
    }
}
