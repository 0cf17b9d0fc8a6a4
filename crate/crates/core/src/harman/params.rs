use crate::error::{domain, Result};
use crate::fmt::sig10;
use serde::Serialize;
use std::io::Write;

/// The spectral exponent θ = 7/32 towards Selberg's conjecture.
pub const THETA_KIM_SARNAK: f64 = 7.0 / 32.0;

/// Level of distribution exponent for Type I sums: min(1/2, 2(1−θα)/(4−5θ)).
pub fn type1_ceiling(alpha: f64, theta: f64) -> f64 {
    0.5f64.min(2.0 * (1.0 - theta * alpha) / (4.0 - 5.0 * theta))
}

/// The θ = 7/32 form min(1/2, (64 − 14α)/93).
pub fn type1_ceiling_7_32(alpha: f64) -> f64 {
    0.5f64.min((64.0 - 14.0 * alpha) / 93.0)
}

/// σ₀ = max((2 − (1+θ)α)/(3 − 2θ), (1−θ)(2−α)/(3−θ)).
pub fn sigma0(alpha: f64, theta: f64) -> f64 {
    let a = (2.0 - (1.0 + theta) * alpha) / (3.0 - 2.0 * theta);
    let b = (1.0 - theta) * (2.0 - alpha) / (3.0 - theta);
    a.max(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Type2Variant {
    Squarefree,
    Primes,
}

/// Admissible Type II window (lower, upper) for N = x^β.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    pub lower: f64,
    pub upper: f64,
}

impl Window {
    pub fn is_empty(&self) -> bool {
        self.lower >= self.upper
    }
}

pub fn type2_window(alpha: f64, theta: f64, variant: Type2Variant) -> Window {
    let upper = match variant {
        Type2Variant::Squarefree => sigma0(alpha, theta),
        Type2Variant::Primes => (4.0 - 3.0 * alpha) / 3.0,
    };
    Window {
        lower: alpha - 1.0,
        upper,
    }
}

/// Exponents of the Harman sieve at one α, all at ε = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HarmanParams {
    pub theta: f64,
    pub alpha: f64,
    pub d_exp: f64,
    pub sigma0: f64,
    pub sigma: f64,
    pub gamma_exp: f64,
    pub xi: f64,
}

impl HarmanParams {
    pub fn new(alpha: f64, theta: f64) -> Result<Self> {
        check_theta(theta)?;
        if !(1.0..1.5).contains(&alpha) {
            return domain(format!("alpha must lie in [1, 1.5), got {alpha}"));
        }
        Ok(Self::at(alpha, theta))
    }

    // Unchecked, for integrands that only visit valid α.
    pub(crate) fn at(alpha: f64, theta: f64) -> Self {
        let d_exp = type1_ceiling(alpha, theta);
        let s0 = sigma0(alpha, theta);
        Self {
            theta,
            alpha,
            d_exp,
            sigma0: s0,
            sigma: ((4.0 - 3.0 * alpha) / 3.0).max(s0),
            gamma_exp: s0,
            xi: d_exp + 1.0 - alpha,
        }
    }
}

pub fn check_theta(theta: f64) -> Result<()> {
    if (0.0..=THETA_KIM_SARNAK + 1e-15).contains(&theta) {
        Ok(())
    } else {
        domain(format!("theta must lie in [0, 7/32], got {theta}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fig2Row {
    pub alpha: f64,
    pub type1_ceiling: f64,
    pub type2_upper_sf: f64,
    pub type2_upper_pr: f64,
    pub type2_lower: f64,
}

/// Boundary curves of the Type I and Type II ranges. θ = 0 gives the
/// conditional curves, where the square-free upper bound is (2 − α)/3.
pub fn fig2_boundaries(theta: f64, alphas: &[f64]) -> Result<Vec<Fig2Row>> {
    check_theta(theta)?;
    alphas
        .iter()
        .map(|&alpha| {
            if !(1.0 - 1e-12..=1.4 + 1e-12).contains(&alpha) {
                return domain(format!("alpha grid must lie in [1, 1.4], got {alpha}"));
            }
            Ok(Fig2Row {
                alpha,
                type1_ceiling: type1_ceiling(alpha, theta),
                type2_upper_sf: type2_window(alpha, theta, Type2Variant::Squarefree).upper,
                type2_upper_pr: type2_window(alpha, theta, Type2Variant::Primes).upper,
                type2_lower: alpha - 1.0,
            })
        })
        .collect()
}

/// `points` equally spaced α values from 1 to 1.4 inclusive.
pub fn fig2_grid(points: usize) -> Vec<f64> {
    let n = points.max(2);
    (0..n).map(|i| 1.0 + 0.4 * i as f64 / (n - 1) as f64).collect()
}

pub fn write_fig2_csv<W: Write>(rows: &[Fig2Row], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(["alpha", "type1_ceiling", "type2_upper_sf", "type2_upper_pr", "alpha_minus_1"])?;
    for r in rows {
        w.write_record([
            sig10(r.alpha),
            sig10(r.type1_ceiling),
            sig10(r.type2_upper_sf),
            sig10(r.type2_upper_pr),
            sig10(r.type2_lower),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    const T: f64 = THETA_KIM_SARNAK;

    #[test]
    fn type1_examples() {
        assert!((type1_ceiling(1.4, T) - 44.4 / 93.0).abs() < 1e-12);
        assert!((type1_ceiling_7_32(1.4) - 44.4 / 93.0).abs() < 1e-12);
        assert_eq!(type1_ceiling(1.25, T), 0.5);
        for a in [1.0, 1.2, 1.4] {
            assert_eq!(type1_ceiling(a, 0.0), 0.5);
        }
    }

    #[test]
    fn type2_examples() {
        let w = type2_window(1.0, T, Type2Variant::Squarefree);
        assert_eq!(w.lower, 0.0);
        assert!((w.upper - 25.0 / 82.0).abs() < 1e-12);
        let w = type2_window(1.4, T, Type2Variant::Primes);
        assert!(w.is_empty());
        // The prime window is the wider one below 136/129.
        let a = 136.0 / 129.0;
        assert!(((4.0 - 3.0 * a) / 3.0 - sigma0(a, T)).abs() < 1e-12);
    }

    #[test]
    fn params_invariants() {
        let p = HarmanParams::new(1.25, T).unwrap();
        assert_eq!(p.d_exp, 0.5);
        assert!((2.0 * (1.0 - T * 1.25) / (4.0 - 5.0 * T) - 0.5).abs() < 1e-15);
        for i in 0..50 {
            let a = 1.0 + 0.5 * i as f64 / 50.0;
            assert!(sigma0(a, T) > 0.0);
        }
        assert!(HarmanParams::new(1.5, T).is_err());
        assert!(HarmanParams::new(1.1, 0.3).is_err());
    }

    #[test]
    fn fig2_examples() {
        let rows = fig2_boundaries(T, &[1.0, 1.25]).unwrap();
        assert_eq!(rows[0].type1_ceiling, 0.5);
        assert!((rows[0].type2_upper_sf - 25.0 / 82.0).abs() < 1e-12);
        assert!((rows[0].type2_upper_pr - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(rows[0].type2_lower, 0.0);
        assert_eq!(rows[1].type1_ceiling, 0.5);
        let cond = fig2_boundaries(0.0, &[1.0]).unwrap();
        assert!((cond[0].type2_upper_sf - 1.0 / 3.0).abs() < 1e-12);
        assert!(fig2_boundaries(T, &[1.5]).is_err());
    }

    #[test]
    fn monotone_curves() {
        let rows = fig2_boundaries(T, &fig2_grid(401)).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].type1_ceiling <= w[0].type1_ceiling);
            assert!(w[1].type2_upper_sf < w[0].type2_upper_sf);
            assert!(w[1].type2_upper_pr <= w[0].type2_upper_pr);
        }
    }
}
