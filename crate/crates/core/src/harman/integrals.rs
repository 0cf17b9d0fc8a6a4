use super::params::{sigma0, HarmanParams};
use super::quadrature::integrate;
use super::thresholds::{branch_points, Thresholds};
use crate::error::{domain, Result};
use crate::par;
use crate::sieve::SieveTable;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Method {
    NestedAdaptive { evals: u64 },
    MonteCarlo { seed: u64, n_samples: u64, strata: u64 },
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegralResult {
    pub value: f64,
    pub abs_error: f64,
    pub method: Method,
}

/// Lower limit for β₃ in the four-fold region.
///
/// Read literally as γ = σ₀ the region is empty, because σ₀ > α − 1 on the
/// whole range. `Width` uses σ₀ − (α − 1) instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum GammaRule {
    #[default]
    Width,
    Sigma0,
}

impl GammaRule {
    pub fn gamma(self, alpha: f64, theta: f64) -> f64 {
        let s0 = sigma0(alpha, theta);
        match self {
            GammaRule::Width => s0 - (alpha - 1.0),
            GammaRule::Sigma0 => s0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegralConfig {
    pub theta: f64,
    pub tol: f64,
    pub samples: u64,
    pub seed: u64,
    pub gamma_rule: GammaRule,
}

/// Number of α-strata used by the Monte Carlo estimate of G₄.
pub const G4_STRATA: u64 = 1000;

type Limits = fn(&HarmanParams) -> (f64, f64);

// ∫ α ∫_{lo(α)}^{hi(α)} ω(α/β − 1) dβ/β² dα over [a, b], for each limit pair.
fn nested(table: &SieveTable, cfg: &IntegralConfig, a: f64, b: f64, limits: &[Limits], extra: &[f64]) -> Result<IntegralResult> {
    if !(b > a) {
        return Ok(IntegralResult {
            value: 0.0,
            abs_error: 0.0,
            method: Method::NestedAdaptive { evals: 0 },
        });
    }
    check_coverage(table, cfg.theta, a, b, limits)?;
    let theta = cfg.theta;
    let inner_tol = cfg.tol * 1e-2;
    let evals = std::cell::Cell::new(0u64);
    let inner_err = std::cell::Cell::new(0.0f64);
    let outer = |alpha: f64| {
        let p = HarmanParams::at(alpha, theta);
        let mut total = 0.0;
        for lim in limits {
            let (lo, hi) = lim(&p);
            if hi <= lo {
                continue;
            }
            // ω has kinks where α/β − 1 is an integer.
            let kinks: Vec<f64> = (2..=25).map(|k| alpha / k as f64).collect();
            let f = |beta: f64| table.omega(alpha / beta - 1.0) / (beta * beta);
            let q = integrate(&f, lo, hi, &kinks, inner_tol);
            evals.set(evals.get() + q.evals);
            inner_err.set(inner_err.get().max(q.abs_error * alpha));
            total += q.value;
        }
        alpha * total
    };
    let mut breaks = branch_points(theta, a, b);
    breaks.extend_from_slice(extra);
    let q = integrate(&outer, a, b, &breaks, cfg.tol);
    Ok(IntegralResult {
        value: q.value,
        abs_error: q.abs_error + inner_err.get() * (b - a),
        method: Method::NestedAdaptive {
            evals: q.evals + evals.get(),
        },
    })
}

fn check_coverage(table: &SieveTable, theta: f64, a: f64, b: f64, limits: &[Limits]) -> Result<()> {
    let mut need = 1.0f64;
    for i in 0..=2000 {
        let alpha = a + (b - a) * i as f64 / 2000.0;
        let p = HarmanParams::at(alpha, theta);
        for lim in limits {
            let (lo, hi) = lim(&p);
            if hi > lo {
                need = need.max(alpha / lo - 1.0);
            }
        }
    }
    if need > table.u_max {
        return domain(format!(
            "sieve table ends at u = {} but the integrand needs u = {need:.4}",
            table.u_max
        ));
    }
    Ok(())
}

pub fn g1(table: &SieveTable, cfg: &IntegralConfig, th: &Thresholds) -> Result<IntegralResult> {
    nested(
        table,
        cfg,
        1.0,
        th.t1.value,
        &[
            |p| (p.sigma, p.alpha - 2.0 * p.sigma),
            |p| (p.xi, p.alpha / 2.0),
        ],
        &[th.prime_window.value],
    )
}

pub fn g2(table: &SieveTable, cfg: &IntegralConfig, th: &Thresholds) -> Result<IntegralResult> {
    nested(table, cfg, th.t1.value, th.t2.value, &[|p| (p.sigma, p.alpha / 2.0)], &[th.prime_window.value])
}

pub fn g3(table: &SieveTable, cfg: &IntegralConfig, th: &Thresholds) -> Result<IntegralResult> {
    nested(table, cfg, th.t2.value, th.t3.value, &[|p| (p.sigma0, p.alpha / 2.0)], &[])
}

pub fn g6(table: &SieveTable, cfg: &IntegralConfig, th: &Thresholds) -> Result<IntegralResult> {
    nested(table, cfg, th.t3.value, th.t4.value, &[|p| (p.alpha - 1.0, p.sigma0)], &[])
}

/// 4∫α dα over [t₃, t₄] = 2(t₄² − t₃²).
pub fn g5(th: &Thresholds) -> IntegralResult {
    let (a, b) = (th.t3.value, th.t4.value);
    IntegralResult {
        value: if b > a { 2.0 * (b * b - a * a) } else { 0.0 },
        abs_error: 0.0,
        method: Method::ClosedForm,
    }
}

/// G₅ through the sieve table: 4α = α·F(1/(2(α−1)))/(e^γ(α−1)) while
/// 1/(2(α−1)) ≤ 3.
pub fn g5_via_sieve(table: &SieveTable, cfg: &IntegralConfig, th: &Thresholds) -> Result<IntegralResult> {
    let (a, b) = (th.t3.value, th.t4.value);
    if !(b > a) {
        return Ok(g5(th));
    }
    let eg = table.euler_gamma.exp();
    let f = |alpha: f64| {
        let s = 1.0 / (2.0 * (alpha - 1.0));
        alpha * table.F_at(s).expect("s in [1, 3]") / (eg * (alpha - 1.0))
    };
    let q = integrate(&f, a, b, &[], cfg.tol * 1e-2);
    Ok(IntegralResult {
        value: q.value,
        abs_error: q.abs_error,
        method: Method::NestedAdaptive { evals: q.evals },
    })
}

// Integrand of G₄ at one point, zero off the region.
fn g4_point(table: &SieveTable, theta: f64, alpha: f64, b: [f64; 3]) -> f64 {
    let [b1, b2, b3] = b;
    let top = alpha - 1.0;
    let s0 = sigma0(alpha, theta);
    let excluded = |s: f64| s >= top && s <= s0;
    if excluded(b1 + b2) || excluded(b1 + b3) || excluded(b2 + b3) || excluded(b1 + b2 + b3) {
        return 0.0;
    }
    alpha * table.omega((alpha - b1 - b2 - b3) / b3) / (b1 * b2 * b3 * b3)
}

/// Stratified Monte Carlo estimate of G₄ over α ∈ (t₂, t₃).
///
/// Each α-stratum draws from its own ChaCha8 stream of `seed`, so the
/// estimate does not depend on how strata are scheduled. Within a stratum,
/// α is uniform and (β₁, β₂, β₃) are three sorted uniforms on (γ, α − 1),
/// weighted by the simplex volume (α − 1 − γ)³/6.
pub fn g4(table: &SieveTable, cfg: &IntegralConfig, th: &Thresholds) -> Result<IntegralResult> {
    let (a, b) = (th.t2.value, th.t3.value);
    let n = cfg.samples;
    if n == 0 {
        return domain("G4 needs at least one Monte Carlo sample");
    }
    let strata = G4_STRATA.min(n);
    let method = Method::MonteCarlo {
        seed: cfg.seed,
        n_samples: n,
        strata,
    };
    if !(b > a) {
        return Ok(IntegralResult {
            value: 0.0,
            abs_error: 0.0,
            method,
        });
    }
    let gamma_lo = cfg.gamma_rule.gamma(b, cfg.theta).min(cfg.gamma_rule.gamma(a, cfg.theta));
    if gamma_lo > 0.0 && b / gamma_lo > table.u_max {
        return domain(format!("sieve table ends at u = {} but G4 needs u = {}", table.u_max, b / gamma_lo));
    }
    let width = (b - a) / strata as f64;
    let per = par::map_range(0..strata as usize, |j| {
        let count = n / strata + u64::from((j as u64) < n % strata);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(j as u64);
        let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
        for _ in 0..count {
            let alpha = a + (j as f64 + rng.gen::<f64>()) * width;
            let gamma = cfg.gamma_rule.gamma(alpha, cfg.theta);
            let top = alpha - 1.0;
            let mut u = [rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()];
            if top <= gamma || gamma <= 0.0 {
                continue;
            }
            let span = top - gamma;
            u.sort_by(|x, y| y.total_cmp(x));
            let beta = u.map(|v| gamma + span * v);
            let v = span.powi(3) / 6.0 * g4_point(table, cfg.theta, alpha, beta);
            sum += v;
            sum_sq += v * v;
        }
        let m = count as f64;
        let mean = sum / m;
        let var = if count > 1 { (sum_sq / m - mean * mean).max(0.0) * m / (m - 1.0) } else { 0.0 };
        (width * mean, width * width * var / m)
    });
    let (value, variance) = per.iter().fold((0.0, 0.0), |(s, v), &(a, b)| (s + a, v + b));
    Ok(IntegralResult {
        value,
        abs_error: 3.0 * variance.sqrt(),
        method,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harman::params::THETA_KIM_SARNAK;
    use crate::harman::thresholds::thresholds;
    use crate::sieve::build_table;
    use std::sync::OnceLock;

    fn table() -> &'static SieveTable {
        static T: OnceLock<SieveTable> = OnceLock::new();
        T.get_or_init(|| build_table(1e-4, 20.0).unwrap())
    }

    fn cfg(samples: u64, seed: u64) -> IntegralConfig {
        IntegralConfig {
            theta: THETA_KIM_SARNAK,
            tol: 1e-6,
            samples,
            seed,
            gamma_rule: GammaRule::Width,
        }
    }

    // Reference values from nested scipy quad at ε = 0.
    #[test]
    fn nested_values() {
        let th = thresholds(THETA_KIM_SARNAK).unwrap();
        let c = cfg(1, 1);
        let t = table();
        for (g, expect) in [
            (g1(t, &c, &th).unwrap(), 0.020834),
            (g2(t, &c, &th).unwrap(), 0.105088),
            (g3(t, &c, &th).unwrap(), 0.072985),
            (g6(t, &c, &th).unwrap(), 0.028031),
        ] {
            assert!((g.value - expect).abs() < 2e-6, "{} vs {expect}", g.value);
            assert!(g.abs_error < 1e-5);
        }
        let g5v = g5(&th).value;
        let closed = 2.0 * ((139.0f64 / 114.0).powi(2) - (7.0f64 / 6.0).powi(2));
        assert!((g5v - closed).abs() < 1e-12);
        assert!((g5_via_sieve(t, &c, &th).unwrap().value - closed).abs() < 1e-7);
    }

    #[test]
    fn monte_carlo_consistency() {
        let th = thresholds(THETA_KIM_SARNAK).unwrap();
        let t = table();
        let a = g4(t, &cfg(200_000, 1), &th).unwrap();
        let b = g4(t, &cfg(400_000, 1), &th).unwrap();
        let c = g4(t, &cfg(200_000, 2), &th).unwrap();
        assert!((a.value - b.value).abs() <= 3.0 * a.abs_error.max(b.abs_error));
        assert!((a.value - c.value).abs() <= a.abs_error + c.abs_error);
        assert_eq!(a, g4(t, &cfg(200_000, 1), &th).unwrap());
    }

    #[test]
    fn literal_gamma_region_is_empty() {
        let th = thresholds(THETA_KIM_SARNAK).unwrap();
        let mut c = cfg(10_000, 1);
        c.gamma_rule = GammaRule::Sigma0;
        assert_eq!(g4(table(), &c, &th).unwrap().value, 0.0);
    }

    #[test]
    fn collapsed_range_is_zero() {
        let mut th = thresholds(THETA_KIM_SARNAK).unwrap();
        th.t2.value = th.t1.value - 0.01;
        let r = g2(table(), &cfg(1, 1), &th).unwrap();
        assert_eq!(r.value, 0.0);
    }
}
