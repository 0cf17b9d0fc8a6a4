use super::integrals::{g1, g2, g3, g4, g5, g6, GammaRule, IntegralConfig, IntegralResult};
use super::params::{check_theta, THETA_KIM_SARNAK};
use super::thresholds::{thresholds, Thresholds};
use crate::error::{domain, Result};
use crate::fmt::round_json;
use crate::sieve::{build_table, SieveTable};
use serde::Serialize;

/// Upper bounds for G₁…G₅ and the lower bound for G₆ as published.
pub const PUBLISHED_G: [f64; 6] = [0.02093, 0.10528, 0.07319, 0.00163, 0.25116, 0.02789];
pub const PUBLISHED_DEFICIT: f64 = 0.59097;
pub const PUBLISHED_BUDGET_FLOOR: f64 = 0.257406;
pub const PUBLISHED_OMEGA_BAR: f64 = 1.30008;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HarmanConfig {
    pub theta: f64,
    pub samples: u64,
    pub seed: u64,
    pub tol: f64,
    pub gamma_rule: GammaRule,
    pub table_step: f64,
    pub table_umax: f64,
}

impl Default for HarmanConfig {
    fn default() -> Self {
        Self {
            theta: THETA_KIM_SARNAK,
            samples: 10_000_000,
            seed: 1,
            tol: 1e-6,
            gamma_rule: GammaRule::Width,
            table_step: 1e-4,
            table_umax: 20.0,
        }
    }
}

impl HarmanConfig {
    fn integral_config(&self) -> IntegralConfig {
        IntegralConfig {
            theta: self.theta,
            tol: self.tol,
            samples: self.samples,
            seed: self.seed,
            gamma_rule: self.gamma_rule,
        }
    }
}

/// Deficit, budget and exponent assembled from six G values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Assembly {
    pub deficit: f64,
    pub budget: f64,
    pub omega_bar: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarmanReport {
    pub config: HarmanConfig,
    pub thresholds: Thresholds,
    pub g: Vec<IntegralResult>,
    pub deficit: f64,
    pub budget: f64,
    pub omega_bar: f64,
}

impl HarmanReport {
    pub fn values(&self) -> [f64; 6] {
        std::array::from_fn(|i| self.g[i].value)
    }

    /// JSON with every float rounded to 10 significant digits.
    pub fn to_json(&self) -> Result<String> {
        let mut v = serde_json::to_value(self)?;
        round_json(&mut v);
        Ok(serde_json::to_string_pretty(&v)?)
    }
}

/// G₁ … G₆ at ε = 0, in order.
pub fn compute_all(table: &SieveTable, cfg: &HarmanConfig, th: &Thresholds) -> Result<Vec<IntegralResult>> {
    let ic = cfg.integral_config();
    Ok(vec![
        g1(table, &ic, th)?,
        g2(table, &ic, th)?,
        g3(table, &ic, th)?,
        g4(table, &ic, th)?,
        g5(th),
        g6(table, &ic, th)?,
    ])
}

pub fn compute_g(index: usize, table: &SieveTable, cfg: &HarmanConfig) -> Result<IntegralResult> {
    let th = thresholds(cfg.theta)?;
    let ic = cfg.integral_config();
    match index {
        1 => g1(table, &ic, &th),
        2 => g2(table, &ic, &th),
        3 => g3(table, &ic, &th),
        4 => g4(table, &ic, &th),
        5 => Ok(g5(&th)),
        6 => g6(table, &ic, &th),
        _ => domain(format!("G index must be 1..=6, got {index}")),
    }
}

/// (t₃ − 1) + G₁ + … + G₅ − G₆
pub fn deficit(g: &[f64; 6], th: &Thresholds) -> f64 {
    (th.t3.value - 1.0) + g[..5].iter().sum::<f64>() - g[5]
}

// ∫_{t5}^{w} (4 − 5θ)α/(1 − θα) dα, with the 4α form when θ = 0.
fn upper_tail(theta: f64, from: f64, to: f64) -> f64 {
    if theta == 0.0 {
        return 2.0 * (to * to - from * from);
    }
    let anti = |a: f64| (4.0 - 5.0 * theta) * (-a / theta - (1.0 - theta * a).ln() / (theta * theta));
    anti(to) - anti(from)
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    // f increasing with f(lo) ≤ 0 ≤ f(hi)
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Largest ω̄ for which the prime contributions up to x^ω̄ fit under X log x.
///
/// Past t₄ the cost is 4α up to t₅ and (4 − 5θ)α/(1 − θα) beyond. A
/// negative budget places ω̄ inside [t₄, t₅]; a deficit of 1 or more gives
/// ω̄ = t₄.
pub fn solve_omega_bar(deficit: f64, th: &Thresholds) -> (f64, f64) {
    let theta = th.theta;
    let t4 = th.t4.value;
    let t5 = th.t5.value;
    let room = 1.0 - deficit;
    if room <= 0.0 {
        let budget = if t5.is_finite() { room - 2.0 * (t5 * t5 - t4 * t4) } else { room };
        return (budget, t4);
    }
    if !t5.is_finite() {
        // θ = 0: 4α all the way.
        return (room, (t4 * t4 + room / 2.0).sqrt());
    }
    let budget = room - 2.0 * (t5 * t5 - t4 * t4);
    if budget <= 0.0 {
        return (budget, (t4 * t4 + room / 2.0).sqrt());
    }
    let cap = (1.0 / theta) * (1.0 - 1e-12);
    let omega = bisect(|w| upper_tail(theta, t5, w) - budget, t5, cap);
    (budget, omega)
}

pub fn assemble(g: &[f64; 6], th: &Thresholds) -> Assembly {
    let d = deficit(g, th);
    let (budget, omega_bar) = solve_omega_bar(d, th);
    Assembly {
        deficit: d,
        budget,
        omega_bar,
    }
}

pub fn harman_report(cfg: &HarmanConfig) -> Result<HarmanReport> {
    check_theta(cfg.theta)?;
    if !(cfg.tol > 0.0) {
        return domain("tolerance must be positive");
    }
    let table = build_table(cfg.table_step, cfg.table_umax)?;
    harman_report_with(&table, cfg)
}

pub fn harman_report_with(table: &SieveTable, cfg: &HarmanConfig) -> Result<HarmanReport> {
    let th = thresholds(cfg.theta)?;
    let g = compute_all(table, cfg, &th)?;
    let values: [f64; 6] = std::array::from_fn(|i| g[i].value);
    let a = assemble(&values, &th);
    Ok(HarmanReport {
        config: *cfg,
        thresholds: th,
        g,
        deficit: a.deficit,
        budget: a.budget,
        omega_bar: a.omega_bar,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn th() -> Thresholds {
        thresholds(THETA_KIM_SARNAK).unwrap()
    }

    #[test]
    fn published_assembly() {
        let a = assemble(&PUBLISHED_G, &th());
        assert!((a.deficit - PUBLISHED_DEFICIT).abs() < 1e-5);
        assert!(a.budget >= PUBLISHED_BUDGET_FLOOR - 3e-6);
        assert!((a.omega_bar - PUBLISHED_OMEGA_BAR).abs() < 5e-4, "{}", a.omega_bar);
    }

    #[test]
    fn budget_from_published_deficit() {
        let (budget, omega) = solve_omega_bar(PUBLISHED_DEFICIT, &th());
        assert!((budget - 0.257408).abs() < 1e-5, "{budget}");
        assert!((1.2999..=1.3002).contains(&omega), "{omega}");
    }

    #[test]
    fn edge_budgets() {
        let t = th();
        let (t4, t5) = (t.t4.value, t.t5.value);
        let zero = 1.0 - 2.0 * (t5 * t5 - t4 * t4);
        let (b, w) = solve_omega_bar(zero, &t);
        assert!(b.abs() < 1e-15 && (w - 1.25).abs() < 1e-12);
        let (_, w) = solve_omega_bar(1.5, &t);
        assert_eq!(w, t4);
        let (b, w) = solve_omega_bar(0.9, &t);
        assert!(b < 0.0 && w > t4 && w < t5);
    }

    #[test]
    fn omega_bar_decreases_in_theta() {
        let mut last = f64::INFINITY;
        for k in 1..=14 {
            let theta = THETA_KIM_SARNAK * k as f64 / 14.0;
            let t = thresholds(theta).unwrap();
            // Fixed budget, so only the tail integrand moves with θ.
            let budget = 0.2;
            let w = bisect(|w| upper_tail(theta, t.t5.value, w) - budget, t.t5.value, 1.0 / theta - 1e-9);
            let w = w - t.t5.value;
            assert!(w < last, "theta={theta}");
            last = w;
        }
    }

    #[test]
    fn tail_matches_quadrature() {
        let theta = THETA_KIM_SARNAK;
        let f = |a: f64| (4.0 - 5.0 * theta) * a / (1.0 - theta * a);
        let q = super::super::quadrature::integrate(&f, 1.25, 1.3, &[], 1e-13);
        assert!((q.value - upper_tail(theta, 1.25, 1.3)).abs() < 1e-12);
    }
}
