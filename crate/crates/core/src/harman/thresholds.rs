use super::params::check_theta;
use crate::error::{domain, Result};
use serde::Serialize;

/// a + b·α
#[derive(Debug, Clone, Copy, PartialEq)]
struct Affine {
    a: f64,
    b: f64,
}

/// Piecewise-affine expression in α built from maxima and sums.
#[derive(Debug, Clone)]
enum Expr {
    Affine(Affine),
    Max(Vec<Expr>),
    Sum(Vec<(f64, Expr)>),
}

impl Expr {
    fn lin(a: f64, b: f64) -> Self {
        Expr::Affine(Affine { a, b })
    }

    fn eval(&self, x: f64) -> f64 {
        match self {
            Expr::Affine(f) => f.a + f.b * x,
            Expr::Max(v) => v.iter().map(|e| e.eval(x)).fold(f64::NEG_INFINITY, f64::max),
            Expr::Sum(v) => v.iter().map(|(k, e)| k * e.eval(x)).sum(),
        }
    }

    /// Every affine function the expression can coincide with on some interval.
    fn pieces(&self) -> Vec<Affine> {
        match self {
            Expr::Affine(f) => vec![*f],
            Expr::Max(v) => v.iter().flat_map(|e| e.pieces()).collect(),
            Expr::Sum(v) => v.iter().fold(vec![Affine { a: 0.0, b: 0.0 }], |acc, (k, e)| {
                let p = e.pieces();
                acc.iter()
                    .flat_map(|s| {
                        p.iter().map(move |f| Affine {
                            a: s.a + k * f.a,
                            b: s.b + k * f.b,
                        })
                    })
                    .collect()
            }),
        }
    }
}

fn sigma0_expr(t: f64) -> Expr {
    Expr::Max(vec![
        Expr::lin(2.0 / (3.0 - 2.0 * t), -(1.0 + t) / (3.0 - 2.0 * t)),
        Expr::lin(2.0 * (1.0 - t) / (3.0 - t), -(1.0 - t) / (3.0 - t)),
    ])
}

fn sigma_expr(t: f64) -> Expr {
    Expr::Max(vec![Expr::lin(4.0 / 3.0, -1.0), sigma0_expr(t)])
}

/// Roots of lhs − rhs in [lo, hi], found piece by piece and kept when the
/// full expressions agree to `tol`.
fn solve(lhs: &Expr, rhs: &Expr, lo: f64, hi: f64, tol: f64) -> Vec<(f64, f64)> {
    let diff = Expr::Sum(vec![(1.0, lhs.clone()), (-1.0, rhs.clone())]);
    let mut roots: Vec<(f64, f64)> = diff
        .pieces()
        .into_iter()
        .filter(|p| p.b != 0.0)
        .map(|p| -p.a / p.b)
        .filter(|&x| x >= lo - 1e-15 && x <= hi + 1e-15)
        .map(|x| (x, (lhs.eval(x) - rhs.eval(x)).abs()))
        .filter(|&(_, r)| r <= tol)
        .collect();
    roots.sort_by(|a, b| a.0.total_cmp(&b.0));
    roots.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-13);
    roots
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Threshold {
    pub name: &'static str,
    pub equation: &'static str,
    pub value: f64,
    pub residual: f64,
}

/// Range boundaries of the sieve decomposition at a given θ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Thresholds {
    pub theta: f64,
    /// α = ξ + 2σ (25/24 at θ = 7/32)
    pub t1: Threshold,
    /// 2(α − 1) = σ₀ (228/203)
    pub t2: Threshold,
    /// 2(α − 1) = ξ with D = x^{1/2} (7/6)
    pub t3: Threshold,
    /// α − 1 = σ₀ (139/114)
    pub t4: Threshold,
    /// 1/2 = 2(1 − θα)/(4 − 5θ) (5/4)
    pub t5: Threshold,
    /// (4 − 3α)/3 = σ₀ (136/129)
    pub prime_window: Threshold,
}

pub const RESIDUAL_TOL: f64 = 1e-12;

fn unique(
    name: &'static str,
    equation: &'static str,
    lhs: &Expr,
    rhs: &Expr,
    lo: f64,
    hi: f64,
) -> Result<Threshold> {
    let roots = solve(lhs, rhs, lo, hi, RESIDUAL_TOL);
    match roots.as_slice() {
        [(value, residual)] => Ok(Threshold {
            name,
            equation,
            value: *value,
            residual: *residual,
        }),
        [] => domain(format!("no root of {equation} in [{lo}, {hi}]")),
        _ => domain(format!("{equation} has {} roots in [{lo}, {hi}]", roots.len())),
    }
}

pub fn thresholds(theta: f64) -> Result<Thresholds> {
    check_theta(theta)?;
    let t = theta;
    let alpha = Expr::lin(0.0, 1.0);
    let two_am1 = Expr::lin(-2.0, 2.0);
    let am1 = Expr::lin(-1.0, 1.0);
    // ξ with the D = x^{1/2} branch: 1/2 − (α − 1)
    let xi_half = Expr::lin(1.5, -1.0);
    let t1 = unique(
        "25/24",
        "alpha = xi + 2 sigma",
        &alpha,
        &Expr::Sum(vec![(1.0, xi_half.clone()), (2.0, sigma_expr(t))]),
        1.0,
        1.5,
    )?;
    let t2 = unique("228/203", "2(alpha - 1) = sigma0", &two_am1, &sigma0_expr(t), 1.0, 1.5)?;
    let t3 = unique("7/6", "2(alpha - 1) = xi", &two_am1, &xi_half, 1.0, 1.5)?;
    let t4 = unique("139/114", "alpha - 1 = sigma0", &am1, &sigma0_expr(t), 1.0, 1.5)?;
    let t5 = if t > 0.0 {
        // 4 − 5θ = 4(1 − θα) rearranges to α = 5θ/(4θ).
        let value = (5.0 * t) / (4.0 * t);
        let residual = (0.5 - 2.0 * (1.0 - t * value) / (4.0 - 5.0 * t)).abs();
        Threshold {
            name: "5/4",
            equation: "1/2 = 2(1 - theta alpha)/(4 - 5 theta)",
            value,
            residual,
        }
    } else {
        // D = x^{1/2} throughout; the Type I branch never switches.
        Threshold {
            name: "5/4",
            equation: "1/2 = 2(1 - theta alpha)/(4 - 5 theta)",
            value: f64::INFINITY,
            residual: 0.0,
        }
    };
    let first_branch = Expr::lin(2.0 / (3.0 - 2.0 * t), -(1.0 + t) / (3.0 - 2.0 * t));
    let prime_window = unique(
        "136/129",
        "(4 - 3 alpha)/3 = sigma0 (first branch)",
        &Expr::lin(4.0 / 3.0, -1.0),
        &first_branch,
        1.0,
        1.5,
    )?;
    Ok(Thresholds {
        theta,
        t1,
        t2,
        t3,
        t4,
        t5,
        prime_window,
    })
}

/// Points in [lo, hi] where σ₀ or σ switch branch; used as quadrature breakpoints.
pub fn branch_points(theta: f64, lo: f64, hi: f64) -> Vec<f64> {
    let t = theta;
    let s0 = sigma0_expr(t);
    let (a, b) = match &s0 {
        Expr::Max(v) => (v[0].clone(), v[1].clone()),
        _ => unreachable!(),
    };
    let mut out: Vec<f64> = solve(&a, &b, lo, hi, 1e-12)
        .into_iter()
        .chain(solve(&Expr::lin(4.0 / 3.0, -1.0), &s0, lo, hi, 1e-12))
        .map(|(x, _)| x)
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harman::params::{sigma0, THETA_KIM_SARNAK};

    #[test]
    fn named_values() {
        let t = thresholds(THETA_KIM_SARNAK).unwrap();
        let close = |x: f64, y: f64| (x - y).abs() < 1e-13;
        assert!(close(t.t1.value, 25.0 / 24.0));
        assert!(close(t.t2.value, 228.0 / 203.0));
        assert!(close(t.t3.value, 7.0 / 6.0));
        assert!(close(t.t4.value, 139.0 / 114.0));
        assert_eq!(t.t5.value, 1.25);
        assert!(close(t.prime_window.value, 136.0 / 129.0));
        for th in [&t.t1, &t.t2, &t.t3, &t.t4, &t.t5, &t.prime_window] {
            assert!(th.residual <= RESIDUAL_TOL);
        }
    }

    #[test]
    fn both_branches_meet_at_228_203() {
        let a = 228.0 / 203.0;
        let t = THETA_KIM_SARNAK;
        let first = (2.0 - (1.0 + t) * a) / (3.0 - 2.0 * t);
        let second = (1.0 - t) * (2.0 - a) / (3.0 - t);
        assert!((first - second).abs() < 1e-14);
        assert!((sigma0(a, t) - 50.0 / 203.0).abs() < 1e-14);
    }

    #[test]
    fn conditional_theta() {
        let t = thresholds(0.0).unwrap();
        assert!(t.t5.value.is_infinite());
        assert!((t.t4.value - 1.25).abs() < 1e-13);
    }
}
