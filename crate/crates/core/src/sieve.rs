//! Buchstab's ω and the linear-sieve functions F and f on a uniform grid.

use crate::error::{domain, Result};
use crate::fmt::sig10;
use serde::Serialize;
use std::io::Write;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Error scale step² that each tabulated value is expected to meet.
pub const ERROR_CONST: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SieveTable {
    pub step: f64,
    pub u_max: f64,
    pub euler_gamma: f64,
    #[serde(skip)]
    pub omega: Vec<f64>,
    #[serde(skip)]
    pub big_f: Vec<f64>,
    #[serde(skip)]
    pub small_f: Vec<f64>,
}

// Running trapezoid integral ∫_1^{u_i} of the values pushed so far.
struct Cumulative {
    h: f64,
    acc: Vec<f64>,
}

impl Cumulative {
    fn new(h: f64, n: usize) -> Self {
        let mut acc = Vec::with_capacity(n);
        acc.push(0.0);
        Self { h, acc }
    }

    fn extend(&mut self, prev: f64, next: f64) {
        let last = *self.acc.last().expect("seeded with 0");
        self.acc.push(last + 0.5 * self.h * (prev + next));
    }
}

/// Integrates the three delay equations forward from u = 1.
///
/// ω = 1/u on [1, 2] and u·ω(u) = 1 + ∫_1^{u−1} ω beyond. F = 2e^γ/s on
/// [1, 3] and f = 0 on [1, 2]; after that s·F(s) = 2e^γ + ∫_1^{s−1} f and
/// s·f(s) = ∫_1^{s−1} F. The step must divide 1 so the unit delay lands on
/// grid nodes.
pub fn build_table(step: f64, u_max: f64) -> Result<SieveTable> {
    if !(step > 0.0 && step <= 1e-4) {
        return domain(format!("step {step} is too coarse; need 0 < step <= 1e-4"));
    }
    if !(u_max >= 10.0 && u_max.is_finite()) {
        return domain(format!("u_max {u_max} must be at least 10"));
    }
    let lag_f = 1.0 / step;
    let lag = lag_f.round() as usize;
    if (lag_f - lag as f64).abs() > 1e-6 {
        return domain(format!("1/step must be an integer, got 1/{step} = {lag_f}"));
    }
    let h = 1.0 / lag as f64;
    let n = ((u_max - 1.0) * lag as f64).round() as usize + 1;
    let u = |i: usize| 1.0 + i as f64 * h;
    let two_eg = 2.0 * EULER_GAMMA.exp();

    let mut omega = Vec::with_capacity(n);
    let mut big_f = Vec::with_capacity(n);
    let mut small_f = Vec::with_capacity(n);
    let mut i_omega = Cumulative::new(h, n);
    let mut i_big = Cumulative::new(h, n);
    let mut i_small = Cumulative::new(h, n);
    for i in 0..n {
        let ui = u(i);
        let w = if i <= lag { 1.0 / ui } else { (1.0 + i_omega.acc[i - lag]) / ui };
        let bf = if i <= 2 * lag { two_eg / ui } else { (two_eg + i_small.acc[i - lag]) / ui };
        let sf = if i <= lag { 0.0 } else { i_big.acc[i - lag] / ui };
        if i > 0 {
            i_omega.extend(omega[i - 1], w);
            i_big.extend(big_f[i - 1], bf);
            i_small.extend(small_f[i - 1], sf);
        }
        omega.push(w);
        big_f.push(bf);
        small_f.push(sf);
    }
    Ok(SieveTable {
        step: h,
        u_max: u(n - 1),
        euler_gamma: EULER_GAMMA,
        omega,
        big_f,
        small_f,
    })
}

impl SieveTable {
    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    pub fn node(&self, i: usize) -> f64 {
        1.0 + i as f64 * self.step
    }

    pub fn claimed_error(&self) -> f64 {
        ERROR_CONST * self.step * self.step
    }

    fn interp(&self, values: &[f64], u: f64) -> f64 {
        let x = (u - 1.0) / self.step;
        let i = (x.floor() as usize).min(values.len() - 2);
        let t = x - i as f64;
        values[i] * (1.0 - t) + values[i + 1] * t
    }

    fn check(&self, u: f64) -> Result<()> {
        if u >= 1.0 - 1e-12 && u <= self.u_max + 1e-12 {
            Ok(())
        } else {
            domain(format!("argument {u} outside the table range [1, {}]", self.u_max))
        }
    }

    pub fn omega_at(&self, u: f64) -> Result<f64> {
        self.check(u)?;
        Ok(self.interp(&self.omega, u.max(1.0)))
    }

    #[allow(non_snake_case)]
    pub fn F_at(&self, s: f64) -> Result<f64> {
        self.check(s)?;
        Ok(self.interp(&self.big_f, s.max(1.0)))
    }

    pub fn f_at(&self, s: f64) -> Result<f64> {
        self.check(s)?;
        Ok(self.interp(&self.small_f, s.max(1.0)))
    }

    /// ω extended by 0 below 1, for integrands. Panics past `u_max`.
    pub fn omega(&self, u: f64) -> f64 {
        if u < 1.0 {
            return 0.0;
        }
        assert!(u <= self.u_max + 1e-12, "omega({u}) beyond table end {}", self.u_max);
        self.interp(&self.omega, u)
    }

    /// Largest difference at shared nodes against a table with half the step.
    pub fn richardson_gap(&self, finer: &SieveTable) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.len() {
            let j = 2 * i;
            if j >= finer.len() {
                break;
            }
            worst = worst
                .max((self.omega[i] - finer.omega[j]).abs())
                .max((self.big_f[i] - finer.big_f[j]).abs())
                .max((self.small_f[i] - finer.small_f[j]).abs());
        }
        worst
    }

    /// Writes `u,omega,F,f` rows, every `stride`-th node.
    pub fn write_csv<W: Write>(&self, out: W, stride: usize) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["u", "omega", "F", "f"])?;
        for i in (0..self.len()).step_by(stride.max(1)) {
            w.write_record([
                sig10(self.node(i)),
                sig10(self.omega[i]),
                sig10(self.big_f[i]),
                sig10(self.small_f[i]),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    fn table() -> &'static SieveTable {
        static T: OnceLock<SieveTable> = OnceLock::new();
        T.get_or_init(|| build_table(1e-4, 12.0).unwrap())
    }

    #[test]
    fn examples() {
        let t = table();
        let eg = EULER_GAMMA.exp();
        assert!((t.omega_at(1.5).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!((t.omega_at(2.0).unwrap() - 0.5).abs() < 1e-12);
        assert!((t.omega_at(2.5).unwrap() - (1.0 + 1.5f64.ln()) / 2.5).abs() < 1e-8);
        assert!((t.F_at(2.0).unwrap() - eg).abs() < 1e-12);
        assert!((t.F_at(3.0).unwrap() - 2.0 * eg / 3.0).abs() < 1e-12);
        assert!((t.f_at(3.0).unwrap() - 2.0 * eg * 2f64.ln() / 3.0).abs() < 1e-8);
        assert!((t.omega_at(10.0).unwrap() - (-EULER_GAMMA).exp()).abs() < 1e-4);
    }

    #[test]
    fn closed_forms_on_initial_ranges() {
        let t = table();
        let eg = EULER_GAMMA.exp();
        for i in 0..t.len() {
            let u = t.node(i);
            if u <= 3.0 + 1e-12 {
                assert!((t.big_f[i] - 2.0 * eg / u).abs() < 1e-12);
            }
            if u <= 4.0 + 1e-12 {
                let f = if u <= 2.0 { 0.0 } else { 2.0 * eg * (u - 1.0).ln() / u };
                assert!((t.small_f[i] - f).abs() < 1e-8, "u={u}");
            }
            if (2.0..=3.0).contains(&u) {
                assert!((t.omega[i] - (1.0 + (u - 1.0).ln()) / u).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn sieve_shape() {
        let t = table();
        let start = ((2.0 - 1.0) / t.step).round() as usize;
        // Past s ≈ 10 both functions are within the discretization error of 1.
        let tol = t.claimed_error();
        for i in start..t.len() - 1 {
            assert!(t.big_f[i + 1] <= t.big_f[i] + tol);
            assert!(t.small_f[i + 1] >= t.small_f[i] - tol);
            assert!(t.small_f[i] <= 1.0 + tol && t.big_f[i] >= 1.0 - tol);
        }
        let (f8, s8) = (t.F_at(8.0).unwrap(), t.f_at(8.0).unwrap());
        assert!(f8 - s8 <= 1e-2 && (f8 - 1.0).abs() <= 1e-2 && (s8 - 1.0).abs() <= 1e-2);
        for i in 0..t.len() {
            if t.node(i) >= 8.0 {
                assert!((t.omega[i] - (-EULER_GAMMA).exp()).abs() <= 1e-3);
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(build_table(1e-3, 12.0).is_err());
        assert!(build_table(1e-4, 5.0).is_err());
        assert!(build_table(3e-5, 12.0).is_err());
        assert!(table().omega_at(0.5).is_err());
        assert!(table().omega_at(13.0).is_err());
    }
}
