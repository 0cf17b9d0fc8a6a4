use super::{gcd, inv_mod, Modulus};
use crate::par;
use serde::Serialize;
use std::f64::consts::TAU;

struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    fn new() -> Self {
        Self { sum: 0.0, comp: 0.0 }
    }

    #[inline]
    fn add(&mut self, v: f64) {
        let y = v - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }
}

/// S(m, n; c) = Σ_{x mod c, (x,c)=1} e((mx + n x̄)/c).
///
/// The imaginary part cancels under x ↦ −x. It is still accumulated and
/// checked against 1e-9·φ(c).
pub fn kloosterman_sum(m: i64, n: i64, c: &Modulus) -> f64 {
    let q = c.get();
    if q == 1 {
        return 1.0;
    }
    let (m, n) = (c.reduce(m), c.reduce(n));
    let mut re = Kahan::new();
    let mut im = Kahan::new();
    for x in 1..q {
        let Some(xb) = inv_mod(x, q) else { continue };
        let k = ((m as u128 * x as u128 + n as u128 * xb as u128) % q as u128) as f64;
        let (s, co) = (TAU * k / q as f64).sin_cos();
        re.add(co);
        im.add(s);
    }
    assert!(
        im.sum.abs() <= 1e-9 * c.phi() as f64,
        "imaginary part {} did not cancel",
        im.sum
    );
    re.sum
}

/// Ramanujan sum c_q(n) = S(0, n; q), computed from μ and the divisors of gcd(n, q).
pub fn ramanujan_sum(n: i64, q: &Modulus) -> i64 {
    let g = q.gcd_with(n);
    // c_q(n) = Σ_{d | gcd(n,q)} d μ(q/d)
    let mut total = 0i64;
    let mut d = 1;
    while d * d <= g {
        if g % d == 0 {
            total += d as i64 * mobius(q, q.get() / d);
            let e = g / d;
            if e != d {
                total += e as i64 * mobius(q, q.get() / e);
            }
        }
        d += 1;
    }
    total
}

// μ(k) for a divisor k of the modulus, read off its cached factorization.
fn mobius(q: &Modulus, mut k: u64) -> i64 {
    let mut sign = 1;
    for &(p, _) in q.factors() {
        if k % p == 0 {
            k /= p;
            if k % p == 0 {
                return 0;
            }
            sign = -sign;
        }
    }
    sign
}

/// Precomputed tables for evaluating many sums to one modulus.
///
/// Only units x < c/2 are stored; their partners c − x contribute the same
/// cosine, so each row is twice a half sum and purely real by construction.
pub struct KloostermanKernel {
    c: u64,
    cos: Vec<f64>,
    half_units: Vec<(u32, u32)>,
}

impl KloostermanKernel {
    pub fn new(c: &Modulus) -> Self {
        let q = c.get();
        assert!(q <= u32::MAX as u64, "kernel tables need c < 2^32");
        let cos = (0..q).map(|k| (TAU * k as f64 / q as f64).cos()).collect();
        let half_units = (1..q)
            .filter(|&x| 2 * x < q)
            .filter_map(|x| inv_mod(x, q).map(|xb| (x as u32, xb as u32)))
            .collect();
        Self { c: q, cos, half_units }
    }

    pub fn modulus(&self) -> u64 {
        self.c
    }

    /// S(m, n; c) for every n in [0, c).
    pub fn row(&self, m: u64) -> Vec<f64> {
        let c = self.c as usize;
        if c <= 2 {
            // Units are {0} mod 1 and {1} mod 2, neither of which pairs off.
            return (0..c)
                .map(|n| if c == 1 { 1.0 } else { self.cos[(m as usize + n) % 2] })
                .collect();
        }
        let m = (m % self.c) as usize;
        let mut acc = vec![0.0; c];
        for &(x, xb) in &self.half_units {
            let step = xb as usize;
            let mut idx = m * x as usize % c;
            for slot in acc.iter_mut() {
                *slot += self.cos[idx];
                idx += step;
                if idx >= c {
                    idx -= c;
                }
            }
        }
        for v in &mut acc {
            *v *= 2.0;
        }
        acc
    }

    pub fn value(&self, m: i64, n: i64) -> f64 {
        let c = self.c;
        if c == 1 {
            return 1.0;
        }
        let (m, n) = (super::reduce(m, c) as usize, super::reduce(n, c) as usize);
        if c == 2 {
            return self.cos[(m + n) % 2];
        }
        let cu = c as usize;
        let s: f64 = self
            .half_units
            .iter()
            .map(|&(x, xb)| self.cos[(m * x as usize + n * xb as usize) % cu])
            .sum();
        2.0 * s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeilMargin {
    pub abs_sum: f64,
    pub bound: f64,
}

impl WeilMargin {
    pub fn ratio(&self) -> f64 {
        self.abs_sum / self.bound
    }

    pub fn holds(&self) -> bool {
        self.abs_sum <= self.bound + 1e-9
    }
}

/// The Weil bound τ(c)·(m,n,c)^{1/2}·c^{1/2}, or the Ramanujan bound (n,c) when m ≡ 0.
pub fn weil_bound(m: i64, n: i64, c: &Modulus) -> f64 {
    let (mr, nr) = (c.reduce(m), c.reduce(n));
    if mr == 0 {
        return gcd(nr, c.get()) as f64;
    }
    let g = gcd(gcd(mr, nr), c.get());
    c.tau() as f64 * (g as f64).sqrt() * (c.get() as f64).sqrt()
}

pub fn weil_bound_margin(m: i64, n: i64, c: &Modulus) -> WeilMargin {
    WeilMargin {
        abs_sum: kloosterman_sum(m, n, c).abs(),
        bound: weil_bound(m, n, c),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeilSweep {
    pub c_max: u64,
    pub checked: u64,
    pub violations: Vec<(u64, u64, u64)>,
    pub max_ratio: f64,
    pub worst: (u64, u64, u64),
}

impl WeilSweep {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks |S(m,n;c)| against the Weil bound for all 1 ≤ c ≤ c_max and m, n ∈ [0, c).
///
/// Rows are evaluated for n ≥ m only and each value is tested against the
/// bounds for both (m, n) and (n, m), which differ when one index is zero.
pub fn weil_sweep(c_max: u64) -> WeilSweep {
    let per_c = par::map_range(1..c_max as usize + 1, |c| {
        let modulus = Modulus::new(c as u64).expect("c >= 1");
        let kernel = KloostermanKernel::new(&modulus);
        let c = c as u64;
        let mut checked = 0u64;
        let mut violations = Vec::new();
        let mut max_ratio = 0.0f64;
        let mut worst = (0, 0, c);
        for m in 0..c {
            let row = kernel.row(m);
            for n in m..c {
                let s = row[n as usize].abs();
                let pairs: &[(u64, u64)] = if m == n { &[(m, n)] } else { &[(m, n), (n, m)] };
                for &(a, b) in pairs {
                    checked += 1;
                    let bound = weil_bound(a as i64, b as i64, &modulus);
                    let ratio = s / bound;
                    if ratio > max_ratio {
                        max_ratio = ratio;
                        worst = (a, b, c);
                    }
                    if s > bound + 1e-9 {
                        violations.push((a, b, c));
                    }
                }
            }
        }
        (checked, violations, max_ratio, worst)
    });
    let mut out = WeilSweep {
        c_max,
        checked: 0,
        violations: Vec::new(),
        max_ratio: 0.0,
        worst: (0, 0, 1),
    };
    for (checked, violations, max_ratio, worst) in per_c {
        out.checked += checked;
        out.violations.extend(violations);
        if max_ratio > out.max_ratio {
            out.max_ratio = max_ratio;
            out.worst = worst;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(c: u64) -> Modulus {
        Modulus::new(c).unwrap()
    }

    #[test]
    fn examples() {
        assert!((kloosterman_sum(1, 1, &md(2)) - 1.0).abs() < 1e-12);
        assert!((kloosterman_sum(0, 1, &md(5)) + 1.0).abs() < 1e-12);
        assert!((kloosterman_sum(1, 1, &md(3)) + 1.0).abs() < 1e-12);
        assert_eq!(kloosterman_sum(0, 0, &md(1)), 1.0);
    }

    #[test]
    fn margin_examples() {
        let w = weil_bound_margin(1, 1, &md(3));
        assert!((w.abs_sum - 1.0).abs() < 1e-12);
        assert!((w.bound - 2.0 * 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(weil_bound_margin(0, 6, &md(4)).bound, 2.0);
        let w = weil_bound_margin(0, 1, &md(1));
        assert_eq!((w.abs_sum, w.bound), (1.0, 1.0));
    }

    #[test]
    fn ramanujan_matches_direct() {
        for q in 1..120u64 {
            let m = md(q);
            for n in -5..(2 * q as i64) {
                let direct = kloosterman_sum(0, n, &m);
                assert!((direct - ramanujan_sum(n, &m) as f64).abs() < 1e-8, "q={q} n={n}");
            }
        }
    }

    #[test]
    fn kernel_rows_match_direct() {
        for c in 1..80u64 {
            let m = md(c);
            let k = KloostermanKernel::new(&m);
            for a in 0..c {
                let row = k.row(a);
                for b in 0..c {
                    let d = kloosterman_sum(a as i64, b as i64, &m);
                    assert!((row[b as usize] - d).abs() < 1e-9, "c={c} m={a} n={b}");
                    assert!((k.value(a as i64, b as i64) - d).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn small_sweep_is_clean() {
        let s = weil_sweep(60);
        assert!(s.passed(), "{:?}", &s.violations[..s.violations.len().min(5)]);
        assert_eq!(s.checked, (1..=60u64).map(|c| c * c).sum::<u64>());
        assert!(s.max_ratio <= 1.0 + 1e-9);
    }
}
