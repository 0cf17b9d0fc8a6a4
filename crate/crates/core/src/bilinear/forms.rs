use super::sequence::{e, WindowedSequence};
use crate::approx::t_mn;
use crate::arith::{gcd, inv_mod, KloostermanKernel, Modulus};
use crate::error::{domain, Result};
use crate::hyperbola::DiscreteInterval;
use num_complex::Complex64;
use serde::Serialize;

/// Largest |supp a|·|supp b| evaluated term by term.
pub const DIRECT_LIMIT: u64 = 1_000_000;

/// Σ_m a_m Σ_n b_n S(sm, sn; c), one Kloosterman sum per pair.
pub fn bilinear_form_direct(
    a: &WindowedSequence,
    b: &WindowedSequence,
    scalar: u64,
    c: &Modulus,
) -> Result<Complex64> {
    let work = a.len() as u64 * b.len() as u64;
    if work > DIRECT_LIMIT {
        return domain(format!(
            "direct evaluation of {work} pairs exceeds {DIRECT_LIMIT}; use the dual form"
        ));
    }
    let kernel = KloostermanKernel::new(c);
    let q = c.get() as i128;
    let s = scalar as i128;
    let mut acc = Complex64::new(0.0, 0.0);
    for (m, am) in a.iter() {
        let sm = (s * m as i128).rem_euclid(q) as i64;
        let mut inner = Complex64::new(0.0, 0.0);
        for (n, bn) in b.iter() {
            let sn = (s * n as i128).rem_euclid(q) as i64;
            inner += bn * kernel.value(sm, sn);
        }
        acc += am * inner;
    }
    Ok(acc)
}

/// Table of â(k/c) for k in [0, c), each entry a direct sum.
fn transform_table(a: &WindowedSequence, c: u64) -> Vec<Complex64> {
    let mut table = vec![Complex64::new(0.0, 0.0); c as usize];
    for (k, slot) in table.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, am) in a.iter() {
            let r = (m as i128 * k as i128).rem_euclid(c as i128) as f64;
            acc += am * e(-r / c as f64);
        }
        *slot = acc;
    }
    table
}

/// Σ_{x unit mod c} â(sx/c)·b̂(s x̄/c).
///
/// Expanding S(sm, sn; c) and summing over m and n first gives â(−sx/c)
/// b̂(−s x̄/c); replacing x by −x removes the signs.
pub fn bilinear_form_dual(
    a: &WindowedSequence,
    b: &WindowedSequence,
    scalar: u64,
    c: &Modulus,
) -> Result<Complex64> {
    let q = c.get();
    if q > 100_000 {
        return domain(format!("dual form needs c <= 100000, got {q}"));
    }
    if a.is_empty() || b.is_empty() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let ta = transform_table(a, q);
    let tb = transform_table(b, q);
    let s = scalar % q.max(1);
    let mut acc = Complex64::new(0.0, 0.0);
    for x in 0..q {
        if let Some(xb) = inv_mod(x, q) {
            let i = (s as u128 * x as u128 % q as u128) as usize;
            let j = (s as u128 * xb as u128 % q as u128) as usize;
            acc += ta[i] * tb[j];
        }
    }
    Ok(acc)
}

/// One evaluation of |Σ e(mα) Σ e(nβ) S(sm, sn; c)| against c·T_{M,N}(α, β) + (s, c)·MN.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prop35Sample {
    pub c: u64,
    pub scalar: u64,
    pub alpha: f64,
    pub beta: f64,
    pub m_len: u64,
    pub n_len: u64,
    pub form_abs: f64,
    pub bound: f64,
    pub ratio: f64,
}

pub fn bound_ratio_prop35(
    a: (f64, DiscreteInterval),
    b: (f64, DiscreteInterval),
    scalar: u64,
    c: &Modulus,
) -> Result<Prop35Sample> {
    let (alpha, i) = a;
    let (beta, j) = b;
    let q = c.get();
    let (m, n) = (i.len, j.len);
    if m < 1 || n < 1 || m > 4 * q || n > 4 * q {
        return domain(format!("need 1 <= M, N <= 4c, got M={m}, N={n}, c={q}"));
    }
    let sa = WindowedSequence::phase(alpha, i)?;
    let sb = WindowedSequence::phase(beta, j)?;
    let form = bilinear_form_dual(&sa, &sb, scalar, c)?;
    let t = t_mn(m as f64, n as f64, alpha, beta)?;
    let bound = q as f64 * t + gcd(scalar % q, q) as f64 * (m * n) as f64;
    let form_abs = form.norm();
    Ok(Prop35Sample {
        c: q,
        scalar,
        alpha,
        beta,
        m_len: m,
        n_len: n,
        form_abs,
        bound,
        ratio: form_abs / bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::kloosterman_sum;

    fn md(c: u64) -> Modulus {
        Modulus::new(c).unwrap()
    }

    #[test]
    fn singleton() {
        let d = WindowedSequence::delta(1);
        let v = bilinear_form_direct(&d, &d, 1, &md(3)).unwrap();
        assert!((v - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        let w = bilinear_form_dual(&d, &d, 1, &md(3)).unwrap();
        assert!((w - v).norm() < 1e-12);
    }

    #[test]
    fn four_pairs() {
        let a = WindowedSequence::phase(0.0, DiscreteInterval::closed(1, 2)).unwrap();
        let c = md(5);
        let expect: f64 = (1..=2)
            .flat_map(|m| (1..=2).map(move |n| (m, n)))
            .map(|(m, n)| kloosterman_sum(m, n, &c))
            .sum();
        let v = bilinear_form_direct(&a, &a, 1, &c).unwrap();
        assert!((v.re - expect).abs() < 1e-12 && v.im.abs() < 1e-12);
    }

    #[test]
    fn zero_and_empty() {
        let z = WindowedSequence::custom(0, vec![Complex64::new(0.0, 0.0); 5]).unwrap();
        let d = WindowedSequence::delta(2);
        assert_eq!(bilinear_form_direct(&z, &d, 1, &md(7)).unwrap().norm(), 0.0);
        let e = WindowedSequence::empty();
        assert_eq!(bilinear_form_dual(&e, &d, 1, &md(7)).unwrap().norm(), 0.0);
    }

    #[test]
    fn duality_small_moduli() {
        for c in 1..=50u64 {
            let m = md(c);
            let a = WindowedSequence::phase(0.17, DiscreteInterval::new(-3, 9)).unwrap();
            let b = WindowedSequence::phase(0.61, DiscreteInterval::new(2, 7)).unwrap();
            for s in [1, 2, 6] {
                let x = bilinear_form_direct(&a, &b, s, &m).unwrap();
                let y = bilinear_form_dual(&a, &b, s, &m).unwrap();
                assert!((x - y).norm() <= 1e-9 * (1.0 + x.norm()), "c={c} s={s}");
            }
        }
    }

    #[test]
    fn constant_sequences_are_ramanujan_sums() {
        // With a = b = 1 on [1, c], â vanishes off ξ = 0, so only x with
        // sx ≡ 0 and s x̄ ≡ 0 survive; for s = 1 and c > 1 nothing survives.
        for c in 2..30u64 {
            let a = WindowedSequence::phase(0.0, DiscreteInterval::closed(1, c as i64)).unwrap();
            let v = bilinear_form_dual(&a, &a, 1, &md(c)).unwrap();
            let brute = bilinear_form_direct(&a, &a, 1, &md(c)).unwrap();
            assert!(v.norm() < 1e-8 && brute.norm() < 1e-8, "c={c}");
        }
    }

    #[test]
    fn prop35_examples() {
        let iv = DiscreteInterval::closed(1, 50);
        let c = md(101);
        let r = bound_ratio_prop35((0.0, iv), (0.0, iv), 1, &c).unwrap();
        assert!(r.ratio <= 8.0 * (1.0 + 101f64.ln()));
        let p = DiscreteInterval::new(5, 1);
        let r = bound_ratio_prop35((0.3, p), (0.9, p), 1, &c).unwrap();
        assert!(r.ratio <= 1.0);
        let iv = DiscreteInterval::closed(1, 20);
        let r = bound_ratio_prop35((0.5, iv), (0.5, iv), 2, &md(64)).unwrap();
        assert!(r.ratio.is_finite() && r.bound > 0.0);
    }
}
