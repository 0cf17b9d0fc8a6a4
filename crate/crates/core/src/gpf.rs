//! Largest prime factors of n² + 1 and the arithmetic set-up around them.

use crate::arith::{factorize, is_prime, rho, sqrt_minus_one_mod, Modulus};
use crate::bilinear::{progression_sum, SmoothWindow};
use crate::error::{domain, Result};
use crate::fmt::sig10;
use crate::par;
use serde::Serialize;
use std::io::Write;

pub const SCAN_LIMIT: u64 = 10_000_000;
pub const EXPONENT_LEVELS: [f64; 4] = [1.0, 1.1, 1.2, 1.3];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRecord {
    pub n: u64,
    pub value: u64,
    pub gpf: u64,
    /// log P⁺(n² + 1) / log n, absent for n = 1.
    pub exponent: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSummary {
    pub lo: u64,
    pub hi: u64,
    pub count: u64,
    /// Records without an exponent (n = 1).
    pub flagged: u64,
    /// (c, share of records with exponent > c)
    pub fractions: Vec<(f64, f64)>,
    pub max_exponent: f64,
    /// n whose factorization broke gpf | n² + 1 or had an odd prime ≢ 1 (mod 4).
    pub violations: Vec<u64>,
    #[serde(skip)]
    pub records: Vec<ScanRecord>,
}

fn record(n: u64) -> (ScanRecord, bool) {
    let value = n * n + 1;
    let f = factorize(value);
    let gpf = f.gpf();
    let ok = value % gpf == 0
        && f.reconstruct() == value as u128
        && f.factors.iter().all(|&(p, _)| p == 2 || p % 4 == 1);
    let exponent = (n > 1).then(|| (gpf as f64).ln() / (n as f64).ln());
    (ScanRecord { n, value, gpf, exponent }, ok)
}

/// Factors n² + 1 for lo ≤ n ≤ hi.
pub fn scan(lo: u64, hi: u64, keep_records: bool) -> Result<ScanSummary> {
    if lo < 1 || hi < lo {
        return domain(format!("need 1 <= lo <= hi, got lo={lo}, hi={hi}"));
    }
    if hi > SCAN_LIMIT {
        return domain(format!("hi = {hi} exceeds the scan limit {SCAN_LIMIT}"));
    }
    let total = (hi - lo + 1) as usize;
    let chunks = par::chunks(total, 256);
    let parts = par::map_slice(&chunks, |r| {
        let mut recs = Vec::new();
        let mut above = [0u64; 4];
        let (mut flagged, mut max_e) = (0u64, 0.0f64);
        let mut bad = Vec::new();
        for i in r.clone() {
            let (rec, ok) = record(lo + i as u64);
            if !ok {
                bad.push(rec.n);
            }
            match rec.exponent {
                Some(e) => {
                    max_e = max_e.max(e);
                    for (k, &c) in EXPONENT_LEVELS.iter().enumerate() {
                        above[k] += u64::from(e > c);
                    }
                }
                None => flagged += 1,
            }
            if keep_records {
                recs.push(rec);
            }
        }
        (recs, above, flagged, max_e, bad)
    });
    let mut out = ScanSummary {
        lo,
        hi,
        count: total as u64,
        flagged: 0,
        fractions: Vec::new(),
        max_exponent: 0.0,
        violations: Vec::new(),
        records: Vec::new(),
    };
    let mut above = [0u64; 4];
    for (recs, a, flagged, max_e, bad) in parts {
        out.records.extend(recs);
        for k in 0..4 {
            above[k] += a[k];
        }
        out.flagged += flagged;
        out.max_exponent = out.max_exponent.max(max_e);
        out.violations.extend(bad);
    }
    let denom = (out.count - out.flagged).max(1) as f64;
    out.fractions = EXPONENT_LEVELS
        .iter()
        .zip(above)
        .map(|(&c, a)| (c, a as f64 / denom))
        .collect();
    Ok(out)
}

pub fn write_scan_csv<W: Write>(records: &[ScanRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(["n", "value", "gpf", "exponent"])?;
    for r in records {
        w.write_record([
            r.n.to_string(),
            r.value.to_string(),
            r.gpf.to_string(),
            r.exponent.map(sig10).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChebyshevIdentity {
    pub x: u64,
    /// Σ_{x<n≤2x} Σ_{d | n²+1} Λ(d), from factorizations.
    pub lhs: f64,
    /// Σ_{x<n≤2x} log(n² + 1)
    pub rhs: f64,
    pub rel_err: f64,
    /// ∫_x^{2x} log(t² + 1) dt
    pub integral: f64,
    /// 2x log x + (4 log 2 − 2)x
    pub asymptotic: f64,
}

pub fn chebyshev_identity(x: u64) -> Result<ChebyshevIdentity> {
    if !(1..=100_000).contains(&x) {
        return domain(format!("x must lie in [1, 100000], got {x}"));
    }
    let terms = par::map_range((x + 1) as usize..(2 * x + 1) as usize, |n| {
        let v = (n as u64) * (n as u64) + 1;
        (factorize(v).von_mangoldt_sum(), (v as f64).ln())
    });
    let (lhs, rhs) = terms.iter().fold((0.0, 0.0), |(a, b), &(l, r)| (a + l, b + r));
    let anti = |t: f64| t * (t * t + 1.0).ln() - 2.0 * t + 2.0 * t.atan();
    let xf = x as f64;
    Ok(ChebyshevIdentity {
        x,
        lhs,
        rhs,
        rel_err: (lhs - rhs).abs() / rhs.abs(),
        integral: anti(2.0 * xf) - anti(xf),
        asymptotic: 2.0 * xf * xf.ln() + (4.0 * 2f64.ln() - 2.0) * xf,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AqCount {
    pub q: u64,
    pub a_q: f64,
    pub main_term: f64,
}

/// |A_q| = Σ_{n² ≡ −1 (q)} Φ(n/x) against X·ρ(q)/q with X = x∫Φ.
pub fn count_aq(q: &Modulus, x: f64, window: &SmoothWindow) -> Result<AqCount> {
    if q.get() > 1_000_000 {
        return domain(format!("q must be at most 1e6, got {}", q.get()));
    }
    if !(x >= 1.0 && x <= 1e7) {
        return domain(format!("x must lie in [1, 1e7], got {x}"));
    }
    let a_q = sqrt_minus_one_mod(q)
        .into_iter()
        .map(|nu| progression_sum(window, x, q, nu as i64))
        .sum();
    let main_term = x * window.integral() * rho(q) as f64 / q.get() as f64;
    Ok(AqCount {
        q: q.get(),
        a_q,
        main_term,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypeOneAverage {
    pub x: f64,
    pub q_lo: u64,
    pub q_hi: u64,
    pub moduli: u64,
    pub mean_abs_error: f64,
    pub ceiling: f64,
    pub within: bool,
}

/// Mean of |A_q − Xρ(q)/q| over primes q ≡ 1 (mod 4) in [x^0.4, 2x^0.4].
pub fn type1_average(x: f64, window: &SmoothWindow) -> Result<TypeOneAverage> {
    let q_lo = x.powf(0.4).ceil() as u64;
    let q_hi = (2.0 * x.powf(0.4)).floor() as u64;
    let qs: Vec<u64> = (q_lo..=q_hi).filter(|&q| q % 4 == 1 && is_prime(q)).collect();
    let errs = par::map_slice(&qs, |&q| {
        let m = Modulus::new(q).expect("q >= 1");
        count_aq(&m, x, window).map(|c| (c.a_q - c.main_term).abs())
    });
    let errs = errs.into_iter().collect::<Result<Vec<_>>>()?;
    let mean = errs.iter().sum::<f64>() / errs.len().max(1) as f64;
    let ceiling = x.powf(0.9);
    Ok(TypeOneAverage {
        x,
        q_lo,
        q_hi,
        moduli: qs.len() as u64,
        mean_abs_error: mean,
        ceiling,
        within: mean <= ceiling,
    })
}
