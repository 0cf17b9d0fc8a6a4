use crate::error::{domain, Result};
use crate::hyperbola::DiscreteInterval;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;

pub const MAX_SUPPORT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SequenceKind {
    Phase { alpha: f64 },
    Dispersion { h: f64, ell1: u64, ell2: u64, alpha1: f64, alpha2: f64 },
    Custom,
}

/// Complex coefficients a_n on a discrete interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowedSequence {
    pub start: i64,
    #[serde(skip)]
    pub values: Vec<Complex64>,
    pub kind: SequenceKind,
}

#[inline]
pub fn e(x: f64) -> Complex64 {
    let f = x - x.floor();
    Complex64::from_polar(1.0, TAU * f)
}

impl WindowedSequence {
    pub fn new(start: i64, values: Vec<Complex64>, kind: SequenceKind) -> Result<Self> {
        if values.len() as u64 > MAX_SUPPORT {
            return domain(format!("support length {} exceeds {MAX_SUPPORT}", values.len()));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return domain("sequence values must be finite");
        }
        Ok(Self { start, values, kind })
    }

    pub fn custom(start: i64, values: Vec<Complex64>) -> Result<Self> {
        Self::new(start, values, SequenceKind::Custom)
    }

    /// a_m = e(mα) on the interval.
    pub fn phase(alpha: f64, support: DiscreteInterval) -> Result<Self> {
        if support.len > MAX_SUPPORT {
            return domain(format!("support length {} exceeds {MAX_SUPPORT}", support.len));
        }
        let values = (support.start..support.end())
            .map(|m| e(frac_product(m, alpha)))
            .collect();
        Self::new(support.start, values, SequenceKind::Phase { alpha })
    }

    pub fn delta(at: i64) -> Self {
        Self {
            start: at,
            values: vec![Complex64::new(1.0, 0.0)],
            kind: SequenceKind::Custom,
        }
    }

    pub fn empty() -> Self {
        Self {
            start: 0,
            values: Vec::new(),
            kind: SequenceKind::Custom,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn support(&self) -> DiscreteInterval {
        DiscreteInterval::new(self.start, self.values.len() as u64)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.start + i as i64, v))
    }

    pub fn get(&self, n: i64) -> Complex64 {
        let i = n - self.start;
        if i < 0 || i as usize >= self.values.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.values[i as usize]
        }
    }

    pub fn l2_squared(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    /// â(ξ) = Σ a_n e(−nξ), summed directly.
    pub fn transform_at(&self, xi: f64) -> Complex64 {
        self.iter().map(|(n, v)| v * e(-frac_product(n, xi))).sum()
    }
}

/// Fractional part of n·x, computed to keep precision for large n.
pub(crate) fn frac_product(n: i64, x: f64) -> f64 {
    let x = x - x.floor();
    let p = n as f64 * x;
    p - p.floor()
}
