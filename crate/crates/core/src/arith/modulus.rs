use super::{factorize, gcd, reduce};
use crate::error::{domain, Result};
use serde::Serialize;

/// A positive modulus with its factorization cached at construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Modulus {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl Modulus {
    pub const MAX: u64 = i64::MAX as u64;

    pub fn new(c: u64) -> Result<Self> {
        if c == 0 {
            return domain("modulus must be positive");
        }
        if c > Self::MAX {
            return domain(format!("modulus {c} exceeds 2^63 - 1"));
        }
        Ok(Self {
            value: c,
            factors: factorize(c).factors,
        })
    }

    #[inline]
    pub fn get(&self) -> u64 {
        self.value
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Euler's totient.
    pub fn phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    /// Number of divisors.
    pub fn tau(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    /// gcd(x, c) for a signed integer x, with gcd(0, c) = c.
    pub fn gcd_with(&self, x: i64) -> u64 {
        gcd(reduce(x, self.value), self.value)
    }

    pub fn reduce(&self, x: i64) -> u64 {
        reduce(x, self.value)
    }

    /// Prime powers p^e dividing c exactly.
    pub fn prime_powers(&self) -> impl Iterator<Item = (u64, u32, u64)> + '_ {
        self.factors.iter().map(|&(p, e)| (p, e, p.pow(e)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero() {
        assert!(Modulus::new(0).is_err());
        assert!(Modulus::new(u64::MAX).is_err());
    }

    #[test]
    fn totient_and_divisors() {
        for c in 1..500u64 {
            let m = Modulus::new(c).unwrap();
            let phi = (0..c).filter(|&x| gcd(x, c) == 1).count() as u64;
            let tau = (1..=c).filter(|d| c % d == 0).count() as u64;
            assert_eq!(m.phi(), phi, "c = {c}");
            assert_eq!(m.tau(), tau, "c = {c}");
            let prod: u64 = m.prime_powers().map(|(_, _, q)| q).product();
            assert_eq!(prod, c);
        }
    }

    #[test]
    fn gcd_convention() {
        let m = Modulus::new(12).unwrap();
        assert_eq!(m.gcd_with(0), 12);
        assert_eq!(m.gcd_with(-8), 4);
    }
}
