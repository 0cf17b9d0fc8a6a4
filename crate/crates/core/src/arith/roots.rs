use super::{inv_mod, mul_mod, pow_mod, Modulus};

/// Square root of `a` modulo an odd prime `p` by Tonelli–Shanks.
///
/// The quadratic nonresidue is found by incrementing from 2, so the output
/// is deterministic. Returns `None` when `a` is a nonresidue.
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

// Roots of ν² ≡ −1 modulo p^e.
fn roots_prime_power(p: u64, e: u32) -> Vec<u64> {
    if p == 2 {
        return if e == 1 { vec![1] } else { vec![] };
    }
    if p % 4 == 3 {
        return vec![];
    }
    let mut r = sqrt_mod_prime(p - 1, p).expect("-1 is a residue for p = 1 mod 4");
    let mut pk = p;
    for _ in 1..e {
        // Hensel: r ← r − (r² + 1)/(2r) mod p^{k+1}
        let next = pk * p;
        let f = (mul_mod(r, r, next) + 1) % next;
        let inv = inv_mod(2 * r % next, next).expect("2r is a unit mod p^k");
        r = (r + next - mul_mod(f, inv, next)) % next;
        pk = next;
    }
    let mut v = vec![r, pk - r];
    v.sort_unstable();
    v
}

fn crt(r1: u64, m1: u64, r2: u64, m2: u64) -> u64 {
    let m = m1 as u128 * m2 as u128;
    let inv = inv_mod(m1 % m2, m2).expect("coprime moduli") as u128;
    let diff = (r2 as u128 + m2 as u128 - (r1 as u128 % m2 as u128)) % m2 as u128;
    let k = diff * inv % m2 as u128;
    ((r1 as u128 + m1 as u128 * k) % m) as u64
}

/// All ν ∈ [0, q) with ν² ≡ −1 (mod q), sorted.
pub fn sqrt_minus_one_mod(q: &Modulus) -> Vec<u64> {
    let mut acc = vec![0u64];
    let mut acc_mod = 1u64;
    for (p, e, pe) in q.prime_powers() {
        let local = roots_prime_power(p, e);
        if local.is_empty() {
            return vec![];
        }
        let mut next = Vec::with_capacity(acc.len() * local.len());
        for &a in &acc {
            for &b in &local {
                next.push(crt(a, acc_mod, b, pe));
            }
        }
        acc = next;
        acc_mod *= pe;
    }
    acc.sort_unstable();
    acc
}

/// ρ(q) = #{ν mod q : ν² ≡ −1}.
pub fn rho(q: &Modulus) -> usize {
    q.prime_powers()
        .map(|(p, e, _)| roots_prime_power(p, e).len())
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::is_prime;

    fn brute(q: u64) -> Vec<u64> {
        (0..q).filter(|&v| (v * v + 1) % q == 0).collect()
    }

    #[test]
    fn examples() {
        let m = |c| Modulus::new(c).unwrap();
        assert_eq!(sqrt_minus_one_mod(&m(5)), vec![2, 3]);
        assert_eq!(sqrt_minus_one_mod(&m(1)), vec![0]);
        assert_eq!(sqrt_minus_one_mod(&m(25)), vec![7, 18]);
        assert_eq!(rho(&m(10)), 2);
        assert_eq!(rho(&m(3)), 0);
        assert_eq!(rho(&m(65)), 4);
    }

    #[test]
    fn exhaustive_agreement() {
        for q in 1..=20_000u64 {
            let m = Modulus::new(q).unwrap();
            let got = sqrt_minus_one_mod(&m);
            assert_eq!(got, brute(q), "q = {q}");
            assert_eq!(rho(&m), got.len());
        }
    }

    #[test]
    fn rho_of_primes() {
        for p in (2..10_000u64).filter(|&p| is_prime(p)) {
            let r = rho(&Modulus::new(p).unwrap());
            assert_eq!(r == 2, p % 4 == 1, "p = {p}");
        }
    }

    #[test]
    fn tonelli_shanks_roots() {
        for p in (3..3000u64).filter(|&p| is_prime(p)) {
            for a in 1..p.min(60) {
                if let Some(r) = sqrt_mod_prime(a, p) {
                    assert_eq!(mul_mod(r, r, p), a);
                } else {
                    assert!((1..p).all(|x| x * x % p != a));
                }
            }
        }
    }
}
