//! Exact modular arithmetic: squarefree factorization, Chinese remaindering
//! and the Legendre/Jacobi symbols.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// An odd squarefree modulus `m` together with its sorted odd prime
/// factorization `p_1 < ... < p_n`.
///
/// Construction rejects even, non-squarefree and degenerate moduli; every
/// other module in the crate relies on these invariants. Immutable after
/// construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Modulus {
    m: u64,
    primes: Vec<u64>,
}

impl Modulus {
    pub fn new(m: u64) -> Result<Self> {
        factor_squarefree(m)
    }

    pub fn value(&self) -> u64 {
        self.m
    }

    /// Sorted odd prime divisors of `m`.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Number of odd prime divisors.
    pub fn n(&self) -> usize {
        self.primes.len()
    }

    pub fn is_prime(&self) -> bool {
        self.primes.len() == 1
    }

    /// Reduce a (possibly negative) integer into `[0, m)`.
    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.m as i64) as u64
    }

    /// All primes congruent to `r` mod 4.
    pub fn all_primes_are(&self, r: u64) -> bool {
        self.primes.iter().all(|p| p % 4 == r)
    }
}

impl std::fmt::Display for Modulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.m)
    }
}

/// Factor an odd squarefree `m >= 3` by trial division.
///
/// Desk-scale only; anything beyond ~10^12 will be slow but stays correct.
pub fn factor_squarefree(m: u64) -> Result<Modulus> {
    if m % 2 == 0 {
        return Err(Error::EvenModulus(m));
    }
    if m < 3 {
        return Err(Error::UnitModulus(m));
    }
    let mut primes = Vec::new();
    let mut rem = m;
    let mut d: u64 = 3;
    while d.saturating_mul(d) <= rem {
        if rem % d == 0 {
            rem /= d;
            if rem % d == 0 {
                return Err(Error::NotSquarefree(m, d));
            }
            primes.push(d);
        }
        d += 2;
    }
    if rem > 1 {
        primes.push(rem);
    }
    Ok(Modulus { m, primes })
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `a^e mod n` (n odd, n < 2^63).
pub fn mod_pow(a: u64, mut e: u64, n: u64) -> u64 {
    let mut base = (a % n) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    while e != 0 {
        if e & 1 == 1 {
            acc = acc * base % n;
        }
        base = base * base % n;
        e >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo the odd prime `p`.
pub fn mod_inv(a: u64, p: u64) -> u64 {
    mod_pow(a, p - 2, p)
}

/// Legendre symbol `(a|p)` for an odd prime `p`, by Euler's criterion.
pub fn legendre(a: i64, p: u64) -> i32 {
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    let e = mod_pow(r, (p - 1) / 2, p);
    if e == 1 {
        1
    } else {
        -1
    }
}

/// Jacobi symbol `(a|m)` as the product of Legendre symbols over the prime
/// divisors of `m`; zero iff `gcd(a, m) > 1`.
pub fn jacobi(a: i64, m: &Modulus) -> i32 {
    m.primes().iter().map(|&p| legendre(a, p)).product()
}

/// Smallest positive quadratic nonresidue modulo the odd prime `p`.
pub fn least_nonresidue(p: u64) -> u64 {
    (2..p)
        .find(|&a| legendre(a as i64, p) == -1)
        .expect("every odd prime > 1 has a nonresidue")
}

/// Combine residues `x ≡ r_i (mod p_i)` into the unique residue modulo the
/// product of the given pairwise-distinct primes. Returns `(x, product)`.
pub fn crt_combine(components: &[(u64, u64)]) -> Result<(u64, u64)> {
    if components.is_empty() {
        return Err(Error::DomainError("empty CRT input".into()));
    }
    for (i, &(r, p)) in components.iter().enumerate() {
        if r >= p {
            return Err(Error::DomainError(format!(
                "residue {r} not reduced modulo {p}"
            )));
        }
        if components[..i].iter().any(|&(_, q)| q == p) {
            return Err(Error::DuplicatePrime(p));
        }
    }
    let mut x: u128 = components[0].0 as u128;
    let mut modulus: u128 = components[0].1 as u128;
    for &(r, p) in &components[1..] {
        // x + modulus * t ≡ r (mod p)  =>  t ≡ (r - x) * modulus^{-1} (mod p)
        let m_mod_p = (modulus % p as u128) as u64;
        if gcd(m_mod_p, p) != 1 {
            return Err(Error::NonCoprime(m_mod_p, p));
        }
        let diff = (r as i64 - (x % p as u128) as i64).rem_euclid(p as i64) as u64;
        let t = (diff as u128 * mod_inv(m_mod_p, p) as u128 % p as u128) as u64;
        x += modulus * t as u128;
        modulus *= p as u128;
        if modulus > u64::MAX as u128 {
            return Err(Error::TooLarge(format!("CRT modulus exceeds u64")));
        }
    }
    Ok((x as u64, modulus as u64))
}
