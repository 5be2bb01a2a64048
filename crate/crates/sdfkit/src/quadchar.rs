//! Quadratic characters `χ_j` of the prime divisors of `m`, their products
//! `χ_D` over a subset `D` of prime indices, and the exact pair-sum
//! identities they satisfy.
//!
//! Everything here is computed in exact integer arithmetic; the closed forms
//! (`p - 1` on special pairs, `-1` otherwise) are contracts checked in tests,
//! not shortcuts taken by the implementation.

use crate::modarith::Modulus;
use crate::sdf::CandidateSet;
use crate::{Error, Result};

/// A product character `χ_D = ∏_{j∈D} χ_j` for a non-empty set `D` of
/// prime indices of a modulus.
///
/// Character values per selected prime are tabulated once so that repeated
/// evaluation (pair sums, `S_D`) costs one lookup per prime.
#[derive(Clone, Debug)]
pub struct CharProduct {
    modulus: Modulus,
    indices: Vec<usize>,
    p_d: u64,
    tables: Vec<Vec<i8>>,
}

impl CharProduct {
    /// `indices` are 1-based positions into the sorted prime list, matching
    /// the usual `D ⊆ {1..n}` convention.
    pub fn new(modulus: Modulus, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::DomainError("D must be non-empty".into()));
        }
        let mut idx: Vec<usize> = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        if idx.len() != indices.len() {
            return Err(Error::DomainError("duplicate index in D".into()));
        }
        if idx[0] == 0 || idx[idx.len() - 1] > modulus.n() {
            return Err(Error::DomainError(format!(
                "index out of range 1..={} in D",
                modulus.n()
            )));
        }
        let idx0: Vec<usize> = idx.iter().map(|&j| j - 1).collect();
        let mut p_d = 1u64;
        let mut tables = Vec::with_capacity(idx0.len());
        for &j in &idx0 {
            let p = modulus.primes()[j];
            p_d *= p;
            let mut table = vec![-1i8; p as usize];
            table[0] = 0;
            for y in 1..p {
                table[(y * y % p) as usize] = 1;
            }
            tables.push(table);
        }
        Ok(CharProduct {
            modulus,
            indices: idx0,
            p_d,
            tables,
        })
    }

    /// The full index set `D = {1..n}`.
    pub fn full(modulus: Modulus) -> Result<Self> {
        let all: Vec<usize> = (1..=modulus.n()).collect();
        CharProduct::new(modulus, &all)
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    /// Selected primes `p_j`, `j ∈ D`.
    pub fn primes(&self) -> Vec<u64> {
        self.indices
            .iter()
            .map(|&j| self.modulus.primes()[j])
            .collect()
    }

    /// `p_D = ∏_{j∈D} p_j`.
    pub fn p_d(&self) -> u64 {
        self.p_d
    }

    /// `d = |D|`.
    pub fn d(&self) -> usize {
        self.indices.len()
    }

    /// `χ_D(x) = ∏_{j∈D} χ_j(x)`; zero whenever some `p_j` divides `x`.
    pub fn chi(&self, x: i64) -> i32 {
        let mut prod = 1i32;
        for (t, &j) in self.tables.iter().zip(&self.indices) {
            let p = self.modulus.primes()[j];
            let v = t[x.rem_euclid(p as i64) as usize] as i32;
            if v == 0 {
                return 0;
            }
            prod *= v;
        }
        prod
    }
}

/// A pair `(b1, b2)` is special modulo `p` when `b1 ≡ b2 (mod p)`.
pub fn is_special_pair(b1: u64, b2: u64, p: u64) -> bool {
    b1 % p == b2 % p
}

/// `Σ_{a mod p} χ_p(a - b1) χ_p(a - b2)`, by direct evaluation.
///
/// Equals `p - 1` on special pairs and `-1` otherwise; that identity is the
/// contract this function is tested against, not how it computes.
pub fn inner_pair_sum(b1: u64, b2: u64, p: u64) -> i64 {
    let mut table = vec![-1i8; p as usize];
    table[0] = 0;
    for y in 1..p {
        table[(y * y % p) as usize] = 1;
    }
    let b1 = (b1 % p) as i64;
    let b2 = (b2 % p) as i64;
    (0..p as i64)
        .map(|a| {
            let x = table[(a - b1).rem_euclid(p as i64) as usize] as i64;
            let y = table[(a - b2).rem_euclid(p as i64) as usize] as i64;
            x * y
        })
        .sum()
}

/// `Σ_{a mod p_D} ∏_{j∈D} χ_j(a - b1) χ_j(a - b2)`, by direct evaluation
/// over a full period of `p_D`.
///
/// By CRT this factors as `∏_{j∈D} inner_pair_sum(b1, b2, p_j)`; the factored
/// form is the cross-check, not the implementation.
pub fn full_residue_pair_sum(b1: u64, b2: u64, cp: &CharProduct) -> i64 {
    let mut sum = 0i64;
    for a in 0..cp.p_d() as i64 {
        sum += (cp.chi(a - b1 as i64) * cp.chi(a - b2 as i64)) as i64;
    }
    sum
}

/// `S_D = Σ_{a∈A} |Σ_{b∈A} χ_D(a - b)|²`, exactly.
pub fn s_d(a: &CandidateSet, cp: &CharProduct) -> u64 {
    let elems = a.elements();
    let mut total: u64 = 0;
    for &x in elems {
        let inner: i64 = elems
            .iter()
            .map(|&b| cp.chi(x as i64 - b as i64) as i64)
            .sum();
        total += (inner * inner) as u64;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cp(m: u64, d: &[usize]) -> CharProduct {
        CharProduct::new(Modulus::new(m).unwrap(), d).unwrap()
    }

    #[test]
    fn chi_d_examples() {
        assert_eq!(cp(15, &[1, 2]).chi(2), 1); // (2|3)(2|5) = (-1)(-1)
        assert_eq!(cp(15, &[1]).chi(1), 1);
        assert_eq!(cp(15, &[2]).chi(1), 1);
        assert_eq!(cp(15, &[2]).chi(5), 0);
        assert_eq!(cp(15, &[1, 2]).chi(-13), 1); // -13 ≡ 2
    }

    #[test]
    fn char_product_rejects_bad_index_sets() {
        let m = Modulus::new(15).unwrap();
        assert!(CharProduct::new(m.clone(), &[]).is_err());
        assert!(CharProduct::new(m.clone(), &[3]).is_err());
        assert!(CharProduct::new(m.clone(), &[0]).is_err());
        assert!(CharProduct::new(m, &[1, 1]).is_err());
    }

    #[test]
    fn special_pairs() {
        assert!(is_special_pair(3, 18, 5));
        assert!(!is_special_pair(0, 1, 3));
        for p in [3u64, 5, 7] {
            assert!(is_special_pair(11, 11, p));
        }
    }

    #[test]
    fn inner_pair_sum_examples() {
        assert_eq!(inner_pair_sum(0, 0, 5), 4);
        assert_eq!(inner_pair_sum(0, 1, 5), -1);
        assert_eq!(inner_pair_sum(2, 9, 7), 6); // special: 9 ≡ 2 (mod 7)
    }

    #[test]
    fn full_residue_pair_sum_examples() {
        let c = cp(15, &[1, 2]);
        assert_eq!(full_residue_pair_sum(0, 0, &c), 8); // (3-1)(5-1)
        assert_eq!(full_residue_pair_sum(0, 1, &c), 1); // (-1)(-1)
        assert_eq!(full_residue_pair_sum(0, 5, &c), -4); // special mod 5 only
    }

    #[test]
    fn s_d_examples() {
        let m = Modulus::new(15).unwrap();
        let zero = CandidateSet::new(m.clone(), &[0]).unwrap();
        let empty = CandidateSet::new(m.clone(), &[]).unwrap();
        let pair = CandidateSet::new(m.clone(), &[0, 2]).unwrap();
        for d in [&[1usize][..], &[2], &[1, 2]] {
            let c = CharProduct::new(m.clone(), d).unwrap();
            assert_eq!(s_d(&zero, &c), 0);
            assert_eq!(s_d(&empty, &c), 0);
        }
        // Brute-forced by hand over the 2 x (2-term)^2 sum: for A = {0, 2}
        // both inner sums have absolute value 1 for every non-empty D.
        assert_eq!(s_d(&pair, &cp(15, &[1])), 2);
        assert_eq!(s_d(&pair, &cp(15, &[2])), 2);
        assert_eq!(s_d(&pair, &cp(15, &[1, 2])), 2);
    }

    // Orthogonality: χ_D sums to zero over a full period.
    #[test]
    fn chi_d_full_period_sum_is_zero() {
        for m in (3..=300u64).step_by(2) {
            let Ok(modulus) = Modulus::new(m) else {
                continue;
            };
            let n = modulus.n();
            for mask in 1u32..(1 << n) {
                let d: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).map(|j| j + 1).collect();
                let c = CharProduct::new(modulus.clone(), &d).unwrap();
                let total: i64 = (0..m as i64).map(|x| c.chi(x) as i64).sum();
                assert_eq!(total, 0, "m={m} D={d:?}");
            }
        }
    }
}
