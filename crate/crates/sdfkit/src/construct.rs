//! Explicit lower-bound constructions: CRT products of valid sets, the
//! monochromatic-clique pivot construction for primes `p ≡ 1 (mod 4)`, and
//! the pigeonhole collision certificate for the `n = 1` upper bound.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::modarith::{crt_combine, gcd, least_nonresidue, legendre, mod_inv, Modulus};
use crate::sdf::{is_valid_set, CandidateSet};
use crate::{Error, Result};

/// Combine valid sets `A_i ⊂ Z_{m_i}` over pairwise coprime moduli into
/// their CRT image in `Z_{∏ m_i}`: still valid, of size `∏ |A_i|`.
///
/// A difference of two product elements is a non-zero square only if it is a
/// square (possibly zero) modulo every prime, which forces a square or zero
/// difference in each coordinate; some coordinate pair is distinct, and its
/// factor set forbids that.
pub fn product_construct(parts: &[CandidateSet]) -> Result<CandidateSet> {
    if parts.is_empty() {
        return Err(Error::InvalidPart("empty part list".into()));
    }
    for (i, a) in parts.iter().enumerate() {
        if !is_valid_set(a).is_valid() {
            return Err(Error::InvalidPart(format!(
                "part {} (m = {}) fails the square-difference condition",
                i,
                a.modulus().value()
            )));
        }
        for b in &parts[..i] {
            let g = gcd(a.modulus().value(), b.modulus().value());
            if g != 1 {
                return Err(Error::NonCoprime(b.modulus().value(), a.modulus().value()));
            }
        }
    }
    if parts.len() == 1 {
        return Ok(parts[0].clone());
    }

    let mut m_total: u64 = 1;
    for p in parts {
        m_total = m_total
            .checked_mul(p.modulus().value())
            .ok_or_else(|| Error::TooLarge("product modulus exceeds u64".into()))?;
    }
    let modulus = Modulus::new(m_total)?;

    // Cartesian product mapped through the CRT, prime by prime.
    let mut elements: Vec<u64> = Vec::with_capacity(parts.iter().map(|p| p.len()).product());
    let mut tuple = vec![0usize; parts.len()];
    'outer: loop {
        let mut components: Vec<(u64, u64)> = Vec::new();
        for (part, &i) in parts.iter().zip(&tuple) {
            if part.is_empty() {
                break 'outer;
            }
            let a = part.elements()[i];
            for &p in part.modulus().primes() {
                components.push((a % p, p));
            }
        }
        let (x, _) = crt_combine(&components)?;
        elements.push(x);
        // advance the mixed-radix counter
        for k in (0..parts.len()).rev() {
            tuple[k] += 1;
            if tuple[k] < parts[k].len() {
                continue 'outer;
            }
            tuple[k] = 0;
        }
        break;
    }
    CandidateSet::new(modulus, &elements)
}

/// Which edge color the clique from [`ramsey_construct`] ended up in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CliqueColor {
    /// Differences are squares; the set was scaled by a nonresidue.
    Square,
    /// Differences are nonsquares; the set is valid as-is.
    Nonsquare,
}

/// Outcome of the pivot construction.
#[derive(Clone, Debug)]
pub struct RamseyConstruction {
    pub set: CandidateSet,
    pub clique: Vec<u64>,
    pub color: CliqueColor,
    pub pivot_count: usize,
    /// Conservative size guarantee `max(1, ⌊log2(p) / 2⌋)` from the pivot
    /// count; weaker than the full Ramsey-number bound, which would need an
    /// exponential search.
    pub guarantee: usize,
}

/// Monochromatic-clique pivot construction on `K_p` with edges 2-colored by
/// the quadratic character of the difference (`p ≡ 1 (mod 4)` so the
/// coloring is symmetric).
///
/// Repeatedly pivot on the smallest remaining vertex and keep its larger
/// color class; pivots sharing the majority kept-color form a monochromatic
/// clique. A nonsquare-colored clique is already valid; a square-colored one
/// becomes valid after scaling by a nonresidue.
pub fn ramsey_construct(p: u64) -> Result<RamseyConstruction> {
    let modulus = Modulus::new(p)?;
    if !modulus.is_prime() {
        return Err(Error::DomainError(format!("{p} is not prime")));
    }
    if p % 4 != 1 {
        return Err(Error::WrongResidueClass(p, 1));
    }
    let mut chi = vec![-1i8; p as usize];
    chi[0] = 0;
    for y in 1..p {
        chi[(y * y % p) as usize] = 1;
    }

    let mut live: Vec<u64> = (0..p).collect();
    // (pivot, kept color: +1 square / -1 nonsquare)
    let mut pivots: Vec<(u64, i8)> = Vec::new();
    while let Some((&v, rest)) = live.split_first() {
        let (squares, nonsquares): (Vec<u64>, Vec<u64>) = rest
            .iter()
            .partition(|&&u| chi[((u + p - v) % p) as usize] == 1);
        // Tie goes to the square class, for determinism.
        let (kept, color) = if squares.len() >= nonsquares.len() {
            (squares, 1i8)
        } else {
            (nonsquares, -1i8)
        };
        pivots.push((v, color));
        live = kept;
    }

    let square_pivots: Vec<u64> = pivots.iter().filter(|&&(_, c)| c == 1).map(|&(v, _)| v).collect();
    let nonsquare_pivots: Vec<u64> =
        pivots.iter().filter(|&&(_, c)| c == -1).map(|&(v, _)| v).collect();
    let (clique, color) = if square_pivots.len() >= nonsquare_pivots.len() {
        (square_pivots, CliqueColor::Square)
    } else {
        (nonsquare_pivots, CliqueColor::Nonsquare)
    };

    let base = CandidateSet::new(modulus.clone(), &clique)?;
    let set = match color {
        CliqueColor::Nonsquare => base,
        CliqueColor::Square => scale_by_nonresidue(&base)?,
    };
    let guarantee = std::cmp::max(1, (63 - p.leading_zeros() as usize) / 2);
    debug_assert!(set.len() >= guarantee);
    debug_assert!(is_valid_set(&set).is_valid());
    Ok(RamseyConstruction {
        set,
        clique,
        color,
        pivot_count: pivots.len(),
        guarantee,
    })
}

/// Multiply a set over a prime modulus by the least quadratic nonresidue.
/// Swaps square differences with nonsquare ones, so square-difference
/// cliques become valid sets and vice versa.
pub fn scale_by_nonresidue(a: &CandidateSet) -> Result<CandidateSet> {
    let modulus = a.modulus();
    if !modulus.is_prime() {
        return Err(Error::DomainError(format!(
            "scaling needs a prime modulus, got {}",
            modulus.value()
        )));
    }
    let p = modulus.value();
    let xi = least_nonresidue(p);
    let elements: Vec<u64> = a
        .elements()
        .iter()
        .map(|&x| ((x as u128 * xi as u128) % p as u128) as u64)
        .collect();
    CandidateSet::new(modulus.clone(), &elements)
}

/// A certified collision of `φ(a, b) = a + ξ b` on `A²`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CollisionCertificate {
    pub p: u64,
    pub xi: u64,
    pub pair1: (u64, u64),
    pub pair2: (u64, u64),
    /// Common value `a1 + ξ b1 = a2 + ξ b2 (mod p)`.
    pub value: u64,
    /// A difference among `a1 - a2`, `b1 - b2` that is a nonresidue mod `p`.
    pub nonresidue_difference: u64,
}

/// Pigeonhole step of the prime case: if `|A| > √p` the map
/// `φ(a, b) = a + ξ b` collides on `A²`, and the collision identity
/// `ξ = (a1 - a2)(b2 - b1)^{-1}` certifies that one of the differences
/// `a1 - a2`, `b1 - b2` is a nonresidue.
///
/// The certificate is re-checked before being returned.
pub fn pigeonhole_witness(a: &CandidateSet, xi: Option<u64>) -> Result<CollisionCertificate> {
    let modulus = a.modulus();
    if !modulus.is_prime() {
        return Err(Error::DomainError(format!(
            "pigeonhole argument needs a prime modulus, got {}",
            modulus.value()
        )));
    }
    let p = modulus.value();
    if p % 4 != 1 {
        return Err(Error::WrongResidueClass(p, 1));
    }
    let xi = match xi {
        Some(xi) => {
            if legendre(xi as i64, p) != -1 {
                return Err(Error::DomainError(format!("{xi} is not a nonresidue mod {p}")));
            }
            xi % p
        }
        None => least_nonresidue(p),
    };

    let mut seen: HashMap<u64, (u64, u64)> = HashMap::new();
    for &x in a.elements() {
        for &y in a.elements() {
            let value = ((x as u128 + xi as u128 * y as u128) % p as u128) as u64;
            if let Some(&(a1, b1)) = seen.get(&value) {
                let (a2, b2) = (x, y);
                // same φ-value with b1 = b2 would force a1 = a2
                debug_assert_ne!(b1, b2);
                let da = (a1 + p - a2) % p;
                let db_inv = mod_inv((b2 + p - b1) % p, p);
                assert_eq!(
                    (da as u128 * db_inv as u128 % p as u128) as u64,
                    xi,
                    "collision identity must certify ξ"
                );
                let nonresidue_difference = if legendre(da as i64, p) == -1 {
                    da
                } else {
                    let db = (b1 + p - b2) % p;
                    assert_eq!(legendre(db as i64, p), -1);
                    db
                };
                return Ok(CollisionCertificate {
                    p,
                    xi,
                    pair1: (a1, b1),
                    pair2: (a2, b2),
                    value,
                    nonresidue_difference,
                });
            }
            seen.insert(value, (x, y));
        }
    }
    Err(Error::NoCollision)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(m: u64, elems: &[u64]) -> CandidateSet {
        CandidateSet::new(Modulus::new(m).unwrap(), elems).unwrap()
    }

    #[test]
    fn product_examples() {
        let a = set(5, &[0, 2]);
        let b = set(13, &[0, 2, 7]);
        let prod = product_construct(&[a, b]).unwrap();
        assert_eq!(prod.modulus().value(), 65);
        assert_eq!(prod.len(), 6);
        assert!(is_valid_set(&prod).is_valid());

        let prod = product_construct(&[set(3, &[0]), set(5, &[0, 2])]).unwrap();
        assert_eq!((prod.modulus().value(), prod.len()), (15, 2));
        assert!(is_valid_set(&prod).is_valid());

        let single = product_construct(&[set(7, &[0])]).unwrap();
        assert_eq!(single.elements(), &[0]);
    }

    #[test]
    fn product_rejects_bad_parts() {
        assert!(matches!(
            product_construct(&[set(5, &[0, 1]), set(13, &[0])]),
            Err(Error::InvalidPart(_))
        ));
        assert!(matches!(
            product_construct(&[set(15, &[0]), set(5, &[0])]),
            Err(Error::NonCoprime(_, _))
        ));
    }

    #[test]
    fn ramsey_examples() {
        for p in [5u64, 13, 101] {
            let r = ramsey_construct(p).unwrap();
            assert!(is_valid_set(&r.set).is_valid(), "p={p}");
            assert!(r.set.len() >= r.guarantee, "p={p}");
        }
        assert_eq!(ramsey_construct(101).unwrap().guarantee, 3);
        assert!(matches!(
            ramsey_construct(7),
            Err(Error::WrongResidueClass(7, 1))
        ));
    }

    #[test]
    fn scaling_examples() {
        // {0, 1} has square differences only; scaling by ξ = 2 gives {0, 2}.
        let scaled = scale_by_nonresidue(&set(5, &[0, 1])).unwrap();
        assert_eq!(scaled.elements(), &[0, 2]);
        assert!(is_valid_set(&scaled).is_valid());

        assert_eq!(scale_by_nonresidue(&set(5, &[0])).unwrap().elements(), &[0]);

        // Scaling twice multiplies by ξ², a square: validity is unchanged.
        let a = set(13, &[0, 2, 7]);
        let twice = scale_by_nonresidue(&scale_by_nonresidue(&a).unwrap()).unwrap();
        assert_eq!(
            is_valid_set(&a).is_valid(),
            is_valid_set(&twice).is_valid()
        );
    }

    #[test]
    fn pigeonhole_examples() {
        let cert = pigeonhole_witness(&set(5, &[0, 1, 2]), Some(2)).unwrap();
        assert_eq!(cert.xi, 2);
        assert_eq!(legendre(cert.nonresidue_difference as i64, 5), -1);

        let cert = pigeonhole_witness(&set(13, &[0, 1, 2, 3]), Some(2)).unwrap();
        assert_eq!(cert.p, 13);
        assert_eq!(legendre(cert.nonresidue_difference as i64, 13), -1);

        assert!(matches!(
            pigeonhole_witness(&set(5, &[0, 1]), None),
            Err(Error::NoCollision)
        ));
    }
}
