//! The square-difference-free condition itself: the set of non-zero squares
//! of `Z_m`, the symmetric conflict graph it induces, validity checking and
//! residue fibers.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::bitset::Bits;
use crate::modarith::{legendre, Modulus};
use crate::quadchar::CharProduct;
use crate::{Error, Result};

/// Default cap on the number of vertices for which adjacency rows are
/// materialized.
pub const DEFAULT_VERTEX_CAP: u64 = 2_000_000;

/// The non-zero squares of `Z_m` and their symmetric closure.
///
/// "Square" means any value `y² mod m` with `y ∈ Z_m`, zero excluded; for
/// composite `m` this includes elements not coprime to `m` (e.g. `6 = 6² mod
/// 15`). The `units_only` switch restricts to squares of units instead; it is
/// off by default and changes the graph for composite `m`.
#[derive(Clone, Debug)]
pub struct ForbiddenSet {
    modulus: Modulus,
    is_square: Vec<bool>,
    units_only: bool,
}

impl ForbiddenSet {
    pub fn new(modulus: &Modulus) -> Self {
        ForbiddenSet::with_config(modulus, false)
    }

    pub fn with_config(modulus: &Modulus, units_only: bool) -> Self {
        let m = modulus.value();
        // x is a square in Z_m iff x is a square (0 allowed) mod every prime
        // divisor; units_only additionally requires x to be a unit.
        let mut is_square = vec![false; m as usize];
        for x in 1..m {
            let ok = modulus.primes().iter().all(|&p| {
                let l = legendre(x as i64, p);
                if units_only {
                    l == 1
                } else {
                    l >= 0
                }
            });
            is_square[x as usize] = ok;
        }
        ForbiddenSet {
            modulus: modulus.clone(),
            is_square,
            units_only,
        }
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn units_only(&self) -> bool {
        self.units_only
    }

    /// Is `x` a non-zero square of `Z_m`?
    pub fn is_square(&self, x: u64) -> bool {
        self.is_square[(x % self.modulus.value()) as usize]
    }

    /// Is `x` or `-x` a non-zero square? This is the edge rule of the
    /// conflict graph: both `a - b` and `b - a` lie in `A - A`.
    pub fn is_forbidden_difference(&self, x: u64) -> bool {
        let m = self.modulus.value();
        let x = x % m;
        x != 0 && (self.is_square[x as usize] || self.is_square[(m - x) as usize])
    }

    /// Sorted list of the non-zero squares.
    pub fn squares(&self) -> Vec<u64> {
        (1..self.modulus.value())
            .filter(|&x| self.is_square[x as usize])
            .collect()
    }

    /// Sorted symmetric closure `{x : x or m-x is a square}`.
    pub fn symmetric_closure(&self) -> Vec<u64> {
        (1..self.modulus.value())
            .filter(|&x| self.is_forbidden_difference(x))
            .collect()
    }
}

/// The undirected conflict graph on `Z_m`: `{a, b}` adjacent iff `a - b` or
/// `b - a` is a non-zero square. A vertex-transitive circulant; row `i` is
/// row `0` rotated by `i`.
#[derive(Clone, Debug)]
pub struct SdfGraph {
    forbidden: ForbiddenSet,
    connection: Vec<bool>,
    rows: Option<Vec<Bits>>,
}

impl SdfGraph {
    pub fn build(modulus: &Modulus) -> Result<Self> {
        SdfGraph::build_with(modulus, DEFAULT_VERTEX_CAP, false)
    }

    pub fn build_with(modulus: &Modulus, vertex_cap: u64, units_only: bool) -> Result<Self> {
        let m = modulus.value();
        if m > vertex_cap {
            return Err(Error::TooLarge(format!(
                "m = {m} exceeds the vertex cap {vertex_cap}"
            )));
        }
        let forbidden = ForbiddenSet::with_config(modulus, units_only);
        let connection: Vec<bool> = (0..m)
            .map(|x| forbidden.is_forbidden_difference(x))
            .collect();
        // Rows are materialized only up to ~64k vertices; beyond that
        // adjacency is answered from the connection set.
        let rows = if m <= 65_536 {
            let mut rows = Vec::with_capacity(m as usize);
            for i in 0..m as usize {
                let mut row = Bits::new(m as usize);
                for j in 0..m as usize {
                    if connection[(j + m as usize - i) % m as usize] {
                        row.set(j);
                    }
                }
                rows.push(row);
            }
            Some(rows)
        } else {
            None
        };
        Ok(SdfGraph {
            forbidden,
            connection,
            rows,
        })
    }

    pub fn modulus(&self) -> &Modulus {
        self.forbidden.modulus()
    }

    pub fn forbidden(&self) -> &ForbiddenSet {
        &self.forbidden
    }

    pub fn order(&self) -> usize {
        self.forbidden.modulus().value() as usize
    }

    pub fn adjacent(&self, a: u64, b: u64) -> bool {
        let m = self.forbidden.modulus().value();
        a != b && self.connection[((b + m - a % m) % m) as usize]
    }

    /// Adjacency row of vertex `v`, materialized or rebuilt on demand.
    pub fn row(&self, v: u64) -> Bits {
        if let Some(rows) = &self.rows {
            return rows[v as usize].clone();
        }
        let m = self.order();
        let mut row = Bits::new(m);
        for j in 0..m {
            if self.connection[(j + m - v as usize % m) % m] {
                row.set(j);
            }
        }
        row
    }

    pub fn degree(&self) -> usize {
        self.connection.iter().filter(|&&c| c).count()
    }
}

/// A subset of `Z_m` with lazily cached validity against the
/// square-difference condition.
#[derive(Clone, Debug)]
pub struct CandidateSet {
    modulus: Modulus,
    elements: Vec<u64>,
    // None once checked and valid; Some(pair) once checked and invalid.
    validity: OnceLock<Option<(u64, u64)>>,
}

impl CandidateSet {
    pub fn new(modulus: Modulus, elements: &[u64]) -> Result<Self> {
        let mut elems: Vec<u64> = elements.to_vec();
        elems.sort_unstable();
        elems.dedup();
        if let Some(&x) = elems.iter().find(|&&x| x >= modulus.value()) {
            return Err(Error::DomainError(format!(
                "element {x} not reduced modulo {}",
                modulus.value()
            )));
        }
        Ok(CandidateSet {
            modulus,
            elements: elems,
            validity: OnceLock::new(),
        })
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// Translate by `t` (an automorphism of the conflict graph).
    pub fn translate(&self, t: u64) -> CandidateSet {
        let m = self.modulus.value();
        let elems: Vec<u64> = self.elements.iter().map(|&a| (a + t) % m).collect();
        CandidateSet::new(self.modulus.clone(), &elems).expect("translate stays reduced")
    }
}

impl Serialize for CandidateSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SetWitness::from_candidate(self).serialize(s)
    }
}

/// Result of a validity check: either valid, or the first violating ordered
/// pair `(a, b)` with `a - b` a non-zero square.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Validity {
    Valid,
    Violation { a: u64, b: u64 },
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

/// Check that no difference of distinct elements of `A` is a non-zero square
/// of `Z_m` (both orders checked). Cached on the set.
pub fn is_valid_set(a: &CandidateSet) -> Validity {
    let fs = ForbiddenSet::new(a.modulus());
    is_valid_set_with(a, &fs)
}

/// Same as [`is_valid_set`] but reuses a prebuilt [`ForbiddenSet`].
pub fn is_valid_set_with(a: &CandidateSet, fs: &ForbiddenSet) -> Validity {
    let cached = a.validity.get_or_init(|| {
        let m = a.modulus.value();
        for (i, &x) in a.elements.iter().enumerate() {
            for &y in &a.elements[..i] {
                // x > y; check both orders so the report names the ordered
                // pair whose difference is the square.
                if fs.is_square((x + m - y) % m) {
                    return Some((x, y));
                }
                if fs.is_square((y + m - x) % m) {
                    return Some((y, x));
                }
            }
        }
        None
    });
    match cached {
        None => Validity::Valid,
        Some((x, y)) => Validity::Violation { a: *x, b: *y },
    }
}

/// One fiber `A_x = {a ∈ A : a ≡ x (mod p_D)}` together with its CRT
/// reinterpretation as a subset of `Z_{m / p_D}` (absent when `p_D = m`).
#[derive(Clone, Debug)]
pub struct Fiber {
    pub residue: u64,
    pub elements: Vec<u64>,
    pub reduced: Option<CandidateSet>,
}

/// Partition `A` into fibers over the residues of `Z_{p_D}`.
///
/// Every residue of `Z_{p_D}` gets a fiber, empty ones included. Distinct
/// elements of a fiber stay distinct modulo `m / p_D`, so the reduced sets
/// faithfully represent the fibers in the smaller group.
pub fn residue_fibers(a: &CandidateSet, cp: &CharProduct) -> Result<Vec<Fiber>> {
    let m = a.modulus().value();
    let p_d = cp.p_d();
    if cp.modulus() != a.modulus() {
        return Err(Error::DomainError(
            "character product and set use different moduli".into(),
        ));
    }
    let m_rest = m / p_d;
    let rest_modulus = if m_rest >= 3 {
        Some(Modulus::new(m_rest)?)
    } else {
        None
    };
    let mut by_residue: BTreeMap<u64, Vec<u64>> = (0..p_d).map(|x| (x, Vec::new())).collect();
    for &el in a.elements() {
        by_residue.get_mut(&(el % p_d)).unwrap().push(el);
    }
    let mut fibers = Vec::with_capacity(p_d as usize);
    for (residue, elements) in by_residue {
        let reduced = rest_modulus.as_ref().map(|rm| {
            let elems: Vec<u64> = elements.iter().map(|&e| e % m_rest).collect();
            CandidateSet::new(rm.clone(), &elems).expect("reduced elements fit")
        });
        fibers.push(Fiber {
            residue,
            elements,
            reduced,
        });
    }
    Ok(fibers)
}

/// JSON schema shared by connection sets and witness sets:
/// `{"m":15,"squares":[1,4,6,9,10],"set":[0,2]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SetWitness {
    pub m: u64,
    /// Derivable from `m`; optional on input.
    #[serde(default)]
    pub squares: Vec<u64>,
    pub set: Vec<u64>,
}

impl SetWitness {
    pub fn from_candidate(a: &CandidateSet) -> Self {
        let fs = ForbiddenSet::new(a.modulus());
        SetWitness {
            m: a.modulus().value(),
            squares: fs.squares(),
            set: a.elements().to_vec(),
        }
    }

    pub fn to_candidate(&self) -> Result<CandidateSet> {
        CandidateSet::new(Modulus::new(self.m)?, &self.set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn modulus(m: u64) -> Modulus {
        Modulus::new(m).unwrap()
    }

    #[test]
    fn forbidden_set_examples() {
        assert_eq!(ForbiddenSet::new(&modulus(15)).squares(), vec![1, 4, 6, 9, 10]);
        assert_eq!(ForbiddenSet::new(&modulus(3)).squares(), vec![1]);
        let f5 = ForbiddenSet::new(&modulus(5));
        assert_eq!(f5.squares(), vec![1, 4]);
        assert_eq!(f5.symmetric_closure(), vec![1, 4]);
        assert_eq!(ForbiddenSet::new(&modulus(3)).symmetric_closure(), vec![1, 2]);
    }

    #[test]
    fn squares_match_direct_enumeration() {
        for m in (3..=1000u64).step_by(2) {
            let Ok(md) = Modulus::new(m) else { continue };
            let fs = ForbiddenSet::new(&md);
            let mut enumerated = vec![false; m as usize];
            for y in 0..m {
                enumerated[(y * y % m) as usize] = true;
            }
            enumerated[0] = false;
            for x in 0..m {
                assert_eq!(fs.is_square(x), enumerated[x as usize], "m={m} x={x}");
            }
        }
    }

    #[test]
    fn units_only_restricts_to_unit_squares() {
        let fs = ForbiddenSet::with_config(&modulus(15), true);
        // 6 = 6^2 mod 15 is a non-unit square and must be dropped.
        assert_eq!(fs.squares(), vec![1, 4]);
    }

    #[test]
    fn graph_examples() {
        let g5 = SdfGraph::build(&modulus(5)).unwrap();
        assert_eq!(g5.degree(), 2); // 5-cycle
        assert!(g5.adjacent(0, 1) && g5.adjacent(0, 4) && !g5.adjacent(0, 2));

        let g13 = SdfGraph::build(&modulus(13)).unwrap();
        assert_eq!(g13.degree(), 6); // Paley graph P_13 is 6-regular

        let g3 = SdfGraph::build(&modulus(3)).unwrap();
        assert_eq!(g3.degree(), 2); // K_3
        assert!(g3.adjacent(0, 1) && g3.adjacent(1, 2) && g3.adjacent(0, 2));
    }

    #[test]
    fn graph_rows_are_rotations() {
        let g = SdfGraph::build(&modulus(21)).unwrap();
        let m = 21usize;
        let row0 = g.row(0);
        for i in 0..m as u64 {
            let row = g.row(i);
            for j in 0..m {
                assert_eq!(row.get(j), row0.get((j + m - i as usize) % m));
            }
            assert!(!row.get(i as usize), "loop-free");
        }
    }

    #[test]
    fn graph_respects_vertex_cap() {
        assert!(matches!(
            SdfGraph::build_with(&modulus(105), 100, false),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn validity_examples() {
        let m15 = modulus(15);
        let good = CandidateSet::new(m15.clone(), &[0, 2]).unwrap();
        assert!(is_valid_set(&good).is_valid());

        let bad = CandidateSet::new(m15.clone(), &[0, 1]).unwrap();
        assert_eq!(is_valid_set(&bad), Validity::Violation { a: 1, b: 0 });

        assert!(is_valid_set(&CandidateSet::new(m15.clone(), &[]).unwrap()).is_valid());
        assert!(is_valid_set(&CandidateSet::new(m15, &[7]).unwrap()).is_valid());
    }

    #[test]
    fn validity_matches_graph_independence() {
        let md = modulus(33);
        let g = SdfGraph::build(&md).unwrap();
        for a in 0..33u64 {
            for b in (a + 1)..33 {
                let set = CandidateSet::new(md.clone(), &[a, b]).unwrap();
                assert_eq!(is_valid_set(&set).is_valid(), !g.adjacent(a, b));
            }
        }
    }

    #[test]
    fn fibers_examples() {
        let m15 = modulus(15);
        let cp3 = CharProduct::new(m15.clone(), &[1]).unwrap(); // p_D = 3

        let a = CandidateSet::new(m15.clone(), &[0, 2]).unwrap();
        let fibers = residue_fibers(&a, &cp3).unwrap();
        assert_eq!(fibers.len(), 3);
        assert_eq!(fibers[0].elements, vec![0]);
        assert!(fibers[1].elements.is_empty());
        assert_eq!(fibers[2].elements, vec![2]);

        let b = CandidateSet::new(m15.clone(), &[0, 3, 6]).unwrap();
        let fibers = residue_fibers(&b, &cp3).unwrap();
        assert_eq!(fibers[0].elements, vec![0, 3, 6]);
        assert!(fibers[1].elements.is_empty() && fibers[2].elements.is_empty());

        // p_D = m: all fibers singletons (or empty), no reduced sets.
        let full = CharProduct::full(m15.clone()).unwrap();
        let fibers = residue_fibers(&b, &full).unwrap();
        assert!(fibers.iter().all(|f| f.elements.len() <= 1));
        assert!(fibers.iter().all(|f| f.reduced.is_none()));
    }

    #[test]
    fn fibers_partition_the_set() {
        let md = modulus(105);
        let a = CandidateSet::new(md.clone(), &[0, 2, 23, 51, 98]).unwrap();
        for d in [&[1usize][..], &[2], &[3], &[1, 3]] {
            let cp = CharProduct::new(md.clone(), d).unwrap();
            let fibers = residue_fibers(&a, &cp).unwrap();
            let mut all: Vec<u64> = fibers.iter().flat_map(|f| f.elements.clone()).collect();
            all.sort_unstable();
            assert_eq!(all, a.elements());
            for f in &fibers {
                assert!(f.elements.iter().all(|&e| e % cp.p_d() == f.residue));
            }
        }
    }

    #[test]
    fn witness_json_round_trip() {
        let a = CandidateSet::new(modulus(15), &[0, 2]).unwrap();
        let w = SetWitness::from_candidate(&a);
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(
            json,
            r#"{"m":15,"squares":[1,4,6,9,10],"set":[0,2]}"#
        );
        let back: SetWitness = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_candidate().unwrap().elements(), a.elements());
    }
}
