//! Directed-graph products, covering families, and the polynomial-method
//! rank argument that bounds a covering family by `∏ (d_i + 1)`.
//!
//! Vertex labels are plain integers so the associated polynomials
//! `P_v(x_1,…,x_k) = ∏_i ∏_{j∈N(v_i)} (x_i - j)` live over the rationals;
//! their evaluation matrix on the family is handled in exact integer
//! arithmetic (fraction-free Gaussian elimination), never floating point.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::modarith::Modulus;
use crate::sdf::{is_valid_set, CandidateSet};
use crate::{Error, Result};

/// A loop-free directed graph on integer-labelled vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DigraphJson", into = "DigraphJson")]
pub struct Digraph {
    vertices: Vec<i64>,
    edges: BTreeSet<(i64, i64)>,
    max_outdegree: usize,
}

/// Edge-list JSON form: `{"vertices":[…],"edges":[[x,y],…]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DigraphJson {
    pub vertices: Vec<i64>,
    pub edges: Vec<(i64, i64)>,
}

impl From<Digraph> for DigraphJson {
    fn from(g: Digraph) -> Self {
        DigraphJson {
            vertices: g.vertices,
            edges: g.edges.into_iter().collect(),
        }
    }
}

impl TryFrom<DigraphJson> for Digraph {
    type Error = Error;
    fn try_from(j: DigraphJson) -> Result<Self> {
        Digraph::new(j.vertices, &j.edges)
    }
}

impl Digraph {
    pub fn new(vertices: Vec<i64>, edges: &[(i64, i64)]) -> Result<Self> {
        let vertex_set: BTreeSet<i64> = vertices.iter().copied().collect();
        if vertex_set.len() != vertices.len() {
            return Err(Error::DomainError("duplicate vertex label".into()));
        }
        let mut edge_set = BTreeSet::new();
        for &(x, y) in edges {
            if x == y {
                return Err(Error::DomainError(format!("self-loop at {x}")));
            }
            if !vertex_set.contains(&x) || !vertex_set.contains(&y) {
                return Err(Error::DomainError(format!("edge ({x},{y}) leaves the vertex set")));
            }
            edge_set.insert((x, y));
        }
        let max_outdegree = vertices
            .iter()
            .map(|&v| edge_set.range((v, i64::MIN)..=(v, i64::MAX)).count())
            .max()
            .unwrap_or(0);
        Ok(Digraph {
            vertices,
            edges: edge_set,
            max_outdegree,
        })
    }

    pub fn vertices(&self) -> &[i64] {
        &self.vertices
    }

    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    pub fn has_edge(&self, x: i64, y: i64) -> bool {
        self.edges.contains(&(x, y))
    }

    pub fn out_neighbors(&self, v: i64) -> impl Iterator<Item = i64> + '_ {
        self.edges
            .range((v, i64::MIN)..=(v, i64::MAX))
            .map(|&(_, u)| u)
    }

    pub fn max_outdegree(&self) -> usize {
        self.max_outdegree
    }

    /// Exactly one arc between every pair of distinct vertices?
    pub fn is_tournament(&self) -> bool {
        for (i, &x) in self.vertices.iter().enumerate() {
            for &y in &self.vertices[i + 1..] {
                if self.has_edge(x, y) == self.has_edge(y, x) {
                    return false;
                }
            }
        }
        true
    }
}

/// The quadratic-residue tournament on `Z_p`: `(x, y)` is an arc iff
/// `x - y` is a non-zero square mod `p`. Requires `p ≡ 3 (mod 4)` so that
/// exactly one of `±d` is a square; out-degree is `(p-1)/2` everywhere.
pub fn paley_tournament(p: u64) -> Result<Digraph> {
    let modulus = Modulus::new(p)?;
    if !modulus.is_prime() {
        return Err(Error::DomainError(format!("{p} is not prime")));
    }
    if p % 4 != 3 {
        return Err(Error::WrongResidueClass(p, 3));
    }
    let mut is_square = vec![false; p as usize];
    for y in 1..p {
        is_square[(y * y % p) as usize] = true;
    }
    let mut edges = Vec::new();
    for x in 0..p {
        for y in 0..p {
            if x != y && is_square[((x + p - y) % p) as usize] {
                edges.push((x as i64, y as i64));
            }
        }
    }
    Digraph::new((0..p as i64).collect(), &edges)
}

/// Seeded random digraph on `0..n`: each ordered pair becomes an arc with
/// probability 1/2.
pub fn random_digraph(n: usize, rng: &mut ChaCha8Rng) -> Digraph {
    use rand::Rng;
    let mut edges = Vec::new();
    for x in 0..n as i64 {
        for y in 0..n as i64 {
            if x != y && rng.gen_bool(0.5) {
                edges.push((x, y));
            }
        }
    }
    Digraph::new((0..n as i64).collect(), &edges).expect("generated edges are well formed")
}

/// The product of directed graphs: vertices are tuples, and `(x, y)` is an
/// arc iff the tuples are distinct and every coordinate is either equal or
/// an arc of its factor.
#[derive(Clone, Debug)]
pub struct ProductGraph {
    factors: Vec<Digraph>,
}

impl ProductGraph {
    pub fn new(factors: Vec<Digraph>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::DomainError("product needs at least one factor".into()));
        }
        Ok(ProductGraph { factors })
    }

    pub fn factors(&self) -> &[Digraph] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.factors.iter().map(|f| f.order()).product()
    }

    pub fn vertices(&self) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = vec![Vec::new()];
        for f in &self.factors {
            let mut next = Vec::with_capacity(out.len() * f.order());
            for prefix in &out {
                for &v in f.vertices() {
                    let mut t = prefix.clone();
                    t.push(v);
                    next.push(t);
                }
            }
            out = next;
        }
        out
    }

    pub fn contains_vertex(&self, x: &[i64]) -> bool {
        x.len() == self.factors.len()
            && x.iter()
                .zip(&self.factors)
                .all(|(&c, f)| f.vertices().contains(&c))
    }

    pub fn has_edge(&self, x: &[i64], y: &[i64]) -> bool {
        x != y
            && x.iter()
                .zip(y)
                .zip(&self.factors)
                .all(|((&a, &b), f)| a == b || f.has_edge(a, b))
    }

    /// `∏ (d_i + 1)` over the factor max out-degrees.
    pub fn outdegree_bound(&self) -> u64 {
        self.factors
            .iter()
            .map(|f| f.max_outdegree() as u64 + 1)
            .product()
    }
}

/// First ordered pair of distinct members with no arc coordinate, or `None`
/// if the family is covering. Self-pairs are not checked: they could never
/// be covered in a loop-free digraph, so the hypothesis is read over
/// distinct pairs.
pub fn covering_violation(s: &[Vec<i64>], p: &ProductGraph) -> Option<(Vec<i64>, Vec<i64>)> {
    for u in s {
        for v in s {
            if u == v {
                continue;
            }
            let covered = u
                .iter()
                .zip(v)
                .zip(p.factors())
                .any(|((&a, &b), f)| f.has_edge(a, b));
            if !covered {
                return Some((u.clone(), v.clone()));
            }
        }
    }
    None
}

pub fn is_covering_family(s: &[Vec<i64>], p: &ProductGraph) -> bool {
    covering_violation(s, p).is_none()
}

/// Rank of the evaluation matrix `M[v][u] = P_v(u)` over the members of a
/// covering family, in exact integer arithmetic.
///
/// `P_v(v) ≠ 0` while `P_v(u) = 0` for `u ≠ v` in the family, so the matrix
/// has full rank `|S|`; the elimination verifies this rather than assuming
/// it.
pub fn alon_polynomials_rank(s: &[Vec<i64>], p: &ProductGraph) -> Result<usize> {
    for v in s {
        if !p.contains_vertex(v) {
            return Err(Error::DomainError(format!("{v:?} is not a product vertex")));
        }
    }
    if let Some((u, v)) = covering_violation(s, p) {
        return Err(Error::NotCovering(u, v));
    }
    let matrix: Vec<Vec<BigInt>> = s
        .iter()
        .map(|v| {
            s.iter()
                .map(|u| {
                    let mut acc = BigInt::one();
                    for ((&vi, &ui), f) in v.iter().zip(u).zip(p.factors()) {
                        for j in f.out_neighbors(vi) {
                            acc *= BigInt::from(ui - j);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    Ok(bareiss_rank(matrix))
}

/// Rank by one-step fraction-free (Bareiss) elimination.
fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot_row) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot_row);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let num = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                debug_assert!((&num % &prev).is_zero() || prev.is_one());
                m[r][c] = num / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Result of searching a product graph for large covering families.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LemmaReport {
    pub vertex_count: usize,
    pub max_outdegrees: Vec<usize>,
    pub bound: u64,
    pub largest_family: Vec<Vec<i64>>,
    pub family_size: usize,
    pub exhaustive: bool,
    /// `family_size <= bound`.
    pub holds: bool,
    /// Rank of the polynomial evaluation matrix on the found family.
    pub rank: usize,
}

/// Search for the largest covering family: exhaustively over all `2^|V|`
/// subsets when `|V| <= exhaustive_limit` (hard cap 20), otherwise by seeded
/// random-restart greedy maximal families. Asserts the found size against
/// `∏ (d_i + 1)`.
pub fn verify_lemma(p: &ProductGraph, exhaustive_limit: usize, seed: u64) -> Result<LemmaReport> {
    let vertices = p.vertices();
    let order = vertices.len();
    let bound = p.outdegree_bound();
    let exhaustive = order <= exhaustive_limit.min(20);

    let mut best: Vec<Vec<i64>> = Vec::new();
    if exhaustive {
        for mask in 1u32..(1u32 << order) {
            if (mask.count_ones() as usize) <= best.len() {
                continue;
            }
            let family: Vec<Vec<i64>> = (0..order)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| vertices[i].clone())
                .collect();
            if is_covering_family(&family, p) {
                best = family;
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut indices: Vec<usize> = (0..order).collect();
        for _ in 0..64 {
            indices.shuffle(&mut rng);
            let mut family: Vec<Vec<i64>> = Vec::new();
            for &i in &indices {
                let candidate = &vertices[i];
                let compatible = family.iter().all(|member| {
                    let fwd = candidate
                        .iter()
                        .zip(member)
                        .zip(p.factors())
                        .any(|((&a, &b), f)| f.has_edge(a, b));
                    let bwd = member
                        .iter()
                        .zip(candidate)
                        .zip(p.factors())
                        .any(|((&a, &b), f)| f.has_edge(a, b));
                    fwd && bwd
                });
                if compatible {
                    family.push(candidate.clone());
                }
            }
            if family.len() > best.len() || (family.len() == best.len() && family < best) {
                best = family;
            }
        }
        best.sort();
    }

    let rank = alon_polynomials_rank(&best, p)?;
    Ok(LemmaReport {
        vertex_count: order,
        max_outdegrees: p.factors().iter().map(|f| f.max_outdegree()).collect(),
        bound,
        family_size: best.len(),
        holds: (best.len() as u64) <= bound,
        largest_family: best,
        exhaustive,
        rank,
    })
}

/// Map a valid set over a modulus with all primes `≡ 3 (mod 4)` to its CRT
/// coordinates in the product of the quadratic-residue tournaments. The
/// image is a covering family; this is the bridge that turns validity into
/// the `∏ (p_i + 1)/2` bound.
pub fn sdf_set_to_family(a: &CandidateSet) -> Result<(ProductGraph, Vec<Vec<i64>>)> {
    let modulus = a.modulus();
    for &p in modulus.primes() {
        if p % 4 != 3 {
            return Err(Error::WrongResidueClass(p, 3));
        }
    }
    if let crate::sdf::Validity::Violation { a: x, b: y } = is_valid_set(a) {
        return Err(Error::InvalidSet(x, y));
    }
    let factors: Vec<Digraph> = modulus
        .primes()
        .iter()
        .map(|&p| paley_tournament(p))
        .collect::<Result<_>>()?;
    let product = ProductGraph::new(factors)?;
    let family: Vec<Vec<i64>> = a
        .elements()
        .iter()
        .map(|&el| {
            modulus
                .primes()
                .iter()
                .map(|&p| (el % p) as i64)
                .collect()
        })
        .collect();
    if let Some((u, v)) = covering_violation(&family, &product) {
        return Err(Error::NotCovering(u, v));
    }
    Ok((product, family))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_cycle() -> Digraph {
        // (x, y) an arc iff x - y = 1 (mod 3): the quadratic-residue
        // tournament on Z_3.
        Digraph::new(vec![0, 1, 2], &[(1, 0), (2, 1), (0, 2)]).unwrap()
    }

    #[test]
    fn paley_tournament_examples() {
        let t3 = paley_tournament(3).unwrap();
        assert_eq!(t3, three_cycle());
        assert!(t3.is_tournament());

        let t7 = paley_tournament(7).unwrap();
        assert!(t7.is_tournament());
        assert_eq!(t7.max_outdegree(), 3);
        for &v in t7.vertices() {
            assert_eq!(t7.out_neighbors(v).count(), 3);
        }

        assert!(matches!(paley_tournament(5), Err(Error::WrongResidueClass(5, 3))));
    }

    #[test]
    fn tournament_exactly_one_direction() {
        for p in [3u64, 7, 11, 19, 23, 31, 43, 47, 59, 67, 71, 79, 83] {
            assert!(paley_tournament(p).unwrap().is_tournament(), "p={p}");
        }
    }

    #[test]
    fn digraph_validation() {
        assert!(Digraph::new(vec![0, 0], &[]).is_err());
        assert!(Digraph::new(vec![0, 1], &[(0, 0)]).is_err());
        assert!(Digraph::new(vec![0, 1], &[(0, 2)]).is_err());
    }

    #[test]
    fn digraph_json_round_trip() {
        let g = paley_tournament(3).unwrap();
        let json = serde_json::to_string(&g).unwrap();
        assert!(json.contains("\"vertices\""));
        let back: Digraph = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn product_edge_rule() {
        let g = three_cycle();
        let p = ProductGraph::new(vec![g.clone(), g.clone()]).unwrap();
        assert_eq!(p.order(), 9);
        // second coordinate equal, first an arc
        assert!(p.has_edge(&[1, 0], &[0, 0]));
        // no self edges
        assert!(!p.has_edge(&[0, 0], &[0, 0]));
        // (0,1) not an arc in factor 1
        assert!(!p.has_edge(&[0, 0], &[1, 0]));

        let single = ProductGraph::new(vec![g.clone()]).unwrap();
        for &x in g.vertices() {
            for &y in g.vertices() {
                assert_eq!(single.has_edge(&[x], &[y]), g.has_edge(x, y));
            }
        }
    }

    #[test]
    fn covering_family_examples() {
        let g = three_cycle();
        let p = ProductGraph::new(vec![g.clone(), g]).unwrap();
        let good = vec![vec![0, 0], vec![1, 2], vec![2, 1]];
        assert!(is_covering_family(&good, &p));

        let bad = vec![vec![0, 0], vec![1, 1]];
        assert_eq!(
            covering_violation(&bad, &p),
            Some((vec![0, 0], vec![1, 1]))
        );

        assert!(is_covering_family(&[vec![2, 2]], &p));
    }

    #[test]
    fn rank_examples() {
        let g = three_cycle();
        let p = ProductGraph::new(vec![g.clone(), g]).unwrap();
        let family = vec![vec![0, 0], vec![1, 2], vec![2, 1]];
        assert_eq!(alon_polynomials_rank(&family, &p).unwrap(), 3);
        assert_eq!(alon_polynomials_rank(&[vec![1, 1]], &p).unwrap(), 1);
        assert!(matches!(
            alon_polynomials_rank(&[vec![0, 0], vec![1, 1]], &p),
            Err(Error::NotCovering(_, _))
        ));
    }

    #[test]
    fn bareiss_rank_small_cases() {
        let m = |rows: &[&[i64]]| -> Vec<Vec<BigInt>> {
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect()
        };
        assert_eq!(bareiss_rank(m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(bareiss_rank(m(&[&[1, 2], &[3, 4]])), 2);
        assert_eq!(bareiss_rank(m(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(
            bareiss_rank(m(&[&[2, 3, 5], &[7, 11, 13], &[9, 14, 18]])),
            2
        );
        assert_eq!(
            bareiss_rank(m(&[&[2, 3, 5], &[7, 11, 13], &[9, 14, 19]])),
            3
        );
    }

    #[test]
    fn verify_lemma_examples() {
        let g = three_cycle();
        let p = ProductGraph::new(vec![g.clone(), g.clone()]).unwrap();
        let rep = verify_lemma(&p, 1 << 20, 7).unwrap();
        assert!(rep.exhaustive);
        assert!(rep.family_size >= 3);
        assert_eq!(rep.bound, 4);
        assert!(rep.holds);
        assert_eq!(rep.rank, rep.family_size);

        // A single tournament factor: covering needs arcs both ways.
        let rep = verify_lemma(&ProductGraph::new(vec![g]).unwrap(), 1 << 20, 7).unwrap();
        assert_eq!(rep.family_size, 1);
    }

    #[test]
    fn sdf_bridge_examples() {
        let m21 = Modulus::new(21).unwrap();
        let a = CandidateSet::new(m21, &[0, 2]).unwrap();
        let (p, family) = sdf_set_to_family(&a).unwrap();
        assert_eq!(family, vec![vec![0, 0], vec![2, 2]]);
        assert!(is_covering_family(&family, &p));
        assert_eq!(alon_polynomials_rank(&family, &p).unwrap(), 2);

        let m3 = Modulus::new(3).unwrap();
        let singleton = CandidateSet::new(m3, &[0]).unwrap();
        let (_, family) = sdf_set_to_family(&singleton).unwrap();
        assert_eq!(family.len(), 1);

        let m15 = Modulus::new(15).unwrap();
        let bad_modulus = CandidateSet::new(m15, &[0, 2]).unwrap();
        assert!(matches!(
            sdf_set_to_family(&bad_modulus),
            Err(Error::WrongResidueClass(5, 3))
        ));

        let m21 = Modulus::new(21).unwrap();
        let invalid = CandidateSet::new(m21, &[0, 1]).unwrap();
        assert!(matches!(sdf_set_to_family(&invalid), Err(Error::InvalidSet(_, _))));
    }
}
