//! Exact and heuristic computation of `F(m)`, the maximum size of a
//! square-difference-free subset of `Z_m`.
//!
//! The exact solver is a branch-and-bound maximum-clique search on the
//! complement of the conflict graph with greedy-coloring upper bounds. By
//! vertex-transitivity every maximum set has a translate containing 0, so 0
//! is fixed in the set; the reported witness is the lexicographically
//! smallest optimum, which makes golden tests stable across runs.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::bitset::Bits;
use crate::modarith::Modulus;
use crate::sdf::{is_valid_set, CandidateSet, SdfGraph};
use crate::{Error, Result};

/// Node and wall-time limits for the exact search.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub max_nodes: u64,
    pub max_time: Duration,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: 100_000_000,
            max_time: Duration::from_secs(60),
        }
    }
}

impl Budget {
    pub fn new(max_nodes: u64, max_time: Duration) -> Self {
        Budget {
            max_nodes,
            max_time,
        }
    }
}

/// Outcome of a search. `exact == false` means the budget ran out and
/// `size` is only a lower bound (the set is still valid).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchResult {
    pub m: u64,
    pub size: usize,
    pub best_set: Vec<u64>,
    pub exact: bool,
    pub nodes_explored: u64,
    pub wall_time_ms: u64,
}

impl SearchResult {
    pub fn candidate_set(&self) -> Result<CandidateSet> {
        CandidateSet::new(Modulus::new(self.m)?, &self.best_set)
    }
}

/// Exhaustive subset search, `m <= 40` only. Independent of the
/// branch-and-bound path; used as its oracle.
pub fn brute_force_oracle(modulus: &Modulus) -> Result<SearchResult> {
    let m = modulus.value();
    if m > 40 {
        return Err(Error::TooLarge(format!("brute force limited to m <= 40, got {m}")));
    }
    let start = Instant::now();
    let graph = SdfGraph::build(modulus)?;
    let adj: Vec<u64> = (0..m)
        .map(|v| {
            let mut mask = 0u64;
            for u in 0..m {
                if graph.adjacent(v, u) {
                    mask |= 1 << u;
                }
            }
            mask
        })
        .collect();

    fn dfs(cands: u64, cur: u64, cur_size: usize, best: &mut (usize, u64), adj: &[u64]) {
        // Later equal-size sets are lex-larger, so only strict improvements
        // matter beyond this point.
        if cur_size + cands.count_ones() as usize <= best.0 {
            return;
        }
        if cands == 0 {
            *best = (cur_size, cur);
            return;
        }
        let v = cands.trailing_zeros() as usize;
        let bit = 1u64 << v;
        dfs(cands & !adj[v] & !bit, cur | bit, cur_size + 1, best, adj);
        dfs(cands & !bit, cur, cur_size, best, adj);
    }

    let mut best = (0usize, 0u64);
    let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    dfs(full, 0, 0, &mut best, &adj);
    let best_set: Vec<u64> = (0..m).filter(|&v| best.1 >> v & 1 == 1).collect();
    Ok(SearchResult {
        m,
        size: best.0,
        best_set,
        exact: true,
        nodes_explored: 0,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

struct Solver {
    comp: Vec<Bits>,
    nodes: u64,
    max_nodes: u64,
    deadline: Instant,
    exhausted: bool,
    best: usize,
    incumbent: Vec<usize>,
    stack: Vec<usize>,
}

impl Solver {
    fn out_of_budget(&mut self) -> bool {
        self.nodes += 1;
        if self.exhausted {
            return true;
        }
        if self.nodes > self.max_nodes
            || (self.nodes % 4096 == 0 && Instant::now() > self.deadline)
        {
            self.exhausted = true;
        }
        self.exhausted
    }

    /// Greedy coloring of the candidate subgraph; returns `(vertex, color)`
    /// in nondecreasing color order. Each color class is independent in the
    /// complement, so `color` bounds the clique size within the prefix.
    fn color_sort(&self, p: &Bits) -> Vec<(usize, usize)> {
        let mut uncolored = p.clone();
        let mut out = Vec::with_capacity(p.count());
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut q = uncolored.clone();
            while let Some(v) = q.first() {
                out.push((v, color));
                uncolored.clear(v);
                q.clear(v);
                q.and_not_assign(&self.comp[v]);
            }
        }
        out
    }

    fn expand(&mut self, p: &Bits) {
        if self.out_of_budget() {
            return;
        }
        if p.is_empty() {
            if self.stack.len() > self.best {
                self.best = self.stack.len();
                self.incumbent = self.stack.clone();
            }
            return;
        }
        let order = self.color_sort(p);
        let mut p = p.clone();
        for &(v, color) in order.iter().rev() {
            if self.exhausted {
                return;
            }
            if self.stack.len() + color <= self.best {
                return;
            }
            self.stack.push(v);
            let next = p.and(&self.comp[v]);
            self.expand(&next);
            self.stack.pop();
            p.clear(v);
        }
    }

    /// Does the candidate set contain a clique of size `k`?
    fn exists(&mut self, p: &Bits, k: usize) -> bool {
        if k == 0 {
            return true;
        }
        if self.out_of_budget() {
            return false;
        }
        if p.count() < k {
            return false;
        }
        let order = self.color_sort(p);
        let mut p = p.clone();
        for &(v, color) in order.iter().rev() {
            if color < k || self.exhausted {
                return false;
            }
            let next = p.and(&self.comp[v]);
            if self.exists(&next, k - 1) {
                return true;
            }
            p.clear(v);
        }
        false
    }
}

fn complement_rows(graph: &SdfGraph) -> Vec<Bits> {
    let m = graph.order();
    (0..m)
        .map(|v| {
            let mut row = Bits::full(m);
            let adj = graph.row(v as u64);
            row.and_not_assign(&adj);
            row.clear(v);
            row
        })
        .collect()
}

/// Exact `F(m)` by branch and bound, within the given budget.
///
/// On success the witness is the lexicographically smallest maximum set and
/// the result is independent of scheduling. When the budget runs out the
/// best set found so far is returned with `exact = false`, never a wrong
/// "exact".
pub fn max_sdf_exact(modulus: &Modulus, budget: &Budget) -> Result<SearchResult> {
    let start = Instant::now();

    // The dense bitset solver needs m^2 bits of adjacency; above this cap it
    // would allocate over 128 MB before exploring a single node, so report
    // the greedy bound as budget-exhausted instead.
    const DENSE_SOLVER_CAP: u64 = 32_768;
    if modulus.value() > DENSE_SOLVER_CAP {
        let seed = greedy_lower(modulus, None)?;
        return Ok(SearchResult {
            m: modulus.value(),
            size: seed.len(),
            best_set: seed.elements().to_vec(),
            exact: false,
            nodes_explored: 0,
            wall_time_ms: start.elapsed().as_millis() as u64,
        });
    }

    let graph = SdfGraph::build(modulus)?;
    let m = graph.order();
    let comp = complement_rows(&graph);

    let seed = greedy_lower(modulus, None)?;
    let mut solver = Solver {
        comp,
        nodes: 0,
        max_nodes: budget.max_nodes,
        deadline: start + budget.max_time,
        exhausted: false,
        best: seed.len(),
        incumbent: seed.elements().iter().map(|&v| v as usize).collect(),
        stack: Vec::new(),
    };

    // Every maximum set has a translate through 0.
    solver.stack.push(0);
    let p0 = solver.comp[0].clone();
    solver.expand(&p0);
    solver.stack.pop();

    let exact = !solver.exhausted;
    let mut witness: Vec<usize> = solver.incumbent.clone();

    if exact && solver.best > 0 {
        // Second pass: extract the lexicographically smallest optimum by
        // repeated feasibility checks. All later elements of a lex-minimal
        // set exceed the ones already chosen.
        let target = solver.best;
        let mut chosen: Vec<usize> = Vec::with_capacity(target);
        let mut cand = Bits::full(m);
        'outer: while chosen.len() < target {
            let need = target - chosen.len();
            for v in cand.iter_ones().collect::<Vec<_>>() {
                let mut rest = cand.and(&solver.comp[v]);
                for u in 0..=v {
                    rest.clear(u);
                }
                if solver.exists(&rest, need - 1) {
                    chosen.push(v);
                    cand = rest;
                    continue 'outer;
                }
                if solver.exhausted {
                    break 'outer;
                }
            }
            break;
        }
        if chosen.len() == target {
            witness = chosen;
        }
    }

    witness.sort_unstable();
    let best_set: Vec<u64> = witness.iter().map(|&v| v as u64).collect();
    let result = SearchResult {
        m: modulus.value(),
        size: solver.best,
        best_set,
        exact: exact && !solver.exhausted,
        nodes_explored: solver.nodes,
        wall_time_ms: start.elapsed().as_millis() as u64,
    };
    debug_assert!(is_valid_set(&result.candidate_set()?).is_valid());
    Ok(result)
}

/// Greedy maximal valid set in the given vertex order (natural order by
/// default). Always valid, not necessarily maximum.
pub fn greedy_lower(modulus: &Modulus, order: Option<&[u64]>) -> Result<CandidateSet> {
    let graph = SdfGraph::build(modulus)?;
    let natural: Vec<u64>;
    let order = match order {
        Some(o) => o,
        None => {
            natural = (0..modulus.value()).collect();
            &natural
        }
    };
    let mut picked: Vec<u64> = Vec::new();
    for &v in order {
        if picked.iter().all(|&u| !graph.adjacent(u, v)) {
            picked.push(v);
        }
    }
    CandidateSet::new(modulus.clone(), &picked)
}
