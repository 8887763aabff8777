//! Exact minimum hitting sets (bramble order).
//!
//! Iterative deepening over the target size `k`: a depth-first search
//! branches on the vertices of a smallest unhit set, pruned by a greedy
//! packing of pairwise disjoint unhit sets. Once the optimum is known, the
//! lexicographically least optimal witness is extracted vertex by vertex,
//! so results never depend on search order.

use serde::{Deserialize, Serialize};

use crate::bramble::Bramble;
use crate::error::{Error, Result};
use crate::graph::{MaskIter, VertexSet};

/// Above this many `(subset, set)` checks the exhaustive confirmation of the
/// lower bound is skipped and the branch-and-bound refutation stands alone.
const EXHAUSTIVE_WORK_LIMIT: u128 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProofStatus {
    /// Every subset of size `order - 1` was enumerated and none hits all.
    Exhaustive,
    /// Branch and bound refuted every size below `order`.
    BranchAndBound,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderCertificate {
    pub order: usize,
    pub witness: VertexSet,
    pub proof: ProofStatus,
    /// Search nodes visited, a deterministic measure of effort.
    pub nodes: u64,
}

pub fn min_hitting_set(b: &Bramble, budget: Option<usize>) -> Result<OrderCertificate> {
    let universe = b.graph().vertex_count();
    let masks = b
        .elements()
        .iter()
        .map(|e| e.to_mask())
        .collect::<Option<Vec<u64>>>()
        .ok_or(Error::TooLarge {
            vertex_count: universe,
            limit: 64,
        })?;
    min_hitting_set_masks(universe, &masks, budget)
}

/// Minimum hitting set of an arbitrary family of nonempty subsets of
/// `0..universe` (`universe <= 64`). `budget` defaults to `universe`.
pub fn min_hitting_set_masks(universe: usize, sets: &[u64], budget: Option<usize>) -> Result<OrderCertificate> {
    if universe > 64 {
        return Err(Error::TooLarge {
            vertex_count: universe,
            limit: 64,
        });
    }
    let full = if universe == 64 { u64::MAX } else { (1u64 << universe) - 1 };
    if sets.iter().any(|&s| s == 0 || s & !full != 0) {
        return Err(Error::InvalidInput("sets must be nonempty subsets of the universe".into()));
    }
    let budget = budget.unwrap_or(universe);
    let family = minimal_sets(sets);
    let mut search = Search {
        sets: &family,
        nodes: 0,
    };

    if family.is_empty() {
        return Ok(OrderCertificate {
            order: 0,
            witness: VertexSet::new(universe),
            proof: ProofStatus::Exhaustive,
            nodes: 0,
        });
    }

    let lower = packing_bound(&family, 0, full);
    let upper = greedy_hitting_set(&family).count_ones() as usize;
    let mut order = None;
    for k in lower..=upper.min(budget) {
        if search.exists(0, k, full) {
            order = Some(k);
            break;
        }
    }
    let Some(order) = order else {
        return Err(Error::OrderAboveBudget {
            budget,
            lower: budget.max(lower - 1) + 1,
            upper,
        });
    };

    // lexicographically least optimal witness
    let mut chosen = 0u64;
    let mut last: Option<usize> = None;
    for slot in 0..order {
        let start = last.map_or(0, |l| l + 1);
        let mut fixed = false;
        for v in start..universe {
            let allowed = if v >= 63 { 0 } else { full & !((2u64 << v) - 1) };
            if search.exists(chosen | (1 << v), order - slot - 1, allowed) {
                chosen |= 1 << v;
                last = Some(v);
                fixed = true;
                break;
            }
        }
        assert!(fixed, "hitting set of size {order} vanished during witness extraction");
    }

    let proof = if order == 0 || exhaustive_refutes(universe, &family, order - 1) {
        ProofStatus::Exhaustive
    } else {
        ProofStatus::BranchAndBound
    };
    Ok(OrderCertificate {
        order,
        witness: VertexSet::from_mask(universe, chosen),
        proof,
        nodes: search.nodes,
    })
}

/// Drops duplicates and supersets: any set hitting the minimal members hits
/// the whole family.
fn minimal_sets(sets: &[u64]) -> Vec<u64> {
    let mut sorted: Vec<u64> = sets.to_vec();
    sorted.sort_unstable_by_key(|s| (s.count_ones(), *s));
    sorted.dedup();
    let mut kept: Vec<u64> = Vec::new();
    for s in sorted {
        if !kept.iter().any(|&k| k & !s == 0) {
            kept.push(s);
        }
    }
    kept
}

/// Number of pairwise disjoint unhit sets found greedily (smallest first),
/// measured inside `allowed`.
fn packing_bound(sets: &[u64], chosen: u64, allowed: u64) -> usize {
    let mut unhit: Vec<u64> = sets
        .iter()
        .filter(|&&s| s & chosen == 0)
        .map(|&s| s & allowed)
        .collect();
    unhit.sort_unstable_by_key(|s| (s.count_ones(), *s));
    let mut used = 0u64;
    let mut count = 0;
    for s in unhit {
        if s & used == 0 {
            used |= s;
            count += 1;
        }
    }
    count
}

fn greedy_hitting_set(sets: &[u64]) -> u64 {
    let mut chosen = 0u64;
    loop {
        let unhit: Vec<u64> = sets.iter().copied().filter(|&s| s & chosen == 0).collect();
        if unhit.is_empty() {
            return chosen;
        }
        let best = (0..64)
            .max_by_key(|&v| (unhit.iter().filter(|&&s| s >> v & 1 == 1).count(), std::cmp::Reverse(v)))
            .unwrap();
        chosen |= 1 << best;
    }
}

struct Search<'a> {
    sets: &'a [u64],
    nodes: u64,
}

impl Search<'_> {
    /// Can `chosen` be extended by at most `remaining` vertices from
    /// `allowed` into a hitting set?
    fn exists(&mut self, chosen: u64, remaining: usize, allowed: u64) -> bool {
        self.nodes += 1;
        let mut pick: Option<u64> = None;
        for &s in self.sets {
            if s & chosen != 0 {
                continue;
            }
            let avail = s & allowed;
            if avail == 0 {
                return false;
            }
            if pick.is_none_or(|p| avail.count_ones() < p.count_ones()) {
                pick = Some(avail);
            }
        }
        let Some(branch) = pick else {
            return true;
        };
        if remaining == 0 || packing_bound(self.sets, chosen, allowed) > remaining {
            return false;
        }
        let mut allowed = allowed;
        for v in MaskIter(branch) {
            if self.exists(chosen | (1 << v), remaining - 1, allowed) {
                return true;
            }
            // later siblings need not consider v again
            allowed &= !(1 << v);
        }
        false
    }
}

/// True if no subset of size `size` hits every set, checked by direct
/// enumeration when affordable. Returns false when skipped.
fn exhaustive_refutes(universe: usize, sets: &[u64], size: usize) -> bool {
    let combos = binomial(universe as u128, size as u128);
    if combos.saturating_mul(sets.len() as u128) > EXHAUSTIVE_WORK_LIMIT {
        return false;
    }
    if size == 0 {
        return !sets.is_empty();
    }
    let mut subset: u64 = (1u64 << size) - 1;
    let limit = if universe == 64 { u64::MAX } else { 1u64 << universe };
    loop {
        if sets.iter().all(|&s| s & subset != 0) {
            return false;
        }
        // Gosper's hack
        let c = subset & subset.wrapping_neg();
        let r = subset.wrapping_add(c);
        if r == 0 || r >= limit {
            return true;
        }
        subset = (((r ^ subset) >> 2) / c) | r;
        if subset >= limit {
            return true;
        }
    }
}

pub(crate) fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}
