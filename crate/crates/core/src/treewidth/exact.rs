//! Exact treewidth by two engines over elimination orderings:
//!
//! * subset dynamic programming, `TW(S) = min_{v in S} max(TW(S - v), |Q(S - v, v)|)`
//!   where `Q(S, v)` is the set of vertices outside `S + v` reachable from
//!   `v` through `S`;
//! * a depth-first decision search (`tw <= k`?) over elimination graphs,
//!   memoizing refuted eliminated-sets and pruned by minor-min-width.
//!
//! Both start from the min-fill upper bound. Results are deterministic.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::heuristics::{eliminate, elimination_width, full_mask, masks, min_fill_order, mmw_masks};
use super::{decomposition_from_elimination_order, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::{Graph, MaskIter, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    Auto,
    Dp,
    Bb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WidthMethod {
    SubsetDp,
    BranchAndBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WidthStatus {
    Exact,
    BoundsOnly,
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub method: MethodChoice,
    /// Largest graph the subset DP is used for under `Auto`.
    pub dp_max_vertices: usize,
    /// Cap on DP table entries and on memoized search states.
    pub state_limit: u64,
    /// Wall-clock budget for the decision search.
    pub time_limit: Duration,
    /// A lower bound known from elsewhere (e.g. a bramble order minus one).
    pub lower_bound_hint: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            method: MethodChoice::Auto,
            dp_max_vertices: 22,
            state_limit: 100_000_000,
            time_limit: Duration::from_secs(60),
            lower_bound_hint: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct WidthResult {
    /// The exact treewidth, or the upper bound when `status` is `BoundsOnly`.
    pub treewidth: usize,
    pub decomposition: TreeDecomposition,
    pub elimination_order: Vec<VertexId>,
    pub method: WidthMethod,
    pub status: WidthStatus,
    pub lower: usize,
    pub upper: usize,
    /// DP states or search nodes visited.
    pub nodes: u64,
}

pub fn exact_treewidth(g: &Graph, config: &SolverConfig) -> Result<WidthResult> {
    let n = g.vertex_count();
    let adj = masks(g)?;
    if n == 0 {
        return finish(g, Vec::new(), 0, 0, WidthMethod::SubsetDp, WidthStatus::Exact, 0);
    }
    let heuristic_order = min_fill_order(g)?;
    let upper = elimination_width(g, &heuristic_order)?;
    let lower = mmw_masks(&adj, full_mask(n)).max(config.lower_bound_hint);
    if lower > upper {
        return Err(Error::Contradiction(format!(
            "lower bound {lower} exceeds the width {upper} of an explicit elimination order"
        )));
    }

    let dp_fits = n < 64 && (1u64 << n) <= config.state_limit;
    let method = match config.method {
        MethodChoice::Dp => WidthMethod::SubsetDp,
        MethodChoice::Bb => WidthMethod::BranchAndBound,
        MethodChoice::Auto if n <= config.dp_max_vertices && dp_fits => WidthMethod::SubsetDp,
        MethodChoice::Auto => WidthMethod::BranchAndBound,
    };

    if lower == upper {
        return finish(g, heuristic_order, upper, upper, method, WidthStatus::Exact, 0);
    }

    match method {
        WidthMethod::SubsetDp if !dp_fits => {
            finish(g, heuristic_order, lower, upper, method, WidthStatus::BoundsOnly, 0)
        }
        WidthMethod::SubsetDp => {
            let (width, order, states) = subset_dp(&adj, upper);
            let order = if width == upper { heuristic_order } else { order };
            finish(g, order, width, width, method, WidthStatus::Exact, states)
        }
        WidthMethod::BranchAndBound => {
            let deadline = Instant::now() + config.time_limit;
            let mut nodes = 0;
            for k in lower..upper {
                let mut search = DecisionSearch {
                    k,
                    deadline,
                    nodes: 0,
                    failed: HashSet::new(),
                    state_limit: config.state_limit,
                };
                let mut order = Vec::with_capacity(n);
                let outcome = search.run(&adj, full_mask(n), &mut order);
                nodes += search.nodes;
                match outcome {
                    Some(true) => {
                        return finish(g, order, k, k, method, WidthStatus::Exact, nodes);
                    }
                    Some(false) => {}
                    None => {
                        return finish(g, heuristic_order, k, upper, method, WidthStatus::BoundsOnly, nodes);
                    }
                }
            }
            finish(g, heuristic_order, upper, upper, method, WidthStatus::Exact, nodes)
        }
    }
}

fn finish(
    g: &Graph,
    order: Vec<VertexId>,
    lower: usize,
    upper: usize,
    method: WidthMethod,
    status: WidthStatus,
    nodes: u64,
) -> Result<WidthResult> {
    let decomposition = decomposition_from_elimination_order(g, &order)?;
    let width = decomposition.width();
    assert_eq!(width, upper, "elimination order width disagrees with the solver");
    Ok(WidthResult {
        treewidth: upper,
        decomposition,
        elimination_order: order,
        method,
        status,
        lower,
        upper,
        nodes,
    })
}

/// `|Q(set, v)|`: vertices outside `set + v` adjacent to the component of
/// `v` in `G[set + v]`.
fn q_size(adj: &[u64], set: u64, v: VertexId) -> u32 {
    let mut comp = 1u64 << v;
    let mut frontier = comp;
    let mut boundary = 0u64;
    while frontier != 0 {
        let mut nb = 0u64;
        for u in MaskIter(frontier) {
            nb |= adj[u];
        }
        boundary |= nb;
        frontier = nb & set & !comp;
        comp |= frontier;
    }
    (boundary & !set & !(1u64 << v)).count_ones()
}

/// Returns `(width, elimination order, states)`. Values are capped at
/// `cap`; when the width equals `cap` the returned order is meaningless
/// and the caller uses its own order of that width.
fn subset_dp(adj: &[u64], cap: usize) -> (usize, Vec<VertexId>, u64) {
    let n = adj.len();
    let cap = cap.min(u8::MAX as usize) as u8;
    let size = 1usize << n;
    let mut table = vec![0u8; size];
    for s in 1..size as u64 {
        let mut best = cap;
        for v in MaskIter(s) {
            let prev = s & !(1u64 << v);
            let before = table[prev as usize];
            if before >= best {
                continue;
            }
            let q = q_size(adj, prev, v).min(cap as u32) as u8;
            let value = before.max(q);
            if value < best {
                best = value;
            }
        }
        table[s as usize] = best;
    }
    let full = (size - 1) as u64;
    let width = table[full as usize];
    let mut order = Vec::with_capacity(n);
    if width < cap {
        // walk back: pick the lowest last vertex realizing each optimum
        let mut s = full;
        while s != 0 {
            let target = table[s as usize];
            let v = MaskIter(s)
                .find(|&v| {
                    let prev = s & !(1u64 << v);
                    table[prev as usize].max(q_size(adj, prev, v) as u8) == target
                })
                .expect("DP table has no realizing vertex");
            order.push(v);
            s &= !(1u64 << v);
        }
        order.reverse();
    }
    (width as usize, order, size as u64)
}

struct DecisionSearch {
    k: usize,
    deadline: Instant,
    nodes: u64,
    failed: HashSet<u64>,
    state_limit: u64,
}

impl DecisionSearch {
    /// `Some(true)` with `order` extended to a full elimination order of
    /// width `<= k`, `Some(false)` if none exists from this state, `None`
    /// when out of time or memory.
    fn run(&mut self, adj: &[u64], alive: u64, order: &mut Vec<VertexId>) -> Option<bool> {
        self.nodes += 1;
        if self.nodes.is_multiple_of(4096)
            && (Instant::now() > self.deadline || self.failed.len() as u64 > self.state_limit)
        {
            return None;
        }
        if alive.count_ones() as usize <= self.k + 1 {
            order.extend(MaskIter(alive));
            return Some(true);
        }
        if self.failed.contains(&alive) {
            return Some(false);
        }

        // A low-degree simplicial or almost simplicial vertex can always go
        // first without losing feasibility.
        let forced = MaskIter(alive)
            .find(|&v| adj[v].count_ones() as usize <= self.k && almost_simplicial(adj, v));
        let candidates: Vec<VertexId> = match forced {
            Some(v) => vec![v],
            None => {
                if mmw_masks(adj, alive) > self.k {
                    self.failed.insert(alive);
                    return Some(false);
                }
                MaskIter(alive)
                    .filter(|&v| adj[v].count_ones() as usize <= self.k)
                    .collect()
            }
        };

        let mut next = adj.to_vec();
        for v in candidates {
            next.copy_from_slice(adj);
            eliminate(&mut next, v);
            order.push(v);
            match self.run(&next, alive & !(1u64 << v), order) {
                Some(true) => return Some(true),
                Some(false) => {
                    order.pop();
                }
                None => return None,
            }
        }
        self.failed.insert(alive);
        Some(false)
    }
}

/// All neighbours of `v`, except possibly one, are pairwise adjacent.
fn almost_simplicial(adj: &[u64], v: VertexId) -> bool {
    let nb = adj[v];
    let is_clique = |set: u64| MaskIter(set).all(|u| set & !(1u64 << u) & !adj[u] == 0);
    is_clique(nb) || MaskIter(nb).any(|w| is_clique(nb & !(1u64 << w)))
}
