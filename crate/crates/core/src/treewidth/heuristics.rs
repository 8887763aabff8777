//! Bitmask elimination heuristics (graphs of at most 64 vertices).

use crate::error::{Error, Result};
use crate::graph::{check_permutation, Graph, MaskIter, VertexId};

pub(crate) fn masks(g: &Graph) -> Result<Vec<u64>> {
    g.neighbor_masks().ok_or(Error::TooLarge {
        vertex_count: g.vertex_count(),
        limit: 64,
    })
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Removes `v` from the elimination graph and turns its neighbourhood into
/// a clique.
pub(crate) fn eliminate(adj: &mut [u64], v: VertexId) {
    let nb = adj[v];
    for u in MaskIter(nb) {
        adj[u] |= nb;
        adj[u] &= !(1u64 << u);
        adj[u] &= !(1u64 << v);
    }
    adj[v] = 0;
}

fn fill_in(adj: &[u64], v: VertexId) -> u32 {
    let nb = adj[v];
    let missing: u32 = MaskIter(nb).map(|u| (nb & !adj[u] & !(1u64 << u)).count_ones()).sum();
    missing / 2
}

/// Greedy min-fill ordering; ties go to smaller degree, then lower id.
pub fn min_fill_order(g: &Graph) -> Result<Vec<VertexId>> {
    let mut adj = masks(g)?;
    let mut alive = full_mask(g.vertex_count());
    let mut order = Vec::with_capacity(g.vertex_count());
    while alive != 0 {
        let v = MaskIter(alive)
            .min_by_key(|&v| (fill_in(&adj, v), adj[v].count_ones(), v))
            .unwrap();
        eliminate(&mut adj, v);
        alive &= !(1u64 << v);
        order.push(v);
    }
    Ok(order)
}

/// Width of the decomposition induced by an elimination order.
pub fn elimination_width(g: &Graph, order: &[VertexId]) -> Result<usize> {
    check_permutation(order, g.vertex_count())?;
    let mut adj = masks(g)?;
    let mut width = 0;
    for &v in order {
        width = width.max(adj[v].count_ones() as usize);
        eliminate(&mut adj, v);
    }
    Ok(width)
}

/// Minor-min-width lower bound: repeatedly take a minimum-degree vertex,
/// record its degree, and contract it into its least-degree neighbour.
pub fn minor_min_width(g: &Graph) -> Result<usize> {
    let adj = masks(g)?;
    Ok(mmw_masks(&adj, full_mask(g.vertex_count())))
}

pub(crate) fn mmw_masks(adj: &[u64], alive: u64) -> usize {
    let mut adj: Vec<u64> = adj.iter().map(|&a| a & alive).collect();
    let mut alive = alive;
    let mut bound = 0;
    while alive.count_ones() > 1 {
        let v = MaskIter(alive).min_by_key(|&v| (adj[v].count_ones(), v)).unwrap();
        let deg = adj[v].count_ones() as usize;
        bound = bound.max(deg);
        if deg == 0 {
            alive &= !(1u64 << v);
            continue;
        }
        let u = MaskIter(adj[v]).min_by_key(|&u| (adj[u].count_ones(), u)).unwrap();
        // contract v into u
        let moved = adj[v] & !(1u64 << u);
        adj[u] |= moved;
        for w in MaskIter(moved) {
            adj[w] |= 1u64 << u;
        }
        for w in MaskIter(adj[v]) {
            adj[w] &= !(1u64 << v);
        }
        adj[v] = 0;
        alive &= !(1u64 << v);
    }
    bound
}
