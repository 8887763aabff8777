//! Independent brute-force oracles and random instance generators shared
//! by the integration tests. Nothing here calls the solvers under test.

#![allow(dead_code)]

use glued_grids::bramble::sets_touch;
use glued_grids::{Graph, VertexSet};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random tree on `n` vertices plus each remaining pair with probability `p`.
pub fn random_connected_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !edges.contains(&(u, v)) && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Grows a connected set from a random seed vertex.
pub fn random_connected_set<R: Rng>(rng: &mut R, g: &Graph, size: usize) -> VertexSet {
    let n = g.vertex_count();
    let mut set = VertexSet::new(n);
    set.insert(rng.gen_range(0..n));
    while set.len() < size {
        let frontier: Vec<usize> = set
            .iter()
            .flat_map(|v| g.neighbors(v).iter().copied())
            .filter(|&u| !set.contains(u))
            .collect();
        match frontier.choose(rng) {
            Some(&u) => set.insert(u),
            None => break,
        }
    }
    set
}

/// Random connected sets, each kept only if it touches every kept set.
pub fn random_bramble<R: Rng>(rng: &mut R, g: &Graph, attempts: usize) -> Vec<VertexSet> {
    let mut kept: Vec<VertexSet> = Vec::new();
    for _ in 0..attempts {
        let size = rng.gen_range(1..=g.vertex_count().div_ceil(2));
        let s = random_connected_set(rng, g, size);
        if !kept.contains(&s) && kept.iter().all(|k| sets_touch(g, k, &s)) {
            kept.push(s);
        }
    }
    kept
}

/// Minimum hitting set by scanning all subsets; ties go to the
/// lexicographically least sorted vertex list.
pub fn brute_min_hitting_set(universe: usize, sets: &[u64]) -> (usize, Vec<usize>) {
    let mut best: Option<(usize, Vec<usize>)> = None;
    for mask in 0u64..(1u64 << universe) {
        if !sets.iter().all(|&s| s & mask != 0) {
            continue;
        }
        let size = mask.count_ones() as usize;
        let list: Vec<usize> = (0..universe).filter(|&v| mask >> v & 1 == 1).collect();
        let better = match &best {
            None => true,
            Some((b, l)) => size < *b || (size == *b && list < *l),
        };
        if better {
            best = Some((size, list));
        }
    }
    best.expect("the full vertex set hits everything")
}

fn adjacency_sets(g: &Graph) -> Vec<std::collections::BTreeSet<usize>> {
    (0..g.vertex_count())
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect()
}

/// Width of an elimination order by direct simulation.
pub fn brute_elimination_width(g: &Graph, order: &[usize]) -> usize {
    let mut adj = adjacency_sets(g);
    let mut width = 0;
    for &v in order {
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        width = width.max(nb.len());
        for &a in &nb {
            adj[a].remove(&v);
            for &b in &nb {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
        adj[v].clear();
    }
    width
}

/// Treewidth as the minimum over all elimination orders (small graphs).
pub fn brute_treewidth(g: &Graph) -> usize {
    fn permute(k: usize, order: &mut Vec<usize>, g: &Graph, best: &mut usize) {
        if k == order.len() {
            *best = (*best).min(brute_elimination_width(g, order));
            return;
        }
        for i in k..order.len() {
            order.swap(k, i);
            permute(k + 1, order, g, best);
            order.swap(k, i);
        }
    }
    let mut order: Vec<usize> = (0..g.vertex_count()).collect();
    let mut best = usize::MAX;
    permute(0, &mut order, g, &mut best);
    best
}

/// `d - L s` computed from the edge list.
pub fn fire_brute(g: &Graph, d: &[i64], s: &[i64]) -> Vec<i64> {
    let mut out = d.to_vec();
    for (u, v) in g.edges() {
        out[u] -= s[u] - s[v];
        out[v] -= s[v] - s[u];
    }
    out
}

/// Reducedness by definition: nonnegative off `q`, and every nonempty
/// `A` avoiding `q` has a member that would go into debt if `A` fired.
pub fn is_reduced_brute(g: &Graph, d: &[i64], q: usize) -> bool {
    let n = g.vertex_count();
    if (0..n).any(|v| v != q && d[v] < 0) {
        return false;
    }
    let others: Vec<usize> = (0..n).filter(|&v| v != q).collect();
    for mask in 1u64..(1u64 << others.len()) {
        let inside: Vec<bool> = {
            let mut b = vec![false; n];
            for (i, &v) in others.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    b[v] = true;
                }
            }
            b
        };
        let can_fire = (0..n).filter(|&v| inside[v]).all(|v| {
            let out = g.neighbors(v).iter().filter(|&&u| !inside[u]).count() as i64;
            d[v] >= out
        });
        if can_fire {
            return false;
        }
    }
    true
}

/// All distinct reduced divisors reachable from `d` by scripts with entries
/// in `0..=bound`.
pub fn reduced_in_script_box(g: &Graph, d: &[i64], q: usize, bound: i64) -> Vec<Vec<i64>> {
    let n = g.vertex_count();
    let mut found: Vec<Vec<i64>> = Vec::new();
    let mut s = vec![0i64; n];
    loop {
        let e = fire_brute(g, d, &s);
        if is_reduced_brute(g, &e, q) && !found.contains(&e) {
            found.push(e);
        }
        let mut i = 0;
        while i < n && s[i] == bound {
            s[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        s[i] += 1;
    }
    found
}

/// Whether some script in `0..=bound` makes `d` effective.
pub fn effective_in_script_box(g: &Graph, d: &[i64], bound: i64) -> bool {
    let n = g.vertex_count();
    let mut s = vec![0i64; n];
    loop {
        if fire_brute(g, d, &s).iter().all(|&c| c >= 0) {
            return true;
        }
        let mut i = 0;
        while i < n && s[i] == bound {
            s[i] = 0;
            i += 1;
        }
        if i == n {
            return false;
        }
        s[i] += 1;
    }
}

pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}
