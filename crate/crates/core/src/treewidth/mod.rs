//! Tree decompositions, their validation, and exact treewidth.

mod exact;
mod heuristics;
pub mod report;

pub use exact::{exact_treewidth, MethodChoice, SolverConfig, WidthMethod, WidthResult, WidthStatus};
pub use heuristics::{elimination_width, min_fill_order, minor_min_width};

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::bramble::Bramble;
use crate::error::{Error, Result};
use crate::graph::{check_permutation, Graph, VertexId, VertexSet};

/// A tree whose nodes `0..bags.len()` carry vertex bags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<VertexSet>,
    edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Checks only that the node structure is a tree; use
    /// [`validate_tree_decomposition`] for the bag conditions.
    pub fn new(bags: Vec<VertexSet>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let nodes = bags.len();
        if nodes == 0 {
            return Err(Error::NotATree("no nodes".into()));
        }
        if let Some(first) = bags.first() {
            if bags.iter().any(|b| b.universe() != first.universe()) {
                return Err(Error::NotATree("bags over different vertex universes".into()));
            }
        }
        if edges.len() != nodes - 1 {
            return Err(Error::NotATree(format!(
                "{} edges for {nodes} nodes",
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); nodes];
        for &(a, b) in &edges {
            if a >= nodes || b >= nodes {
                return Err(Error::NotATree(format!("edge {a}-{b} names a missing node")));
            }
            if a == b {
                return Err(Error::NotATree(format!("loop at node {a}")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let reached = bfs_component(&adj, 0, None).len();
        if reached != nodes {
            return Err(Error::NotATree("node graph is disconnected".into()));
        }
        Ok(TreeDecomposition { bags, edges })
    }

    pub fn bags(&self) -> &[VertexSet] {
        &self.bags
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    pub fn vertex_universe(&self) -> usize {
        self.bags[0].universe()
    }

    pub fn max_bag_size(&self) -> usize {
        self.bags.iter().map(VertexSet::len).max().unwrap_or(0)
    }

    /// Largest bag size minus one (0 for all-empty bags).
    pub fn width(&self) -> usize {
        self.max_bag_size().saturating_sub(1)
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }
}

fn bfs_component(adj: &[Vec<usize>], start: usize, cut: Option<(usize, usize)>) -> Vec<usize> {
    let mut seen = vec![false; adj.len()];
    seen[start] = true;
    let mut order = vec![start];
    let mut queue = VecDeque::from([start]);
    while let Some(t) = queue.pop_front() {
        for &s in &adj[t] {
            let is_cut = cut.is_some_and(|(a, b)| (a, b) == (t, s) || (b, a) == (t, s));
            if !seen[s] && !is_cut {
                seen[s] = true;
                order.push(s);
                queue.push_back(s);
            }
        }
    }
    order
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "condition")]
pub enum Violation {
    /// (1) a vertex in no bag.
    MissingVertex { vertex: VertexId },
    /// (2) an edge whose endpoints share no bag.
    UncoveredEdge { u: VertexId, v: VertexId },
    /// (3) the nodes containing a vertex do not form a subtree.
    DisconnectedTrace { vertex: VertexId },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum Validation {
    Valid { width: usize },
    Invalid { violation: Violation },
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validation::Valid { .. })
    }
}

/// Checks vertex coverage, edge coverage and subtree connectivity, in that
/// order, and reports the first failure.
pub fn validate_tree_decomposition(g: &Graph, td: &TreeDecomposition) -> Result<Validation> {
    let n = g.vertex_count();
    if td.vertex_universe() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: td.vertex_universe(),
        });
    }
    let invalid = |violation| Ok(Validation::Invalid { violation });

    let mut covered = VertexSet::new(n);
    for bag in td.bags() {
        covered.union_with(bag);
    }
    if let Some(vertex) = (0..n).find(|&v| !covered.contains(v)) {
        return invalid(Violation::MissingVertex { vertex });
    }

    for (u, v) in g.edges() {
        if !td.bags().iter().any(|b| b.contains(u) && b.contains(v)) {
            return invalid(Violation::UncoveredEdge { u, v });
        }
    }

    let adj = td.adjacency();
    for vertex in 0..n {
        let holders: Vec<usize> = (0..td.node_count()).filter(|&t| td.bags[t].contains(vertex)).collect();
        // BFS restricted to nodes holding the vertex
        let mut seen = vec![false; td.node_count()];
        seen[holders[0]] = true;
        let mut queue = VecDeque::from([holders[0]]);
        let mut reached = 1;
        while let Some(t) = queue.pop_front() {
            for &s in &adj[t] {
                if !seen[s] && td.bags[s].contains(vertex) {
                    seen[s] = true;
                    reached += 1;
                    queue.push_back(s);
                }
            }
        }
        if reached != holders.len() {
            return invalid(Violation::DisconnectedTrace { vertex });
        }
    }
    Ok(Validation::Valid { width: td.width() })
}

/// Bag of `v` = `v` plus its later neighbors in the filled graph; the parent
/// of that bag is the bag of the earliest-eliminated later neighbor. Roots
/// of separate components are chained together.
pub fn decomposition_from_elimination_order(g: &Graph, order: &[VertexId]) -> Result<TreeDecomposition> {
    let n = g.vertex_count();
    check_permutation(order, n)?;
    if n == 0 {
        return TreeDecomposition::new(vec![VertexSet::new(0)], Vec::new());
    }
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut fill: Vec<VertexSet> = (0..n)
        .map(|v| VertexSet::from_vertices(n, g.neighbors(v).iter().copied()))
        .collect();

    let mut bags = Vec::with_capacity(n);
    let mut parent: Vec<Option<VertexId>> = vec![None; n];
    for &v in order {
        let later: Vec<VertexId> = fill[v].iter().filter(|&w| position[w] > position[v]).collect();
        for &a in &later {
            for &b in &later {
                if a != b {
                    fill[a].insert(b);
                }
            }
        }
        parent[v] = later.iter().copied().min_by_key(|&w| position[w]);
        let mut bag = VertexSet::from_vertices(n, later);
        bag.insert(v);
        bags.push(bag);
    }

    // node i holds the bag of order[i]
    let mut edges = Vec::with_capacity(n - 1);
    let mut previous_root: Option<usize> = None;
    for (i, &v) in order.iter().enumerate() {
        match parent[v] {
            Some(p) => edges.push((i, position[p])),
            None => {
                if let Some(r) = previous_root {
                    edges.push((r, i));
                }
                previous_root = Some(i);
            }
        }
    }
    TreeDecomposition::new(bags, edges)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringBag {
    pub node: usize,
    pub bag: Vec<VertexId>,
    /// The intersection of two adjacent bags already covered the bramble;
    /// `node` is the smaller of the two.
    pub via_separator: bool,
}

/// Finds a bag hitting every bramble element by orienting each tree edge
/// toward the side that contains the elements missed by the edge's
/// separator, then walking to a sink.
///
/// Panics if the orientation argument breaks down on a validated input,
/// since that can only be an internal bug.
pub fn covering_bag(g: &Graph, td: &TreeDecomposition, b: &Bramble) -> Result<CoveringBag> {
    if !validate_tree_decomposition(g, td)?.is_valid() {
        return Err(Error::InvalidInput("decomposition is not valid for the graph".into()));
    }
    if b.graph().vertex_count() != g.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: g.vertex_count(),
            found: b.graph().vertex_count(),
        });
    }
    let adj = td.adjacency();
    let bags = td.bags();

    // out[t] = neighbour that edge t-s points to, if oriented away from t
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); td.node_count()];
    for &(t1, t2) in td.tree_edges() {
        let mut separator = bags[t1].clone();
        separator.intersect_with(&bags[t2]);
        if b.is_hit_by(&separator) {
            let node = if (bags[t2].len(), t2) < (bags[t1].len(), t1) { t2 } else { t1 };
            return Ok(CoveringBag {
                node,
                bag: bags[node].to_vec(),
                via_separator: true,
            });
        }
        let mut side_one = VertexSet::new(g.vertex_count());
        for t in bfs_component(&adj, t1, Some((t1, t2))) {
            side_one.union_with(&bags[t]);
        }
        let mut toward: Option<usize> = None;
        for element in b.elements().iter().filter(|e| !e.intersects(&separator)) {
            let here = if element.is_subset(&side_one) { t1 } else { t2 };
            match toward {
                None => toward = Some(here),
                Some(prev) => assert_eq!(
                    prev, here,
                    "bramble elements missed by separator of edge {t1}-{t2} lie on both sides"
                ),
            }
        }
        let toward = toward.expect("separator misses some element");
        let from = if toward == t1 { t2 } else { t1 };
        out[from].push(toward);
    }

    let mut t = 0;
    let mut steps = 0;
    while let Some(&next) = out[t].first() {
        t = next;
        steps += 1;
        assert!(steps <= td.node_count(), "edge orientation contains a cycle");
    }
    assert!(
        b.is_hit_by(&bags[t]),
        "sink bag {t} does not cover the bramble"
    );
    Ok(CoveringBag {
        node: t,
        bag: bags[t].to_vec(),
        via_separator: false,
    })
}
