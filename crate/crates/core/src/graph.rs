//! Simple undirected graphs and the grid-like families built from path and
//! cycle factors.
//!
//! Vertex `(i, j)` of an `m x n` family graph (row `i`, column `j`) always has
//! index `i * n + j`. Brambles, divisors and the file formats rely on this.

use std::collections::VecDeque;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = usize;

/// Membership bitset over `0..universe`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(FixedBitSet);

impl VertexSet {
    pub fn new(universe: usize) -> Self {
        VertexSet(FixedBitSet::with_capacity(universe))
    }

    pub fn from_vertices<I: IntoIterator<Item = VertexId>>(universe: usize, vertices: I) -> Self {
        let mut set = Self::new(universe);
        for v in vertices {
            set.insert(v);
        }
        set
    }

    /// Lowest `universe` bits of `mask`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        Self::from_vertices(universe, MaskIter(mask))
    }

    pub fn universe(&self) -> usize {
        self.0.len()
    }

    /// Panics if `v` is outside the universe.
    pub fn insert(&mut self, v: VertexId) {
        self.0.insert(v);
    }

    pub fn remove(&mut self, v: VertexId) {
        self.0.set(v, false);
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(v)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.0.ones()
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        !self.0.is_disjoint(&other.0)
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.0.union_with(&other.0);
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.0.intersect_with(&other.0);
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Bitmask form, available when the universe fits in 64 bits.
    pub fn to_mask(&self) -> Option<u64> {
        if self.universe() > 64 {
            return None;
        }
        Some(self.iter().fold(0u64, |m, v| m | (1 << v)))
    }

    pub fn to_vec(&self) -> Vec<VertexId> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Iterates the set bits of a `u64`, lowest first.
#[derive(Clone, Copy, Debug)]
pub struct MaskIter(pub u64);

impl Iterator for MaskIter {
    type Item = VertexId;

    fn next(&mut self) -> Option<VertexId> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Path,
    Cycle,
    Grid,
    StackedPrism,
    ToroidalGrid,
    Product,
    Other,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Path => "path",
            FamilyKind::Cycle => "cycle",
            FamilyKind::Grid => "grid",
            FamilyKind::StackedPrism => "stacked_prism",
            FamilyKind::ToroidalGrid => "toroidal_grid",
            FamilyKind::Product => "product",
            FamilyKind::Other => "other",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "path" => FamilyKind::Path,
            "cycle" => FamilyKind::Cycle,
            "grid" => FamilyKind::Grid,
            "stacked_prism" | "prism" => FamilyKind::StackedPrism,
            "toroidal_grid" | "torus" => FamilyKind::ToroidalGrid,
            "product" => FamilyKind::Product,
            "other" => FamilyKind::Other,
            _ => return None,
        })
    }

    /// Single-letter symbol used in labels such as `Y4,2`.
    fn symbol(self) -> &'static str {
        match self {
            FamilyKind::Path => "P",
            FamilyKind::Cycle => "C",
            FamilyKind::Grid => "G",
            FamilyKind::StackedPrism => "Y",
            FamilyKind::ToroidalGrid => "T",
            FamilyKind::Product => "X",
            FamilyKind::Other => "H",
        }
    }
}

/// Which factor structure a graph was built from. `m` counts rows and `n`
/// counts columns; for paths and cycles `m` is the length and `n = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyMeta {
    pub kind: FamilyKind,
    pub m: usize,
    pub n: usize,
}

impl FamilyMeta {
    pub fn has_coordinates(&self) -> bool {
        matches!(
            self.kind,
            FamilyKind::Grid | FamilyKind::StackedPrism | FamilyKind::ToroidalGrid | FamilyKind::Product
        )
    }

    /// Short label, e.g. `Y4,2` or `T5,3`.
    pub fn label(&self) -> String {
        match self.kind {
            FamilyKind::Path | FamilyKind::Cycle => format!("{}{}", self.kind.symbol(), self.m),
            _ => format!("{}{},{}", self.kind.symbol(), self.m, self.n),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Line {
    Row,
    Column,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinorOp {
    DeleteEdge,
    ContractEdge,
}

/// A simple undirected graph on vertices `0..vertex_count`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<VertexId>>,
    edge_count: usize,
    family: Option<FamilyMeta>,
    simplified: bool,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.vertex_count())
            .field("edges", &self.edge_count)
            .field("family", &self.family)
            .field("simplified", &self.simplified)
            .finish()
    }
}

impl Graph {
    /// Builds a graph from an edge list. Loops and repeated edges are rejected.
    pub fn from_edges<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut adj = vec![Vec::new(); vertex_count];
        let mut edge_count = 0;
        for (u, v) in edges {
            for x in [u, v] {
                if x >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        vertex: x,
                        vertex_count,
                    });
                }
            }
            if u == v {
                return Err(Error::NotSimple(format!("loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
            edge_count += 1;
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::NotSimple(format!("parallel edges at vertex {u}")));
            }
        }
        Ok(Graph {
            adj,
            edge_count,
            family: None,
            simplified: false,
        })
    }

    pub fn with_family(mut self, family: Option<FamilyMeta>) -> Self {
        self.family = family;
        self
    }

    pub fn path(k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidFamily("path needs at least 1 vertex".into()));
        }
        let g = Self::from_edges(k, (1..k).map(|i| (i - 1, i)))?;
        Ok(g.with_family(Some(FamilyMeta {
            kind: FamilyKind::Path,
            m: k,
            n: 1,
        })))
    }

    pub fn cycle(k: usize) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidFamily(format!(
                "cycle needs at least 3 vertices, got {k}"
            )));
        }
        let g = Self::from_edges(k, (0..k).map(|i| (i, (i + 1) % k)))?;
        Ok(g.with_family(Some(FamilyMeta {
            kind: FamilyKind::Cycle,
            m: k,
            n: 1,
        })))
    }

    pub fn complete(k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidFamily("complete graph needs a vertex".into()));
        }
        let edges = (0..k).flat_map(|u| (u + 1..k).map(move |v| (u, v)));
        let g = Self::from_edges(k, edges)?;
        Ok(g.with_family(Some(FamilyMeta {
            kind: FamilyKind::Other,
            m: k,
            n: 1,
        })))
    }

    /// Cartesian product; vertex `(a, b)` gets index `a * |V(h)| + b`.
    ///
    /// Products of path/cycle factors are tagged with the matching family.
    pub fn cartesian_product(g: &Graph, h: &Graph) -> Result<Self> {
        let (gn, hn) = (g.vertex_count(), h.vertex_count());
        if gn == 0 || hn == 0 {
            return Err(Error::InvalidInput("product of an empty graph".into()));
        }
        let mut edges = Vec::with_capacity(gn * h.edge_count() + hn * g.edge_count());
        for (a1, a2) in g.edges() {
            for b in 0..hn {
                edges.push((a1 * hn + b, a2 * hn + b));
            }
        }
        for a in 0..gn {
            for (b1, b2) in h.edges() {
                edges.push((a * hn + b1, a * hn + b2));
            }
        }
        let kind = match (g.family.map(|f| f.kind), h.family.map(|f| f.kind)) {
            (Some(FamilyKind::Path), Some(FamilyKind::Path)) => FamilyKind::Grid,
            (Some(FamilyKind::Cycle), Some(FamilyKind::Path)) => FamilyKind::StackedPrism,
            (Some(FamilyKind::Cycle), Some(FamilyKind::Cycle)) => FamilyKind::ToroidalGrid,
            _ => FamilyKind::Product,
        };
        let product = Self::from_edges(gn * hn, edges)?;
        Ok(product.with_family(Some(FamilyMeta {
            kind,
            m: gn,
            n: hn,
        })))
    }

    /// `G_{m,n} = P_m x P_n`, `Y_{m,n} = C_m x P_n`, `T_{m,n} = C_m x C_n`.
    pub fn family(kind: FamilyKind, m: usize, n: usize) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidFamily(msg));
        match kind {
            FamilyKind::Grid => {
                if m < 1 || n < 1 {
                    return bad(format!("grid needs m, n >= 1, got {m}x{n}"));
                }
                Self::cartesian_product(&Self::path(m)?, &Self::path(n)?)
            }
            FamilyKind::StackedPrism => {
                if m < 3 || n < 1 {
                    return bad(format!("stacked prism needs m >= 3, n >= 1, got {m}x{n}"));
                }
                Self::cartesian_product(&Self::cycle(m)?, &Self::path(n)?)
            }
            FamilyKind::ToroidalGrid => {
                if m < 3 || n < 3 {
                    return bad(format!("toroidal grid needs m, n >= 3, got {m}x{n}"));
                }
                Self::cartesian_product(&Self::cycle(m)?, &Self::cycle(n)?)
            }
            FamilyKind::Path => Self::path(m),
            FamilyKind::Cycle => Self::cycle(m),
            FamilyKind::Product | FamilyKind::Other => {
                bad(format!("{} is not a generated family", kind.name()))
            }
        }
    }

    pub fn grid(m: usize, n: usize) -> Result<Self> {
        Self::family(FamilyKind::Grid, m, n)
    }

    pub fn stacked_prism(m: usize, n: usize) -> Result<Self> {
        Self::family(FamilyKind::StackedPrism, m, n)
    }

    pub fn toroidal_grid(m: usize, n: usize) -> Result<Self> {
        Self::family(FamilyKind::ToroidalGrid, m, n)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.vertex_count() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn family_meta(&self) -> Option<FamilyMeta> {
        self.family
    }

    /// True when a contraction merged parallel edges somewhere in this
    /// graph's history.
    pub fn is_simplified(&self) -> bool {
        self.simplified
    }

    pub fn label(&self) -> String {
        match self.family {
            Some(f) if f.kind != FamilyKind::Other => f.label(),
            _ => format!("H(n={},m={})", self.vertex_count(), self.edge_count),
        }
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v >= self.vertex_count() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                vertex_count: self.vertex_count(),
            });
        }
        Ok(())
    }

    /// Adjacency bitmasks, when the graph has at most 64 vertices.
    pub fn neighbor_masks(&self) -> Option<Vec<u64>> {
        if self.vertex_count() > 64 {
            return None;
        }
        Some(
            self.adj
                .iter()
                .map(|list| list.iter().fold(0u64, |m, &v| m | (1 << v)))
                .collect(),
        )
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let all = VertexSet::from_vertices(n, 0..n);
        self.induces_connected(&all)
    }

    /// Whether the subgraph induced by `set` is connected. The empty set
    /// counts as connected here; callers that care reject it first.
    pub fn induces_connected(&self, set: &VertexSet) -> bool {
        let Some(start) = set.iter().next() else {
            return true;
        };
        let mut seen = VertexSet::new(self.vertex_count());
        seen.insert(start);
        let mut queue = VecDeque::from([start]);
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if set.contains(w) && !seen.contains(w) {
                    seen.insert(w);
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        reached == set.len()
    }

    pub fn induced_edge_count(&self, set: &VertexSet) -> usize {
        self.edges()
            .filter(|&(u, v)| set.contains(u) && set.contains(v))
            .count()
    }

    fn coordinate_meta(&self) -> Result<FamilyMeta> {
        match self.family {
            Some(meta) if meta.has_coordinates() => Ok(meta),
            _ => Err(Error::NoCoordinates),
        }
    }

    /// Index of vertex `(row, col)`.
    pub fn vertex_at(&self, row: usize, col: usize) -> Result<VertexId> {
        let meta = self.coordinate_meta()?;
        if row >= meta.m || col >= meta.n {
            return Err(Error::InvalidInput(format!(
                "coordinate ({row}, {col}) outside {}x{}",
                meta.m, meta.n
            )));
        }
        Ok(row * meta.n + col)
    }

    /// `(row, col)` of a vertex.
    pub fn coordinates(&self, v: VertexId) -> Result<(usize, usize)> {
        let meta = self.coordinate_meta()?;
        self.check_vertex(v)?;
        Ok((v / meta.n, v % meta.n))
    }

    /// All vertices of one row (size `n`) or one column (size `m`).
    pub fn line_vertices(&self, which: Line, index: usize) -> Result<VertexSet> {
        let meta = self.coordinate_meta()?;
        let (m, n) = (meta.m, meta.n);
        let out_of_range = |limit: usize| {
            Err(Error::InvalidInput(format!(
                "{which:?} index {index} out of range 0..{limit}"
            )))
        };
        let universe = self.vertex_count();
        match which {
            Line::Row if index < m => Ok(VertexSet::from_vertices(
                universe,
                (0..n).map(|j| index * n + j),
            )),
            Line::Column if index < n => Ok(VertexSet::from_vertices(
                universe,
                (0..m).map(|i| i * n + index),
            )),
            Line::Row => out_of_range(m),
            Line::Column => out_of_range(n),
        }
    }

    /// Graph with vertex `v` renamed to `perm[v]`. Family metadata is dropped
    /// since coordinates no longer follow the fixed labeling.
    pub fn relabel(&self, perm: &[VertexId]) -> Result<Graph> {
        check_permutation(perm, self.vertex_count())?;
        let edges: Vec<_> = self.edges().map(|(u, v)| (perm[u], perm[v])).collect();
        let mut g = Graph::from_edges(self.vertex_count(), edges)?;
        g.simplified = self.simplified;
        Ok(g)
    }

    pub fn delete_edge(&self, u: VertexId, v: VertexId) -> Result<Graph> {
        if !self.has_edge(u, v) {
            return Err(Error::MissingEdge(u, v));
        }
        let edges = self.edges().filter(|&e| e != (u.min(v), u.max(v)));
        let mut g = Graph::from_edges(self.vertex_count(), edges)?;
        g.simplified = self.simplified;
        Ok(g)
    }

    /// Contracts `uv` into the smaller endpoint and removes the larger one,
    /// shifting later indices down. Returns the old-to-new vertex map too.
    pub fn contract_edge_mapped(&self, u: VertexId, v: VertexId) -> Result<(Graph, Vec<VertexId>)> {
        if !self.has_edge(u, v) {
            return Err(Error::MissingEdge(u, v));
        }
        let (keep, gone) = (u.min(v), u.max(v));
        let map: Vec<VertexId> = (0..self.vertex_count())
            .map(|x| match x {
                x if x == gone => keep,
                x if x > gone => x - 1,
                x => x,
            })
            .collect();
        let mut edges: Vec<(VertexId, VertexId)> = self
            .edges()
            .map(|(a, b)| (map[a], map[b]))
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        let before = edges.len();
        edges.sort_unstable();
        edges.dedup();
        let mut g = Graph::from_edges(self.vertex_count() - 1, edges.iter().copied())?;
        g.simplified = self.simplified || edges.len() != before;
        Ok((g, map))
    }

    pub fn contract_edge(&self, u: VertexId, v: VertexId) -> Result<Graph> {
        self.contract_edge_mapped(u, v).map(|(g, _)| g)
    }

    pub fn minor_step(&self, op: MinorOp, u: VertexId, v: VertexId) -> Result<Graph> {
        match op {
            MinorOp::DeleteEdge => self.delete_edge(u, v),
            MinorOp::ContractEdge => self.contract_edge(u, v),
        }
    }

    /// Deletes the edges of one row of `Y_{m,n}` and contracts the `n`
    /// vertical edges from that row to the next, giving `Y_{m-1,n}`.
    ///
    /// The composed result is relabeled onto the standard coordinates of
    /// `Y_{m-1,n}` and checked edge-for-edge against a freshly built copy.
    pub fn row_collapse_minor(&self, row: usize) -> Result<Graph> {
        let meta = match self.family {
            Some(meta) if meta.kind == FamilyKind::StackedPrism => meta,
            _ => {
                return Err(Error::InvalidFamily(
                    "row collapse needs a stacked prism".into(),
                ))
            }
        };
        let (m, n) = (meta.m, meta.n);
        if m < 4 {
            return Err(Error::InvalidFamily(format!(
                "row collapse needs m >= 4, got m = {m}"
            )));
        }
        if row >= m {
            return Err(Error::InvalidInput(format!("row {row} out of range 0..{m}")));
        }
        let next = (row + 1) % m;

        let mut g = self.clone();
        for j in 1..n {
            g = g.minor_step(MinorOp::DeleteEdge, row * n + j - 1, row * n + j)?;
        }
        // track where each original vertex currently lives
        let mut location: Vec<VertexId> = (0..self.vertex_count()).collect();
        for j in 0..n {
            let (a, b) = (location[row * n + j], location[next * n + j]);
            let (h, map) = g.contract_edge_mapped(a, b)?;
            for loc in location.iter_mut() {
                *loc = map[*loc];
            }
            g = h;
        }

        // original row r > row shifts up by one; `row` and `next` share a row
        let target_row = |r: usize| if r > row { r - 1 } else { r };
        let mut perm = vec![usize::MAX; g.vertex_count()];
        for r in 0..m {
            for j in 0..n {
                let r_new = if r == row { target_row(next) } else { target_row(r) };
                perm[location[r * n + j]] = r_new * n + j;
            }
        }
        let relabeled = g.relabel(&perm)?;
        let expected = Graph::stacked_prism(m - 1, n)?;
        if relabeled.edges().ne(expected.edges()) {
            return Err(Error::Contradiction(format!(
                "row collapse of Y{m},{n} did not produce Y{},{n}",
                m - 1
            )));
        }
        Ok(expected)
    }
}

pub(crate) fn check_permutation(perm: &[VertexId], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::NotAPermutation(format!(
            "length {} for {n} vertices",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::NotAPermutation(format!("entry {p} repeated or out of range")));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Finds a bijection `phi` with `uv in E(g) <=> phi(u)phi(v) in E(h)` by
/// backtracking over a BFS order of `g`, pruning on degree and on adjacency
/// to already-mapped vertices. Meant for small graphs only.
pub fn find_isomorphism(g: &Graph, h: &Graph) -> Option<Vec<VertexId>> {
    let n = g.vertex_count();
    if n != h.vertex_count() || g.edge_count() != h.edge_count() {
        return None;
    }
    let mut gd: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut hd: Vec<usize> = (0..n).map(|v| h.degree(v)).collect();
    gd.sort_unstable();
    hd.sort_unstable();
    if gd != hd {
        return None;
    }

    // BFS order over every component of g
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    for s in 0..n {
        if placed[s] {
            continue;
        }
        placed[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in g.neighbors(u) {
                if !placed[w] {
                    placed[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if extend_isomorphism(g, h, &order, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

fn extend_isomorphism(
    g: &Graph,
    h: &Graph,
    order: &[VertexId],
    depth: usize,
    map: &mut [VertexId],
    used: &mut [bool],
) -> bool {
    let Some(&u) = order.get(depth) else {
        return true;
    };
    let mapped_neighbor = g.neighbors(u).iter().find(|&&w| map[w] != usize::MAX);
    let candidates: Vec<VertexId> = match mapped_neighbor {
        Some(&w) => h.neighbors(map[w]).to_vec(),
        None => (0..h.vertex_count()).collect(),
    };
    for x in candidates {
        if used[x] || h.degree(x) != g.degree(u) {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&w| g.has_edge(u, w) == h.has_edge(x, map[w]));
        if !consistent {
            continue;
        }
        map[u] = x;
        used[x] = true;
        if extend_isomorphism(g, h, order, depth + 1, map, used) {
            return true;
        }
        map[u] = usize::MAX;
        used[x] = false;
    }
    false
}

pub fn are_isomorphic(g: &Graph, h: &Graph) -> bool {
    find_isomorphism(g, h).is_some()
}
