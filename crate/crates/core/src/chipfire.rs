//! Chip-firing on simple connected graphs: Laplacian moves, q-reduced
//! normal forms, equivalence of divisors and the gonality game.
//!
//! Firing vertex `v` once moves one chip from `v` along each incident edge,
//! so a script `s` sends `d` to `d - L s`.

use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{FamilyKind, Graph, Line, VertexId};
use crate::hitting::binomial;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Divisor(pub Vec<i64>);

impl Divisor {
    pub fn zero(n: usize) -> Self {
        Divisor(vec![0; n])
    }

    /// One chip per listed vertex, repeats allowed.
    pub fn from_placement(n: usize, placement: &[VertexId]) -> Self {
        let mut d = Self::zero(n);
        for &v in placement {
            d.0[v] += 1;
        }
        d
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn chips(&self) -> &[i64] {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FiringScript(pub Vec<i64>);

impl FiringScript {
    pub fn zero(n: usize) -> Self {
        FiringScript(vec![0; n])
    }

    /// Fires every vertex of `set` once.
    pub fn indicator(n: usize, set: impl IntoIterator<Item = VertexId>) -> Self {
        let mut s = Self::zero(n);
        for v in set {
            s.0[v] = 1;
        }
        s
    }

    pub fn counts(&self) -> &[i64] {
        &self.0
    }

    /// Shifts by a constant so the minimum entry is 0; the action on
    /// divisors is unchanged.
    pub fn normalized(mut self) -> Self {
        if let Some(&min) = self.0.iter().min() {
            for c in &mut self.0 {
                *c -= min;
            }
        }
        self
    }
}

fn check_graph(g: &Graph) -> Result<()> {
    if g.is_simplified() {
        return Err(Error::SimplifiedGraph);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

fn check_len(g: &Graph, len: usize) -> Result<()> {
    if len != g.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: g.vertex_count(),
            found: len,
        });
    }
    Ok(())
}

pub fn apply_firing_script(g: &Graph, d: &Divisor, s: &FiringScript) -> Result<Divisor> {
    check_graph(g)?;
    check_len(g, d.len())?;
    check_len(g, s.0.len())?;
    Ok(fire(g, d, &s.0))
}

fn fire(g: &Graph, d: &Divisor, s: &[i64]) -> Divisor {
    let mut out = d.clone();
    for v in 0..g.vertex_count() {
        let laplacian: i64 = g.neighbors(v).iter().map(|&u| s[v] - s[u]).sum();
        out.0[v] -= laplacian;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    pub reduced: Divisor,
    /// `reduced = d - L script`, minimum entry 0.
    pub script: FiringScript,
}

/// The unique `q`-reduced divisor equivalent to `d`.
pub fn q_reduce(g: &Graph, d: &Divisor, q: VertexId) -> Result<Reduction> {
    check_graph(g)?;
    check_len(g, d.len())?;
    g.check_vertex(q)?;
    Ok(reduce(g, d, q))
}

fn reduce(g: &Graph, d: &Divisor, q: VertexId) -> Reduction {
    let n = g.vertex_count();
    let mut chips = d.0.clone();
    let mut script = vec![0i64; n];

    // Clear debt away from q layer by layer: firing the ball of radius r
    // feeds every vertex at distance r + 1 and touches nothing farther out.
    let dist = bfs_distances(g, q);
    let max_dist = dist.iter().copied().max().unwrap_or(0);
    for r in (0..max_dist).rev() {
        let debt = (0..n)
            .filter(|&v| dist[v] == r + 1)
            .map(|v| -chips[v])
            .max()
            .unwrap_or(0);
        if debt > 0 {
            let ball: Vec<bool> = dist.iter().map(|&x| x <= r).collect();
            fire_set(g, &mut chips, &mut script, &ball, debt);
        }
    }

    // Dhar's burning algorithm: fire the unburnt set as often as it stays
    // legal until the fire from q consumes everything.
    loop {
        let mut burnt = vec![false; n];
        burnt[q] = true;
        let mut stack = vec![q];
        while let Some(b) = stack.pop() {
            for &v in g.neighbors(b) {
                if burnt[v] {
                    continue;
                }
                let exposure = g.neighbors(v).iter().filter(|&&u| burnt[u]).count() as i64;
                if chips[v] < exposure {
                    burnt[v] = true;
                    stack.push(v);
                }
            }
        }
        if burnt.iter().all(|&b| b) {
            break;
        }
        let unburnt: Vec<bool> = burnt.iter().map(|&b| !b).collect();
        let times = (0..n)
            .filter(|&v| unburnt[v])
            .filter_map(|v| {
                let out = g.neighbors(v).iter().filter(|&&u| burnt[u]).count() as i64;
                (out > 0).then(|| chips[v] / out)
            })
            .min()
            .expect("unburnt set borders the burnt set");
        fire_set(g, &mut chips, &mut script, &unburnt, times);
    }

    Reduction {
        reduced: Divisor(chips),
        script: FiringScript(script).normalized(),
    }
}

fn fire_set(g: &Graph, chips: &mut [i64], script: &mut [i64], set: &[bool], times: i64) {
    for v in 0..chips.len() {
        if !set[v] {
            continue;
        }
        script[v] += times;
        for &u in g.neighbors(v) {
            if !set[u] {
                chips[v] -= times;
                chips[u] += times;
            }
        }
    }
}

fn bfs_distances(g: &Graph, q: VertexId) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.vertex_count()];
    dist[q] = 0;
    let mut queue = std::collections::VecDeque::from([q]);
    while let Some(v) = queue.pop_front() {
        for &u in g.neighbors(v) {
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

/// `Some(script)` with `d2 = d1 - L script` when the divisors are
/// equivalent.
pub fn divisors_equivalent(g: &Graph, d1: &Divisor, d2: &Divisor) -> Result<Option<FiringScript>> {
    check_graph(g)?;
    check_len(g, d1.len())?;
    check_len(g, d2.len())?;
    if d1.degree() != d2.degree() {
        return Ok(None);
    }
    let r1 = reduce(g, d1, 0);
    let r2 = reduce(g, d2, 0);
    if r1.reduced != r2.reduced {
        return Ok(None);
    }
    let script: Vec<i64> = r1.script.0.iter().zip(&r2.script.0).map(|(a, b)| a - b).collect();
    Ok(Some(FiringScript(script).normalized()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WinCheck {
    pub wins: bool,
    /// Least opponent vertex that defeats the placement.
    pub failing_vertex: Option<VertexId>,
}

/// `d` wins iff for every `v`, the `v`-reduced form of `d - (v)` keeps
/// `v` out of debt.
pub fn is_winning_divisor(g: &Graph, d: &Divisor) -> Result<WinCheck> {
    check_graph(g)?;
    check_len(g, d.len())?;
    if !d.is_effective() {
        return Err(Error::NotEffective);
    }
    Ok(match first_failure(g, d) {
        None => WinCheck {
            wins: true,
            failing_vertex: None,
        },
        Some(v) => WinCheck {
            wins: false,
            failing_vertex: Some(v),
        },
    })
}

fn first_failure(g: &Graph, d: &Divisor) -> Option<VertexId> {
    // vertices already holding a chip never lose their own chip to debt
    (0..g.vertex_count()).find(|&v| {
        if d.0[v] > 0 {
            return false;
        }
        let mut attacked = d.clone();
        attacked.0[v] -= 1;
        reduce(g, &attacked, v).reduced.0[v] < 0
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GonalityStatus {
    Exact,
    AboveMaxDegree,
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LosingEntry {
    /// Chip positions as a sorted multiset.
    pub placement: Vec<VertexId>,
    pub opponent: VertexId,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GonalityResult {
    pub status: GonalityStatus,
    pub gonality: Option<usize>,
    /// Every degree below `lower` was refuted exhaustively.
    pub lower: usize,
    /// Lexicographically least winning placement of degree `gonality`.
    pub winning_divisor: Option<Divisor>,
    /// One defeating opponent move per placement of degree `lower - 1`.
    pub losing_proof: Vec<LosingEntry>,
    pub candidates: u64,
}

#[derive(Debug, Clone)]
pub struct GonalityConfig {
    pub max_degree: usize,
    /// Cap on the total number of placements examined.
    pub candidate_cap: u128,
    pub threads: usize,
}

impl Default for GonalityConfig {
    fn default() -> Self {
        GonalityConfig {
            max_degree: usize::MAX,
            candidate_cap: 10_000_000,
            threads: 1,
        }
    }
}

/// Smallest winning degree by enumerating effective divisors as sorted
/// multisets in lexicographic order.
pub fn exact_gonality(g: &Graph, config: &GonalityConfig) -> Result<GonalityResult> {
    check_graph(g)?;
    let n = g.vertex_count();
    let max_degree = config.max_degree.min(n.max(1));
    let mut spent: u128 = 0;
    let mut candidates = 0u64;
    let mut losing_proof = Vec::new();
    for k in 1..=max_degree {
        let count = binomial((n + k - 1) as u128, k as u128);
        spent = spent.saturating_add(count);
        if spent > config.candidate_cap {
            return Ok(GonalityResult {
                status: GonalityStatus::BudgetExceeded,
                gonality: None,
                lower: k,
                winning_divisor: None,
                losing_proof,
                candidates,
            });
        }
        let outcome = search_degree(g, k, config.threads.max(1));
        candidates += outcome.examined;
        match outcome.winner {
            Some(placement) => {
                return Ok(GonalityResult {
                    status: GonalityStatus::Exact,
                    gonality: Some(k),
                    lower: k,
                    winning_divisor: Some(Divisor::from_placement(n, &placement)),
                    losing_proof,
                    candidates,
                });
            }
            None => losing_proof = outcome.losers,
        }
    }
    Ok(GonalityResult {
        status: GonalityStatus::AboveMaxDegree,
        gonality: None,
        lower: max_degree + 1,
        winning_divisor: None,
        losing_proof,
        candidates,
    })
}

struct DegreeOutcome {
    winner: Option<Vec<VertexId>>,
    losers: Vec<LosingEntry>,
    examined: u64,
}

/// Workers own the placements whose first chip sits at `v` with
/// `v % threads == worker`; the least winner overall is the least winner of
/// the smallest winning bucket, independent of scheduling.
fn search_degree(g: &Graph, k: usize, threads: usize) -> DegreeOutcome {
    let n = g.vertex_count();
    let best_bucket = AtomicUsize::new(usize::MAX);
    let run_worker = |worker: usize| {
        let mut winner: Option<Vec<VertexId>> = None;
        let mut losers = Vec::new();
        let mut examined = 0u64;
        for first in (worker..n).step_by(threads) {
            if first > best_bucket.load(Ordering::Relaxed) {
                break;
            }
            let mut placement = vec![first; k];
            loop {
                examined += 1;
                let d = Divisor::from_placement(n, &placement);
                match first_failure(g, &d) {
                    None => {
                        best_bucket.fetch_min(first, Ordering::Relaxed);
                        winner = Some(placement.clone());
                        break;
                    }
                    Some(opponent) => losers.push(LosingEntry {
                        placement: placement.clone(),
                        opponent,
                    }),
                }
                if !next_multiset(&mut placement[1..], n) {
                    break;
                }
            }
            if winner.is_some() {
                break;
            }
        }
        (winner, losers, examined)
    };

    let results: Vec<_> = if threads == 1 {
        vec![run_worker(0)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads).map(|w| scope.spawn(move || run_worker(w))).collect();
            handles.into_iter().map(|h| h.join().expect("gonality worker panicked")).collect()
        })
    };

    let mut examined = 0;
    let mut winner: Option<Vec<VertexId>> = None;
    let mut losers = Vec::new();
    for (w, l, e) in results {
        examined += e;
        losers.extend(l);
        if let Some(w) = w {
            if winner.as_ref().is_none_or(|best| w < *best) {
                winner = Some(w);
            }
        }
    }
    if winner.is_some() {
        losers.clear();
    } else {
        losers.sort_by(|a, b| a.placement.cmp(&b.placement));
    }
    DegreeOutcome {
        winner,
        losers,
        examined,
    }
}

/// Advances a non-decreasing sequence over `0..n` in lexicographic order,
/// keeping every entry at least as large as the (fixed) predecessor slot.
fn next_multiset(tail: &mut [VertexId], n: usize) -> bool {
    let Some(i) = tail.iter().rposition(|&v| v + 1 < n) else {
        return false;
    };
    let value = tail[i] + 1;
    for slot in &mut tail[i..] {
        *slot = value;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivisorStyle {
    /// One chip on each vertex of a column of a stacked prism.
    ColumnOnes,
    /// Two chips on each vertex of a row.
    RowTwos,
    /// Two chips on each vertex of a column of a toroidal grid.
    ColumnTwos,
}

impl DivisorStyle {
    pub fn name(self) -> &'static str {
        match self {
            DivisorStyle::ColumnOnes => "column_ones",
            DivisorStyle::RowTwos => "row_twos",
            DivisorStyle::ColumnTwos => "column_twos",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [DivisorStyle::ColumnOnes, DivisorStyle::RowTwos, DivisorStyle::ColumnTwos]
            .into_iter()
            .find(|s| s.name() == name)
    }
}

pub fn gen_winning_divisor(g: &Graph, style: DivisorStyle, index: usize) -> Result<Divisor> {
    let kind = g.family_meta().map(|f| f.kind);
    let (line, chips) = match (style, kind) {
        (DivisorStyle::ColumnOnes, Some(FamilyKind::StackedPrism)) => (Line::Column, 1),
        (DivisorStyle::RowTwos, Some(FamilyKind::StackedPrism | FamilyKind::ToroidalGrid)) => (Line::Row, 2),
        (DivisorStyle::ColumnTwos, Some(FamilyKind::ToroidalGrid)) => (Line::Column, 2),
        _ => {
            return Err(Error::WrongRegime {
                family: style.name(),
                requirement: match style {
                    DivisorStyle::ColumnOnes => "a stacked prism".into(),
                    DivisorStyle::RowTwos => "a stacked prism or toroidal grid".into(),
                    DivisorStyle::ColumnTwos => "a toroidal grid".into(),
                },
            })
        }
    };
    let mut d = Divisor::zero(g.vertex_count());
    for v in g.line_vertices(line, index)?.iter() {
        d.0[v] = chips;
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn firing_everything_is_identity() {
        let g = Graph::stacked_prism(3, 2).unwrap();
        let d = Divisor(vec![1, -2, 0, 3, 0, 1]);
        let all = FiringScript(vec![1; 6]);
        assert_eq!(apply_firing_script(&g, &d, &all).unwrap(), d);
    }

    #[test]
    fn single_firing() {
        let g = Graph::stacked_prism(3, 2).unwrap();
        let v = 0;
        assert_eq!(g.degree(v), 3);
        let mut d = Divisor::zero(6);
        d.0[v] = 3;
        let out = apply_firing_script(&g, &d, &FiringScript::indicator(6, [v])).unwrap();
        assert_eq!(out.0[v], 0);
        for &u in g.neighbors(v) {
            assert_eq!(out.0[u], 1);
        }
        assert_eq!(out.degree(), 3);
    }

    #[test]
    fn column_of_ones_moves_right() {
        let g = Graph::stacked_prism(3, 2).unwrap();
        let d = gen_winning_divisor(&g, DivisorStyle::ColumnOnes, 0).unwrap();
        let col0 = g.line_vertices(Line::Column, 0).unwrap();
        let moved = apply_firing_script(&g, &d, &FiringScript::indicator(6, col0.iter())).unwrap();
        assert_eq!(moved, gen_winning_divisor(&g, DivisorStyle::ColumnOnes, 1).unwrap());
    }

    #[test]
    fn reduced_forms_of_trivial_divisors() {
        let g = Graph::cycle(4).unwrap();
        let zero = q_reduce(&g, &Divisor::zero(4), 0).unwrap();
        assert_eq!(zero.reduced, Divisor::zero(4));
        assert_eq!(zero.script, FiringScript::zero(4));
        let at_q = Divisor(vec![3, 0, 0, 0]);
        assert_eq!(q_reduce(&g, &at_q, 0).unwrap().reduced, at_q);
    }

    #[test]
    fn c4_opposite_chips_reduce_to_q() {
        // (v1) + (v3) on C4: firing {1, 2, 3} sends both chips to v0 and
        // leaves v2 at zero
        let g = Graph::cycle(4).unwrap();
        let r = q_reduce(&g, &Divisor(vec![0, 1, 0, 1]), 0).unwrap();
        assert_eq!(r.reduced, Divisor(vec![2, 0, 0, 0]));
        assert_eq!(r.script, FiringScript(vec![0, 1, 1, 1]));
    }

    #[test]
    fn equivalence_basics() {
        let g = Graph::stacked_prism(3, 2).unwrap();
        let d = Divisor(vec![2, 0, 1, 0, 0, 1]);
        assert_eq!(divisors_equivalent(&g, &d, &d).unwrap(), Some(FiringScript::zero(6)));
        let fired = apply_firing_script(&g, &d, &FiringScript::indicator(6, [4])).unwrap();
        let s = divisors_equivalent(&g, &d, &fired).unwrap().unwrap();
        assert_eq!(apply_firing_script(&g, &d, &s).unwrap(), fired);
        let other = Divisor(vec![1, 0, 1, 0, 0, 1]);
        assert_eq!(divisors_equivalent(&g, &d, &other).unwrap(), None);
    }

    #[test]
    fn single_chip_on_c4_loses() {
        let g = Graph::cycle(4).unwrap();
        let check = is_winning_divisor(&g, &Divisor(vec![1, 0, 0, 0])).unwrap();
        assert!(!check.wins);
        assert_eq!(check.failing_vertex, Some(1));
        assert!(matches!(
            is_winning_divisor(&g, &Divisor(vec![-1, 1, 0, 1])),
            Err(Error::NotEffective)
        ));
    }

    #[test]
    fn small_gonalities() {
        let p4 = Graph::path(4).unwrap();
        let r = exact_gonality(&p4, &GonalityConfig::default()).unwrap();
        assert_eq!(r.gonality, Some(1));
        assert_eq!(r.winning_divisor, Some(Divisor(vec![1, 0, 0, 0])));
        let c5 = Graph::cycle(5).unwrap();
        let r = exact_gonality(&c5, &GonalityConfig::default()).unwrap();
        assert_eq!(r.gonality, Some(2));
        assert_eq!(r.losing_proof.len(), 5);
        let k4 = Graph::complete(4).unwrap();
        assert_eq!(exact_gonality(&k4, &GonalityConfig::default()).unwrap().gonality, Some(3));
    }

    #[test]
    fn threads_do_not_change_the_answer() {
        let g = Graph::stacked_prism(4, 2).unwrap();
        let one = exact_gonality(&g, &GonalityConfig::default()).unwrap();
        let four = exact_gonality(
            &g,
            &GonalityConfig {
                threads: 4,
                ..GonalityConfig::default()
            },
        )
        .unwrap();
        assert_eq!(one.gonality, Some(4));
        assert_eq!(one.winning_divisor, four.winning_divisor);
        assert_eq!(one.losing_proof, four.losing_proof);
    }

    #[test]
    fn budget_and_degree_caps() {
        let g = Graph::stacked_prism(4, 2).unwrap();
        let capped = exact_gonality(
            &g,
            &GonalityConfig {
                max_degree: 3,
                ..GonalityConfig::default()
            },
        )
        .unwrap();
        assert_eq!(capped.status, GonalityStatus::AboveMaxDegree);
        assert_eq!(capped.lower, 4);
        let starved = exact_gonality(
            &g,
            &GonalityConfig {
                candidate_cap: 50,
                ..GonalityConfig::default()
            },
        )
        .unwrap();
        assert_eq!(starved.status, GonalityStatus::BudgetExceeded);
    }

    #[test]
    fn winning_divisor_degrees() {
        let y = Graph::stacked_prism(5, 3).unwrap();
        assert_eq!(gen_winning_divisor(&y, DivisorStyle::ColumnOnes, 0).unwrap().degree(), 5);
        assert_eq!(gen_winning_divisor(&y, DivisorStyle::RowTwos, 1).unwrap().degree(), 6);
        let t = Graph::toroidal_grid(5, 3).unwrap();
        assert_eq!(gen_winning_divisor(&t, DivisorStyle::ColumnTwos, 2).unwrap().degree(), 10);
        assert!(gen_winning_divisor(&y, DivisorStyle::ColumnTwos, 0).is_err());
        assert!(gen_winning_divisor(&t, DivisorStyle::ColumnOnes, 0).is_err());
    }

    #[test]
    fn simplified_graphs_are_refused() {
        let g = Graph::cycle(3).unwrap().contract_edge(0, 1).unwrap();
        assert!(g.is_simplified());
        assert!(matches!(
            q_reduce(&g, &Divisor::zero(2), 0),
            Err(Error::SimplifiedGraph)
        ));
    }

    #[test]
    fn multisets_in_lex_order() {
        let mut tail = vec![0, 0];
        let mut seen = vec![tail.clone()];
        while next_multiset(&mut tail, 3) {
            seen.push(tail.clone());
        }
        assert_eq!(seen, vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 1], vec![1, 2], vec![2, 2]]);
    }
}
