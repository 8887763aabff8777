//! Brambles: families of connected, pairwise touching vertex sets.
//!
//! Generators for the grid, stacked-prism and toroidal families live here.
//! Each generator first streams raw construction tuples as vertex sets and
//! then [`Bramble::collect`] deduplicates them under a materialization cap.
//!
//! Within one element, a deleted vertex is never the crossing point of that
//! element's own row and column; this is what keeps every element connected.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{FamilyKind, FamilyMeta, Graph, VertexId, VertexSet};

pub const DEFAULT_ELEMENT_CAP: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BrambleLabel {
    GridB,
    PrismB1,
    PrismB2,
    TorusCde,
    TorusFg,
    Custom,
}

impl BrambleLabel {
    pub fn name(self) -> &'static str {
        match self {
            BrambleLabel::GridB => "grid_b",
            BrambleLabel::PrismB1 => "prism_b1",
            BrambleLabel::PrismB2 => "prism_b2",
            BrambleLabel::TorusCde => "torus_cde",
            BrambleLabel::TorusFg => "torus_fg",
            BrambleLabel::Custom => "custom",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [
            BrambleLabel::GridB,
            BrambleLabel::PrismB1,
            BrambleLabel::PrismB2,
            BrambleLabel::TorusCde,
            BrambleLabel::TorusFg,
            BrambleLabel::Custom,
        ]
        .into_iter()
        .find(|l| l.name() == name)
    }

    /// Whether the construction is claimed to be strict.
    pub fn expected_strict(self) -> Option<bool> {
        match self {
            BrambleLabel::TorusFg => Some(false),
            BrambleLabel::Custom => None,
            _ => Some(true),
        }
    }

    /// Runs the generator for this label.
    pub fn generate(self, g: &Graph) -> Result<Bramble> {
        match self {
            BrambleLabel::GridB => gen_grid_bramble(g),
            BrambleLabel::PrismB1 => gen_prism_b1(g),
            BrambleLabel::PrismB2 => gen_prism_b2(g),
            BrambleLabel::TorusCde => gen_torus_cde(g),
            BrambleLabel::TorusFg => gen_torus_fg(g),
            BrambleLabel::Custom => Err(Error::InvalidInput(
                "custom brambles are read from files, not generated".into(),
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Bramble {
    graph: Graph,
    elements: Vec<VertexSet>,
    label: BrambleLabel,
}

impl Bramble {
    /// Validated construction: elements are deduplicated and the family must
    /// classify as a bramble.
    pub fn new(graph: Graph, elements: Vec<VertexSet>, label: BrambleLabel) -> Result<Self> {
        let bramble = Self::collect(graph, label, elements, DEFAULT_ELEMENT_CAP)?;
        let class = classify_family(&bramble.graph, &bramble.elements)?;
        if class.verdict == Verdict::NotBramble {
            let detail = match class.counterexample {
                Some((i, j)) if i == j => format!("element {i} is not connected"),
                Some((i, j)) => format!("elements {i} and {j} do not touch"),
                None => "empty family".to_string(),
            };
            return Err(Error::NotBramble(detail));
        }
        Ok(bramble)
    }

    /// Deduplicates a stream of elements, keeping first occurrences in order.
    /// Fails once more than `cap` distinct elements have been seen. No
    /// bramble validation happens here.
    pub fn collect<I>(graph: Graph, label: BrambleLabel, elements: I, cap: usize) -> Result<Self>
    where
        I: IntoIterator<Item = VertexSet>,
    {
        let mut seen = HashSet::new();
        let mut kept = Vec::new();
        for element in elements {
            if element.universe() != graph.vertex_count() {
                return Err(Error::DimensionMismatch {
                    expected: graph.vertex_count(),
                    found: element.universe(),
                });
            }
            if element.is_empty() {
                return Err(Error::InvalidInput("empty bramble element".into()));
            }
            if seen.insert(element.clone()) {
                kept.push(element);
                if kept.len() > cap {
                    return Err(Error::TooManyElements {
                        count: kept.len(),
                        cap,
                    });
                }
            }
        }
        Ok(Bramble {
            graph,
            elements: kept,
            label,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn elements(&self) -> &[VertexSet] {
        &self.elements
    }

    pub fn label(&self) -> BrambleLabel {
        self.label
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_hit_by(&self, set: &VertexSet) -> bool {
        self.elements.iter().all(|e| e.intersects(set))
    }

    pub fn classify(&self) -> Result<Classification> {
        classify_family(&self.graph, &self.elements)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NotBramble,
    Bramble,
    StrictBramble,
}

/// For `NotBramble` the counterexample is a disconnected element `(i, i)`
/// or a non-touching pair; for `Bramble` it is a disjoint pair showing
/// the family is not strict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub counterexample: Option<(usize, usize)>,
}

pub fn is_connected_set(g: &Graph, s: &VertexSet) -> Result<bool> {
    if s.is_empty() {
        return Err(Error::InvalidInput("connectivity of the empty set".into()));
    }
    if s.universe() != g.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: g.vertex_count(),
            found: s.universe(),
        });
    }
    Ok(g.induces_connected(s))
}

fn closed_neighborhood(g: &Graph, a: &VertexSet) -> VertexSet {
    let mut out = a.clone();
    for v in a.iter() {
        for &w in g.neighbors(v) {
            out.insert(w);
        }
    }
    out
}

/// Two sets touch when they share a vertex or an edge joins them.
pub fn sets_touch(g: &Graph, a: &VertexSet, b: &VertexSet) -> bool {
    closed_neighborhood(g, a).intersects(b)
}

pub fn classify_family(g: &Graph, elements: &[VertexSet]) -> Result<Classification> {
    if elements.is_empty() {
        return Err(Error::InvalidInput("empty family".into()));
    }
    for (i, e) in elements.iter().enumerate() {
        if e.is_empty() || !is_connected_set(g, e)? {
            return Ok(Classification {
                verdict: Verdict::NotBramble,
                counterexample: Some((i, i)),
            });
        }
    }
    let closed: Vec<VertexSet> = elements.iter().map(|e| closed_neighborhood(g, e)).collect();
    let mut disjoint_pair = None;
    for i in 0..elements.len() {
        for j in i + 1..elements.len() {
            if !closed[i].intersects(&elements[j]) {
                return Ok(Classification {
                    verdict: Verdict::NotBramble,
                    counterexample: Some((i, j)),
                });
            }
            if disjoint_pair.is_none() && !elements[i].intersects(&elements[j]) {
                disjoint_pair = Some((i, j));
            }
        }
    }
    Ok(match disjoint_pair {
        None => Classification {
            verdict: Verdict::StrictBramble,
            counterexample: None,
        },
        Some(pair) => Classification {
            verdict: Verdict::Bramble,
            counterexample: Some(pair),
        },
    })
}

/// Row/column arithmetic for the `i * n + j` labeling.
#[derive(Clone, Copy)]
struct Lattice {
    m: usize,
    n: usize,
}

impl Lattice {
    fn of(g: &Graph, kind: FamilyKind, family: &'static str) -> Result<Self> {
        match g.family_meta() {
            Some(FamilyMeta { kind: k, m, n }) if k == kind => Ok(Lattice { m, n }),
            _ => Err(Error::WrongRegime {
                family,
                requirement: format!("a {} graph", kind.name()),
            }),
        }
    }

    fn empty(self) -> VertexSet {
        VertexSet::new(self.m * self.n)
    }

    fn add_row(self, set: &mut VertexSet, r: usize, skip_col: Option<usize>) {
        for j in (0..self.n).filter(|&j| Some(j) != skip_col) {
            set.insert(r * self.n + j);
        }
    }

    fn add_column(self, set: &mut VertexSet, c: usize, skip_row: Option<usize>) {
        for i in (0..self.m).filter(|&i| Some(i) != skip_row) {
            set.insert(i * self.n + c);
        }
    }

    /// `rows` full or with one vertex removed, plus `cols` the same way.
    fn element(self, rows: &[(usize, Option<usize>)], cols: &[(usize, Option<usize>)]) -> VertexSet {
        let mut set = self.empty();
        for &(r, skip) in rows {
            self.add_row(&mut set, r, skip);
        }
        for &(c, skip) in cols {
            self.add_column(&mut set, c, skip);
        }
        set
    }
}

fn pairs(k: usize) -> impl Iterator<Item = (usize, usize)> + Clone {
    (0..k).flat_map(move |a| (a + 1..k).map(move |b| (a, b)))
}

fn subsets(k: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for x in start..k {
            cur.push(x);
            rec(k, size, x + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, size, 0, &mut Vec::new(), &mut out);
    out
}

/// All assignments of one value from `choices` to each of `len` slots.
fn assignments(len: usize, choices: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |&c| {
                    let mut next = prefix.clone();
                    next.push(c);
                    next
                })
            })
            .collect();
    }
    out
}

fn max_multiplicity(values: &[usize]) -> usize {
    values
        .iter()
        .map(|v| values.iter().filter(|w| *w == v).count())
        .max()
        .unwrap_or(0)
}

/// Grid bramble: every row together with every column. Strict, order
/// `min(m, n)`.
pub fn grid_bramble_elements(g: &Graph) -> Result<impl Iterator<Item = VertexSet>> {
    let lat = Lattice::of(g, FamilyKind::Grid, "grid_b")?;
    Ok((0..lat.m).flat_map(move |r| (0..lat.n).map(move |c| lat.element(&[(r, None)], &[(c, None)]))))
}

pub fn gen_grid_bramble(g: &Graph) -> Result<Bramble> {
    let elements = grid_bramble_elements(g)?;
    Bramble::collect(g.clone(), BrambleLabel::GridB, elements, DEFAULT_ELEMENT_CAP)
}

/// Stacked prism with `2n < m`: a column missing one vertex plus two full
/// rows that avoid the missing vertex. Strict, order `2n`.
pub fn prism_b1_elements(g: &Graph) -> Result<impl Iterator<Item = VertexSet>> {
    let lat = Lattice::of(g, FamilyKind::StackedPrism, "prism_b1")?;
    if 2 * lat.n >= lat.m {
        return Err(Error::WrongRegime {
            family: "prism_b1",
            requirement: format!("2n < m, got m = {}, n = {}", lat.m, lat.n),
        });
    }
    let (m, n) = (lat.m, lat.n);
    Ok((0..n).flat_map(move |c| {
        (0..m).flat_map(move |d| {
            pairs(m)
                .filter(move |&(r1, r2)| d != r1 && d != r2)
                .map(move |(r1, r2)| lat.element(&[(r1, None), (r2, None)], &[(c, Some(d))]))
        })
    }))
}

pub fn gen_prism_b1(g: &Graph) -> Result<Bramble> {
    let elements = prism_b1_elements(g)?;
    Bramble::collect(g.clone(), BrambleLabel::PrismB1, elements, DEFAULT_ELEMENT_CAP)
}

/// Stacked prism with `m < 2n`, three subfamilies:
/// - one row and one column;
/// - one row and two columns, each column missing a vertex in a different
///   row;
/// - two rows and two columns, both columns missing the vertex of the same
///   row.
///
/// Strict, order `m`.
pub fn prism_b2_elements(g: &Graph) -> Result<Vec<VertexSet>> {
    let lat = Lattice::of(g, FamilyKind::StackedPrism, "prism_b2")?;
    let (m, n) = (lat.m, lat.n);
    if m >= 2 * n {
        return Err(Error::WrongRegime {
            family: "prism_b2",
            requirement: format!("m < 2n, got m = {m}, n = {n}"),
        });
    }
    let mut out = Vec::new();
    for r in 0..m {
        for c in 0..n {
            out.push(lat.element(&[(r, None)], &[(c, None)]));
        }
    }
    for r in 0..m {
        for (c1, c2) in pairs(n) {
            for d1 in (0..m).filter(|&d| d != r) {
                for d2 in (0..m).filter(|&d| d != r && d != d1) {
                    out.push(lat.element(&[(r, None)], &[(c1, Some(d1)), (c2, Some(d2))]));
                }
            }
        }
    }
    for (r1, r2) in pairs(m) {
        for (c1, c2) in pairs(n) {
            for d in (0..m).filter(|&d| d != r1 && d != r2) {
                out.push(lat.element(&[(r1, None), (r2, None)], &[(c1, Some(d)), (c2, Some(d))]));
            }
        }
    }
    Ok(out)
}

pub fn gen_prism_b2(g: &Graph) -> Result<Bramble> {
    let elements = prism_b2_elements(g)?;
    Bramble::collect(g.clone(), BrambleLabel::PrismB2, elements, DEFAULT_ELEMENT_CAP)
}

/// Toroidal grid with `m >= n + 2`, three subfamilies:
/// - one column missing a vertex plus four rows each missing a vertex, no
///   three row gaps in one column;
/// - one full column plus three rows each missing a vertex, gaps not all in
///   one column;
/// - two columns each missing a vertex plus three rows whose gaps all sit in
///   one common column.
///
/// Strict, order `2n`.
pub fn torus_cde_elements(g: &Graph) -> Result<impl Iterator<Item = VertexSet>> {
    let lat = Lattice::of(g, FamilyKind::ToroidalGrid, "torus_cde")?;
    let (m, n) = (lat.m, lat.n);
    if m < n + 2 {
        return Err(Error::WrongRegime {
            family: "torus_cde",
            requirement: format!("m >= n + 2, got m = {m}, n = {n}"),
        });
    }
    let four_rows = subsets(m, 4);
    let three_rows = subsets(m, 3);

    let c_family = {
        let four_rows = four_rows.clone();
        (0..n).flat_map(move |c| {
            let others: Vec<usize> = (0..n).filter(|&j| j != c).collect();
            let gaps: Vec<Vec<usize>> = assignments(4, &others)
                .into_iter()
                .filter(|e| max_multiplicity(e) < 3)
                .collect();
            let rows_for_c = four_rows.clone();
            rows_for_c.into_iter().flat_map(move |rows| {
                let gaps = gaps.clone();
                (0..m)
                    .filter(|d| !rows.contains(d))
                    .collect::<Vec<_>>()
                    .into_iter()
                    .flat_map(move |d| {
                        let rows = rows.clone();
                        gaps.clone().into_iter().map(move |e| {
                            let row_spec: Vec<_> =
                                rows.iter().zip(&e).map(|(&r, &j)| (r, Some(j))).collect();
                            lat.element(&row_spec, &[(c, Some(d))])
                        })
                    })
            })
        })
    };

    let d_family = {
        let three_rows = three_rows.clone();
        (0..n).flat_map(move |c| {
            let others: Vec<usize> = (0..n).filter(|&j| j != c).collect();
            let gaps: Vec<Vec<usize>> = assignments(3, &others)
                .into_iter()
                .filter(|e| max_multiplicity(e) < 3)
                .collect();
            three_rows.clone().into_iter().flat_map(move |rows| {
                gaps.clone().into_iter().map(move |e| {
                    let row_spec: Vec<_> = rows.iter().zip(&e).map(|(&r, &j)| (r, Some(j))).collect();
                    lat.element(&row_spec, &[(c, None)])
                })
            })
        })
    };

    let e_family = pairs(n).flat_map(move |(c1, c2)| {
        let three_rows = three_rows.clone();
        (0..n)
            .filter(move |&e| e != c1 && e != c2)
            .flat_map(move |e| {
                three_rows.clone().into_iter().flat_map(move |rows| {
                    let free: Vec<usize> = (0..m).filter(|d| !rows.contains(d)).collect();
                    let free2 = free.clone();
                    free.into_iter().flat_map(move |d1| {
                        let rows = rows.clone();
                        free2.clone().into_iter().map(move |d2| {
                            let row_spec: Vec<_> = rows.iter().map(|&r| (r, Some(e))).collect();
                            lat.element(&row_spec, &[(c1, Some(d1)), (c2, Some(d2))])
                        })
                    })
                })
            })
    });

    Ok(c_family.chain(d_family).chain(e_family))
}

pub fn gen_torus_cde(g: &Graph) -> Result<Bramble> {
    let elements = torus_cde_elements(g)?;
    Bramble::collect(g.clone(), BrambleLabel::TorusCde, elements, DEFAULT_ELEMENT_CAP)
}

/// Toroidal grid `T_{n+1,n}`, two subfamilies:
/// - a column missing a vertex plus a full row;
/// - a column missing a vertex plus two rows, each missing a vertex.
///
/// A bramble (not strict) of order `2n`.
pub fn torus_fg_elements(g: &Graph) -> Result<impl Iterator<Item = VertexSet>> {
    let lat = Lattice::of(g, FamilyKind::ToroidalGrid, "torus_fg")?;
    let (m, n) = (lat.m, lat.n);
    if m != n + 1 {
        return Err(Error::WrongRegime {
            family: "torus_fg",
            requirement: format!("m = n + 1, got m = {m}, n = {n}"),
        });
    }
    let f_family = (0..n).flat_map(move |c| {
        (0..m).flat_map(move |r| {
            (0..m)
                .filter(move |&d| d != r)
                .map(move |d| lat.element(&[(r, None)], &[(c, Some(d))]))
        })
    });
    let g_family = (0..n).flat_map(move |c| {
        pairs(m).flat_map(move |(r1, r2)| {
            (0..m).filter(move |&d| d != r1 && d != r2).flat_map(move |d| {
                (0..n).filter(move |&e| e != c).flat_map(move |e1| {
                    (0..n)
                        .filter(move |&e| e != c)
                        .map(move |e2| lat.element(&[(r1, Some(e1)), (r2, Some(e2))], &[(c, Some(d))]))
                })
            })
        })
    });
    Ok(f_family.chain(g_family))
}

pub fn gen_torus_fg(g: &Graph) -> Result<Bramble> {
    let elements = torus_fg_elements(g)?;
    Bramble::collect(g.clone(), BrambleLabel::TorusFg, elements, DEFAULT_ELEMENT_CAP)
}

/// Family of all `size`-subsets of `0..g.vertex_count()`.
pub fn all_subsets_family(g: &Graph, size: usize) -> Vec<VertexSet> {
    subsets(g.vertex_count(), size)
        .into_iter()
        .map(|s| VertexSet::from_vertices(g.vertex_count(), s))
        .collect()
}

pub fn singletons(g: &Graph) -> Vec<VertexSet> {
    (0..g.vertex_count())
        .map(|v: VertexId| VertexSet::from_vertices(g.vertex_count(), [v]))
        .collect()
}
