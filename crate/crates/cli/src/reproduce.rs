//! The table of desk-scale numeric claims about glued grids, each
//! recomputed from scratch.

use std::fmt;
use std::time::{Duration, Instant};

use glued_grids::bramble::{BrambleLabel, Verdict};
use glued_grids::chipfire::{exact_gonality, gen_winning_divisor, is_winning_divisor, DivisorStyle, GonalityConfig};
use glued_grids::hitting::min_hitting_set;
use glued_grids::treewidth::{exact_treewidth, SolverConfig, WidthStatus};
use glued_grids::{FamilyKind, Graph};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowVerdict {
    Match,
    WithinInterval,
    Mismatch,
    SkippedBudget,
}

impl RowVerdict {
    pub fn name(self) -> &'static str {
        match self {
            RowVerdict::Match => "match",
            RowVerdict::WithinInterval => "within_interval",
            RowVerdict::Mismatch => "mismatch",
            RowVerdict::SkippedBudget => "skipped_budget",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Claimed {
    Value { value: usize },
    /// Either endpoint, undetermined in general.
    Interval { low: usize, high: usize },
    /// A yes/no statement claimed to hold.
    Holds,
}

impl fmt::Display for Claimed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claimed::Value { value } => write!(f, "{value}"),
            Claimed::Interval { low, high } => write!(f, "{{{low},{high}}}"),
            Claimed::Holds => write!(f, "holds"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReproRow {
    pub label: String,
    pub source: String,
    pub claimed: Claimed,
    pub computed: Option<String>,
    pub verdict: RowVerdict,
}

impl fmt::Display for ReproRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} claimed {} computed {} {}  [{}]",
            self.label,
            self.claimed,
            self.computed.as_deref().unwrap_or("-"),
            self.verdict.name(),
            self.source
        )
    }
}

#[derive(Debug, Clone)]
pub struct ReproConfig {
    /// Rows on larger graphs are marked `skipped_budget`.
    pub max_vertices: usize,
    /// Wall-clock budget for the whole table.
    pub budget: Duration,
    pub threads: usize,
}

impl Default for ReproConfig {
    fn default() -> Self {
        ReproConfig {
            max_vertices: 20,
            budget: Duration::from_secs(120),
            threads: 1,
        }
    }
}

/// `T4,3` becomes `T₄,₃`.
pub fn subscripted(label: &str) -> String {
    let mut chars = label.chars();
    let head: String = chars.by_ref().take(1).collect();
    let tail: String = chars
        .map(|c| match c.to_digit(10) {
            Some(d) => char::from_u32(0x2080 + d).unwrap(),
            None => c,
        })
        .collect();
    head + &tail
}

enum Task {
    Treewidth(FamilyKind, usize, usize, Claimed),
    /// Treewidth of the minor obtained by collapsing one row.
    CollapsedTreewidth(usize, usize, usize),
    Order(BrambleLabel, FamilyKind, usize, usize, usize),
    Gonality(FamilyKind, usize, usize, usize),
    Winning(DivisorStyle, FamilyKind, usize, usize, usize),
    WidthBelowGonality(FamilyKind, usize, usize),
}

fn tasks() -> Vec<(Task, &'static str)> {
    use FamilyKind::{Grid, StackedPrism as Y, ToroidalGrid as T};
    let v = |value| Claimed::Value { value };
    let iv = |low, high| Claimed::Interval { low, high };
    vec![
        (Task::Treewidth(Grid, 3, 3, v(3)), "n x n grid has treewidth n"),
        (Task::Treewidth(Y, 4, 2, v(3)), "computed value for Y2n,n"),
        (Task::Treewidth(Y, 4, 2, iv(3, 4)), "stacked prism formula, m = 2n"),
        (Task::Treewidth(Y, 6, 3, v(6)), "computed value for Y2n,n"),
        (Task::Treewidth(Y, 8, 4, v(8)), "computed value for Y2n,n"),
        (Task::Treewidth(T, 4, 3, v(5)), "computed value for Tn+1,n"),
        (Task::Treewidth(T, 4, 3, iv(5, 6)), "toroidal formula, |m-n| = 1"),
        (Task::Treewidth(T, 5, 4, v(8)), "computed value for Tn+1,n"),
        (Task::Treewidth(T, 5, 4, iv(7, 8)), "toroidal formula, |m-n| = 1"),
        (Task::Treewidth(Y, 7, 2, v(4)), "stacked prism formula min{m,2n}"),
        (Task::Treewidth(Y, 5, 3, v(5)), "stacked prism formula min{m,2n}"),
        (Task::Treewidth(Y, 7, 3, v(6)), "stacked prism formula min{m,2n}"),
        (Task::Treewidth(T, 5, 3, v(6)), "toroidal formula 2min{m,n}"),
        (Task::Treewidth(T, 6, 3, v(6)), "toroidal formula 2min{m,n}"),
        (Task::CollapsedTreewidth(4, 2, 3), "row collapse minor Y2n-1,n has treewidth 2n-1"),
        (Task::CollapsedTreewidth(6, 3, 5), "row collapse minor Y2n-1,n has treewidth 2n-1"),
        (Task::Order(BrambleLabel::GridB, Grid, 3, 4, 3), "grid bramble order"),
        (Task::Order(BrambleLabel::PrismB1, Y, 7, 3, 6), "strict bramble of order 2n for 2n < m"),
        (Task::Order(BrambleLabel::PrismB2, Y, 5, 3, 5), "strict bramble of order m for m < 2n"),
        (Task::Order(BrambleLabel::TorusCde, T, 5, 3, 6), "strict bramble of order 2n for m >= n+2"),
        (Task::Order(BrambleLabel::TorusFg, T, 4, 3, 6), "bramble of order 2n on Tn+1,n"),
        (Task::Gonality(Y, 4, 2, 4), "brute-force gonality of Y4,2"),
        (Task::Gonality(T, 3, 3, 6), "gonality 2n of Tn,n"),
        (Task::Winning(DivisorStyle::ColumnOnes, Y, 5, 3, 0), "m chips on a column win"),
        (Task::Winning(DivisorStyle::RowTwos, Y, 5, 3, 1), "2n chips on a row win"),
        (Task::Winning(DivisorStyle::RowTwos, Y, 7, 2, 0), "2n chips on a row win"),
        (Task::Winning(DivisorStyle::RowTwos, T, 4, 3, 0), "two chips on each vertex of a line win"),
        (Task::Winning(DivisorStyle::RowTwos, T, 5, 3, 0), "two chips on each vertex of a line win"),
        (Task::Winning(DivisorStyle::ColumnTwos, T, 5, 3, 2), "two chips on each vertex of a line win"),
        (Task::WidthBelowGonality(Y, 4, 2), "treewidth is at most gonality"),
        (Task::WidthBelowGonality(T, 3, 3), "treewidth is at most gonality"),
    ]
}

fn compare(claimed: &Claimed, computed: usize) -> RowVerdict {
    match *claimed {
        Claimed::Value { value } if value == computed => RowVerdict::Match,
        Claimed::Interval { low, high } if computed == low || computed == high => RowVerdict::WithinInterval,
        _ => RowVerdict::Mismatch,
    }
}

fn holds(ok: bool) -> RowVerdict {
    if ok {
        RowVerdict::Match
    } else {
        RowVerdict::Mismatch
    }
}

fn graph(kind: FamilyKind, m: usize, n: usize) -> Graph {
    Graph::family(kind, m, n).expect("table fixtures are valid families")
}

/// Recomputes every row. Rows over `max_vertices` or past the time budget
/// are kept and marked `skipped_budget`.
pub fn reproduce_table(config: &ReproConfig) -> Vec<ReproRow> {
    let start = Instant::now();
    let mut rows = Vec::new();
    for (task, source) in tasks() {
        let remaining = config.budget.saturating_sub(start.elapsed());
        let solver = SolverConfig {
            time_limit: remaining,
            ..SolverConfig::default()
        };
        let gon_config = GonalityConfig {
            threads: config.threads,
            ..GonalityConfig::default()
        };
        let (label, claimed, g) = match &task {
            Task::Treewidth(k, m, n, c) => {
                let g = graph(*k, *m, *n);
                (format!("tw({})", subscripted(&g.label())), c.clone(), g)
            }
            Task::CollapsedTreewidth(m, n, c) => {
                let g = graph(FamilyKind::StackedPrism, *m, *n);
                let label = format!("tw(row collapse of {})", subscripted(&g.label()));
                (label, Claimed::Value { value: *c }, g)
            }
            Task::Order(b, k, m, n, c) => {
                let g = graph(*k, *m, *n);
                let label = format!("order({} on {})", b.name(), subscripted(&g.label()));
                (label, Claimed::Value { value: *c }, g)
            }
            Task::Gonality(k, m, n, c) => {
                let g = graph(*k, *m, *n);
                (format!("gon({})", subscripted(&g.label())), Claimed::Value { value: *c }, g)
            }
            Task::Winning(s, k, m, n, i) => {
                let g = graph(*k, *m, *n);
                let label = format!("wins({} {} on {})", s.name(), i, subscripted(&g.label()));
                (label, Claimed::Holds, g)
            }
            Task::WidthBelowGonality(k, m, n) => {
                let g = graph(*k, *m, *n);
                let l = subscripted(&g.label());
                (format!("tw({l}) <= gon({l})"), Claimed::Holds, g)
            }
        };
        let mut row = ReproRow {
            label,
            source: source.to_string(),
            claimed,
            computed: None,
            verdict: RowVerdict::SkippedBudget,
        };
        if g.vertex_count() > config.max_vertices || remaining.is_zero() {
            rows.push(row);
            continue;
        }
        let outcome: Option<(String, RowVerdict)> = match &task {
            Task::Treewidth(..) => exact_treewidth(&g, &solver)
                .ok()
                .filter(|r| r.status == WidthStatus::Exact)
                .map(|r| (r.treewidth.to_string(), compare(&row.claimed, r.treewidth))),
            Task::CollapsedTreewidth(..) => g
                .row_collapse_minor(0)
                .ok()
                .and_then(|minor| exact_treewidth(&minor, &solver).ok())
                .filter(|r| r.status == WidthStatus::Exact)
                .map(|r| (r.treewidth.to_string(), compare(&row.claimed, r.treewidth))),
            Task::Order(b, ..) => b.generate(&g).ok().and_then(|bramble| {
                let class = bramble.classify().ok()?;
                let strict_ok = b.expected_strict() == Some(class.verdict == Verdict::StrictBramble);
                let order = min_hitting_set(&bramble, None).ok()?.order;
                let verdict = match compare(&row.claimed, order) {
                    RowVerdict::Match if !strict_ok => RowVerdict::Mismatch,
                    v => v,
                };
                let kind = match class.verdict {
                    Verdict::StrictBramble => "strict",
                    Verdict::Bramble => "non-strict",
                    Verdict::NotBramble => "not a bramble",
                };
                Some((format!("{order} ({kind})"), verdict))
            }),
            Task::Gonality(..) => exact_gonality(&g, &gon_config)
                .ok()
                .and_then(|r| r.gonality)
                .map(|gon| (gon.to_string(), compare(&row.claimed, gon))),
            Task::Winning(s, _, _, _, i) => gen_winning_divisor(&g, *s, *i)
                .ok()
                .and_then(|d| is_winning_divisor(&g, &d).ok())
                .map(|w| (if w.wins { "wins" } else { "loses" }.to_string(), holds(w.wins))),
            Task::WidthBelowGonality(..) => {
                let tw = exact_treewidth(&g, &solver)
                    .ok()
                    .filter(|r| r.status == WidthStatus::Exact);
                let gon = exact_gonality(&g, &gon_config).ok().and_then(|r| r.gonality);
                tw.zip(gon)
                    .map(|(tw, gon)| (format!("{} <= {gon}", tw.treewidth), holds(tw.treewidth <= gon)))
            }
        };
        if let Some((computed, verdict)) = outcome {
            row.computed = Some(computed);
            row.verdict = verdict;
        }
        rows.push(row);
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subscripts() {
        assert_eq!(subscripted("T4,3"), "T₄,₃");
        assert_eq!(subscripted("Y10,5"), "Y₁₀,₅");
    }

    #[test]
    fn verdicts() {
        assert_eq!(compare(&Claimed::Value { value: 5 }, 5), RowVerdict::Match);
        assert_eq!(compare(&Claimed::Interval { low: 3, high: 4 }, 3), RowVerdict::WithinInterval);
        assert_eq!(compare(&Claimed::Interval { low: 3, high: 4 }, 5), RowVerdict::Mismatch);
    }
}
