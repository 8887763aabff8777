//! Cross-checks a glued grid's treewidth against the closed-form values,
//! the bramble lower bounds, the row-collapse minor bound and the exact
//! solver. Any two sources that disagree abort with
//! [`Error::Contradiction`].

use serde::Serialize;

use super::exact::{exact_treewidth, SolverConfig, WidthMethod, WidthStatus};
use crate::bramble::{BrambleLabel, Verdict};
use crate::error::{Error, Result};
use crate::graph::{FamilyKind, Graph};
use crate::hitting::min_hitting_set;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Prediction {
    Value { value: usize },
    /// One of the two endpoints; which one is not determined in general.
    Interval { low: usize, high: usize },
}

impl Prediction {
    pub fn low(self) -> usize {
        match self {
            Prediction::Value { value } => value,
            Prediction::Interval { low, .. } => low,
        }
    }

    pub fn high(self) -> usize {
        match self {
            Prediction::Value { value } => value,
            Prediction::Interval { high, .. } => high,
        }
    }

    pub fn admits(self, value: usize) -> bool {
        match self {
            Prediction::Value { value: v } => v == value,
            Prediction::Interval { low, high } => value == low || value == high,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BrambleEvidence {
    pub label: BrambleLabel,
    /// Set when the bramble was built on the isomorphic transposed torus.
    pub transposed: bool,
    pub elements: usize,
    pub strict: bool,
    pub order: Option<usize>,
    /// `order` for strict brambles, `order - 1` otherwise.
    pub lower_bound: Option<usize>,
    /// Why the order was not computed.
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MinorEvidence {
    pub minor: String,
    pub minor_treewidth: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolverEvidence {
    pub treewidth: usize,
    pub status: WidthStatus,
    pub method: WidthMethod,
    pub lower: usize,
    pub upper: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct WidthReport {
    pub graph: String,
    pub prediction: Prediction,
    /// Set when the closed form leaves the value undetermined.
    pub open_question: Option<String>,
    pub bramble: Option<BrambleEvidence>,
    pub minor: Option<MinorEvidence>,
    pub solver: Option<SolverEvidence>,
}

#[derive(Debug, Clone)]
pub struct ReportConfig {
    pub solver: SolverConfig,
    /// Skip the hitting-set computation above this many bramble elements.
    pub max_bramble_elements: usize,
    /// Skip the exact solver (and minor solver) above this many vertices.
    pub max_solver_vertices: usize,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            solver: SolverConfig::default(),
            max_bramble_elements: 200_000,
            max_solver_vertices: 64,
        }
    }
}

/// Closed-form treewidth of a grid or glued grid.
pub fn predicted_treewidth(kind: FamilyKind, m: usize, n: usize) -> Result<(Prediction, Option<String>)> {
    let value = |value| (Prediction::Value { value }, None);
    Ok(match kind {
        FamilyKind::Grid if m.max(n) == 1 => value(0),
        FamilyKind::Grid if m.min(n) == 1 => value(1),
        FamilyKind::Grid => value(m.min(n)),
        FamilyKind::StackedPrism if m != 2 * n => value(m.min(2 * n)),
        FamilyKind::StackedPrism => (
            Prediction::Interval {
                low: 2 * n - 1,
                high: 2 * n,
            },
            Some(format!("open: tw(Y{m},{n}) is 2n-1 or 2n, not settled for general n")),
        ),
        FamilyKind::ToroidalGrid => {
            let k = m.min(n);
            match m.abs_diff(n) {
                0 => (
                    Prediction::Interval {
                        low: 2 * k - 2,
                        high: 2 * k - 1,
                    },
                    Some(format!("open: tw(T{m},{n}) is 2n-2 or 2n-1, not settled for general n")),
                ),
                1 => (
                    Prediction::Interval {
                        low: 2 * k - 1,
                        high: 2 * k,
                    },
                    Some(format!("open: tw(T{m},{n}) is 2n-1 or 2n, not settled for general n")),
                ),
                _ => value(2 * k),
            }
        }
        _ => {
            return Err(Error::InvalidFamily(format!(
                "no treewidth formula for {}",
                kind.name()
            )))
        }
    })
}

/// The bramble construction for this regime, and whether it must be built
/// on the transposed torus.
fn bramble_for(kind: FamilyKind, m: usize, n: usize) -> Option<(BrambleLabel, bool)> {
    match kind {
        FamilyKind::Grid => Some((BrambleLabel::GridB, false)),
        FamilyKind::StackedPrism if 2 * n < m => Some((BrambleLabel::PrismB1, false)),
        FamilyKind::StackedPrism if m < 2 * n => Some((BrambleLabel::PrismB2, false)),
        FamilyKind::ToroidalGrid if m >= n + 2 => Some((BrambleLabel::TorusCde, false)),
        FamilyKind::ToroidalGrid if n >= m + 2 => Some((BrambleLabel::TorusCde, true)),
        FamilyKind::ToroidalGrid if m == n + 1 => Some((BrambleLabel::TorusFg, false)),
        FamilyKind::ToroidalGrid if n == m + 1 => Some((BrambleLabel::TorusFg, true)),
        _ => None,
    }
}

pub fn treewidth_bounds_report(g: &Graph, config: &ReportConfig) -> Result<WidthReport> {
    let meta = g
        .family_meta()
        .filter(|f| f.has_coordinates())
        .ok_or_else(|| Error::InvalidFamily("report needs a grid or glued grid".into()))?;
    let (kind, m, n) = (meta.kind, meta.m, meta.n);
    let (prediction, open_question) = predicted_treewidth(kind, m, n)?;
    let contradiction = |what: String| Err(Error::Contradiction(format!("{}: {what}", meta.label())));

    let mut lower = 0;
    let mut bramble = None;
    if let Some((label, transposed)) = bramble_for(kind, m, n) {
        let host = if transposed {
            Graph::family(kind, n, m)?
        } else {
            g.clone()
        };
        let b = label.generate(&host)?;
        let class = b.classify()?;
        let strict = class.verdict == Verdict::StrictBramble;
        if class.verdict == Verdict::NotBramble {
            return contradiction(format!("{} is not a bramble", label.name()));
        }
        let (order, skipped) = if b.len() > config.max_bramble_elements {
            (None, Some(format!("{} elements exceed the limit", b.len())))
        } else if host.vertex_count() > 64 {
            (None, Some("more than 64 vertices".to_string()))
        } else {
            (Some(min_hitting_set(&b, None)?.order), None)
        };
        let lower_bound = order.map(|o| if strict { o } else { o.saturating_sub(1) });
        if let Some(lb) = lower_bound {
            if lb > prediction.high() {
                return contradiction(format!(
                    "{} certifies tw >= {lb}, above the closed form {}",
                    label.name(),
                    prediction.high()
                ));
            }
            lower = lower.max(lb);
        }
        bramble = Some(BrambleEvidence {
            label,
            transposed,
            elements: b.len(),
            strict,
            order,
            lower_bound,
            skipped,
        });
    }

    let solver_fits = g.vertex_count() <= config.max_solver_vertices;
    let mut minor = None;
    if kind == FamilyKind::StackedPrism && m == 2 * n {
        let collapsed = g.row_collapse_minor(0)?;
        let minor_treewidth = if solver_fits {
            let res = exact_treewidth(&collapsed, &config.solver)?;
            (res.status == WidthStatus::Exact).then_some(res.treewidth)
        } else {
            None
        };
        if let Some(t) = minor_treewidth {
            lower = lower.max(t);
        }
        minor = Some(MinorEvidence {
            minor: collapsed.label(),
            minor_treewidth,
        });
    }

    let mut solver = None;
    if solver_fits {
        let mut solver_config = config.solver.clone();
        solver_config.lower_bound_hint = solver_config.lower_bound_hint.max(lower);
        let res = exact_treewidth(g, &solver_config)?;
        if res.status == WidthStatus::Exact && !prediction.admits(res.treewidth) {
            return contradiction(format!(
                "exact treewidth {} outside the closed form {:?}",
                res.treewidth, prediction
            ));
        }
        if res.upper < prediction.low() {
            return contradiction(format!(
                "decomposition of width {} below the closed form {:?}",
                res.upper, prediction
            ));
        }
        solver = Some(SolverEvidence {
            treewidth: res.treewidth,
            status: res.status,
            method: res.method,
            lower: res.lower,
            upper: res.upper,
        });
    }

    Ok(WidthReport {
        graph: meta.label(),
        prediction,
        open_question,
        bramble,
        minor,
        solver,
    })
}
