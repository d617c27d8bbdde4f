use super::rules::{self, Padding};
use super::{find_matches, RewriteStep, RewriteTrace, RuleId};
use crate::diagram::{Diagram, Endpoint, GeneratorKind, NodeId};
use crate::error::DiagramError;
use crate::interpret::eval_unchecked;
use crate::tensor::Tensor;

/// How often [`simplify_with`] re-evaluates the diagram to confirm that a
/// rewrite preserved its interpretation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    Never,
    Every,
    /// Every n-th rewrite.
    Sampled(usize),
}

impl Default for CheckMode {
    /// Every rewrite in debug builds, every 16th in release builds.
    fn default() -> Self {
        if cfg!(debug_assertions) {
            CheckMode::Every
        } else {
            CheckMode::Sampled(16)
        }
    }
}

/// Termination measure of the simplifier, compared lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Measure {
    pub nodes: usize,
    pub multiplier_labels: usize,
    /// Sum over splitters and mergers of the leaf count of their left
    /// subtree. Right-nested chains score one per node.
    pub splitter_nesting: usize,
    pub edges: usize,
}

/// Leaf count of the tree hanging off `port` of a splitter (or merger):
/// 1 unless that port is wired to the root of another splitter (merger).
fn child_leaves(d: &Diagram, node: NodeId, port: usize, budget: usize) -> usize {
    let splitter = matches!(d.nodes()[node], GeneratorKind::Splitter { .. });
    let root = if splitter { 0 } else { 2 };
    match d.opposite(Endpoint::port(node, port)) {
        Some(Endpoint::Port { node: c, port: q })
            if budget > 0 && q == root && c != node && std::mem::discriminant(&d.nodes()[c]) == std::mem::discriminant(&d.nodes()[node]) =>
        {
            let (l, r) = if splitter { (1, 2) } else { (0, 1) };
            child_leaves(d, c, l, budget - 1) + child_leaves(d, c, r, budget - 1)
        }
        _ => 1,
    }
}

pub fn measure(d: &Diagram) -> Measure {
    let budget = d.node_count();
    Measure {
        nodes: d.node_count(),
        multiplier_labels: d
            .nodes()
            .iter()
            .map(|k| match k {
                GeneratorKind::Multiplier { label, .. } => *label,
                _ => 0,
            })
            .sum(),
        splitter_nesting: (0..d.node_count())
            .filter(|&n| matches!(d.nodes()[n], GeneratorKind::Splitter { .. } | GeneratorKind::Merger { .. }))
            .map(|n| {
                let left = if matches!(d.nodes()[n], GeneratorKind::Splitter { .. }) { 1 } else { 0 };
                child_leaves(d, n, left, budget)
            })
            .sum(),
        edges: d.edge_count(),
    }
}

/// [`simplify_with`] using the build's default check mode.
pub fn simplify(d: &Diagram) -> Result<(Diagram, RewriteTrace), DiagramError> {
    simplify_with(d, CheckMode::default())
}

/// Rewrites to a fixpoint, always applying the first match of the
/// highest-priority rule that matches. Every rewrite strictly lowers
/// [`measure`], so this terminates.
pub fn simplify_with(d: &Diagram, check: CheckMode) -> Result<(Diagram, RewriteTrace), DiagramError> {
    d.ensure_valid()?;
    let reference = (check != CheckMode::Never).then(|| eval_unchecked(d));
    let mut cur = d.clone();
    let mut trace = RewriteTrace::default();
    'outer: loop {
        for rule in RuleId::ALL {
            let Some(site) = find_matches(&cur, rule).into_iter().next() else {
                continue;
            };
            let next = rules::rewrite(&cur, &site, Padding::Zero);
            debug_assert!(measure(&next) < measure(&cur), "{rule} did not decrease the measure");
            trace.steps.push(RewriteStep {
                site,
                nodes_before: cur.node_count(),
                nodes_after: next.node_count(),
            });
            cur = next;
            let due = match check {
                CheckMode::Never => false,
                CheckMode::Every => true,
                CheckMode::Sampled(n) => trace.len() % n.max(1) == 0,
            };
            if let (true, Some(want)) = (due, &reference) {
                let got = eval_unchecked(&cur);
                let tol = 1e-9 * want.max_abs().max(1.0);
                assert!(
                    Tensor::allclose(&got, want, tol),
                    "rewrite {rule} changed the interpretation (step {})",
                    trace.len()
                );
            }
            continue 'outer;
        }
        break;
    }
    Ok((cur, trace))
}
