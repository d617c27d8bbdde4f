//! Local rewrite rules, a terminating simplifier, numerical soundness checks
//! for each rule, and equality proofs through normal forms.

mod prove;
mod rules;
mod simplify;
mod soundness;

use std::fmt;
use std::str::FromStr;

use crate::diagram::{Diagram, NodeId};
use crate::error::RewriteError;

pub use prove::{prove_equal, Certificate, Verdict};
pub use simplify::{measure, simplify, simplify_with, CheckMode, Measure};
pub use soundness::{check_corrupted_fuse_z, check_rule_soundness, RuleReport, UNMECHANIZED};

/// The mechanized rules, in the simplifier's priority order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    /// Multiplies two scalar nodes together; drops scalars equal to 1.
    ScalarFold,
    /// Removes two-legged nodes that denote a bare wire: identities,
    /// phaseless two-legged Z boxes, caps, cups, 1-in/1-out X spiders and
    /// multipliers by 1.
    RemoveIdentitySpider,
    /// A W node with a single leg is the identity.
    WSingleLeg,
    /// `Mult(d, a)` followed by `Mult(d, b)` is `Mult(d, a*b mod d)`.
    MultiplierCompose,
    /// Merger then splitter, or splitter then merger, on the same pair of
    /// dimensions cancels.
    SplitterMergerCancel,
    /// Re-associates a left-nested pair of splitters (or mergers) to the
    /// right.
    SplitterAssoc,
    /// Fuses two Z boxes joined by one or more wires.
    FuseZ,
    /// Fuses two X spiders of the same dimension joined by exactly one wire.
    FuseX,
    /// Disconnects a Z box from an X spider of dimension `d` across wires
    /// whose X-side orientations cancel modulo `d`.
    HopfDisconnect,
}

impl RuleId {
    pub const ALL: [RuleId; 9] = [
        RuleId::ScalarFold,
        RuleId::RemoveIdentitySpider,
        RuleId::WSingleLeg,
        RuleId::MultiplierCompose,
        RuleId::SplitterMergerCancel,
        RuleId::SplitterAssoc,
        RuleId::FuseZ,
        RuleId::FuseX,
        RuleId::HopfDisconnect,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::ScalarFold => "scalar-fold",
            RuleId::RemoveIdentitySpider => "remove-identity-spider",
            RuleId::WSingleLeg => "w-single-leg",
            RuleId::MultiplierCompose => "multiplier-compose",
            RuleId::SplitterMergerCancel => "splitter-merger-cancel",
            RuleId::SplitterAssoc => "splitter-assoc",
            RuleId::FuseZ => "fuse-z",
            RuleId::FuseX => "fuse-x",
            RuleId::HopfDisconnect => "hopf-disconnect",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown rule '{s}'"))
    }
}

/// A place where a rule applies: the nodes and edge indices bound by the
/// pattern, in the rule's own order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Match {
    pub rule: RuleId,
    pub nodes: Vec<NodeId>,
    pub edges: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RewriteStep {
    pub site: Match,
    pub nodes_before: usize,
    pub nodes_after: usize,
}

/// The rewrites applied by [`simplify`], in order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RewriteTrace {
    pub steps: Vec<RewriteStep>,
}

impl RewriteTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Re-applies every step to `start`.
    pub fn replay(&self, start: &Diagram) -> Result<Diagram, RewriteError> {
        let mut d = start.clone();
        for step in &self.steps {
            d = apply_rule(&d, &step.site)?;
        }
        Ok(d)
    }
}

impl fmt::Display for RewriteTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(
                f,
                "{i:>4}  {:<24} nodes {:?}  {} -> {}",
                s.site.rule, s.site.nodes, s.nodes_before, s.nodes_after
            )?;
        }
        Ok(())
    }
}

/// Every match of `rule` in `d`, sorted. Matches may overlap.
pub fn find_matches(d: &Diagram, rule: RuleId) -> Vec<Match> {
    let mut ms = rules::find(d, rule);
    ms.sort();
    ms
}

/// Applies a match produced by [`find_matches`] on the same diagram.
pub fn apply_rule(d: &Diagram, m: &Match) -> Result<Diagram, RewriteError> {
    d.ensure_valid()?;
    if !find_matches(d, m.rule).contains(m) {
        return Err(RewriteError::StaleMatch);
    }
    Ok(rules::rewrite(d, m, rules::Padding::Zero))
}
