//! The line view sent to clients.

use nadea_core::engine::{ProofState, Verdictmap};
use nadea_core::export::OPEN_MARK;
use nadea_core::prover::FeasibilityVerdict;
use nadea_core::syntax::{render_formula, render_term, PrintStyle};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireLine {
    /// 1-based preorder position.
    pub number: usize,
    pub depth: usize,
    /// Rule name, or `¤` on an open goal.
    pub rule: String,
    pub assumptions: Vec<String>,
    pub goal: String,
    pub witness: Option<String>,
    pub side_condition: Option<String>,
    /// Last prover verdict for an open goal, when one is current.
    pub feasibility: Option<FeasibilityVerdict>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireState {
    /// Number of rule applications; send it back with `apply` to detect
    /// concurrent edits.
    pub version: usize,
    pub complete: bool,
    pub open_goals: usize,
    pub lines: Vec<WireLine>,
}

pub fn wire_state(state: &ProofState, feasibility: Option<&Verdictmap>) -> WireState {
    let named = |f| render_formula(f, PrintStyle::Named);
    let lines = state
        .lines()
        .into_iter()
        .map(|line| {
            let n = line.data;
            let applied = n.applied.as_ref();
            WireLine {
                number: line.number,
                depth: line.depth,
                rule: applied.map_or(OPEN_MARK.to_string(), |a| a.rule.name().to_string()),
                assumptions: n.assumptions.iter().map(named).collect(),
                goal: named(&n.goal),
                witness: applied.and_then(|a| a.witness.as_ref()).map(|t| render_term(t, PrintStyle::Named)),
                side_condition: applied.and_then(|a| a.side_condition.as_ref()).map(|sc| {
                    let fs: Vec<String> = sc.formulas.iter().map(named).collect();
                    if fs.is_empty() {
                        format!("{} is new", sc.constant)
                    } else {
                        format!("{} does not occur in {}", sc.constant, fs.join(", "))
                    }
                }),
                feasibility: feasibility.and_then(|m| m.get(&line.node)).copied(),
            }
        })
        .collect();
    WireState { version: state.history_len(), complete: state.is_complete(), open_goals: state.open_count(), lines }
}
