//! Backward-chaining proof construction.
//!
//! A [`ProofState`] is a goal tree. Open leaves are goals still to be proved;
//! applying a rule to an open leaf attaches the rule's premises as new
//! children. Fresh constants for `Uni_I` and `Exi_E` are chosen by the engine
//! and every new child whose goal is already an assumption is closed with
//! `Assume` straight away.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{self, abstract_formula, member, news, sub, Derivation, Rule};
use crate::prover::{self, Budget, FeasibilityVerdict, Sequent};
use crate::syntax::{ArityClash, Formula, Id, Term};

pub type NodeId = usize;

pub type Verdictmap = BTreeMap<NodeId, FeasibilityVerdict>;

/// A rule application request.
///
/// `formula` supplies the part of an elimination rule that cannot be read off
/// the goal when working backwards:
///
/// * `Imp_E`: the antecedent `q`; the premises become `q ⟶ p` and `q`.
/// * `Dis_E`: the disjunction to split.
/// * `Con_E1`: the right conjunct `b`; the premise becomes `p ∧ b`.
/// * `Con_E2`: the left conjunct `a`; the premise becomes `a ∧ p`.
/// * `Exi_E`: the existential to eliminate.
/// * `Uni_E`: optionally the universal to instantiate; the witness is then
///   inferred when omitted. Without it the premise abstracts every
///   occurrence of the witness in the goal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleRequest {
    pub node: NodeId,
    pub rule: Rule,
    #[serde(default)]
    pub witness: Option<Term>,
    #[serde(default)]
    pub formula: Option<Formula>,
}

impl RuleRequest {
    pub fn new(node: NodeId, rule: Rule) -> Self {
        RuleRequest { node, rule, witness: None, formula: None }
    }

    pub fn witness(mut self, t: Term) -> Self {
        self.witness = Some(t);
        self
    }

    pub fn formula(mut self, f: Formula) -> Self {
        self.formula = Some(f);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("the goal has a free variable")]
    OpenFormula,
    #[error("ill-formed formula: {0}")]
    IllFormed(#[from] ArityClash),
    #[error("{rule} does not apply: {reason}")]
    RuleMismatch { rule: Rule, reason: String },
    #[error("{0} needs a witness term")]
    MissingWitness(Rule),
    #[error("{0} does not take a witness term")]
    UnexpectedWitness(Rule),
    #[error("{0} needs a formula operand")]
    MissingFormula(Rule),
    #[error("{0} does not take a formula operand")]
    UnexpectedFormula(Rule),
    #[error("newness violated: {0} is not new")]
    NotNew(Id),
    #[error("line {0} is already closed")]
    NodeClosed(NodeId),
    #[error("no node {0}")]
    UnknownNode(NodeId),
    #[error("nothing to undo")]
    NothingToUndo,
    #[error("the proof has open goals")]
    Incomplete,
}

impl RuleError {
    pub fn code(&self) -> &'static str {
        match self {
            RuleError::OpenFormula => "open_formula",
            RuleError::IllFormed(_) => "ill_formed",
            RuleError::RuleMismatch { .. } => "rule_mismatch",
            RuleError::MissingWitness(_) => "missing_witness",
            RuleError::UnexpectedWitness(_) => "unexpected_witness",
            RuleError::MissingFormula(_) => "missing_formula",
            RuleError::UnexpectedFormula(_) => "unexpected_formula",
            RuleError::NotNew(_) => "not_new",
            RuleError::NodeClosed(_) => "node_closed",
            RuleError::UnknownNode(_) => "unknown_node",
            RuleError::NothingToUndo => "nothing_to_undo",
            RuleError::Incomplete => "incomplete",
        }
    }
}

fn mismatch(rule: Rule, reason: impl Into<String>) -> RuleError {
    RuleError::RuleMismatch { rule, reason: reason.into() }
}

/// The newness obligation discharged when a fresh constant was chosen:
/// `constant` occurs in none of `formulas` (the quantified formula, for
/// `Exi_E` also the goal, then the assumptions).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideCondition {
    pub constant: Id,
    pub formulas: Vec<Formula>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Applied {
    pub rule: Rule,
    pub witness: Option<Term>,
    pub side_condition: Option<SideCondition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub goal: Formula,
    pub assumptions: Vec<Formula>,
    pub applied: Option<Applied>,
    pub children: Vec<NodeId>,
}

impl Node {
    fn open(goal: Formula, assumptions: Vec<Formula>) -> Self {
        Node { goal, assumptions, applied: None, children: Vec::new() }
    }

    pub fn is_open(&self) -> bool {
        self.applied.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
struct Edit {
    node: NodeId,
    prior_len: usize,
}

/// One row of the preorder line view.
#[derive(Debug, Clone, PartialEq)]
pub struct Line<'a> {
    /// 1-based preorder position.
    pub number: usize,
    pub depth: usize,
    pub node: NodeId,
    pub data: &'a Node,
}

/// Result of [`infer_witness`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Term(Term),
    /// The body never mentions the bound variable; any term will do.
    AnyTerm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("no term makes the instance match the body")]
pub struct NoMatch;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofState {
    nodes: Vec<Node>,
    history: Vec<Edit>,
}

impl ProofState {
    pub fn new(goal: Formula) -> Result<Self, RuleError> {
        goal.well_formed()?;
        if !goal.is_closed() {
            return Err(RuleError::OpenFormula);
        }
        let mut s = ProofState { nodes: vec![Node::open(goal, Vec::new())], history: Vec::new() };
        s.auto_close(0);
        Ok(s)
    }

    pub const ROOT: NodeId = 0;

    pub fn root_goal(&self) -> &Formula {
        &self.nodes[0].goal
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.nodes.get(id)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn history_len(&self) -> usize {
        self.history.len()
    }

    fn auto_close(&mut self, id: NodeId) {
        let node = &mut self.nodes[id];
        if node.is_open() && member(&node.goal, &node.assumptions) {
            node.applied = Some(Applied { rule: Rule::Assume, witness: None, side_condition: None });
        }
    }

    fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.nodes.iter().flat_map(|n| std::iter::once(&n.goal).chain(n.assumptions.iter()))
    }

    /// First of `c'`, `c''`, … that occurs nowhere in the tree and is not a
    /// symbol of the root goal.
    pub fn fresh_constant(&self) -> Id {
        self.fresh_constant_avoiding(&[])
    }

    fn fresh_constant_avoiding(&self, extra: &[&Formula]) -> Id {
        let mut name = String::from("c");
        loop {
            name.push('\'');
            let c = Id::new(&name).expect("valid identifier");
            let clash = self.root_goal().mentions_symbol(&c)
                || self.formulas().chain(extra.iter().copied()).any(|f| !kernel::new(&c, f));
            if !clash {
                return c;
            }
        }
    }

    /// Default term for a vacuous instantiation: `a`, or a fresh constant if
    /// `a` already occurs.
    fn default_term(&self, extra: &[&Formula]) -> Term {
        let a = Id::new("a").expect("valid identifier");
        let taken = self.root_goal().mentions_symbol(&a)
            || self.formulas().chain(extra.iter().copied()).any(|f| f.mentions_function(&a));
        if taken {
            Term::Fun(self.fresh_constant_avoiding(extra), Vec::new())
        } else {
            Term::Fun(a, Vec::new())
        }
    }

    pub fn apply_rule(&mut self, req: &RuleRequest) -> Result<(), RuleError> {
        self.apply_inner(req, None)
    }

    /// Applies a rule, and for `Uni_I`/`Exi_E` uses `constant` instead of a
    /// freshly chosen one after checking the rule's own newness condition.
    fn apply_inner(&mut self, req: &RuleRequest, constant: Option<&Id>) -> Result<(), RuleError> {
        let node = self.nodes.get(req.node).ok_or(RuleError::UnknownNode(req.node))?;
        if !node.is_open() {
            return Err(RuleError::NodeClosed(req.node));
        }
        let rule = req.rule;
        let takes_formula =
            matches!(rule, Rule::ImpE | Rule::DisE | Rule::ConE1 | Rule::ConE2 | Rule::ExiE | Rule::UniE);
        let takes_witness = matches!(rule, Rule::ExiI | Rule::UniE);
        if req.formula.is_some() && !takes_formula {
            return Err(RuleError::UnexpectedFormula(rule));
        }
        if req.witness.is_some() && !takes_witness {
            return Err(RuleError::UnexpectedWitness(rule));
        }
        if let Some(f) = &req.formula {
            f.well_formed()?;
        }
        if let Some(t) = &req.witness {
            let mut sig = crate::syntax::Signature::default();
            sig.add_term(t)?;
        }
        let p = node.goal.clone();
        let z = node.assumptions.clone();
        let operand = || req.formula.clone().ok_or(RuleError::MissingFormula(rule));
        let with = |h: Formula| {
            let mut v = Vec::with_capacity(z.len() + 1);
            v.push(h);
            v.extend(z.iter().cloned());
            v
        };
        let mut witness = None;
        let mut side_condition = None;
        let children: Vec<(Formula, Vec<Formula>)> = match rule {
            Rule::Assume => {
                if !member(&p, &z) {
                    return Err(mismatch(rule, "the goal is not among the assumptions"));
                }
                vec![]
            }
            Rule::Boole => vec![(Formula::Falsity, with(Formula::neg(p.clone())))],
            Rule::ImpE => {
                let q = operand()?;
                vec![(Formula::imp(q.clone(), p.clone()), z.clone()), (q, z.clone())]
            }
            Rule::ImpI => {
                let Formula::Imp(a, b) = &p else {
                    return Err(mismatch(rule, "the goal is not an implication"));
                };
                vec![((**b).clone(), with((**a).clone()))]
            }
            Rule::DisE => {
                let d = operand()?;
                let Formula::Dis(a, b) = &d else {
                    return Err(mismatch(rule, "the operand is not a disjunction"));
                };
                let (a, b) = ((**a).clone(), (**b).clone());
                vec![(d.clone(), z.clone()), (p.clone(), with(a)), (p.clone(), with(b))]
            }
            Rule::DisI1 | Rule::DisI2 => {
                let Formula::Dis(a, b) = &p else {
                    return Err(mismatch(rule, "the goal is not a disjunction"));
                };
                let side = if rule == Rule::DisI1 { a } else { b };
                vec![((**side).clone(), z.clone())]
            }
            Rule::ConE1 => vec![(Formula::con(p.clone(), operand()?), z.clone())],
            Rule::ConE2 => vec![(Formula::con(operand()?, p.clone()), z.clone())],
            Rule::ConI => {
                let Formula::Con(a, b) = &p else {
                    return Err(mismatch(rule, "the goal is not a conjunction"));
                };
                vec![((**a).clone(), z.clone()), ((**b).clone(), z.clone())]
            }
            Rule::ExiE => {
                let e = operand()?;
                let Formula::Exi(q) = &e else {
                    return Err(mismatch(rule, "the operand is not an existential"));
                };
                let c = self.pick_constant(constant, &e, &[&**q, &p], &z)?;
                let inst = sub(0, &Term::Fun(c.clone(), Vec::new()), q);
                let mut formulas = vec![e.clone(), p.clone()];
                formulas.extend(z.iter().cloned());
                side_condition = Some(SideCondition { constant: c.clone(), formulas });
                witness = Some(Term::Fun(c, Vec::new()));
                vec![(e.clone(), z.clone()), (p.clone(), with(inst))]
            }
            Rule::ExiI => {
                let Formula::Exi(q) = &p else {
                    return Err(mismatch(rule, "the goal is not an existential"));
                };
                let t = req.witness.clone().ok_or(RuleError::MissingWitness(rule))?;
                let child = sub(0, &t, q);
                witness = Some(t);
                vec![(child, z.clone())]
            }
            Rule::UniE => {
                let (q, t) = match (&req.formula, &req.witness) {
                    (Some(u), w) => {
                        let Formula::Uni(q) = u else {
                            return Err(mismatch(rule, "the operand is not a universal"));
                        };
                        let t = match w {
                            Some(t) => t.clone(),
                            None => match infer_witness(q, &p) {
                                Ok(Witness::Term(t)) => t,
                                Ok(Witness::AnyTerm) => self.default_term(&[u]),
                                Err(NoMatch) => {
                                    return Err(mismatch(rule, "the goal is not an instance of the operand"))
                                }
                            },
                        };
                        if sub(0, &t, q) != p {
                            return Err(mismatch(rule, "the goal is not the instance of the operand at the witness"));
                        }
                        ((**q).clone(), t)
                    }
                    (None, Some(t)) => (abstract_formula(0, t, &p), t.clone()),
                    (None, None) => return Err(RuleError::MissingWitness(rule)),
                };
                witness = Some(t);
                vec![(Formula::uni(q), z.clone())]
            }
            Rule::UniI => {
                let Formula::Uni(q) = &p else {
                    return Err(mismatch(rule, "the goal is not a universal"));
                };
                let c = self.pick_constant(constant, &p, &[&**q], &z)?;
                let inst = sub(0, &Term::Fun(c.clone(), Vec::new()), q);
                let mut formulas = vec![p.clone()];
                formulas.extend(z.iter().cloned());
                side_condition = Some(SideCondition { constant: c.clone(), formulas });
                witness = Some(Term::Fun(c, Vec::new()));
                vec![(inst, z.clone())]
            }
        };
        for (goal, _) in &children {
            goal.well_formed()?;
        }
        let prior_len = self.nodes.len();
        let ids: Vec<NodeId> = (prior_len..prior_len + children.len()).collect();
        for (goal, assumptions) in children {
            self.nodes.push(Node::open(goal, assumptions));
        }
        let target = &mut self.nodes[req.node];
        target.applied = Some(Applied { rule, witness, side_condition });
        target.children = ids.clone();
        for id in ids {
            self.auto_close(id);
        }
        self.history.push(Edit { node: req.node, prior_len });
        Ok(())
    }

    fn pick_constant(
        &self,
        given: Option<&Id>,
        operand: &Formula,
        local: &[&Formula],
        z: &[Formula],
    ) -> Result<Id, RuleError> {
        match given {
            None => Ok(self.fresh_constant_avoiding(&[operand])),
            Some(c) => {
                if local.iter().all(|f| kernel::new(c, f)) && news(c, z) {
                    Ok(c.clone())
                } else {
                    Err(RuleError::NotNew(c.clone()))
                }
            }
        }
    }

    /// Reverts the most recent rule application together with the closures
    /// it triggered.
    pub fn undo(&mut self) -> Result<(), RuleError> {
        let edit = self.history.pop().ok_or(RuleError::NothingToUndo)?;
        self.nodes.truncate(edit.prior_len);
        let node = &mut self.nodes[edit.node];
        node.applied = None;
        node.children.clear();
        Ok(())
    }

    pub fn is_complete(&self) -> bool {
        self.nodes.iter().all(|n| !n.is_open())
    }

    pub fn open_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_open()).count()
    }

    pub fn extract(&self) -> Result<Derivation, RuleError> {
        if !self.is_complete() {
            return Err(RuleError::Incomplete);
        }
        Ok(self.derivation_at(Self::ROOT))
    }

    fn derivation_at(&self, id: NodeId) -> Derivation {
        let n = &self.nodes[id];
        let applied = n.applied.as_ref().expect("complete tree");
        Derivation {
            rule: applied.rule,
            goal: n.goal.clone(),
            assumptions: n.assumptions.clone(),
            witness: applied.witness.clone(),
            premises: n.children.iter().map(|&c| self.derivation_at(c)).collect(),
        }
    }

    /// Preorder flattening; indentation depth is the distance from the root.
    pub fn lines(&self) -> Vec<Line<'_>> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(Self::ROOT, 0)];
        while let Some((id, depth)) = stack.pop() {
            out.push(Line { number: out.len() + 1, depth, node: id, data: &self.nodes[id] });
            for &c in self.nodes[id].children.iter().rev() {
                stack.push((c, depth + 1));
            }
        }
        out
    }

    /// Node shown on a 1-based line of the line view.
    pub fn node_at_line(&self, line: usize) -> Option<NodeId> {
        self.lines().get(line.checked_sub(1)?).map(|l| l.node)
    }

    pub fn open_sequents(&self) -> Vec<(NodeId, Sequent)> {
        self.lines()
            .into_iter()
            .filter(|l| l.data.is_open())
            .map(|l| (l.node, Sequent::new(l.data.assumptions.clone(), l.data.goal.clone())))
            .collect()
    }

    /// Runs the prover on every open leaf of a snapshot of this state.
    pub fn assess(&self, budget: &Budget) -> Verdictmap {
        prover::assess(&self.open_sequents(), budget, |_, _| {})
    }

    /// Rebuilds a session by applying the rules of a derivation from the
    /// root down, keeping its constants. Subtrees under goals that the engine
    /// closes with `Assume` on its own are skipped.
    pub fn replay(d: &Derivation) -> Result<ProofState, RuleError> {
        if !d.assumptions.is_empty() {
            return Err(mismatch(d.rule, "the root of an imported proof must have no assumptions"));
        }
        let mut s = ProofState::new(d.goal.clone())?;
        s.replay_at(Self::ROOT, d)?;
        Ok(s)
    }

    fn replay_at(&mut self, id: NodeId, d: &Derivation) -> Result<(), RuleError> {
        let node = &self.nodes[id];
        if !node.is_open() {
            return Ok(());
        }
        if node.goal != d.goal || node.assumptions != d.assumptions {
            return Err(mismatch(d.rule, "the derivation does not match the goal"));
        }
        if let Some(msg) = d.structural_error() {
            return Err(mismatch(d.rule, msg));
        }
        let req = request_for(id, d);
        let constant = match (&d.witness, d.rule.needs_fresh_constant()) {
            (Some(Term::Fun(c, _)), true) => Some(c),
            _ => None,
        };
        self.apply_inner(&req, constant)?;
        let children = self.nodes[id].children.clone();
        for (c, p) in children.into_iter().zip(&d.premises) {
            self.replay_at(c, p)?;
        }
        Ok(())
    }
}

/// The request that reproduces a derivation node's rule application.
pub fn request_for(node: NodeId, d: &Derivation) -> RuleRequest {
    let premise = |i: usize| d.premises.get(i).map(|p| p.goal.clone());
    let mut req = RuleRequest::new(node, d.rule);
    match d.rule {
        Rule::ImpE => req.formula = premise(1),
        Rule::DisE | Rule::ExiE => req.formula = premise(0),
        Rule::ConE1 => {
            if let Some(Formula::Con(_, b)) = premise(0) {
                req.formula = Some(*b);
            }
        }
        Rule::ConE2 => {
            if let Some(Formula::Con(a, _)) = premise(0) {
                req.formula = Some(*a);
            }
        }
        Rule::ExiI => req.witness = d.witness.clone(),
        Rule::UniE => {
            req.witness = d.witness.clone();
            req.formula = premise(0);
        }
        _ => {}
    }
    req
}

fn unshift(t: &Term, by: usize) -> Option<Term> {
    match t {
        Term::Var(n) => n.checked_sub(by).map(Term::Var),
        Term::Fun(f, ts) => Some(Term::Fun(f.clone(), ts.iter().map(|t| unshift(t, by)).collect::<Option<_>>()?)),
    }
}

fn match_term(target: usize, body: &Term, inst: &Term, found: &mut Option<Term>) -> Result<(), NoMatch> {
    match body {
        Term::Var(n) if *n == target => {
            let t = unshift(inst, target).ok_or(NoMatch)?;
            match found {
                Some(prev) if *prev != t => Err(NoMatch),
                _ => {
                    *found = Some(t);
                    Ok(())
                }
            }
        }
        Term::Var(n) => {
            let expected = if *n < target { *n } else { n - 1 };
            if *inst == Term::Var(expected) {
                Ok(())
            } else {
                Err(NoMatch)
            }
        }
        Term::Fun(f, args) => match inst {
            Term::Fun(g, iargs) if f == g && args.len() == iargs.len() => {
                args.iter().zip(iargs).try_for_each(|(a, b)| match_term(target, a, b, found))
            }
            _ => Err(NoMatch),
        },
    }
}

fn match_formula(target: usize, body: &Formula, inst: &Formula, found: &mut Option<Term>) -> Result<(), NoMatch> {
    match (body, inst) {
        (Formula::Falsity, Formula::Falsity) => Ok(()),
        (Formula::Pre(p, args), Formula::Pre(q, iargs)) if p == q && args.len() == iargs.len() => {
            args.iter().zip(iargs).try_for_each(|(a, b)| match_term(target, a, b, found))
        }
        (Formula::Imp(a, b), Formula::Imp(c, d))
        | (Formula::Dis(a, b), Formula::Dis(c, d))
        | (Formula::Con(a, b), Formula::Con(c, d)) => {
            match_formula(target, a, c, found)?;
            match_formula(target, b, d, found)
        }
        (Formula::Exi(a), Formula::Exi(b)) | (Formula::Uni(a), Formula::Uni(b)) => {
            match_formula(target + 1, a, b, found)
        }
        _ => Err(NoMatch),
    }
}

/// Finds `t` with `sub(0, t, body) == instance` by walking both formulas in
/// parallel. The variable being replaced is 0 at the top and one higher under
/// each quantifier; a candidate found under `k` quantifiers is shifted down
/// by `k`, and fails if that would expose a bound variable.
pub fn infer_witness(body: &Formula, instance: &Formula) -> Result<Witness, NoMatch> {
    let mut found = None;
    match_formula(0, body, instance, &mut found)?;
    match found {
        None => Ok(Witness::AnyTerm),
        Some(t) => {
            if sub(0, &t, body) != *instance {
                return Err(NoMatch);
            }
            Ok(Witness::Term(t))
        }
    }
}
