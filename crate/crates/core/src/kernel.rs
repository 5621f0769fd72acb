//! The trusted proof checker.
//!
//! A [`Derivation`] records, at every node, the rule used, the formula proved,
//! the assumptions in scope and (for quantifier rules) a witness term. [`check`]
//! validates each node against the 14 rules of the `OK` system:
//!
//! ```text
//! Assume   member p z                                      ==> OK p z
//! Boole    OK Falsity (Imp p Falsity # z)                  ==> OK p z
//! Imp_E    OK (Imp q p) z, OK q z                          ==> OK p z
//! Imp_I    OK q (p # z)                                    ==> OK (Imp p q) z
//! Dis_E    OK (Dis p q) z, OK r (p # z), OK r (q # z)      ==> OK r z
//! Dis_I1   OK p z                                          ==> OK (Dis p q) z
//! Dis_I2   OK q z                                          ==> OK (Dis p q) z
//! Con_E1   OK (Con p q) z                                  ==> OK p z
//! Con_E2   OK (Con p q) z                                  ==> OK q z
//! Con_I    OK p z, OK q z                                  ==> OK (Con p q) z
//! Exi_E    OK (Exi p) z, OK q (sub 0 c p # z), news c (p # q # z)  ==> OK q z
//! Exi_I    OK (sub 0 t p) z                                ==> OK (Exi p) z
//! Uni_E    OK (Uni p) z                                    ==> OK (sub 0 t p) z
//! Uni_I    OK (sub 0 c p) z, news c (p # z)                ==> OK (Uni p) z
//! ```
//!
//! Substitution never captures: `sub` shifts the inserted term with
//! `inc_term` each time it passes a binder, so no side condition about the
//! term being free for the variable is needed.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{Formula, Id, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Assume,
    Boole,
    ImpE,
    ImpI,
    DisE,
    DisI1,
    DisI2,
    ConE1,
    ConE2,
    ConI,
    ExiE,
    ExiI,
    UniE,
    UniI,
}

impl Rule {
    pub const ALL: [Rule; 14] = [
        Rule::Assume,
        Rule::Boole,
        Rule::ImpE,
        Rule::ImpI,
        Rule::DisE,
        Rule::DisI1,
        Rule::DisI2,
        Rule::ConE1,
        Rule::ConE2,
        Rule::ConI,
        Rule::ExiE,
        Rule::ExiI,
        Rule::UniE,
        Rule::UniI,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Assume => "Assume",
            Rule::Boole => "Boole",
            Rule::ImpE => "Imp_E",
            Rule::ImpI => "Imp_I",
            Rule::DisE => "Dis_E",
            Rule::DisI1 => "Dis_I1",
            Rule::DisI2 => "Dis_I2",
            Rule::ConE1 => "Con_E1",
            Rule::ConE2 => "Con_E2",
            Rule::ConI => "Con_I",
            Rule::ExiE => "Exi_E",
            Rule::ExiI => "Exi_I",
            Rule::UniE => "Uni_E",
            Rule::UniI => "Uni_I",
        }
    }

    /// Number of premises.
    pub fn arity(self) -> usize {
        match self {
            Rule::Assume => 0,
            Rule::ImpE | Rule::ConI | Rule::ExiE => 2,
            Rule::DisE => 3,
            _ => 1,
        }
    }

    /// Rules whose node records a term: the instantiating term for
    /// `Exi_I`/`Uni_E`, the fresh constant for `Exi_E`/`Uni_I`.
    pub fn has_witness(self) -> bool {
        matches!(self, Rule::ExiE | Rule::ExiI | Rule::UniE | Rule::UniI)
    }

    /// Rules whose witness must be a new constant.
    pub fn needs_fresh_constant(self) -> bool {
        matches!(self, Rule::ExiE | Rule::UniI)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown rule {0:?}")]
pub struct UnknownRule(pub String);

impl FromStr for Rule {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rule::ALL.into_iter().find(|r| r.name() == s).ok_or_else(|| UnknownRule(s.to_string()))
    }
}

impl Serialize for Rule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Rule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An explicit proof tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    pub rule: Rule,
    pub goal: Formula,
    pub assumptions: Vec<Formula>,
    pub witness: Option<Term>,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn new(
        rule: Rule,
        goal: Formula,
        assumptions: Vec<Formula>,
        witness: Option<Term>,
        premises: Vec<Derivation>,
    ) -> Self {
        Derivation { rule, goal, assumptions, witness, premises }
    }

    /// Rules in preorder.
    pub fn rules(&self) -> Vec<Rule> {
        let mut out = Vec::new();
        self.visit(&mut |d| out.push(d.rule));
        out
    }

    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Derivation)) {
        f(self);
        for p in &self.premises {
            p.visit(f);
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(Derivation::node_count).sum::<usize>()
    }

    pub fn node(&self, path: &[usize]) -> Option<&Derivation> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.premises.get(i)?.node(rest),
        }
    }

    pub fn node_mut(&mut self, path: &[usize]) -> Option<&mut Derivation> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.premises.get_mut(i)?.node_mut(rest),
        }
    }

    /// Shape problems that make the tree meaningless regardless of the rules:
    /// premise count, witness presence, constant witnesses.
    pub fn structural_error(&self) -> Option<String> {
        if self.premises.len() != self.rule.arity() {
            return Some(format!(
                "{} takes {} premise(s), found {}",
                self.rule,
                self.rule.arity(),
                self.premises.len()
            ));
        }
        match (&self.witness, self.rule.has_witness()) {
            (None, true) => return Some(format!("{} requires a witness", self.rule)),
            (Some(_), false) => return Some(format!("{} takes no witness", self.rule)),
            _ => {}
        }
        if self.rule.needs_fresh_constant() && !self.witness.as_ref().is_some_and(Term::is_constant) {
            return Some(format!("{} witness must be a constant", self.rule));
        }
        None
    }
}

pub fn member(p: &Formula, z: &[Formula]) -> bool {
    z.iter().any(|q| q == p)
}

pub fn new_term(c: &Id, t: &Term) -> bool {
    match t {
        Term::Var(_) => true,
        Term::Fun(i, ts) => i != c && new_list(c, ts),
    }
}

pub fn new_list(c: &Id, ts: &[Term]) -> bool {
    ts.iter().all(|t| new_term(c, t))
}

pub fn new(c: &Id, f: &Formula) -> bool {
    match f {
        Formula::Falsity => true,
        Formula::Pre(_, ts) => new_list(c, ts),
        Formula::Imp(a, b) | Formula::Dis(a, b) | Formula::Con(a, b) => new(c, a) && new(c, b),
        Formula::Exi(p) | Formula::Uni(p) => new(c, p),
    }
}

pub fn news(c: &Id, z: &[Formula]) -> bool {
    z.iter().all(|f| new(c, f))
}

pub fn inc_term(t: &Term) -> Term {
    match t {
        Term::Var(n) => Term::Var(n + 1),
        Term::Fun(i, ts) => Term::Fun(i.clone(), inc_list(ts)),
    }
}

pub fn inc_list(ts: &[Term]) -> Vec<Term> {
    ts.iter().map(inc_term).collect()
}

pub fn sub_term(i: usize, s: &Term, t: &Term) -> Term {
    match t {
        Term::Var(n) if *n < i => Term::Var(*n),
        Term::Var(n) if *n == i => s.clone(),
        Term::Var(n) => Term::Var(n - 1),
        Term::Fun(j, ts) => Term::Fun(j.clone(), sub_list(i, s, ts)),
    }
}

pub fn sub_list(i: usize, s: &Term, ts: &[Term]) -> Vec<Term> {
    ts.iter().map(|t| sub_term(i, s, t)).collect()
}

/// Replaces variable `i` by `s` and closes the gap left by the removed binder.
pub fn sub(i: usize, s: &Term, f: &Formula) -> Formula {
    match f {
        Formula::Falsity => Formula::Falsity,
        Formula::Pre(j, ts) => Formula::Pre(j.clone(), sub_list(i, s, ts)),
        Formula::Imp(a, b) => Formula::imp(sub(i, s, a), sub(i, s, b)),
        Formula::Dis(a, b) => Formula::dis(sub(i, s, a), sub(i, s, b)),
        Formula::Con(a, b) => Formula::con(sub(i, s, a), sub(i, s, b)),
        Formula::Exi(p) => Formula::exi(sub(i + 1, &inc_term(s), p)),
        Formula::Uni(p) => Formula::uni(sub(i + 1, &inc_term(s), p)),
    }
}

fn abstract_term(i: usize, s: &Term, t: &Term) -> Term {
    if t == s {
        return Term::Var(i);
    }
    match t {
        Term::Var(n) if *n >= i => Term::Var(n + 1),
        Term::Var(n) => Term::Var(*n),
        Term::Fun(j, ts) => Term::Fun(j.clone(), ts.iter().map(|t| abstract_term(i, s, t)).collect()),
    }
}

/// A right inverse of `sub`: every occurrence of `s` becomes variable `i`, so
/// that `sub(i, s, abstract_formula(i, s, f)) == f`.
pub fn abstract_formula(i: usize, s: &Term, f: &Formula) -> Formula {
    match f {
        Formula::Falsity => Formula::Falsity,
        Formula::Pre(j, ts) => Formula::Pre(j.clone(), ts.iter().map(|t| abstract_term(i, s, t)).collect()),
        Formula::Imp(a, b) => Formula::imp(abstract_formula(i, s, a), abstract_formula(i, s, b)),
        Formula::Dis(a, b) => Formula::dis(abstract_formula(i, s, a), abstract_formula(i, s, b)),
        Formula::Con(a, b) => Formula::con(abstract_formula(i, s, a), abstract_formula(i, s, b)),
        Formula::Exi(p) => Formula::exi(abstract_formula(i + 1, &inc_term(s), p)),
        Formula::Uni(p) => Formula::uni(abstract_formula(i + 1, &inc_term(s), p)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum Violation {
    #[error("malformed derivation: {0}")]
    Malformed(String),
    #[error("{0}")]
    Mismatch(String),
    #[error("newness violated: {0} occurs in the goal, the assumptions or the quantified formula")]
    NotNew(Id),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    /// Premise indices from the root to the offending node.
    pub path: Vec<usize>,
    pub reason: Violation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub ok: bool,
    pub failure: Option<Failure>,
}

impl CheckReport {
    fn from(failure: Option<Failure>) -> Self {
        CheckReport { ok: failure.is_none(), failure }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => f.write_str("ok"),
            Some(fail) => {
                let path: Vec<String> = fail.path.iter().map(|i| (i + 1).to_string()).collect();
                let at = if path.is_empty() { "root".to_string() } else { format!("premise path {}", path.join(".")) };
                write!(f, "rejected at {at}: {}", fail.reason)
            }
        }
    }
}

pub fn check(d: &Derivation) -> CheckReport {
    let mut path = Vec::new();
    CheckReport::from(check_at(d, &mut path).err())
}

fn check_at(d: &Derivation, path: &mut Vec<usize>) -> Result<(), Failure> {
    if let Err(reason) = check_node(d) {
        return Err(Failure { path: path.clone(), reason });
    }
    for (i, p) in d.premises.iter().enumerate() {
        path.push(i);
        check_at(p, path)?;
        path.pop();
    }
    Ok(())
}

fn mismatch(msg: impl Into<String>) -> Violation {
    Violation::Mismatch(msg.into())
}

fn expect_goal(d: &Derivation, i: usize, want: &Formula) -> Result<(), Violation> {
    let got = &d.premises[i].goal;
    if got != want {
        return Err(mismatch(format!("premise {} must prove {want:?}, found {got:?}", i + 1)));
    }
    Ok(())
}

fn expect_assumptions(d: &Derivation, i: usize, want: &[Formula]) -> Result<(), Violation> {
    if d.premises[i].assumptions != want {
        return Err(mismatch(format!("premise {} has the wrong assumptions", i + 1)));
    }
    Ok(())
}

fn with(head: &Formula, z: &[Formula]) -> Vec<Formula> {
    let mut out = Vec::with_capacity(z.len() + 1);
    out.push(head.clone());
    out.extend_from_slice(z);
    out
}

fn constant_name(w: &Term) -> &Id {
    match w {
        Term::Fun(c, _) => c,
        Term::Var(_) => unreachable!("structural check guarantees a constant"),
    }
}

fn check_node(d: &Derivation) -> Result<(), Violation> {
    if let Some(msg) = d.structural_error() {
        return Err(Violation::Malformed(msg));
    }
    let p = &d.goal;
    let z = d.assumptions.as_slice();
    let prem = |i: usize| &d.premises[i].goal;
    match d.rule {
        Rule::Assume => {
            if !member(p, z) {
                return Err(mismatch("goal is not among the assumptions"));
            }
        }
        Rule::Boole => {
            expect_goal(d, 0, &Formula::Falsity)?;
            expect_assumptions(d, 0, &with(&Formula::neg(p.clone()), z))?;
        }
        Rule::ImpE => {
            let q = prem(1);
            expect_goal(d, 0, &Formula::imp(q.clone(), p.clone()))?;
            expect_assumptions(d, 0, z)?;
            expect_assumptions(d, 1, z)?;
        }
        Rule::ImpI => {
            let Formula::Imp(a, b) = p else {
                return Err(mismatch("goal is not an implication"));
            };
            expect_goal(d, 0, b)?;
            expect_assumptions(d, 0, &with(a, z))?;
        }
        Rule::DisE => {
            let Formula::Dis(a, b) = prem(0) else {
                return Err(mismatch("premise 1 must prove a disjunction"));
            };
            expect_assumptions(d, 0, z)?;
            expect_goal(d, 1, p)?;
            expect_assumptions(d, 1, &with(a, z))?;
            expect_goal(d, 2, p)?;
            expect_assumptions(d, 2, &with(b, z))?;
        }
        Rule::DisI1 | Rule::DisI2 => {
            let Formula::Dis(a, b) = p else {
                return Err(mismatch("goal is not a disjunction"));
            };
            expect_goal(d, 0, if d.rule == Rule::DisI1 { a } else { b })?;
            expect_assumptions(d, 0, z)?;
        }
        Rule::ConE1 | Rule::ConE2 => {
            let Formula::Con(a, b) = prem(0) else {
                return Err(mismatch("premise 1 must prove a conjunction"));
            };
            let side = if d.rule == Rule::ConE1 { a } else { b };
            if side.as_ref() != p {
                return Err(mismatch("goal is not the selected conjunct of premise 1"));
            }
            expect_assumptions(d, 0, z)?;
        }
        Rule::ConI => {
            let Formula::Con(a, b) = p else {
                return Err(mismatch("goal is not a conjunction"));
            };
            expect_goal(d, 0, a)?;
            expect_assumptions(d, 0, z)?;
            expect_goal(d, 1, b)?;
            expect_assumptions(d, 1, z)?;
        }
        Rule::ExiE => {
            let Formula::Exi(q) = prem(0) else {
                return Err(mismatch("premise 1 must prove an existential"));
            };
            let w = d.witness.as_ref().expect("checked");
            expect_assumptions(d, 0, z)?;
            expect_goal(d, 1, p)?;
            expect_assumptions(d, 1, &with(&sub(0, w, q), z))?;
            let c = constant_name(w);
            if !new(c, q) || !new(c, p) || !news(c, z) {
                return Err(Violation::NotNew(c.clone()));
            }
        }
        Rule::ExiI => {
            let Formula::Exi(q) = p else {
                return Err(mismatch("goal is not an existential"));
            };
            let w = d.witness.as_ref().expect("checked");
            expect_goal(d, 0, &sub(0, w, q))?;
            expect_assumptions(d, 0, z)?;
        }
        Rule::UniE => {
            let Formula::Uni(q) = prem(0) else {
                return Err(mismatch("premise 1 must prove a universal"));
            };
            let w = d.witness.as_ref().expect("checked");
            if &sub(0, w, q) != p {
                return Err(mismatch("goal is not the instance of premise 1 at the witness"));
            }
            expect_assumptions(d, 0, z)?;
        }
        Rule::UniI => {
            let Formula::Uni(q) = p else {
                return Err(mismatch("goal is not a universal"));
            };
            let w = d.witness.as_ref().expect("checked");
            expect_goal(d, 0, &sub(0, w, q))?;
            expect_assumptions(d, 0, z)?;
            let c = constant_name(w);
            if !new(c, q) || !news(c, z) {
                return Err(Violation::NotNew(c.clone()));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_deep_formula;

    fn deep(s: &str) -> Formula {
        parse_deep_formula(s).unwrap()
    }

    fn c(name: &str) -> Term {
        Term::constant(name)
    }

    /// The five-step proof of (∀x. R(x,x)) ⟶ (∀x. ∃y. R(x,y)).
    fn sample_proof(constant: &str) -> Derivation {
        let hyp = deep("Uni (Pre ''R'' [Var 0, Var 0])");
        let z = vec![hyp.clone()];
        let k = c(constant);
        let assume = Derivation::new(Rule::Assume, hyp.clone(), z.clone(), None, vec![]);
        let inst = sub(0, &k, &deep("Pre ''R'' [Var 0, Var 0]"));
        let uni_e = Derivation::new(Rule::UniE, inst.clone(), z.clone(), Some(k.clone()), vec![assume]);
        let exi = sub(0, &k, &deep("Exi (Pre ''R'' [Var 1, Var 0])"));
        let exi_i = Derivation::new(Rule::ExiI, exi, z.clone(), Some(k.clone()), vec![uni_e]);
        let goal = deep("Uni (Exi (Pre ''R'' [Var 1, Var 0]))");
        let uni_i = Derivation::new(Rule::UniI, goal.clone(), z, Some(k), vec![exi_i]);
        Derivation::new(Rule::ImpI, Formula::imp(hyp, goal), vec![], None, vec![uni_i])
    }

    #[test]
    fn rule_names_round_trip() {
        for r in Rule::ALL {
            assert_eq!(r.name().parse::<Rule>(), Ok(r));
        }
        assert!("Copy".parse::<Rule>().is_err());
    }

    #[test]
    fn membership() {
        let p = deep("Uni (Pre ''R'' [Var 0, Var 0])");
        let q = Formula::Falsity;
        assert!(!member(&p, &[]));
        assert!(member(&p, std::slice::from_ref(&p)));
        assert!(member(&p, &[q.clone(), p.clone(), Formula::truth()]));
    }

    #[test]
    fn newness() {
        let cid = Id::new("c").unwrap();
        assert!(new_term(&cid, &Term::Var(7)));
        assert!(!new_term(&cid, &c("c")));
        assert!(!new_term(&cid, &Term::app("f", vec![Term::app("g", vec![c("c")])])));
        assert!(new(&cid, &Formula::Falsity));
        let c1 = Id::new("c'").unwrap();
        assert!(news(&c1, &[deep("Uni (Pre ''R'' [Var 0, Var 0])")]));
        assert!(!news(&cid, &[Formula::pre("A", vec![c("c")]), Formula::Falsity]));
        // Predicate symbols are a separate namespace.
        assert!(new(&cid, &Formula::pre("c", vec![])));
    }

    #[test]
    fn increment() {
        assert_eq!(inc_term(&Term::Var(0)), Term::Var(1));
        assert_eq!(inc_term(&c("c")), c("c"));
        let t = Term::app("f", vec![Term::Var(2), Term::app("g", vec![Term::Var(0)])]);
        assert_eq!(inc_term(&t), Term::app("f", vec![Term::Var(3), Term::app("g", vec![Term::Var(1)])]));
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(sub(0, &c("c"), &deep("Pre ''R'' [Var 0, Var 0]")), deep("Pre ''R'' [Fun ''c'' [], Fun ''c'' []]"));
        assert_eq!(sub(0, &Term::Var(3), &Formula::Falsity), Formula::Falsity);
        assert_eq!(
            sub(0, &c("c"), &deep("Exi (Pre ''R'' [Var 1, Var 0])")),
            deep("Exi (Pre ''R'' [Fun ''c'' [], Var 0])")
        );
        assert_eq!(sub(0, &Term::Var(0), &deep("Pre ''A'' [Var 1]")), deep("Pre ''A'' [Var 0]"));
        // A variable crossing a binder is shifted, not captured.
        assert_eq!(
            sub(0, &Term::Var(0), &deep("Uni (Pre ''R'' [Var 1, Var 0])")),
            deep("Uni (Pre ''R'' [Var 1, Var 0])")
        );
    }

    #[test]
    fn abstraction_inverts_substitution() {
        let f = deep("Con (Pre ''A'' [Fun ''c'' [], Var 0]) (Uni (Pre ''B'' [Fun ''c'' [], Var 1, Var 0]))");
        let q = abstract_formula(0, &c("c"), &f);
        assert_eq!(q, deep("Con (Pre ''A'' [Var 0, Var 1]) (Uni (Pre ''B'' [Var 1, Var 2, Var 0]))"));
        assert_eq!(sub(0, &c("c"), &q), f);
    }

    #[test]
    fn single_assume() {
        let p = Formula::pre("P", vec![]);
        let d = Derivation::new(Rule::Assume, p.clone(), vec![p], None, vec![]);
        assert!(check(&d).ok);
    }

    #[test]
    fn sample_proof_checks() {
        let report = check(&sample_proof("c'"));
        assert!(report.ok, "{report}");
        assert_eq!(sample_proof("c'").rules(), vec![Rule::ImpI, Rule::UniI, Rule::ExiI, Rule::UniE, Rule::Assume]);
    }

    #[test]
    fn stale_constant_is_rejected_at_uni_i() {
        let mut d = sample_proof("c'");
        let z = vec![Formula::pre("B", vec![c("c'")])];
        d.assumptions = z.clone();
        fn set(d: &mut Derivation, extra: &Formula) {
            d.assumptions.push(extra.clone());
            for p in &mut d.premises {
                set(p, extra);
            }
        }
        for p in &mut d.premises {
            set(p, &z[0]);
        }
        let report = check(&d);
        let failure = report.failure.expect("rejected");
        assert_eq!(failure.path, vec![0]);
        assert!(matches!(failure.reason, Violation::NotNew(_)));
        assert!(failure.reason.to_string().contains("newness violated"));
    }

    #[test]
    fn root_weakening_is_not_silent() {
        let mut d = sample_proof("c'");
        d.assumptions.push(Formula::pre("Q", vec![]));
        let failure = check(&d).failure.expect("rejected");
        assert_eq!(failure.path, Vec::<usize>::new());
    }

    #[test]
    fn structural_errors() {
        let p = Formula::pre("P", vec![]);
        let d = Derivation::new(Rule::Assume, p.clone(), vec![p.clone()], Some(c("c")), vec![]);
        assert!(matches!(check(&d).failure.unwrap().reason, Violation::Malformed(_)));
        let d = Derivation::new(
            Rule::UniI,
            Formula::uni(p.clone()),
            vec![],
            Some(Term::Var(0)),
            vec![Derivation::new(Rule::Assume, p.clone(), vec![p.clone()], None, vec![])],
        );
        assert!(matches!(check(&d).failure.unwrap().reason, Violation::Malformed(_)));
        let d = Derivation::new(Rule::ImpI, Formula::imp(p.clone(), p.clone()), vec![], None, vec![]);
        assert!(matches!(check(&d).failure.unwrap().reason, Violation::Malformed(_)));
    }

    #[test]
    fn boole_and_imp_e() {
        let p = Formula::pre("P", vec![]);
        let np = Formula::neg(p.clone());
        // From ¬¬P derive P.
        let nnp = Formula::neg(np.clone());
        let z1 = vec![np.clone(), nnp.clone()];
        let d = Derivation::new(
            Rule::ImpI,
            Formula::imp(nnp.clone(), p.clone()),
            vec![],
            None,
            vec![Derivation::new(
                Rule::Boole,
                p.clone(),
                vec![nnp.clone()],
                None,
                vec![Derivation::new(
                    Rule::ImpE,
                    Formula::Falsity,
                    z1.clone(),
                    None,
                    vec![
                        Derivation::new(Rule::Assume, nnp.clone(), z1.clone(), None, vec![]),
                        Derivation::new(Rule::Assume, np.clone(), z1.clone(), None, vec![]),
                    ],
                )],
            )],
        );
        assert!(check(&d).ok, "{}", check(&d));
    }
}
