//! Isabelle/Isar text for checked derivations.
//!
//! The generated proofs replay a derivation against the `OK` inductive
//! predicate of the NaDeA theory and conclude validity with its `soundness`
//! theorem. Quantifier rules state their premises with an explicit `sub`,
//! so each one is bridged to the computed formula by a `by simp` step, and
//! newness side conditions are left for a final `qed simp`.

use std::fmt::Write;

use thiserror::Error;

use super::{strip_unis, UniversalPrefix};
use crate::kernel::{check, Derivation, Rule};
use crate::syntax::{
    bound_names_for, render_deep_list, render_formula, render_isabelle, render_term, Formula, IsabelleSyntax,
    PrintStyle, Term,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsarError {
    #[error("the derivation is not a checked proof of a closed formula: {0}")]
    Unchecked(String),
    #[error("the goal has no outer universal quantifier")]
    NoPrefix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsarKind {
    ClosedTheorem,
    OpenScratchTheory,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Discharge {
    /// `qed`
    Qed,
    /// `qed simp`, for the newness condition.
    QedSimp,
    /// `by (rule Assume) simp`, for the membership condition.
    AssumeSimp,
}

/// One rule application, in preorder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsarStep {
    pub depth: usize,
    pub rule: Rule,
    /// `OK p z` for the node as computed.
    pub statement: String,
    /// The same judgement as the parent rule states it, when that differs
    /// (a premise written with `sub`). Reached from `statement` by `simp`.
    pub expected: Option<String>,
    /// What `Uni_E` concludes before its substitution is computed by `simp`.
    pub concludes: Option<String>,
    pub discharge: Discharge,
}

impl IsarStep {
    pub fn simp_before(&self) -> bool {
        self.concludes.is_some()
    }

    pub fn simp_after(&self) -> bool {
        self.expected.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corollary {
    pub name: String,
    pub m: usize,
    pub statement: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsarDoc {
    pub kind: IsarKind,
    pub proposition_shallow: String,
    pub goal_deep: String,
    pub steps: Vec<IsarStep>,
    /// Deep form of the goal with its outer universals removed, and their count.
    pub open_core: Option<(usize, String)>,
    pub corollaries: Vec<Corollary>,
}

fn fm(f: &Formula) -> String {
    let s = render_formula(f, PrintStyle::DeepEmbed);
    match f {
        Formula::Falsity => s,
        _ => format!("({s})"),
    }
}

fn tm(t: &Term) -> String {
    format!("({})", render_term(t, PrintStyle::DeepEmbed))
}

fn ok(goal: &str, assumptions: &str) -> String {
    format!("OK {goal} {assumptions}")
}

fn sub_text(t: &Term, body: &Formula) -> String {
    format!("(sub 0 {} {})", tm(t), fm(body))
}

fn quantified_body(f: &Formula) -> &Formula {
    match f {
        Formula::Exi(q) | Formula::Uni(q) => q,
        _ => unreachable!("checked derivation"),
    }
}

fn collect(d: &Derivation, depth: usize, expected: Option<String>, out: &mut Vec<IsarStep>) {
    let z = render_deep_list(&d.assumptions);
    let statement = ok(&fm(&d.goal), &z);
    let concludes = match d.rule {
        Rule::UniE => {
            let q = quantified_body(&d.premises[0].goal);
            Some(ok(&sub_text(d.witness.as_ref().expect("witness"), q), &z))
        }
        _ => None,
    };
    let discharge = match d.rule {
        Rule::Assume => Discharge::AssumeSimp,
        Rule::UniI | Rule::ExiE => Discharge::QedSimp,
        _ => Discharge::Qed,
    };
    out.push(IsarStep { depth, rule: d.rule, statement, expected, concludes, discharge });
    for (i, p) in d.premises.iter().enumerate() {
        let expected = match (d.rule, i) {
            (Rule::UniI, 0) | (Rule::ExiI, 0) => {
                Some(ok(&sub_text(d.witness.as_ref().expect("witness"), quantified_body(&d.goal)), &z))
            }
            (Rule::ExiE, 1) => {
                let inst = sub_text(d.witness.as_ref().expect("witness"), quantified_body(&d.premises[0].goal));
                let rest = render_deep_list(&d.assumptions);
                let list = if d.assumptions.is_empty() { format!("[{inst}]") } else { format!("({inst} # {rest})") };
                Some(ok(&fm(&p.goal), &list))
            }
            _ => None,
        };
        collect(p, depth + 1, expected, out);
    }
}

fn quote(s: &str) -> String {
    format!("\"{s}\"")
}

fn indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

/// Writes the step at `i` and its premises; returns the index after them.
fn render_step(steps: &[IsarStep], i: usize, level: usize, out: &mut String) -> usize {
    let step = &steps[i];
    let kw = if step.expected.is_some() { "have" } else { "show" };
    let mut next = i + 1;
    let mut body = |out: &mut String, level: usize| match step.discharge {
        Discharge::AssumeSimp => {
            indent(out, level + 1);
            out.push_str("by (rule Assume) simp\n");
        }
        Discharge::Qed | Discharge::QedSimp => {
            indent(out, level);
            let _ = writeln!(out, "proof (rule {})", step.rule);
            while next < steps.len() && steps[next].depth == step.depth + 1 {
                next = render_step(steps, next, level + 1, out);
            }
            indent(out, level);
            out.push_str(if step.discharge == Discharge::QedSimp { "qed simp\n" } else { "qed\n" });
        }
    };
    match &step.concludes {
        Some(c) => {
            indent(out, level);
            let _ = writeln!(out, "have {}", quote(c));
            body(out, level);
            indent(out, level);
            let _ = writeln!(out, "then {kw} {}", quote(&step.statement));
            indent(out, level + 1);
            out.push_str("by simp\n");
        }
        None => {
            indent(out, level);
            let _ = writeln!(out, "{kw} {}", quote(&step.statement));
            body(out, level);
        }
    }
    if let Some(e) = &step.expected {
        indent(out, level);
        let _ = writeln!(out, "then show {}", quote(e));
        indent(out, level + 1);
        out.push_str("by simp\n");
    }
    next
}

fn free_names(prefix: &UniversalPrefix) -> Vec<String> {
    let names = bound_names_for(&prefix.core, prefix.k);
    // Var i is bound by the (k-1-i)th stripped quantifier, counting from the outside.
    names.into_iter().rev().collect()
}

pub fn build_isar(d: &Derivation, kind: IsarKind) -> Result<IsarDoc, IsarError> {
    let report = check(d);
    if !report.ok {
        return Err(IsarError::Unchecked(report.to_string()));
    }
    if !d.assumptions.is_empty() {
        return Err(IsarError::Unchecked("the root has assumptions".into()));
    }
    if !d.goal.is_closed() {
        return Err(IsarError::Unchecked("the goal has free variables".into()));
    }
    let mut steps = Vec::new();
    collect(d, 0, None, &mut steps);
    let goal_deep = fm(&d.goal);
    match kind {
        IsarKind::ClosedTheorem => Ok(IsarDoc {
            kind,
            proposition_shallow: render_isabelle(&d.goal, IsabelleSyntax::Ascii, &[]),
            goal_deep,
            steps,
            open_core: None,
            corollaries: Vec::new(),
        }),
        IsarKind::OpenScratchTheory => {
            let prefix = strip_unis(&d.goal);
            if prefix.k == 0 {
                return Err(IsarError::NoPrefix);
            }
            let corollaries = (0..prefix.k)
                .rev()
                .map(|m| Corollary {
                    name: format!("open_m{m}"),
                    m,
                    statement: format!("semantics e f g {}", fm(&prefix.put_unis(m))),
                })
                .collect();
            Ok(IsarDoc {
                kind,
                proposition_shallow: render_isabelle(&prefix.core, IsabelleSyntax::Symbols, &free_names(&prefix)),
                goal_deep,
                steps,
                open_core: Some((prefix.k, fm(&prefix.core))),
                corollaries,
            })
        }
    }
}

impl IsarDoc {
    fn proof(&self, out: &mut String, level: usize) {
        if !self.steps.is_empty() {
            render_step(&self.steps, 0, level, out);
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        match self.kind {
            IsarKind::ClosedTheorem => {
                let _ = writeln!(out, "proposition {}", quote(&self.proposition_shallow));
                out.push_str("  by metis\n\n");
                let _ = writeln!(
                    out,
                    "theorem generated_theorem: {}",
                    quote(&format!("semantics e f g {}", self.goal_deep))
                );
                out.push_str("proof (rule soundness)\n");
                self.proof(&mut out, 1);
                out.push_str("qed\n");
            }
            IsarKind::OpenScratchTheory => {
                let (k, core) = self.open_core.as_ref().expect("open theory has a prefix");
                out.push_str("theory Scratch imports NaDeA begin\n\n");
                let _ = writeln!(out, "proposition {}", quote(&self.proposition_shallow));
                out.push_str("  by metis\n\n");
                let _ = writeln!(out, "lemma generated_lemma: {}", quote(&ok(&self.goal_deep, "[]")));
                out.push_str("proof -\n");
                self.proof(&mut out, 1);
                out.push_str("qed\n\n");
                let _ = writeln!(
                    out,
                    "lemma generated_semantics: {}",
                    quote(&format!("semantics e f g {}", self.goal_deep))
                );
                out.push_str("  using generated_lemma by (rule soundness)\n\n");
                let _ = writeln!(out, "lemma generated_any: {}", quote(&ok(&format!("(put_unis m {core})"), "[]")));
                out.push_str("proof -\n");
                let _ = writeln!(out, "  have {}", quote(&ok(&format!("(put_unis {k} {core})"), "[]")));
                out.push_str("    using generated_lemma by simp\n");
                out.push_str("  then show ?thesis\n");
                out.push_str("    by (rule any_unis)\n");
                out.push_str("qed\n\n");
                for c in &self.corollaries {
                    let _ = writeln!(out, "corollary {}: {}", c.name, quote(&c.statement));
                    let _ = writeln!(out, "  using soundness[OF generated_any[where m={}]] by simp\n", c.m);
                }
                out.push_str("end\n");
            }
        }
        out
    }
}

/// Closed-formula theorem text: a shallow `proposition` plus the derivation
/// replayed against `OK` and lifted to validity by `soundness`.
pub fn to_isar_closed(d: &Derivation) -> Result<String, IsarError> {
    Ok(build_isar(d, IsarKind::ClosedTheorem)?.render())
}

/// A `Scratch` theory deriving every opened version of the goal, one
/// corollary per outer universal quantifier.
pub fn to_isar_open(d: &Derivation) -> Result<String, IsarError> {
    Ok(build_isar(d, IsarKind::OpenScratchTheory)?.render())
}

/// Rule names in `(rule X)` applications, in text order, skipping
/// `soundness` and the other theory facts.
pub fn rule_tokens(text: &str) -> Vec<Rule> {
    text.match_indices("(rule ")
        .filter_map(|(i, _)| {
            let rest = &text[i + 6..];
            let end = rest.find(')')?;
            rest[..end].parse().ok()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{ProofState, RuleRequest};
    use crate::syntax::parse_formula;

    fn sample() -> Derivation {
        let goal = parse_formula("(forall x. R(x, x)) ---> forall x. exists y. R(x, y)").unwrap();
        let mut s = ProofState::new(goal).unwrap();
        let c = Term::constant("c'");
        s.apply_rule(&RuleRequest::new(0, Rule::ImpI)).unwrap();
        s.apply_rule(&RuleRequest::new(1, Rule::UniI)).unwrap();
        s.apply_rule(&RuleRequest::new(2, Rule::ExiI).witness(c.clone())).unwrap();
        s.apply_rule(&RuleRequest::new(3, Rule::UniE).witness(c)).unwrap();
        s.extract().unwrap()
    }

    #[test]
    fn closed_theorem_shape() {
        let d = sample();
        let text = to_isar_closed(&d).unwrap();
        assert!(text.starts_with("proposition \"(! x. R x x) --> (! x. ? y. R x y)\"\n  by metis\n"), "{text}");
        assert_eq!(rule_tokens(&text), d.rules());
        assert!(text.contains("qed simp"));
        assert!(text.contains("by (rule Assume) simp"));
        assert!(text.trim_end().ends_with("qed"));
        let doc = build_isar(&d, IsarKind::ClosedTheorem).unwrap();
        let flags: Vec<_> = doc.steps.iter().map(|s| (s.rule, s.simp_before(), s.simp_after())).collect();
        assert_eq!(
            flags,
            vec![
                (Rule::ImpI, false, false),
                (Rule::UniI, false, false),
                (Rule::ExiI, false, true),
                (Rule::UniE, true, true),
                (Rule::Assume, false, false),
            ]
        );
    }

    #[test]
    fn deterministic() {
        assert_eq!(to_isar_closed(&sample()).unwrap(), to_isar_closed(&sample()).unwrap());
    }

    #[test]
    fn preconditions() {
        let p = Formula::pre("P", vec![]);
        let d = Derivation::new(Rule::Assume, p.clone(), vec![p], None, vec![]);
        assert!(matches!(to_isar_closed(&d), Err(IsarError::Unchecked(_))));
        let mut bad = sample();
        bad.premises[0].witness = Some(Term::constant("d"));
        assert!(matches!(to_isar_closed(&bad), Err(IsarError::Unchecked(_))));
        assert_eq!(to_isar_open(&sample()), Err(IsarError::NoPrefix));
    }

    #[test]
    fn scratch_theory() {
        let goal = parse_formula("forall x. (P(x) ---> P(x))").unwrap();
        let mut s = ProofState::new(goal).unwrap();
        s.apply_rule(&RuleRequest::new(0, Rule::UniI)).unwrap();
        s.apply_rule(&RuleRequest::new(1, Rule::ImpI)).unwrap();
        let text = to_isar_open(&s.extract().unwrap()).unwrap();
        assert!(text.starts_with("theory Scratch imports NaDeA begin\n"));
        assert!(text.contains("proposition \"P x ⟶ P x\""), "{text}");
        assert_eq!(text.matches("\ncorollary ").count(), 1);
        assert!(text.contains("corollary open_m0: \"semantics e f g (Imp (Pre ''P'' [Var 0]) (Pre ''P'' [Var 0]))\""));
        assert!(text.ends_with("end\n"));
    }
}
