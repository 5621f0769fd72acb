//! Random formulas, models and derivations for the test suites.
//!
//! Formulas draw from a fixed signature (predicates `P/0`, `Q/1`, `R/2`,
//! functions `c/0`, `d/0`, `f/1`) so that arities never clash.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::engine::{request_for, ProofState, RuleRequest};
use crate::kernel::{abstract_formula, new, news, sub, Derivation, Rule};
use std::ops::ControlFlow;

use crate::semantics::{holds_in, Environment, Model};
use crate::syntax::{Formula, Id, Signature, Term};

const CONSTANTS: [&str; 2] = ["c", "d"];

pub fn random_term(rng: &mut impl Rng, depth: usize, vars: usize) -> Term {
    let roll = rng.gen_range(0..10);
    if vars > 0 && roll < 4 {
        return Term::Var(rng.gen_range(0..vars));
    }
    if depth == 0 || roll < 8 {
        return Term::constant(CONSTANTS.choose(rng).expect("nonempty"));
    }
    Term::app("f", vec![random_term(rng, depth - 1, vars)])
}

pub fn random_closed_term(rng: &mut impl Rng, depth: usize) -> Term {
    random_term(rng, depth, 0)
}

fn random_atom(rng: &mut impl Rng, vars: usize) -> Formula {
    match rng.gen_range(0..3) {
        0 => Formula::pre("P", vec![]),
        1 => Formula::pre("Q", vec![random_term(rng, 2, vars)]),
        _ => Formula::pre("R", vec![random_term(rng, 1, vars), random_term(rng, 1, vars)]),
    }
}

/// A formula of roughly `size` connectives whose free variables are below `vars`.
pub fn random_formula(rng: &mut impl Rng, size: usize, vars: usize) -> Formula {
    if size == 0 {
        return if rng.gen_ratio(1, 8) { Formula::Falsity } else { random_atom(rng, vars) };
    }
    let left = rng.gen_range(0..size);
    match rng.gen_range(0..5) {
        0 => Formula::imp(random_formula(rng, left, vars), random_formula(rng, size - 1 - left, vars)),
        1 => Formula::dis(random_formula(rng, left, vars), random_formula(rng, size - 1 - left, vars)),
        2 => Formula::con(random_formula(rng, left, vars), random_formula(rng, size - 1 - left, vars)),
        3 => Formula::exi(random_formula(rng, size - 1, vars + 1)),
        _ => Formula::uni(random_formula(rng, size - 1, vars + 1)),
    }
}

pub fn random_closed_formula(rng: &mut impl Rng, size: usize) -> Formula {
    random_formula(rng, size, 0)
}

/// Propositional formula over the atoms `A`, `B`, … (at most `atoms` of them).
pub fn random_propositional(rng: &mut impl Rng, size: usize, atoms: usize) -> Formula {
    const NAMES: [&str; 6] = ["A", "B", "C", "D", "E", "F"];
    if size == 0 {
        return if rng.gen_ratio(1, 10) {
            Formula::Falsity
        } else {
            Formula::pre(NAMES[rng.gen_range(0..atoms.clamp(1, NAMES.len()))], vec![])
        };
    }
    let left = rng.gen_range(0..size);
    let a = random_propositional(rng, left, atoms);
    let b = random_propositional(rng, size - 1 - left, atoms);
    match rng.gen_range(0..3) {
        0 => Formula::imp(a, b),
        1 => Formula::dis(a, b),
        _ => Formula::con(a, b),
    }
}

pub fn random_environment(rng: &mut impl Rng, size: usize, len: usize) -> Environment {
    Environment::from_values((0..len).map(|_| rng.gen_range(0..size)).collect(), rng.gen_range(0..size))
}

/// A random model of the given size over the test signature extended with `sig`.
pub fn random_model(rng: &mut impl Rng, sig: &Signature, size: usize) -> Model {
    Model::random(&pool_signature(sig), size, rng).expect("positive size")
}

/// The test signature together with the symbols of `extra`.
pub fn pool_signature(extra: &Signature) -> Signature {
    let mut sig = Signature::default();
    for (name, arity) in [("P", 0), ("Q", 1), ("R", 2)] {
        sig.add_pred(&Id::new(name).expect("valid"), arity).expect("consistent");
    }
    for (name, arity) in [("c", 0), ("d", 0), ("f", 1)] {
        sig.add_func(&Id::new(name).expect("valid"), arity).expect("consistent");
    }
    let _ = sig.merge(extra);
    sig
}

fn rename_term(t: &Term, a: &Id, b: &Id) -> Term {
    match t {
        Term::Var(n) => Term::Var(*n),
        Term::Fun(g, ts) => {
            let g = if g == a {
                b.clone()
            } else if g == b {
                a.clone()
            } else {
                g.clone()
            };
            Term::Fun(g, ts.iter().map(|t| rename_term(t, a, b)).collect())
        }
    }
}

/// Exchanges the function symbols `a` and `b` everywhere in `f`.
pub fn swap_in_formula(f: &Formula, a: &Id, b: &Id) -> Formula {
    match f {
        Formula::Falsity => Formula::Falsity,
        Formula::Pre(p, ts) => Formula::Pre(p.clone(), ts.iter().map(|t| rename_term(t, a, b)).collect()),
        Formula::Imp(x, y) => Formula::imp(swap_in_formula(x, a, b), swap_in_formula(y, a, b)),
        Formula::Dis(x, y) => Formula::dis(swap_in_formula(x, a, b), swap_in_formula(y, a, b)),
        Formula::Con(x, y) => Formula::con(swap_in_formula(x, a, b), swap_in_formula(y, a, b)),
        Formula::Exi(p) => Formula::exi(swap_in_formula(p, a, b)),
        Formula::Uni(p) => Formula::uni(swap_in_formula(p, a, b)),
    }
}

/// Exchanges two function symbols throughout a derivation.
pub fn swap_constants(d: &mut Derivation, a: &Id, b: &Id) {
    d.goal = swap_in_formula(&d.goal, a, b);
    for f in &mut d.assumptions {
        *f = swap_in_formula(f, a, b);
    }
    if let Some(w) = &d.witness {
        d.witness = Some(rename_term(w, a, b));
    }
    for p in &mut d.premises {
        swap_constants(p, a, b);
    }
}

/// Inserts `f` into the assumption list of `d` at `pos`, and at the matching
/// position of every node above. Valid derivations stay valid as long as `f`
/// avoids their fresh constants.
pub fn weaken(d: &mut Derivation, pos: usize, f: &Formula) {
    let before = d.assumptions.len();
    d.assumptions.insert(pos, f.clone());
    for p in &mut d.premises {
        let extra = p.assumptions.len() - before;
        weaken(p, pos + extra, f);
    }
}

fn fresh_constants(d: &Derivation, out: &mut Vec<Id>) {
    if d.rule.needs_fresh_constant() {
        if let Some(Term::Fun(c, _)) = &d.witness {
            out.push(c.clone());
        }
    }
    for p in &d.premises {
        fresh_constants(p, out);
    }
}

fn constants_of(f: &Formula, out: &mut Vec<Id>) {
    fn term(t: &Term, out: &mut Vec<Id>) {
        if let Term::Fun(g, ts) = t {
            if ts.is_empty() && !out.contains(g) {
                out.push(g.clone());
            }
            ts.iter().for_each(|t| term(t, out));
        }
    }
    match f {
        Formula::Falsity => {}
        Formula::Pre(_, ts) => ts.iter().for_each(|t| term(t, out)),
        Formula::Imp(a, b) | Formula::Dis(a, b) | Formula::Con(a, b) => {
            constants_of(a, out);
            constants_of(b, out);
        }
        Formula::Exi(p) | Formula::Uni(p) => constants_of(p, out),
    }
}

/// Builds random valid derivations bottom-up.
pub struct DerivationGen<'r, R: Rng> {
    rng: &'r mut R,
    counter: usize,
    /// Size of the random formulas introduced along the way.
    pub formula_size: usize,
}

impl<'r, R: Rng> DerivationGen<'r, R> {
    pub fn new(rng: &'r mut R) -> Self {
        DerivationGen { rng, counter: 0, formula_size: 2 }
    }

    fn fresh(&mut self) -> Id {
        self.counter += 1;
        Id::new(&format!("k{}", self.counter)).expect("valid")
    }

    fn formula(&mut self) -> Formula {
        let size = self.rng.gen_range(0..=self.formula_size);
        random_closed_formula(self.rng, size)
    }

    /// Inserts `f` at the front of every assumption list, renaming fresh
    /// constants of `d` that `f` mentions.
    fn weaken_front(&mut self, mut d: Derivation, f: &Formula) -> Derivation {
        let mut fresh = Vec::new();
        fresh_constants(&d, &mut fresh);
        for c in fresh {
            if !new(&c, f) {
                let k = self.fresh();
                swap_constants(&mut d, &c, &k);
            }
        }
        weaken(&mut d, 0, f);
        d
    }

    /// A valid derivation with root assumptions `z`, of depth about `depth`.
    pub fn derive(&mut self, z: &[Formula], depth: usize) -> Derivation {
        if depth == 0 {
            return self.base(z);
        }
        let d = depth - 1;
        match self.rng.gen_range(0..14) {
            0 => self.base(z),
            1 => {
                let a = self.formula();
                let inner = self.derive(&cons(&a, z), d);
                Derivation::new(Rule::ImpI, Formula::imp(a, inner.goal.clone()), z.to_vec(), None, vec![inner])
            }
            2 => {
                let x = self.derive(z, d);
                let y = self.derive(z, d);
                Derivation::new(Rule::ConI, Formula::con(x.goal.clone(), y.goal.clone()), z.to_vec(), None, vec![x, y])
            }
            3 => {
                let x = self.derive(z, d);
                let b = self.formula();
                let (goal, rule) = if self.rng.gen() {
                    (Formula::dis(x.goal.clone(), b), Rule::DisI1)
                } else {
                    (Formula::dis(b, x.goal.clone()), Rule::DisI2)
                };
                Derivation::new(rule, goal, z.to_vec(), None, vec![x])
            }
            4 => {
                let x = self.derive(z, d);
                let y = self.derive(z, d);
                let con = Formula::con(x.goal.clone(), y.goal.clone());
                let intro = Derivation::new(Rule::ConI, con, z.to_vec(), None, vec![x.clone(), y.clone()]);
                if self.rng.gen() {
                    Derivation::new(Rule::ConE1, x.goal, z.to_vec(), None, vec![intro])
                } else {
                    Derivation::new(Rule::ConE2, y.goal, z.to_vec(), None, vec![intro])
                }
            }
            5 => {
                // Detour through an implication.
                let q = self.derive(z, d);
                let inner = self.derive(&cons(&q.goal, z), d);
                let imp = Formula::imp(q.goal.clone(), inner.goal.clone());
                let intro = Derivation::new(Rule::ImpI, imp, z.to_vec(), None, vec![inner.clone()]);
                Derivation::new(Rule::ImpE, inner.goal, z.to_vec(), None, vec![intro, q])
            }
            6 => self.dis_e(z, d),
            7 => {
                // p, then Falsity from ¬p, then p again by Boole.
                let x = self.derive(z, d);
                let np = Formula::neg(x.goal.clone());
                let zz = cons(&np, z);
                let w = self.weaken_front(x.clone(), &np);
                let bottom = Derivation::new(
                    Rule::ImpE,
                    Formula::Falsity,
                    zz.clone(),
                    None,
                    vec![Derivation::new(Rule::Assume, np, zz, None, vec![]), w],
                );
                Derivation::new(Rule::Boole, x.goal, z.to_vec(), None, vec![bottom])
            }
            8 => self.exi_i(z, d),
            9 => self.uni_i(z, d),
            10 => {
                let u = self.uni_i(z, d);
                let Formula::Uni(q) = &u.goal else { return u };
                let t = random_closed_term(self.rng, 1);
                let q = (**q).clone();
                Derivation::new(Rule::UniE, sub(0, &t, &q), z.to_vec(), Some(t), vec![u])
            }
            11 => self.exi_e(z, d),
            12 => {
                // Use a universal or existential assumption if there is one.
                let quantified: Vec<&Formula> = z.iter().filter(|f| matches!(f, Formula::Uni(_))).collect();
                match quantified.choose(self.rng) {
                    Some(&u) => {
                        let Formula::Uni(q) = u else { unreachable!() };
                        let t = random_closed_term(self.rng, 1);
                        let assume = Derivation::new(Rule::Assume, u.clone(), z.to_vec(), None, vec![]);
                        Derivation::new(Rule::UniE, sub(0, &t, q), z.to_vec(), Some(t), vec![assume])
                    }
                    None => self.derive(z, d),
                }
            }
            _ => {
                let a = self.formula();
                let na = Formula::neg(a.clone());
                let zz = cons(&na, z);
                let inner = self.derive(&zz, d);
                Derivation::new(Rule::ImpI, Formula::imp(na, inner.goal.clone()), z.to_vec(), None, vec![inner])
            }
        }
    }

    fn base(&mut self, z: &[Formula]) -> Derivation {
        if !z.is_empty() && self.rng.gen_ratio(3, 4) {
            let p = z.choose(self.rng).expect("nonempty").clone();
            return Derivation::new(Rule::Assume, p, z.to_vec(), None, vec![]);
        }
        let a = self.formula();
        let inner = Derivation::new(Rule::Assume, a.clone(), cons(&a, z), None, vec![]);
        Derivation::new(Rule::ImpI, Formula::imp(a.clone(), a), z.to_vec(), None, vec![inner])
    }

    fn dis_e(&mut self, z: &[Formula], d: usize) -> Derivation {
        let x = self.derive(z, d);
        let b = self.formula();
        let dis = Formula::dis(x.goal.clone(), b.clone());
        let a = x.goal.clone();
        let intro = Derivation::new(Rule::DisI1, dis.clone(), z.to_vec(), None, vec![x]);
        let za = cons(&a, z);
        let zb = cons(&b, z);
        if self.rng.gen() {
            // Commute the disjunction.
            let goal = Formula::dis(b.clone(), a.clone());
            let left = Derivation::new(
                Rule::DisI2,
                goal.clone(),
                za.clone(),
                None,
                vec![Derivation::new(Rule::Assume, a, za, None, vec![])],
            );
            let right = Derivation::new(
                Rule::DisI1,
                goal.clone(),
                zb.clone(),
                None,
                vec![Derivation::new(Rule::Assume, b, zb, None, vec![])],
            );
            Derivation::new(Rule::DisE, goal, z.to_vec(), None, vec![intro, left, right])
        } else {
            let r = self.derive(z, d);
            let left = self.weaken_front(r.clone(), &a);
            let right = self.weaken_front(r.clone(), &b);
            Derivation::new(Rule::DisE, r.goal, z.to_vec(), None, vec![intro, left, right])
        }
    }

    fn exi_i(&mut self, z: &[Formula], d: usize) -> Derivation {
        let x = self.derive(z, d);
        let mut consts = Vec::new();
        constants_of(&x.goal, &mut consts);
        let t = match consts.choose(self.rng) {
            Some(c) if self.rng.gen_ratio(3, 4) => Term::Fun(c.clone(), vec![]),
            _ => random_closed_term(self.rng, 1),
        };
        let q = abstract_formula(0, &t, &x.goal);
        Derivation::new(Rule::ExiI, Formula::exi(q), z.to_vec(), Some(t), vec![x])
    }

    fn uni_i(&mut self, z: &[Formula], d: usize) -> Derivation {
        let mut x = self.derive(z, d);
        let mut consts = Vec::new();
        constants_of(&x.goal, &mut consts);
        consts.retain(|c| news(c, z));
        let k = self.fresh();
        if let Some(c) = consts.choose(self.rng).cloned() {
            // c is absent from z, so renaming it leaves the root context alone.
            swap_constants(&mut x, &c, &k);
        }
        let q = abstract_formula(0, &Term::Fun(k.clone(), vec![]), &x.goal);
        Derivation::new(Rule::UniI, Formula::uni(q), z.to_vec(), Some(Term::Fun(k, vec![])), vec![x])
    }

    fn exi_e(&mut self, z: &[Formula], d: usize) -> Derivation {
        let e = self.exi_i(z, d);
        let Formula::Exi(q) = e.goal.clone() else { unreachable!() };
        let k = self.fresh();
        let kt = Term::Fun(k.clone(), vec![]);
        let inst = sub(0, &kt, &q);
        let zz = cons(&inst, z);
        let second = if self.rng.gen() {
            // Re-introduce the same existential from the instance.
            let assume = Derivation::new(Rule::Assume, inst.clone(), zz.clone(), None, vec![]);
            Derivation::new(Rule::ExiI, e.goal.clone(), zz, Some(kt.clone()), vec![assume])
        } else {
            let r = self.derive(z, d);
            self.weaken_front(r, &inst)
        };
        if !new(&k, &second.goal) {
            return e;
        }
        Derivation::new(Rule::ExiE, second.goal.clone(), z.to_vec(), Some(kt), vec![e, second])
    }
}

fn cons(a: &Formula, z: &[Formula]) -> Vec<Formula> {
    let mut v = Vec::with_capacity(z.len() + 1);
    v.push(a.clone());
    v.extend_from_slice(z);
    v
}

/// Rebuilds `d` through the engine's public interface. Where the engine picks
/// a different fresh constant than `d` used, the two are swapped in the rest
/// of `d`. Returns `None` if the engine refuses a step.
pub fn replay_with_engine(d: &Derivation) -> Option<ProofState> {
    let mut s = ProofState::new(d.goal.clone()).ok()?;
    replay_node(&mut s, ProofState::ROOT, d.clone())?;
    Some(s)
}

fn replay_node(s: &mut ProofState, id: usize, mut d: Derivation) -> Option<()> {
    if !s.node(id)?.is_open() {
        return Some(());
    }
    s.apply_rule(&request_for(id, &d)).ok()?;
    let node = s.node(id)?.clone();
    let applied = node.applied.as_ref()?;
    if d.rule.needs_fresh_constant() {
        if let (Some(Term::Fun(mine, _)), Some(Term::Fun(theirs, _))) = (&d.witness, &applied.witness) {
            if mine != theirs {
                for p in &mut d.premises {
                    swap_constants(p, mine, theirs);
                }
            }
        }
    }
    for (c, p) in node.children.iter().zip(d.premises) {
        replay_node(s, *c, p)?;
    }
    Some(())
}

/// Tries one random rule application on a random open leaf; returns whether
/// the engine accepted it.
pub fn random_step(s: &mut ProofState, rng: &mut impl Rng) -> bool {
    let open: Vec<usize> = s.open_sequents().into_iter().map(|(id, _)| id).collect();
    let Some(&node) = open.choose(rng) else { return false };
    let rule = *Rule::ALL.choose(rng).expect("nonempty");
    let mut req = RuleRequest::new(node, rule);
    let assumptions = s.node(node).expect("open node").assumptions.clone();
    match rule {
        Rule::ImpE | Rule::ConE1 | Rule::ConE2 => req.formula = Some(random_closed_formula(rng, 1)),
        Rule::DisE => req.formula = Some(Formula::dis(random_closed_formula(rng, 1), random_closed_formula(rng, 1))),
        Rule::ExiE => req.formula = Some(Formula::exi(random_formula(rng, 1, 1))),
        Rule::ExiI => req.witness = Some(random_closed_term(rng, 1)),
        Rule::UniE => {
            let t = random_closed_term(rng, 1);
            if let Some(u) = assumptions.iter().find(|f| matches!(f, Formula::Uni(_))) {
                req.formula = Some(u.clone());
            } else {
                req.witness = Some(t);
            }
        }
        _ => {}
    }
    s.apply_rule(&req).is_ok()
}

/// A random sequent with up to two assumptions.
pub fn random_sequent(rng: &mut impl Rng, size: usize) -> crate::prover::Sequent {
    let n = rng.gen_range(0..=2);
    let assumptions = (0..n).map(|_| random_closed_formula(rng, size / 2)).collect();
    crate::prover::Sequent::new(assumptions, random_closed_formula(rng, size))
}

/// Looks for a model falsifying the closed formula `f`: every model of size
/// up to `exhaustive` over its signature, then `samples` random models of
/// size `sampled`.
pub fn small_model_counterexample(
    f: &Formula,
    exhaustive: usize,
    samples: usize,
    sampled: usize,
    rng: &mut impl Rng,
) -> Option<Model> {
    let sig = f.signature().ok()?;
    for size in 1..=exhaustive {
        let mut found = None;
        let _ = Model::for_each(&sig, size, |m| {
            if holds_in(m, f) == Ok(false) {
                found = Some(m.clone());
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        });
        if found.is_some() {
            return found;
        }
    }
    (0..samples).find_map(|_| {
        let m = Model::random(&sig, sampled, rng).ok()?;
        (holds_in(&m, f) == Ok(false)).then_some(m)
    })
}

/// Truth-table validity of a propositional sequent (nullary predicates only).
pub fn truth_table_valid(assumptions: &[Formula], goal: &Formula) -> bool {
    fn atoms(f: &Formula, out: &mut Vec<Id>) {
        match f {
            Formula::Falsity => {}
            Formula::Pre(p, _) => {
                if !out.contains(p) {
                    out.push(p.clone());
                }
            }
            Formula::Imp(a, b) | Formula::Dis(a, b) | Formula::Con(a, b) => {
                atoms(a, out);
                atoms(b, out);
            }
            Formula::Exi(p) | Formula::Uni(p) => atoms(p, out),
        }
    }
    fn value(f: &Formula, names: &[Id], row: u32) -> bool {
        match f {
            Formula::Falsity => false,
            Formula::Pre(p, _) => row >> names.iter().position(|n| n == p).expect("collected") & 1 == 1,
            Formula::Imp(a, b) => !value(a, names, row) || value(b, names, row),
            Formula::Dis(a, b) => value(a, names, row) || value(b, names, row),
            Formula::Con(a, b) => value(a, names, row) && value(b, names, row),
            Formula::Exi(p) | Formula::Uni(p) => value(p, names, row),
        }
    }
    let mut names = Vec::new();
    for f in assumptions.iter().chain(std::iter::once(goal)) {
        atoms(f, &mut names);
    }
    (0..1u32 << names.len()).all(|row| !assumptions.iter().all(|a| value(a, &names, row)) || value(goal, &names, row))
}

/// How a derivation was damaged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MutationKind {
    /// A premise goal no longer has the shape the rule requires.
    PremiseShape,
    /// The conclusion of an `Assume` leaf is not among its assumptions.
    NotAssumed,
    /// The fresh constant now occurs in the assumptions.
    NotFresh,
    /// The witness term was replaced.
    Witness,
}

#[derive(Debug, Clone)]
pub struct Mutation {
    pub rule: Rule,
    pub kind: MutationKind,
    /// Path of the damaged node; `kernel::check` must fail exactly here.
    pub path: Vec<usize>,
    pub derivation: Derivation,
}

/// Every single-node mutation of the valid derivation `d` that provably
/// breaks it.
pub fn mutations(d: &Derivation) -> Vec<Mutation> {
    let mut paths = Vec::new();
    collect_paths(d, &mut Vec::new(), &mut paths);
    let mut out = Vec::new();
    for path in paths {
        let node = d.node(&path).expect("collected").clone();
        let rule = node.rule;
        if !node.premises.is_empty() {
            let mut m = d.clone();
            let target = &mut m.node_mut(&path).expect("collected").premises[0];
            target.goal = Formula::con(target.goal.clone(), target.goal.clone());
            out.push(Mutation { rule, kind: MutationKind::PremiseShape, path: path.clone(), derivation: m });
        }
        if rule == Rule::Assume {
            // Standalone, so that no parent sees the change first.
            let mut m = node.clone();
            m.assumptions.retain(|a| a != &m.goal);
            out.push(Mutation { rule, kind: MutationKind::NotAssumed, path: vec![], derivation: m });
        }
        if rule.needs_fresh_constant() {
            if let Some(Term::Fun(c, _)) = &node.witness {
                let mut m = node.clone();
                weaken(&mut m, 0, &Formula::pre("Q", vec![Term::Fun(c.clone(), vec![])]));
                out.push(Mutation { rule, kind: MutationKind::NotFresh, path: vec![], derivation: m });
            }
        }
        if matches!(rule, Rule::ExiI | Rule::UniE) {
            let body = match (rule, &node.goal, &node.premises[0].goal) {
                (Rule::ExiI, Formula::Exi(q), _) | (Rule::UniE, _, Formula::Uni(q)) => (**q).clone(),
                _ => continue,
            };
            let w = node.witness.clone().expect("witness rule");
            let other = Term::app("f", vec![w.clone()]);
            if sub(0, &w, &body) != sub(0, &other, &body) {
                let mut m = d.clone();
                m.node_mut(&path).expect("collected").witness = Some(other);
                out.push(Mutation { rule, kind: MutationKind::Witness, path: path.clone(), derivation: m });
            }
        }
    }
    out
}

fn collect_paths(d: &Derivation, at: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(at.clone());
    for (i, p) in d.premises.iter().enumerate() {
        at.push(i);
        collect_paths(p, at, out);
        at.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::check;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_derivations_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for i in 0..300 {
            let mut g = DerivationGen::new(&mut rng);
            let d = g.derive(&[], 4);
            let report = check(&d);
            assert!(report.ok, "case {i}: {report}\n{d:#?}");
            assert!(d.goal.is_closed());
        }
    }

    #[test]
    fn rule_coverage() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..200 {
            let d = DerivationGen::new(&mut rng).derive(&[], 4);
            seen.extend(d.rules());
        }
        assert_eq!(seen.len(), 14, "{seen:?}");
    }

    #[test]
    fn engine_replay() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for i in 0..100 {
            let d = DerivationGen::new(&mut rng).derive(&[], 4);
            let s = replay_with_engine(&d).unwrap_or_else(|| panic!("case {i} refused"));
            assert!(s.is_complete());
            assert!(check(&s.extract().unwrap()).ok);
        }
    }
}
