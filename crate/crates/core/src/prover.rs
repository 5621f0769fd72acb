//! A free-variable tableau prover used to assess open subgoals.
//!
//! The sequent is refuted: assumptions are taken positively, the goal
//! negatively, and the result is put in negation normal form with existentials
//! replaced by Skolem terms. Free variables of the sequent become fresh
//! constants, which amounts to proving its universal closure. The tableau is
//! expanded depth-first; each universal may be instantiated with a fresh
//! unification variable, and the number of instantiations along a branch is
//! bounded. The bound is raised one step at a time up to the budget.
//!
//! A closed tableau means the sequent is valid. Failure means nothing: the
//! verdict is then `Unknown`.

use std::collections::{HashMap, VecDeque};
use std::rc::Rc;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::syntax::{Formula, Id, Term};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sequent {
    pub assumptions: Vec<Formula>,
    pub goal: Formula,
}

impl Sequent {
    pub fn new(assumptions: Vec<Formula>, goal: Formula) -> Self {
        Sequent { assumptions, goal }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budget {
    /// Largest number of universal instantiations allowed on one branch.
    pub max_depth: usize,
    pub wall_time_ms: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_depth: 10, wall_time_ms: 500 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnknownReason {
    DepthExhausted,
    TimedOut,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "reason", rename_all = "snake_case")]
pub enum FeasibilityVerdict {
    Proved,
    Unknown(UnknownReason),
}

impl FeasibilityVerdict {
    pub fn is_proved(self) -> bool {
        self == FeasibilityVerdict::Proved
    }
}

type Tm = Rc<TmNode>;

#[derive(Debug, PartialEq, Eq)]
enum TmNode {
    /// Placeholder for a universally bound variable inside a formula.
    Bound(u32),
    /// Unification variable introduced by instantiating a universal.
    Meta(u32),
    App(u32, Vec<Tm>),
}

#[derive(Debug)]
enum Fm {
    False,
    True,
    Lit(bool, u32, Vec<Tm>),
    And(Rc<Fm>, Rc<Fm>),
    Or(Rc<Fm>, Rc<Fm>),
    Forall(u32, Rc<Fm>),
}

#[derive(Default)]
struct Symbols {
    preds: HashMap<(Id, usize), u32>,
    funcs: HashMap<(Id, usize), u32>,
    next_func: u32,
    next_bound: u32,
}

impl Symbols {
    fn pred(&mut self, id: &Id, arity: usize) -> u32 {
        let n = self.preds.len() as u32;
        *self.preds.entry((id.clone(), arity)).or_insert(n)
    }

    fn func(&mut self, id: &Id, arity: usize) -> u32 {
        let next = &mut self.next_func;
        *self.funcs.entry((id.clone(), arity)).or_insert_with(|| {
            *next += 1;
            *next - 1
        })
    }

    /// A function symbol that no input formula uses.
    fn skolem(&mut self) -> u32 {
        self.next_func += 1;
        self.next_func - 1
    }

    fn bound(&mut self) -> u32 {
        self.next_bound += 1;
        self.next_bound - 1
    }
}

fn bound_vars(t: &Tm, out: &mut Vec<u32>) {
    match &**t {
        TmNode::Bound(u) => {
            if !out.contains(u) {
                out.push(*u);
            }
        }
        TmNode::Meta(_) => {}
        TmNode::App(_, args) => args.iter().for_each(|a| bound_vars(a, out)),
    }
}

fn free_indices(f: &Formula, depth: usize, out: &mut Vec<usize>) {
    fn term(t: &Term, depth: usize, out: &mut Vec<usize>) {
        match t {
            Term::Var(n) if *n >= depth => out.push(n - depth),
            Term::Var(_) => {}
            Term::Fun(_, ts) => ts.iter().for_each(|t| term(t, depth, out)),
        }
    }
    match f {
        Formula::Falsity => {}
        Formula::Pre(_, ts) => ts.iter().for_each(|t| term(t, depth, out)),
        Formula::Imp(a, b) | Formula::Dis(a, b) | Formula::Con(a, b) => {
            free_indices(a, depth, out);
            free_indices(b, depth, out);
        }
        Formula::Exi(p) | Formula::Uni(p) => free_indices(p, depth + 1, out),
    }
}

fn and(a: Fm, b: Fm) -> Fm {
    match (a, b) {
        (Fm::False, _) | (_, Fm::False) => Fm::False,
        (Fm::True, x) | (x, Fm::True) => x,
        (a, b) => Fm::And(Rc::new(a), Rc::new(b)),
    }
}

fn or(a: Fm, b: Fm) -> Fm {
    match (a, b) {
        (Fm::True, _) | (_, Fm::True) => Fm::True,
        (Fm::False, x) | (x, Fm::False) => x,
        (a, b) => Fm::Or(Rc::new(a), Rc::new(b)),
    }
}

/// `scope[i]` is what de Bruijn index `i` denotes.
struct Converter {
    symbols: Symbols,
}

impl Converter {
    fn term(&mut self, t: &Term, scope: &[Tm]) -> Tm {
        match t {
            Term::Var(n) => scope[scope.len() - 1 - n].clone(),
            Term::Fun(id, args) => {
                let f = self.symbols.func(id, args.len());
                Rc::new(TmNode::App(f, args.iter().map(|a| self.term(a, scope)).collect()))
            }
        }
    }

    /// Negation normal form of `f` (or of its negation when `positive` is
    /// false), Skolemizing existentials.
    fn nnf(&mut self, f: &Formula, positive: bool, scope: &mut Vec<Tm>) -> Fm {
        match f {
            Formula::Falsity => {
                if positive {
                    Fm::False
                } else {
                    Fm::True
                }
            }
            Formula::Pre(id, args) => {
                let p = self.symbols.pred(id, args.len());
                Fm::Lit(positive, p, args.iter().map(|a| self.term(a, scope)).collect())
            }
            Formula::Imp(a, b) => {
                let a = self.nnf(a, !positive, scope);
                let b = self.nnf(b, positive, scope);
                if positive {
                    or(a, b)
                } else {
                    and(a, b)
                }
            }
            Formula::Dis(a, b) | Formula::Con(a, b) => {
                let conj = matches!(f, Formula::Con(..)) == positive;
                let a = self.nnf(a, positive, scope);
                let b = self.nnf(b, positive, scope);
                if conj {
                    and(a, b)
                } else {
                    or(a, b)
                }
            }
            Formula::Uni(p) | Formula::Exi(p) => {
                let universal = matches!(f, Formula::Uni(_)) == positive;
                if universal {
                    let u = self.symbols.bound();
                    scope.push(Rc::new(TmNode::Bound(u)));
                    let body = self.nnf(p, positive, scope);
                    scope.pop();
                    match body {
                        Fm::True => Fm::True,
                        Fm::False => Fm::False,
                        body => Fm::Forall(u, Rc::new(body)),
                    }
                } else {
                    let mut free = Vec::new();
                    free_indices(f, 0, &mut free);
                    let mut deps = Vec::new();
                    for i in free {
                        bound_vars(&scope[scope.len() - 1 - i], &mut deps);
                    }
                    deps.sort_unstable();
                    let sk = self.symbols.skolem();
                    let args = deps.into_iter().map(|u| Rc::new(TmNode::Bound(u))).collect();
                    scope.push(Rc::new(TmNode::App(sk, args)));
                    let body = self.nnf(p, positive, scope);
                    scope.pop();
                    body
                }
            }
        }
    }
}

fn subst_term(t: &Tm, u: u32, by: &Tm) -> Tm {
    match &**t {
        TmNode::Bound(v) if *v == u => by.clone(),
        TmNode::Bound(_) | TmNode::Meta(_) => t.clone(),
        TmNode::App(f, args) => Rc::new(TmNode::App(*f, args.iter().map(|a| subst_term(a, u, by)).collect())),
    }
}

fn subst(f: &Rc<Fm>, u: u32, by: &Tm) -> Rc<Fm> {
    match &**f {
        Fm::False | Fm::True => f.clone(),
        Fm::Lit(pos, p, args) => Rc::new(Fm::Lit(*pos, *p, args.iter().map(|a| subst_term(a, u, by)).collect())),
        Fm::And(a, b) => Rc::new(Fm::And(subst(a, u, by), subst(b, u, by))),
        Fm::Or(a, b) => Rc::new(Fm::Or(subst(a, u, by), subst(b, u, by))),
        Fm::Forall(v, body) => Rc::new(Fm::Forall(*v, subst(body, u, by))),
    }
}

#[derive(Clone)]
struct Branch {
    todo: VecDeque<Rc<Fm>>,
    lits: Vec<Rc<Fm>>,
    depth_left: usize,
}

/// Persistent stack of branches still to be closed.
enum Pending {
    Nil,
    Cons(Branch, Rc<Pending>),
}

enum Stop {
    TimedOut,
}

struct Search<'a> {
    bindings: Vec<Option<Tm>>,
    trail: Vec<u32>,
    deadline: Instant,
    cancel: &'a AtomicBool,
    steps: u64,
    hit_limit: bool,
}

impl Search<'_> {
    fn fresh_meta(&mut self) -> Tm {
        self.bindings.push(None);
        Rc::new(TmNode::Meta(self.bindings.len() as u32 - 1))
    }

    fn resolve(&self, t: &Tm) -> Tm {
        let mut t = t.clone();
        while let TmNode::Meta(m) = &*t {
            match &self.bindings[*m as usize] {
                Some(b) => t = b.clone(),
                None => break,
            }
        }
        t
    }

    fn occurs(&self, m: u32, t: &Tm) -> bool {
        let t = self.resolve(t);
        match &*t {
            TmNode::Meta(n) => *n == m,
            TmNode::Bound(_) => false,
            TmNode::App(_, args) => args.iter().any(|a| self.occurs(m, a)),
        }
    }

    fn bind(&mut self, m: u32, t: Tm) {
        self.bindings[m as usize] = Some(t);
        self.trail.push(m);
    }

    fn unify(&mut self, a: &Tm, b: &Tm) -> bool {
        let a = self.resolve(a);
        let b = self.resolve(b);
        match (&*a, &*b) {
            (TmNode::Meta(x), TmNode::Meta(y)) if x == y => true,
            (TmNode::Meta(x), _) => {
                if self.occurs(*x, &b) {
                    return false;
                }
                self.bind(*x, b.clone());
                true
            }
            (_, TmNode::Meta(y)) => {
                if self.occurs(*y, &a) {
                    return false;
                }
                self.bind(*y, a.clone());
                true
            }
            (TmNode::App(f, xs), TmNode::App(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.unify(x, y))
            }
            _ => false,
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let m = self.trail.pop().expect("trail entry");
            self.bindings[m as usize] = None;
        }
    }

    fn tick(&mut self) -> Result<(), Stop> {
        self.steps += 1;
        if self.steps % 256 == 1 && (Instant::now() >= self.deadline || self.cancel.load(Ordering::Relaxed)) {
            return Err(Stop::TimedOut);
        }
        Ok(())
    }

    /// Closes the current branch and then every pending one.
    fn close_rest(&mut self, pending: &Rc<Pending>) -> Result<bool, Stop> {
        match &**pending {
            Pending::Nil => Ok(true),
            Pending::Cons(b, rest) => self.expand(b.clone(), rest),
        }
    }

    fn expand(&mut self, mut b: Branch, pending: &Rc<Pending>) -> Result<bool, Stop> {
        loop {
            self.tick()?;
            let Some(f) = b.todo.pop_front() else {
                return Ok(false);
            };
            match &*f {
                Fm::True => {}
                Fm::False => return self.close_rest(pending),
                Fm::And(x, y) => {
                    b.todo.push_front(y.clone());
                    b.todo.push_front(x.clone());
                }
                Fm::Or(x, y) => {
                    let mut right = b.clone();
                    right.todo.push_front(y.clone());
                    let pending = Rc::new(Pending::Cons(right, pending.clone()));
                    b.todo.push_front(x.clone());
                    return self.expand(b, &pending);
                }
                Fm::Forall(u, body) => {
                    if b.depth_left == 0 {
                        self.hit_limit = true;
                        continue;
                    }
                    b.depth_left -= 1;
                    let m = self.fresh_meta();
                    b.todo.push_front(subst(body, *u, &m));
                    b.todo.push_back(f.clone());
                }
                Fm::Lit(pos, p, args) => {
                    for l in &b.lits {
                        let Fm::Lit(lpos, lp, largs) = &**l else { continue };
                        if lpos == pos || lp != p || largs.len() != args.len() {
                            continue;
                        }
                        let mark = self.trail.len();
                        if args.iter().zip(largs).all(|(x, y)| self.unify(x, y)) && self.close_rest(pending)? {
                            return Ok(true);
                        }
                        self.undo_to(mark);
                    }
                    b.lits.push(f.clone());
                }
            }
        }
    }
}

/// Attempts to show the sequent valid within the budget.
pub fn prove(s: &Sequent, budget: &Budget) -> FeasibilityVerdict {
    prove_cancellable(s, budget, &AtomicBool::new(false))
}

/// As [`prove`], also stopping (with `TimedOut`) once `cancel` is set.
pub fn prove_cancellable(s: &Sequent, budget: &Budget, cancel: &AtomicBool) -> FeasibilityVerdict {
    let start = Instant::now();
    let deadline = start + Duration::from_millis(budget.wall_time_ms);
    let mut conv = Converter { symbols: Symbols::default() };
    let mut free = Vec::new();
    for f in s.assumptions.iter().chain(std::iter::once(&s.goal)) {
        free_indices(f, 0, &mut free);
    }
    let width = free.iter().max().map_or(0, |m| m + 1);
    // Free variable i sits at scope position width-1-i, so each becomes a new constant.
    let mut scope: Vec<Tm> = (0..width).map(|_| Rc::new(TmNode::App(conv.symbols.skolem(), Vec::new()))).collect();
    let mut todo = VecDeque::new();
    for a in &s.assumptions {
        todo.push_back(Rc::new(conv.nnf(a, true, &mut scope)));
    }
    todo.push_back(Rc::new(conv.nnf(&s.goal, false, &mut scope)));
    let nil = Rc::new(Pending::Nil);
    for depth in 0..=budget.max_depth {
        let mut search =
            Search { bindings: Vec::new(), trail: Vec::new(), deadline, cancel, steps: 0, hit_limit: false };
        let branch = Branch { todo: todo.clone(), lits: Vec::new(), depth_left: depth };
        match search.expand(branch, &nil) {
            Err(Stop::TimedOut) => return FeasibilityVerdict::Unknown(UnknownReason::TimedOut),
            Ok(true) => return FeasibilityVerdict::Proved,
            Ok(false) if !search.hit_limit => break,
            Ok(false) => {}
        }
    }
    FeasibilityVerdict::Unknown(UnknownReason::DepthExhausted)
}

/// Runs [`prove`] on every sequent in parallel, each with its own budget,
/// calling `on_result` as verdicts arrive.
pub fn assess<K>(
    leaves: &[(K, Sequent)],
    budget: &Budget,
    on_result: impl Fn(&K, FeasibilityVerdict) + Sync,
) -> std::collections::BTreeMap<K, FeasibilityVerdict>
where
    K: Ord + Clone + Send + Sync,
{
    let out = Mutex::new(std::collections::BTreeMap::new());
    leaves.par_iter().for_each(|(k, s)| {
        let v = prove(s, budget);
        on_result(k, v);
        out.lock().expect("verdict map").insert(k.clone(), v);
    });
    out.into_inner().expect("verdict map")
}
