//! Evaluation of terms and formulas in finite models.
//!
//! The universe of a model of size `n` is `{0, …, n-1}`. Evaluation is used as
//! an independent oracle throughout the test suites and as a falsifier for the
//! service's countermodel endpoint; finding no countermodel up to some size
//! says nothing about validity.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{Formula, Id, Signature, SymbolKind, Term};

/// Variable denotation: a total map from de Bruijn indices to elements.
///
/// Indices beyond the explicit bindings map to `default`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Environment {
    bindings: Vec<usize>,
    default: usize,
}

impl Environment {
    /// Every variable denotes `d`.
    pub fn constant(d: usize) -> Self {
        Environment { bindings: Vec::new(), default: d }
    }

    pub fn from_values(values: Vec<usize>, default: usize) -> Self {
        Environment { bindings: values, default }
    }

    pub fn get(&self, n: usize) -> usize {
        self.bindings.get(n).copied().unwrap_or(self.default)
    }

    /// Binds index 0 to `d` and shifts every other binding up by one.
    pub fn extend(&self, d: usize) -> Self {
        let mut bindings = Vec::with_capacity(self.bindings.len() + 1);
        bindings.push(d);
        bindings.extend_from_slice(&self.bindings);
        Environment { bindings, default: self.default }
    }

    pub fn values(&self) -> &[usize] {
        &self.bindings
    }

    fn max_value(&self) -> usize {
        self.bindings.iter().copied().fold(self.default, usize::max)
    }
}

pub fn extend(e: &Environment, d: usize) -> Environment {
    e.extend(d)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("universe size must be at least 1")]
    EmptyUniverse,
    #[error("table for {symbol}/{arity} has {found} entries, expected {expected}")]
    TableSize { symbol: Id, arity: usize, expected: usize, found: usize },
    #[error("table for {symbol}/{arity} maps to {value}, outside the universe")]
    OutOfUniverse { symbol: Id, arity: usize, value: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("{kind} symbol {symbol}/{arity} is not interpreted by the model")]
    MissingSymbol { kind: SymbolKind, symbol: Id, arity: usize },
    #[error("environment maps a variable to {0}, outside the universe")]
    OutOfUniverse(usize),
}

/// A finite interpretation: universe size plus total tables for each
/// function and predicate symbol at a given arity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    size: usize,
    funcs: BTreeMap<(Id, usize), Vec<usize>>,
    preds: BTreeMap<(Id, usize), Vec<bool>>,
}

fn table_len(size: usize, arity: usize) -> usize {
    size.pow(arity as u32)
}

fn table_index(size: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &a| acc * size + a)
}

/// Argument tuple at a table index, most significant argument first.
fn table_args(size: usize, arity: usize, mut index: usize) -> Vec<usize> {
    let mut args = vec![0; arity];
    for slot in args.iter_mut().rev() {
        *slot = index % size;
        index /= size;
    }
    args
}

impl Model {
    pub fn new(size: usize) -> Result<Self, ModelError> {
        if size == 0 {
            return Err(ModelError::EmptyUniverse);
        }
        Ok(Model { size, funcs: BTreeMap::new(), preds: BTreeMap::new() })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Installs a function table. Entry `i` is the value at the argument
    /// tuple whose base-`size` digits (first argument most significant) spell `i`.
    pub fn set_func(&mut self, symbol: Id, arity: usize, table: Vec<usize>) -> Result<(), ModelError> {
        let expected = table_len(self.size, arity);
        if table.len() != expected {
            return Err(ModelError::TableSize { symbol, arity, expected, found: table.len() });
        }
        if let Some(&value) = table.iter().find(|&&v| v >= self.size) {
            return Err(ModelError::OutOfUniverse { symbol, arity, value });
        }
        self.funcs.insert((symbol, arity), table);
        Ok(())
    }

    pub fn set_pred(&mut self, symbol: Id, arity: usize, table: Vec<bool>) -> Result<(), ModelError> {
        let expected = table_len(self.size, arity);
        if table.len() != expected {
            return Err(ModelError::TableSize { symbol, arity, expected, found: table.len() });
        }
        self.preds.insert((symbol, arity), table);
        Ok(())
    }

    /// Builds a function table from a closure over argument tuples.
    pub fn with_func(mut self, name: &str, arity: usize, f: impl Fn(&[usize]) -> usize) -> Result<Self, ModelError> {
        let table = (0..table_len(self.size, arity)).map(|i| f(&table_args(self.size, arity, i))).collect();
        let id = Id::new(name).expect("symbol name");
        self.set_func(id, arity, table)?;
        Ok(self)
    }

    pub fn with_pred(mut self, name: &str, arity: usize, f: impl Fn(&[usize]) -> bool) -> Result<Self, ModelError> {
        let table = (0..table_len(self.size, arity)).map(|i| f(&table_args(self.size, arity, i))).collect();
        let id = Id::new(name).expect("symbol name");
        self.set_pred(id, arity, table)?;
        Ok(self)
    }

    pub fn func(&self, symbol: &Id, args: &[usize]) -> Option<usize> {
        let table = self.funcs.get(&(symbol.clone(), args.len()))?;
        table.get(table_index(self.size, args)).copied()
    }

    pub fn pred(&self, symbol: &Id, args: &[usize]) -> Option<bool> {
        let table = self.preds.get(&(symbol.clone(), args.len()))?;
        table.get(table_index(self.size, args)).copied()
    }

    /// A uniformly random model over `sig`.
    pub fn random(sig: &Signature, size: usize, rng: &mut impl Rng) -> Result<Self, ModelError> {
        let space = ModelSpace::new(sig, size, 0)?;
        let mut model = space.blank();
        for slot in &space.slots {
            let v = rng.gen_range(0..space.radix(slot));
            space.write(&mut model, &mut Vec::new(), slot, v);
        }
        Ok(model)
    }

    /// Calls `visit` on every model of the given size over `sig`, in
    /// enumeration order, until it breaks.
    pub fn for_each(
        sig: &Signature,
        size: usize,
        mut visit: impl FnMut(&Model) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>, ModelError> {
        let space = ModelSpace::new(sig, size, 0)?;
        Ok(space.enumerate(|m, _| visit(m)))
    }

    /// Number of models of the given size over `sig`, saturating.
    pub fn count(sig: &Signature, size: usize) -> u128 {
        ModelSpace::new(sig, size.max(1), 0).map(|s| s.count()).unwrap_or(0)
    }
}

pub fn eval_term(e: &Environment, m: &Model, t: &Term) -> Result<usize, EvalError> {
    match t {
        Term::Var(n) => {
            let d = e.get(*n);
            if d >= m.size {
                return Err(EvalError::OutOfUniverse(d));
            }
            Ok(d)
        }
        Term::Fun(id, args) => {
            let values = args.iter().map(|a| eval_term(e, m, a)).collect::<Result<Vec<_>, _>>()?;
            m.func(id, &values).ok_or_else(|| EvalError::MissingSymbol {
                kind: SymbolKind::Function,
                symbol: id.clone(),
                arity: args.len(),
            })
        }
    }
}

pub fn eval_formula(e: &Environment, m: &Model, f: &Formula) -> Result<bool, EvalError> {
    Ok(match f {
        Formula::Falsity => false,
        Formula::Pre(id, args) => {
            let values = args.iter().map(|a| eval_term(e, m, a)).collect::<Result<Vec<_>, _>>()?;
            m.pred(id, &values).ok_or_else(|| EvalError::MissingSymbol {
                kind: SymbolKind::Predicate,
                symbol: id.clone(),
                arity: args.len(),
            })?
        }
        Formula::Imp(a, b) => !eval_formula(e, m, a)? || eval_formula(e, m, b)?,
        Formula::Dis(a, b) => eval_formula(e, m, a)? || eval_formula(e, m, b)?,
        Formula::Con(a, b) => eval_formula(e, m, a)? && eval_formula(e, m, b)?,
        Formula::Exi(p) => {
            for d in 0..m.size {
                if eval_formula(&e.extend(d), m, p)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Uni(p) => {
            for d in 0..m.size {
                if !eval_formula(&e.extend(d), m, p)? {
                    return Ok(false);
                }
            }
            true
        }
    })
}

/// Truth of `f` in `m` for every environment over its free variables.
pub fn holds_in(m: &Model, f: &Formula) -> Result<bool, EvalError> {
    let free = f.free_bound();
    let mut values = vec![0; free];
    loop {
        let e = Environment::from_values(values.clone(), 0);
        if !eval_formula(&e, m, f)? {
            return Ok(false);
        }
        let mut i = free;
        loop {
            if i == 0 {
                return Ok(true);
            }
            i -= 1;
            if values[i] + 1 < m.size {
                values[i] += 1;
                break;
            }
            values[i] = 0;
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Slot {
    Pred(usize, usize),
    Func(usize, usize),
    Env(usize),
}

/// Every interpretation of a signature at one universe size, plus values for
/// `free` environment variables, as a sequence of digits.
struct ModelSpace {
    size: usize,
    pred_keys: Vec<(Id, usize)>,
    func_keys: Vec<(Id, usize)>,
    slots: Vec<Slot>,
}

impl ModelSpace {
    fn new(sig: &Signature, size: usize, free: usize) -> Result<Self, ModelError> {
        if size == 0 {
            return Err(ModelError::EmptyUniverse);
        }
        let pred_keys: Vec<_> = sig.preds.iter().map(|(id, &n)| (id.clone(), n)).collect();
        let func_keys: Vec<_> = sig.funcs.iter().map(|(id, &n)| (id.clone(), n)).collect();
        let mut slots = Vec::new();
        for (k, (_, arity)) in pred_keys.iter().enumerate() {
            slots.extend((0..table_len(size, *arity)).map(|i| Slot::Pred(k, i)));
        }
        for (k, (_, arity)) in func_keys.iter().enumerate() {
            slots.extend((0..table_len(size, *arity)).map(|i| Slot::Func(k, i)));
        }
        slots.extend((0..free).map(Slot::Env));
        Ok(ModelSpace { size, pred_keys, func_keys, slots })
    }

    fn radix(&self, slot: &Slot) -> usize {
        match slot {
            Slot::Pred(..) => 2,
            Slot::Func(..) | Slot::Env(_) => self.size,
        }
    }

    fn count(&self) -> u128 {
        self.slots.iter().try_fold(1u128, |acc, s| acc.checked_mul(self.radix(s) as u128)).unwrap_or(u128::MAX)
    }

    fn blank(&self) -> Model {
        let mut m = Model::new(self.size).expect("nonzero size");
        for (id, arity) in &self.pred_keys {
            m.preds.insert((id.clone(), *arity), vec![false; table_len(self.size, *arity)]);
        }
        for (id, arity) in &self.func_keys {
            m.funcs.insert((id.clone(), *arity), vec![0; table_len(self.size, *arity)]);
        }
        m
    }

    fn free(&self) -> usize {
        self.slots.iter().filter(|s| matches!(s, Slot::Env(_))).count()
    }

    fn write(&self, m: &mut Model, env: &mut Vec<usize>, slot: &Slot, v: usize) {
        match *slot {
            Slot::Pred(k, i) => m.preds.get_mut(&self.pred_keys[k]).expect("table")[i] = v == 1,
            Slot::Func(k, i) => m.funcs.get_mut(&self.func_keys[k]).expect("table")[i] = v,
            Slot::Env(i) => {
                if env.len() <= i {
                    env.resize(i + 1, 0);
                }
                env[i] = v;
            }
        }
    }

    /// Odometer over all digit vectors in lexicographic order.
    fn enumerate(&self, mut visit: impl FnMut(&Model, &[usize]) -> ControlFlow<()>) -> ControlFlow<()> {
        let mut model = self.blank();
        let mut env = vec![0; self.free()];
        let mut digits = vec![0usize; self.slots.len()];
        loop {
            visit(&model, &env)?;
            let mut i = digits.len();
            loop {
                if i == 0 {
                    return ControlFlow::Continue(());
                }
                i -= 1;
                let slot = &self.slots[i];
                if digits[i] + 1 < self.radix(slot) {
                    digits[i] += 1;
                    self.write(&mut model, &mut env, slot, digits[i]);
                    break;
                }
                digits[i] = 0;
                self.write(&mut model, &mut env, slot, 0);
            }
        }
    }
}

/// A model and environment in which some formula is false.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Countermodel {
    pub model: Model,
    pub environment: Environment,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NoCountermodel {
    #[error("no countermodel exists up to the searched size")]
    NotFound,
    #[error("no countermodel witnessed within the budget")]
    BudgetExhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    pub max_size: usize,
    /// Interpretations examined per universe size.
    pub budget: u64,
    /// Seed for random sampling once a size is too large to enumerate.
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { max_size: 3, budget: 100_000, seed: 0x006e_6164_6561 }
    }
}

/// Searches universe sizes `1..=max_size` for a model and environment that
/// falsify `f`, with the default seed.
pub fn find_countermodel(f: &Formula, max_size: usize, budget: u64) -> Result<Countermodel, NoCountermodel> {
    search_countermodel(f, &SearchConfig { max_size, budget, ..SearchConfig::default() })
}

/// Sizes are tried in ascending order. A size whose interpretation count fits
/// in the budget is enumerated exhaustively (predicate tables, then function
/// tables, then free variables, lexicographically); otherwise `budget` random
/// interpretations are sampled from a generator seeded with `seed + size`.
pub fn search_countermodel(f: &Formula, config: &SearchConfig) -> Result<Countermodel, NoCountermodel> {
    let sig = match f.signature() {
        Ok(sig) => sig,
        Err(_) => return Err(NoCountermodel::NotFound),
    };
    let free = f.free_bound();
    let mut sampled = false;
    for size in 1..=config.max_size.max(1) {
        let space = ModelSpace::new(&sig, size, free).expect("nonzero size");
        let falsifies = |m: &Model, env: &[usize]| {
            let e = Environment::from_values(env.to_vec(), 0);
            matches!(eval_formula(&e, m, f), Ok(false))
        };
        if space.count() <= config.budget as u128 {
            let mut found = None;
            let _ = space.enumerate(|m, env| {
                if falsifies(m, env) {
                    found =
                        Some(Countermodel { model: m.clone(), environment: Environment::from_values(env.to_vec(), 0) });
                    return ControlFlow::Break(());
                }
                ControlFlow::Continue(())
            });
            if let Some(cm) = found {
                return Ok(cm);
            }
        } else {
            sampled = true;
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(size as u64));
            let mut model = space.blank();
            let mut env = vec![0; free];
            for _ in 0..config.budget {
                for slot in &space.slots {
                    let v = rng.gen_range(0..space.radix(slot));
                    space.write(&mut model, &mut env, slot, v);
                }
                if falsifies(&model, &env) {
                    return Ok(Countermodel { model, environment: Environment::from_values(env, 0) });
                }
            }
        }
    }
    Err(if sampled { NoCountermodel::BudgetExhausted } else { NoCountermodel::NotFound })
}

#[derive(Serialize, Deserialize)]
struct TableEntry<T> {
    args: Vec<usize>,
    value: T,
}

#[derive(Serialize, Deserialize)]
struct SymbolTable<T> {
    name: Id,
    arity: usize,
    table: Vec<TableEntry<T>>,
}

#[derive(Serialize, Deserialize)]
struct ModelJson {
    size: usize,
    functions: Vec<SymbolTable<usize>>,
    predicates: Vec<SymbolTable<bool>>,
}

fn tables<T: Copy>(size: usize, map: &BTreeMap<(Id, usize), Vec<T>>) -> Vec<SymbolTable<T>> {
    map.iter()
        .map(|((name, arity), table)| SymbolTable {
            name: name.clone(),
            arity: *arity,
            table: table
                .iter()
                .enumerate()
                .map(|(i, v)| TableEntry { args: table_args(size, *arity, i), value: *v })
                .collect(),
        })
        .collect()
}

impl Serialize for Model {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ModelJson {
            size: self.size,
            functions: tables(self.size, &self.funcs),
            predicates: tables(self.size, &self.preds),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Model {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let json = ModelJson::deserialize(d)?;
        let mut m = Model::new(json.size).map_err(D::Error::custom)?;
        for t in json.functions {
            let mut table = vec![0; table_len(m.size, t.arity)];
            for e in t.table {
                let i = table_index(m.size, &e.args);
                *table.get_mut(i).ok_or_else(|| D::Error::custom("argument out of range"))? = e.value;
            }
            m.set_func(t.name, t.arity, table).map_err(D::Error::custom)?;
        }
        for t in json.predicates {
            let mut table = vec![false; table_len(m.size, t.arity)];
            for e in t.table {
                let i = table_index(m.size, &e.args);
                *table.get_mut(i).ok_or_else(|| D::Error::custom("argument out of range"))? = e.value;
            }
            m.set_pred(t.name, t.arity, table).map_err(D::Error::custom)?;
        }
        Ok(m)
    }
}

impl Serialize for Countermodel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Json<'a> {
            found: bool,
            model: &'a Model,
            environment: &'a [usize],
        }
        Json { found: true, model: &self.model, environment: self.environment.values() }.serialize(s)
    }
}

impl Countermodel {
    /// Re-evaluates the formula to confirm it is false here.
    pub fn falsifies(&self, f: &Formula) -> bool {
        self.environment.max_value() < self.model.size
            && matches!(eval_formula(&self.environment, &self.model, f), Ok(false))
    }
}
