//! First-order terms and formulas with de Bruijn indices.
//!
//! Bound variables are natural numbers: `Var i` refers to the quantifier with
//! the `i`th closest scope. A constant is a function symbol applied to no
//! arguments. The surface syntax (see [`parse_formula`]) uses named binders and
//! is translated to this representation on the way in; the printers in
//! [`print`] generate names on the way out.

mod parse;
pub mod print;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use parse::{
    parse_deep_formula, parse_deep_formula_list, parse_deep_term, parse_formula, parse_term, ParseError, ParseErrorKind,
};
pub use print::{
    bound_names_for, render_deep_list, render_formula, render_isabelle, render_term, IsabelleSyntax, PrintStyle,
};

/// A predicate, function or constant symbol.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Id(Arc<str>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid identifier {0:?}")]
pub struct InvalidId(pub String);

impl Id {
    pub fn new(name: &str) -> Result<Self, InvalidId> {
        if is_identifier(name) {
            Ok(Id(Arc::from(name)))
        } else {
            Err(InvalidId(name.to_owned()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

/// `[A-Za-z][A-Za-z0-9_']*`
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl TryFrom<String> for Id {
    type Error = InvalidId;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        Id::new(&value)
    }
}

impl From<Id> for String {
    fn from(id: Id) -> String {
        id.0.to_string()
    }
}

impl fmt::Display for Id {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Id {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(usize),
    Fun(Id, Vec<Term>),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Falsity,
    Pre(Id, Vec<Term>),
    Imp(Box<Formula>, Box<Formula>),
    Dis(Box<Formula>, Box<Formula>),
    Con(Box<Formula>, Box<Formula>),
    Exi(Box<Formula>),
    Uni(Box<Formula>),
}

impl Term {
    pub fn var(index: usize) -> Term {
        Term::Var(index)
    }

    /// Nullary function symbol.
    ///
    /// Panics if `name` is not an identifier; use [`Id::new`] for untrusted input.
    pub fn constant(name: &str) -> Term {
        Term::Fun(Id::new(name).expect("constant name"), Vec::new())
    }

    pub fn app(name: &str, args: Vec<Term>) -> Term {
        Term::Fun(Id::new(name).expect("function name"), args)
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Term::Fun(_, args) if args.is_empty())
    }

    /// Smallest `n` such that every variable index in the term is below `n`.
    pub fn var_bound(&self) -> usize {
        match self {
            Term::Var(n) => n + 1,
            Term::Fun(_, args) => args.iter().map(Term::var_bound).max().unwrap_or(0),
        }
    }

    pub fn is_ground(&self) -> bool {
        self.var_bound() == 0
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Fun(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    fn collect_funcs(&self, out: &mut Vec<(Id, usize)>) {
        if let Term::Fun(id, args) = self {
            out.push((id.clone(), args.len()));
            for a in args {
                a.collect_funcs(out);
            }
        }
    }

    /// Occurrence test for a subterm.
    pub fn contains(&self, needle: &Term) -> bool {
        if self == needle {
            return true;
        }
        match self {
            Term::Var(_) => false,
            Term::Fun(_, args) => args.iter().any(|a| a.contains(needle)),
        }
    }
}

impl Formula {
    pub fn pre(name: &str, args: Vec<Term>) -> Formula {
        Formula::Pre(Id::new(name).expect("predicate name"), args)
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn dis(a: Formula, b: Formula) -> Formula {
        Formula::Dis(Box::new(a), Box::new(b))
    }

    pub fn con(a: Formula, b: Formula) -> Formula {
        Formula::Con(Box::new(a), Box::new(b))
    }

    pub fn exi(body: Formula) -> Formula {
        Formula::Exi(Box::new(body))
    }

    pub fn uni(body: Formula) -> Formula {
        Formula::Uni(Box::new(body))
    }

    /// `φ → ⊥`
    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Formula) -> Formula {
        Formula::imp(a, Formula::Falsity)
    }

    /// `⊥ → ⊥`
    pub fn truth() -> Formula {
        Formula::imp(Formula::Falsity, Formula::Falsity)
    }

    /// `(φ → ψ) ∧ (ψ → φ)`
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::con(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    /// Smallest `n` such that every free variable index is below `n`; zero for
    /// closed formulas.
    pub fn free_bound(&self) -> usize {
        fn go(f: &Formula, depth: usize) -> usize {
            match f {
                Formula::Falsity => 0,
                Formula::Pre(_, args) => args.iter().map(|t| t.var_bound().saturating_sub(depth)).max().unwrap_or(0),
                Formula::Imp(a, b) | Formula::Dis(a, b) | Formula::Con(a, b) => go(a, depth).max(go(b, depth)),
                Formula::Exi(p) | Formula::Uni(p) => go(p, depth + 1),
            }
        }
        go(self, 0)
    }

    pub fn is_closed(&self) -> bool {
        self.free_bound() == 0
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Falsity => 1,
            Formula::Pre(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            Formula::Imp(a, b) | Formula::Dis(a, b) | Formula::Con(a, b) => 1 + a.size() + b.size(),
            Formula::Exi(p) | Formula::Uni(p) => 1 + p.size(),
        }
    }

    /// Every predicate and function symbol occurrence, with its arity.
    fn occurrences(&self, preds: &mut Vec<(Id, usize)>, funcs: &mut Vec<(Id, usize)>) {
        match self {
            Formula::Falsity => {}
            Formula::Pre(id, args) => {
                preds.push((id.clone(), args.len()));
                for t in args {
                    t.collect_funcs(funcs);
                }
            }
            Formula::Imp(a, b) | Formula::Dis(a, b) | Formula::Con(a, b) => {
                a.occurrences(preds, funcs);
                b.occurrences(preds, funcs);
            }
            Formula::Exi(p) | Formula::Uni(p) => p.occurrences(preds, funcs),
        }
    }

    /// The symbols of the formula. Fails if some symbol is used at two arities.
    pub fn signature(&self) -> Result<Signature, ArityClash> {
        let mut sig = Signature::default();
        sig.add_formula(self)?;
        Ok(sig)
    }

    /// Well-formedness check used at API boundaries.
    pub fn well_formed(&self) -> Result<(), ArityClash> {
        self.signature().map(|_| ())
    }

    pub fn mentions_function(&self, name: &Id) -> bool {
        let mut preds = Vec::new();
        let mut funcs = Vec::new();
        self.occurrences(&mut preds, &mut funcs);
        funcs.iter().any(|(id, _)| id == name)
    }

    pub fn mentions_symbol(&self, name: &Id) -> bool {
        let mut preds = Vec::new();
        let mut funcs = Vec::new();
        self.occurrences(&mut preds, &mut funcs);
        funcs.iter().chain(preds.iter()).any(|(id, _)| id == name)
    }
}

/// Arity assignment for predicate and function symbols.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub preds: BTreeMap<Id, usize>,
    pub funcs: BTreeMap<Id, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} symbol {symbol} used with arities {first} and {second}")]
pub struct ArityClash {
    pub kind: SymbolKind,
    pub symbol: Id,
    pub first: usize,
    pub second: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    Predicate,
    Function,
}

impl fmt::Display for SymbolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymbolKind::Predicate => "predicate",
            SymbolKind::Function => "function",
        })
    }
}

impl Signature {
    pub fn add_pred(&mut self, id: &Id, arity: usize) -> Result<(), ArityClash> {
        insert_arity(&mut self.preds, SymbolKind::Predicate, id, arity)
    }

    pub fn add_func(&mut self, id: &Id, arity: usize) -> Result<(), ArityClash> {
        insert_arity(&mut self.funcs, SymbolKind::Function, id, arity)
    }

    pub fn add_term(&mut self, t: &Term) -> Result<(), ArityClash> {
        let mut funcs = Vec::new();
        t.collect_funcs(&mut funcs);
        for (id, n) in &funcs {
            self.add_func(id, *n)?;
        }
        Ok(())
    }

    pub fn add_formula(&mut self, f: &Formula) -> Result<(), ArityClash> {
        let mut preds = Vec::new();
        let mut funcs = Vec::new();
        f.occurrences(&mut preds, &mut funcs);
        for (id, n) in &preds {
            self.add_pred(id, *n)?;
        }
        for (id, n) in &funcs {
            self.add_func(id, *n)?;
        }
        Ok(())
    }

    pub fn merge(&mut self, other: &Signature) -> Result<(), ArityClash> {
        for (id, n) in &other.preds {
            self.add_pred(id, *n)?;
        }
        for (id, n) in &other.funcs {
            self.add_func(id, *n)?;
        }
        Ok(())
    }

    pub fn of_formulas<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> Result<Signature, ArityClash> {
        let mut sig = Signature::default();
        for f in fs {
            sig.add_formula(f)?;
        }
        Ok(sig)
    }
}

fn insert_arity(map: &mut BTreeMap<Id, usize>, kind: SymbolKind, id: &Id, arity: usize) -> Result<(), ArityClash> {
    match map.get(id) {
        Some(&known) if known != arity => Err(ArityClash { kind, symbol: id.clone(), first: known, second: arity }),
        Some(_) => Ok(()),
        None => {
            map.insert(id.clone(), arity);
            Ok(())
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_term(self, PrintStyle::DeepEmbed))
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_formula(self, PrintStyle::DeepEmbed))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_formula(self, PrintStyle::Named))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_term(self, PrintStyle::Named))
    }
}

impl Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&render_formula(self, PrintStyle::DeepEmbed))
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_deep_formula(&text).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&render_term(self, PrintStyle::DeepEmbed))
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_deep_term(&text).map_err(serde::de::Error::custom)
    }
}
