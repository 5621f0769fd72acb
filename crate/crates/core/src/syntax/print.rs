//! Formula printers.
//!
//! [`PrintStyle::Named`] and [`PrintStyle::Typewriter`] emit the surface
//! syntax accepted by [`parse_formula`](super::parse_formula);
//! [`PrintStyle::DeepEmbed`] emits constructor form for
//! [`parse_deep_formula`](super::parse_deep_formula). The Isabelle printers
//! produce HOL terms (curried application, `False`) and are not meant to be
//! parsed back.

use std::collections::BTreeSet;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{Formula, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrintStyle {
    /// Math symbols with generated bound names: `∀x. ∃y. R(x, y)`.
    Named,
    /// ASCII: `!x. ?y. R(x, y) ---> falsity`.
    Typewriter,
    /// Constructor form: `Uni (Exi (Pre ''R'' [Var 1, Var 0]))`.
    DeepEmbed,
}

/// Shallow-embedding flavours for Isabelle/HOL output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IsabelleSyntax {
    /// `! x. ? y. R x y --> False`
    Ascii,
    /// `∀x. ∃y. R x y ⟶ False`
    Symbols,
}

struct Notation {
    forall: &'static str,
    exists: &'static str,
    imp: &'static str,
    dis: &'static str,
    con: &'static str,
    falsity: &'static str,
    /// Render `φ → ⊥` as this prefix and `⊥ → ⊥` as `truth`.
    negation: Option<(&'static str, &'static str)>,
    /// `∧`/`∨` associate to the right (Isabelle) rather than the left.
    right_assoc: bool,
    curried: bool,
}

const NAMED: Notation = Notation {
    forall: "∀",
    exists: "∃",
    imp: " ⟶ ",
    dis: " ∨ ",
    con: " ∧ ",
    falsity: "⊥",
    negation: Some(("¬", "⊤")),
    right_assoc: false,
    curried: false,
};

const TYPEWRITER: Notation = Notation {
    forall: "!",
    exists: "?",
    imp: " ---> ",
    dis: " | ",
    con: " & ",
    falsity: "falsity",
    negation: None,
    right_assoc: false,
    curried: false,
};

const ISABELLE_ASCII: Notation = Notation {
    forall: "! ",
    exists: "? ",
    imp: " --> ",
    dis: " | ",
    con: " & ",
    falsity: "False",
    negation: None,
    right_assoc: true,
    curried: true,
};

const ISABELLE_SYMBOLS: Notation = Notation {
    forall: "∀",
    exists: "∃",
    imp: " ⟶ ",
    dis: " ∨ ",
    con: " ∧ ",
    falsity: "False",
    negation: None,
    right_assoc: true,
    curried: true,
};

const IMP: u8 = 1;
const DIS: u8 = 2;
const CON: u8 = 3;
const PREFIX: u8 = 4;

/// Bound-variable names: x, y, z, u, v, w, x1, y1, ...
pub fn bound_names(avoid: &BTreeSet<String>) -> impl Iterator<Item = String> + '_ {
    const BASE: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
    (0..)
        .flat_map(|round: usize| {
            BASE.iter().map(move |b| if round == 0 { b.to_string() } else { format!("{b}{round}") })
        })
        .filter(move |n| !avoid.contains(n))
}

/// The first `count` bound-variable names that avoid the symbols of `f`.
pub fn bound_names_for(f: &Formula, count: usize) -> Vec<String> {
    bound_names(&symbol_names(f)).take(count).collect()
}

fn symbol_names(f: &Formula) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    fn term(t: &Term, out: &mut BTreeSet<String>) {
        if let Term::Fun(id, args) = t {
            out.insert(id.to_string());
            args.iter().for_each(|a| term(a, out));
        }
    }
    fn go(f: &Formula, out: &mut BTreeSet<String>) {
        match f {
            Formula::Falsity => {}
            Formula::Pre(id, args) => {
                out.insert(id.to_string());
                args.iter().for_each(|a| term(a, out));
            }
            Formula::Imp(a, b) | Formula::Dis(a, b) | Formula::Con(a, b) => {
                go(a, out);
                go(b, out);
            }
            Formula::Exi(p) | Formula::Uni(p) => go(p, out),
        }
    }
    go(f, &mut out);
    out
}

struct Printer<'a> {
    n: &'a Notation,
    names: Vec<String>,
    /// Names for free variables `Var k` at depth 0 (Isabelle output only).
    free: &'a [String],
    out: String,
}

impl Printer<'_> {
    fn name_for(&mut self, depth: usize) -> String {
        self.names[depth].clone()
    }

    fn term(&mut self, t: &Term, depth: usize, nested: bool) {
        match t {
            Term::Var(n) if *n < depth => {
                let name = self.name_for(depth - 1 - n);
                self.out.push_str(&name);
            }
            Term::Var(n) => {
                let k = n - depth;
                match self.free.get(k) {
                    Some(name) => self.out.push_str(name),
                    None if self.n.curried => {
                        let _ = write!(self.out, "v{k}");
                    }
                    None => {
                        let _ = write!(self.out, "#{n}");
                    }
                }
            }
            Term::Fun(id, args) if self.n.curried => {
                if args.is_empty() {
                    self.out.push_str(id.as_str());
                    return;
                }
                if nested {
                    self.out.push('(');
                }
                self.out.push_str(id.as_str());
                for a in args {
                    self.out.push(' ');
                    self.term(a, depth, true);
                }
                if nested {
                    self.out.push(')');
                }
            }
            Term::Fun(id, args) => {
                self.out.push_str(id.as_str());
                self.out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        self.out.push_str(", ");
                    }
                    self.term(a, depth, false);
                }
                self.out.push(')');
            }
        }
    }

    fn formula(&mut self, f: &Formula, depth: usize, ctx: u8, open_right: bool) {
        match f {
            Formula::Falsity => self.out.push_str(self.n.falsity),
            Formula::Pre(id, args) => {
                self.out.push_str(id.as_str());
                if self.n.curried {
                    for a in args {
                        self.out.push(' ');
                        self.term(a, depth, true);
                    }
                } else if !args.is_empty() {
                    self.out.push('(');
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            self.out.push_str(", ");
                        }
                        self.term(a, depth, false);
                    }
                    self.out.push(')');
                }
            }
            Formula::Imp(a, b) if self.n.negation.is_some() && **b == Formula::Falsity => {
                let (not, truth) = self.n.negation.unwrap();
                if **a == Formula::Falsity {
                    self.out.push_str(truth);
                } else {
                    self.out.push_str(not);
                    self.formula(a, depth, PREFIX, open_right);
                }
            }
            Formula::Imp(a, b) => self.binary(a, b, IMP, true, self.n.imp, depth, ctx, open_right),
            Formula::Dis(a, b) => self.binary(a, b, DIS, self.n.right_assoc, self.n.dis, depth, ctx, open_right),
            Formula::Con(a, b) => self.binary(a, b, CON, self.n.right_assoc, self.n.con, depth, ctx, open_right),
            Formula::Exi(p) | Formula::Uni(p) => {
                let paren = ctx != 0 && !(ctx == PREFIX && open_right);
                if paren {
                    self.out.push('(');
                }
                self.out.push_str(if matches!(f, Formula::Uni(_)) { self.n.forall } else { self.n.exists });
                let name = self.name_for(depth);
                self.out.push_str(&name);
                self.out.push_str(". ");
                self.formula(p, depth + 1, 0, true);
                if paren {
                    self.out.push(')');
                }
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn binary(
        &mut self,
        a: &Formula,
        b: &Formula,
        level: u8,
        right_assoc: bool,
        op: &str,
        depth: usize,
        ctx: u8,
        open_right: bool,
    ) {
        let paren = level < ctx;
        let open_right = paren || open_right;
        if paren {
            self.out.push('(');
        }
        let (left_ctx, right_ctx) = if right_assoc { (level + 1, level) } else { (level, level + 1) };
        self.formula(a, depth, left_ctx, false);
        self.out.push_str(op);
        self.formula(b, depth, right_ctx, open_right);
        if paren {
            self.out.push(')');
        }
    }
}

fn max_depth(f: &Formula) -> usize {
    match f {
        Formula::Falsity | Formula::Pre(..) => 0,
        Formula::Imp(a, b) | Formula::Dis(a, b) | Formula::Con(a, b) => max_depth(a).max(max_depth(b)),
        Formula::Exi(p) | Formula::Uni(p) => 1 + max_depth(p),
    }
}

fn surface(f: &Formula, n: &Notation, free: &[String]) -> String {
    let mut avoid = symbol_names(f);
    avoid.extend(free.iter().cloned());
    let names = bound_names(&avoid).take(max_depth(f)).collect();
    let mut p = Printer { n, names, free, out: String::new() };
    p.formula(f, 0, 0, true);
    p.out
}

fn deep_name(out: &mut String, name: &str) {
    out.push_str("''");
    for ch in name.chars() {
        if ch == '\'' {
            out.push('\\');
        }
        out.push(ch);
    }
    out.push_str("''");
}

fn deep_term(t: &Term, out: &mut String) {
    match t {
        Term::Var(n) => {
            let _ = write!(out, "Var {n}");
        }
        Term::Fun(id, args) => {
            out.push_str("Fun ");
            deep_name(out, id.as_str());
            deep_terms(args, out);
        }
    }
}

fn deep_terms(ts: &[Term], out: &mut String) {
    out.push_str(" [");
    for (i, t) in ts.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        deep_term(t, out);
    }
    out.push(']');
}

fn deep_formula(f: &Formula, out: &mut String) {
    let arg = |g: &Formula, out: &mut String| {
        out.push(' ');
        if *g == Formula::Falsity {
            out.push_str("Falsity");
        } else {
            out.push('(');
            deep_formula(g, out);
            out.push(')');
        }
    };
    match f {
        Formula::Falsity => out.push_str("Falsity"),
        Formula::Pre(id, args) => {
            out.push_str("Pre ");
            deep_name(out, id.as_str());
            deep_terms(args, out);
        }
        Formula::Imp(a, b) | Formula::Dis(a, b) | Formula::Con(a, b) => {
            out.push_str(match f {
                Formula::Imp(..) => "Imp",
                Formula::Dis(..) => "Dis",
                _ => "Con",
            });
            arg(a, out);
            arg(b, out);
        }
        Formula::Exi(p) => {
            out.push_str("Exi");
            arg(p, out);
        }
        Formula::Uni(p) => {
            out.push_str("Uni");
            arg(p, out);
        }
    }
}

pub fn render_formula(f: &Formula, style: PrintStyle) -> String {
    match style {
        PrintStyle::Named => surface(f, &NAMED, &[]),
        PrintStyle::Typewriter => surface(f, &TYPEWRITER, &[]),
        PrintStyle::DeepEmbed => {
            let mut out = String::new();
            deep_formula(f, &mut out);
            out
        }
    }
}

pub fn render_term(t: &Term, style: PrintStyle) -> String {
    match style {
        PrintStyle::Named | PrintStyle::Typewriter => {
            let mut p = Printer { n: &NAMED, names: Vec::new(), free: &[], out: String::new() };
            p.term(t, 0, false);
            p.out
        }
        PrintStyle::DeepEmbed => {
            let mut out = String::new();
            deep_term(t, &mut out);
            out
        }
    }
}

/// Renders `f` as an Isabelle/HOL term. `free[k]` names the free variable
/// `Var k`; unnamed free variables print as `vk`.
pub fn render_isabelle(f: &Formula, syntax: IsabelleSyntax, free: &[String]) -> String {
    let n = match syntax {
        IsabelleSyntax::Ascii => &ISABELLE_ASCII,
        IsabelleSyntax::Symbols => &ISABELLE_SYMBOLS,
    };
    surface(f, n, free)
}

/// Isabelle string literal for a symbol name in the deep embedding.
pub fn isabelle_string(name: &str) -> String {
    let mut out = String::new();
    deep_name(&mut out, name);
    out
}

/// `[f1, f2]` in constructor form.
pub fn render_deep_list(fs: &[Formula]) -> String {
    let mut out = String::from("[");
    for (i, f) in fs.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        deep_formula(f, &mut out);
    }
    out.push(']');
    out
}
