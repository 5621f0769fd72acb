use std::fmt;

use thiserror::Error;

use super::{ArityClash, Formula, Id, Signature, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at offset {position}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error(transparent)]
    ArityClash(#[from] ArityClash),
    #[error("unexpected character {0:?}")]
    BadCharacter(char),
    #[error("unterminated string")]
    UnterminatedString,
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: &'static str, found: String },
    #[error("{0} is a reserved word")]
    Reserved(String),
    #[error("invalid identifier {0:?}")]
    InvalidIdentifier(String),
    #[error("number out of range")]
    Number,
}

impl ParseError {
    /// One-based line and column (in characters) of the error position.
    pub fn line_col(&self, text: &str) -> (usize, usize) {
        let upto = &text[..self.position.min(text.len())];
        let line = upto.matches('\n').count() + 1;
        let col = upto.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Str(String),
    Num(usize),
    Hash(usize),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Dot,
    Forall,
    Exists,
    Not,
    And,
    Or,
    Imp,
    Iff,
    Bot,
    Top,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier {s}"),
            Tok::Str(s) => write!(f, "string ''{s}''"),
            Tok::Num(n) => write!(f, "number {n}"),
            Tok::Hash(n) => write!(f, "#{n}"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::LBrack => f.write_str("'['"),
            Tok::RBrack => f.write_str("']'"),
            Tok::Comma => f.write_str("','"),
            Tok::Dot => f.write_str("'.'"),
            Tok::Forall => f.write_str("universal quantifier"),
            Tok::Exists => f.write_str("existential quantifier"),
            Tok::Not => f.write_str("negation"),
            Tok::And => f.write_str("conjunction"),
            Tok::Or => f.write_str("disjunction"),
            Tok::Imp => f.write_str("implication"),
            Tok::Iff => f.write_str("biimplication"),
            Tok::Bot => f.write_str("falsity"),
            Tok::Top => f.write_str("truth"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

const RESERVED: &[&str] = &["forall", "exists", "falsity", "truth"];

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |position, kind| Err(ParseError { position, kind });
    while i < text.len() {
        let c = text[i..].chars().next().unwrap();
        let start = i;
        let rest = &text[i..];
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut j = i;
            while j < text.len() {
                let b = bytes[j];
                if b.is_ascii_alphanumeric() || b == b'_' || b == b'\'' {
                    j += 1;
                } else {
                    break;
                }
            }
            let word = &text[i..j];
            let tok = match word {
                "forall" => Tok::Forall,
                "exists" => Tok::Exists,
                "falsity" => Tok::Bot,
                "truth" => Tok::Top,
                _ => Tok::Ident(word.to_owned()),
            };
            out.push((start, tok));
            i = j;
            continue;
        }
        if c.is_ascii_digit() || c == '#' {
            let digits_from = if c == '#' { i + 1 } else { i };
            let mut j = digits_from;
            while j < text.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if j == digits_from {
                return err(start, ParseErrorKind::BadCharacter('#'));
            }
            let n: usize = match text[digits_from..j].parse() {
                Ok(n) => n,
                Err(_) => return err(start, ParseErrorKind::Number),
            };
            out.push((start, if c == '#' { Tok::Hash(n) } else { Tok::Num(n) }));
            i = j;
            continue;
        }
        if rest.starts_with("''") {
            // Isabelle string. `\'` and `\\` are escapes; otherwise a run of
            // L >= 2 quotes ends the string and contributes L - 2 quotes.
            let mut j = i + 2;
            let mut content = String::new();
            loop {
                if j >= text.len() {
                    return err(start, ParseErrorKind::UnterminatedString);
                }
                let d = text[j..].chars().next().unwrap();
                if d == '\'' {
                    let run = text[j..].bytes().take_while(|&b| b == b'\'').count();
                    if run >= 2 {
                        content.extend(std::iter::repeat_n('\'', run - 2));
                        j += run;
                        break;
                    }
                    content.push('\'');
                    j += 1;
                } else if d == '\\' && text[j + 1..].starts_with(['\'', '\\']) {
                    content.push(text.as_bytes()[j + 1] as char);
                    j += 2;
                } else if d == '\n' {
                    return err(start, ParseErrorKind::UnterminatedString);
                } else {
                    content.push(d);
                    j += d.len_utf8();
                }
            }
            out.push((start, Tok::Str(content)));
            i = j;
            continue;
        }
        const SYMBOLS: &[(&str, Tok)] = &[
            ("<-->", Tok::Iff),
            ("--->", Tok::Imp),
            ("<->", Tok::Iff),
            ("-->", Tok::Imp),
            ("->", Tok::Imp),
            ("/\\", Tok::And),
            ("\\/", Tok::Or),
            ("(", Tok::LParen),
            (")", Tok::RParen),
            ("[", Tok::LBrack),
            ("]", Tok::RBrack),
            (",", Tok::Comma),
            (".", Tok::Dot),
            ("!", Tok::Forall),
            ("?", Tok::Exists),
            ("~", Tok::Not),
            ("&", Tok::And),
            ("|", Tok::Or),
            ("∀", Tok::Forall),
            ("∃", Tok::Exists),
            ("¬", Tok::Not),
            ("∧", Tok::And),
            ("∨", Tok::Or),
            ("⟶", Tok::Imp),
            ("→", Tok::Imp),
            ("↔", Tok::Iff),
            ("⟷", Tok::Iff),
            ("⊥", Tok::Bot),
            ("⊤", Tok::Top),
        ];
        match SYMBOLS.iter().find(|(s, _)| rest.starts_with(s)) {
            Some((s, tok)) => {
                out.push((start, tok.clone()));
                i += s.len();
            }
            None => return err(start, ParseErrorKind::BadCharacter(c)),
        }
    }
    out.push((text.len(), Tok::Eof));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(text)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected<T>(&self, expected: &'static str) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.offset(),
            kind: ParseErrorKind::Unexpected { expected, found: self.peek().to_string() },
        })
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.unexpected(expected)
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.unexpected("end of input")
        }
    }
}

/// Surface-syntax parser with named binders.
struct Surface {
    p: Parser,
    scope: Vec<String>,
    sig: Signature,
    /// Bare identifiers in term position are constants rather than errors.
    bare_constants: bool,
}

impl Surface {
    fn iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.imp()?;
        if *self.p.peek() == Tok::Iff {
            self.p.bump();
            let rhs = self.iff()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.dis()?;
        if *self.p.peek() == Tok::Imp {
            self.p.bump();
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn dis(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.con()?;
        while *self.p.peek() == Tok::Or {
            self.p.bump();
            let rhs = self.con()?;
            lhs = Formula::dis(lhs, rhs);
        }
        Ok(lhs)
    }

    fn con(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.p.peek() == Tok::And {
            self.p.bump();
            let rhs = self.unary()?;
            lhs = Formula::con(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.p.peek().clone() {
            Tok::Not => {
                self.p.bump();
                Ok(Formula::neg(self.unary()?))
            }
            Tok::Forall | Tok::Exists => {
                let universal = self.p.bump() == Tok::Forall;
                let mut names = Vec::new();
                loop {
                    match self.p.peek().clone() {
                        Tok::Ident(name) => {
                            self.p.bump();
                            names.push(name);
                        }
                        Tok::Dot if !names.is_empty() => {
                            self.p.bump();
                            break;
                        }
                        _ => {
                            return self.p.unexpected(if names.is_empty() {
                                "bound variable name"
                            } else {
                                "'.' or another bound variable name"
                            });
                        }
                    }
                }
                let n = names.len();
                self.scope.extend(names);
                let mut body = self.iff()?;
                self.scope.truncate(self.scope.len() - n);
                for _ in 0..n {
                    body = if universal { Formula::uni(body) } else { Formula::exi(body) };
                }
                Ok(body)
            }
            Tok::Bot => {
                self.p.bump();
                Ok(Formula::Falsity)
            }
            Tok::Top => {
                self.p.bump();
                Ok(Formula::truth())
            }
            Tok::LParen => {
                self.p.bump();
                let f = self.iff()?;
                self.p.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Tok::Ident(name) => {
                let at = self.p.offset();
                self.p.bump();
                let id = ident(&name, at)?;
                let args = if *self.p.peek() == Tok::LParen {
                    self.p.bump();
                    self.term_list(Tok::RParen, "')'")?
                } else {
                    Vec::new()
                };
                self.sig.add_pred(&id, args.len()).map_err(|e| ParseError { position: at, kind: e.into() })?;
                Ok(Formula::Pre(id, args))
            }
            _ => self.p.unexpected("formula"),
        }
    }

    fn term_list(&mut self, close: Tok, expected: &'static str) -> Result<Vec<Term>, ParseError> {
        let mut args = Vec::new();
        if *self.p.peek() == close {
            self.p.bump();
            return Ok(args);
        }
        loop {
            args.push(self.term()?);
            match self.p.peek() {
                Tok::Comma => {
                    self.p.bump();
                }
                t if *t == close => {
                    self.p.bump();
                    return Ok(args);
                }
                _ => return self.p.unexpected(expected),
            }
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let at = self.p.offset();
        match self.p.peek().clone() {
            Tok::Hash(n) => {
                self.p.bump();
                Ok(Term::Var(n))
            }
            Tok::Ident(name) => {
                self.p.bump();
                if *self.p.peek() == Tok::LParen {
                    self.p.bump();
                    let id = ident(&name, at)?;
                    let args = self.term_list(Tok::RParen, "')'")?;
                    self.sig.add_func(&id, args.len()).map_err(|e| ParseError { position: at, kind: e.into() })?;
                    return Ok(Term::Fun(id, args));
                }
                if let Some(k) = self.scope.iter().rev().position(|s| *s == name) {
                    return Ok(Term::Var(k));
                }
                if self.bare_constants {
                    let id = ident(&name, at)?;
                    self.sig.add_func(&id, 0).map_err(|e| ParseError { position: at, kind: e.into() })?;
                    return Ok(Term::Fun(id, Vec::new()));
                }
                Err(ParseError { position: at, kind: ParseErrorKind::UnboundVariable(name) })
            }
            Tok::Forall | Tok::Exists | Tok::Bot | Tok::Top => {
                let word = self.p.peek().to_string();
                Err(ParseError { position: at, kind: ParseErrorKind::Reserved(word) })
            }
            _ => self.p.unexpected("term"),
        }
    }
}

fn ident(name: &str, at: usize) -> Result<Id, ParseError> {
    if RESERVED.contains(&name) {
        return Err(ParseError { position: at, kind: ParseErrorKind::Reserved(name.to_owned()) });
    }
    Id::new(name).map_err(|_| ParseError { position: at, kind: ParseErrorKind::InvalidIdentifier(name.to_owned()) })
}

/// Parses the named surface syntax into a de Bruijn formula.
///
/// Grammar, loosest first: `↔` (right), `→` (right), `∨` (left), `∧` (left),
/// then prefix `¬`, quantifiers, atoms and parentheses. A quantifier body
/// extends as far right as possible. `⊤`, `¬` and `↔` are expanded. Bound
/// names resolve to the nearest enclosing binder; any other bare name in term
/// position is an error, so constants are written `c()`. `#n` stands for
/// `Var n` verbatim, which is the only way to write a free variable.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut s = Surface { p: Parser::new(text)?, scope: Vec::new(), sig: Signature::default(), bare_constants: false };
    let f = s.iff()?;
    s.p.finish()?;
    Ok(f)
}

/// Parses a witness term. No binders are in scope, so a bare name is a
/// constant: `c'`, `c'()` and `f(c, #0)` are all accepted.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut s = Surface { p: Parser::new(text)?, scope: Vec::new(), sig: Signature::default(), bare_constants: true };
    let t = s.term()?;
    s.p.finish()?;
    Ok(t)
}

/// Constructor-form parser, e.g. `Imp (Uni (Pre ''A'' [Var 0])) Falsity`.
struct Deep {
    p: Parser,
}

impl Deep {
    fn keyword(&mut self) -> Result<(usize, String), ParseError> {
        let at = self.p.offset();
        match self.p.peek().clone() {
            Tok::Ident(w) => {
                self.p.bump();
                Ok((at, w))
            }
            Tok::Bot => {
                self.p.bump();
                Ok((at, "Falsity".to_owned()))
            }
            _ => self.p.unexpected("constructor"),
        }
    }

    fn name(&mut self) -> Result<Id, ParseError> {
        let at = self.p.offset();
        let raw = match self.p.peek().clone() {
            Tok::Str(s) | Tok::Ident(s) => s,
            _ => return self.p.unexpected("symbol name"),
        };
        self.p.bump();
        Id::new(&raw).map_err(|_| ParseError { position: at, kind: ParseErrorKind::InvalidIdentifier(raw) })
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let (at, word) = self.keyword()?;
        match word.as_str() {
            "Falsity" => Ok(Formula::Falsity),
            "Pre" => {
                let id = self.name()?;
                Ok(Formula::Pre(id, self.terms()?))
            }
            "Imp" | "Dis" | "Con" => {
                let a = self.formula_arg()?;
                let b = self.formula_arg()?;
                Ok(match word.as_str() {
                    "Imp" => Formula::imp(a, b),
                    "Dis" => Formula::dis(a, b),
                    _ => Formula::con(a, b),
                })
            }
            "Exi" => Ok(Formula::exi(self.formula_arg()?)),
            "Uni" => Ok(Formula::uni(self.formula_arg()?)),
            _ => Err(ParseError {
                position: at,
                kind: ParseErrorKind::Unexpected { expected: "formula constructor", found: word },
            }),
        }
    }

    fn formula_arg(&mut self) -> Result<Formula, ParseError> {
        match self.p.peek() {
            Tok::LParen => {
                self.p.bump();
                let f = self.formula()?;
                self.p.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Tok::Ident(w) if w == "Falsity" => {
                self.p.bump();
                Ok(Formula::Falsity)
            }
            Tok::Bot => {
                self.p.bump();
                Ok(Formula::Falsity)
            }
            _ => self.p.unexpected("parenthesised formula or Falsity"),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        if *self.p.peek() == Tok::LParen {
            self.p.bump();
            let t = self.term()?;
            self.p.expect(Tok::RParen, "')'")?;
            return Ok(t);
        }
        let (at, word) = self.keyword()?;
        match word.as_str() {
            "Var" => match self.p.bump() {
                Tok::Num(n) => Ok(Term::Var(n)),
                _ => {
                    self.p.pos -= 1;
                    self.p.unexpected("variable index")
                }
            },
            "Fun" => {
                let id = self.name()?;
                Ok(Term::Fun(id, self.terms()?))
            }
            _ => Err(ParseError {
                position: at,
                kind: ParseErrorKind::Unexpected { expected: "term constructor", found: word },
            }),
        }
    }

    fn terms(&mut self) -> Result<Vec<Term>, ParseError> {
        self.list(Self::term)
    }

    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T, ParseError>) -> Result<Vec<T>, ParseError> {
        self.p.expect(Tok::LBrack, "'['")?;
        let mut out = Vec::new();
        if *self.p.peek() == Tok::RBrack {
            self.p.bump();
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            match self.p.peek() {
                Tok::Comma => {
                    self.p.bump();
                }
                Tok::RBrack => {
                    self.p.bump();
                    return Ok(out);
                }
                _ => return self.p.unexpected("',' or ']'"),
            }
        }
    }
}

/// Parses the constructor form produced by [`PrintStyle::DeepEmbed`](super::PrintStyle).
/// Symbol names may be quoted (`''A''`) or bare.
pub fn parse_deep_formula(text: &str) -> Result<Formula, ParseError> {
    let mut d = Deep { p: Parser::new(text)? };
    let f = d.formula()?;
    d.p.finish()?;
    Ok(f)
}

pub fn parse_deep_term(text: &str) -> Result<Term, ParseError> {
    let mut d = Deep { p: Parser::new(text)? };
    let t = d.term()?;
    d.p.finish()?;
    Ok(t)
}

/// `[f1, f2, ...]` in constructor form.
pub fn parse_deep_formula_list(text: &str) -> Result<Vec<Formula>, ParseError> {
    let mut d = Deep { p: Parser::new(text)? };
    let fs = d.list(Deep::formula)?;
    d.p.finish()?;
    Ok(fs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(args: Vec<Term>) -> Formula {
        Formula::pre("A", args)
    }

    #[test]
    fn de_bruijn_examples() {
        let f = parse_formula("(forall x. forall y. A(x,y)) ---> (forall x. A(x,x))").unwrap();
        let expected = Formula::imp(
            Formula::uni(Formula::uni(a(vec![Term::Var(1), Term::Var(0)]))),
            Formula::uni(a(vec![Term::Var(0), Term::Var(0)])),
        );
        assert_eq!(f, expected);

        // z is the closest binder, so A(z,u) is A [Var 0, Var 1].
        let g = parse_formula("forall x. forall y. (forall u. forall z. A(z,u)) ---> A(x,y)").unwrap();
        let expected = Formula::uni(Formula::uni(Formula::imp(
            Formula::uni(Formula::uni(a(vec![Term::Var(0), Term::Var(1)]))),
            a(vec![Term::Var(1), Term::Var(0)]),
        )));
        assert_eq!(g, expected);
        let swapped = parse_formula("forall x. forall y. (forall u. forall z. A(u,z)) ---> A(x,y)").unwrap();
        assert_eq!(
            swapped,
            crate::syntax::parse_deep_formula(
                "Uni (Uni (Imp (Uni (Uni (Pre ''A'' [Var 1, Var 0]))) (Pre ''A'' [Var 1, Var 0])))"
            )
            .unwrap()
        );
    }

    #[test]
    fn sugar_is_expanded() {
        assert_eq!(parse_formula("falsity ---> falsity").unwrap(), Formula::truth());
        assert_eq!(parse_formula("⊤").unwrap(), Formula::truth());
        assert_eq!(parse_formula("~P").unwrap(), Formula::neg(Formula::pre("P", vec![])));
        assert_eq!(
            parse_formula("P <-> Q").unwrap(),
            Formula::iff(Formula::pre("P", vec![]), Formula::pre("Q", vec![]))
        );
    }

    #[test]
    fn unbound_variable_rejected() {
        let err = parse_formula("A(x)").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnboundVariable("x".into()));
        assert_eq!(err.position, 2);
    }

    #[test]
    fn arity_clash_rejected() {
        let err = parse_formula("P(c()) & P(c(), c())").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::ArityClash(_)));
        assert_eq!(err.position, 9);
    }

    #[test]
    fn malformed_tokens() {
        assert!(matches!(parse_formula("P $ Q").unwrap_err().kind, ParseErrorKind::BadCharacter('$')));
        assert!(parse_formula("").is_err());
        assert!(parse_formula("forall . P").is_err());
        assert!(parse_formula("(P").is_err());
        assert!(parse_formula("P Q").is_err());
        assert!(matches!(parse_formula("P(forall)").unwrap_err().kind, ParseErrorKind::Reserved(_)));
    }

    #[test]
    fn precedence() {
        let p = || Formula::pre("P", vec![]);
        let q = || Formula::pre("Q", vec![]);
        let r = || Formula::pre("R", vec![]);
        assert_eq!(parse_formula("P & Q | R").unwrap(), Formula::dis(Formula::con(p(), q()), r()));
        assert_eq!(parse_formula("P -> Q -> R").unwrap(), Formula::imp(p(), Formula::imp(q(), r())));
        assert_eq!(parse_formula("~P & Q").unwrap(), Formula::con(Formula::neg(p()), q()));
        assert_eq!(parse_formula("P | Q & R").unwrap(), Formula::dis(p(), Formula::con(q(), r())));
        assert_eq!(
            parse_formula("P & forall x. Q | R").unwrap(),
            Formula::con(p(), Formula::uni(Formula::dis(q(), r())))
        );
        assert_eq!(parse_formula("P <-> Q -> R").unwrap(), Formula::iff(p(), Formula::imp(q(), r())));
    }

    #[test]
    fn unicode_and_typewriter_aliases() {
        let f = parse_formula("(∀x. R(x, x)) ⟶ (∀x. ∃y. R(x, y))").unwrap();
        let g = parse_formula("(!x. R(x, x)) --> (!x. ?y. R(x, y))").unwrap();
        assert_eq!(f, g);
        assert_eq!(
            f,
            Formula::imp(
                Formula::uni(Formula::pre("R", vec![Term::Var(0), Term::Var(0)])),
                Formula::uni(Formula::exi(Formula::pre("R", vec![Term::Var(1), Term::Var(0)])))
            )
        );
    }

    #[test]
    fn multi_binder_and_shadowing() {
        assert_eq!(
            parse_formula("forall x y. A(x, y)").unwrap(),
            parse_formula("forall x. forall y. A(x, y)").unwrap()
        );
        assert_eq!(
            parse_formula("forall x. forall x. A(x)").unwrap(),
            Formula::uni(Formula::uni(a(vec![Term::Var(0)])))
        );
    }

    #[test]
    fn escapes_and_constants() {
        assert_eq!(
            parse_formula("forall x. A(x, #3, c'())").unwrap(),
            Formula::uni(a(vec![Term::Var(0), Term::Var(3), Term::constant("c'")]))
        );
        assert_eq!(parse_term("c'").unwrap(), Term::constant("c'"));
        assert_eq!(parse_term("f(c, #0)").unwrap(), Term::app("f", vec![Term::constant("c"), Term::Var(0)]));
    }

    #[test]
    fn deep_form() {
        let f = parse_deep_formula("Imp (Uni (Uni (Pre A [Var 1, Var 0]))) (Uni (Pre ''A'' [Var 0, Var 0]))").unwrap();
        assert_eq!(f, parse_formula("(forall x. forall y. A(x,y)) ---> (forall x. A(x,x))").unwrap());
        assert_eq!(parse_deep_term("Fun ''c''' []").unwrap(), Term::constant("c'"));
        assert_eq!(parse_deep_term(r"Fun ''c\''' []").unwrap(), Term::constant("c'"));
        assert_eq!(parse_deep_term(r"Fun ''c\'\''' []").unwrap(), Term::constant("c''"));
        assert_eq!(parse_deep_term("Fun ''c'''' []").unwrap(), Term::constant("c''"));
        assert_eq!(
            parse_deep_formula_list("[Falsity, Pre ''P'' [Fun ''f'' [Var 2]]]").unwrap(),
            vec![Formula::Falsity, Formula::pre("P", vec![Term::app("f", vec![Term::Var(2)])])]
        );
        assert!(parse_deep_formula("Imp Falsity").is_err());
        assert!(parse_deep_formula("Pre ''A [").is_err());
    }

    #[test]
    fn error_line_col() {
        let text = "P &\n  $";
        let err = parse_formula(text).unwrap_err();
        assert_eq!(err.line_col(text), (2, 3));
    }
}
