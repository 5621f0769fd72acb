//! Line-oriented proof files.
//!
//! ```text
//! NADEA-PROOF 1
//! Imp_I | Imp (Pre ''P'' []) (Pre ''P'' []) | [] |
//!   Assume | Pre ''P'' [] | [Pre ''P'' []] |
//! ```
//!
//! One node per line: rule, goal, assumption list and optional witness, all
//! in constructor form and separated by `|`. Premises follow their
//! conclusion, indented two more spaces.

use thiserror::Error;

use crate::engine::ProofState;
use crate::kernel::{Derivation, Rule};
use crate::syntax::{
    parse_deep_formula, parse_deep_formula_list, parse_deep_term, render_deep_list, render_formula, render_term,
    PrintStyle,
};

pub const HEADER: &str = "NADEA-PROOF 1";

/// Rule column of a goal that is still open in a partial export.
pub const OPEN_MARK: &str = "¤";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofTextError {
    #[error("line {line}, column {column}: {message}")]
    Format { line: usize, column: usize, message: String },
    #[error("line {line}: {message}")]
    Invariant { line: usize, message: String },
}

fn format_err(line: usize, column: usize, message: impl Into<String>) -> ProofTextError {
    ProofTextError::Format { line, column, message: message.into() }
}

fn write_node(
    out: &mut String,
    depth: usize,
    rule: &str,
    d_goal: &crate::Formula,
    assumptions: &[crate::Formula],
    witness: Option<&crate::Term>,
) {
    for _ in 0..depth {
        out.push_str("  ");
    }
    out.push_str(rule);
    out.push_str(" | ");
    out.push_str(&render_formula(d_goal, PrintStyle::DeepEmbed));
    out.push_str(" | ");
    out.push_str(&render_deep_list(assumptions));
    out.push_str(" |");
    if let Some(w) = witness {
        out.push(' ');
        out.push_str(&render_term(w, PrintStyle::DeepEmbed));
    }
    out.push('\n');
}

pub fn serialize_proof(d: &Derivation) -> String {
    fn go(out: &mut String, d: &Derivation, depth: usize) {
        write_node(out, depth, d.rule.name(), &d.goal, &d.assumptions, d.witness.as_ref());
        for p in &d.premises {
            go(out, p, depth + 1);
        }
    }
    let mut out = String::from(HEADER);
    out.push('\n');
    go(&mut out, d, 0);
    out
}

/// Writes a possibly incomplete session, marking open goals with `¤`.
/// [`parse_proof`] rejects such files until every goal is closed.
pub fn serialize_partial(s: &ProofState) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for line in s.lines() {
        let n = line.data;
        let (rule, witness) = match &n.applied {
            Some(a) => (a.rule.name(), a.witness.as_ref()),
            None => (OPEN_MARK, None),
        };
        write_node(&mut out, line.depth, rule, &n.goal, &n.assumptions, witness);
    }
    out
}

struct Row {
    line: usize,
    depth: usize,
    node: Derivation,
}

fn column_of(line: &str, byte: usize) -> usize {
    line[..byte.min(line.len())].chars().count() + 1
}

fn parse_row(text: &str, line_no: usize) -> Result<Row, ProofTextError> {
    let indent = text.len() - text.trim_start_matches(' ').len();
    if !indent.is_multiple_of(2) {
        return Err(format_err(line_no, indent + 1, "indentation must be a multiple of two spaces"));
    }
    let mut fields = Vec::new();
    let mut start = indent;
    for (i, ch) in text.char_indices().skip_while(|(i, _)| *i < indent) {
        if ch == '|' {
            fields.push((start, &text[start..i]));
            start = i + 1;
        }
    }
    fields.push((start, &text[start..]));
    if fields.len() != 4 {
        return Err(format_err(
            line_no,
            column_of(text, start),
            format!("expected 4 fields separated by '|', found {}", fields.len()),
        ));
    }
    let field = |k: usize| {
        let (at, raw) = fields[k];
        let lead = raw.len() - raw.trim_start().len();
        (at + lead, raw.trim())
    };
    let (at, rule_text) = field(0);
    if rule_text == OPEN_MARK {
        return Err(format_err(line_no, column_of(text, at), "the proof has an open goal"));
    }
    let rule: Rule = rule_text
        .parse()
        .map_err(|e: crate::kernel::UnknownRule| format_err(line_no, column_of(text, at), e.to_string()))?;
    let parse_err = |at: usize, e: crate::syntax::ParseError| {
        format_err(line_no, column_of(text, at + e.position), e.kind.to_string())
    };
    let (at, goal_text) = field(1);
    let goal = parse_deep_formula(goal_text).map_err(|e| parse_err(at, e))?;
    let (at, list_text) = field(2);
    let assumptions = parse_deep_formula_list(list_text).map_err(|e| parse_err(at, e))?;
    let (at, witness_text) = field(3);
    let witness =
        if witness_text.is_empty() { None } else { Some(parse_deep_term(witness_text).map_err(|e| parse_err(at, e))?) };
    Ok(Row { line: line_no, depth: indent / 2, node: Derivation::new(rule, goal, assumptions, witness, Vec::new()) })
}

/// Parses a proof file and checks its shape (premise counts, witnesses,
/// arities), but not the rules themselves; that is [`crate::kernel::check`]'s job.
pub fn parse_proof(text: &str) -> Result<Derivation, ProofTextError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        None => return Err(format_err(1, 1, format!("expected header {HEADER:?}, found end of input"))),
        Some((n, l)) if l.trim_end() != HEADER => {
            return Err(format_err(n, 1, format!("expected header {HEADER:?}")));
        }
        Some(_) => {}
    }
    let mut rows = Vec::new();
    for (n, l) in lines {
        let row = parse_row(l.trim_end(), n)?;
        let allowed = match rows.last() {
            None => row.depth == 0,
            Some(prev) => {
                let prev: &Row = prev;
                row.depth >= 1 && row.depth <= prev.depth + 1
            }
        };
        if !allowed {
            let msg = if rows.is_empty() { "the root must not be indented" } else { "unexpected indentation" };
            return Err(format_err(n, 1, msg));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(format_err(text.lines().count().max(1), 1, "no proof after the header"));
    }
    let mut iter = rows.into_iter().peekable();
    let (root, root_line) = build(&mut iter)?;
    debug_assert!(iter.peek().is_none());
    validate(&root, root_line)?;
    Ok(root)
}

type Rows = std::iter::Peekable<std::vec::IntoIter<Row>>;

fn build(rows: &mut Rows) -> Result<(Derivation, Vec<usize>), ProofTextError> {
    let row = rows.next().expect("caller checked");
    let mut node = row.node;
    let mut lines = vec![row.line];
    while rows.peek().is_some_and(|r| r.depth == row.depth + 1) {
        let (child, child_lines) = build(rows)?;
        node.premises.push(child);
        lines.extend(child_lines);
    }
    Ok((node, lines))
}

/// `lines` lists source line numbers in preorder.
fn validate(root: &Derivation, lines: Vec<usize>) -> Result<(), ProofTextError> {
    let mut nodes = Vec::new();
    root.visit(&mut |d| nodes.push(d));
    for (d, line) in nodes.into_iter().zip(lines) {
        if let Some(message) = d.structural_error() {
            return Err(ProofTextError::Invariant { line, message });
        }
        for f in std::iter::once(&d.goal).chain(&d.assumptions) {
            if let Err(e) = f.well_formed() {
                return Err(ProofTextError::Invariant { line, message: e.to_string() });
            }
        }
    }
    Ok(())
}
