//! Natural deduction for classical first-order logic.
//!
//! - [`syntax`]: de Bruijn terms and formulas, the surface parser and printers.
//! - [`semantics`]: evaluation in finite models and countermodel search.
//! - [`kernel`]: membership, newness, substitution and the derivation checker.
//! - [`engine`]: backward-chaining proof construction with undo.
//! - [`prover`]: a free-variable tableau prover used to assess open subgoals.
//! - [`export`]: the textual proof format and Isabelle/Isar generation.

pub mod engine;
pub mod export;
pub mod kernel;
pub mod prover;
pub mod semantics;
pub mod syntax;

#[cfg(any(test, feature = "testing"))]
pub mod testing;

pub use engine::{NodeId, ProofState, RuleError, RuleRequest};
pub use kernel::{check, CheckReport, Derivation, Rule};
pub use prover::{prove, Budget, FeasibilityVerdict, Sequent};
pub use semantics::{eval_formula, eval_term, find_countermodel, Environment, Model};
pub use syntax::{parse_formula, render_formula, Formula, Id, PrintStyle, Term};
