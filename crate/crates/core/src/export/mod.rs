//! Proof files and Isabelle theory text.

mod isar;
mod proof_text;

pub use isar::{
    build_isar, rule_tokens, to_isar_closed, to_isar_open, Corollary, Discharge, IsarDoc, IsarError, IsarKind, IsarStep,
};
pub use proof_text::{parse_proof, serialize_partial, serialize_proof, ProofTextError, HEADER, OPEN_MARK};

use crate::syntax::Formula;

/// A goal split into its outermost universal quantifiers and the rest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalPrefix {
    pub k: usize,
    pub core: Formula,
}

impl UniversalPrefix {
    /// Puts `m` universal quantifiers in front of the core.
    pub fn put_unis(&self, m: usize) -> Formula {
        (0..m).fold(self.core.clone(), |f, _| Formula::uni(f))
    }
}

pub fn strip_unis(f: &Formula) -> UniversalPrefix {
    let mut k = 0;
    let mut core = f;
    while let Formula::Uni(body) = core {
        k += 1;
        core = body;
    }
    UniversalPrefix { k, core: core.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_deep_formula, parse_formula};

    #[test]
    fn strip() {
        let f = parse_formula("forall x. forall y. (forall u. forall z. A(z,u)) ---> A(x,y)").unwrap();
        let p = strip_unis(&f);
        assert_eq!(p.k, 2);
        assert_eq!(
            p.core,
            parse_deep_formula("Imp (Uni (Uni (Pre ''A'' [Var 0, Var 1]))) (Pre ''A'' [Var 1, Var 0])").unwrap()
        );
        assert_eq!(p.put_unis(2), f);
        assert_eq!(strip_unis(&Formula::Falsity), UniversalPrefix { k: 0, core: Formula::Falsity });
        assert_eq!(strip_unis(&Formula::uni(Formula::Falsity)), UniversalPrefix { k: 1, core: Formula::Falsity });
    }
}
