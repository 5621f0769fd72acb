//! Acceptance criteria, one `[PASS]`/`[FAIL]` line each.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use nadea_core::engine::{ProofState, RuleRequest};
use nadea_core::export::{parse_proof, rule_tokens, serialize_proof, to_isar_closed, to_isar_open};
use nadea_core::kernel::{check, sub, Rule};
use nadea_core::prover::{prove, Budget, FeasibilityVerdict};
use nadea_core::semantics::{eval_formula, eval_term, extend, find_countermodel};
use nadea_core::syntax::{parse_deep_formula, parse_formula, Formula, Signature, Term};
use nadea_core::testing::{
    mutations, random_closed_term, random_environment, random_formula, random_model, random_propositional,
    random_sequent, small_model_counterexample, truth_table_valid, DerivationGen,
};
use nadea_core::Sequent;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn de_bruijn_fidelity() -> Outcome {
    let cases = [
        (
            "(forall x. forall y. A(x,y)) ---> (forall x. A(x,x))",
            "Imp (Uni (Uni (Pre ''A'' [Var 1, Var 0]))) (Uni (Pre ''A'' [Var 0, Var 0]))",
        ),
        (
            "forall x. forall y. (forall u. forall z. A(z,u)) ---> A(x,y)",
            "Uni (Uni (Imp (Uni (Uni (Pre ''A'' [Var 1, Var 0]))) (Pre ''A'' [Var 1, Var 0])))",
        ),
    ];
    let mut bad = Vec::new();
    for (i, (named, deep)) in cases.iter().enumerate() {
        let got = parse_formula(named).map_err(|e| e.to_string())?;
        let want = parse_deep_formula(deep).map_err(|e| e.to_string())?;
        if got != want {
            bad.push(format!("example {}: parsed {got:?}, paper has {want:?}", i + 1));
        }
    }
    ensure(bad.is_empty(), || bad.join("; "))?;
    Ok("2/2 examples match".into())
}

fn sample_session() -> Outcome {
    let goal = parse_formula(common::SAMPLE_GOAL).map_err(|e| e.to_string())?;
    let mut s = ProofState::new(goal).map_err(|e| e.to_string())?;
    let c = Term::constant("c'");
    for req in [
        RuleRequest::new(0, Rule::ImpI),
        RuleRequest::new(1, Rule::UniI),
        RuleRequest::new(2, Rule::ExiI).witness(c.clone()),
        RuleRequest::new(3, Rule::UniE).witness(c),
    ] {
        s.apply_rule(&req).map_err(|e| e.to_string())?;
    }
    let d = s.extract().map_err(|e| e.to_string())?;
    let report = check(&d);
    ensure(report.ok, || report.to_string())?;
    let lines = s.lines();
    let labelled = lines.iter().filter(|l| l.data.applied.is_some()).count();
    ensure(lines.len() == 5 && labelled == 5 && s.open_count() == 0, || {
        format!("{} lines, {labelled} labelled, {} open", lines.len(), s.open_count())
    })?;
    Ok(format!("rules {:?}", d.rules().iter().map(|r| r.name()).collect::<Vec<_>>()))
}

fn substitution_lemma() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..500 {
        let size = rng.gen_range(0..7);
        let p = random_formula(&mut rng, size, 2);
        let t = random_closed_term(&mut rng, 2);
        let n = rng.gen_range(1..=3);
        let m = random_model(&mut rng, &Signature::default(), n);
        let e = random_environment(&mut rng, n, 3);
        let lhs = eval_formula(&e, &m, &sub(0, &t, &p)).map_err(|e| e.to_string())?;
        let rhs = eval_formula(&extend(&e, eval_term(&e, &m, &t).map_err(|e| e.to_string())?), &m, &p)
            .map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("case {i}: {p:?} with {t:?}"))?;
    }
    Ok("500/500 cases agree".into())
}

fn kernel_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut sample_rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..300 {
        let d = DerivationGen::new(&mut rng).derive(&[], 4);
        ensure(check(&d).ok && d.assumptions.is_empty(), || format!("case {i}: generator produced a bad derivation"))?;
        if let Some(m) = small_model_counterexample(&d.goal, 2, 200, 3, &mut sample_rng) {
            return Err(format!("case {i}: {:?} false in {m:?}", d.goal));
        }
    }
    Ok("300 derivations, 0 counterexamples".into())
}

fn mutation_rejection() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut rejected = BTreeSet::new();
    let mut total = 0;
    for _ in 0..200 {
        let d = DerivationGen::new(&mut rng).derive(&[], 4);
        for m in mutations(&d) {
            total += 1;
            let report = check(&m.derivation);
            let failure = report.failure.ok_or_else(|| format!("{:?} mutation of {} accepted", m.kind, m.rule))?;
            ensure(failure.path == m.path, || {
                format!("{:?} mutation of {} reported at {:?}, mutated {:?}", m.kind, m.rule, failure.path, m.path)
            })?;
            rejected.insert(m.rule);
        }
    }
    let missing: Vec<_> = Rule::ALL.iter().filter(|r| !rejected.contains(r)).collect();
    ensure(missing.is_empty(), || format!("no mutation exercised {missing:?}"))?;
    Ok(format!("14/14 rules, {total} mutations all rejected at the mutated node"))
}

fn as_formula(s: &Sequent) -> Formula {
    s.assumptions.iter().rev().fold(s.goal.clone(), |acc, a| Formula::imp(a.clone(), acc))
}

fn prover_oracle() -> Outcome {
    let budget = Budget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut proved = 0;
    for i in 0..500 {
        let s = random_sequent(&mut rng, 4);
        if prove(&s, &budget) == FeasibilityVerdict::Proved {
            proved += 1;
            if let Ok(cm) = find_countermodel(&as_formula(&s), 3, 100_000) {
                return Err(format!("case {i}: proved {s:?} but {cm:?} falsifies it"));
            }
        }
    }
    let mut valid = 0;
    while valid < 2000 {
        let n = rng.gen_range(0..=2);
        let size = rng.gen_range(1..8);
        let assumptions: Vec<Formula> = (0..n).map(|_| random_propositional(&mut rng, size / 2, 4)).collect();
        let goal = random_propositional(&mut rng, size, 4);
        if !truth_table_valid(&assumptions, &goal) {
            continue;
        }
        valid += 1;
        let s = Sequent::new(assumptions, goal);
        let v = prove(&s, &budget);
        ensure(v == FeasibilityVerdict::Proved, || format!("valid sequent {s:?} got {v:?}"))?;
    }
    Ok(format!("500 sequents ({proved} proved, none falsified); 2000/2000 valid propositional sequents proved"))
}

fn export_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..1000 {
        let depth = rng.gen_range(0..5);
        let d = DerivationGen::new(&mut rng).derive(&[], depth);
        let back = parse_proof(&serialize_proof(&d)).map_err(|e| format!("case {i}: {e}"))?;
        ensure(back == d, || format!("case {i}: round trip changed the derivation"))?;
    }
    Ok("1000/1000 identical".into())
}

fn isar_structure() -> Outcome {
    let proof = parse_proof(common::SAMPLE_PROOF).map_err(|e| e.to_string())?;
    let text = to_isar_closed(&proof).map_err(|e| e.to_string())?;
    ensure(rule_tokens(&text) == proof.rules(), || "rule tokens differ from the preorder rules".into())?;
    ensure(text == common::SAMPLE_THEORY, || "closed theorem differs from the golden file".into())?;
    let goal =
        parse_formula("forall x. forall y. (forall u. forall z. A(z,u)) ---> A(x,y)").map_err(|e| e.to_string())?;
    let mut s = ProofState::new(goal).map_err(|e| e.to_string())?;
    let steps = [
        (Rule::UniI, None),
        (Rule::UniI, None),
        (Rule::ImpI, None),
        (Rule::UniE, Some("forall z. A(z, c''())")),
        (Rule::UniE, Some("forall u. forall z. A(z,u)")),
    ];
    for (rule, operand) in steps {
        let node = s.open_sequents().first().map(|(n, _)| *n).ok_or("no open goal")?;
        let mut req = RuleRequest::new(node, rule);
        if let Some(f) = operand {
            req = req.formula(parse_formula(f).map_err(|e| e.to_string())?);
        }
        s.apply_rule(&req).map_err(|e| e.to_string())?;
    }
    let scratch = to_isar_open(&s.extract().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let corollaries = scratch.matches("\ncorollary ").count();
    ensure(corollaries == 2, || format!("{corollaries} corollaries"))?;
    Ok("rule order preserved, golden file identical, 2 corollaries".into())
}

fn service_end_to_end() -> Outcome {
    let rt = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    rt.block_on(async {
        let server = common::spawn().await;
        let (id, _) = server.create(common::SAMPLE_GOAL).await;
        for step in common::sample_steps() {
            let (status, body) = server.apply(&id, step).await;
            ensure(status == 200, || format!("apply returned {status}: {body}"))?;
        }
        let (status, _, proof) = server.get_text(&format!("/api/session/{id}/export/proof")).await;
        ensure(status == 200 && proof == common::SAMPLE_PROOF, || format!("proof export {status} differs"))?;
        let (status, _, theory) = server.get_text(&format!("/api/session/{id}/export/isar")).await;
        ensure(status == 200 && theory == common::SAMPLE_THEORY, || format!("isar export {status} differs"))?;

        let (id, _) = server.create(common::SAMPLE_GOAL).await;
        let step = json!({ "line": 1, "rule": "Imp_I", "version": 0 });
        let ((a, _), (b, _)) = tokio::join!(server.apply(&id, step.clone()), server.apply(&id, step));
        let conflicts = [a, b].iter().filter(|&&s| s == 409).count();
        let ok = [a, b].iter().filter(|&&s| s == 200).count();
        ensure(conflicts == 1 && ok == 1, || format!("concurrent applies returned {a} and {b}"))?;
        Ok("golden proof and both exports reproduced; concurrent writes gave one 409".into())
    })
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("De Bruijn fidelity of the two paper examples", de_bruijn_fidelity),
        ("Sample proof session completes and checks", sample_session),
        ("Substitution lemma, 500 cases", substitution_lemma),
        ("Kernel soundness spot-check, 300 derivations", kernel_soundness),
        ("Mutation rejection for all 14 rules", mutation_rejection),
        ("Prover soundness (500) and propositional completeness (2000)", prover_oracle),
        ("Proof text round trip, 1000 derivations", export_round_trip),
        ("Isar structure, golden file and Scratch corollaries", isar_structure),
        ("Service end-to-end and write conflict", service_end_to_end),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut passed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => {
                passed += 1;
                println!("[PASS] {name} ({secs:.2}s): {detail}");
            }
            Err(detail) => println!("[FAIL] {name} ({secs:.2}s): {detail}"),
        }
    }
    println!("{passed}/{} criteria passed", criteria.len());
}
