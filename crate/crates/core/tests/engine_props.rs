use nadea_core::engine::{infer_witness, ProofState, RuleRequest, Witness};
use nadea_core::kernel::{check, news, sub, Rule};
use nadea_core::syntax::{parse_formula, Formula, Term};
use nadea_core::testing::{random_closed_term, random_formula, random_step, replay_with_engine, DerivationGen};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn engine_extracts_pass_the_kernel() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for i in 0..300 {
        let d = DerivationGen::new(&mut rng).derive(&[], 4);
        let s = replay_with_engine(&d).unwrap_or_else(|| panic!("case {i}: engine refused a step"));
        assert!(s.is_complete(), "case {i}");
        let report = check(&s.extract().unwrap());
        assert!(report.ok, "case {i}: {report}");
    }
}

#[test]
fn sample_session_lines() {
    let goal = parse_formula("(forall x. R(x, x)) ---> forall x. exists y. R(x, y)").unwrap();
    let mut s = ProofState::new(goal).unwrap();
    let c = Term::constant("c'");
    let mut counts = vec![s.lines().len()];
    s.apply_rule(&RuleRequest::new(0, Rule::ImpI)).unwrap();
    counts.push(s.lines().len());
    s.apply_rule(&RuleRequest::new(1, Rule::UniI)).unwrap();
    counts.push(s.lines().len());
    s.apply_rule(&RuleRequest::new(2, Rule::ExiI).witness(c.clone())).unwrap();
    counts.push(s.lines().len());
    s.apply_rule(&RuleRequest::new(3, Rule::UniE).witness(c)).unwrap();
    counts.push(s.lines().len());
    assert_eq!(counts, vec![1, 2, 3, 4, 5]);
    assert_eq!(s.open_count(), 0);
    assert!(s.lines().iter().all(|l| l.data.applied.is_some()));
    assert!(check(&s.extract().unwrap()).ok);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn undo_restores_every_prior_state(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = DerivationGen::new(&mut rng).derive(&[], 3);
        let mut s = ProofState::new(d.goal.clone()).unwrap();
        let mut snapshots = vec![s.clone()];
        for _ in 0..40 {
            if random_step(&mut s, &mut rng) {
                snapshots.push(s.clone());
            }
        }
        while snapshots.len() > 1 {
            snapshots.pop();
            s.undo().unwrap();
            prop_assert_eq!(&s, snapshots.last().unwrap());
        }
        prop_assert!(s.undo().is_err());
    }

    #[test]
    fn frame_and_line_stability(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = DerivationGen::new(&mut rng).derive(&[], 3);
        let mut s = ProofState::new(d.goal.clone()).unwrap();
        for _ in 0..40 {
            let before = s.clone();
            if !random_step(&mut s, &mut rng) {
                prop_assert_eq!(&s, &before);
                continue;
            }
            let target = (0..before.nodes().len())
                .find(|&i| before.nodes()[i] != s.nodes()[i])
                .expect("some node changed");
            for i in 0..before.nodes().len() {
                if i != target {
                    prop_assert_eq!(&before.nodes()[i], &s.nodes()[i]);
                }
            }
            prop_assert!(before.nodes()[target].is_open());
            let old = before.lines();
            let new = s.lines();
            let cut = old.iter().position(|l| l.node == target).unwrap();
            for k in 0..=cut {
                prop_assert_eq!(old[k].node, new[k].node);
            }
        }
    }

    #[test]
    fn fresh_constants_are_new_everywhere(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = DerivationGen::new(&mut rng).derive(&[], 3);
        let mut s = ProofState::new(d.goal.clone()).unwrap();
        for _ in 0..20 {
            random_step(&mut s, &mut rng);
            let c = s.fresh_constant();
            for n in s.nodes() {
                prop_assert!(news(&c, &n.assumptions));
                prop_assert!(news(&c, std::slice::from_ref(&n.goal)));
            }
        }
    }

    #[test]
    fn inferred_witness_reproduces_instance(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let size = rng.gen_range(0..5);
        let body = random_formula(&mut rng, size, 1);
        let t = random_closed_term(&mut rng, 2);
        let instance = sub(0, &t, &body);
        match infer_witness(&body, &instance) {
            Ok(Witness::Term(w)) => prop_assert_eq!(sub(0, &w, &body), instance.clone()),
            Ok(Witness::AnyTerm) => prop_assert_eq!(sub(0, &Term::constant("zz"), &body), instance.clone()),
            Err(_) => prop_assert!(false, "no witness found for {:?}", body),
        }
        let other = Formula::con(instance.clone(), instance);
        if let Ok(Witness::Term(w)) = infer_witness(&body, &other) {
            prop_assert_eq!(sub(0, &w, &body), other);
        }
    }
}
