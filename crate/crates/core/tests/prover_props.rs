use nadea_core::prover::{prove, Budget, FeasibilityVerdict, Sequent};
use nadea_core::semantics::{find_countermodel, NoCountermodel};
use nadea_core::syntax::Formula;
use nadea_core::testing::{random_propositional, random_sequent, truth_table_valid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn as_formula(s: &Sequent) -> Formula {
    s.assumptions.iter().rev().fold(s.goal.clone(), |acc, a| Formula::imp(a.clone(), acc))
}

#[test]
fn proved_sequents_have_no_small_countermodel() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let budget = Budget::default();
    let mut proved = 0;
    for i in 0..500 {
        let s = random_sequent(&mut rng, 4);
        if prove(&s, &budget) == FeasibilityVerdict::Proved {
            proved += 1;
            let cm = find_countermodel(&as_formula(&s), 3, 100_000);
            assert!(
                matches!(cm, Err(NoCountermodel::NotFound | NoCountermodel::BudgetExhausted)),
                "case {i}: proved but falsified: {s:?} {cm:?}"
            );
        }
    }
    assert!(proved > 20, "only {proved} proved");
}

#[test]
fn propositional_completeness() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let budget = Budget::default();
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
        assert_eq!(prove(&s, &budget), FeasibilityVerdict::Proved, "{s:?}");
    }
}

#[test]
fn deterministic_and_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let small = Budget { max_depth: 2, wall_time_ms: 500 };
    let large = Budget { max_depth: 6, wall_time_ms: 500 };
    for _ in 0..200 {
        let s = random_sequent(&mut rng, 4);
        let a = prove(&s, &small);
        assert_eq!(a, prove(&s, &small));
        if a == FeasibilityVerdict::Proved {
            assert_eq!(prove(&s, &large), FeasibilityVerdict::Proved, "{s:?}");
        }
    }
}
