use nadea_core::syntax::{parse_deep_formula, parse_formula, render_formula, Formula, PrintStyle, Term};
use nadea_core::testing::{random_closed_formula, random_formula};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn closed(seed: u64, size: usize) -> Formula {
    random_closed_formula(&mut ChaCha8Rng::seed_from_u64(seed), size)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn named_round_trip(seed in any::<u64>(), size in 0usize..10) {
        let f = closed(seed, size);
        let text = render_formula(&f, PrintStyle::Named);
        prop_assert_eq!(parse_formula(&text).unwrap(), f, "{}", text);
    }

    #[test]
    fn typewriter_round_trip(seed in any::<u64>(), size in 0usize..10) {
        let f = closed(seed, size);
        let text = render_formula(&f, PrintStyle::Typewriter);
        prop_assert_eq!(parse_formula(&text).unwrap(), f, "{}", text);
    }

    #[test]
    fn deep_round_trip_open(seed in any::<u64>(), size in 0usize..10, vars in 0usize..3) {
        let f = random_formula(&mut ChaCha8Rng::seed_from_u64(seed), size, vars);
        let text = render_formula(&f, PrintStyle::DeepEmbed);
        prop_assert_eq!(parse_deep_formula(&text).unwrap(), f);
    }

    #[test]
    fn named_round_trip_open(seed in any::<u64>(), size in 0usize..8) {
        let f = random_formula(&mut ChaCha8Rng::seed_from_u64(seed), size, 2);
        let text = render_formula(&f, PrintStyle::Named);
        prop_assert_eq!(parse_formula(&text).unwrap(), f, "{}", text);
    }
}

#[test]
fn arity_clash_is_unparseable() {
    assert!(parse_formula("P(c()) & P").is_err());
    assert!(parse_formula("Q(f(c())) & Q(f(c(), d()))").is_err());
    assert!(parse_deep_formula("Con (Pre ''P'' []) (Pre ''P'' [Fun ''c'' []])").is_ok());
    let f = parse_deep_formula("Con (Pre ''P'' []) (Pre ''P'' [Fun ''c'' []])").unwrap();
    assert!(f.well_formed().is_err());
}

#[test]
fn first_paper_example() {
    let f = parse_formula("(forall x. forall y. A(x,y)) ---> (forall x. A(x,x))").unwrap();
    assert_eq!(
        f,
        parse_deep_formula("Imp (Uni (Uni (Pre ''A'' [Var 1, Var 0]))) (Uni (Pre ''A'' [Var 0, Var 0]))").unwrap()
    );
    assert_eq!(render_formula(&f, PrintStyle::Typewriter), "(!x. !y. A(x, y)) ---> (!x. A(x, x))");
    assert_eq!(parse_formula("falsity ---> falsity").unwrap(), Formula::truth());
    assert_eq!(parse_formula("A(#0)").unwrap(), Formula::pre("A", vec![Term::Var(0)]));
}
