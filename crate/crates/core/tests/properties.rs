use std::collections::BTreeSet;

use proptest::prelude::*;

use goedel_pal::algebra::{delta, join, residuum, tnorm};
use goedel_pal::checker::gen::{FormulaGen, GenConfig};
use goedel_pal::checker::{check_equivalence, check_validity, ModelSpace, ModelSpaceParams};
use goedel_pal::syntax::print_bare;
use goedel_pal::{
    classify, desugar_value, parse, print, subformulas, translate, AgentId, Formula, KripkeModel,
};
use goedel_pal::{LanguageTag, TruthValue};

fn value() -> impl Strategy<Value = TruthValue> {
    (1u64..=12)
        .prop_flat_map(|den| (0..=den, Just(den)))
        .prop_map(|(n, d)| TruthValue::new(n, d).unwrap())
}

fn formula(depth: usize) -> impl Strategy<Value = Formula> {
    (any::<u64>(), 1..=depth)
        .prop_map(|(seed, d)| FormulaGen::new(GenConfig::standard(), seed).formula(d))
}

fn v(s: &str) -> TruthValue {
    s.parse().unwrap()
}

fn space() -> ModelSpace {
    let params = ModelSpaceParams::exhaustive(
        2,
        ["0", "1/3", "1/2", "2/3", "1"].map(v).to_vec(),
        vec![AgentId::new("a").unwrap()],
        vec!["p".into(), "q".into()],
    );
    ModelSpace::new(params).unwrap()
}

fn model() -> impl Strategy<Value = KripkeModel> {
    let s = space();
    let count = s.count();
    any::<u128>().prop_map(move |i| s.model(i % count))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn residuation(a in value(), b in value(), c in value()) {
        prop_assert_eq!(tnorm(&a, &c) <= b, c <= residuum(&a, &b));
    }

    #[test]
    fn tnorm_laws(a in value(), b in value(), c in value()) {
        prop_assert_eq!(tnorm(&a, &b), tnorm(&b, &a));
        prop_assert_eq!(tnorm(&a, &tnorm(&b, &c)), tnorm(&tnorm(&a, &b), &c));
        prop_assert_eq!(tnorm(&a, &TruthValue::ONE), a.clone());
        prop_assert_eq!(tnorm(&a, &a), a);
    }

    #[test]
    fn join_is_definable(a in value(), b in value()) {
        let left = residuum(&residuum(&a, &b), &b);
        let right = residuum(&residuum(&b, &a), &a);
        prop_assert_eq!(tnorm(&left, &right), join(&a, &b));
    }

    #[test]
    fn delta_is_boolean(a in value()) {
        let d = delta(&a);
        prop_assert!(d.is_zero() || d.is_one());
        prop_assert_eq!(delta(&d), d.clone());
        prop_assert!(d <= a);
    }

    #[test]
    fn print_parse_round_trip(f in formula(6)) {
        prop_assert_eq!(parse(&print(&f)).unwrap(), f.clone());
        prop_assert_eq!(parse(&print_bare(&f)).unwrap(), f);
    }

    #[test]
    fn subformulas_are_closed(f in formula(5)) {
        let subs = subformulas(&f);
        prop_assert!(subs.contains(&f));
        for g in &subs {
            let inner = subformulas(g);
            prop_assert!(inner.is_subset(&subs));
            prop_assert!(inner.len() <= subs.len());
        }
    }

    #[test]
    fn languages_nest(f in formula(5)) {
        let tags = classify(&f);
        let implies = |a: LanguageTag, b: LanguageTag| !tags.contains(&a) || tags.contains(&b);
        prop_assert!(implies(LanguageTag::LangG, LanguageTag::LangKDeltaQ));
        prop_assert!(implies(LanguageTag::LangG, LanguageTag::LangFPA));
        prop_assert!(implies(LanguageTag::LangKDeltaQ, LanguageTag::LangFPADeltaQ));
        prop_assert!(implies(LanguageTag::LangFPA, LanguageTag::LangFPADeltaQ));
        prop_assert!(tags.contains(&LanguageTag::LangFPADeltaQ));
    }

    #[test]
    fn desugaring_is_idempotent(f in formula(5)) {
        let once = desugar_value(&f);
        prop_assert_eq!(desugar_value(&once), once.clone());
        prop_assert!(!once.has_value_formula());
    }

    #[test]
    fn translation_preserves_values(f in formula(4), m in model()) {
        let t = translate(&f);
        prop_assert!(classify(&t).contains(&LanguageTag::LangKDeltaQ));
        prop_assert_eq!(m.evaluate_all(&f).unwrap(), m.evaluate_all(&t).unwrap());
    }

    #[test]
    fn disjunction_is_join(f in formula(3), g in formula(3), m in model()) {
        let or = m.evaluate_all(&Formula::or(f.clone(), g.clone())).unwrap();
        let (a, b) = (m.evaluate_all(&f).unwrap(), m.evaluate_all(&g).unwrap());
        let expected: Vec<_> = a.iter().zip(&b).map(|(x, y)| join(x, y)).collect();
        prop_assert_eq!(or, expected);
    }

    #[test]
    fn announcement_of_top_is_identity(f in formula(4), m in model()) {
        let a = Formula::announce(Formula::val_eq(Formula::top(), TruthValue::ONE), f.clone());
        prop_assert_eq!(m.evaluate_all(&a).unwrap(), m.evaluate_all(&f).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn witnesses_reevaluate(f in formula(3)) {
        let params = space().params().clone();
        if let Some(w) = check_validity(&f, &params).unwrap().witness() {
            let value = w.model.evaluate(&w.world, &f).unwrap();
            prop_assert_eq!(&value, &w.value);
            prop_assert!(!value.is_one());
        }
    }

    #[test]
    fn equivalence_is_symmetric(f in formula(3), g in formula(3)) {
        let params = space().params().clone();
        let fg = check_equivalence(&f, &g, &params).unwrap();
        let gf = check_equivalence(&g, &f, &params).unwrap();
        prop_assert_eq!(fg.is_valid(), gf.is_valid());
        prop_assert!(check_equivalence(&f, &f, &params).unwrap().is_valid());
        if let Some(w) = fg.witness() {
            let a = w.model.evaluate(&w.world, &f).unwrap();
            let b = w.model.evaluate(&w.world, &g).unwrap();
            prop_assert_ne!(a, b);
        }
    }
}

#[test]
fn atoms_and_agents_collected() {
    let f = parse("[V(p)>0] K{b} (q -> D r)").unwrap();
    assert_eq!(
        f.atoms(),
        BTreeSet::from(["p".to_string(), "q".into(), "r".into()])
    );
    assert_eq!(f.agents().len(), 1);
}
