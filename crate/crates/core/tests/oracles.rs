//! Hand-computed values, independent of the library's own tables.

use goedel_pal::calculus::SchemaDb;
use goedel_pal::{complexity, parse, KripkeModel, TruthValue};

fn v(s: &str) -> TruthValue {
    s.parse().unwrap()
}

const ONE_WORLD: &str = r#"{ "worlds": ["w1"], "agents": ["a"],
  "valuation": { "w1": { "p": "1/2" } },
  "access": { "a": [["w1", "w1", "1/2"]] } }"#;

#[test]
fn delta_knowledge_does_not_distribute() {
    let m = KripkeModel::from_json(ONE_WORLD).unwrap();
    // K p = (1/2 => 1/2) = 1, so D K p = 1; D p = 0 and K D p = (1/2 => 0) = 0.
    assert_eq!(
        m.evaluate("w1", &parse("K{a} p").unwrap()).unwrap(),
        TruthValue::ONE
    );
    assert_eq!(
        m.evaluate("w1", &parse("K{a} D p").unwrap()).unwrap(),
        TruthValue::ZERO
    );
    assert_eq!(
        m.evaluate("w1", &parse("D K{a} p -> K{a} D p").unwrap())
            .unwrap(),
        TruthValue::ZERO
    );
    // the converse holds here
    assert_eq!(
        m.evaluate("w1", &parse("K{a} D p -> D K{a} p").unwrap())
            .unwrap(),
        TruthValue::ONE
    );
    assert!(SchemaDb::standard().get("KD").unwrap().is_conjectural());
}

#[test]
fn hand_evaluations() {
    let m = KripkeModel::from_json(ONE_WORLD).unwrap();
    let cases = [
        ("p -> #1/3", "1/3"),
        ("#1/3 -> p", "1"),
        ("~p", "0"),
        ("~~p", "1"),
        ("p | ~p", "1/2"),
        ("V(p)=1/2", "1"),
        ("V(p)>1/2", "0"),
        ("[V(p)>1/2] bot", "1"),
        ("[V(p)=1/2] K{a} p", "1"),
        ("K{a} #1/3", "1/3"),
    ];
    for (f, expected) in cases {
        assert_eq!(
            m.evaluate("w1", &parse(f).unwrap()).unwrap(),
            v(expected),
            "{f}"
        );
    }
}

#[test]
fn hand_complexities() {
    // atoms 1; binary 1 + max; unary 1 + c; [l]f = (4 + c(l)) * c(f)
    let cases = [
        ("p", 1),
        ("p -> q", 2),
        ("K{a} D p", 3),
        ("[D p] q", 6),
        ("[D p] (q & r)", 12),
        ("[D p][D q] r", 36),
        // V(p)>1/2 stands for (D (p -> #1/2)) -> bot
        ("[V(p)>1/2] q", 8),
    ];
    for (f, expected) in cases {
        assert_eq!(complexity(&parse(f).unwrap()), expected, "{f}");
    }
}
