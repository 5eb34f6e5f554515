use super::Formula;

/// Fully parenthesized canonical text; `parse(print(f)) == f`.
pub fn print(f: &Formula) -> String {
    match f {
        Formula::Bottom | Formula::Atom(_) | Formula::Constant(_) => print_bare(f),
        _ => format!("({})", print_bare(f)),
    }
}

/// Canonical text without the outermost pair of parentheses.
pub fn print_bare(f: &Formula) -> String {
    match f {
        Formula::Bottom => "bot".to_string(),
        Formula::Atom(p) => p.clone(),
        Formula::Constant(c) => format!("#{c}"),
        Formula::And(a, b) => format!("{} & {}", print(a), print(b)),
        Formula::Implies(a, b) => format!("{} -> {}", print(a), print(b)),
        Formula::Delta(a) => format!("D {}", print(a)),
        Formula::Know(ag, a) => format!("K{{{ag}}} {}", print(a)),
        Formula::Announce(l, a) => format!("[{}]{}", print_bare(l), print(a)),
        Formula::ValEq(s, c) => format!("V({})={c}", print_bare(s)),
        Formula::ValGt(s, c) => format!("V({})>{c}", print_bare(s)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::TruthValue;
    use crate::syntax::parse;

    #[test]
    fn canonical_forms() {
        let p = Formula::atom("p");
        assert_eq!(print(&Formula::not(p.clone())), "(p -> bot)");
        assert_eq!(
            print(&Formula::val_eq(p.clone(), TruthValue::new(1, 2).unwrap())),
            "(V(p)=1/2)"
        );
        assert_eq!(
            print(&Formula::announce(
                Formula::val_gt(p.clone(), TruthValue::ZERO),
                Formula::atom("q")
            )),
            "([V(p)>0]q)"
        );
        assert_eq!(print(&parse("K{a} D #1/3").unwrap()), "(K{a} (D #1/3))");
        assert_eq!(print(&parse("V(p & q)=1").unwrap()), "(V(p & q)=1)");
    }

    #[test]
    fn reparses() {
        for s in [
            "[V(p)>1/2 & V(q)=1] K{a} (p -> [V(q)>0] D q)",
            "V(V(p)=1/2 -> q)>1/3",
            "[[V(p)=1]V(q)>0]bot",
        ] {
            let f = parse(s).unwrap();
            assert_eq!(parse(&print(&f)).unwrap(), f, "{s}");
        }
    }
}
