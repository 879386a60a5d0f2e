use proptest::prelude::*;
use qha_core::{parse_symbol, Expr, Growth, QhaError, RadialSymbol};

/// Written in printer form, so printing the parse gives the text back.
const CORPUS: [&str; 50] = [
    "1",
    "0.5",
    "-2",
    "s",
    "s^2",
    "re",
    "im",
    "exp(-s^2)",
    "exp(-1 * s^2)",
    "s^2 * exp(-s^2)",
    "sin(s^2) * exp(-s^2)",
    "cos(s^2) * exp(-0.5 * s^2)",
    "ind(0, 1)",
    "ind(0.5, 1.5)",
    "ind(1, inf)",
    "1 - ind(0, 2)",
    "3 * s^2",
    "exp(-s^2) + 3 * s^2",
    "s^2 - 1",
    "1 - (2 - 3)",
    "1 - 2 - 3",
    "1 + 2 + 3",
    "1 + (2 + 3)",
    "2 * 3 * 4",
    "2 * (3 * 4)",
    "(1 + 2) * 3",
    "-s^2",
    "-(1)",
    "-(-3)",
    "-exp(-s^2)",
    "-(s^2 + 1)",
    "s^2 * -2",
    "re * im",
    "re * exp(-s^2)",
    "exp(-((re - 0.3) * (re - 0.3) + im * im))",
    "sin(re) * cos(im)",
    "cos(2 * s^2)",
    "sin(sin(sin(s)))",
    "exp(exp(-s^2))",
    "exp(-s^2) * exp(-s^2)",
    "0.0025 * re",
    "1e-12 * s^2",
    "1e20 * s",
    "ind(0, 1) * exp(-s^2)",
    "(ind(0, 1) + ind(1, 2)) * sin(s)",
    "3.141592653589793 * s^2",
    "exp(-3.141592653589793 * s^2)",
    "-(re - im)",
    "s - -1",
    "cos(s) - sin(s) * exp(-0.1 * s^2)",
];

fn strip(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

#[test]
fn corpus_round_trips() {
    let mut seen = std::collections::BTreeSet::new();
    for text in CORPUS {
        assert!(seen.insert(text), "duplicate corpus entry {text}");
        let e = parse_symbol(text).unwrap_or_else(|err| panic!("{text}: {err}"));
        let printed = e.to_string();
        assert_eq!(strip(&printed), strip(text), "printing {text}");
        assert_eq!(parse_symbol(&printed).unwrap(), e, "reparsing {text}");
    }
}

#[test]
fn whitespace_and_newlines_are_insignificant() {
    let a = parse_symbol("s^2*exp( -1*s^2 )").unwrap();
    let b = parse_symbol("s^2 *\n   exp(-1 * s^2)\n").unwrap();
    assert_eq!(a, b);
}

#[test]
fn pi_is_a_constant() {
    assert_eq!(parse_symbol("pi").unwrap(), Expr::Num(std::f64::consts::PI));
}

#[test]
fn errors_carry_line_and_column() {
    let err = parse_symbol("1 +\n  2 * )").unwrap_err();
    assert_eq!((err.line, err.column), (2, 7));
    let err = parse_symbol("exp(").unwrap_err();
    assert_eq!((err.line, err.column), (1, 5));
    let err = parse_symbol("cos(s)^2").unwrap_err();
    assert_eq!((err.line, err.column), (1, 7));
    for bad in ["", "s^3", "foo(s)", "1 2", "ind(1, 0)", "ind(-1, 1)", "1e400", "s $ 2", "((1)"] {
        assert!(parse_symbol(bad).is_err(), "{bad:?} should not parse");
    }
}

#[test]
fn boundedness_rules() {
    let ok = ["1", "s^2 * exp(-1*s^2)", "sin(s^2)", "ind(0, 1) * s^2", "exp(-s^2) * re * im", "cos(exp(s^2))"];
    for text in ok {
        assert!(parse_symbol(text).unwrap().check_bounded().is_ok(), "{text}");
    }
    match RadialSymbol::parse("exp(-s^2) + 3 * s^2", false) {
        Err(QhaError::UnboundedSymbol { subtree }) => assert_eq!(subtree, "3 * s^2"),
        other => panic!("{other:?}"),
    }
    assert!(RadialSymbol::parse("s^2", false).is_err());
    assert!(RadialSymbol::parse("s^2", true).is_ok());
    assert!(RadialSymbol::parse("exp(s^2)", true).is_err());
    assert!(RadialSymbol::parse("re", false).is_err());
}

#[test]
fn growth_classes() {
    let g = |t: &str| parse_symbol(t).unwrap().growth();
    assert_eq!(g("ind(0, 1)"), Growth::Compact);
    assert_eq!(g("exp(-s^2) * ind(0, 2)"), Growth::Compact);
    assert_eq!(g("3"), Growth::Bounded);
    assert_eq!(g("s^2 * s^2"), Growth::Growing { degree: 4 });
    assert_eq!(g("exp(s^2)"), Growth::Exponential);
    match g("s^2 * exp(-2 * s^2)") {
        Growth::Decaying { rate } => assert!((rate - 2.0).abs() < 1e-12),
        other => panic!("{other:?}"),
    }
    assert!(g("exp(-s^2)").is_integrable());
    assert!(!g("1").is_integrable());
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (-50.0..50.0f64).prop_map(Expr::Num),
        (0u32..1000).prop_map(|n| Expr::Num(n as f64)),
        Just(Expr::S),
        Just(Expr::S2),
        Just(Expr::Re),
        Just(Expr::Im),
        (0.0..3.0f64, 0.01..3.0f64).prop_map(|(lo, w)| Expr::Ind(lo, lo + w)),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Expr::exp),
            inner.clone().prop_map(Expr::sin),
            inner.clone().prop_map(Expr::cos),
            inner.clone().prop_map(Expr::neg),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::mul(a, b)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn print_then_parse_is_identity(e in expr()) {
        let printed = e.to_string();
        let back = parse_symbol(&printed).map_err(|err| TestCaseError::fail(format!("{printed}: {err}")))?;
        prop_assert_eq!(back, e);
    }

    #[test]
    fn parser_never_panics(text in "[-+*()^,.0-9a-z ]{0,30}") {
        let _ = parse_symbol(&text);
    }
}
