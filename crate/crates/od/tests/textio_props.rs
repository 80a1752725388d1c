//! Parsing and printing of terms and descriptor files.

mod common;

use common::{any_term, enum6};
use od::suite::worked_example_rope;
use od::term::{QPart, Quad, Term};
use od::textio::{parse_descriptor, parse_term, print_descriptor, print_term};
use od::OdError;
use proptest::prelude::*;

proptest! {
    #[test]
    fn print_then_parse_is_identity(t in any_term()) {
        prop_assert_eq!(parse_term(&print_term(&t)).unwrap(), t);
    }

    #[test]
    fn parser_never_panics(s in "[0Wpfd()\\[\\],;+^ 1]{0,30}") {
        let _ = parse_term(&s);
    }
}

#[test]
fn enumeration_round_trips() {
    for t in enum6() {
        assert_eq!(&parse_term(&print_term(t)).unwrap(), t);
    }
}

#[test]
fn term_examples() {
    let one = Term::one();
    assert_eq!(parse_term("d[p](f(0,0))").unwrap(), Term::d(Term::pi(), QPart::empty(), one.clone()).unwrap());
    let sigma = Term::d(Term::pi(), QPart::new(vec![Quad::new(one.clone(), Term::pi(), Term::pi(), 3)]), one.clone()).unwrap();
    assert_eq!(parse_term("d[p;(f(0,0),p,p,3)](f(0,0))").unwrap(), sigma);
    assert_eq!(print_term(&sigma), "d[p;(f(0,0),p,p,3)](f(0,0))");
    assert_eq!(parse_term("f(0,0)+0").unwrap(), one);
    assert_eq!(parse_term("0+W").unwrap(), Term::omega());
    assert_eq!(parse_term(" W ^+ ").unwrap(), Term::rsucc(Term::omega()).unwrap());
}

#[test]
fn syntax_errors_carry_positions() {
    match parse_term("f(0,\n  0") {
        Err(OdError::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("{:?}", other),
    }
    let deep = "f(".repeat(400) + "0";
    assert!(parse_term(&deep).is_err());
}

#[test]
fn descriptor_examples() {
    let minimal = parse_descriptor("N: 4\nsigmas: p\n").unwrap();
    assert!(minimal.desc.indices.is_empty());
    assert!(minimal.inputs.is_none());

    let (desc, inputs) = worked_example_rope();
    let text = print_descriptor(&desc, Some(&inputs));
    let back = parse_descriptor(&text).unwrap();
    assert_eq!(back.desc, desc);
    assert_eq!(back.inputs, Some(inputs));

    let bad = "N: 4\nsigmas: p ; d[p](f(0,0))\nknots: 0\nindices: 3\n";
    match parse_descriptor(bad) {
        Err(OdError::Descriptor { line, .. }) => assert_eq!(line, 4),
        other => panic!("{:?}", other),
    }
    assert!(parse_descriptor("N: 4\n").is_err());
    assert!(parse_descriptor("N: 4\nsigmas: p\nknots: 1,0\n").is_err());
}
