//! Shared fixtures for the integration tests.

#![allow(dead_code)]

use std::sync::OnceLock;

use od::chain::generate::{generate, GenConfig, GeneratedCase};
use od::enumerate::{enumerate_valid, EnumConfig};
use od::term::{mk_phi, mk_sum, QPart, Term};
use proptest::prelude::*;

/// Valid terms of size at most 6 for N = 4.
pub fn enum6() -> &'static [Term] {
    static CELL: OnceLock<Vec<Term>> = OnceLock::new();
    CELL.get_or_init(|| enumerate_valid(&EnumConfig::new(4, 6)).terms)
}

/// Generated ropes for N = 4 and N = 5.
pub fn cases() -> &'static [GeneratedCase] {
    static CELL: OnceLock<Vec<GeneratedCase>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut v = generate(&GenConfig::new(4, 60, 11)).0;
        v.extend(generate(&GenConfig::new(5, 60, 12)).0);
        v
    })
}

/// Arbitrary canonical terms, not necessarily valid.
pub fn any_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just(Term::zero()), Just(Term::omega()), Just(Term::pi())];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| mk_sum([a, b])),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| mk_phi(a, b)),
            inner.clone().prop_map(|a| Term::rsucc(a.clone()).unwrap_or(a)),
            (inner.clone(), inner).prop_map(|(s, b)| {
                let s = if s.is_r() { s } else { Term::pi() };
                Term::d(s, QPart::empty(), b).expect("regular subscript")
            }),
        ]
    })
}

/// A valid term from the size-6 enumeration.
pub fn valid_term() -> impl Strategy<Value = Term> {
    (0..enum6().len()).prop_map(|k| enum6()[k].clone())
}
