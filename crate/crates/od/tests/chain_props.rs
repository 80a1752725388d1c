//! Q-part accessors and rope synthesis on generated descriptors.

mod common;

use common::cases;
use od::chain::generate::{generate, GenConfig};
use od::chain::{in_first_occurrence, in_from_indices, in_from_rope, synth};
use od::order::cmp;
use od::qpart::{derive, in_set, rg_i};
use od::suite::worked_example_rope;
use od::term::Term;
use od::validity::check_term;
use proptest::prelude::*;

proptest! {
    #[test]
    fn in_descriptions_agree(n in 4u32..9, raw in prop::collection::vec(0u32..100, 0..9)) {
        let idx: Vec<u32> = raw.iter().map(|r| 2 + r % (n - 3)).collect();
        prop_assert_eq!(in_from_indices(n, &idx), in_first_occurrence(n, &idx));
    }
}

#[test]
fn synthesized_collapses_are_valid_and_obey_the_laws() {
    for c in cases() {
        assert!(c.report.valid, "{} {:?}", c.rho, c.report.first_failure());
        assert!(c.laws.valid, "{:?}", c.laws.first_failure());
        assert_eq!(check_term(&c.rho, c.desc.n), c.report);
    }
}

#[test]
fn top_level_facts() {
    for c in cases() {
        let n = c.desc.n;
        let ins = in_set(&c.rho).unwrap();
        assert!(ins.contains(&(n - 1)));
        assert_eq!(rg_i(&c.rho, n - 1), Some(Term::pi()));
        assert_eq!(&derive(&c.rho, 2).unwrap().pd, c.rho.subscript().unwrap());
        assert_eq!(ins, in_from_rope(&c.desc));
    }
}

#[test]
fn derive_agrees_with_in_set() {
    for c in cases() {
        let ins = in_set(&c.rho).unwrap();
        for j in 2..c.desc.n {
            assert_eq!(derive(&c.rho, j).unwrap().defined_in, ins.contains(&j));
        }
    }
}

#[test]
fn q_entries_above_pi_are_the_top_value() {
    for c in cases() {
        let q = &c.rho.as_d().unwrap().q;
        let top = q.quads.last().unwrap().nu.clone();
        for t in q.terms() {
            if cmp(t, &Term::pi()).is_gt() {
                assert_eq!(t, &top);
            }
        }
    }
}

#[test]
fn generator_covers_both_range_cases() {
    assert!(cases().iter().any(|c| c.case1));
    assert!(cases().iter().any(|c| !c.case1 && !c.inputs.st_lower.is_empty()));
}

#[test]
fn generation_and_validation_are_deterministic() {
    let a = generate(&GenConfig::new(5, 20, 99)).0;
    let b = generate(&GenConfig::new(5, 20, 99)).0;
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.rho, y.rho);
        assert_eq!(check_term(&x.rho, 5), check_term(&y.rho, 5));
    }
}

#[test]
fn worked_example_synthesis() {
    let (desc, inputs) = worked_example_rope();
    let (rho, report) = synth(&desc, &inputs).unwrap();
    assert!(report.valid);
    let v2 = derive(&rho, 2).unwrap();
    assert_eq!(v2.pd, desc.sigmas[2]);
    assert_eq!(v2.rg.as_ref(), Some(&desc.sigmas[2]));
    assert_eq!(derive(&rho, 3).unwrap().pd, desc.sigmas[1]);
}
