//! Construction, canonical forms and coefficient sets.

mod common;

use common::{any_term, enum6, valid_term};
use od::ksets::{b_above, d_set, k_all};
use od::order::cmp;
use od::term::{classify, d_subterms, mk_sum, subscript_path, Kind, Term};
use proptest::prelude::*;

proptest! {
    #[test]
    fn mk_sum_is_idempotent(xs in prop::collection::vec(any_term(), 0..5)) {
        let s = mk_sum(xs.clone());
        let parts = match s.kind() {
            Kind::Sum(p) => p.clone(),
            _ => vec![s.clone()],
        };
        prop_assert_eq!(mk_sum(parts), s);
    }

    #[test]
    fn k_all_is_a_union_homomorphism(xs in prop::collection::vec(any_term(), 1..4)) {
        let whole: Vec<Term> = k_all(&mk_sum(xs.clone())).iter().cloned().collect();
        let mut parts: Vec<Term> = Vec::new();
        for x in &xs {
            for t in k_all(x).iter() {
                if !parts.contains(t) {
                    parts.push(t.clone());
                }
            }
        }
        prop_assert_eq!(whole.len(), parts.len());
        prop_assert!(parts.iter().all(|t| whole.contains(t)));
    }

    #[test]
    fn subscript_path_shrinks(t in valid_term()) {
        if t.as_d().is_some() {
            let path = subscript_path(&t).unwrap();
            prop_assert!(path.windows(2).all(|w| w[1].size() < w[0].size()));
        }
    }

    #[test]
    fn d_set_members_share_the_subscript(t in valid_term()) {
        for sigma in [Term::omega(), Term::pi()] {
            for x in d_set(&sigma, &t).unwrap().iter() {
                prop_assert_eq!(x.subscript(), Some(&sigma));
            }
        }
    }
}

#[test]
fn classification_nests() {
    for t in enum6() {
        let c = classify(t);
        assert!(!c.in_r || c.in_sc);
        assert!(!c.in_sc || c.in_p);
        if matches!(t.kind(), Kind::Sum(_)) {
            assert!(!c.in_p, "{}", t);
        }
    }
}

#[test]
fn b_above_vanishes_without_higher_collapses() {
    for t in enum6() {
        for sigma in [Term::omega(), Term::rsucc(Term::omega()).unwrap(), Term::pi()] {
            let higher = d_subterms(t).iter().any(|d| d.subscript().is_some_and(|s| cmp(s, &sigma).is_gt()));
            if !higher {
                assert!(b_above(&sigma, t).unwrap().is_zero(), "{} above {}", t, sigma);
            }
        }
    }
}

#[test]
fn rsucc_of_pi_is_rejected() {
    assert!(Term::rsucc(Term::pi()).is_err());
    assert!(Term::rsucc(Term::one()).is_err());
    assert!(Term::rsucc(Term::omega()).is_ok());
}
