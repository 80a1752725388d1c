//! Coefficient sets: `K`, `K_sigma`, `D_sigma`, and the body maxima `B_sigma`, `B_{>sigma}`.
//!
//! Every set here is a union of contributions gathered while walking the
//! subterm graph, so each computation runs as a worklist traversal with a
//! visited set. Shared subterms are therefore processed once.

use std::collections::HashSet;

use crate::error::{OdError, Result};
use crate::order::{cmp, prec_eq};
use crate::term::{csupport, d_subterms, Kind, Term};

/// A finite, duplicate-free set of terms in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KSet {
    elems: Vec<Term>,
}

impl KSet {
    /// The empty set.
    pub fn new() -> Self {
        KSet { elems: Vec::new() }
    }

    /// Adds `t` unless already present; returns whether it was added.
    pub fn insert(&mut self, t: Term) -> bool {
        if self.elems.contains(&t) {
            false
        } else {
            self.elems.push(t);
            true
        }
    }

    /// Membership test.
    pub fn contains(&self, t: &Term) -> bool {
        self.elems.contains(t)
    }

    /// Number of elements.
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    /// True when empty.
    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Iterates over the elements.
    pub fn iter(&self) -> impl Iterator<Item = &Term> {
        self.elems.iter()
    }

    /// The elements as a slice.
    pub fn as_slice(&self) -> &[Term] {
        &self.elems
    }

    /// The maximum under `cmp`, or `0` for the empty set.
    pub fn max_or_zero(&self) -> Term {
        max_or_zero(self.elems.iter())
    }

    /// `Y < b`: every element is below `b`.
    pub fn all_lt(&self, b: &Term) -> bool {
        self.elems.iter().all(|x| cmp(x, b).is_lt())
    }

    /// `b <= Y`: some element is at least `b`.
    pub fn some_ge(&self, b: &Term) -> bool {
        self.elems.iter().any(|x| cmp(b, x).is_le())
    }
}

impl FromIterator<Term> for KSet {
    fn from_iter<I: IntoIterator<Item = Term>>(iter: I) -> Self {
        let mut k = KSet::new();
        for t in iter {
            k.insert(t);
        }
        k
    }
}

impl IntoIterator for KSet {
    type Item = Term;
    type IntoIter = std::vec::IntoIter<Term>;
    fn into_iter(self) -> Self::IntoIter {
        self.elems.into_iter()
    }
}

/// Maximum of an iterator of terms under `cmp`, `0` when empty.
pub fn max_or_zero<'a, I: IntoIterator<Item = &'a Term>>(it: I) -> Term {
    let mut best = Term::zero();
    for t in it {
        if cmp(t, &best).is_gt() {
            best = t.clone();
        }
    }
    best
}

fn require_r(sigma: &Term) -> Result<()> {
    if sigma.is_r() {
        Ok(())
    } else {
        Err(OdError::NotRegular(sigma.to_string()))
    }
}

fn push_components(t: &Term, stack: &mut Vec<Term>) {
    match t.kind() {
        Kind::Sum(parts) => stack.extend(parts.iter().cloned()),
        Kind::Phi(a, b) => {
            stack.push(a.clone());
            stack.push(b.clone());
        }
        Kind::RSucc(x) => stack.push(x.clone()),
        _ => {}
    }
}

fn push_support(t: &Term, stack: &mut Vec<Term>) {
    if let Ok(c) = csupport(t) {
        stack.extend(c);
    }
}

/// `K alpha`: the strongly critical components of `alpha` reached through sums and Veblen applications.
pub fn k_all(alpha: &Term) -> KSet {
    let mut out = KSet::new();
    let mut seen = HashSet::new();
    let mut stack = vec![alpha.clone()];
    while let Some(x) = stack.pop() {
        if !seen.insert(x.clone()) {
            continue;
        }
        match x.kind() {
            Kind::Zero => {}
            Kind::Sum(_) | Kind::Phi(..) => push_components(&x, &mut stack),
            _ => {
                out.insert(x.clone());
            }
        }
    }
    out
}

/// `D_sigma(alpha)` for a single term.
pub fn d_set(sigma: &Term, alpha: &Term) -> Result<KSet> {
    d_set_many(sigma, std::slice::from_ref(alpha))
}

/// `D_sigma(Y)` for a finite set `Y`, the union of the pointwise values.
///
/// A successor `s^+` contributes `D_sigma(s)`.
pub fn d_set_many(sigma: &Term, alphas: &[Term]) -> Result<KSet> {
    require_r(sigma)?;
    let mut out = KSet::new();
    let mut seen = HashSet::new();
    let mut stack: Vec<Term> = alphas.to_vec();
    while let Some(x) = stack.pop() {
        if !seen.insert(x.clone()) {
            continue;
        }
        match x.kind() {
            Kind::Zero | Kind::Omega | Kind::Pi => {}
            Kind::Sum(_) | Kind::Phi(..) | Kind::RSucc(_) => push_components(&x, &mut stack),
            Kind::D(c) => match cmp(&c.sub, sigma) {
                std::cmp::Ordering::Greater => {
                    stack.push(c.sub.clone());
                    push_support(&x, &mut stack);
                }
                std::cmp::Ordering::Equal => {
                    out.insert(x.clone());
                    push_support(&x, &mut stack);
                }
                std::cmp::Ordering::Less => stack.push(c.sub.clone()),
            },
        }
    }
    Ok(out)
}

/// `B_sigma(alpha)`: the largest body in `D_sigma(alpha)`, `0` when empty.
pub fn b_at(sigma: &Term, alpha: &Term) -> Result<Term> {
    b_at_many(sigma, std::slice::from_ref(alpha))
}

/// `B_sigma(Y)` for a finite set.
pub fn b_at_many(sigma: &Term, alphas: &[Term]) -> Result<Term> {
    let ds = d_set_many(sigma, alphas)?;
    let bodies: Vec<Term> = ds.iter().filter_map(|d| d.as_d().map(|c| c.body.clone())).collect();
    Ok(max_or_zero(bodies.iter()))
}

/// `B_{>sigma}(alpha)`.
pub fn b_above(sigma: &Term, alpha: &Term) -> Result<Term> {
    b_above_many(sigma, std::slice::from_ref(alpha))
}

/// `B_{>sigma}(Y)` for a finite set.
///
/// Only subscripts that occur in `Y` can give a non-empty `D_tau`, so the
/// maximum ranges over those exceeding `sigma`, together with `p`.
pub fn b_above_many(sigma: &Term, alphas: &[Term]) -> Result<Term> {
    require_r(sigma)?;
    let mut taus: Vec<Term> = Vec::new();
    if cmp(&Term::pi(), sigma).is_gt() {
        taus.push(Term::pi());
    }
    let mut seen = HashSet::new();
    for a in alphas {
        for d in d_subterms(a) {
            if let Some(c) = d.as_d() {
                if seen.insert(c.sub.clone()) && cmp(&c.sub, sigma).is_gt() && !taus.contains(&c.sub) {
                    taus.push(c.sub.clone());
                }
            }
        }
    }
    let mut best = Term::zero();
    for tau in &taus {
        let b = b_at_many(tau, alphas)?;
        if cmp(&b, &best).is_gt() {
            best = b;
        }
    }
    Ok(best)
}

/// `K_sigma(alpha)` for a single term.
pub fn k_at(sigma: &Term, alpha: &Term) -> Result<KSet> {
    k_at_many(sigma, std::slice::from_ref(alpha))
}

/// `K_sigma(Y)` for a finite set.
///
/// For a collapse `rho` with subscript `tau`: if `sigma < tau` the value is
/// `K_sigma({tau} u c(rho))`; if `tau < sigma` and `tau` does not reach `sigma`
/// it is `K_sigma(tau)`; in the remaining cases it is `{rho} u K_sigma(c(rho))`.
/// `0`, `W`, `p` contribute nothing, and `s^+` contributes `K_sigma(s)`.
pub fn k_at_many(sigma: &Term, alphas: &[Term]) -> Result<KSet> {
    require_r(sigma)?;
    let mut out = KSet::new();
    let mut seen = HashSet::new();
    let mut stack: Vec<Term> = alphas.to_vec();
    while let Some(x) = stack.pop() {
        if !seen.insert(x.clone()) {
            continue;
        }
        match x.kind() {
            Kind::Zero | Kind::Omega | Kind::Pi => {}
            Kind::Sum(_) | Kind::Phi(..) | Kind::RSucc(_) => push_components(&x, &mut stack),
            Kind::D(c) => match cmp(sigma, &c.sub) {
                std::cmp::Ordering::Less => {
                    stack.push(c.sub.clone());
                    push_support(&x, &mut stack);
                }
                std::cmp::Ordering::Greater if !prec_eq(&c.sub, sigma) => stack.push(c.sub.clone()),
                _ => {
                    out.insert(x.clone());
                    push_support(&x, &mut stack);
                }
            },
        }
    }
    Ok(out)
}

/// `max K_sigma(alpha)`, `0` when empty.
pub fn k_max(sigma: &Term, alpha: &Term) -> Result<Term> {
    Ok(k_at(sigma, alpha)?.max_or_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{mk_sum, QPart, Quad};

    fn sigma1() -> Term {
        let q = QPart::new(vec![Quad::new(Term::one(), Term::pi(), Term::pi(), 3)]);
        Term::d(Term::pi(), q, Term::one()).unwrap()
    }

    #[test]
    fn k_all_examples() {
        assert!(k_all(&Term::zero()).is_empty());
        let k = k_all(&Term::phi(Term::omega(), Term::one()));
        assert_eq!(k.as_slice(), &[Term::omega()]);
        let k = k_all(&mk_sum([Term::pi(), Term::one()]));
        assert_eq!(k.as_slice(), &[Term::pi()]);
    }

    #[test]
    fn k_all_of_collapsed_fixed_point() {
        // f(W,0) canonicalizes to W.
        let k = k_all(&Term::phi(Term::omega(), Term::zero()));
        assert_eq!(k.as_slice(), &[Term::omega()]);
    }

    #[test]
    fn d_set_examples() {
        assert!(d_set(&Term::pi(), &Term::omega()).unwrap().is_empty());
        let s1 = sigma1();
        assert_eq!(d_set(&Term::pi(), &s1).unwrap().as_slice(), std::slice::from_ref(&s1));
        assert!(d_set(&Term::omega(), &s1).unwrap().is_empty());
        assert!(d_set(&Term::one(), &s1).is_err());
    }

    #[test]
    fn b_at_examples() {
        let s1 = sigma1();
        assert_eq!(b_at(&Term::pi(), &Term::omega()).unwrap(), Term::zero());
        assert_eq!(b_at(&Term::pi(), &s1).unwrap(), Term::one());
        assert_eq!(b_at(&Term::omega(), &s1).unwrap(), Term::zero());
    }

    #[test]
    fn b_above_examples() {
        let s1 = sigma1();
        assert_eq!(b_above(&Term::pi(), &s1).unwrap(), Term::zero());
        assert_eq!(b_above(&Term::omega(), &s1).unwrap(), Term::one());
        assert_eq!(b_above(&s1, &mk_sum([s1.clone(), s1.clone()])).unwrap(), Term::one());
    }

    #[test]
    fn k_at_examples() {
        let s1 = sigma1();
        assert!(k_at(&Term::omega(), &s1).unwrap().is_empty());
        assert_eq!(k_at(&Term::pi(), &s1).unwrap().as_slice(), std::slice::from_ref(&s1));
        assert!(k_at(&Term::pi(), &Term::zero()).unwrap().is_empty());
    }

    #[test]
    fn k_max_examples() {
        let s1 = sigma1();
        assert_eq!(k_max(&Term::pi(), &Term::zero()).unwrap(), Term::zero());
        assert_eq!(k_max(&Term::pi(), &s1).unwrap(), s1);
        assert_eq!(k_max(&Term::omega(), &s1).unwrap(), Term::zero());
    }

    #[test]
    fn set_comparison_conventions() {
        let k: KSet = [Term::omega(), Term::one()].into_iter().collect();
        assert!(k.all_lt(&Term::pi()));
        assert!(!k.all_lt(&Term::omega()));
        assert!(k.some_ge(&Term::omega()));
        assert!(!k.some_ge(&Term::pi()));
        assert_eq!(KSet::new().max_or_zero(), Term::zero());
    }
}
