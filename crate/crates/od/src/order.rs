//! Total comparison of canonical diagrams and the reachability relations `≺`, `≺_i`.
//!
//! Sums compare as non-increasing lists of principal parts, Veblen terms by
//! the usual Veblen rule, and a Veblen term lies below a strongly critical
//! atom exactly when both of its arguments do.
//!
//! Strongly critical atoms (`W`, `p`, successors, collapses) are placed in a
//! tree rooted at `p`. Every atom has a path of steps from the root: `W` is a
//! distinguished first child of `p`, a collapse is a child of its subscript,
//! and a successor `x^+` occupies the slot of `x` with a successor count one
//! higher. An ancestor is greater than all of its descendants, so every
//! collapse lies below its subscript. At the first position where two paths
//! differ, the `W` step precedes collapse steps, equal nodes compare by
//! successor count, and two distinct collapses with a common subscript are
//! compared by the sibling rule in [`sibling_cmp`].

use std::cmp::Ordering;

use crate::error::{OdError, Result};
use crate::ksets::k_at_many;
use crate::qpart::pd_i;
use crate::term::{csupport, Kind, Term};
use crate::validity::check_term;

/// Compares two canonical terms.
pub fn cmp(a: &Term, b: &Term) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    match (a.kind(), b.kind()) {
        (Kind::Zero, _) => Ordering::Less,
        (_, Kind::Zero) => Ordering::Greater,
        (Kind::Sum(xs), Kind::Sum(ys)) => {
            for (x, y) in xs.iter().zip(ys.iter()) {
                let c = cmp(x, y);
                if c != Ordering::Equal {
                    return c;
                }
            }
            xs.len().cmp(&ys.len())
        }
        (Kind::Sum(xs), _) => {
            if cmp(&xs[0], b).is_lt() {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
        (_, Kind::Sum(_)) => cmp(b, a).reverse(),
        (Kind::Phi(a1, b1), Kind::Phi(a2, b2)) => match cmp(a1, a2) {
            Ordering::Less => {
                if cmp(b1, b).is_lt() {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
            Ordering::Equal => cmp(b1, b2),
            Ordering::Greater => {
                if cmp(a, b2).is_le() {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        },
        (Kind::Phi(x, y), _) => {
            if cmp(x, b).is_lt() && cmp(y, b).is_lt() {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
        (_, Kind::Phi(..)) => cmp(b, a).reverse(),
        _ => atom_cmp(a, b),
    }
}

/// Like [`cmp`], but first checks both arguments for validity at level `n`.
pub fn cmp_checked(a: &Term, b: &Term, n: u32) -> Result<Ordering> {
    for t in [a, b] {
        if !check_term(t, n).valid {
            return Err(OdError::InvalidDiagram(t.to_string()));
        }
    }
    Ok(cmp(a, b))
}

#[derive(Clone, Debug)]
enum StepNode {
    Omega,
    D(Term),
}

#[derive(Clone, Debug)]
struct Step {
    node: StepNode,
    succ: u32,
}

fn tree_path(t: &Term) -> Vec<Step> {
    match t.kind() {
        Kind::Pi => Vec::new(),
        Kind::Omega => vec![Step { node: StepNode::Omega, succ: 0 }],
        Kind::RSucc(x) => {
            let mut p = tree_path(x);
            if let Some(last) = p.last_mut() {
                last.succ += 1;
            }
            p
        }
        Kind::D(c) => {
            let mut p = tree_path(&c.sub);
            p.push(Step { node: StepNode::D(t.clone()), succ: 0 });
            p
        }
        _ => Vec::new(),
    }
}

fn atom_cmp(a: &Term, b: &Term) -> Ordering {
    let pa = tree_path(a);
    let pb = tree_path(b);
    for (s, t) in pa.iter().zip(pb.iter()) {
        match (&s.node, &t.node) {
            (StepNode::Omega, StepNode::Omega) => {
                if s.succ != t.succ {
                    return s.succ.cmp(&t.succ);
                }
            }
            (StepNode::Omega, StepNode::D(_)) => return Ordering::Less,
            (StepNode::D(_), StepNode::Omega) => return Ordering::Greater,
            (StepNode::D(x), StepNode::D(y)) => {
                if x == y {
                    if s.succ != t.succ {
                        return s.succ.cmp(&t.succ);
                    }
                } else {
                    return sibling_cmp(x, y);
                }
            }
        }
    }
    // One path is a prefix of the other: the ancestor is greater.
    pb.len().cmp(&pa.len())
}

/// The flattened tie-break key `(body, nu_0, kappa_0, tau_0, j_0, ...)` of a collapse.
enum KeyItem<'a> {
    T(&'a Term),
    J(u32),
}

fn m_key(t: &Term) -> Vec<KeyItem<'_>> {
    let c = t.as_d().expect("collapse");
    let mut v = vec![KeyItem::T(&c.body)];
    for q in &c.q.quads {
        v.push(KeyItem::T(&q.nu));
        v.push(KeyItem::T(&q.kappa));
        v.push(KeyItem::T(&q.tau));
        v.push(KeyItem::J(q.j));
    }
    v
}

fn m_cmp(a: &Term, b: &Term) -> Ordering {
    let ka = m_key(a);
    let kb = m_key(b);
    for (x, y) in ka.iter().zip(kb.iter()) {
        let c = match (x, y) {
            (KeyItem::T(s), KeyItem::T(t)) => cmp(s, t),
            (KeyItem::J(s), KeyItem::J(t)) => s.cmp(t),
            (KeyItem::T(_), KeyItem::J(_)) => Ordering::Greater,
            (KeyItem::J(_), KeyItem::T(_)) => Ordering::Less,
        };
        if c != Ordering::Equal {
            return c;
        }
    }
    ka.len().cmp(&kb.len())
}

/// Compares two distinct collapses sharing the subscript `sigma`.
///
/// With `m` the tie-break key: `rho1 < rho2` iff either `m(rho1) < m(rho2)` and
/// `K_sigma c(rho1) < rho2`, or `m(rho1) > m(rho2)` and `rho1 <= K_sigma c(rho2)`.
fn sibling_cmp(r1: &Term, r2: &Term) -> Ordering {
    let sigma = &r1.as_d().expect("collapse").sub;
    let k_of = |r: &Term| {
        let c = csupport(r).expect("collapse");
        k_at_many(sigma, c.as_slice()).expect("regular subscript")
    };
    if m_cmp(r1, r2).is_lt() {
        if k_of(r1).all_lt(r2) {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    } else if k_of(r2).some_ge(r1) {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// `a ≺ b`: `b` is reached from `a` by repeatedly taking collapse subscripts.
pub fn prec(a: &Term, b: &Term) -> bool {
    let mut cur = a.clone();
    while let Some(c) = cur.as_d() {
        let next = c.sub.clone();
        if &next == b {
            return true;
        }
        cur = next;
    }
    false
}

/// `a ≼ b`: equality or `a ≺ b`.
pub fn prec_eq(a: &Term, b: &Term) -> bool {
    a == b || prec(a, b)
}

/// The chain `pd_i(s), pd_i(pd_i(s)), ...` until `pd_i` is undefined.
pub fn pd_chain(sigma: &Term, i: u32) -> Vec<Term> {
    let mut out = Vec::new();
    let mut cur = sigma.clone();
    while let Some(next) = pd_i(&cur, i) {
        out.push(next.clone());
        cur = next;
    }
    out
}

/// `a ≺_i b`: `b` occurs on the `i`-predecessor chain of `a`.
pub fn prec_i(a: &Term, b: &Term, i: u32) -> bool {
    let mut cur = a.clone();
    while let Some(next) = pd_i(&cur, i) {
        if &next == b {
            return true;
        }
        cur = next;
    }
    false
}

/// `a ≼_i b`: equality or `a ≺_i b`.
pub fn prec_eq_i(a: &Term, b: &Term, i: u32) -> bool {
    a == b || prec_i(a, b, i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{mk_sum, QPart, Quad};

    fn sigma1() -> Term {
        let q = QPart::new(vec![Quad::new(Term::one(), Term::pi(), Term::pi(), 3)]);
        Term::d(Term::pi(), q, Term::one()).unwrap()
    }

    fn tau1() -> Term {
        let s1 = sigma1();
        let q = QPart::new(vec![Quad::new(Term::zero(), Term::pi(), s1.clone(), 3)]);
        Term::d(s1, q, Term::nat(2)).unwrap()
    }

    #[test]
    fn collapse_below_subscript() {
        let d = Term::d(Term::pi(), QPart::empty(), Term::one()).unwrap();
        assert_eq!(cmp(&d, &Term::pi()), Ordering::Less);
        assert_eq!(cmp(&sigma1(), &Term::pi()), Ordering::Less);
        assert_eq!(cmp(&tau1(), &sigma1()), Ordering::Less);
    }

    #[test]
    fn basic_examples() {
        assert_eq!(cmp(&Term::zero(), &Term::omega()), Ordering::Less);
        assert_eq!(cmp(&Term::one(), &Term::nat(2)), Ordering::Less);
        assert_eq!(cmp(&Term::omega(), &Term::pi()), Ordering::Less);
    }

    #[test]
    fn regular_layout() {
        let w = Term::omega();
        let wp = Term::rsucc(w.clone()).unwrap();
        let dw = Term::d(w.clone(), QPart::empty(), Term::one()).unwrap();
        let dwp = Term::d(wp.clone(), QPart::empty(), Term::one()).unwrap();
        let dp = Term::d(Term::pi(), QPart::empty(), Term::one()).unwrap();
        let chain = [dw, w, dwp, wp, dp, Term::pi()];
        for x in 0..chain.len() {
            for y in 0..chain.len() {
                assert_eq!(cmp(&chain[x], &chain[y]), x.cmp(&y), "{} vs {}", chain[x], chain[y]);
            }
        }
    }

    #[test]
    fn siblings_order_by_body() {
        let d1 = Term::d(Term::pi(), QPart::empty(), Term::one()).unwrap();
        let d2 = Term::d(Term::pi(), QPart::empty(), Term::nat(2)).unwrap();
        assert_eq!(cmp(&d1, &d2), Ordering::Less);
        assert_eq!(cmp(&d2, &d1), Ordering::Greater);
    }

    #[test]
    fn sums_against_principal() {
        let s = mk_sum([Term::pi(), Term::omega()]);
        assert_eq!(cmp(&s, &Term::pi()), Ordering::Greater);
        assert_eq!(cmp(&mk_sum([Term::omega(), Term::omega()]), &Term::pi()), Ordering::Less);
    }

    #[test]
    fn prec_examples() {
        let s1 = sigma1();
        let t1 = tau1();
        assert!(prec(&s1, &Term::pi()));
        assert!(!prec(&Term::pi(), &s1));
        assert!(prec(&t1, &Term::pi()));
    }

    #[test]
    fn pd_chain_examples() {
        let s1 = sigma1();
        assert_eq!(pd_chain(&s1, 3), vec![Term::pi()]);
        assert_eq!(pd_chain(&tau1(), 3), vec![s1.clone(), Term::pi()]);
        let d = Term::d(Term::omega(), QPart::empty(), Term::one()).unwrap();
        assert!(pd_chain(&d, 3).is_empty());
        assert!(prec_i(&tau1(), &Term::pi(), 3));
        assert!(!prec_i(&s1, &s1, 3));
    }
}
