//! The ordinal diagram term algebra.
//!
//! Terms are immutable, reference counted and canonical: every constructor
//! normalizes sums and Veblen applications, so structural equality coincides
//! with equality of denotations. Each node caches its hash and size, which
//! keeps equality tests and hash lookups cheap on deeply shared terms.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, LazyLock};

use crate::error::{OdError, Result};
use crate::ksets::KSet;
use crate::order::cmp;

/// One quadruple `nu kappa tau j` of a Q part.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quad {
    /// The stepping value.
    pub nu: Term,
    /// The range (origin subscript).
    pub kappa: Term,
    /// The predecessor.
    pub tau: Term,
    /// The level index.
    pub j: u32,
}

impl Quad {
    /// Builds a quadruple.
    pub fn new(nu: Term, kappa: Term, tau: Term, j: u32) -> Self {
        Quad { nu, kappa, tau, j }
    }
}

/// The Q part of a collapse: a possibly empty list of quadruples.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QPart {
    /// Quadruples in stored order (ascending in `j` for well-formed parts).
    pub quads: Vec<Quad>,
}

impl QPart {
    /// The empty Q part.
    pub fn empty() -> Self {
        QPart { quads: Vec::new() }
    }

    /// Wraps a list of quadruples.
    pub fn new(quads: Vec<Quad>) -> Self {
        QPart { quads }
    }

    /// True when there are no quadruples.
    pub fn is_empty(&self) -> bool {
        self.quads.is_empty()
    }

    /// Number of quadruples.
    pub fn len(&self) -> usize {
        self.quads.len()
    }

    /// Every term occurring in the quadruples, in order `nu, kappa, tau` per quad.
    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.quads.iter().flat_map(|q| [&q.nu, &q.kappa, &q.tau])
    }
}

/// The payload of a collapse `d_sub^q body`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Collapse {
    /// The subscript, a regular diagram.
    pub sub: Term,
    /// The Q part.
    pub q: QPart,
    /// The body.
    pub body: Term,
}

/// The shape of a term node.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    /// The ordinal 0.
    Zero,
    /// The first regular diagram, written `W`.
    Omega,
    /// The top regular diagram, written `p`.
    Pi,
    /// A natural sum of at least two additively principal parts, non-increasing.
    Sum(Vec<Term>),
    /// The binary Veblen function.
    Phi(Term, Term),
    /// The next regular diagram above the base, written `x^+`.
    RSucc(Term),
    /// A collapse.
    D(Collapse),
}

#[derive(Debug)]
struct Node {
    kind: Kind,
    hash: u64,
    size: usize,
}

/// A canonical ordinal diagram.
#[derive(Clone)]
pub struct Term(Arc<Node>);

static ZERO: LazyLock<Term> = LazyLock::new(|| Term::from_kind(Kind::Zero));
static OMEGA: LazyLock<Term> = LazyLock::new(|| Term::from_kind(Kind::Omega));
static PI: LazyLock<Term> = LazyLock::new(|| Term::from_kind(Kind::Pi));
static ONE: LazyLock<Term> = LazyLock::new(|| Term::from_kind(Kind::Phi(Term::zero(), Term::zero())));

/// Membership flags for the classes P, SC and R.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ClassFlags {
    /// Additively principal.
    pub in_p: bool,
    /// Strongly critical.
    pub in_sc: bool,
    /// Regular.
    pub in_r: bool,
}

impl Term {
    fn from_kind(kind: Kind) -> Term {
        let size = match &kind {
            Kind::Zero | Kind::Omega | Kind::Pi => 1,
            Kind::Sum(parts) => parts.iter().map(Term::size).sum(),
            Kind::Phi(a, b) => 1 + a.size() + b.size(),
            Kind::RSucc(x) => 1 + x.size(),
            Kind::D(c) => {
                1 + c.sub.size()
                    + c.body.size()
                    + c.q.quads.iter().map(|q| 1 + q.nu.size() + q.kappa.size() + q.tau.size()).sum::<usize>()
            }
        };
        let mut h = DefaultHasher::new();
        kind.hash(&mut h);
        Term(Arc::new(Node { kind, hash: h.finish(), size }))
    }

    /// The ordinal 0.
    pub fn zero() -> Term {
        ZERO.clone()
    }

    /// The constant `W`.
    pub fn omega() -> Term {
        OMEGA.clone()
    }

    /// The constant `p`.
    pub fn pi() -> Term {
        PI.clone()
    }

    /// The ordinal 1, stored as `f(0,0)`.
    pub fn one() -> Term {
        ONE.clone()
    }

    /// The natural number `n` as an `n`-fold sum of ones.
    pub fn nat(n: usize) -> Term {
        mk_sum(std::iter::repeat_n(Term::one(), n))
    }

    /// The power `omega^b`, stored as `f(0,b)`.
    pub fn omega_pow(b: Term) -> Term {
        mk_phi(Term::zero(), b)
    }

    /// Canonical Veblen application.
    pub fn phi(a: Term, b: Term) -> Term {
        mk_phi(a, b)
    }

    /// Canonical natural sum.
    pub fn sum<I: IntoIterator<Item = Term>>(parts: I) -> Term {
        mk_sum(parts)
    }

    /// The next regular diagram above `x`; `x` must be regular and not `p`.
    pub fn rsucc(x: Term) -> Result<Term> {
        if x.is_pi() {
            return Err(OdError::SuccessorOfPi);
        }
        if !x.is_r() {
            return Err(OdError::NotRegular(x.to_string()));
        }
        Ok(Term::from_kind(Kind::RSucc(x)))
    }

    /// The collapse `d_sub^q body`; `sub` must be regular. Validity is not checked here.
    pub fn d(sub: Term, q: QPart, body: Term) -> Result<Term> {
        if !sub.is_r() {
            return Err(OdError::NotRegular(sub.to_string()));
        }
        Ok(Term::from_kind(Kind::D(Collapse { sub, q, body })))
    }

    /// The node shape.
    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    /// Node count used by enumeration bounds and termination arguments.
    pub fn size(&self) -> usize {
        self.0.size
    }

    /// Pointer identity.
    pub fn ptr_eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// True for `0`.
    pub fn is_zero(&self) -> bool {
        matches!(self.kind(), Kind::Zero)
    }

    /// True for `p`.
    pub fn is_pi(&self) -> bool {
        matches!(self.kind(), Kind::Pi)
    }

    /// True for `W`.
    pub fn is_omega(&self) -> bool {
        matches!(self.kind(), Kind::Omega)
    }

    /// True for strongly critical terms: `W`, `p`, successors and collapses.
    pub fn is_sc(&self) -> bool {
        matches!(self.kind(), Kind::Omega | Kind::Pi | Kind::RSucc(_) | Kind::D(_))
    }

    /// True for regular terms; coincides with strong criticality for canonical terms.
    pub fn is_r(&self) -> bool {
        self.is_sc()
    }

    /// True for additively principal terms.
    pub fn is_p(&self) -> bool {
        self.is_sc() || matches!(self.kind(), Kind::Phi(..))
    }

    /// The collapse payload, if any.
    pub fn as_d(&self) -> Option<&Collapse> {
        match self.kind() {
            Kind::D(c) => Some(c),
            _ => None,
        }
    }

    /// True for collapses with a non-empty Q part.
    pub fn is_dq(&self) -> bool {
        self.as_d().is_some_and(|c| !c.q.is_empty())
    }

    /// The subscript of a collapse.
    pub fn subscript(&self) -> Option<&Term> {
        self.as_d().map(|c| &c.sub)
    }

    /// True when no `W`, `p`, successor or collapse occurs in the term.
    pub fn is_veblen_fragment(&self) -> bool {
        match self.kind() {
            Kind::Zero => true,
            Kind::Sum(parts) => parts.iter().all(Term::is_veblen_fragment),
            Kind::Phi(a, b) => a.is_veblen_fragment() && b.is_veblen_fragment(),
            _ => false,
        }
    }

    /// Immediate subterms in a fixed order.
    pub fn children(&self) -> Vec<Term> {
        match self.kind() {
            Kind::Zero | Kind::Omega | Kind::Pi => Vec::new(),
            Kind::Sum(parts) => parts.clone(),
            Kind::Phi(a, b) => vec![a.clone(), b.clone()],
            Kind::RSucc(x) => vec![x.clone()],
            Kind::D(c) => {
                let mut v = vec![c.sub.clone()];
                v.extend(c.q.terms().cloned());
                v.push(c.body.clone());
                v
            }
        }
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        self.ptr_eq(other)
            || (self.0.hash == other.0.hash && self.0.size == other.0.size && self.0.kind == other.0.kind)
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl serde::Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Class membership of a canonical term.
pub fn classify(t: &Term) -> ClassFlags {
    let sc = t.is_sc();
    ClassFlags { in_p: t.is_p(), in_sc: sc, in_r: sc }
}

/// The body of a collapse.
pub fn body(t: &Term) -> Result<Term> {
    t.as_d().map(|c| c.body.clone()).ok_or_else(|| OdError::NoBody(t.to_string()))
}

/// The component set `{sub, body}` together with every term of the Q part.
pub fn csupport(t: &Term) -> Result<KSet> {
    let c = t.as_d().ok_or_else(|| OdError::NotCollapse(t.to_string()))?;
    let mut k = KSet::new();
    k.insert(c.sub.clone());
    k.insert(c.body.clone());
    for x in c.q.terms() {
        k.insert(x.clone());
    }
    Ok(k)
}

/// Canonical natural sum: flattens, drops zeros and sorts non-increasingly.
pub fn mk_sum<I: IntoIterator<Item = Term>>(parts: I) -> Term {
    let mut flat: Vec<Term> = Vec::new();
    for p in parts {
        match p.kind() {
            Kind::Zero => {}
            Kind::Sum(inner) => flat.extend(inner.iter().cloned()),
            _ => flat.push(p),
        }
    }
    match flat.len() {
        0 => Term::zero(),
        1 => flat.pop().unwrap_or_else(Term::zero),
        _ => {
            flat.sort_by(|a, b| cmp(b, a));
            Term::from_kind(Kind::Sum(flat))
        }
    }
}

/// Canonical Veblen application.
///
/// Fixed points are collapsed: `f(a, f(a',b'))` with `a < a'` is `f(a',b')`,
/// `f(a, s)` with `s` strongly critical and `a < s` is `s`, and `f(s, 0)` is `s`.
pub fn mk_phi(a: Term, b: Term) -> Term {
    if let Kind::Phi(a2, _) = b.kind() {
        if cmp(&a, a2).is_lt() {
            return b;
        }
    }
    if b.is_sc() && cmp(&a, &b).is_lt() {
        return b;
    }
    if a.is_sc() && b.is_zero() {
        return a;
    }
    Term::from_kind(Kind::Phi(a, b))
}

/// The walk `t, sub(t), sub(sub(t)), ...` ending at the first non-collapse.
pub fn subscript_path(t: &Term) -> Result<Vec<Term>> {
    if t.as_d().is_none() {
        return Err(OdError::NotCollapse(t.to_string()));
    }
    let mut out = vec![t.clone()];
    let mut cur = t.clone();
    while let Some(c) = cur.as_d() {
        let next = c.sub.clone();
        out.push(next.clone());
        cur = next;
    }
    Ok(out)
}

/// All collapse subterms of `t` (including `t` itself), children before parents, without repeats.
pub fn d_subterms(t: &Term) -> Vec<Term> {
    fn go(t: &Term, seen: &mut HashSet<Term>, out: &mut Vec<Term>) {
        if seen.contains(t) {
            return;
        }
        seen.insert(t.clone());
        for c in t.children() {
            go(&c, seen, out);
        }
        if t.as_d().is_some() {
            out.push(t.clone());
        }
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    go(t, &mut seen, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma1() -> Term {
        let q = QPart::new(vec![Quad::new(Term::one(), Term::pi(), Term::pi(), 3)]);
        Term::d(Term::pi(), q, Term::one()).unwrap()
    }

    #[test]
    fn classify_zero_sum_and_collapse() {
        let none = ClassFlags { in_p: false, in_sc: false, in_r: false };
        assert_eq!(classify(&Term::zero()), none);
        let all = ClassFlags { in_p: true, in_sc: true, in_r: true };
        assert_eq!(classify(&Term::d(Term::pi(), QPart::empty(), Term::one()).unwrap()), all);
        assert_eq!(classify(&mk_sum([Term::pi(), Term::omega()])), none);
        let phi = ClassFlags { in_p: true, in_sc: false, in_r: false };
        assert_eq!(classify(&Term::one()), phi);
    }

    #[test]
    fn body_projection() {
        let t = Term::d(Term::pi(), QPart::empty(), Term::one()).unwrap();
        assert_eq!(body(&t).unwrap(), Term::one());
        assert!(matches!(body(&Term::omega()), Err(OdError::NoBody(_))));
        let two = Term::nat(2);
        let t2 = Term::d(Term::omega(), QPart::empty(), two.clone()).unwrap();
        assert_eq!(body(&t2).unwrap(), two);
    }

    #[test]
    fn csupport_collects_components() {
        let t = Term::d(Term::pi(), QPart::empty(), Term::one()).unwrap();
        let k = csupport(&t).unwrap();
        assert_eq!(k.len(), 2);
        assert!(k.contains(&Term::pi()) && k.contains(&Term::one()));
        let k1 = csupport(&sigma1()).unwrap();
        assert_eq!(k1.len(), 2);
        assert!(csupport(&Term::omega()).is_err());
    }

    #[test]
    fn mk_sum_examples() {
        assert_eq!(mk_sum([Term::zero()]), Term::zero());
        assert_eq!(mk_sum(Vec::<Term>::new()), Term::zero());
        let s = mk_sum([Term::one(), Term::omega()]);
        match s.kind() {
            Kind::Sum(parts) => assert_eq!(parts, &vec![Term::omega(), Term::one()]),
            _ => panic!("expected a sum"),
        }
    }

    #[test]
    fn mk_sum_is_idempotent_on_its_parts() {
        let s = mk_sum([Term::one(), Term::pi(), Term::omega(), Term::one()]);
        let parts = match s.kind() {
            Kind::Sum(p) => p.clone(),
            _ => unreachable!(),
        };
        assert_eq!(mk_sum(parts), s);
    }

    #[test]
    fn phi_fixed_points_are_collapsed() {
        assert_eq!(mk_phi(Term::zero(), Term::omega()), Term::omega());
        assert_eq!(mk_phi(Term::omega(), Term::zero()), Term::omega());
        let eps0 = mk_phi(Term::one(), Term::zero());
        assert_eq!(mk_phi(Term::zero(), eps0.clone()), eps0);
        assert!(matches!(mk_phi(Term::pi(), Term::one()).kind(), Kind::Phi(..)));
    }

    #[test]
    fn subscript_path_walks_to_terminal() {
        let inner = Term::d(Term::pi(), QPart::empty(), Term::one()).unwrap();
        assert_eq!(subscript_path(&inner).unwrap(), vec![inner.clone(), Term::pi()]);
        let outer = Term::d(inner.clone(), QPart::empty(), Term::one()).unwrap();
        assert_eq!(subscript_path(&outer).unwrap(), vec![outer.clone(), inner, Term::pi()]);
        assert!(subscript_path(&Term::omega()).is_err());
    }

    #[test]
    fn successor_constraints() {
        assert!(matches!(Term::rsucc(Term::pi()), Err(OdError::SuccessorOfPi)));
        assert!(Term::rsucc(Term::one()).is_err());
        assert!(Term::rsucc(Term::omega()).is_ok());
        assert!(Term::d(Term::one(), QPart::empty(), Term::one()).is_err());
    }

    #[test]
    fn sizes() {
        assert_eq!(Term::zero().size(), 1);
        assert_eq!(Term::one().size(), 3);
        assert_eq!(Term::d(Term::pi(), QPart::empty(), Term::one()).unwrap().size(), 5);
        assert_eq!(sigma1().size(), 11);
    }
}
