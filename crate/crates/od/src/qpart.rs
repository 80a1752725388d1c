//! Q parts: shape conditions and the derived accessors `In`, `pd_j`, `st_j`, `rg_j`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{OdError, Result};
use crate::order::{cmp, prec_eq};
use crate::term::{QPart, Term};
use crate::validity::{Check, ValidityReport};

/// The derived view of a Q part at one level `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QView {
    /// `pd_j`.
    pub pd: Term,
    /// `st_j`, when defined.
    pub st: Option<Term>,
    /// `rg_j`, when defined.
    pub rg: Option<Term>,
    /// Whether `j` is one of the stored levels.
    pub defined_in: bool,
}

/// Derives `pd_j`, `st_j`, `rg_j` of a collapse with non-empty Q part.
///
/// With `m` the first quadruple whose level is at least `j`, `pd_j` is its
/// predecessor. If the level equals `j` the pair `st_j rg_j` is read off the
/// quadruple; otherwise it is inherited from the predecessor, and is
/// undefined when the predecessor has no Q part.
pub fn derive(rho: &Term, j: u32) -> Result<QView> {
    let c = rho.as_d().ok_or_else(|| OdError::NotCollapse(rho.to_string()))?;
    if c.q.is_empty() {
        return Err(OdError::NotInDQ(rho.to_string()));
    }
    let top = c.q.quads.last().map(|q| q.j).unwrap_or(0);
    if j < 2 || j > top {
        return Err(OdError::IndexOutOfRange { j, lo: 2, hi: top });
    }
    let quad = c.q.quads.iter().find(|q| j <= q.j).expect("j bounded by the last level");
    if quad.j == j {
        return Ok(QView { pd: quad.tau.clone(), st: Some(quad.nu.clone()), rg: Some(quad.kappa.clone()), defined_in: true });
    }
    let (st, rg) = match in_pair(&quad.tau, j) {
        Some((s, r)) => (Some(s), Some(r)),
        None => (None, None),
    };
    Ok(QView { pd: quad.tau.clone(), st, rg, defined_in: false })
}

/// The level set `In(rho)`; empty for an empty Q part.
pub fn in_set(rho: &Term) -> Result<BTreeSet<u32>> {
    let c = rho.as_d().ok_or_else(|| OdError::NotCollapse(rho.to_string()))?;
    Ok(c.q.quads.iter().map(|q| q.j).collect())
}

/// `pd_i(x)`, or `None` when `x` has no Q part or `i` is out of its range.
pub fn pd_i(x: &Term, i: u32) -> Option<Term> {
    derive(x, i).ok().map(|v| v.pd)
}

/// The pair `in_i(x) = (st_i(x), rg_i(x))`, or `None` when undefined.
pub fn in_pair(x: &Term, i: u32) -> Option<(Term, Term)> {
    let v = derive(x, i).ok()?;
    match (v.st, v.rg) {
        (Some(s), Some(r)) => Some((s, r)),
        _ => None,
    }
}

/// `rg_i(x)` when defined.
pub fn rg_i(x: &Term, i: u32) -> Option<Term> {
    in_pair(x, i).map(|p| p.1)
}

/// `st_i(x)` when defined.
pub fn st_i(x: &Term, i: u32) -> Option<Term> {
    in_pair(x, i).map(|p| p.0)
}

/// Checks the four shape conditions of a Q part and the restriction on terms above `p`.
///
/// Labels: `shape.1` levels, `shape.2` ranges, `shape.3` stepping values,
/// `shape.4` predecessors.
pub fn shape_check(sigma: &Term, q: &QPart, alpha: &Term, n: u32) -> Result<ValidityReport> {
    if n < 4 {
        return Err(OdError::BadLevel(n));
    }
    if !sigma.is_r() {
        return Err(OdError::NotRegular(sigma.to_string()));
    }
    let subject = Term::d(sigma.clone(), q.clone(), alpha.clone())?;
    Ok(ValidityReport::new(subject, shape_checks(sigma, q, alpha, n)))
}

pub(crate) fn shape_checks(sigma: &Term, q: &QPart, alpha: &Term, n: u32) -> Vec<Check> {
    let mut checks = Vec::new();
    let quads = &q.quads;
    if quads.is_empty() {
        checks.push(Check::new("shape.1", false, "empty Q part"));
        return checks;
    }
    let l = quads.len() - 1;

    let mut ok = true;
    let mut detail = String::from("levels ascend from at least 2 and end at N-1");
    if quads[0].j < 2 {
        ok = false;
        detail = format!("j_0 = {} is below 2", quads[0].j);
    } else if let Some(w) = quads.windows(2).find(|w| w[0].j >= w[1].j) {
        ok = false;
        detail = format!("levels not strictly increasing at {} >= {}", w[0].j, w[1].j);
    } else if quads[l].j != n - 1 {
        ok = false;
        detail = format!("j_l must be N-1 = {}, found {}", n - 1, quads[l].j);
    }
    checks.push(Check::new("shape.1", ok, detail));

    let mut ok = true;
    let mut detail = String::from("kappa_l = p, kappa_m regular below p, sigma reaches every kappa_m");
    if !quads[l].kappa.is_pi() {
        ok = false;
        detail = format!("kappa_l must be p, found {}", quads[l].kappa);
    } else if let Some(qd) = quads[..l].iter().find(|qd| !qd.kappa.is_r() || qd.kappa.is_pi()) {
        ok = false;
        detail = format!("kappa at level {} must be regular and below p, found {}", qd.j, qd.kappa);
    } else if let Some(qd) = quads.iter().find(|qd| !prec_eq(sigma, &qd.kappa)) {
        ok = false;
        detail = format!("sigma does not reach kappa {} at level {}", qd.kappa, qd.j);
    }
    checks.push(Check::new("shape.2", ok, detail));

    let mut ok = true;
    let mut detail = String::from("stepping values bounded");
    if sigma.is_pi() && cmp(&quads[l].nu, alpha).is_gt() {
        ok = false;
        detail = format!("sigma = p requires nu_l <= body, but {} > {}", quads[l].nu, alpha);
    } else {
        for qd in &quads[..l] {
            match Term::rsucc(qd.kappa.clone()) {
                Ok(kp) if cmp(&qd.nu, &kp).is_lt() => {}
                _ => {
                    ok = false;
                    detail = format!("nu at level {} must lie below {}^+", qd.j, qd.kappa);
                    break;
                }
            }
        }
        if ok {
            let pi = Term::pi();
            let nu_l = &quads[l].nu;
            if let Some(t) = q.terms().find(|t| cmp(t, &pi).is_gt() && *t != nu_l) {
                ok = false;
                detail = format!("term {} above p differs from nu_l", t);
            }
        }
    }
    checks.push(Check::new("shape.3", ok, detail));

    let mut ok = true;
    let mut detail = String::from("tau_0 = sigma, predecessors in {p} u D^Q above sigma");
    if quads[0].tau != *sigma {
        ok = false;
        detail = format!("tau_0 must equal sigma, found {}", quads[0].tau);
    } else if let Some(qd) = quads.iter().find(|qd| !(qd.tau.is_pi() || qd.tau.is_dq())) {
        ok = false;
        detail = format!("tau at level {} must be p or in D^Q, found {}", qd.j, qd.tau);
    } else if let Some(qd) = quads.iter().find(|qd| !prec_eq(sigma, &qd.tau)) {
        ok = false;
        detail = format!("sigma does not reach tau {} at level {}", qd.tau, qd.j);
    } else if quads[l].tau.is_pi() && !sigma.is_pi() {
        ok = false;
        detail = String::from("tau_l = p requires sigma = p");
    }
    checks.push(Check::new("shape.4", ok, detail));
    checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Quad;

    fn sigma1() -> Term {
        let q = QPart::new(vec![Quad::new(Term::one(), Term::pi(), Term::pi(), 3)]);
        Term::d(Term::pi(), q, Term::one()).unwrap()
    }

    #[test]
    fn shape_examples() {
        let q = QPart::new(vec![Quad::new(Term::one(), Term::pi(), Term::pi(), 3)]);
        assert!(shape_check(&Term::pi(), &q, &Term::one(), 4).unwrap().valid);

        let bad = QPart::new(vec![Quad::new(Term::one(), Term::pi(), Term::pi(), 2)]);
        let r = shape_check(&Term::pi(), &bad, &Term::one(), 4).unwrap();
        assert!(!r.valid);
        let c = r.checks.iter().find(|c| c.label == "shape.1").unwrap();
        assert!(!c.passed && c.detail.contains("j_l must be N-1"));

        let s1 = sigma1();
        let q2 = QPart::new(vec![Quad::new(Term::nat(2), Term::pi(), s1.clone(), 3)]);
        assert!(shape_check(&s1, &q2, &Term::one(), 4).unwrap().valid);
    }

    #[test]
    fn shape_rejects_low_level() {
        assert!(matches!(shape_check(&Term::pi(), &QPart::empty(), &Term::one(), 3), Err(OdError::BadLevel(3))));
    }

    #[test]
    fn derive_examples() {
        let s1 = sigma1();
        let v = derive(&s1, 3).unwrap();
        assert_eq!(v, QView { pd: Term::pi(), st: Some(Term::one()), rg: Some(Term::pi()), defined_in: true });
        let v = derive(&s1, 2).unwrap();
        assert_eq!(v, QView { pd: Term::pi(), st: None, rg: None, defined_in: false });
        let plain = Term::d(Term::pi(), QPart::empty(), Term::one()).unwrap();
        assert!(matches!(derive(&plain, 2), Err(OdError::NotInDQ(_))));
        assert!(derive(&s1, 4).is_err());
    }

    #[test]
    fn pd2_is_subscript_for_single_top_quad() {
        let s1 = sigma1();
        let q = QPart::new(vec![Quad::new(Term::zero(), Term::pi(), s1.clone(), 3)]);
        let rho = Term::d(s1.clone(), q, Term::nat(2)).unwrap();
        assert_eq!(derive(&rho, 2).unwrap().pd, s1);
    }

    #[test]
    fn in_set_examples() {
        assert_eq!(in_set(&sigma1()).unwrap(), BTreeSet::from([3]));
        let plain = Term::d(Term::pi(), QPart::empty(), Term::one()).unwrap();
        assert!(in_set(&plain).unwrap().is_empty());
        assert!(in_set(&Term::pi()).is_err());
    }
}
