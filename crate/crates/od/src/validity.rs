//! Membership in `Od(Pi_N)`: the conditions on a collapse and their recursive closure.

use serde::Serialize;

use crate::error::{OdError, Result};
use crate::ksets::{b_above, b_above_many, b_at, k_at, k_max};
use crate::order::{cmp, prec_eq_i, prec_i};
use crate::qpart::{in_pair, in_set, pd_i, rg_i, shape_checks, st_i};
use crate::term::{d_subterms, mk_sum, subscript_path, QPart, Term};

/// The outcome of one named condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    /// Condition label, for example `shape.1`, `body.bound`, `DQ.12`.
    pub label: String,
    /// Whether the condition holds.
    pub passed: bool,
    /// Human readable explanation.
    pub detail: String,
}

impl Check {
    /// Builds a check result.
    pub fn new(label: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check { label: label.to_string(), passed, detail: detail.into() }
    }
}

/// Pass/fail results of all conditions for one candidate diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    /// The diagram under test.
    pub subject: Term,
    /// Individual condition results.
    pub checks: Vec<Check>,
    /// True iff every check passed.
    pub valid: bool,
}

impl ValidityReport {
    /// Builds a report, deriving `valid` from the checks.
    pub fn new(subject: Term, checks: Vec<Check>) -> Self {
        let valid = checks.iter().all(|c| c.passed);
        ValidityReport { subject, checks, valid }
    }

    /// The first failing check, if any.
    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

/// Checks the conditions on `d_sigma^q alpha` itself, assuming its proper subterms are valid.
pub fn check_d(sigma: &Term, q: &QPart, alpha: &Term, n: u32) -> Result<ValidityReport> {
    if n < 4 {
        return Err(OdError::BadLevel(n));
    }
    if !sigma.is_r() {
        return Err(OdError::NotRegular(sigma.to_string()));
    }
    let rho = Term::d(sigma.clone(), q.clone(), alpha.clone())?;
    let mut checks = Vec::new();

    let mut support = vec![sigma.clone(), alpha.clone()];
    support.extend(q.terms().cloned());
    let bound = b_above_many(sigma, &support)?;
    let ok = cmp(&bound, alpha).is_lt();
    checks.push(Check::new("body.bound", ok, format!("B_>sigma = {} < body {}: {}", bound, alpha, ok)));

    if q.is_empty() {
        return Ok(ValidityReport::new(rho, checks));
    }
    let shape = shape_checks(sigma, q, alpha, n);
    let shape_ok = shape.iter().all(|c| c.passed);
    checks.extend(shape);
    if !shape_ok {
        return Ok(ValidityReport::new(rho, checks));
    }

    for i in in_set(&rho)? {
        checks.push(dq11(&rho, i, n));
        checks.push(dq12(&rho, i));
        checks.push(dq2(&rho, i)?);
    }
    Ok(ValidityReport::new(rho, checks))
}

fn dq11(rho: &Term, i: u32, n: u32) -> Check {
    let kappa = rg_i(rho, i).expect("i in In");
    let pd = pd_i(rho, i).expect("i in range");
    if !prec_eq_i(&pd, &kappa, i) {
        return Check::new("DQ.11", false, format!("i={}: pd_i = {} does not reach rg_i = {}", i, pd, kappa));
    }
    if i + 1 >= n {
        return Check::new("DQ.11", true, format!("i={}: pd_i reaches rg_i", i));
    }
    let pd_next = pd_i(rho, i + 1).expect("i+1 in range");
    if in_pair(&kappa, i) != in_pair(&pd_next, i) {
        return Check::new("DQ.11", false, format!("i={}: in_i(rg_i) differs from in_i(pd_(i+1)) = in_i({})", i, pd_next));
    }
    if !prec_eq_i(&kappa, &pd_next, i) {
        return Check::new("DQ.11", false, format!("i={}: rg_i = {} does not reach pd_(i+1) = {}", i, kappa, pd_next));
    }
    if pd == pd_next {
        return Check::new("DQ.11", false, format!("i={}: pd_i = pd_(i+1) = {}", i, pd));
    }
    Check::new("DQ.11", true, format!("i={}: in_i(rg_i) = in_i(pd_(i+1)), pd_i <=_i rg_i <=_i pd_(i+1), pd_i != pd_(i+1)", i))
}

fn dq12(rho: &Term, i: u32) -> Check {
    let kappa = rg_i(rho, i).expect("i in In");
    let st = st_i(rho, i).expect("i in In");
    let pd = pd_i(rho, i).expect("i in range");
    let mut notes = Vec::new();

    // 12.1: alpha_1 is the entry of the subscript path lying in D_kappa.
    if pd == kappa {
        let alpha1 = subscript_path(rho)
            .ok()
            .and_then(|path| path.into_iter().find(|t| t.subscript() == Some(&kappa)));
        match alpha1 {
            Some(a1) => {
                let bound = b_above(&kappa, &st).unwrap_or_else(|_| Term::zero());
                let b1 = a1.as_d().map(|c| c.body.clone()).unwrap_or_else(Term::zero);
                if cmp(&bound, &b1).is_lt() {
                    return Check::new(
                        "DQ.12",
                        true,
                        format!("12.1 i={}: B_>kappa(st_i) = {} < b(alpha_1) = {} with alpha_1 = {} (read with <= as subscript reachability)", i, bound, b1, a1),
                    );
                }
                notes.push(format!("12.1 fails: B_>kappa(st_i) = {} >= {}", bound, b1));
            }
            None => notes.push(String::from("12.1 fails: no alpha_1 in D_kappa on the subscript path")),
        }
    } else {
        notes.push(String::from("12.1 fails: rg_i != pd_i"));
    }

    // 12.2
    match in_pair(&pd, i) {
        Some((st_pd, rg_pd)) if rg_pd == kappa => {
            if cmp(&st, &st_pd).is_lt() {
                return Check::new("DQ.12", true, format!("12.2 i={}: rg_i(pd_i) = rg_i and st_i = {} < {}", i, st, st_pd));
            }
            notes.push(format!("12.2 fails: st_i = {} is not below st_i(pd_i) = {}", st, st_pd));
        }
        _ => notes.push(String::from("12.2 fails: rg_i(pd_i) != rg_i")),
    }

    // 12.3
    match rg_i(&pd, i) {
        Some(r) if prec_i(&r, &kappa, i) => {
            let mut ok = true;
            let mut cur = r.clone();
            while cur != kappa {
                if let Some(rt) = rg_i(&cur, i) {
                    if !prec_eq_i(&rt, &kappa, i) {
                        ok = false;
                        notes.push(format!("12.3 fails: rg_i({}) = {} does not reach kappa", cur, rt));
                        break;
                    }
                }
                match pd_i(&cur, i) {
                    Some(next) => cur = next,
                    None => break,
                }
            }
            if ok {
                let mut sigma1 = None;
                let mut cur = pd_i(&pd, i);
                while let Some(c) = cur {
                    if c == kappa {
                        break;
                    }
                    if rg_i(&c, i).as_ref() == Some(&kappa) {
                        sigma1 = Some(c);
                        break;
                    }
                    cur = pd_i(&c, i);
                }
                match sigma1.and_then(|s| st_i(&s, i).map(|v| (s, v))) {
                    Some((s1, st1)) if cmp(&st, &st1).is_lt() => {
                        return Check::new("DQ.12", true, format!("12.3 i={}: sigma_1 = {}, st_i = {} < {}", i, s1, st, st1));
                    }
                    Some((s1, st1)) => notes.push(format!("12.3 fails: st_i = {} not below st_i({}) = {}", st, s1, st1)),
                    None => notes.push(String::from("12.3 fails: no sigma_1 with rg_i(sigma_1) = kappa")),
                }
            }
        }
        _ => notes.push(String::from("12.3 fails: rg_i(pd_i) does not reach kappa")),
    }
    Check::new("DQ.12", false, format!("i={}: {}", i, notes.join("; ")))
}

/// The bound `K_kappa' st_i < rho` for every `kappa' <= rg_i`.
///
/// `K_kappa'` only changes where `kappa'` crosses a subscript occurring in
/// `st_i`, so the finite candidate set of such subscripts, `rg_i` and `W`
/// covers every value.
fn dq2(rho: &Term, i: u32) -> Result<Check> {
    let kappa = rg_i(rho, i).expect("i in In");
    let st = st_i(rho, i).expect("i in In");
    let mut cands = vec![kappa.clone(), Term::omega()];
    for d in d_subterms(&st) {
        if let Some(s) = d.subscript() {
            if cmp(s, &kappa).is_le() && !cands.contains(s) {
                cands.push(s.clone());
            }
        }
    }
    for k in cands.iter().filter(|k| cmp(k, &kappa).is_le()) {
        let ks = k_at(k, &st)?;
        if !ks.all_lt(rho) {
            let big = ks.iter().find(|x| cmp(x, rho).is_ge()).cloned().unwrap_or_else(Term::zero);
            return Ok(Check::new("DQ.2", false, format!("i={}: K_{} st_i contains {} >= rho", i, k, big)));
        }
    }
    Ok(Check::new("DQ.2", true, format!("i={}: K_kappa st_i < rho for {} candidate kappa", i, cands.len())))
}

/// Checks every collapse subterm of `t`; never errors.
///
/// The report carries the checks of `t` itself (when it is a collapse) and a
/// `subterms` check naming the first invalid proper subterm.
pub fn check_term(t: &Term, n: u32) -> ValidityReport {
    if n < 4 {
        return ValidityReport::new(t.clone(), vec![Check::new("subterms", false, format!("N must be at least 4, got {}", n))]);
    }
    let mut checks = Vec::new();
    let mut bad_sub: Option<String> = None;
    for d in d_subterms(t) {
        let c = d.as_d().expect("collapse subterm");
        let report = check_d(&c.sub, &c.q, &c.body, n);
        if &d == t {
            match report {
                Ok(r) => checks.extend(r.checks),
                Err(e) => checks.push(Check::new("subterms", false, e.to_string())),
            }
        } else if bad_sub.is_none() {
            let failure = match report {
                Ok(r) => r.first_failure().map(|f| format!("{} fails {}: {}", d, f.label, f.detail)),
                Err(e) => Some(format!("{}: {}", d, e)),
            };
            bad_sub = failure;
        }
    }
    match bad_sub {
        Some(msg) => checks.push(Check::new("subterms", false, msg)),
        None => checks.push(Check::new("subterms", true, "all proper collapse subterms valid")),
    }
    ValidityReport::new(t.clone(), checks)
}

/// The body bound `gamma = max{B_p(beta), B_>sigma({sigma, alpha})} + w^beta`.
///
/// The hypothesis `B_tau(beta) <= B_tau(alpha)` for `tau < p` is checked over
/// the subscripts occurring in `beta`; all other `tau` give `B_tau(beta) = 0`.
/// The conclusion is verified on the result.
pub fn gamma_bound(alpha: &Term, beta: &Term, sigma: &Term) -> Result<Term> {
    if !sigma.is_r() || sigma.is_pi() {
        return Err(OdError::BodyBoundHypothesis(format!("sigma = {} must be regular and below p", sigma)));
    }
    let pi = Term::pi();
    for d in d_subterms(beta) {
        let tau = d.subscript().expect("collapse");
        if cmp(tau, &pi).is_lt() {
            let bb = b_at(tau, beta)?;
            let ba = b_at(tau, alpha)?;
            if cmp(&bb, &ba).is_gt() {
                return Err(OdError::BodyBoundHypothesis(format!("B_{}(beta) = {} > B_{}(alpha) = {}", tau, bb, tau, ba)));
            }
        }
    }
    let left = b_at(&pi, beta)?;
    let right = b_above_many(sigma, &[sigma.clone(), alpha.clone()])?;
    let base = if cmp(&left, &right).is_ge() { left } else { right };
    let gamma = mk_sum([base, Term::omega_pow(beta.clone())]);
    let extended = mk_sum([gamma.clone(), k_max(sigma, alpha)?]);
    let bound = b_above_many(sigma, &[sigma.clone(), gamma.clone(), extended.clone()])?;
    if !cmp(&bound, &gamma).is_lt() {
        return Err(OdError::BoundViolated(format!("B_>sigma = {} is not below gamma = {}", bound, gamma)));
    }
    for body in [&gamma, &extended] {
        let b = b_above_many(sigma, &[sigma.clone(), body.clone()])?;
        if !cmp(&b, body).is_lt() {
            return Err(OdError::BoundViolated(format!("body.bound fails for d_{}({})", sigma, body)));
        }
    }
    Ok(gamma)
}

/// True when `rho` is a collapse below its subscript.
pub fn below_subscript(rho: &Term) -> bool {
    rho.subscript().is_some_and(|s| cmp(rho, s).is_lt())
}

/// True when every collapse subterm of `t` satisfies its conditions.
pub fn is_valid(t: &Term, n: u32) -> bool {
    check_term(t, n).valid
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
    fn check_d_sigma1_valid_via_first_branch() {
        let q = QPart::new(vec![Quad::new(Term::one(), Term::pi(), Term::pi(), 3)]);
        let r = check_d(&Term::pi(), &q, &Term::one(), 4).unwrap();
        assert!(r.valid, "{:?}", r);
        let c = r.checks.iter().find(|c| c.label == "DQ.12").unwrap();
        assert!(c.detail.starts_with("12.1"));
    }

    #[test]
    fn zero_body_fails_odmu() {
        let r = check_d(&Term::pi(), &QPart::empty(), &Term::zero(), 4).unwrap();
        assert!(!r.valid);
        assert_eq!(r.first_failure().unwrap().label, "body.bound");
    }

    #[test]
    fn second_branch_example() {
        let s1 = sigma1();
        let q = QPart::new(vec![Quad::new(Term::zero(), Term::pi(), s1.clone(), 3)]);
        let r = check_d(&s1, &q, &Term::nat(2), 4).unwrap();
        assert!(r.valid, "{:?}", r);
        let c = r.checks.iter().find(|c| c.label == "DQ.12").unwrap();
        assert!(c.detail.starts_with("12.2"));
    }

    #[test]
    fn check_d_errors() {
        assert!(matches!(check_d(&Term::pi(), &QPart::empty(), &Term::one(), 3), Err(OdError::BadLevel(3))));
        assert!(matches!(check_d(&Term::one(), &QPart::empty(), &Term::one(), 4), Err(OdError::NotRegular(_))));
    }

    #[test]
    fn check_term_examples() {
        assert!(check_term(&Term::omega(), 4).valid);
        assert!(check_term(&Term::d(Term::omega(), QPart::empty(), Term::one()).unwrap(), 4).valid);
        let q = QPart::new(vec![Quad::new(Term::one(), Term::pi(), Term::pi(), 2)]);
        let bad = Term::d(Term::pi(), q, Term::one()).unwrap();
        let r = check_term(&bad, 4);
        assert!(!r.valid);
        assert!(r.checks.iter().any(|c| c.label == "shape.1" && !c.passed));
    }

    #[test]
    fn check_term_reports_invalid_subterm() {
        let bad = Term::d(Term::pi(), QPart::empty(), Term::zero()).unwrap();
        let outer = mk_sum([bad, Term::one()]);
        let r = check_term(&outer, 4);
        assert!(!r.valid);
        assert_eq!(r.first_failure().unwrap().label, "subterms");
    }

    #[test]
    fn check_term_is_deterministic() {
        let s1 = sigma1();
        assert_eq!(check_term(&s1, 4), check_term(&s1, 4));
    }

    #[test]
    fn gamma_bound_examples() {
        let s = Term::d(Term::pi(), QPart::empty(), Term::one()).unwrap();
        // B_>s({s, 1}) = b(s) = 1, so gamma = 1 + w^0 = 2.
        assert_eq!(gamma_bound(&Term::one(), &Term::zero(), &s).unwrap(), Term::nat(2));
        let s1 = sigma1();
        let g = gamma_bound(&s1, &Term::one(), &s1).unwrap();
        assert_eq!(g, mk_sum([Term::one(), Term::omega_pow(Term::one())]));
        assert!(gamma_bound(&Term::one(), &Term::one(), &Term::pi()).is_err());
    }
}
