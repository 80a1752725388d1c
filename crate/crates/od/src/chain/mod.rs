//! Ropes, knots and Q-part synthesis.
//!
//! A rope descriptor lists subscripts `sigma_0, ..., sigma_n` (each
//! `sigma_{p+1}` a collapse with subscript `sigma_p`), knotting numbers
//! `n_0 < ... < n_l = n-1` and knot indices `i_0, ..., i_{l-1}`. From these
//! data the level set, predecessors and ranges of the collapse to be built
//! are determined, and [`synth`] assembles its Q part.

pub mod generate;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{OdError, Result};
use crate::order::{prec_eq_i, prec_i};
use crate::qpart::{in_pair, in_set, rg_i};
use crate::term::{QPart, Quad, Term};
use crate::validity::{check_term, Check, ValidityReport};

/// An abstract rope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RopeDescriptor {
    /// The level parameter N.
    pub n: u32,
    /// `sigma_0, ..., sigma_n`.
    pub sigmas: Vec<Term>,
    /// Knotting numbers `n_0 < ... < n_l = n-1`; empty only for the one-element rope `[sigma_0]`.
    pub knots: Vec<usize>,
    /// Knot indices `i_0, ..., i_{l-1}`.
    pub indices: Vec<u32>,
}

/// Caller-supplied values used by [`synth`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SynthInputs {
    /// The body of the collapse.
    pub body: Term,
    /// `st_{N-1}`.
    pub st_top: Term,
    /// Bodies `alpha_i` giving `st_i = d_{kappa^+} alpha_i` for `i < N-1`.
    pub st_lower: BTreeMap<u32, Term>,
}

impl RopeDescriptor {
    /// Builds a descriptor and checks its structure.
    pub fn new(n: u32, sigmas: Vec<Term>, knots: Vec<usize>, indices: Vec<u32>) -> Result<Self> {
        let d = RopeDescriptor { n, sigmas, knots, indices };
        d.validate()?;
        Ok(d)
    }

    /// The rope length `n` (index of the last subscript).
    pub fn depth(&self) -> usize {
        self.sigmas.len() - 1
    }

    /// The number `l` of knots, that is the number of knot indices.
    pub fn knot_count(&self) -> usize {
        self.indices.len()
    }

    /// Structural checks: counts, monotonicity, index bounds and subscript links.
    pub fn validate(&self) -> Result<()> {
        if self.n < 4 {
            return Err(OdError::BadLevel(self.n));
        }
        if self.sigmas.is_empty() {
            return Err(OdError::BadRope(String::from("no subscripts")));
        }
        let depth = self.depth();
        if depth == 0 {
            if !self.knots.is_empty() || !self.indices.is_empty() {
                return Err(OdError::BadRope(String::from("a one-element rope has no knots")));
            }
            return Ok(());
        }
        if self.knots.is_empty() {
            return Err(OdError::BadRope(String::from("knot numbers must end with n-1")));
        }
        if self.knots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(OdError::BadRope(String::from("knot numbers must be strictly increasing")));
        }
        if *self.knots.last().expect("non-empty") != depth - 1 {
            return Err(OdError::BadRope(format!("last knot number must be n-1 = {}", depth - 1)));
        }
        if self.indices.len() + 1 != self.knots.len() {
            return Err(OdError::BadRope(format!("expected {} knot indices, found {}", self.knots.len() - 1, self.indices.len())));
        }
        if let Some(i) = self.indices.iter().find(|&&i| i < 2 || i + 2 > self.n) {
            return Err(OdError::IndexOutOfRange { j: *i, lo: 2, hi: self.n - 2 });
        }
        if !self.sigmas[0].is_r() {
            return Err(OdError::NotRegular(self.sigmas[0].to_string()));
        }
        for p in 0..depth {
            if self.sigmas[p + 1].subscript() != Some(&self.sigmas[p]) {
                return Err(OdError::BadRope(format!("sigma_{} is not a collapse with subscript sigma_{}", p + 1, p)));
            }
        }
        Ok(())
    }

    fn check_level(&self, i: u32) -> Result<()> {
        if i < 2 || i >= self.n {
            return Err(OdError::IndexOutOfRange { j: i, lo: 2, hi: self.n - 1 });
        }
        Ok(())
    }

    fn sigma_index(&self, t: &Term) -> Option<usize> {
        self.sigmas.iter().position(|s| s == t)
    }
}

/// `m(i)`: the largest `m <= l` with `i <= i_p` for every `p < m`.
pub fn m_index(desc: &RopeDescriptor, i: u32) -> Result<usize> {
    desc.check_level(i)?;
    Ok(m_of(&desc.indices, i))
}

fn m_of(indices: &[u32], i: u32) -> usize {
    indices.iter().position(|&ip| ip < i).unwrap_or(indices.len())
}

/// `In` of the collapse described by the rope.
pub fn in_from_rope(desc: &RopeDescriptor) -> BTreeSet<u32> {
    in_from_indices(desc.n, &desc.indices)
}

/// `{N-1} u {i : i_p = i for some p < m(i)}`.
pub fn in_from_indices(n: u32, indices: &[u32]) -> BTreeSet<u32> {
    let mut out = BTreeSet::from([n - 1]);
    for i in 2..n {
        if indices[..m_of(indices, i)].contains(&i) {
            out.insert(i);
        }
    }
    out
}

/// `{N-1} u {i_m : i_p > i_m for every p < m}`: the strictly decreasing first occurrences.
pub fn in_first_occurrence(n: u32, indices: &[u32]) -> BTreeSet<u32> {
    let mut out = BTreeSet::from([n - 1]);
    let mut low = u32::MAX;
    for &i in indices {
        if i < low {
            out.insert(i);
            low = i;
        }
    }
    out
}

/// `pd_i = sigma_{n_{m(i)}+1}`; the root for a one-element rope.
pub fn pd_from_rope(desc: &RopeDescriptor, i: u32) -> Result<Term> {
    let m = m_index(desc, i)?;
    if desc.knots.is_empty() {
        return Ok(desc.sigmas[0].clone());
    }
    Ok(desc.sigmas[desc.knots[m] + 1].clone())
}

/// `rg_i` for `i` in `In` below `N-1`.
///
/// Case 1 takes the least `q` in `(n_{m(i+1)}, n_{m(i)}]` for which some
/// `p` in `[q, n_{m(i)}]` has `pd_i <=_i sigma_{p+1}` and
/// `rg_i(sigma_{p+1}) = sigma_q`; otherwise (Case 2) `rg_i = pd_i`.
pub fn rg_from_rope(desc: &RopeDescriptor, i: u32) -> Result<Term> {
    desc.check_level(i)?;
    if i == desc.n - 1 || !in_from_rope(desc).contains(&i) {
        return Err(OdError::NotInIn(i));
    }
    Ok(rg_case(desc, i)?.0)
}

/// `rg_i` together with the `q` of Case 1, or `None` for Case 2.
pub fn rg_case(desc: &RopeDescriptor, i: u32) -> Result<(Term, Option<usize>)> {
    let pd = pd_from_rope(desc, i)?;
    let top = desc.knots[m_index(desc, i)?];
    let low = desc.knots[m_index(desc, i + 1)?];
    for q in low + 1..=top {
        for p in q..=top {
            let s = &desc.sigmas[p + 1];
            if prec_eq_i(&pd, s, i) && rg_i(s, i).as_ref() == Some(&desc.sigmas[q]) {
                return Ok((desc.sigmas[q].clone(), Some(q)));
            }
        }
    }
    Ok((pd, None))
}

/// `m(i+1)`, the knot level of the resolvent of a level-`i+1` rule.
pub fn resolvent_level(desc: &RopeDescriptor, i: u32) -> Result<usize> {
    if i < 1 || i + 1 >= desc.n {
        return Err(OdError::IndexOutOfRange { j: i, lo: 1, hi: desc.n - 2 });
    }
    m_index(desc, i + 1)
}

/// Builds `rho = d_{sigma_n}^q body` and checks it.
///
/// Quadruples ascend in `j` over `In`: the top one is `st_top p pd_{N-1} N-1`,
/// a lower one is `d_{rg_i^+}(alpha_i) rg_i pd_i i`.
pub fn synth(desc: &RopeDescriptor, inputs: &SynthInputs) -> Result<(Term, ValidityReport)> {
    desc.validate()?;
    if !desc.sigmas[0].is_pi() {
        return Err(OdError::RootNotPi(desc.sigmas[0].to_string()));
    }
    let mut quads = Vec::new();
    for i in in_from_rope(desc) {
        let pd = pd_from_rope(desc, i)?;
        if i == desc.n - 1 {
            quads.push(Quad::new(inputs.st_top.clone(), Term::pi(), pd, i));
        } else {
            let rg = rg_from_rope(desc, i)?;
            let alpha = inputs.st_lower.get(&i).ok_or(OdError::MissingSt(i))?;
            let st = Term::d(Term::rsucc(rg.clone())?, QPart::empty(), alpha.clone())?;
            quads.push(Quad::new(st, rg, pd, i));
        }
    }
    let top = desc.sigmas.last().expect("non-empty").clone();
    let rho = Term::d(top, QPart::new(quads), inputs.body.clone())?;
    let report = check_term(&rho, desc.n);
    Ok((rho, report))
}

/// Checks the three conclusions on `pd`, `rg` for each lower level of `In`.
///
/// `law.1a`: `in_i(rg_i) = in_i(pd_{i+1})`, `pd_i <=_i rg_i <=_i pd_{i+1}`, `pd_i != pd_{i+1}`.
/// `law.1b`: `rg_i(pd_i) <=_i sigma_t <_i rg_i` implies `rg_i(sigma_t) <=_i rg_i`.
/// `law.1c`: `rg_i = pd_i` or `rg_i(pd_i) <=_i rg_i`.
pub fn verify_rope_laws(desc: &RopeDescriptor) -> ValidityReport {
    let subject = desc.sigmas.last().cloned().unwrap_or_else(Term::pi);
    let mut checks = Vec::new();
    if let Err(e) = desc.validate() {
        checks.push(Check::new("law.1a", false, e.to_string()));
        return ValidityReport::new(subject, checks);
    }
    for i in in_from_rope(desc) {
        if i == desc.n - 1 {
            continue;
        }
        let (pd, rg, pd1) = match (pd_from_rope(desc, i), rg_from_rope(desc, i), pd_from_rope(desc, i + 1)) {
            (Ok(a), Ok(b), Ok(c)) => (a, b, c),
            _ => {
                checks.push(Check::new("law.1a", false, format!("i={}: accessors undefined", i)));
                continue;
            }
        };
        let same_in = in_pair(&rg, i) == in_pair(&pd1, i);
        let ok = same_in && prec_eq_i(&pd, &rg, i) && prec_eq_i(&rg, &pd1, i) && pd != pd1;
        checks.push(Check::new(
            "law.1a",
            ok,
            format!(
                "i={}: in equal {}, pd<=rg {}, rg<=pd(i+1) {}, pd!=pd(i+1) {}",
                i,
                same_in,
                prec_eq_i(&pd, &rg, i),
                prec_eq_i(&rg, &pd1, i),
                pd != pd1
            ),
        ));

        let rg_pd = rg_i(&pd, i);
        let mut ok = true;
        let mut detail = format!("i={}: holds", i);
        if let Some(r) = &rg_pd {
            for s in &desc.sigmas {
                if prec_eq_i(r, s, i) && prec_i(s, &rg, i) {
                    if let Some(rs) = rg_i(s, i) {
                        if !prec_eq_i(&rs, &rg, i) {
                            ok = false;
                            detail = format!("i={}: rg_i(sigma_{}) = {} does not reach rg_i", i, desc.sigma_index(s).unwrap_or(0), rs);
                            break;
                        }
                    }
                }
            }
        } else {
            detail = format!("i={}: rg_i(pd_i) undefined, vacuous", i);
        }
        checks.push(Check::new("law.1b", ok, detail));

        let ok = rg == pd || rg_pd.as_ref().is_some_and(|r| prec_eq_i(r, &rg, i));
        checks.push(Check::new("law.1c", ok, format!("i={}: rg = pd {}", i, rg == pd)));
    }
    ValidityReport::new(subject, checks)
}

/// Preconditions on the subscripts of a rope under which the rope laws are expected to hold.
///
/// For each knot `m < l` with `a = n_m + 1` and `j = i_m`, and every level
/// `i` in `[2, j]`:
/// * every later subscript `sigma_b` of the segment, `b` in `(a, n_{m+1}+1]`,
///   reaches `sigma_a` through `<_i`;
/// * if `rg_i(sigma_b)` is undefined or lies below position `a`, the
///   subscripts strictly between `sigma_b` and `sigma_a` on the chain avoid
///   level `i`, and `in_i(sigma_b) = in_i(sigma_a)`;
/// * at the segment end `b'`, if a range `kappa = sigma_{q0}` is found as in
///   Case 1, the subscripts between `kappa` and `sigma_a` avoid level `i`,
///   `in_i(sigma_a) = in_i(kappa)`, `kappa <=_i sigma_a`, and every
///   `sigma_t` between `sigma_{b'}` and `kappa` has range reaching `kappa`.
pub fn rope_hypotheses(desc: &RopeDescriptor) -> std::result::Result<(), String> {
    desc.validate().map_err(|e| e.to_string())?;
    let s = &desc.sigmas;
    let l = desc.knot_count();
    for m in 0..l {
        let a = desc.knots[m] + 1;
        let end = desc.knots[m + 1] + 1;
        let j = desc.indices[m];
        for i in 2..=j {
            let avoids = |lo: usize, hi: usize, bottom: &Term| {
                (lo + 1..=hi).all(|d| {
                    let between = prec_eq_i(bottom, &s[d], i) && prec_i(&s[d], &s[a], i);
                    !between || !in_set(&s[d]).map(|set| set.contains(&i)).unwrap_or(false)
                })
            };
            for b in a + 1..=end {
                if !prec_i(&s[b], &s[a], i) {
                    return Err(format!("knot {}: sigma_{} does not reach sigma_{} at level {}", m, b, a, i));
                }
                let low_range = match rg_i(&s[b], i) {
                    None => true,
                    Some(r) => desc.sigma_index(&r).is_none_or(|k| k < a),
                };
                if low_range {
                    if !avoids(a, b, &s[b]) {
                        return Err(format!("knot {}: level {} reappears between sigma_{} and sigma_{}", m, i, b, a));
                    }
                    if in_pair(&s[b], i) != in_pair(&s[a], i) {
                        return Err(format!("knot {}: in_{} differs between sigma_{} and sigma_{}", m, i, b, a));
                    }
                }
            }
            let bp = end;
            let mut found = None;
            'outer: for q in a..bp {
                for p in q..bp {
                    if prec_eq_i(&s[bp], &s[p + 1], i) && rg_i(&s[p + 1], i).as_ref() == Some(&s[q]) {
                        found = Some(q);
                        break 'outer;
                    }
                }
            }
            if let Some(q0) = found {
                let kappa = &s[q0];
                if !avoids(a, q0, kappa) {
                    return Err(format!("knot {}: level {} reappears between range sigma_{} and sigma_{}", m, i, q0, a));
                }
                if in_pair(&s[a], i) != in_pair(kappa, i) || !prec_eq_i(kappa, &s[a], i) {
                    return Err(format!("knot {}: range sigma_{} not aligned with sigma_{} at level {}", m, q0, a, i));
                }
                for t in s {
                    if prec_eq_i(&s[bp], t, i) && prec_i(t, kappa, i) {
                        if let Some(r) = rg_i(t, i) {
                            if !prec_eq_i(&r, kappa, i) {
                                return Err(format!("knot {}: a range below sigma_{} escapes it at level {}", m, q0, i));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}
