//! Bounded enumeration of valid diagrams, order-axiom scans and descent probes.

pub mod oracle;

use std::cmp::Ordering;
use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chain::generate::random_below;
use crate::error::{OdError, Result};
use crate::order::cmp;
use crate::term::{mk_sum, Kind, QPart, Quad, Term};
use crate::validity::{check_d, check_term};

pub use oracle::oracle_veblen_cmp;

/// Enumeration parameters.
#[derive(Clone, Debug)]
pub struct EnumConfig {
    /// The level parameter N.
    pub n: u32,
    /// Largest term size (node count) to emit.
    pub max_size: usize,
    /// Subscripts available before any collapse has been emitted.
    pub subscript_seed: Vec<Term>,
    /// Longest Q part tried on collapses.
    pub max_q_len: usize,
    /// Stop after this many terms.
    pub count_cap: usize,
}

impl EnumConfig {
    /// Defaults: seed `[W, p]`, Q parts of length at most 1, cap 100000.
    pub fn new(n: u32, max_size: usize) -> Self {
        EnumConfig { n, max_size, subscript_seed: vec![Term::omega(), Term::pi()], max_q_len: 1, count_cap: 100_000 }
    }
}

/// The result of an enumeration.
#[derive(Clone, Debug)]
pub struct Enumeration {
    /// Emitted terms ordered by size, then by spelling.
    pub terms: Vec<Term>,
    /// True when the count cap stopped the enumeration early.
    pub truncated: bool,
}

struct Builder {
    by_size: Vec<Vec<Term>>,
    seen: HashSet<Term>,
    count: usize,
    cap: usize,
    truncated: bool,
}

impl Builder {
    fn new(max_size: usize, cap: usize) -> Self {
        Builder { by_size: vec![Vec::new(); max_size + 1], seen: HashSet::new(), count: 0, cap, truncated: false }
    }

    fn of_size(&self, s: usize) -> &[Term] {
        self.by_size.get(s).map(Vec::as_slice).unwrap_or(&[])
    }

    fn offer(&mut self, s: usize, t: Term, accept: impl FnOnce(&Term) -> bool) {
        if self.truncated || t.size() != s || self.seen.contains(&t) {
            return;
        }
        if !accept(&t) {
            return;
        }
        if self.count >= self.cap {
            self.truncated = true;
            return;
        }
        self.seen.insert(t.clone());
        self.by_size[s].push(t);
        self.count += 1;
    }

    fn finish(mut self) -> Enumeration {
        let mut terms: Vec<Term> = self.by_size.drain(..).flatten().collect();
        terms.sort_by_cached_key(|t| (t.size(), t.to_string()));
        Enumeration { terms, truncated: self.truncated }
    }
}

fn sums_and_phis(b: &mut Builder, s: usize, accept: &dyn Fn(&Term) -> bool) {
    for sa in 1..s.saturating_sub(1) {
        let sb = s - 1 - sa;
        let (xs, ys) = (b.of_size(sa).to_vec(), b.of_size(sb).to_vec());
        for x in &xs {
            for y in &ys {
                b.offer(s, Term::phi(x.clone(), y.clone()), accept);
            }
        }
    }
    for sx in 1..s {
        let xs: Vec<Term> = b.of_size(sx).iter().filter(|t| t.is_p()).cloned().collect();
        let rest: Vec<Term> = b.of_size(s - sx).iter().filter(|t| !t.is_zero()).cloned().collect();
        for x in &xs {
            for r in &rest {
                let lead = match r.kind() {
                    Kind::Sum(parts) => &parts[0],
                    _ if r.is_p() => r,
                    _ => continue,
                };
                if cmp(x, lead).is_ge() {
                    b.offer(s, mk_sum([x.clone(), r.clone()]), accept);
                }
            }
        }
    }
}

/// All valid terms up to `cfg.max_size`, built bottom-up from valid subterms.
///
/// Collapses take their subscripts from the seed and from previously
/// emitted regular terms; Q parts are tried exhaustively up to
/// `cfg.max_q_len` quadruples and kept only when the collapse is valid.
pub fn enumerate_valid(cfg: &EnumConfig) -> Enumeration {
    let n = cfg.n;
    let mut b = Builder::new(cfg.max_size, cfg.count_cap);
    let any = |_: &Term| true;
    for s in 1..=cfg.max_size {
        if s == 1 {
            for t in [Term::zero(), Term::omega(), Term::pi()] {
                b.offer(1, t, any);
            }
            continue;
        }
        for x in b.of_size(s - 1).to_vec() {
            if x.is_r() && !x.is_pi() {
                if let Ok(t) = Term::rsucc(x) {
                    b.offer(s, t, any);
                }
            }
        }
        sums_and_phis(&mut b, s, &any);
        let subs: Vec<Term> = {
            let mut v: Vec<Term> = cfg.subscript_seed.clone();
            for k in 1..s {
                v.extend(b.of_size(k).iter().filter(|t| t.is_r() && !cfg.subscript_seed.contains(t)).cloned());
            }
            v
        };
        for sub in &subs {
            let budget = match s.checked_sub(1 + sub.size()) {
                Some(x) if x >= 1 => x,
                _ => continue,
            };
            for q in q_parts(&b, budget.saturating_sub(1), cfg.max_q_len, n) {
                let qs: usize = q.quads.iter().map(|x| 1 + x.nu.size() + x.kappa.size() + x.tau.size()).sum();
                if qs >= budget {
                    continue;
                }
                for body in b.of_size(budget - qs).to_vec() {
                    if let Ok(t) = Term::d(sub.clone(), q.clone(), body.clone()) {
                        b.offer(s, t, |t| {
                            let c = t.as_d().expect("collapse");
                            check_d(&c.sub, &c.q, &c.body, n).map(|r| r.valid).unwrap_or(false)
                        });
                    }
                }
            }
        }
        if b.truncated {
            break;
        }
    }
    b.finish()
}

/// Q parts whose total size is at most `budget`, with at most `max_len` quadruples, including the empty one.
fn q_parts(b: &Builder, budget: usize, max_len: usize, n: u32) -> Vec<QPart> {
    let mut out = vec![QPart::empty()];
    if max_len == 0 || budget < 4 {
        return out;
    }
    let all: Vec<Term> = b.by_size.iter().flatten().cloned().collect();
    let kappas: Vec<&Term> = all.iter().filter(|t| t.is_r()).collect();
    let taus: Vec<&Term> = all.iter().filter(|t| t.is_pi() || t.is_dq()).collect();
    let mut singles = Vec::new();
    for nu in &all {
        for kappa in &kappas {
            for tau in &taus {
                let size = 1 + nu.size() + kappa.size() + tau.size();
                if size > budget {
                    continue;
                }
                for j in 2..n {
                    singles.push((size, Quad::new(nu.clone(), (*kappa).clone(), (*tau).clone(), j)));
                }
            }
        }
    }
    let mut frontier: Vec<(usize, Vec<Quad>)> = vec![(0, Vec::new())];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (used, qs) in &frontier {
            for (size, quad) in &singles {
                if used + size > budget || qs.last().is_some_and(|l| l.j >= quad.j) {
                    continue;
                }
                let mut v = qs.clone();
                v.push(quad.clone());
                out.push(QPart::new(v.clone()));
                next.push((used + size, v));
            }
        }
        frontier = next;
    }
    out
}

/// All terms of the `{0, +, f}` fragment up to `max_size`.
pub fn enumerate_veblen_fragment(max_size: usize) -> Vec<Term> {
    let mut b = Builder::new(max_size, usize::MAX);
    let any = |_: &Term| true;
    for s in 1..=max_size {
        if s == 1 {
            b.offer(1, Term::zero(), any);
            continue;
        }
        sums_and_phis(&mut b, s, &any);
    }
    b.finish().terms
}

/// Outcome of an order-axiom scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    /// Number of terms scanned.
    pub terms: usize,
    /// Ordered pairs compared.
    pub pairs: usize,
    /// Triples checked for transitivity.
    pub triples: usize,
    /// The first violation found, verbatim.
    pub counterexample: Option<String>,
}

impl AxiomReport {
    /// True when no violation was found.
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// [`order_axiom_scan_with`] using [`cmp`].
pub fn order_axiom_scan(terms: &[Term]) -> AxiomReport {
    order_axiom_scan_with(terms, cmp)
}

/// Checks that `f` is a strict total order on `terms`.
///
/// Every ordered pair is checked for reflexive equality, trichotomy and
/// antisymmetry. Transitivity is checked on every triple of an evenly
/// spread subset of at most 200 terms, and on the whole set by sorting with
/// a merge sort and confirming that every earlier element is below every
/// later one.
pub fn order_axiom_scan_with<F: Fn(&Term, &Term) -> Ordering>(terms: &[Term], f: F) -> AxiomReport {
    let mut report = AxiomReport { terms: terms.len(), pairs: 0, triples: 0, counterexample: None };
    for (i, a) in terms.iter().enumerate() {
        for (j, b) in terms.iter().enumerate() {
            report.pairs += 1;
            let c = f(a, b);
            let bad = if i == j {
                (c != Ordering::Equal).then(|| format!("cmp({a}, {a}) = {c:?}"))
            } else if c == Ordering::Equal && a != b {
                Some(format!("cmp({a}, {b}) = Equal for distinct terms"))
            } else if f(b, a) != c.reverse() {
                Some(format!("cmp({a}, {b}) = {c:?} but cmp({b}, {a}) = {:?}", f(b, a)))
            } else {
                None
            };
            if bad.is_some() {
                report.counterexample = bad;
                return report;
            }
        }
    }

    let step = terms.len().div_ceil(200).max(1);
    let subset: Vec<&Term> = terms.iter().step_by(step).take(200).collect();
    let m = subset.len();
    let matrix: Vec<Vec<Ordering>> = subset.iter().map(|a| subset.iter().map(|b| f(a, b)).collect()).collect();
    for x in 0..m {
        for y in 0..m {
            if matrix[x][y] != Ordering::Less {
                continue;
            }
            for z in 0..m {
                report.triples += 1;
                if matrix[y][z] == Ordering::Less && matrix[x][z] != Ordering::Less {
                    report.counterexample =
                        Some(format!("{} < {} < {} but cmp({}, {}) = {:?}", subset[x], subset[y], subset[z], subset[x], subset[z], matrix[x][z]));
                    return report;
                }
            }
        }
    }

    let sorted = merge_sort(terms.to_vec(), &f);
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            if f(&sorted[i], &sorted[j]) != Ordering::Less {
                report.counterexample = Some(format!("sorted order broken: {} before {} but not below it", sorted[i], sorted[j]));
                return report;
            }
        }
    }
    report
}

fn merge_sort<F: Fn(&Term, &Term) -> Ordering>(v: Vec<Term>, f: &F) -> Vec<Term> {
    if v.len() <= 1 {
        return v;
    }
    let mut left = v;
    let right = left.split_off(left.len() / 2);
    let (left, right) = (merge_sort(left, f), merge_sort(right, f));
    let mut out = Vec::with_capacity(left.len() + right.len());
    let (mut i, mut j) = (0, 0);
    while i < left.len() && j < right.len() {
        if f(&right[j], &left[i]) == Ordering::Less {
            out.push(right[j].clone());
            j += 1;
        } else {
            out.push(left[i].clone());
            i += 1;
        }
    }
    out.extend_from_slice(&left[i..]);
    out.extend_from_slice(&right[j..]);
    out
}

fn proper_subterms(t: &Term, out: &mut Vec<Term>) {
    for c in t.children() {
        out.push(c.clone());
        proper_subterms(&c, out);
    }
}

/// A random strictly decreasing sequence starting at `start`.
///
/// Moves go to proper subterms, to shortened sums and to random smaller
/// Veblen terms; only valid moves below the current term are taken. Each
/// step is re-checked, and steps inside the `{0, +, f}` fragment are also
/// confirmed by the oracle.
pub fn descent_sample(seed: u64, start: &Term, max_steps: usize, n: u32) -> Result<Vec<Term>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![start.clone()];
    let mut cur = start.clone();
    for _ in 0..max_steps {
        if cur.is_zero() {
            break;
        }
        let mut moves = vec![Term::zero()];
        proper_subterms(&cur, &mut moves);
        if let Kind::Sum(parts) = cur.kind() {
            moves.push(mk_sum(parts[..parts.len() - 1].iter().cloned()));
        }
        for _ in 0..3 {
            if let Some(t) = random_below(&mut rng, &cur) {
                moves.push(t);
            }
        }
        moves.retain(|m| cmp(m, &cur).is_lt() && check_term(m, n).valid);
        let next = moves.choose(&mut rng).cloned().unwrap_or_else(Term::zero);
        let oracle_ok = match oracle_veblen_cmp(&next, &cur) {
            Ok(o) => o == Ordering::Less,
            Err(_) => true,
        };
        if !cmp(&next, &cur).is_lt() || !oracle_ok {
            return Err(OdError::DescentViolation { from: cur.to_string(), to: next.to_string() });
        }
        out.push(next.clone());
        cur = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atoms_at_size_one() {
        let e = enumerate_valid(&EnumConfig::new(4, 1));
        assert_eq!(e.terms, vec![Term::zero(), Term::omega(), Term::pi()]);
        assert!(!e.truncated);
    }

    #[test]
    fn small_collapse_is_emitted() {
        let mut cfg = EnumConfig::new(4, 5);
        cfg.subscript_seed = vec![Term::pi()];
        let e = enumerate_valid(&cfg);
        assert!(e.terms.contains(&Term::d(Term::pi(), QPart::empty(), Term::one()).unwrap()));
    }

    #[test]
    fn enumeration_is_deterministic_and_valid() {
        let a = enumerate_valid(&EnumConfig::new(4, 6));
        let b = enumerate_valid(&EnumConfig::new(4, 6));
        assert_eq!(a.terms, b.terms);
        assert!(a.terms.iter().all(|t| check_term(t, 4).valid));
    }

    #[test]
    fn cap_truncates() {
        let mut cfg = EnumConfig::new(4, 6);
        cfg.count_cap = 5;
        let e = enumerate_valid(&cfg);
        assert!(e.truncated);
        assert_eq!(e.terms.len(), 5);
    }

    #[test]
    fn axiom_scan_examples() {
        assert!(order_axiom_scan(&[Term::zero(), Term::omega(), Term::pi()]).passed());
        let broken = order_axiom_scan_with(&[Term::zero(), Term::omega(), Term::pi()], |a, b| {
            if a == b {
                Ordering::Equal
            } else if (a.is_zero() && b.is_pi()) || (a.is_pi() && b.is_zero()) {
                cmp(b, a)
            } else {
                cmp(a, b)
            }
        });
        assert!(!broken.passed());
    }

    #[test]
    fn descent_examples() {
        assert_eq!(descent_sample(1, &Term::zero(), 10, 4).unwrap(), vec![Term::zero()]);
        for seed in 0..5 {
            assert_eq!(descent_sample(seed, &Term::one(), 10, 4).unwrap(), vec![Term::one(), Term::zero()]);
        }
    }
}
