//! Random generation of rope descriptors together with synthesis inputs.
//!
//! Subscript sequences grow from `[p]`: every successfully synthesized
//! collapse extends the sequence it was built on and is returned to the
//! pool, so later ropes run through earlier syntheses and exercise both
//! range cases. Knot data are drawn at random and kept only when
//! [`rope_hypotheses`] holds. Stepping values are chosen to decrease along
//! predecessor chains; bodies are chosen just above the bound required by
//! the collapse condition.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::{in_from_rope, pd_from_rope, rg_case, rope_hypotheses, synth, verify_rope_laws, RopeDescriptor, SynthInputs};
use crate::ksets::{b_above, b_above_many};
use crate::order::cmp;
use crate::qpart::{pd_i, rg_i, st_i};
use crate::term::{mk_sum, Kind, QPart, Term};
use crate::validity::ValidityReport;

/// Generator parameters.
#[derive(Clone, Debug)]
pub struct GenConfig {
    /// The level parameter N.
    pub n: u32,
    /// Number of distinct descriptors to produce.
    pub target: usize,
    /// RNG seed.
    pub seed: u64,
    /// Longest subscript sequence kept in the pool.
    pub max_depth: usize,
    /// Upper bound on attempts before giving up.
    pub max_attempts: usize,
}

impl GenConfig {
    /// Defaults for a given N and seed.
    pub fn new(n: u32, target: usize, seed: u64) -> Self {
        GenConfig { n, target, seed, max_depth: 6, max_attempts: 50 * target.max(1) }
    }
}

/// One generated descriptor with its synthesis outcome.
#[derive(Clone, Debug)]
pub struct GeneratedCase {
    /// The rope.
    pub desc: RopeDescriptor,
    /// The synthesis inputs.
    pub inputs: SynthInputs,
    /// The synthesized collapse.
    pub rho: Term,
    /// Validity report of `rho`.
    pub report: ValidityReport,
    /// Rope-law report of the descriptor.
    pub laws: ValidityReport,
    /// Whether some level took its range from Case 1.
    pub case1: bool,
}

/// Counters describing a generator run.
#[derive(Clone, Debug, Default)]
pub struct GenStats {
    /// Attempts made.
    pub attempts: usize,
    /// Knot choices rejected by the rope hypotheses.
    pub rejected_hypotheses: usize,
    /// Attempts skipped because no suitable stepping value existed.
    pub skipped_inputs: usize,
    /// Repeats of an already generated collapse.
    pub duplicates: usize,
}

/// Generates up to `cfg.target` distinct cases.
pub fn generate(cfg: &GenConfig) -> (Vec<GeneratedCase>, GenStats) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pool: Vec<Vec<Term>> = vec![vec![Term::pi()]];
    let mut seen: HashSet<Term> = HashSet::new();
    let mut out = Vec::new();
    let mut stats = GenStats::default();
    while out.len() < cfg.target && stats.attempts < cfg.max_attempts {
        stats.attempts += 1;
        let path = pool.choose(&mut rng).expect("pool is never empty").clone();
        let desc = match random_knots(&mut rng, cfg.n, path) {
            Some(d) => d,
            None => continue,
        };
        if rope_hypotheses(&desc).is_err() {
            stats.rejected_hypotheses += 1;
            continue;
        }
        let (inputs, case1) = match choose_inputs(&mut rng, &desc) {
            Some(x) => x,
            None => {
                stats.skipped_inputs += 1;
                continue;
            }
        };
        let (rho, report) = match synth(&desc, &inputs) {
            Ok(x) => x,
            Err(_) => {
                stats.skipped_inputs += 1;
                continue;
            }
        };
        if !seen.insert(rho.clone()) {
            stats.duplicates += 1;
            continue;
        }
        let laws = verify_rope_laws(&desc);
        if report.valid && desc.sigmas.len() < cfg.max_depth {
            let mut next = desc.sigmas.clone();
            next.push(rho.clone());
            pool.push(next);
        }
        out.push(GeneratedCase { desc, inputs, rho, report, laws, case1 });
    }
    (out, stats)
}

fn random_knots(rng: &mut ChaCha8Rng, n: u32, sigmas: Vec<Term>) -> Option<RopeDescriptor> {
    let depth = sigmas.len() - 1;
    if depth == 0 {
        return RopeDescriptor::new(n, sigmas, vec![], vec![]).ok();
    }
    let mut knots: Vec<usize> = Vec::new();
    let prefer_knots = depth >= 2 && rng.gen_bool(0.8);
    for k in 0..depth - 1 {
        if rng.gen_bool(if prefer_knots { 0.6 } else { 0.0 }) {
            knots.push(k);
        }
    }
    if prefer_knots && knots.is_empty() {
        knots.push(rng.gen_range(0..depth - 1));
    }
    knots.push(depth - 1);
    let indices = (0..knots.len() - 1).map(|_| rng.gen_range(2..=n - 2)).collect();
    RopeDescriptor::new(n, sigmas, knots, indices).ok()
}

/// `B_{>kappa^+}(kappa^+)`, the least admissible body bound for `d_{kappa^+}`.
fn succ_bound(kappa: &Term) -> Option<Term> {
    let kp = Term::rsucc(kappa.clone()).ok()?;
    b_above(&kp, &kp).ok()
}

fn choose_inputs(rng: &mut ChaCha8Rng, desc: &RopeDescriptor) -> Option<(SynthInputs, bool)> {
    let n = desc.n;
    let top_sigma = desc.sigmas.last().expect("non-empty").clone();
    if desc.depth() == 0 {
        let w = Term::omega_pow(Term::omega_pow(Term::one()));
        return Some((SynthInputs { body: w.clone(), st_top: w, st_lower: BTreeMap::new() }, false));
    }
    let pd_top = pd_from_rope(desc, n - 1).ok()?;
    let st_top = random_below(rng, &st_i(&pd_top, n - 1)?)?;
    let mut support = vec![top_sigma.clone(), st_top.clone(), Term::pi(), pd_top];
    let mut st_lower = BTreeMap::new();
    let mut case1 = false;
    for i in in_from_rope(desc) {
        if i == n - 1 {
            continue;
        }
        let pd = pd_from_rope(desc, i).ok()?;
        let (kappa, q) = rg_case(desc, i).ok()?;
        let bound = succ_bound(&kappa)?;
        let alpha = match q {
            None => mk_sum([bound, Term::nat(rng.gen_range(3..=10))]),
            Some(_) => {
                case1 = true;
                let comparator = if rg_i(&pd, i).as_ref() == Some(&kappa) { st_i(&pd, i)? } else { st_i(&first_with_range(&pd, &kappa, i)?, i)? };
                let prev = comparator.as_d()?.body.clone();
                let alpha = drop_trailing_one(&prev)?;
                if !cmp(&alpha, &bound).is_gt() {
                    return None;
                }
                alpha
            }
        };
        let st = Term::d(Term::rsucc(kappa.clone()).ok()?, QPart::empty(), alpha.clone()).ok()?;
        support.extend([st, kappa, pd]);
        st_lower.insert(i, alpha);
    }
    let b = b_above_many(&top_sigma, &support).ok()?;
    let body = mk_sum([b, Term::omega_pow(Term::nat(rng.gen_range(1..=2)))]);
    Some((SynthInputs { body, st_top, st_lower }, case1))
}

/// The first `s` strictly after `pd` on its `<_i` chain, and before `kappa`, with `rg_i(s) = kappa`.
fn first_with_range(pd: &Term, kappa: &Term, i: u32) -> Option<Term> {
    let mut cur = pd_i(pd, i);
    while let Some(c) = cur {
        if &c == kappa {
            return None;
        }
        if rg_i(&c, i).as_ref() == Some(kappa) {
            return Some(c);
        }
        cur = pd_i(&c, i);
    }
    None
}

fn drop_trailing_one(x: &Term) -> Option<Term> {
    match x.kind() {
        Kind::Sum(parts) if parts.last() == Some(&Term::one()) => Some(mk_sum(parts[..parts.len() - 1].iter().cloned())),
        _ if *x == Term::one() => Some(Term::zero()),
        _ => None,
    }
}

/// A random term of the Veblen fragment strictly below `x`, when one is easy to name.
pub fn random_below(rng: &mut ChaCha8Rng, x: &Term) -> Option<Term> {
    let candidate = match x.kind() {
        Kind::Zero => return None,
        Kind::Sum(parts) => {
            let k = parts.len() - 1;
            if rng.gen_bool(0.5) {
                mk_sum(parts[..k].iter().cloned())
            } else {
                let lower = random_below(rng, &parts[k])?;
                mk_sum(parts[..k].iter().cloned().chain([lower]))
            }
        }
        Kind::Phi(a, b) if a.is_zero() => {
            if b.is_zero() {
                Term::zero()
            } else {
                let e = random_below(rng, b)?;
                let copies = rng.gen_range(1..=3);
                let tail = rng.gen_range(0..=2);
                mk_sum(std::iter::repeat_n(Term::omega_pow(e), copies).chain(std::iter::repeat_n(Term::one(), tail)))
            }
        }
        Kind::Phi(_, b) => {
            if !b.is_zero() && rng.gen_bool(0.5) {
                b.clone()
            } else {
                Term::omega_pow(Term::nat(rng.gen_range(1..=3)))
            }
        }
        _ => return None,
    };
    (cmp(&candidate, x).is_lt() && candidate.is_veblen_fragment()).then_some(candidate)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_below_is_below() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let w = Term::omega_pow(Term::omega_pow(Term::one()));
        let mut cur = w;
        let mut steps = 0;
        while let Some(next) = random_below(&mut rng, &cur) {
            assert!(cmp(&next, &cur).is_lt());
            cur = next;
            steps += 1;
            assert!(steps < 10_000);
        }
        assert!(cur.is_zero());
    }

    #[test]
    fn generator_produces_valid_cases() {
        let (cases, _) = generate(&GenConfig::new(4, 20, 1));
        assert!(cases.len() >= 10);
        for c in &cases {
            assert!(c.report.valid, "{} {:?}", c.rho, c.report.first_failure());
            assert!(c.laws.valid, "{:?}", c.laws.first_failure());
        }
    }

    #[test]
    fn generator_is_deterministic() {
        let a: Vec<Term> = generate(&GenConfig::new(5, 10, 3)).0.into_iter().map(|c| c.rho).collect();
        let b: Vec<Term> = generate(&GenConfig::new(5, 10, 3)).0.into_iter().map(|c| c.rho).collect();
        assert_eq!(a, b);
    }
}
