//! A stand-alone comparator for the `{0, +, f}` fragment.
//!
//! Terms are converted into a private representation, brought into normal
//! form by this module's own rules, and compared with the classical Veblen
//! normal-form algorithm. Nothing here calls into [`crate::order`].

use std::cmp::Ordering;

use crate::error::{OdError, Result};
use crate::term::{Kind, Term};

/// Ordinals below the first strongly critical ordinal, in additive normal form.
/// The parts `phi(a, b)` are additively principal and non-increasing; no parts is 0.
#[derive(Clone, Debug, PartialEq, Eq)]
struct V {
    parts: Vec<(V, V)>,
}

impl V {
    fn zero() -> V {
        V { parts: Vec::new() }
    }

    fn single(a: V, b: V) -> V {
        V { parts: vec![(a, b)] }
    }

    fn principal(a: V, b: V) -> V {
        // phi(a, phi(c, d)) with a < c is phi(c, d).
        if let [(c, _)] = b.parts.as_slice() {
            if vcmp(&a, c) == Ordering::Less {
                return b;
            }
        }
        V::single(a, b)
    }

    fn add(items: Vec<V>) -> V {
        let mut all: Vec<(V, V)> = items.into_iter().flat_map(|v| v.parts).collect();
        // Insertion sort, largest first.
        for k in 1..all.len() {
            let mut m = k;
            while m > 0 && pcmp(&all[m - 1], &all[m]) == Ordering::Less {
                all.swap(m - 1, m);
                m -= 1;
            }
        }
        V { parts: all }
    }
}

fn from_term(t: &Term) -> Result<V> {
    match t.kind() {
        Kind::Zero => Ok(V::zero()),
        Kind::Sum(parts) => Ok(V::add(parts.iter().map(from_term).collect::<Result<Vec<_>>>()?)),
        Kind::Phi(a, b) => Ok(V::principal(from_term(a)?, from_term(b)?)),
        _ => Err(OdError::OutOfFragment(t.to_string())),
    }
}

fn pcmp(x: &(V, V), y: &(V, V)) -> Ordering {
    let (a1, b1) = x;
    let (a2, b2) = y;
    let whole_y = V::single(a2.clone(), b2.clone());
    let whole_x = V::single(a1.clone(), b1.clone());
    match vcmp(a1, a2) {
        Ordering::Equal => vcmp(b1, b2),
        Ordering::Less => match vcmp(b1, &whole_y) {
            Ordering::Less => Ordering::Less,
            _ => Ordering::Greater,
        },
        Ordering::Greater => match vcmp(&whole_x, b2) {
            Ordering::Greater => Ordering::Greater,
            _ => Ordering::Less,
        },
    }
}

fn vcmp(x: &V, y: &V) -> Ordering {
    let (px, py) = (&x.parts, &y.parts);
    let mut k = 0;
    loop {
        match (px.get(k), py.get(k)) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(a), Some(b)) => {
                let c = pcmp(a, b);
                if c != Ordering::Equal {
                    return c;
                }
            }
        }
        k += 1;
    }
}

/// Compares two terms of the `{0, +, f}` fragment.
pub fn oracle_veblen_cmp(a: &Term, b: &Term) -> Result<Ordering> {
    Ok(vcmp(&from_term(a)?, &from_term(b)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::mk_sum;

    #[test]
    fn oracle_examples() {
        assert_eq!(oracle_veblen_cmp(&Term::zero(), &Term::one()).unwrap(), Ordering::Less);
        let eps0 = Term::phi(Term::one(), Term::zero());
        let w_eps = Term::phi(Term::zero(), eps0.clone());
        assert_eq!(w_eps, eps0);
        let w = Term::omega_pow(Term::one());
        assert_eq!(oracle_veblen_cmp(&w, &eps0).unwrap(), Ordering::Less);
        assert_eq!(oracle_veblen_cmp(&mk_sum([w.clone(), Term::one()]), &mk_sum([w.clone(), w])).unwrap(), Ordering::Less);
        assert!(oracle_veblen_cmp(&Term::omega(), &Term::one()).is_err());
    }
}
