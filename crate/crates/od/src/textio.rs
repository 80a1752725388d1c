//! Text notation for terms and rope descriptors.
//!
//! Term grammar:
//!
//! ```text
//! term := '0' | 'W' | 'p' | term '+' term | 'f' '(' term ',' term ')' | term '^+'
//!       | 'd' '[' term (';' quad (',' quad)*)? ']' '(' term ')'
//! quad := '(' term ',' term ',' term ',' nat ')'
//! ```
//!
//! `+` is left associative with the lowest precedence and `^+` binds
//! tightest. Whitespace between tokens is ignored. Parsed terms are
//! canonical, and [`print_term`] produces the unique spelling that parses
//! back to the same term.

use std::collections::BTreeMap;
use std::fmt;

use crate::chain::{RopeDescriptor, SynthInputs};
use crate::error::{OdError, Result};
use crate::term::{mk_sum, Kind, QPart, Quad, Term};

const MAX_DEPTH: usize = 256;

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            Kind::Zero => f.write_str("0"),
            Kind::Omega => f.write_str("W"),
            Kind::Pi => f.write_str("p"),
            Kind::Sum(parts) => {
                for (k, p) in parts.iter().enumerate() {
                    if k > 0 {
                        f.write_str("+")?;
                    }
                    write!(f, "{}", p)?;
                }
                Ok(())
            }
            Kind::Phi(a, b) => write!(f, "f({},{})", a, b),
            Kind::RSucc(x) => write!(f, "{}^+", x),
            Kind::D(c) => {
                write!(f, "d[{}", c.sub)?;
                for (k, q) in c.q.quads.iter().enumerate() {
                    f.write_str(if k == 0 { ";" } else { "," })?;
                    write!(f, "({},{},{},{})", q.nu, q.kappa, q.tau, q.j)?;
                }
                write!(f, "]({})", c.body)
            }
        }
    }
}

/// The canonical spelling of a term.
pub fn print_term(t: &Term) -> String {
    t.to_string()
}

/// Parses a term; errors carry the line and column (1-based) of the offending character.
pub fn parse_term(src: &str) -> Result<Term> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, depth: 0 };
    let t = p.term()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(t)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    depth: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> OdError {
        let upto = &self.src[..self.pos.min(self.src.len())];
        let line = upto.iter().filter(|&&b| b == b'\n').count() + 1;
        let column = upto.iter().rev().take_while(|&&b| b != b'\n').count() + 1;
        OdError::Parse { line, column, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn term(&mut self) -> Result<Term> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error("nesting too deep"));
        }
        let mut parts = vec![self.postfix()?];
        while self.peek() == Some(b'+') {
            self.pos += 1;
            parts.push(self.postfix()?);
        }
        self.depth -= 1;
        Ok(mk_sum(parts))
    }

    fn postfix(&mut self) -> Result<Term> {
        let mut t = self.atom()?;
        while self.peek() == Some(b'^') {
            let at = self.pos;
            self.pos += 1;
            if self.src.get(self.pos) != Some(&b'+') {
                return Err(self.error("expected '+' after '^'"));
            }
            self.pos += 1;
            t = Term::rsucc(t).map_err(|e| {
                self.pos = at;
                self.error(&e.to_string())
            })?;
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term> {
        match self.peek() {
            Some(b'0') => {
                self.pos += 1;
                Ok(Term::zero())
            }
            Some(b'W') => {
                self.pos += 1;
                Ok(Term::omega())
            }
            Some(b'p') => {
                self.pos += 1;
                Ok(Term::pi())
            }
            Some(b'f') => {
                self.pos += 1;
                self.expect(b'(')?;
                let a = self.term()?;
                self.expect(b',')?;
                let b = self.term()?;
                self.expect(b')')?;
                Ok(Term::phi(a, b))
            }
            Some(b'd') => {
                self.pos += 1;
                self.expect(b'[')?;
                let at = self.pos;
                let sub = self.term()?;
                let mut quads = Vec::new();
                if self.peek() == Some(b';') {
                    self.pos += 1;
                    quads.push(self.quad()?);
                    while self.peek() == Some(b',') {
                        self.pos += 1;
                        quads.push(self.quad()?);
                    }
                }
                self.expect(b']')?;
                self.expect(b'(')?;
                let body = self.term()?;
                self.expect(b')')?;
                Term::d(sub, QPart::new(quads), body).map_err(|e| {
                    self.pos = at;
                    self.error(&e.to_string())
                })
            }
            Some(_) => Err(self.error("expected a term")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn quad(&mut self) -> Result<Quad> {
        self.expect(b'(')?;
        let nu = self.term()?;
        self.expect(b',')?;
        let kappa = self.term()?;
        self.expect(b',')?;
        let tau = self.term()?;
        self.expect(b',')?;
        let j = self.nat()?;
        self.expect(b')')?;
        Ok(Quad::new(nu, kappa, tau, j))
    }

    fn nat(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a natural number"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        digits.parse().map_err(|_| {
            self.pos = start;
            self.error("number too large")
        })
    }
}

/// A parsed descriptor file: the rope and, when `body` and `st_top` are present, synthesis inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescriptorFile {
    /// The rope.
    pub desc: RopeDescriptor,
    /// Synthesis inputs, if the file supplies them.
    pub inputs: Option<SynthInputs>,
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i64;
    let mut start = 0;
    for (k, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ';' if depth == 0 => {
                out.push(&s[start..k]);
                start = k + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn parse_list<T: std::str::FromStr>(value: &str, line: usize) -> Result<Vec<T>> {
    let value = value.trim();
    if value.is_empty() {
        return Ok(Vec::new());
    }
    value
        .split(',')
        .map(|x| x.trim().parse::<T>().map_err(|_| OdError::Descriptor { line, message: format!("bad number `{}`", x.trim()) }))
        .collect()
}

fn term_at(value: &str, line: usize) -> Result<Term> {
    parse_term(value).map_err(|e| OdError::Descriptor { line, message: e.to_string() })
}

/// Parses the line-oriented descriptor format.
///
/// Lines are `key: value` with keys `N`, `sigmas` (terms separated by `;`),
/// `knots`, `indices` (comma separated), `body`, `st_top` and `st[i]`.
/// Blank lines and lines starting with `#` are ignored.
pub fn parse_descriptor(src: &str) -> Result<DescriptorFile> {
    let mut n: Option<(u32, usize)> = None;
    let mut sigmas: Option<(Vec<Term>, usize)> = None;
    let mut knots: Option<(Vec<usize>, usize)> = None;
    let mut indices: Option<(Vec<u32>, usize)> = None;
    let mut body: Option<Term> = None;
    let mut st_top: Option<Term> = None;
    let mut st_lower = BTreeMap::new();
    let mut last_line = 0;
    for (k, raw) in src.lines().enumerate() {
        let line = k + 1;
        last_line = line;
        let text = raw.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let (key, value) = text.split_once(':').ok_or(OdError::Descriptor { line, message: String::from("expected `key: value`") })?;
        let key = key.trim();
        match key {
            "N" => {
                let v = value.trim().parse().map_err(|_| OdError::Descriptor { line, message: String::from("N must be an integer") })?;
                n = Some((v, line));
            }
            "sigmas" => {
                let ts = split_top_level(value).into_iter().map(|s| term_at(s, line)).collect::<Result<Vec<_>>>()?;
                sigmas = Some((ts, line));
            }
            "knots" => knots = Some((parse_list(value, line)?, line)),
            "indices" => indices = Some((parse_list(value, line)?, line)),
            "body" => body = Some(term_at(value, line)?),
            "st_top" => st_top = Some(term_at(value, line)?),
            _ if key.starts_with("st[") && key.ends_with(']') => {
                let i: u32 = key[3..key.len() - 1]
                    .trim()
                    .parse()
                    .map_err(|_| OdError::Descriptor { line, message: format!("bad index in `{}`", key) })?;
                st_lower.insert(i, term_at(value, line)?);
            }
            _ => return Err(OdError::Descriptor { line, message: format!("unknown key `{}`", key) }),
        }
    }
    let missing = |name: &str| OdError::Descriptor { line: last_line, message: format!("missing field `{}`", name) };
    let (n, n_line) = n.ok_or_else(|| missing("N"))?;
    let (sigmas, s_line) = sigmas.ok_or_else(|| missing("sigmas"))?;
    let (knots, k_line) = knots.unwrap_or((Vec::new(), s_line));
    let (indices, i_line) = indices.unwrap_or((Vec::new(), k_line));
    if n < 4 {
        return Err(OdError::Descriptor { line: n_line, message: format!("N must be at least 4, got {}", n) });
    }
    if knots.windows(2).any(|w| w[0] >= w[1]) {
        return Err(OdError::Descriptor { line: k_line, message: String::from("knot numbers must be strictly increasing") });
    }
    if let Some(i) = indices.iter().find(|&&i| i < 2 || i + 2 > n) {
        return Err(OdError::Descriptor { line: i_line, message: format!("index {} outside [2, {}]", i, n - 2) });
    }
    let desc = RopeDescriptor::new(n, sigmas, knots, indices).map_err(|e| OdError::Descriptor { line: s_line, message: e.to_string() })?;
    if let Some(i) = st_lower.keys().find(|&&i| i < 2 || i + 2 > n) {
        return Err(OdError::Descriptor { line: last_line, message: format!("st[{}] outside [2, {}]", i, n - 2) });
    }
    let inputs = match (body, st_top) {
        (Some(body), Some(st_top)) => Some(SynthInputs { body, st_top, st_lower }),
        (None, None) if st_lower.is_empty() => None,
        (None, _) => return Err(missing("body")),
        (_, None) => return Err(missing("st_top")),
    };
    Ok(DescriptorFile { desc, inputs })
}

/// Prints a descriptor (and inputs, if any) in the format read by [`parse_descriptor`].
pub fn print_descriptor(desc: &RopeDescriptor, inputs: Option<&SynthInputs>) -> String {
    let join = |v: Vec<String>, sep: &str| v.join(sep);
    let mut s = format!("N: {}\n", desc.n);
    s += &format!("sigmas: {}\n", join(desc.sigmas.iter().map(print_term).collect(), " ; "));
    s += &format!("knots: {}\n", join(desc.knots.iter().map(|k| k.to_string()).collect(), ","));
    s += &format!("indices: {}\n", join(desc.indices.iter().map(|k| k.to_string()).collect(), ","));
    if let Some(inp) = inputs {
        s += &format!("body: {}\n", inp.body);
        s += &format!("st_top: {}\n", inp.st_top);
        for (i, t) in &inp.st_lower {
            s += &format!("st[{}]: {}\n", i, t);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const SIGMA1: &str = "d[p;(f(0,0),p,p,3)](f(0,0))";

    #[test]
    fn parse_examples() {
        let t = parse_term("d[p](f(0,0))").unwrap();
        assert_eq!(t, Term::d(Term::pi(), QPart::empty(), Term::one()).unwrap());
        let s1 = parse_term(SIGMA1).unwrap();
        assert_eq!(s1.as_d().unwrap().q.len(), 1);
        assert_eq!(parse_term("f(0,0)+0").unwrap(), Term::one());
        assert_eq!(parse_term("0+W").unwrap(), Term::omega());
    }

    #[test]
    fn print_examples() {
        assert_eq!(print_term(&Term::pi()), "p");
        assert_eq!(print_term(&parse_term(SIGMA1).unwrap()), SIGMA1);
        assert_eq!(print_term(&parse_term("f(0,0) + W").unwrap()), "W+f(0,0)");
        assert_eq!(print_term(&parse_term("W^+^+").unwrap()), "W^+^+");
    }

    #[test]
    fn parse_errors_are_positioned() {
        match parse_term("f(0,") {
            Err(OdError::Parse { line: 1, column: 5, .. }) => {}
            other => panic!("{:?}", other),
        }
        match parse_term("W\n+ q") {
            Err(OdError::Parse { line: 2, column: 3, .. }) => {}
            other => panic!("{:?}", other),
        }
        assert!(parse_term("p^+").is_err());
        assert!(parse_term("d[f(0,0)](0)").is_err());
        assert!(parse_term(&"f(".repeat(1000)).is_err());
    }

    #[test]
    fn descriptor_round_trip() {
        let src = format!(
            "N: 4\nsigmas: p ; {} ; d[{};(0,p,{},3)](f(0,0)+f(0,0))\nknots: 0,1\nindices: 2\nbody: f(0,f(0,0))\nst_top: 0\nst[2]: f(0,0)+f(0,0)+f(0,0)\n",
            SIGMA1, SIGMA1, SIGMA1
        );
        let file = parse_descriptor(&src).unwrap();
        assert_eq!(file.desc.sigmas.len(), 3);
        assert_eq!(file.desc.knots, vec![0, 1]);
        let again = parse_descriptor(&print_descriptor(&file.desc, file.inputs.as_ref())).unwrap();
        assert_eq!(again, file);
    }

    #[test]
    fn descriptor_errors() {
        let minimal = "N: 4\nsigmas: p\n";
        let file = parse_descriptor(minimal).unwrap();
        assert!(file.desc.knots.is_empty() && file.inputs.is_none());
        let bad = format!("N: 4\nsigmas: p ; {}\nknots: 0\nindices: 3\n", SIGMA1);
        match parse_descriptor(&bad) {
            Err(OdError::Descriptor { line: 4, .. }) => {}
            other => panic!("{:?}", other),
        }
        assert!(parse_descriptor("sigmas: p\n").is_err());
        assert!(parse_descriptor("N: 4\nsigmas: p\nfoo: 1\n").is_err());
    }
}
