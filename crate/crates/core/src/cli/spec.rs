//! The ring spec file: an INI-like text format.
//!
//! ```text
//! # Hamilton quaternions over Z[i]
//! [ring]
//! kind = quadratic
//! d = -1
//!
//! [group]
//! n = 2
//! row = 0, 1
//! row = 1, 0
//!
//! [action]
//! 0 = id
//! 1 = conj
//!
//! [alpha]
//! row = 1, 1
//! row = 1, -1
//!
//! [lattice H]
//! gen = 1; 0
//! gen = (1+T)/2; (1+T)/2
//!
//! [graded P]
//! 0 = 1+T
//! 1 = 1+T
//! ```
//!
//! `T` is the generator `θ` of `R`. Field elements are sums of terms `a`,
//! `a*T`, `T`, with optional `/q` and parentheses; cocycle entries must be
//! integral. A lattice generator lists one coefficient per group element,
//! separated by `;`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::crystal::{AElement, CrystalRing, RingCandidate, ValidationError};
use crate::exactalg::{KElem, RElem, RingSpec, SigmaAction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: expected {expected}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedLattice {
    pub name: String,
    pub gens: Vec<Vec<KElem>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedGraded {
    pub name: String,
    pub components: Vec<KElem>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecFile {
    pub ring: RingSpec,
    pub group: Vec<Vec<usize>>,
    pub action: Vec<SigmaAction>,
    pub alpha: Vec<Vec<RElem>>,
    pub lattices: Vec<NamedLattice>,
    pub graded: Vec<NamedGraded>,
}

impl SpecFile {
    pub fn candidate(&self) -> RingCandidate {
        RingCandidate {
            ring: self.ring.clone(),
            group: self.group.clone(),
            action: self.action.clone(),
            cocycle: self.alpha.clone(),
        }
    }

    pub fn build(&self) -> Result<Arc<CrystalRing>, ValidationError> {
        Ok(Arc::new(CrystalRing::new(self.candidate())?))
    }

    pub fn lattice(&self, name: &str) -> Option<Vec<AElement>> {
        self.lattices
            .iter()
            .find(|l| l.name == name)
            .map(|l| l.gens.iter().map(|g| AElement::new(g.clone())).collect())
    }

    pub fn graded(&self, name: &str) -> Option<&[KElem]> {
        self.graded.iter().find(|g| g.name == name).map(|g| g.components.as_slice())
    }
}

fn err(line: usize, col: usize, expected: impl Into<String>) -> ParseError {
    ParseError { line, col, expected: expected.into() }
}

/// A field element as rational coordinates on `{1, θ}`.
type Coords = (BigRational, BigRational);

struct ExprParser<'a> {
    s: &'a [u8],
    pos: usize,
    line: usize,
    col0: usize,
}

impl<'a> ExprParser<'a> {
    fn fail(&self, expected: &str) -> ParseError {
        err(self.line, self.col0 + self.pos, expected)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn uint(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.fail("integer"));
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("digits parse"))
    }

    fn expr(&mut self) -> Result<Coords, ParseError> {
        let mut acc: Coords = (BigRational::zero(), BigRational::zero());
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let (a, b) = self.term()?;
            if sign < 0 {
                acc = (acc.0 - a, acc.1 - b);
            } else {
                acc = (acc.0 + a, acc.1 + b);
            }
            sign = match self.peek() {
                Some(b'+') => 1,
                Some(b'-') => -1,
                _ => return Ok(acc),
            };
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Coords, ParseError> {
        let mut v = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.fail("')'"));
                }
                self.pos += 1;
                inner
            }
            Some(b'T') => {
                self.pos += 1;
                (BigRational::zero(), BigRational::one())
            }
            Some(c) if c.is_ascii_digit() => (BigRational::from_integer(self.uint()?), BigRational::zero()),
            _ => return Err(self.fail("number, 'T' or '('")),
        };
        // postfix `/q` and `*T`, the latter only on rational values
        loop {
            match self.peek() {
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.uint()?;
                    if d.is_zero() {
                        self.pos = at;
                        return Err(self.fail("nonzero denominator"));
                    }
                    let d = BigRational::from_integer(d);
                    v = (v.0 / &d, v.1 / &d);
                }
                Some(b'*') => {
                    self.pos += 1;
                    if self.peek() != Some(b'T') || !v.1.is_zero() {
                        return Err(self.fail("'T' after a rational coefficient"));
                    }
                    self.pos += 1;
                    v = (BigRational::zero(), v.0);
                }
                _ => break,
            }
        }
        Ok(v)
    }
}

fn parse_coords(text: &str, line: usize, col: usize) -> Result<Coords, ParseError> {
    let mut p = ExprParser { s: text.as_bytes(), pos: 0, line, col0: col };
    let v = p.expr()?;
    if p.peek().is_some() {
        return Err(p.fail("end of value"));
    }
    Ok(v)
}

fn to_kelem(ring: &RingSpec, (a, b): Coords, line: usize, col: usize) -> Result<KElem, ParseError> {
    if !ring.is_quadratic() && !b.is_zero() {
        return Err(err(line, col, "rational number (the base ring is Z)"));
    }
    let den = a.denom().lcm(b.denom());
    let num = RElem::new(a.numer() * (&den / a.denom()), b.numer() * (&den / b.denom()));
    Ok(KElem::new(num, den).expect("positive denominator"))
}

fn parse_k(ring: &RingSpec, text: &str, line: usize, col: usize) -> Result<KElem, ParseError> {
    to_kelem(ring, parse_coords(text, line, col)?, line, col)
}

fn parse_r(ring: &RingSpec, text: &str, line: usize, col: usize) -> Result<RElem, ParseError> {
    parse_k(ring, text, line, col)?
        .to_r()
        .ok_or_else(|| err(line, col, "element of R without denominators"))
}

/// Items of a comma or semicolon separated list with their columns.
fn split_cols(text: &str, col: usize, sep: char) -> Vec<(&str, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, c) in text.char_indices().chain(std::iter::once((text.len(), sep))) {
        if c == sep {
            let piece = &text[start..i];
            let lead = piece.len() - piece.trim_start().len();
            out.push((piece.trim(), col + start + lead));
            start = i + c.len_utf8();
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Section {
    Ring,
    Group,
    Action,
    Alpha,
    Lattice(usize),
    Graded(usize),
}

struct Partial {
    kind: Option<(String, usize, usize)>,
    d: Option<(i64, usize, usize)>,
    ring: Option<RingSpec>,
    n: Option<usize>,
    group: Vec<Vec<usize>>,
    action: Vec<Option<SigmaAction>>,
    alpha: Vec<Vec<RElem>>,
    lattices: Vec<NamedLattice>,
    graded: Vec<(String, Vec<Option<KElem>>, usize)>,
    seen: Vec<Section>,
}

impl Partial {
    fn ring(&mut self, line: usize) -> Result<RingSpec, ParseError> {
        if let Some(r) = &self.ring {
            return Ok(r.clone());
        }
        let r = match &self.kind {
            None => return Err(err(line, 1, "'kind' in [ring] before this section")),
            Some((k, l, c)) if k == "integers" => {
                if let Some((_, dl, dc)) = self.d {
                    return Err(err(dl, dc, "no 'd' for kind = integers"));
                }
                let _ = (l, c);
                RingSpec::integers()
            }
            Some((k, l, c)) if k == "quadratic" => {
                let Some((d, dl, dc)) = self.d else {
                    return Err(err(*l, *c, "'d' for kind = quadratic"));
                };
                RingSpec::quadratic(d)
                    .map_err(|_| err(dl, dc, "d in {-11, -7, -3, -2, -1, 2, 3, 5, 13}"))?
            }
            Some((_, l, c)) => return Err(err(*l, *c, "'integers' or 'quadratic'")),
        };
        self.ring = Some(r.clone());
        Ok(r)
    }

    fn n(&self, line: usize) -> Result<usize, ParseError> {
        self.n.ok_or_else(|| err(line, 1, "'n' in [group] before this line"))
    }
}

pub fn parse_spec(text: &str) -> Result<SpecFile, ParseError> {
    let mut st = Partial {
        kind: None,
        d: None,
        ring: None,
        n: None,
        group: Vec::new(),
        action: Vec::new(),
        alpha: Vec::new(),
        lattices: Vec::new(),
        graded: Vec::new(),
        seen: Vec::new(),
    };
    let mut section: Option<Section> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col = body.len() - body.trim_start().len() + 1;
        if let Some(rest) = trimmed.strip_prefix('[') {
            let Some(inner) = rest.strip_suffix(']') else {
                return Err(err(line, col + trimmed.len(), "']'"));
            };
            let mut words = inner.split_whitespace();
            let head = words.next().unwrap_or("");
            let name = words.next();
            if words.next().is_some() {
                return Err(err(line, col, "a section header with at most one name"));
            }
            let sec = match (head, name) {
                ("ring", None) => Section::Ring,
                ("group", None) => Section::Group,
                ("action", None) => Section::Action,
                ("alpha", None) => Section::Alpha,
                ("lattice", Some(n)) => {
                    if st.lattices.iter().any(|l| l.name == n) {
                        return Err(err(line, col, format!("a new lattice name, '{n}' is taken")));
                    }
                    st.lattices.push(NamedLattice { name: n.to_string(), gens: Vec::new() });
                    Section::Lattice(st.lattices.len() - 1)
                }
                ("graded", Some(n)) => {
                    if st.graded.iter().any(|g| g.0 == n) {
                        return Err(err(line, col, format!("a new graded name, '{n}' is taken")));
                    }
                    st.graded.push((n.to_string(), Vec::new(), line));
                    Section::Graded(st.graded.len() - 1)
                }
                _ => {
                    return Err(err(
                        line,
                        col + 1,
                        "one of ring, group, action, alpha, 'lattice NAME', 'graded NAME'",
                    ))
                }
            };
            if st.seen.contains(&sec) {
                return Err(err(line, col, format!("no second [{head}] section")));
            }
            if sec == Section::Action {
                let n = st.n(line)?;
                st.action = vec![None; n];
            }
            if let Section::Graded(i) = sec {
                let n = st.n(line)?;
                st.graded[i].1 = vec![None; n];
            }
            st.seen.push(sec.clone());
            section = Some(sec);
            continue;
        }
        let Some(eq) = trimmed.find('=') else {
            return Err(err(line, col, "'key = value' or a [section] header"));
        };
        let key = trimmed[..eq].trim();
        let vraw = &trimmed[eq + 1..];
        let vcol = col + eq + 1 + (vraw.len() - vraw.trim_start().len());
        let value = vraw.trim();
        if value.is_empty() {
            return Err(err(line, vcol, "a value"));
        }
        let Some(sec) = section.clone() else {
            return Err(err(line, col, "a [section] header first"));
        };
        match (sec, key) {
            (Section::Ring, "kind") => st.kind = Some((value.to_string(), line, vcol)),
            (Section::Ring, "d") => {
                let d: i64 = value.parse().map_err(|_| err(line, vcol, "integer d"))?;
                st.d = Some((d, line, vcol));
            }
            (Section::Group, "n") => {
                let n: usize = value.parse().map_err(|_| err(line, vcol, "positive integer n"))?;
                if n == 0 || st.n.is_some() {
                    return Err(err(line, vcol, "a single positive n"));
                }
                st.n = Some(n);
            }
            (Section::Group, "row") => {
                let n = st.n(line)?;
                if st.group.len() == n {
                    return Err(err(line, col, format!("only {n} rows")));
                }
                let items = split_cols(value, vcol, ',');
                if items.len() != n {
                    return Err(err(line, vcol, format!("{n} comma-separated entries")));
                }
                let mut row = Vec::with_capacity(n);
                for (t, c) in items {
                    let x: usize = t.parse().map_err(|_| err(line, c, format!("group element index below {n}")))?;
                    if x >= n {
                        return Err(err(line, c, format!("group element index below {n}")));
                    }
                    row.push(x);
                }
                st.group.push(row);
            }
            (Section::Action, k) => {
                let n = st.n(line)?;
                let g: usize = k
                    .parse()
                    .ok()
                    .filter(|&g| g < n)
                    .ok_or_else(|| err(line, col, format!("group element index below {n}")))?;
                if st.action[g].is_some() {
                    return Err(err(line, col, format!("a single action for element {g}")));
                }
                st.action[g] = Some(match value {
                    "id" => SigmaAction::IDENTITY,
                    "conj" => SigmaAction::CONJUGATION,
                    _ => return Err(err(line, vcol, "'id' or 'conj'")),
                });
            }
            (Section::Alpha, "row") => {
                let n = st.n(line)?;
                let ring = st.ring(line)?;
                if st.alpha.len() == n {
                    return Err(err(line, col, format!("only {n} rows")));
                }
                let items = split_cols(value, vcol, ',');
                if items.len() != n {
                    return Err(err(line, vcol, format!("{n} comma-separated entries")));
                }
                let row = items
                    .into_iter()
                    .map(|(t, c)| parse_r(&ring, t, line, c))
                    .collect::<Result<Vec<_>, _>>()?;
                st.alpha.push(row);
            }
            (Section::Lattice(i), "gen") => {
                let n = st.n(line)?;
                let ring = st.ring(line)?;
                let items = split_cols(value, vcol, ';');
                if items.len() != n {
                    return Err(err(line, vcol, format!("{n} ';'-separated coefficients")));
                }
                let g = items
                    .into_iter()
                    .map(|(t, c)| parse_k(&ring, t, line, c))
                    .collect::<Result<Vec<_>, _>>()?;
                st.lattices[i].gens.push(g);
            }
            (Section::Graded(i), k) => {
                let n = st.n(line)?;
                let ring = st.ring(line)?;
                let g: usize = k
                    .parse()
                    .ok()
                    .filter(|&g| g < n)
                    .ok_or_else(|| err(line, col, format!("group element index below {n}")))?;
                if st.graded[i].1[g].is_some() {
                    return Err(err(line, col, format!("a single component for element {g}")));
                }
                let x = parse_k(&ring, value, line, vcol)?;
                if x.is_zero() {
                    return Err(err(line, vcol, "nonzero ideal generator"));
                }
                st.graded[i].1[g] = Some(x);
            }
            (Section::Ring, _) => return Err(err(line, col, "'kind' or 'd'")),
            (Section::Group, _) => return Err(err(line, col, "'n' or 'row'")),
            (Section::Alpha, _) => return Err(err(line, col, "'row'")),
            (Section::Lattice(_), _) => return Err(err(line, col, "'gen'")),
        }
    }
    let end = last_line + 1;
    if st.seen.contains(&Section::Ring) {
        st.ring(end)?;
    }
    for (sec, name) in [
        (Section::Ring, "[ring]"),
        (Section::Group, "[group]"),
        (Section::Action, "[action]"),
        (Section::Alpha, "[alpha]"),
    ] {
        if !st.seen.contains(&sec) {
            return Err(err(end, 1, format!("a {name} section")));
        }
    }
    let ring = st.ring(end)?;
    let n = st.n(end)?;
    if st.group.len() != n {
        return Err(err(end, 1, format!("{n} rows in [group]")));
    }
    if st.alpha.len() != n {
        return Err(err(end, 1, format!("{n} rows in [alpha]")));
    }
    let action = st
        .action
        .iter()
        .enumerate()
        .map(|(g, a)| a.ok_or_else(|| err(end, 1, format!("an action for element {g}"))))
        .collect::<Result<Vec<_>, _>>()?;
    for l in &st.lattices {
        if l.gens.is_empty() {
            return Err(err(end, 1, format!("at least one 'gen' in [lattice {}]", l.name)));
        }
    }
    let graded = st
        .graded
        .into_iter()
        .map(|(name, comps, at)| {
            let components = comps
                .into_iter()
                .enumerate()
                .map(|(g, c)| c.ok_or_else(|| err(at, 1, format!("component {g} in [graded {name}]"))))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(NamedGraded { name, components })
        })
        .collect::<Result<Vec<_>, ParseError>>()?;
    Ok(SpecFile {
        ring,
        group: st.group,
        action,
        alpha: st.alpha,
        lattices: st.lattices,
        graded,
    })
}

impl fmt::Display for SpecFile {
    /// Canonical text; parsing it gives back an equal `SpecFile`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[ring]")?;
        if self.ring.is_quadratic() {
            writeln!(f, "kind = quadratic\nd = {}", self.ring.d())?;
        } else {
            writeln!(f, "kind = integers")?;
        }
        writeln!(f, "\n[group]\nn = {}", self.group.len())?;
        for row in &self.group {
            let r: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "row = {}", r.join(", "))?;
        }
        writeln!(f, "\n[action]")?;
        for (g, a) in self.action.iter().enumerate() {
            writeln!(f, "{g} = {}", if a.conjugates { "conj" } else { "id" })?;
        }
        writeln!(f, "\n[alpha]")?;
        for row in &self.alpha {
            let r: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "row = {}", r.join(", "))?;
        }
        for l in &self.lattices {
            writeln!(f, "\n[lattice {}]", l.name)?;
            for g in &l.gens {
                let r: Vec<String> = g.iter().map(ToString::to_string).collect();
                writeln!(f, "gen = {}", r.join("; "))?;
            }
        }
        for g in &self.graded {
            writeln!(f, "\n[graded {}]", g.name)?;
            for (h, c) in g.components.iter().enumerate() {
                writeln!(f, "{h} = {c}")?;
            }
        }
        Ok(())
    }
}

/// Render `x ∈ K` as a literal that [`parse_spec`] reads back.
pub fn kelem_literal(x: &KElem) -> String {
    x.to_string()
}
