//! Text and JSON forms of a formal map.
//!
//! ```text
//! ring Q            # or Z, Fp 5 (also F 5)
//! dim 2
//! cap 6
//! map g
//!   1 = x1 + 1/2*x1^2 - x1*x2
//!   2 = x2 + (x1 + x2)^3
//! ```
//!
//! Polynomials use `+ - * ^`, parentheses, ring literals and the variables
//! `x1 .. xd`. They are expanded and truncated to the cap. Absent components
//! are zero; constant terms are rejected. `#` starts a comment.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::maps::FormalMap;
use crate::ring::Ring;
use crate::series::Series;

/// Version tag of the JSON form.
pub const JSON_FORMAT: &str = "formalflows/1";

/// A parsed map file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapFile {
    pub name: String,
    pub map: FormalMap,
}

impl MapFile {
    pub fn new(name: impl Into<String>, map: FormalMap) -> MapFile {
        MapFile { name: name.into(), map }
    }

    pub fn parse(text: &str) -> Result<MapFile> {
        parse_map_file(text, None)
    }

    /// Canonical text form; parsing it gives back the same map.
    pub fn render(&self) -> String {
        render_map(&self.name, &self.map)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "format": JSON_FORMAT,
            "name": self.name,
            "ring": self.map.ring().to_string(),
            "dim": self.map.dim(),
            "cap": self.map.cap(),
            "components": self.map.to_json(),
        })
    }
}

pub fn render_map(name: &str, map: &FormalMap) -> String {
    let mut out = format!("ring {}\ndim {}\ncap {}\nmap {name}\n", map.ring(), map.dim(), map.cap());
    for (i, c) in map.components().iter().enumerate() {
        out.push_str(&format!("  {} = {c}\n", i + 1));
    }
    out
}

fn parse_err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

/// Parses a map file. With `cap_override` the polynomials are expanded to
/// that cap instead of the declared one.
pub fn parse_map_file(text: &str, cap_override: Option<u32>) -> Result<MapFile> {
    let mut ring = None;
    let mut dim = None;
    let mut cap = None;
    let mut name = None;
    let mut bodies: BTreeMap<usize, (usize, usize, &str)> = BTreeMap::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = content.len() - trimmed.len();
        let col_of = |s: &str| s.as_ptr() as usize - raw.as_ptr() as usize + 1;
        let mut words = trimmed.split_whitespace();
        let keyword = words.next().unwrap();
        match keyword {
            "ring" => {
                let kind = words.next().ok_or_else(|| parse_err(lineno, indent + 1, "missing ring"))?;
                ring = Some(match kind {
                    "Q" => Ring::Q,
                    "Z" => Ring::Z,
                    "Fp" | "F" => {
                        let p =
                            words.next().ok_or_else(|| parse_err(lineno, col_of(kind), "missing characteristic"))?;
                        let c: u64 =
                            p.parse().map_err(|_| parse_err(lineno, col_of(p), format!("bad characteristic {p:?}")))?;
                        Ring::prime_field(c).map_err(|e| parse_err(lineno, col_of(p), e.to_string()))?
                    }
                    other => return Err(parse_err(lineno, col_of(other), format!("unknown ring {other:?}"))),
                });
            }
            "dim" | "cap" => {
                let v = words
                    .next()
                    .ok_or_else(|| parse_err(lineno, indent + 1, format!("missing value for {keyword}")))?;
                let n: u32 = v.parse().map_err(|_| parse_err(lineno, col_of(v), format!("bad {keyword} {v:?}")))?;
                if n == 0 {
                    return Err(parse_err(lineno, col_of(v), format!("{keyword} must be at least 1")));
                }
                if keyword == "dim" {
                    dim = Some(n as usize);
                } else {
                    cap = Some(n);
                }
            }
            "map" => {
                if name.is_some() {
                    return Err(parse_err(lineno, indent + 1, "only one map per file"));
                }
                let n = words.next().ok_or_else(|| parse_err(lineno, indent + 1, "missing map name"))?;
                name = Some(n.to_string());
            }
            _ => {
                let Some((lhs, rhs)) = trimmed.split_once('=') else {
                    return Err(parse_err(lineno, indent + 1, format!("unexpected {keyword:?}")));
                };
                if name.is_none() {
                    return Err(parse_err(lineno, indent + 1, "component before `map` line"));
                }
                let d = dim.ok_or_else(|| parse_err(lineno, indent + 1, "component before `dim` line"))?;
                let i: usize = lhs
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(lineno, indent + 1, format!("bad component index {:?}", lhs.trim())))?;
                if i == 0 || i > d {
                    return Err(parse_err(lineno, indent + 1, format!("component index {i} outside 1..={d}")));
                }
                if bodies.insert(i, (lineno, col_of(rhs), rhs)).is_some() {
                    return Err(parse_err(lineno, indent + 1, format!("component {i} given twice")));
                }
            }
        }
        if !matches!(keyword, "ring" | "dim" | "cap" | "map") {
            continue;
        }
        if let Some(extra) = words.next() {
            return Err(parse_err(lineno, col_of(extra), format!("unexpected {extra:?}")));
        }
    }

    let eof = last_line + 1;
    let ring = ring.ok_or_else(|| parse_err(eof, 1, "missing `ring` line"))?;
    let dim = dim.ok_or_else(|| parse_err(eof, 1, "missing `dim` line"))?;
    let cap = cap_override.or(cap).ok_or_else(|| parse_err(eof, 1, "missing `cap` line"))?;
    let name = name.ok_or_else(|| parse_err(eof, 1, "missing `map` line"))?;

    let mut components = Vec::with_capacity(dim);
    for i in 1..=dim {
        let series = match bodies.get(&i) {
            None => Series::zero(ring, dim, cap),
            Some(&(line, col, body)) => {
                let s = PolyParser::new(ring, dim, cap, line, col, body)?.parse()?;
                if !s.constant_term().is_zero() {
                    return Err(parse_err(line, col, format!("component {i} has a nonzero constant term")));
                }
                s
            }
        };
        components.push(series);
    }
    Ok(MapFile { name, map: FormalMap::new(components)? })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(String),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

struct PolyParser {
    ring: Ring,
    dim: usize,
    cap: u32,
    line: usize,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl PolyParser {
    fn new(ring: Ring, dim: usize, cap: u32, line: usize, col: usize, body: &str) -> Result<PolyParser> {
        let chars: Vec<char> = body.chars().collect();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let ch = chars[i];
            let at = col + i;
            let single = match ch {
                '+' => Some(Tok::Plus),
                '-' => Some(Tok::Minus),
                '*' => Some(Tok::Star),
                '^' => Some(Tok::Caret),
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                _ => None,
            };
            if let Some(t) = single {
                toks.push((t, at));
                i += 1;
            } else if ch.is_whitespace() {
                i += 1;
            } else if ch.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                toks.push((Tok::Num(chars[start..i].iter().collect()), at));
            } else if ch == 'x' {
                let start = i + 1;
                i = start;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let idx: usize = chars[start..i]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| parse_err(line, at, "variable needs an index, as in x1"))?;
                if idx == 0 || idx > dim {
                    return Err(parse_err(line, at, format!("variable x{idx} outside x1..x{dim}")));
                }
                toks.push((Tok::Var(idx - 1), at));
            } else {
                return Err(parse_err(line, at, format!("unexpected character {ch:?}")));
            }
        }
        Ok(PolyParser { ring, dim, cap, line, toks, pos: 0, end_col: col + chars.len() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |&(_, c)| c)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        parse_err(self.line, self.col(), msg)
    }

    fn parse(mut self) -> Result<Series> {
        if self.toks.is_empty() {
            return Err(self.err("empty polynomial"));
        }
        let s = self.expr()?;
        if self.pos < self.toks.len() {
            return Err(self.err("unexpected token"));
        }
        Ok(s)
    }

    fn expr(&mut self) -> Result<Series> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add_unchecked(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.add_unchecked(&self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Series> {
        let mut acc = self.signed()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            acc = acc.mul_unchecked(&self.signed()?);
        }
        Ok(acc)
    }

    fn signed(&mut self) -> Result<Series> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(self.signed()?.neg())
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.signed()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Series> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        match self.toks.get(self.pos) {
            Some((Tok::Num(n), _)) if !n.contains('/') => {
                let e: u32 = n.parse().map_err(|_| self.err(format!("exponent {n} too large")))?;
                self.pos += 1;
                Ok(base.pow(e))
            }
            _ => Err(self.err("expected a nonnegative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Series> {
        let Some((tok, _)) = self.toks.get(self.pos).cloned() else {
            return Err(self.err("unexpected end of polynomial"));
        };
        match tok {
            Tok::Num(text) => {
                let c = self.ring.parse_literal(&text).map_err(|m| self.err(m))?;
                self.pos += 1;
                Ok(Series::constant(c, self.dim, self.cap))
            }
            Tok::Var(i) => {
                self.pos += 1;
                Ok(Series::var(self.ring, self.dim, self.cap, i))
            }
            Tok::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.err("expected a literal, variable or `(`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::Monomial;

    fn parse(text: &str) -> Result<MapFile> {
        MapFile::parse(text)
    }

    fn err_at(text: &str) -> (usize, usize, String) {
        match parse(text) {
            Err(Error::Parse { line, col, msg }) => (line, col, msg),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn basic_map() {
        let f = parse("ring Q\ndim 1\ncap 4\nmap g\n1 = x1 + x1^2\n").unwrap();
        assert_eq!(f.name, "g");
        assert_eq!(f.map.to_string(), "1 = x1 + x1^2");
        assert_eq!(f.render(), "ring Q\ndim 1\ncap 4\nmap g\n  1 = x1 + x1^2\n");
    }

    #[test]
    fn expansion_and_truncation() {
        let f = parse(
            "ring Z\ndim 2\ncap 3\nmap h\n  1 = x1*(1 + x2)^5 - 2*x1\n  # second\n  2 = (x1 - x2)^2 + x2   # tail\n",
        )
        .unwrap();
        assert_eq!(f.map.component(0).to_string(), "-x1 + 5*x1*x2 + 10*x1*x2^2");
        assert_eq!(f.map.component(1).to_string(), "x2 + x1^2 - 2*x1*x2 + x2^2");
        let g = parse_map_file("ring Z\ndim 1\ncap 2\nmap h\n1 = x1 + x1^3\n", Some(4)).unwrap();
        assert_eq!(g.map.cap(), 4);
        assert_eq!(g.map.component(0).coeff(&Monomial::new([3])), Ring::Z.one());
    }

    #[test]
    fn prime_field_literals() {
        let f = parse("ring Fp 3\ndim 1\ncap 3\nmap g\n1 = x1 - x1^2 + 7*x1^3\n").unwrap();
        assert_eq!(f.map.to_string(), "1 = x1 + 2*x1^2 + x1^3");
        let g = parse("ring F 5\ndim 1\ncap 2\nmap g\n1 = x1\n").unwrap();
        assert_eq!(g.map.ring(), Ring::prime_field(5).unwrap());
    }

    #[test]
    fn absent_components_are_zero() {
        let f = parse("ring Q\ndim 2\ncap 2\nmap z\n2 = x1\n").unwrap();
        assert!(f.map.component(0).is_zero());
        assert_eq!(f.render(), "ring Q\ndim 2\ncap 2\nmap z\n  1 = 0\n  2 = x1\n");
        assert_eq!(parse(&f.render()).unwrap(), f);
    }

    #[test]
    fn errors_carry_positions() {
        let (line, col, msg) = err_at("ring Q\ndim 1\ncap 4\nmap g\n1 = 1 + x1\n");
        assert_eq!((line, col), (5, 4));
        assert!(msg.contains("constant"), "{msg}");
        let (line, col, msg) = err_at("ring F 4\n");
        assert_eq!((line, col), (1, 8));
        assert!(msg.contains("not prime"), "{msg}");
        let (line, col, _) = err_at("ring Q\ndim 2\ncap 4\nmap g\n1 = x1 + x3\n");
        assert_eq!((line, col), (5, 10));
        let (line, col, msg) = err_at("ring Z\ndim 1\ncap 4\nmap g\n1 = x1 + 1/2*x1^2\n");
        assert_eq!((line, col), (5, 10));
        assert!(msg.contains("not in Z"), "{msg}");
        let (_, _, msg) = err_at("ring Fp 3\ndim 1\ncap 4\nmap g\n1 = 1/2*x1\n");
        assert!(msg.contains("not in Fp 3"), "{msg}");
        let (line, col, _) = err_at("ring Q\ndim 1\ncap 4\nmap g\n1 = (x1 + x1^2\n");
        assert_eq!((line, col), (5, 15));
        let (line, _, _) = err_at("ring Q\ndim 1\ncap 4\nmap g\n1 = x1\n1 = x1\n");
        assert_eq!(line, 6);
        let (line, _, _) = err_at("ring Q\ncap 4\nmap g\n");
        assert_eq!(line, 4);
        let (_, col, _) = err_at("ring Q\ndim 1\ncap 4\nmap g\n1 = x1 $ x1\n");
        assert_eq!(col, 8);
        assert_eq!(err_at("ring Q\ndim 1\ncap 4 5\nmap g\n").1, 7);
        assert_eq!(err_at("ring Q\ndim 1\ncap 4\nmap g\n1 = x1^x1\n").1, 8);
        assert_eq!(err_at("ring Q\ndim 1\ncap 4\nmap g\n2 = x1\n").0, 5);
    }

    #[test]
    fn json_form() {
        let f = parse("ring Q\ndim 1\ncap 3\nmap g\n1 = x1 - 1/2*x1^3\n").unwrap();
        let j = f.to_json();
        assert_eq!(j["format"], JSON_FORMAT);
        assert_eq!(j["ring"], "Q");
        assert_eq!(j["components"][0][1]["coeff"], "-1/2");
        assert_eq!(j["components"][0][1]["exponents"][0], 3);
    }
}
