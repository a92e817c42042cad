//! Problem files.
//!
//! ```text
//! # comment
//! ring Z/24              # or: Z, Z loc 2,3
//! vars x y
//! order grlex x > y      # optional, defaults to declaration order
//! ideal
//!   f1 = 14*x*y^2*x - 16*y*x^2
//!   f2 = 22*x^2*y^2 - 36*y*x
//! queries                # optional
//!   q = x*f1
//! ```
//!
//! Products need an explicit `*`. `^` binds tighter than `*`. Integer
//! fractions such as `3/4` are only accepted over localized rings. Names
//! from the ideal block may be used in later expressions.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::coeff::RingSpec;
use crate::ordering::AdmissibleOrder;
use crate::poly::{NcPoly, PolyRing};
use crate::words::{Alphabet, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

fn err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        col,
        msg: msg.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemFile {
    pub ring: PolyRing,
    pub ideal: Vec<(String, NcPoly)>,
    pub queries: Vec<(String, NcPoly)>,
}

impl ProblemFile {
    pub fn generators(&self) -> Vec<NcPoly> {
        self.ideal.iter().map(|(_, p)| p.clone()).collect()
    }

    pub fn generator(&self, name: &str) -> Option<&NcPoly> {
        self.ideal.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }

    /// Parses a polynomial over this file's ring. Ideal names are in scope.
    pub fn parse_poly(&self, text: &str) -> Result<NcPoly, ParseError> {
        Expr::new(&self.ring, &self.ideal, text, 1, 1).parse_all()
    }
}

impl fmt::Display for ProblemFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pr = &self.ring;
        writeln!(f, "ring {}", pr.ring)?;
        writeln!(f, "vars {}", pr.alphabet.names().join(" "))?;
        let chain: Vec<&str> = pr.order.precedence().iter().map(|&l| pr.alphabet.name(l)).collect();
        writeln!(f, "order grlex {}", chain.join(" > "))?;
        writeln!(f, "ideal")?;
        for (n, p) in &self.ideal {
            writeln!(f, "  {n} = {}", pr.format(p))?;
        }
        if !self.queries.is_empty() {
            writeln!(f, "queries")?;
            for (n, p) in &self.queries {
                writeln!(f, "  {n} = {}", pr.format(p))?;
            }
        }
        Ok(())
    }
}

fn parse_ring(rest: &str, line: usize, col: usize) -> Result<RingSpec, ParseError> {
    let s = rest.trim();
    let int = |t: &str| -> Result<BigInt, ParseError> {
        t.trim()
            .parse::<BigInt>()
            .or_else(|_| err(line, col, format!("expected an integer, found `{}`", t.trim())))
    };
    let spec = if s == "Z" {
        Ok(RingSpec::integers())
    } else if let Some(n) = s.strip_prefix("Z/") {
        RingSpec::modular(int(n)?)
    } else if let Some(g) = s.strip_prefix("Z loc ") {
        let gens = g.split(',').map(int).collect::<Result<Vec<_>, _>>()?;
        RingSpec::localized(gens)
    } else {
        return err(line, col, format!("unknown ring `{s}`; expected Z, Z/n or Z loc a,b"));
    };
    spec.or_else(|e| err(line, col, e.to_string()))
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn valid_name(s: &str) -> bool {
    s.chars().next().is_some_and(is_ident_start) && s.chars().all(is_ident)
}

#[derive(PartialEq)]
enum Section {
    Header,
    Ideal,
    Queries,
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, ParseError> {
    let mut ring: Option<RingSpec> = None;
    let mut vars: Option<Alphabet> = None;
    let mut order: Option<(Vec<String>, usize)> = None;
    let mut pr: Option<PolyRing> = None;
    let mut ideal: Vec<(String, NcPoly)> = Vec::new();
    let mut queries: Vec<(String, NcPoly)> = Vec::new();
    let mut section = Section::Header;
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        last_line = ln;
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col = body.len() - body.trim_start().len() + 1;
        let (kw, rest) = match trimmed.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r),
            None => (trimmed, ""),
        };
        match kw {
            "ring" | "vars" | "order" if section != Section::Header => {
                return err(ln, col, format!("`{kw}` must precede the ideal block"));
            }
            "ring" => {
                if ring.is_some() {
                    return err(ln, col, "duplicate `ring` line");
                }
                ring = Some(parse_ring(rest, ln, col + 5)?);
            }
            "vars" => {
                if vars.is_some() {
                    return err(ln, col, "duplicate `vars` line");
                }
                let names: Vec<&str> = rest.split_whitespace().collect();
                if let Some(bad) = names.iter().find(|n| !valid_name(n)) {
                    return err(ln, col, format!("invalid variable name `{bad}`"));
                }
                vars = Some(Alphabet::new(names).or_else(|e| err(ln, col, e.to_string()))?);
            }
            "order" => {
                if order.is_some() {
                    return err(ln, col, "duplicate `order` line");
                }
                let rest = rest.trim();
                let chain = match rest.strip_prefix("grlex") {
                    Some(c) => c,
                    None => return err(ln, col, "only `grlex` orders are supported"),
                };
                let names: Vec<String> = chain.split('>').map(|s| s.trim().to_string()).collect();
                order = Some((names, ln));
            }
            "ideal" | "queries" if !rest.trim().is_empty() => {
                return err(ln, col, format!("`{kw}` takes no arguments"));
            }
            "ideal" => {
                if section != Section::Header {
                    return err(ln, col, "duplicate `ideal` block");
                }
                pr = Some(build_ring(ring.take(), vars.take(), order.take(), ln, col)?);
                section = Section::Ideal;
            }
            "queries" => {
                if section != Section::Ideal {
                    return err(ln, col, "`queries` must follow the ideal block");
                }
                section = Section::Queries;
            }
            _ => {
                let Some(pr) = pr.as_ref() else {
                    return err(ln, col, format!("unexpected `{kw}`"));
                };
                let (name, expr, ecol) = match body.find('=') {
                    Some(eq) => {
                        let name = body[..eq].trim();
                        if !valid_name(name) {
                            return err(ln, col, format!("invalid name `{name}`"));
                        }
                        (Some(name.to_string()), &body[eq + 1..], eq + 2)
                    }
                    None => (None, body, 1),
                };
                let poly = Expr::new(pr, &ideal, expr, ln, ecol).parse_all()?;
                match section {
                    Section::Ideal => {
                        let Some(name) = name else {
                            return err(ln, col, "ideal entries need a name: `f = ...`");
                        };
                        if ideal.iter().any(|(n, _)| *n == name) || pr.alphabet.index_of(&name).is_some() {
                            return err(ln, col, format!("name `{name}` already in use"));
                        }
                        ideal.push((name, poly));
                    }
                    _ => {
                        let name = name.unwrap_or_else(|| format!("q{}", queries.len() + 1));
                        queries.push((name, poly));
                    }
                }
            }
        }
    }
    let Some(ring) = pr else {
        return err(last_line.max(1), 1, "missing `ideal` block");
    };
    if ideal.is_empty() {
        return err(last_line, 1, "empty ideal block");
    }
    Ok(ProblemFile { ring, ideal, queries })
}

fn build_ring(
    ring: Option<RingSpec>,
    vars: Option<Alphabet>,
    order: Option<(Vec<String>, usize)>,
    ln: usize,
    col: usize,
) -> Result<PolyRing, ParseError> {
    let Some(ring) = ring else {
        return err(ln, col, "missing `ring` line");
    };
    let Some(alpha) = vars else {
        return err(ln, col, "missing `vars` line");
    };
    let ord = match order {
        None => AdmissibleOrder::graded_lex_natural(alpha.len()),
        Some((names, oln)) => {
            if names.len() != alpha.len() {
                return err(oln, 1, "order must mention every variable exactly once");
            }
            let mut prec: Vec<Letter> = Vec::new();
            for n in &names {
                match alpha.index_of(n) {
                    Some(l) => prec.push(l),
                    None => return err(oln, 1, format!("unknown variable `{n}` in order")),
                }
            }
            AdmissibleOrder::graded_lex(prec).or_else(|e| err(oln, 1, e.to_string()))?
        }
    };
    Ok(PolyRing::new(ring, ord, alpha))
}

struct Expr<'a> {
    pr: &'a PolyRing,
    names: &'a [(String, NcPoly)],
    src: Vec<char>,
    pos: usize,
    line: usize,
    col0: usize,
}

impl<'a> Expr<'a> {
    fn new(pr: &'a PolyRing, names: &'a [(String, NcPoly)], text: &str, line: usize, col0: usize) -> Self {
        Expr {
            pr,
            names,
            src: text.chars().collect(),
            pos: 0,
            line,
            col0,
        }
    }

    fn fail<T>(&self, at: usize, msg: impl Into<String>) -> Result<T, ParseError> {
        err(self.line, self.col0 + at, msg)
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse_all(mut self) -> Result<NcPoly, ParseError> {
        if self.peek().is_none() {
            return self.fail(self.pos, "expected an expression");
        }
        let p = self.sum()?;
        match self.peek() {
            None => Ok(p),
            Some(c) => self.fail(self.pos, format!("unexpected `{c}`")),
        }
    }

    fn sum(&mut self) -> Result<NcPoly, ParseError> {
        let pr = self.pr;
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                let p = self.product()?;
                pr.neg(&p)
            }
            Some('+') => {
                self.pos += 1;
                self.product()?
            }
            _ => self.product()?,
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    let p = self.product()?;
                    acc = pr.add(&acc, &p);
                }
                Some('-') => {
                    self.pos += 1;
                    let p = self.product()?;
                    acc = pr.sub(&acc, &p);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<NcPoly, ParseError> {
        let mut acc = self.power()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            let p = self.power()?;
            acc = self.pr.mul(&acc, &p);
        }
        if let Some(c) = self.peek() {
            if is_ident_start(c) || c.is_ascii_digit() || c == '(' {
                return self.fail(self.pos, "missing `*` between factors");
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<NcPoly, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let at = self.pos;
        let digits = self.digits();
        let e: u32 = match digits.parse() {
            Ok(e) => e,
            Err(_) => return self.fail(at, "expected a non-negative exponent"),
        };
        let mut out = self.pr.monomial(self.pr.ring.from_int(1), Word::empty());
        for _ in 0..e {
            out = self.pr.mul(&out, &base);
        }
        Ok(out)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos].iter().collect()
    }

    fn atom(&mut self) -> Result<NcPoly, ParseError> {
        let pr = self.pr;
        let at = self.pos;
        match self.peek() {
            None => self.fail(at, "unexpected end of expression"),
            Some('(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if self.peek() != Some(')') {
                    return self.fail(self.pos, "expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let num: BigInt = self.digits().parse().expect("digits");
                let c = if self.peek() == Some('/') {
                    if !matches!(pr.ring, RingSpec::Localized { .. }) {
                        return self.fail(self.pos, format!("fraction in non-localized ring {}", pr.ring));
                    }
                    self.pos += 1;
                    self.skip_ws();
                    let dat = self.pos;
                    let d = self.digits();
                    let den: BigInt = match d.parse() {
                        Ok(v) => v,
                        Err(_) => return self.fail(dat, "expected a denominator"),
                    };
                    match pr.ring.from_ratio(num, den) {
                        Ok(c) => c,
                        Err(e) => return self.fail(start, e.to_string()),
                    }
                } else {
                    pr.ring.from_int(num)
                };
                Ok(pr.monomial(c, Word::empty()))
            }
            Some(c) if is_ident_start(c) => {
                let start = self.pos;
                while self.src.get(self.pos).is_some_and(|&c| is_ident(c)) {
                    self.pos += 1;
                }
                let name: String = self.src[start..self.pos].iter().collect();
                if let Some(l) = pr.alphabet.index_of(&name) {
                    return Ok(pr.monomial(pr.ring.from_int(1), Word::from(vec![l])));
                }
                if let Some((_, p)) = self.names.iter().find(|(n, _)| *n == name) {
                    return Ok(p.clone());
                }
                self.fail(start, format!("unknown variable `{name}`"))
            }
            Some(c) => self.fail(self.pos, format!("unexpected `{c}`")),
        }
    }
}
