//! Plain-text polynomial format.
//!
//! ```text
//! # comment
//! vars: x1,x2,xi1,xi2
//! x1*x2 + 0x1f*xi1^3 + xi2^3
//! 0
//! ```
//!
//! A file starts with a `vars:` header listing the variable names. Each
//! following non-blank line is one polynomial: `+`-separated terms, each a
//! `*`-separated product of an optional coefficient and factors `name` or
//! `name^e`. Coefficients are `0x` hex bit patterns of GF(2^k) elements
//! (decimal `0` and `1` are accepted too); an omitted coefficient means 1.
//! Whitespace is ignored and `#` starts a comment.
//!
//! Matrices use one line per row holding the comma-separated entries
//! above the diagonal, so an `n x n` alternating matrix has rows of
//! `n-1, n-2, ..., 1` entries.

use super::monomial::{Exp, Monomial, Vars};
use super::ring::Ring;
use super::{Gf2k, GfElem, MultiPoly, Poly};
use crate::error::{Error, Result};

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
    line: usize,
    col0: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && (self.s[self.pos] as char).is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn col(&self) -> usize {
        self.col0 + self.pos + 1
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        perr(self.line, self.col(), msg)
    }

    fn take_while<F: Fn(u8) -> bool>(&mut self, f: F) -> &'a str {
        let start = self.pos;
        while self.pos < self.s.len() && f(self.s[self.pos]) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("")
    }
}

fn is_ident_start(c: u8) -> bool {
    c.is_ascii_alphabetic() || c == b'_'
}

fn is_ident(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

fn parse_coeff(c: &mut Cursor, field: &Gf2k) -> Result<GfElem> {
    let col = c.col();
    let tok = c.take_while(|b| b.is_ascii_alphanumeric());
    let bits = if let Some(hex) = tok.strip_prefix("0x").or_else(|| tok.strip_prefix("0X")) {
        u64::from_str_radix(hex, 16).map_err(|_| perr(c.line, col, format!("bad hex coefficient `{tok}`")))?
    } else {
        tok.parse::<u64>()
            .ok()
            .filter(|&v| v <= 1)
            .ok_or_else(|| perr(c.line, col, format!("bad coefficient `{tok}` (use 0x hex)")))?
    };
    field
        .elem(bits)
        .map_err(|e| perr(c.line, col, e.to_string()))
}

fn parse_term(c: &mut Cursor, field: &Gf2k, vars: &Vars) -> Result<(Monomial, GfElem)> {
    let mut coeff = field.one();
    let mut exps = vec![0 as Exp; vars.len()];
    let mut first = true;
    loop {
        match c.peek() {
            Some(b) if b.is_ascii_digit() => {
                if !first {
                    return Err(c.err("coefficient must come first in a term"));
                }
                coeff = parse_coeff(c, field)?;
            }
            Some(b) if is_ident_start(b) => {
                let col = c.col();
                let name = c.take_while(is_ident);
                let i = vars
                    .index(name)
                    .map_err(|_| perr(c.line, col, format!("unknown variable `{name}`")))?;
                let mut e: u32 = 1;
                if c.peek() == Some(b'^') {
                    c.pos += 1;
                    c.skip_ws();
                    let col = c.col();
                    let digits = c.take_while(|b| b.is_ascii_digit());
                    e = digits
                        .parse()
                        .ok()
                        .filter(|&e: &u32| e <= Exp::MAX as u32)
                        .ok_or_else(|| perr(c.line, col, "expected an exponent"))?;
                }
                let total = exps[i] as u32 + e;
                if total > Exp::MAX as u32 {
                    return Err(perr(c.line, col, "exponent too large"));
                }
                exps[i] = total as Exp;
            }
            Some(_) => return Err(c.err("expected a coefficient or variable")),
            None => return Err(c.err("unexpected end of line")),
        }
        first = false;
        if c.peek() == Some(b'*') {
            c.pos += 1;
        } else {
            break;
        }
    }
    Ok((Monomial::from_exps(&exps), coeff))
}

/// Parse one polynomial. `line` and `col0` locate the text for diagnostics.
pub fn parse_poly_at(s: &str, field: &Gf2k, vars: &Vars, line: usize, col0: usize) -> Result<Poly> {
    let mut c = Cursor {
        s: s.as_bytes(),
        pos: 0,
        line,
        col0,
    };
    let mut p = MultiPoly::zero(field, vars);
    if c.peek().is_none() {
        return Err(c.err("empty polynomial"));
    }
    loop {
        let (m, k) = parse_term(&mut c, field, vars)?;
        p.add_term(m, &k);
        match c.peek() {
            Some(b'+') => c.pos += 1,
            None => break,
            Some(_) => return Err(c.err("expected `+` or end of line")),
        }
    }
    Ok(p)
}

pub fn parse_poly(s: &str, field: &Gf2k, vars: &Vars) -> Result<Poly> {
    parse_poly_at(s, field, vars, 1, 0)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// `(line number, text)` of every non-blank line after comment removal.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l)))
        .filter(|(_, l)| !l.trim().is_empty())
}

pub fn parse_vars_header(line: &str, line_no: usize) -> Result<Vars> {
    let t = line.trim_start();
    let lead = line.len() - t.len();
    let rest = t
        .strip_prefix("vars:")
        .ok_or_else(|| perr(line_no, lead + 1, "expected `vars:` header"))?;
    let mut names: Vec<String> = Vec::new();
    let mut offset = lead + 5;
    for part in rest.split(',') {
        let name = part.trim();
        let col = offset + part.find(|ch: char| !ch.is_whitespace()).unwrap_or(0) + 1;
        offset += part.len() + 1;
        if name.is_empty() {
            if rest.trim().is_empty() {
                break;
            }
            return Err(perr(line_no, col, "empty variable name"));
        }
        let ok = name.bytes().next().is_some_and(is_ident_start) && name.bytes().all(is_ident);
        if !ok {
            return Err(perr(line_no, col, format!("bad variable name `{name}`")));
        }
        if names.iter().any(|n| n == name) {
            return Err(perr(line_no, col, format!("duplicate variable `{name}`")));
        }
        names.push(name.to_string());
    }
    Ok(Vars::new(names))
}

/// A header followed by any number of polynomials.
pub fn parse_system(text: &str, field: &Gf2k) -> Result<(Vars, Vec<Poly>)> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| perr(1, 1, "missing `vars:` header"))?;
    let vars = parse_vars_header(header, hl)?;
    let polys = lines
        .map(|(ln, l)| parse_poly_at(l, field, &vars, ln, 0))
        .collect::<Result<Vec<_>>>()?;
    Ok((vars, polys))
}

/// Upper-triangle rows of an alternating matrix: `rows[i][k]` is the entry
/// at `(i, i + 1 + k)`.
pub fn parse_upper_triangle(text: &str, field: &Gf2k) -> Result<(Vars, Vec<Vec<Poly>>)> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| perr(1, 1, "missing `vars:` header"))?;
    let vars = parse_vars_header(header, hl)?;
    let mut rows: Vec<Vec<Poly>> = Vec::new();
    let mut last_line = hl;
    for (ln, l) in lines {
        last_line = ln;
        let mut row = Vec::new();
        let mut col0 = 0;
        for cell in l.split(',') {
            row.push(parse_poly_at(cell, field, &vars, ln, col0)?);
            col0 += cell.len() + 1;
        }
        if let Some(prev) = rows.last() {
            if row.len() + 1 != prev.len() {
                return Err(perr(
                    ln,
                    1,
                    format!("row has {} entries, expected {}", row.len(), prev.len() - 1),
                ));
            }
        }
        rows.push(row);
    }
    if let Some(last) = rows.last() {
        if last.len() != 1 {
            return Err(perr(
                last_line + 1,
                1,
                format!("matrix ends early, {} more rows expected", last.len() - 1),
            ));
        }
    }
    Ok((vars, rows))
}

pub fn format_poly(p: &Poly) -> String {
    p.to_string()
}

pub fn format_system(vars: &Vars, polys: &[Poly]) -> String {
    let mut out = format!("vars: {vars}\n");
    for p in polys {
        out.push_str(&format_poly(p));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_terms() {
        let f = Gf2k::default();
        let (vars, ps) = parse_system("vars: x, y\n x^2*y + 0x3*y + 1\n\n0 # zero\n", &f).unwrap();
        assert_eq!(vars, Vars::new(["x", "y"]));
        assert_eq!(ps.len(), 2);
        assert_eq!(ps[0].num_terms(), 3);
        assert_eq!(ps[0].coeff_of(&[0, 1]), f.elem(3).unwrap());
        assert!(ps[1].is_zero());
    }

    #[test]
    fn round_trip() {
        let f = Gf2k::default();
        let src = "vars: a,b\n0x1f*a^3*b + a*b + b^2 + 0x2\n";
        let (vars, ps) = parse_system(src, &f).unwrap();
        let again = parse_system(&format_system(&vars, &ps), &f).unwrap();
        assert_eq!(again.1, ps);
    }

    #[test]
    fn reports_positions() {
        let f = Gf2k::default();
        let e = parse_system("vars: x\nx + q\n", &f).unwrap_err();
        assert_eq!(
            e,
            Error::Parse {
                line: 2,
                col: 5,
                msg: "unknown variable `q`".into()
            }
        );
        let e = parse_system("x\n", &f).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, col: 1, .. }));
        let e = parse_system("vars: x\nx +\n", &f).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        let e = parse_system("vars: x\n0x1ffff*x\n", &f).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, col: 1, .. }));
    }

    #[test]
    fn triangle_rows() {
        let f = Gf2k::default();
        let (_, rows) = parse_upper_triangle("vars: a\na, 0, 1\n0, a\n1\n", &f).unwrap();
        assert_eq!(rows.iter().map(Vec::len).collect::<Vec<_>>(), vec![3, 2, 1]);
        assert!(parse_upper_triangle("vars: a\na, 0, 1\n0\n", &f).is_err());
        assert!(parse_upper_triangle("vars: a\na, 0, 1\n0, a\n", &f).is_err());
    }
}
