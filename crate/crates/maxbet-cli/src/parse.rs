//! Mini-grammar for user-supplied linear forms, substitutions, and
//! constraint lists.
//!
//! Forms are integer linear combinations of `x`, `y`, `z` (an integer
//! constant is accepted while parsing, but any constraint whose sides do not
//! cancel it is rejected: the engine is homogeneous). Constraints chain, so
//! `0 < x < y < z` means `0 < x, x < y, y < z`. Lists split on `,`, `;` or
//! `&`. Whitespace never matters.

use std::fmt;

use maxbet_core::algebra::{Ineq, LinForm, Region};
use maxbet_core::expansion::Substitution;
use num::BigInt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at position {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { position, message: message.into() })
}

/// A linear form plus a constant, as written by the user.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineExpr {
    pub form: LinForm,
    pub constant: BigInt,
}

struct Scanner<'a> {
    chars: Vec<(usize, char)>,
    cursor: usize,
    len: usize,
    _text: &'a str,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Self {
        Scanner {
            chars: text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
            cursor: 0,
            len: text.len(),
            _text: text,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.cursor).map(|&(_, c)| c)
    }

    fn position(&self) -> usize {
        self.chars.get(self.cursor).map_or(self.len, |&(i, _)| i)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.cursor += 1;
        }
        c
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.cursor += 1;
            true
        } else {
            false
        }
    }

    fn at_end(&self) -> bool {
        self.cursor >= self.chars.len()
    }
}

fn parse_unsigned(s: &mut Scanner) -> Result<BigInt, ParseError> {
    let start = s.position();
    let mut digits = String::new();
    while let Some(c) = s.peek() {
        if c.is_ascii_digit() {
            digits.push(c);
            s.bump();
        } else {
            break;
        }
    }
    if digits.is_empty() {
        return err(start, "expected a number");
    }
    Ok(digits.parse().expect("digits parse as an integer"))
}

/// term := [integer]['*']('x'|'y'|'z') | integer
fn parse_term(s: &mut Scanner) -> Result<AffineExpr, ParseError> {
    let pos = s.position();
    let coef = if s.peek().is_some_and(|c| c.is_ascii_digit()) {
        Some(parse_unsigned(s)?)
    } else {
        None
    };
    if coef.is_some() {
        s.eat('*');
    }
    match s.peek() {
        Some('x') | Some('y') | Some('z') => {
            let var = s.bump().unwrap();
            let c = coef.unwrap_or_else(|| BigInt::from(1));
            let zero = BigInt::from(0);
            let form = match var {
                'x' => LinForm::new(c, zero.clone(), zero),
                'y' => LinForm::new(zero.clone(), c, zero),
                _ => LinForm::new(zero.clone(), zero.clone(), c),
            };
            Ok(AffineExpr { form, constant: BigInt::from(0) })
        }
        _ => match coef {
            Some(c) => Ok(AffineExpr { form: LinForm::new(0, 0, 0), constant: c }),
            None => err(pos, "expected a coefficient, variable (x, y, z), or integer"),
        },
    }
}

/// expr := ['+'|'-'] term (('+'|'-') term)*
fn parse_expr(s: &mut Scanner) -> Result<AffineExpr, ParseError> {
    let mut negate = false;
    if s.eat('-') {
        negate = true;
    } else {
        s.eat('+');
    }
    let first = parse_term(s)?;
    let mut acc = if negate {
        AffineExpr { form: first.form.neg(), constant: -first.constant }
    } else {
        first
    };
    loop {
        let negate = if s.eat('+') {
            false
        } else if s.eat('-') {
            true
        } else {
            break;
        };
        let next = parse_term(s)?;
        if negate {
            acc.form = acc.form.sub(&next.form);
            acc.constant -= next.constant;
        } else {
            acc.form = acc.form.add(&next.form);
            acc.constant += next.constant;
        }
    }
    Ok(acc)
}

/// Parses a pure linear form; constants are rejected.
pub fn parse_form(text: &str) -> Result<LinForm, ParseError> {
    let mut s = Scanner::new(text);
    let expr = parse_expr(&mut s)?;
    if !s.at_end() {
        return err(s.position(), "unexpected trailing input");
    }
    if expr.constant != BigInt::from(0) {
        return err(0, "constant terms are not allowed here");
    }
    Ok(expr.form)
}

/// Parses a substitution `(f1, f2, f3)`; the parentheses are optional.
pub fn parse_substitution(text: &str) -> Result<Substitution, ParseError> {
    let mut s = Scanner::new(text);
    let parens = s.eat('(');
    let mut forms = Vec::new();
    for i in 0..3 {
        if i > 0 && !s.eat(',') {
            return err(s.position(), "expected ','");
        }
        let expr = parse_expr(&mut s)?;
        if expr.constant != BigInt::from(0) {
            return err(s.position(), "substitutions must be homogeneous in x, y, z");
        }
        forms.push(expr.form);
    }
    if parens && !s.eat(')') {
        return err(s.position(), "expected ')'");
    }
    if !s.at_end() {
        return err(s.position(), "unexpected trailing input");
    }
    let mut it = forms.into_iter();
    Ok(Substitution::new(it.next().unwrap(), it.next().unwrap(), it.next().unwrap()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CmpTok {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

fn parse_cmp(s: &mut Scanner) -> Option<CmpTok> {
    match s.peek() {
        Some('<') => {
            s.bump();
            Some(if s.eat('=') { CmpTok::Le } else { CmpTok::Lt })
        }
        Some('>') => {
            s.bump();
            Some(if s.eat('=') { CmpTok::Ge } else { CmpTok::Gt })
        }
        Some('=') => {
            s.bump();
            s.eat('=');
            Some(CmpTok::Eq)
        }
        _ => None,
    }
}

/// One comparison chain (`a < b <= c`) into inequalities.
fn parse_chain(text: &str, base: usize) -> Result<Vec<Ineq>, ParseError> {
    let shift = |e: ParseError| ParseError { position: e.position + base, message: e.message };
    let mut s = Scanner::new(text);
    let mut exprs = vec![parse_expr(&mut s).map_err(shift)?];
    let mut ops = Vec::new();
    while let Some(op) = parse_cmp(&mut s) {
        ops.push(op);
        exprs.push(parse_expr(&mut s).map_err(shift)?);
    }
    if !s.at_end() {
        return err(s.position() + base, "unexpected trailing input");
    }
    if ops.is_empty() {
        return err(base, "expected a comparison operator");
    }
    let mut out = Vec::new();
    for (i, op) in ops.iter().enumerate() {
        let (lhs, rhs) = (&exprs[i], &exprs[i + 1]);
        let form = lhs.form.sub(&rhs.form);
        let constant = &lhs.constant - &rhs.constant;
        if constant != BigInt::from(0) {
            return err(
                base,
                "inhomogeneous constraint: sides leave a free constant, \
                 which the engine cannot certify",
            );
        }
        let push = |v: &mut Vec<Ineq>, iq: Result<Ineq, _>| match iq {
            Ok(iq) => {
                v.push(iq);
                Ok(())
            }
            Err(_) => err(base, "constraint degenerates to the zero form"),
        };
        match op {
            // lhs < rhs  =>  rhs - lhs > 0  =>  form < 0
            CmpTok::Lt => push(&mut out, Ineq::lt(form))?,
            CmpTok::Le => push(&mut out, Ineq::le(form))?,
            CmpTok::Gt => push(&mut out, Ineq::gt(form))?,
            CmpTok::Ge => push(&mut out, Ineq::ge(form))?,
            CmpTok::Eq => {
                push(&mut out, Ineq::ge(form.clone()))?;
                push(&mut out, Ineq::le(form))?;
            }
        }
    }
    Ok(out)
}

/// Parses a constraint list into a region. Atoms split on `,`, `;` or `&`.
pub fn parse_region(text: &str) -> Result<Region, ParseError> {
    let mut ineqs = Vec::new();
    let mut base = 0;
    for atom in text.split(|c| c == ',' || c == ';' || c == '&') {
        if !atom.trim().is_empty() {
            ineqs.extend(parse_chain(atom, base)?);
        }
        base += atom.len() + 1;
    }
    if ineqs.is_empty() {
        return err(0, "empty constraint list");
    }
    Ok(Region::from_ineqs(ineqs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use maxbet_core::algebra::Point;

    #[test]
    fn forms() {
        assert_eq!(parse_form("2x-3y+z").unwrap(), LinForm::new(2, -3, 1));
        assert_eq!(parse_form(" - x + 2*z ").unwrap(), LinForm::new(-1, 0, 2));
        assert!(parse_form("2x+1").is_err());
        assert!(parse_form("2w").is_err());
    }

    #[test]
    fn substitutions() {
        assert_eq!(parse_substitution("(y,x,z)").unwrap(), Substitution::swap_xy());
        assert_eq!(parse_substitution("y, z, x").unwrap(), Substitution::rotate_yzx());
        assert!(parse_substitution("(x,y)").is_err());
    }

    #[test]
    fn chained_domain() {
        let region = parse_region("0<x<y<z").unwrap();
        assert_eq!(region, Region::v());
        assert!(region.sat(&Point::from_ints(1, 2, 3)));
        assert!(!region.sat(&Point::from_ints(2, 1, 3)));
    }

    #[test]
    fn list_domain_with_operators() {
        let region = parse_region("x > 0 & y - x > 0; z - y >= 0").unwrap();
        assert_eq!(region.len(), 3);
    }

    #[test]
    fn inhomogeneous_rejected_with_position() {
        let e = parse_region("0<x<y<z, x+y+z<2000").unwrap_err();
        assert!(e.message.contains("inhomogeneous"));
        assert!(e.position >= 8, "position {} should point into the second atom", e.position);
    }

    #[test]
    fn error_position_reported() {
        let e = parse_form("2x-3q").unwrap_err();
        assert_eq!(e.position, 4);
    }
}
