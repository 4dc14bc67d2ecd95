//! The shared text grammar.
//!
//! Variables `x, y, z, t, eps`; rational literals `a/b`; `+ - * / ^` and
//! parentheses. `^` takes a nonnegative integer, except on `eps`, which also
//! accepts negative and fractional exponents written `eps^(p/q)`. A term
//! `O(eps^r)` sets a truncation. Inside field elements `t` is the generator
//! `θ`; in a minimal polynomial it is the variable.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::basefield::{BaseField, FieldElement, MPoly, Poly};
use crate::error::{Error, Result};
use crate::puiseux::{exponent, Exponent, PuiseuxElement};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token::Num(s.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Sym(c));
            i += 1;
        } else if c == '\u{2212}' {
            out.push(Token::Sym('-'));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

/// How `t` is read.
#[derive(Clone, Copy, PartialEq, Eq)]
enum TMode {
    Generator,
    Variable,
}

/// Parsed value: a polynomial in `x, y, z` (and `t` in variable mode) whose
/// coefficients are Puiseux elements.
#[derive(Clone, Debug)]
struct Value {
    field: BaseField,
    terms: BTreeMap<[u32; 4], PuiseuxElement>,
}

impl Value {
    fn constant(c: PuiseuxElement) -> Self {
        let field = c.field().clone();
        let mut terms = BTreeMap::new();
        terms.insert([0; 4], c);
        Value { field, terms }.normalized()
    }

    fn var(field: &BaseField, i: usize) -> Self {
        let mut m = [0; 4];
        m[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(m, PuiseuxElement::one(field));
        Value { field: field.clone(), terms }
    }

    fn normalized(mut self) -> Self {
        self.terms.retain(|_, c| !(c.terms().is_empty() && c.is_exact()));
        self
    }

    fn add(&self, o: &Value) -> Value {
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            let s = match terms.get(m) {
                Some(p) => p + c,
                None => c.clone(),
            };
            terms.insert(*m, s);
        }
        Value { field: self.field.clone(), terms }.normalized()
    }

    fn neg(&self) -> Value {
        Value { field: self.field.clone(), terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    fn mul(&self, o: &Value) -> Value {
        let mut terms: BTreeMap<[u32; 4], PuiseuxElement> = BTreeMap::new();
        for (ma, a) in &self.terms {
            for (mb, b) in &o.terms {
                let m = [ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2], ma[3] + mb[3]];
                let p = a * b;
                let s = match terms.get(&m) {
                    Some(q) => q + &p,
                    None => p,
                };
                terms.insert(m, s);
            }
        }
        Value { field: self.field.clone(), terms }.normalized()
    }

    fn as_constant(&self) -> Option<PuiseuxElement> {
        match self.terms.len() {
            0 => Some(PuiseuxElement::zero(&self.field)),
            1 => self.terms.get(&[0; 4]).cloned(),
            _ => None,
        }
    }

    fn is_eps(&self) -> bool {
        self.as_constant().is_some_and(|c| c == PuiseuxElement::eps(&self.field))
    }
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    field: &'a BaseField,
    tmode: TMode,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Token::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Value> {
        let mut v = self.term()?;
        loop {
            if self.eat('+') {
                v = v.add(&self.term()?);
            } else if self.eat('-') {
                v = v.add(&self.term()?.neg());
            } else {
                return Ok(v);
            }
        }
    }

    fn starts_primary(&self) -> bool {
        matches!(self.peek(), Some(Token::Num(_) | Token::Ident(_) | Token::Sym('(')))
    }

    fn term(&mut self) -> Result<Value> {
        let mut v = self.unary()?;
        loop {
            if self.eat('*') {
                v = v.mul(&self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                let Some(c) = d.as_constant() else {
                    return Err(Error::Parse("division by a non-constant".into()));
                };
                let inv = c.inv().map_err(|_| Error::Parse("division by zero".into()))?;
                v = v.mul(&Value::constant(inv));
            } else if self.starts_primary() {
                v = v.mul(&self.power()?);
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> Result<Value> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn int(&mut self) -> Result<i64> {
        match self.next() {
            Some(Token::Num(n)) => n.to_i64().ok_or_else(|| Error::Parse("exponent too large".into())),
            _ => Err(Error::Parse("expected an integer exponent".into())),
        }
    }

    fn exponent(&mut self) -> Result<Exponent> {
        if self.eat('(') {
            let neg = self.eat('-');
            let p = self.int()?;
            let q = if self.eat('/') { self.int()? } else { 1 };
            self.expect(')')?;
            if q == 0 {
                return Err(Error::Parse("zero denominator in exponent".into()));
            }
            Ok(Ratio::new(if neg { -p } else { p }, q))
        } else if self.eat('-') {
            Ok(exponent(-self.int()?))
        } else {
            Ok(exponent(self.int()?))
        }
    }

    fn power(&mut self) -> Result<Value> {
        let base = self.primary()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = self.exponent()?;
        if base.is_eps() {
            return Ok(Value::constant(PuiseuxElement::monomial(&self.field.one(), e)));
        }
        if !e.is_integer() || e.is_negative() {
            return Err(Error::Parse(format!("exponent {e} is only allowed on eps")));
        }
        let k = e.to_integer();
        let mut acc = Value::constant(PuiseuxElement::one(self.field));
        for _ in 0..k {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn primary(&mut self) -> Result<Value> {
        match self.next() {
            Some(Token::Num(n)) => {
                Ok(Value::constant(PuiseuxElement::constant(&self.field.from_rational(BigRational::from_integer(n)))))
            }
            Some(Token::Sym('(')) => {
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(Token::Ident(name)) => match name.as_str() {
                "x" => Ok(Value::var(self.field, 0)),
                "y" => Ok(Value::var(self.field, 1)),
                "z" => Ok(Value::var(self.field, 2)),
                "t" if self.tmode == TMode::Variable => Ok(Value::var(self.field, 3)),
                "t" => match self.field.generator() {
                    Some(g) => Ok(Value::constant(PuiseuxElement::constant(&g))),
                    None => Err(Error::Parse("t used but the field is Q".into())),
                },
                "eps" => Ok(Value::constant(PuiseuxElement::eps(self.field))),
                "O" => {
                    self.expect('(')?;
                    let inner = self.expr()?;
                    self.expect(')')?;
                    let c = inner.as_constant().ok_or_else(|| Error::Parse("O() needs a power of eps".into()))?;
                    match c.terms() {
                        [(e, k)] if k == &self.field.one() && c.is_exact() => {
                            Ok(Value::constant(PuiseuxElement::from_terms(self.field, [], Some(*e))))
                        }
                        _ => Err(Error::Parse("O() needs a power of eps".into())),
                    }
                }
                other => Err(Error::Parse(format!("unknown variable '{other}'"))),
            },
            Some(Token::Sym(c)) => Err(Error::Parse(format!("unexpected '{c}'"))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}

fn parse_value(text: &str, field: &BaseField, tmode: TMode) -> Result<Value> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, field, tmode };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in '{text}'")));
    }
    Ok(v)
}

fn exact_coefficient(c: &PuiseuxElement) -> Result<FieldElement> {
    match (c.terms(), c.is_exact()) {
        ([], true) => Ok(c.field().zero()),
        ([(e, k)], true) if e.is_zero() => Ok(k.clone()),
        _ => Err(Error::Parse(format!("expected a constant, found {c}"))),
    }
}

/// A minimal polynomial in `t` over `Q`.
pub fn parse_minpoly(text: &str) -> Result<Poly<BigRational>> {
    let q = BaseField::rationals();
    let v = parse_value(text, &q, TMode::Variable)?;
    let mut coeffs = Vec::new();
    for (m, c) in &v.terms {
        if m[..3] != [0, 0, 0] {
            return Err(Error::Parse("a minimal polynomial may only use t".into()));
        }
        let k = m[3] as usize;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, BigRational::zero());
        }
        coeffs[k] = exact_coefficient(c)?.coords()[0].clone();
    }
    Ok(Poly::new(coeffs, BigRational::zero()))
}

/// `None` or `"Q"` gives the rationals; otherwise the text is a minimal
/// polynomial in `t`, normalised to be monic.
pub fn parse_field(text: Option<&str>) -> Result<BaseField> {
    match text.map(str::trim) {
        None | Some("Q") | Some("") => Ok(BaseField::rationals()),
        Some(s) => {
            let m = parse_minpoly(s)?;
            if m.degree().unwrap_or(0) < 1 {
                return Err(Error::Parse("minimal polynomial must have positive degree".into()));
            }
            let lc = m.lc().clone();
            if !lc.is_one() {
                let monic = m.map(BigRational::zero(), |c| c / &lc);
                return BaseField::new(Some(monic));
            }
            BaseField::new(Some(m))
        }
    }
}

pub fn parse_field_element(text: &str, field: &BaseField) -> Result<FieldElement> {
    let v = parse_value(text, field, TMode::Generator)?;
    let c = v.as_constant().ok_or_else(|| Error::Parse(format!("'{text}' is not a constant")))?;
    exact_coefficient(&c)
}

pub fn parse_puiseux(text: &str, field: &BaseField) -> Result<PuiseuxElement> {
    let v = parse_value(text, field, TMode::Generator)?;
    v.as_constant().ok_or_else(|| Error::Parse(format!("'{text}' mentions x, y or z")))
}

/// A polynomial in `x, y, z` with constant coefficients.
pub fn parse_form(text: &str, field: &BaseField) -> Result<MPoly<FieldElement>> {
    let v = parse_value(text, field, TMode::Generator)?;
    let mut terms = Vec::new();
    for (m, c) in &v.terms {
        terms.push((m[..3].to_vec(), exact_coefficient(c)?));
    }
    Ok(MPoly::from_terms(3, field.zero(), terms))
}

/// `F(ε, X)` written with `x` for `X`, as a polynomial in `X` with
/// coefficients polynomials in `ε`.
pub fn parse_eps_poly(text: &str, field: &BaseField) -> Result<Poly<Poly<FieldElement>>> {
    let v = parse_value(text, field, TMode::Generator)?;
    let inner_zero = Poly::zero(field.zero());
    let mut outer: Vec<Vec<FieldElement>> = Vec::new();
    for (m, c) in &v.terms {
        if m[1] != 0 || m[2] != 0 {
            return Err(Error::Parse("only x and eps may appear".into()));
        }
        if !c.is_exact() {
            return Err(Error::Parse("O() is not allowed here".into()));
        }
        let k = m[0] as usize;
        if outer.len() <= k {
            outer.resize(k + 1, Vec::new());
        }
        for (e, a) in c.terms() {
            if !e.is_integer() || e.is_negative() {
                return Err(Error::Parse("eps exponents must be nonnegative integers here".into()));
            }
            let j = e.to_integer() as usize;
            let slot = &mut outer[k];
            if slot.len() <= j {
                slot.resize(j + 1, field.zero());
            }
            slot[j] = a.clone();
        }
    }
    Ok(Poly::new(outer.into_iter().map(|c| Poly::new(c, field.zero())).collect(), inner_zero))
}

/// `[a : b : …]` split into its coordinate texts.
pub fn split_point(text: &str) -> Result<Vec<&str>> {
    let s = text.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("a point is written [a : b : ...], got '{text}'")))?;
    let parts: Vec<&str> = inner.split(':').map(str::trim).collect();
    if parts.len() < 2 || parts.iter().any(|p| p.is_empty()) {
        return Err(Error::Parse(format!("bad point '{text}'")));
    }
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn puiseux_text_round_trips() {
        let q = BaseField::rationals();
        for s in ["2 + eps^(3/2) - 1/2*eps^2 + O(eps^4)", "-eps^(-1)", "0", "O(eps^(5/2))"] {
            assert_eq!(parse_puiseux(s, &q).unwrap().to_string(), s);
        }
        let g = parse_field(Some("t^2 + 1")).unwrap();
        let x = parse_puiseux("(t + 1)*eps + 3*t", &g).unwrap();
        assert_eq!(x.to_string(), "(3*t) + (t + 1)*eps");
        assert_eq!(parse_puiseux(&x.to_string(), &g).unwrap(), x);
    }

    #[test]
    fn forms_and_errors() {
        let q = BaseField::rationals();
        let f = parse_form("y*z - x^2", &q).unwrap();
        assert_eq!(f.display_with(&["x", "y", "z"]), "-x^2 + y*z");
        assert!(parse_form("x + ", &q).is_err());
        assert!(parse_form("x^(1/2)", &q).is_err());
        assert!(parse_form("t*x", &q).is_err());
        assert!(parse_form("eps*x", &q).is_err());
        assert_eq!(parse_form("2x y", &q).unwrap().display_with(&["x", "y", "z"]), "2*x*y");
    }

    #[test]
    fn fields_and_points() {
        assert!(parse_field(None).unwrap().is_rational());
        assert_eq!(parse_field(Some("t^2 + 1")).unwrap().degree(), 2);
        assert_eq!(parse_field(Some("2*t^2 + 2")).unwrap().describe(), "t^2 + 1");
        assert!(matches!(parse_field(Some("t^2 - 1")), Err(Error::RedundantExtension { .. })));
        assert_eq!(split_point("[0 : 0 : 1]").unwrap(), vec!["0", "0", "1"]);
        assert!(split_point("0:1").is_err());
    }

    #[test]
    fn eps_polynomials() {
        let q = BaseField::rationals();
        let f = parse_eps_poly("x^2 - (1 + eps)*x + eps", &q).unwrap();
        assert_eq!(f.degree(), Some(2));
        assert_eq!(f.coeff(1).coeffs().len(), 2);
        assert!(parse_eps_poly("x - eps^(1/2)", &q).is_err());
    }
}
