//! Truncated Puiseux series in `ε` over the constant field, with the order
//! valuation, its valuation ring and maximal ideal, and the residue map.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::basefield::{BaseField, FieldElement, Poly};
use crate::error::{Error, Result};

/// Exponents of `ε`: exact rationals with machine-word parts.
pub type Exponent = Ratio<i64>;

/// Truncation given to series that come out of exact inputs by an infinite
/// operation (inversion, division).
pub const DEFAULT_TRUNCATION: i64 = 32;

pub fn exponent(n: i64) -> Exponent {
    Ratio::from_integer(n)
}

/// A value of `v`: an element of the value group `Q`, or `∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ValuationValue {
    Finite(Exponent),
    Infinity,
}

impl Add for ValuationValue {
    type Output = ValuationValue;
    fn add(self, rhs: ValuationValue) -> ValuationValue {
        match (self, rhs) {
            (ValuationValue::Finite(a), ValuationValue::Finite(b)) => ValuationValue::Finite(a + b),
            _ => ValuationValue::Infinity,
        }
    }
}

impl fmt::Display for ValuationValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValuationValue::Finite(e) => write!(f, "{e}"),
            ValuationValue::Infinity => f.write_str("inf"),
        }
    }
}

/// Outcome of testing a truncated series against zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroStatus {
    Zero,
    NonZero,
    /// No terms below a finite truncation.
    Indeterminate,
}

/// `Σ c_i ε^{e_i} + O(ε^r)`. Exponents strictly increase and lie below the
/// truncation `r`; `None` stands for `r = ∞`, an exactly known element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuiseuxElement {
    field: BaseField,
    terms: Vec<(Exponent, FieldElement)>,
    truncation: Option<Exponent>,
}

fn min_trunc(a: Option<Exponent>, b: Option<Exponent>) -> Option<Exponent> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn add_trunc(a: Option<Exponent>, b: Option<Exponent>) -> Option<Exponent> {
    Some(a? + b?)
}

impl PuiseuxElement {
    /// Normalises: sorts, merges equal exponents, drops zero coefficients
    /// and terms at or beyond the truncation.
    pub fn from_terms(
        field: &BaseField,
        terms: impl IntoIterator<Item = (Exponent, FieldElement)>,
        truncation: Option<Exponent>,
    ) -> Self {
        let mut acc: BTreeMap<Exponent, FieldElement> = BTreeMap::new();
        for (e, c) in terms {
            if truncation.is_some_and(|t| e >= t) {
                continue;
            }
            match acc.get_mut(&e) {
                Some(prev) => *prev = &*prev + &c,
                None => {
                    acc.insert(e, c);
                }
            }
        }
        PuiseuxElement {
            field: field.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
            truncation,
        }
    }

    pub fn zero(field: &BaseField) -> Self {
        PuiseuxElement { field: field.clone(), terms: Vec::new(), truncation: None }
    }

    pub fn one(field: &BaseField) -> Self {
        Self::constant(&field.one())
    }

    pub fn constant(c: &FieldElement) -> Self {
        Self::monomial(c, exponent(0))
    }

    /// The exact element `c ε^e`.
    pub fn monomial(c: &FieldElement, e: Exponent) -> Self {
        Self::from_terms(c.field(), [(e, c.clone())], None)
    }

    pub fn eps(field: &BaseField) -> Self {
        Self::monomial(&field.one(), exponent(1))
    }

    /// The exact element `p(ε)`.
    pub fn from_eps_poly(p: &Poly<FieldElement>) -> Self {
        let field = p.coeff_zero().field();
        Self::from_terms(field, p.coeffs().iter().enumerate().map(|(i, c)| (exponent(i as i64), c.clone())), None)
    }

    pub fn field(&self) -> &BaseField {
        &self.field
    }

    pub fn terms(&self) -> &[(Exponent, FieldElement)] {
        &self.terms
    }

    pub fn truncation(&self) -> Option<Exponent> {
        self.truncation
    }

    pub fn is_exact(&self) -> bool {
        self.truncation.is_none()
    }

    /// Forget everything at or beyond `t`.
    pub fn truncate(&self, t: Exponent) -> Self {
        Self::from_terms(&self.field, self.terms.iter().cloned(), min_trunc(self.truncation, Some(t)))
    }

    /// The same terms read as known up to `t`; the caller vouches that no
    /// term below `t` is missing (used when a Newton step doubles precision).
    pub fn with_truncation(&self, t: Option<Exponent>) -> Self {
        Self::from_terms(&self.field, self.terms.iter().cloned(), t)
    }

    pub fn zero_status(&self) -> ZeroStatus {
        match (self.terms.is_empty(), self.truncation) {
            (false, _) => ZeroStatus::NonZero,
            (true, None) => ZeroStatus::Zero,
            (true, Some(_)) => ZeroStatus::Indeterminate,
        }
    }

    pub fn val(&self) -> Result<ValuationValue> {
        match (self.terms.first(), self.truncation) {
            (Some((e, _)), _) => Ok(ValuationValue::Finite(*e)),
            (None, None) => Ok(ValuationValue::Infinity),
            (None, Some(_)) => Err(Error::IndeterminateValuation),
        }
    }

    /// A certified lower bound for `v`; `None` means `∞`.
    pub fn val_lower_bound(&self) -> Option<Exponent> {
        self.terms.first().map(|t| t.0).or(self.truncation)
    }

    pub fn leading(&self) -> Option<&(Exponent, FieldElement)> {
        self.terms.first()
    }

    pub fn coeff_at(&self, e: Exponent) -> FieldElement {
        self.terms.iter().find(|(f, _)| *f == e).map(|(_, c)| c.clone()).unwrap_or_else(|| self.field.zero())
    }

    /// `v(x) ≥ 0`. A series with no terms below a nonnegative truncation
    /// is certainly in `O_v`, so only a negative truncation is indeterminate.
    pub fn in_o(&self) -> Result<bool> {
        match (self.terms.first(), self.truncation) {
            (Some((e, _)), _) => Ok(!e.is_negative()),
            (None, None) => Ok(true),
            (None, Some(t)) if !t.is_negative() => Ok(true),
            _ => Err(Error::IndeterminateValuation),
        }
    }

    /// `v(x) > 0`.
    pub fn in_m(&self) -> Result<bool> {
        match (self.terms.first(), self.truncation) {
            (Some((e, _)), _) => Ok(e.is_positive()),
            (None, None) => Ok(true),
            (None, Some(t)) if t.is_positive() => Ok(true),
            _ => Err(Error::IndeterminateValuation),
        }
    }

    /// The residue in `L` of an element of `O_v`: its `ε^0` coefficient.
    pub fn residue(&self) -> Result<FieldElement> {
        if !self.in_o()? {
            return Err(Error::NotInValuationRing);
        }
        if self.terms.is_empty() && self.truncation.is_some_and(|t| t.is_zero()) {
            return Err(Error::IndeterminateValuation);
        }
        Ok(self.coeff_at(exponent(0)))
    }

    /// Least common denominator of the exponents and the truncation.
    pub fn ramification(&self) -> i64 {
        let mut q = 1i64;
        for (e, _) in &self.terms {
            q = q.lcm(e.denom());
        }
        if let Some(t) = self.truncation {
            q = q.lcm(t.denom());
        }
        q
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        if c.is_zero() {
            return Self::zero(&self.field);
        }
        PuiseuxElement {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect(),
            truncation: self.truncation,
        }
    }

    /// `ε^e · self`.
    pub fn shift(&self, e: Exponent) -> Self {
        PuiseuxElement {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(f, a)| (*f + e, a.clone())).collect(),
            truncation: self.truncation.map(|t| t + e),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.field);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Inverse known up to (at least, where the input allows) `ε^prec`.
    /// Monomials invert exactly.
    pub fn inv_to(&self, prec: Exponent) -> Result<Self> {
        let Some((e0, c0)) = self.terms.first() else {
            return Err(if self.truncation.is_none() { Error::DivisionByZero } else { Error::IndeterminateValuation });
        };
        let c0inv = c0.inverse()?;
        // self = c0 ε^{e0} (1 + u) with v(u) > 0
        let u: Vec<(Exponent, FieldElement)> = self.terms[1..].iter().map(|(e, c)| (*e - e0, c * &c0inv)).collect();
        let rel_trunc = self.truncation.map(|t| t - e0);
        if u.is_empty() && rel_trunc.is_none() {
            return Ok(Self::monomial(&c0inv, -e0));
        }
        let mut q = 1i64;
        for (e, _) in &u {
            q = q.lcm(e.denom());
        }
        let mut r = prec + e0;
        if !r.is_positive() {
            r = Ratio::new(1, q);
        }
        let r = min_trunc(Some(r), rel_trunc).expect("finite");
        let steps = (r * q).ceil().to_integer().max(1) as usize;
        let sparse: Vec<(usize, FieldElement)> =
            u.iter().map(|(e, c)| ((*e * q).to_integer() as usize, c.clone())).filter(|(i, _)| *i < steps).collect();
        let mut w = vec![self.field.one()];
        for k in 1..steps {
            let mut s = self.field.zero();
            for (j, a) in &sparse {
                if *j > k {
                    break;
                }
                s = &s + &(a * &w[k - j]);
            }
            w.push(-s);
        }
        Ok(Self::from_terms(
            &self.field,
            w.into_iter().enumerate().map(|(k, c)| (Ratio::new(k as i64, q) - e0, &c * &c0inv)),
            Some(r - e0),
        ))
    }

    pub fn inv(&self) -> Result<Self> {
        self.inv_to(exponent(DEFAULT_TRUNCATION))
    }

    /// `self / y`, known up to about `ε^prec`.
    pub fn div_to(&self, y: &Self, prec: Exponent) -> Result<Self> {
        let Some(lb) = self.val_lower_bound() else {
            // exact zero; still reject a zero divisor
            y.inv_to(prec)?;
            return Ok(Self::zero(&self.field));
        };
        Ok(self * &y.inv_to(prec - lb)?)
    }

    pub fn div(&self, y: &Self) -> Result<Self> {
        self.div_to(y, exponent(DEFAULT_TRUNCATION))
    }
}

impl Add for &PuiseuxElement {
    type Output = PuiseuxElement;
    fn add(self, rhs: &PuiseuxElement) -> PuiseuxElement {
        PuiseuxElement::from_terms(
            &self.field,
            self.terms.iter().chain(&rhs.terms).cloned(),
            min_trunc(self.truncation, rhs.truncation),
        )
    }
}

impl Neg for &PuiseuxElement {
    type Output = PuiseuxElement;
    fn neg(self) -> PuiseuxElement {
        PuiseuxElement {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            truncation: self.truncation,
        }
    }
}

impl Sub for &PuiseuxElement {
    type Output = PuiseuxElement;
    fn sub(self, rhs: &PuiseuxElement) -> PuiseuxElement {
        self + &(-rhs)
    }
}

impl Mul for &PuiseuxElement {
    type Output = PuiseuxElement;
    fn mul(self, rhs: &PuiseuxElement) -> PuiseuxElement {
        let (Some(lx), Some(ly)) = (self.val_lower_bound(), rhs.val_lower_bound()) else {
            return PuiseuxElement::zero(&self.field);
        };
        let trunc = min_trunc(add_trunc(self.truncation, Some(ly)), add_trunc(rhs.truncation, Some(lx)));
        let mut acc: BTreeMap<Exponent, FieldElement> = BTreeMap::new();
        for (ea, a) in &self.terms {
            for (eb, b) in &rhs.terms {
                let e = *ea + eb;
                if trunc.is_some_and(|t| e >= t) {
                    break;
                }
                let p = a * b;
                match acc.get_mut(&e) {
                    Some(prev) => *prev = &*prev + &p,
                    None => {
                        acc.insert(e, p);
                    }
                }
            }
        }
        PuiseuxElement::from_terms(&self.field, acc, trunc)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for PuiseuxElement {
            type Output = PuiseuxElement;
            fn $m(self, rhs: PuiseuxElement) -> PuiseuxElement {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for PuiseuxElement {
    type Output = PuiseuxElement;
    fn neg(self) -> PuiseuxElement {
        -&self
    }
}

fn eps_text(e: Exponent) -> String {
    if e == exponent(1) {
        "eps".into()
    } else if e.is_integer() && e.is_positive() {
        format!("eps^{e}")
    } else {
        format!("eps^({e})")
    }
}

impl fmt::Display for PuiseuxElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (e, c) in &self.terms {
            let (neg, body) = match c.as_rational() {
                Some(r) => {
                    let neg = r.is_negative();
                    let a = r.abs();
                    let body = if e.is_zero() {
                        a.to_string()
                    } else if a.is_one() {
                        eps_text(*e)
                    } else {
                        format!("{a}*{}", eps_text(*e))
                    };
                    (neg, body)
                }
                None if e.is_zero() => (false, format!("({c})")),
                None => (false, format!("({c})*{}", eps_text(*e))),
            };
            parts.push((neg, body));
        }
        if let Some(t) = self.truncation {
            parts.push((false, format!("O({})", eps_text(t))));
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        for (i, (neg, body)) in parts.iter().enumerate() {
            match (i, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => f.write_str(body)?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basefield::poly::rational_poly;

    fn q() -> BaseField {
        BaseField::rationals()
    }

    fn ex(n: i64, d: i64) -> Exponent {
        Ratio::new(n, d)
    }

    fn mono(f: &BaseField, c: i64, n: i64, d: i64) -> PuiseuxElement {
        PuiseuxElement::monomial(&f.from_int(c), ex(n, d))
    }

    #[test]
    fn valuation_examples() {
        let f = q();
        let x = &mono(&f, 1, 3, 2) + &mono(&f, 1, 2, 1);
        assert_eq!(x.val().unwrap(), ValuationValue::Finite(ex(3, 2)));
        assert_eq!(PuiseuxElement::zero(&f).val().unwrap(), ValuationValue::Infinity);
        let empty = PuiseuxElement::from_terms(&f, [], Some(exponent(8)));
        assert_eq!(empty.val(), Err(Error::IndeterminateValuation));
    }

    #[test]
    fn residue_examples() {
        let f = q();
        let x = &PuiseuxElement::constant(&f.from_int(2)) + &PuiseuxElement::eps(&f);
        assert_eq!(x.residue().unwrap(), f.from_int(2));
        assert_eq!(mono(&f, 1, 1, 2).residue().unwrap(), f.zero());
        assert_eq!(mono(&f, 1, -1, 1).residue(), Err(Error::NotInValuationRing));
    }

    #[test]
    fn valuation_is_multiplicative_on_square_roots() {
        let f = q();
        let r = mono(&f, 1, 1, 2);
        assert_eq!((&r * &r).val().unwrap(), ValuationValue::Finite(exponent(1)));
    }

    #[test]
    fn inverse_of_one_plus_eps() {
        let f = q();
        let x = PuiseuxElement::from_eps_poly(&Poly::new(vec![f.one(), f.one()], f.zero()));
        let inv = x.inv_to(exponent(4)).unwrap();
        let want = PuiseuxElement::from_eps_poly(&Poly::new(
            vec![f.from_int(1), f.from_int(-1), f.from_int(1), f.from_int(-1)],
            f.zero(),
        ))
        .truncate(exponent(4));
        assert_eq!(inv, want);
        // multiply back: 1 with residual order at least 4
        let back = &x * &inv;
        assert_eq!(back.terms(), PuiseuxElement::one(&f).terms());
        assert!(back.truncation().unwrap() >= exponent(4));
    }

    #[test]
    fn cancellation_drops_constant() {
        let f = q();
        let a = &PuiseuxElement::one(&f) + &PuiseuxElement::eps(&f);
        let b = &(-&PuiseuxElement::one(&f)) + &PuiseuxElement::eps(&f);
        assert_eq!(&a + &b, mono(&f, 2, 1, 1));
    }

    #[test]
    fn membership_examples() {
        let f = q();
        let a = &PuiseuxElement::constant(&f.from_int(3)) + &mono(&f, 1, 2, 1);
        assert_eq!((a.in_o().unwrap(), a.in_m().unwrap()), (true, false));
        let b = mono(&f, 1, 1, 3);
        assert_eq!((b.in_o().unwrap(), b.in_m().unwrap()), (true, true));
        let c = mono(&f, 1, -2, 1);
        assert_eq!((c.in_o().unwrap(), c.in_m().unwrap()), (false, false));
    }

    #[test]
    fn truncation_propagates_through_products() {
        let f = q();
        let x = (&PuiseuxElement::one(&f) + &mono(&f, 1, 1, 2)).truncate(exponent(3));
        let y = mono(&f, 1, 2, 1);
        // min(3 + 2, inf + 0)
        assert_eq!((&x * &y).truncation(), Some(exponent(5)));
    }

    #[test]
    fn ramified_inverse() {
        let f = q();
        let x = &mono(&f, 1, 1, 2) + &mono(&f, 1, 1, 1);
        let inv = x.inv_to(exponent(6)).unwrap();
        let back = &x * &inv;
        assert_eq!(back.terms(), PuiseuxElement::one(&f).terms());
        assert!(back.truncation().unwrap() >= exponent(6));
        assert_eq!(inv.leading().unwrap().0, ex(-1, 2));
    }

    #[test]
    fn gaussian_coefficients_invert() {
        let g = BaseField::new(Some(rational_poly(&[1, 0, 1]))).unwrap();
        let i = g.generator().unwrap();
        let x = &PuiseuxElement::constant(&i) + &PuiseuxElement::eps(&g);
        let back = &x * &x.inv_to(exponent(10)).unwrap();
        assert_eq!(back.terms(), PuiseuxElement::one(&g).terms());
    }

    #[test]
    fn display_text_form() {
        let f = q();
        let half = f.from_rational(Ratio::new(1.into(), 2.into()));
        let x = PuiseuxElement::from_terms(
            &f,
            [(exponent(0), f.from_int(2)), (ex(3, 2), f.one()), (exponent(2), -&half)],
            Some(exponent(4)),
        );
        assert_eq!(x.to_string(), "2 + eps^(3/2) - 1/2*eps^2 + O(eps^4)");
        assert_eq!(mono(&f, -1, -1, 1).to_string(), "-eps^(-1)");
        assert_eq!(PuiseuxElement::zero(&f).to_string(), "0");
    }
}
