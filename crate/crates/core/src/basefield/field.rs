//! The constant field: `Q` or a simple extension `Q(θ) = Q[t]/(m(t))`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::factor::rational_roots;
use super::poly::{Field, Poly, Ring};
use crate::error::{Error, Result};

#[derive(Debug, PartialEq, Eq)]
pub struct FieldDescriptor {
    minpoly: Option<Poly<BigRational>>,
    /// The minimal polynomial cleared of denominators: lower coefficients
    /// and the positive leading one.
    int_minpoly: Option<(Vec<BigInt>, BigInt)>,
    degree: usize,
}

/// Shared handle to a [`FieldDescriptor`].
#[derive(Clone, Debug)]
pub struct BaseField(Arc<FieldDescriptor>);

impl PartialEq for BaseField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for BaseField {}

impl BaseField {
    /// The rationals.
    pub fn rationals() -> Self {
        BaseField(Arc::new(FieldDescriptor { minpoly: None, int_minpoly: None, degree: 1 }))
    }

    /// `Q[t]/(minpoly)`, after checking that the extension is square-free and
    /// has no rational root. Irreducibility beyond that is not verified: a
    /// reducible `minpoly` shows up later as [`Error::NonInvertible`].
    pub fn new(minpoly: Option<Poly<BigRational>>) -> Result<Self> {
        let Some(m) = minpoly else {
            return Ok(Self::rationals());
        };
        let m = m.monic()?;
        let text = m.display_with("t");
        match m.degree() {
            None | Some(0) => return Err(Error::Parse(format!("constant minimal polynomial {text}"))),
            Some(1) => return Err(Error::RedundantExtension { minpoly: text }),
            _ => {}
        }
        if !m.is_squarefree()? {
            return Err(Error::NotSquareFree);
        }
        if !rational_roots(&m).is_empty() {
            return Err(Error::RedundantExtension { minpoly: text });
        }
        let degree = m.degree().unwrap_or(1);
        let den = m.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut low: Vec<BigInt> = m.coeffs().iter().map(|c| c.numer() * (&den / c.denom())).collect();
        low.truncate(degree);
        let int_minpoly = Some((low, den));
        Ok(BaseField(Arc::new(FieldDescriptor { minpoly: Some(m), int_minpoly, degree })))
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn minpoly(&self) -> Option<&Poly<BigRational>> {
        self.0.minpoly.as_ref()
    }

    pub fn is_rational(&self) -> bool {
        self.0.minpoly.is_none()
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { field: self.clone(), num: vec![BigInt::zero(); self.degree()], den: BigInt::one() }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        let mut e = self.zero();
        e.num[0] = BigInt::from(n);
        e
    }

    pub fn from_rational(&self, q: BigRational) -> FieldElement {
        let mut e = self.zero();
        let (n, d) = q.into_raw();
        e.num[0] = n;
        e.den = d;
        normalize(&mut e.num, &mut e.den, None);
        e
    }

    /// The generator `θ`, the class of `t`; `None` for `Q`.
    pub fn generator(&self) -> Option<FieldElement> {
        if self.is_rational() {
            return None;
        }
        let mut e = self.zero();
        e.num[1] = BigInt::one();
        Some(e)
    }

    /// Reduce an arbitrary polynomial in `t` into the field.
    pub fn from_poly(&self, p: &Poly<BigRational>) -> FieldElement {
        let mut v: Vec<BigRational> = p.coeffs().to_vec();
        self.reduce(&mut v);
        v.resize(self.degree(), BigRational::zero());
        self.element_of_coords(v)
    }

    pub fn element(&self, coeffs: Vec<BigRational>) -> Result<FieldElement> {
        if coeffs.len() != self.degree() {
            return Err(Error::Dimension(format!(
                "{} coordinates for a field of degree {}",
                coeffs.len(),
                self.degree()
            )));
        }
        Ok(self.element_of_coords(coeffs))
    }

    fn element_of_coords(&self, coeffs: Vec<BigRational>) -> FieldElement {
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        FieldElement::build(self, num, den, None)
    }

    fn reduce(&self, v: &mut Vec<BigRational>) {
        let Some(m) = &self.0.minpoly else {
            v.truncate(1);
            return;
        };
        let d = self.degree();
        let mc = m.coeffs();
        while v.len() > d {
            let top = v.pop().expect("nonempty");
            if Zero::is_zero(&top) {
                continue;
            }
            let base = v.len() - d;
            for j in 0..d {
                let t = &top * &mc[j];
                v[base + j] -= t;
            }
        }
    }

    /// Reduces `v / den` modulo the minimal polynomial, keeping integer
    /// numerators by scaling with its leading coefficient.
    fn reduce_int(&self, v: &mut Vec<BigInt>, den: &mut BigInt) {
        let Some((low, lead)) = &self.0.int_minpoly else {
            v.truncate(1);
            return;
        };
        let d = low.len();
        while v.len() > d {
            let top = v.pop().expect("nonempty");
            if top.is_zero() {
                continue;
            }
            if !lead.is_one() {
                for c in v.iter_mut() {
                    *c *= lead;
                }
                *den *= lead;
            }
            let base = v.len() - d;
            for (j, m) in low.iter().enumerate() {
                if !m.is_zero() {
                    v[base + j] -= &top * m;
                }
            }
        }
    }

    /// Text of the minimal polynomial, or `Q`.
    pub fn describe(&self) -> String {
        match &self.0.minpoly {
            None => "Q".to_string(),
            Some(m) => m.display_with("t"),
        }
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// An element of the constant field, stored as integer coordinates in the
/// power basis `1, θ, …, θ^{d-1}` over one positive denominator. The
/// denominator is coprime to the numerators taken together, so the
/// representation is canonical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    field: BaseField,
    num: Vec<BigInt>,
    den: BigInt,
}

fn normalize(num: &mut [BigInt], den: &mut BigInt, bound: Option<&BigInt>) {
    if den.is_negative() {
        for n in num.iter_mut() {
            *n = -std::mem::take(n);
        }
        *den = -std::mem::take(den);
    }
    if num.iter().all(Zero::is_zero) {
        *den = BigInt::one();
        return;
    }
    let mut g = bound.unwrap_or(den).clone();
    for n in num.iter() {
        if g.is_one() {
            return;
        }
        if !n.is_zero() {
            g = g.gcd(n);
        }
    }
    if g.is_one() {
        return;
    }
    if bound.is_some() {
        g = g.gcd(den);
        if g.is_one() {
            return;
        }
    }
    for n in num.iter_mut() {
        if !n.is_zero() {
            *n /= &g;
        }
    }
    *den /= &g;
}

impl FieldElement {
    fn build(field: &BaseField, mut num: Vec<BigInt>, mut den: BigInt, bound: Option<&BigInt>) -> Self {
        normalize(&mut num, &mut den, bound);
        FieldElement { field: field.clone(), num, den }
    }

    pub fn field(&self) -> &BaseField {
        &self.field
    }

    pub fn coords(&self) -> Vec<BigRational> {
        self.num.iter().map(|n| BigRational::new(n.clone(), self.den.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    pub fn as_poly(&self) -> Poly<BigRational> {
        Poly::new(self.coords(), BigRational::zero())
    }

    fn same_field(&self, other: &Self) {
        assert!(self.field == other.field, "field elements from different fields");
    }

    pub fn inverse(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let Some(m) = self.field.minpoly() else {
            return Ok(Self::build(&self.field, vec![self.den.clone()], self.num[0].clone(), None));
        };
        let (g, s, _) = self.as_poly().xgcd(m)?;
        if !g.is_constant() {
            return Err(Error::NonInvertible { factor: g.display_with("t") });
        }
        Ok(self.field.from_poly(&s))
    }

    pub fn div(&self, other: &Self) -> Result<FieldElement> {
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, k: u32) -> FieldElement {
        let mut acc = self.field.one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// The rational coordinates, whose lexicographic order is the order on
    /// elements.
    pub fn sort_key(&self) -> Vec<BigRational> {
        self.coords()
    }

    fn add_signed(&self, rhs: &FieldElement, negate: bool) -> FieldElement {
        self.same_field(rhs);
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -rhs } else { rhs.clone() };
        }
        let combine = |a: &BigInt, b: &BigInt| if negate { a - b } else { a + b };
        if self.den == rhs.den {
            let num = self.num.iter().zip(&rhs.num).map(|(a, b)| combine(a, b)).collect();
            return Self::build(&self.field, num, self.den.clone(), Some(&self.den));
        }
        let g = self.den.gcd(&rhs.den);
        let a = &self.den / &g;
        let b = &rhs.den / &g;
        let num = self.num.iter().zip(&rhs.num).map(|(x, y)| combine(&(x * &b), &(y * &a))).collect();
        Self::build(&self.field, num, a * &rhs.den, Some(&g))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.as_poly().display_with("t"))
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.add_signed(rhs, false)
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.add_signed(rhs, true)
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.same_field(rhs);
        if self.is_zero() || rhs.is_zero() {
            return self.field.zero();
        }
        let d = self.num.len();
        if d == 1 {
            let g1 = self.num[0].gcd(&rhs.den);
            let g2 = rhs.num[0].gcd(&self.den);
            let num = (&self.num[0] / &g1) * (&rhs.num[0] / &g2);
            let den = (&self.den / &g2) * (&rhs.den / &g1);
            return FieldElement::build(&self.field, vec![num], den, Some(&BigInt::one()));
        }
        let mut v = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.num.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        let mut den = &self.den * &rhs.den;
        self.field.reduce_int(&mut v, &mut den);
        FieldElement::build(&self.field, v, den, None)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { field: self.field.clone(), num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl Ring for FieldElement {
    fn zero_like(&self) -> Self {
        self.field.zero()
    }
    fn one_like(&self) -> Self {
        self.field.one()
    }
    fn int_like(&self, n: i64) -> Self {
        self.field.from_int(n)
    }
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn div_exact(&self, d: &Self) -> Result<Self> {
        self.div(d)
    }
}

impl Field for FieldElement {
    fn inv(&self) -> Result<Self> {
        self.inverse()
    }
}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        for (a, b) in self.num.iter().zip(&other.num) {
            let o = (a * &other.den).cmp(&(b * &self.den));
            if o.is_ne() {
                return o;
            }
        }
        std::cmp::Ordering::Equal
    }
}
