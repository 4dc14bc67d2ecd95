//! Dense univariate polynomials over an arbitrary coefficient ring.
//!
//! Bivariate and trivariate polynomials are nested: `Poly<Poly<FieldElement>>`
//! is a polynomial in an outer variable whose coefficients are polynomials in
//! an inner variable. All algorithms that only need exact division (Bareiss
//! determinants, resultants) work at every nesting depth.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A commutative ring whose elements carry enough context to build the
/// constants `0` and `1` of the same ring.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn int_like(&self, n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// `self / d`, failing unless `d` divides `self` exactly.
    fn div_exact(&self, d: &Self) -> Result<Self>;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }
}

pub trait Field: Ring {
    fn inv(&self) -> Result<Self>;
}

impl Ring for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn int_like(&self, n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
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
        if Zero::is_zero(d) {
            return Err(Error::DivisionByZero);
        }
        Ok(self / d)
    }
}

impl Field for BigRational {
    fn inv(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.recip())
    }
}

/// Dense polynomial, coefficients stored from degree 0 upwards with no
/// trailing zeros. The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<R> {
    coeffs: Vec<R>,
    // prototype zero of the coefficient ring
    zero: R,
}

impl<R: Ring> Poly<R> {
    pub fn new(mut coeffs: Vec<R>, zero: R) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs, zero }
    }

    pub fn zero(zero: R) -> Self {
        Poly { coeffs: Vec::new(), zero }
    }

    pub fn constant(c: R) -> Self {
        let zero = c.zero_like();
        Poly::new(vec![c], zero)
    }

    /// `c * var^k`
    pub fn monomial(c: R, k: usize) -> Self {
        let zero = c.zero_like();
        let mut coeffs = vec![zero.clone(); k];
        coeffs.push(c);
        Poly::new(coeffs, zero)
    }

    /// The polynomial `var`.
    pub fn var(zero: R) -> Self {
        let one = zero.one_like();
        Poly::monomial(one, 1)
    }

    /// `var - a`
    pub fn linear_root(a: &R) -> Self {
        Poly::new(vec![a.neg_ref(), a.one_like()], a.zero_like())
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    pub fn coeff_zero(&self) -> &R {
        &self.zero
    }

    pub fn coeff(&self, i: usize) -> &R {
        self.coeffs.get(i).unwrap_or(&self.zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to `-1`.
    pub fn deg_i(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn lc(&self) -> &R {
        self.coeffs.last().unwrap_or(&self.zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn map<S: Ring>(&self, zero: S, f: impl Fn(&R) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect(), zero)
    }

    pub fn try_map<S: Ring>(&self, zero: S, f: impl Fn(&R) -> Result<S>) -> Result<Poly<S>> {
        let coeffs = self.coeffs.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(coeffs, zero))
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(self.zero.clone(), |a| a.mul_ref(c))
    }

    /// Multiply by `var^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let mut coeffs = vec![self.zero.clone(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs, zero: self.zero.clone() }
    }

    pub fn eval(&self, x: &R) -> R {
        let mut acc = self.zero.clone();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_ref(x).add_ref(c);
        }
        acc
    }

    /// Evaluate at a point of an extension ring via a coefficient embedding.
    pub fn eval_with<S: Ring>(&self, x: &S, embed: impl Fn(&R) -> S) -> S {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_ref(x).add_ref(&embed(c));
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.mul_ref(&c.int_like(i as i64))).collect();
        Poly::new(coeffs, self.zero.clone())
    }

    /// Substitute `var -> var + a`.
    pub fn taylor_shift(&self, a: &R) -> Self {
        // Horner with the linear polynomial var + a
        let lin = Poly::new(vec![a.clone(), a.one_like()], self.zero.clone());
        let mut acc = Poly::zero(self.zero.clone());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_ref(&lin).add_ref(&Poly::constant(c.clone()));
        }
        acc
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Poly::constant(self.zero.one_like());
        for _ in 0..k {
            acc = acc.mul_ref(self);
        }
        acc
    }

    /// Division with remainder; every leading-coefficient division must be
    /// exact in `R` (always true over a field).
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let mut rem = self.coeffs.clone();
        let lc = d.lc().clone();
        if rem.len() < dd + 1 {
            return Ok((Poly::zero(self.zero.clone()), self.clone()));
        }
        let mut quot = vec![self.zero.clone(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let q = top.div_exact(&lc)?;
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].sub_ref(&q.mul_ref(dc));
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        Ok((Poly::new(quot, self.zero.clone()), Poly::new(rem, self.zero.clone())))
    }

    /// Order of vanishing at `a`: the largest `k` with `(var - a)^k` dividing.
    pub fn root_order(&self, a: &R) -> Result<usize> {
        if self.coeffs.is_empty() {
            return Err(Error::Dimension("order of the zero polynomial".into()));
        }
        let lin = Poly::linear_root(a);
        let mut p = self.clone();
        let mut k = 0;
        loop {
            let (q, r) = p.div_rem(&lin)?;
            if r.coeffs.is_empty() {
                p = q;
                k += 1;
            } else {
                return Ok(k);
            }
        }
    }
}

impl<R: Field> Poly<R> {
    pub fn monic(&self) -> Result<Self> {
        if self.coeffs.is_empty() {
            return Ok(self.clone());
        }
        let inv = self.lc().inv()?;
        Ok(self.scale(&inv))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.coeffs.is_empty() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `f / gcd(f, f')`, made monic.
    pub fn squarefree(&self) -> Result<Self> {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative())?;
        self.div_exact_poly(&g)?.monic()
    }

    pub fn is_squarefree(&self) -> Result<bool> {
        if self.is_constant() {
            return Ok(true);
        }
        Ok(self.gcd(&self.derivative())?.is_constant())
    }

    /// Extended Euclid: `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn xgcd(&self, other: &Self) -> Result<(Self, Self, Self)> {
        let z = self.zero.clone();
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::constant(z.one_like()), Poly::zero(z.clone()));
        let (mut t0, mut t1) = (Poly::zero(z.clone()), Poly::constant(z.one_like()));
        while !r1.coeffs.is_empty() {
            let (q, r) = r0.div_rem(&r1)?;
            let s = s0.sub_ref(&q.mul_ref(&s1));
            let t = t0.sub_ref(&q.mul_ref(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.coeffs.is_empty() {
            return Ok((r0, s0, t0));
        }
        let inv = r0.lc().inv()?;
        Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
    }
}

impl Eq for Poly<BigRational> {}

impl<R: Ring> Poly<R> {
    pub fn div_exact_poly(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(d)?;
        if !r.coeffs.is_empty() {
            return Err(Error::InexactDivision);
        }
        Ok(q)
    }
}

impl<R: Ring> Ring for Poly<R> {
    fn zero_like(&self) -> Self {
        Poly::zero(self.zero.clone())
    }
    fn one_like(&self) -> Self {
        Poly::constant(self.zero.one_like())
    }
    fn int_like(&self, n: i64) -> Self {
        Poly::new(vec![self.zero.int_like(n)], self.zero.clone())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add_ref(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).add_ref(other.coeff(i))).collect();
        Poly::new(coeffs, self.zero.clone())
    }
    fn sub_ref(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).sub_ref(other.coeff(i))).collect();
        Poly::new(coeffs, self.zero.clone())
    }
    fn mul_ref(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Poly::zero(self.zero.clone());
        }
        let mut out = vec![self.zero.clone(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Poly::new(out, self.zero.clone())
    }
    fn neg_ref(&self) -> Self {
        self.map(self.zero.clone(), |c| c.neg_ref())
    }
    fn div_exact(&self, d: &Self) -> Result<Self> {
        self.div_exact_poly(d)
    }
}

impl<R: Ring + fmt::Display> Poly<R> {
    /// Render with the given variable name, highest degree first.
    pub fn display_with(&self, var: &str) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                k => format!("{var}^{k}"),
            };
            let (neg, body) = coeff_text(&c.to_string());
            let term = match (body.as_str(), mono.is_empty()) {
                (b, true) => b.to_string(),
                ("1", false) => mono,
                (b, false) => format!("{b}*{mono}"),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        out
    }
}

/// Split a rendered coefficient into sign and body, parenthesising sums.
pub(crate) fn coeff_text(s: &str) -> (bool, String) {
    let compound = s.trim_start_matches('-').contains([' ', '+']);
    if compound {
        (false, format!("({s})"))
    } else if let Some(rest) = s.strip_prefix('-') {
        (true, rest.to_string())
    } else {
        (false, s.to_string())
    }
}

/// Clear denominators and remove the content: the primitive integer
/// polynomial with positive leading coefficient associated to `p`.
pub fn primitive_integer(p: &Poly<BigRational>) -> Vec<BigInt> {
    use num_integer::Integer;
    let mut den = BigInt::one();
    for c in p.coeffs() {
        den = den.lcm(c.denom());
    }
    let mut ints: Vec<BigInt> = p.coeffs().iter().map(|c| (c * &den).to_integer()).collect();
    let mut g = BigInt::zero();
    for c in &ints {
        g = g.gcd(c);
    }
    if !g.is_zero() {
        for c in ints.iter_mut() {
            *c /= &g;
        }
    }
    if ints.last().is_some_and(|c| c.is_negative()) {
        for c in ints.iter_mut() {
            *c = -&*c;
        }
    }
    ints
}

pub fn rational_poly(coeffs: &[i64]) -> Poly<BigRational> {
    Poly::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect(), BigRational::zero())
}
