//! Roots in the constant field of polynomials over it.
//!
//! Over `Q` this is factorisation; over `Q(θ)` it is Trager's method: shift
//! until the norm down to `Q` is square-free, factor the norm, and take gcds
//! back in `Q(θ)[c]`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::factor::factor_rational;
use super::field::{BaseField, FieldElement};
use super::poly::Poly;
use super::resultant::resultant;
use crate::error::{Error, Result};

/// Outcome of a root search: the roots that lie in the field, with
/// multiplicities, and the irreducible pieces that have no root there.
#[derive(Debug, Clone)]
pub struct RootSearch {
    pub roots: Vec<(FieldElement, usize)>,
    /// Minimal polynomials over `Q` of the extension each missing root needs.
    pub unresolved: Vec<Poly<BigRational>>,
}

impl RootSearch {
    pub fn require_all(self) -> Result<Vec<(FieldElement, usize)>> {
        match self.unresolved.first() {
            None => Ok(self.roots),
            Some(f) => Err(Error::RequiresExtension { minpoly: suggest_field(f) }),
        }
    }
}

/// All roots of `p` in its coefficient field.
pub fn roots_in_field(p: &Poly<FieldElement>) -> Result<RootSearch> {
    let field = p.coeff_zero().field().clone();
    let sf = p.squarefree()?;
    let mut out = RootSearch { roots: Vec::new(), unresolved: Vec::new() };
    if sf.is_constant() {
        return Ok(out);
    }
    let mut simple = Vec::new();
    match field.minpoly() {
        None => {
            let qp = sf.map(BigRational::zero(), |c| c.coords()[0].clone());
            for f in factor_rational(&qp) {
                if f.degree() == Some(1) {
                    simple.push(field.from_rational(-f.coeff(0).clone()));
                } else {
                    out.unresolved.push(f);
                }
            }
        }
        Some(m) => trager(&field, m, &sf, &mut simple, &mut out.unresolved)?,
    }
    for r in simple {
        let k = p.root_order(&r)?;
        out.roots.push((r, k));
    }
    out.roots.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

fn trager(
    field: &BaseField,
    m: &Poly<BigRational>,
    sf: &Poly<FieldElement>,
    roots: &mut Vec<FieldElement>,
    unresolved: &mut Vec<Poly<BigRational>>,
) -> Result<()> {
    let theta = field.generator().expect("proper extension");
    let qzero = Poly::zero(BigRational::zero());
    let m_t = m.map(qzero.clone(), |c| Poly::constant(c.clone()));
    for s in [0i64, 1, -1, 2, -2, 3, -3, 5, -5, 7, -7, 11] {
        let shift = &theta * &field.from_int(s);
        let q = sf.taylor_shift(&-&shift);
        let norm = norm_to_q(&q, &m_t, field.degree())?;
        if !norm.is_squarefree()? {
            continue;
        }
        for h in factor_rational(&norm) {
            let hl = h.map(field.zero(), |c| field.from_rational(c.clone()));
            let g = q.gcd(&hl)?;
            match g.degree() {
                Some(1) => roots.push(&-g.coeff(0) - &shift),
                Some(0) | None => {}
                Some(_) => unresolved.push(h),
            }
        }
        return Ok(());
    }
    // no separating shift in range; report the norm of the whole polynomial
    unresolved.push(norm_to_q(sf, &m_t, field.degree())?.monic()?);
    Ok(())
}

/// `Res_t(m(t), q(c, t))` where `q`'s coefficients are read as polynomials
/// in `t`.
fn norm_to_q(q: &Poly<FieldElement>, m_t: &Poly<Poly<BigRational>>, degree: usize) -> Result<Poly<BigRational>> {
    let qzero = Poly::zero(BigRational::zero());
    let lifted: Vec<Poly<BigRational>> = (0..degree)
        .map(|j| Poly::new(q.coeffs().iter().map(|c| c.coords()[j].clone()).collect(), BigRational::zero()))
        .collect();
    let q_t = Poly::new(lifted, qzero);
    resultant(m_t, &q_t)
}

/// A minimal polynomial for the field generated by a root of `f`, in the
/// `t` text grammar. Quadratics are reduced to `t^2 - d` with `d` a
/// square-free integer.
pub fn suggest_field(f: &Poly<BigRational>) -> String {
    if f.degree() == Some(2) {
        let (a, b, c) = (f.coeff(2), f.coeff(1), f.coeff(0));
        let disc = b * b - BigRational::from_integer(4.into()) * a * c;
        // d * den^2 has the same square class as d
        let n = disc.numer() * disc.denom();
        let d = squarefree_part(&n);
        let p = Poly::new(
            vec![BigRational::from_integer(-d), BigRational::zero(), BigRational::one()],
            BigRational::zero(),
        );
        return p.display_with("t");
    }
    f.monic().map(|g| g.display_with("t")).unwrap_or_else(|_| f.display_with("t"))
}

/// Remove square factors found by trial division (complete for moderate
/// inputs; large cofactors are kept as they are).
fn squarefree_part(n: &BigInt) -> BigInt {
    let sign = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut rest = n.abs();
    let mut out = BigInt::one();
    let mut p = 2u64;
    while p < 100_000 {
        let pb = BigInt::from(p);
        if &pb * &pb > rest {
            break;
        }
        let mut e = 0;
        while rest.mod_floor(&pb).is_zero() {
            rest /= &pb;
            e += 1;
        }
        if e % 2 == 1 {
            out *= &pb;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if let Some(r) = rest.to_u64() {
        let s = (r as f64).sqrt().round() as u64;
        if s * s == r {
            return sign * out;
        }
    }
    sign * out * rest
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basefield::poly::{rational_poly, Ring};

    fn gaussian() -> BaseField {
        BaseField::new(Some(rational_poly(&[1, 0, 1]))).unwrap()
    }

    fn lift(field: &BaseField, c: &[i64]) -> Poly<FieldElement> {
        Poly::new(c.iter().map(|&x| field.from_int(x)).collect(), field.zero())
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        let q = BaseField::rationals();
        // (c - 1)^2 (c + 3)
        let p = lift(&q, &[3, -5, 1, 1]);
        let r = roots_in_field(&p).unwrap();
        assert_eq!(r.roots, vec![(q.from_int(-3), 1), (q.from_int(1), 2)]);
        assert!(r.unresolved.is_empty());
    }

    #[test]
    fn c_squared_plus_one_over_q_needs_i() {
        let q = BaseField::rationals();
        let r = roots_in_field(&lift(&q, &[1, 0, 1])).unwrap();
        assert!(r.roots.is_empty());
        assert_eq!(suggest_field(&r.unresolved[0]), "t^2 + 1");
        assert_eq!(
            roots_in_field(&lift(&q, &[1, 0, 1])).unwrap().require_all().unwrap_err(),
            Error::RequiresExtension { minpoly: "t^2 + 1".into() }
        );
    }

    #[test]
    fn c_squared_plus_one_over_gaussians() {
        let f = gaussian();
        let i = f.generator().unwrap();
        let r = roots_in_field(&lift(&f, &[1, 0, 1])).unwrap();
        assert!(r.unresolved.is_empty());
        let roots: Vec<_> = r.roots.iter().map(|x| x.0.clone()).collect();
        assert_eq!(roots, vec![-&i, i]);
    }

    #[test]
    fn roots_with_nonrational_coefficients() {
        let f = gaussian();
        let i = f.generator().unwrap();
        let a = &f.from_int(2) + &i;
        let b = &f.from_int(-1) - &(&i * &f.from_int(3));
        // (c - a)(c - b)(c^2 - 2)
        let p = Poly::linear_root(&a).mul_ref(&Poly::linear_root(&b)).mul_ref(&lift(&f, &[-2, 0, 1]));
        let r = roots_in_field(&p).unwrap();
        let mut got: Vec<_> = r.roots.iter().map(|x| x.0.clone()).collect();
        got.sort();
        let mut want = vec![a, b];
        want.sort();
        assert_eq!(got, want);
        assert_eq!(r.unresolved.len(), 1);
        // a primitive element of Q(i, sqrt 2) such as sqrt 2 + i
        assert_eq!(suggest_field(&r.unresolved[0]), "t^4 - 2*t^2 + 9");
    }

    #[test]
    fn quadratic_suggestion_strips_squares() {
        // roots (1 ± 6 i)/5 need i
        let p = Poly::new(
            vec![BigRational::new(37.into(), 25.into()), BigRational::new((-2).into(), 5.into()), BigRational::one()],
            BigRational::zero(),
        );
        assert_eq!(suggest_field(&p), "t^2 + 1");
    }
}
