//! Seeded random generators for elements, points, varieties and matrices.
//!
//! Everything is driven by a caller-supplied `ChaCha8Rng`, so a seed fixes
//! the whole sample.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::basefield::{BaseField, FieldElement, MPoly};
use crate::error::Result;
use crate::projective::{ProjPointK, VarietyPredicate};
use crate::puiseux::{Exponent, PuiseuxElement};

pub use rand::SeedableRng;
pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rational(rng: &mut SampleRng, bound: i64) -> BigRational {
    let n = rng.random_range(-bound..=bound);
    let d = rng.random_range(1..=5i64);
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn field_element(rng: &mut SampleRng, field: &BaseField) -> FieldElement {
    let coords = (0..field.degree()).map(|_| rational(rng, 9)).collect();
    field.element(coords).expect("right length")
}

pub fn nonzero_field_element(rng: &mut SampleRng, field: &BaseField) -> FieldElement {
    loop {
        let c = field_element(rng, field);
        if !c.is_zero() {
            return c;
        }
    }
}

/// An exact series with one to four terms, ramification dividing 12 and
/// exponents in `[-3, 4]`.
pub fn nonzero_puiseux(rng: &mut SampleRng, field: &BaseField) -> PuiseuxElement {
    sparse_puiseux(rng, field, 4)
}

fn sparse_puiseux(rng: &mut SampleRng, field: &BaseField, max_terms: usize) -> PuiseuxElement {
    let count = rng.random_range(1..=max_terms);
    let terms: Vec<(Exponent, FieldElement)> = (0..count)
        .map(|_| {
            let q = [1i64, 1, 2, 3, 4][rng.random_range(0..5)];
            let p = rng.random_range(-3 * q..=4 * q);
            (Ratio::new(p, q), nonzero_field_element(rng, field))
        })
        .collect();
    let x = PuiseuxElement::from_terms(field, terms, None);
    if x.terms().is_empty() {
        PuiseuxElement::constant(&nonzero_field_element(rng, field))
    } else {
        x
    }
}

/// Like [`nonzero_puiseux`], but exactly zero one time in twenty.
pub fn puiseux(rng: &mut SampleRng, field: &BaseField) -> PuiseuxElement {
    if rng.random_range(0..20) == 0 {
        PuiseuxElement::zero(field)
    } else {
        nonzero_puiseux(rng, field)
    }
}

/// A nonzero series of nonnegative valuation.
pub fn integral_puiseux(rng: &mut SampleRng, field: &BaseField) -> PuiseuxElement {
    let x = nonzero_puiseux(rng, field);
    match x.leading() {
        Some((e, _)) if *e < Ratio::from_integer(0) => x.shift(-*e),
        _ => x,
    }
}

pub fn k_point(rng: &mut SampleRng, field: &BaseField, n: usize) -> ProjPointK {
    loop {
        let coords = (0..=n).map(|_| puiseux(rng, field)).collect();
        if let Ok(p) = ProjPointK::new(coords) {
            return p;
        }
    }
}

/// All exponent vectors of total degree `d` in `nvars` variables.
pub fn monomials(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    if nvars == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in monomials(nvars - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// A random form of degree `d` in the variables listed in `vars` of an
/// `nvars`-variable ring.
fn random_form(
    rng: &mut SampleRng,
    field: &BaseField,
    nvars: usize,
    blocks: &[(&[usize], u32)],
) -> MPoly<FieldElement> {
    let mut acc = MPoly::constant(nvars, field.one());
    for (vars, d) in blocks {
        let mut f = MPoly::zero(nvars, field.zero());
        for m in monomials(vars.len(), *d) {
            let mut full = vec![0u32; nvars];
            for (v, k) in vars.iter().zip(&m) {
                full[*v] = *k;
            }
            let c = field.from_int(rng.random_range(-5..=5));
            f = f.add(&MPoly::from_terms(nvars, field.zero(), [(full, c)]));
        }
        acc = acc.mul(&f);
    }
    acc
}

/// A multi-homogeneous variety over `L` in `(Pⁿ)^m` (`m` is 1 or 2) and a
/// tuple of `K`-points on it.
///
/// The equation is `x_n A + B` in the last block, with `A`, `B` free of
/// `x_n`; the last point is `[a A(a) : -B(a)]` for a random `a`, which makes
/// the equation vanish identically whatever `a` is.
pub fn variety_through_point(
    rng: &mut SampleRng,
    field: &BaseField,
    m: usize,
    n: usize,
) -> Result<(VarietyPredicate, Vec<ProjPointK>)> {
    assert!(m == 1 || m == 2, "arity 1 or 2");
    let nvars = m * (n + 1);
    loop {
        let mut pts: Vec<ProjPointK> = Vec::new();
        if m == 2 {
            let coords = (0..=n).map(|_| sparse_puiseux(rng, field, 2)).collect();
            pts.push(ProjPointK::new(coords)?);
        }
        let last = (m - 1) * (n + 1);
        let free: Vec<usize> = (last..last + n).collect();
        let xn = last + n;
        let d = rng.random_range(1..=2u32);
        let earlier: Vec<usize> = (0..last).collect();
        let d_early = 1;
        let mut blocks_a: Vec<(&[usize], u32)> = vec![(&free[..], d - 1)];
        let mut blocks_b: Vec<(&[usize], u32)> = vec![(&free[..], d)];
        if m == 2 {
            blocks_a.push((&earlier[..], d_early));
            blocks_b.push((&earlier[..], d_early));
        }
        let a = random_form(rng, field, nvars, &blocks_a);
        let b = random_form(rng, field, nvars, &blocks_b);
        let eq = MPoly::var(nvars, xn, field.zero()).mul(&a).add(&b);
        if eq.is_zero() {
            continue;
        }
        let av: Vec<PuiseuxElement> = (0..n).map(|_| sparse_puiseux(rng, field, 2)).collect();
        let mut vars: Vec<PuiseuxElement> = pts.iter().flat_map(|p| p.coords().iter().cloned()).collect();
        vars.extend(av.iter().cloned());
        vars.push(PuiseuxElement::zero(field));
        let zero = PuiseuxElement::zero(field);
        let a_val = a.eval(&vars, zero.clone(), PuiseuxElement::constant);
        let b_val = b.eval(&vars, zero, PuiseuxElement::constant);
        let mut coords: Vec<PuiseuxElement> = av.iter().map(|x| x * &a_val).collect();
        coords.push(-&b_val);
        let Ok(p) = ProjPointK::new(coords) else {
            continue;
        };
        pts.push(p);
        let v = VarietyPredicate::new(m, n, vec![eq])?;
        return Ok((v, pts));
    }
}

/// A 3×3 integer matrix with entries in `[-2, 2]` and determinant ±1.
pub fn unimodular(rng: &mut SampleRng) -> [[i64; 3]; 3] {
    loop {
        let mut m = [[0i64; 3]; 3];
        for row in m.iter_mut() {
            for e in row.iter_mut() {
                *e = rng.random_range(-2..=2);
            }
        }
        if det3(&m).abs() == 1 {
            return m;
        }
    }
}

pub fn det3(m: &[[i64; 3]; 3]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}
