//! Puiseux roots `X(ε)` of `F(ε, X)` by Newton-polygon iteration.
//!
//! Each edge of slope `-μ` of the lower hull of `{(i, v(a_i))}` contributes
//! roots `X = ε^μ (c + X₁)` with `c` a root of the edge's characteristic
//! polynomial. Simple `c` are finished by Newton iteration in truncated
//! arithmetic; multiple `c` recurse on `ε^{-m} F(ε^μ (c + X₁))`, which is
//! computed exactly.

use std::cmp::Ordering;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basefield::resultant::resultant;
use crate::basefield::roots::roots_in_field;
use crate::basefield::{FieldElement, Poly, Ring};
use crate::error::{Error, Result};
use crate::puiseux::{exponent, Exponent, PuiseuxElement, ZeroStatus};

/// Recursion depth at which separation is abandoned.
pub const MAX_DEPTH: usize = 64;

/// `F = Σ a_i(ε) X^i`, stored with `X` outer and `ε` inner.
#[derive(Clone, Debug)]
pub struct BranchRequest {
    pub f: Poly<Poly<FieldElement>>,
    pub target_truncation: Exponent,
    pub positive_valuation_only: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub series: PuiseuxElement,
    pub multiplicity_hint: usize,
}

/// `F(ε, x)` for a series `x`.
pub fn eval_at_series(f: &Poly<Poly<FieldElement>>, x: &PuiseuxElement) -> PuiseuxElement {
    let field = x.field();
    let mut acc = PuiseuxElement::zero(field);
    for a in f.coeffs().iter().rev() {
        acc = &(&acc * x) + &PuiseuxElement::from_eps_poly(a);
    }
    acc
}

/// Square-freeness of `F` in `X` over `L(ε)`.
///
/// A specialisation `ε = ε₀` that keeps the `X`-degree and is square-free
/// certifies it; failing that the discriminant is computed exactly.
pub fn is_squarefree_in_x(f: &Poly<Poly<FieldElement>>) -> Result<bool> {
    let Some(deg) = f.degree() else {
        return Ok(false);
    };
    if deg == 0 {
        return Ok(true);
    }
    let field = f.coeff_zero().coeff_zero().field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for k in 0..12i64 {
        let e0 = if k < 4 { field.from_int(k + 1) } else { field.from_int(rng.random_range(-1000..=1000)) };
        let spec = f.map(field.zero(), |a| a.eval(&e0));
        if spec.degree() != Some(deg) {
            continue;
        }
        if spec.is_squarefree()? {
            return Ok(true);
        }
    }
    let disc = resultant(f, &f.derivative())?;
    Ok(!disc.is_zero())
}

/// Every Puiseux root (or every root of positive valuation) of `F`, sorted
/// by leading exponent, then leading coefficient.
pub fn puiseux_roots(req: &BranchRequest) -> Result<Vec<Branch>> {
    let f = &req.f;
    let deg = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::Dimension("F needs positive degree in X".into())),
    };
    if !is_squarefree_in_x(f)? {
        return Err(Error::NotSquareFree);
    }
    let coeffs: Vec<PuiseuxElement> = f.coeffs().iter().map(PuiseuxElement::from_eps_poly).collect();
    let expected = if req.positive_valuation_only { positive_root_count(&coeffs) } else { deg };
    let target = req.target_truncation;
    let mut working = target;
    for _ in 0..8 {
        let mut roots = solve(&coeffs, working, req.positive_valuation_only, 0)?;
        if roots.len() != expected {
            return Err(Error::NotSquareFree);
        }
        sort_roots(&mut roots);
        let separated = roots.windows(2).all(|w| (&w[0] - &w[1]).zero_status() == ZeroStatus::NonZero);
        let mut shortfall = exponent(0);
        for r in &roots {
            let res = eval_at_series(f, r);
            if !res.terms().is_empty() {
                // a nonzero residual below the truncation means a wrong root
                return Err(Error::TruncationInsufficient);
            }
            if let Some(t) = res.truncation() {
                if t < target {
                    shortfall = shortfall.max(target - t);
                }
            }
        }
        if separated && shortfall.is_zero() {
            return Ok(roots.into_iter().map(|series| Branch { series, multiplicity_hint: 1 }).collect());
        }
        working = working + shortfall.max(working / 2);
    }
    Err(Error::TruncationInsufficient)
}

/// A `κ ∈ L` such that after `ε ↦ κε` the positive-valuation roots of `F`
/// start with `m`-th roots of unity, when the Newton polygon has a single
/// positive edge of height 1 and no interior support on it.
pub fn unit_scale(f: &Poly<Poly<FieldElement>>) -> Option<FieldElement> {
    let coeffs: Vec<PuiseuxElement> = f.coeffs().iter().map(PuiseuxElement::from_eps_poly).collect();
    let edges: Vec<_> = newton_edges(&coeffs).into_iter().filter(|e| e.2.is_positive()).collect();
    let [(i1, i2, mu)] = edges[..] else {
        return None;
    };
    let (v1, b) = coeffs[i1].leading()?.clone();
    let (v2, a) = coeffs[i2].leading()?.clone();
    if v1 - v2 != exponent(1) {
        return None;
    }
    let interior = (i1 + 1..i2)
        .any(|i| coeffs[i].leading().is_some_and(|(v, _)| *v == v1 - mu * Ratio::from_integer((i - i1) as i64)));
    if interior {
        return None;
    }
    Some(-a.div(&b).ok()?)
}

/// `F(κε, X)`.
pub fn rescale_eps(f: &Poly<Poly<FieldElement>>, kappa: &FieldElement) -> Poly<Poly<FieldElement>> {
    f.map(f.coeff_zero().clone(), |a| rescale_poly(a, kappa))
}

pub(crate) fn rescale_poly(a: &Poly<FieldElement>, kappa: &FieldElement) -> Poly<FieldElement> {
    let mut k = kappa.field().one();
    let mut out = Vec::with_capacity(a.coeffs().len());
    for c in a.coeffs() {
        out.push(c * &k);
        k = &k * kappa;
    }
    Poly::new(out, kappa.field().zero())
}

/// Roots of positive valuation, counted: the first index where `v(a_i)`
/// attains its minimum.
fn positive_root_count(a: &[PuiseuxElement]) -> usize {
    let vals: Vec<Option<Exponent>> = a.iter().map(|c| c.leading().map(|t| t.0)).collect();
    let min = vals.iter().flatten().min().copied();
    vals.iter().position(|v| *v == min && min.is_some()).unwrap_or(0)
}

fn sort_roots(roots: &mut [PuiseuxElement]) {
    roots.sort_by(|a, b| {
        let ka = a.terms().iter().map(|(e, c)| (*e, c.sort_key()));
        let kb = b.terms().iter().map(|(e, c)| (*e, c.sort_key()));
        // the zero series sorts last
        match (a.terms().is_empty(), b.terms().is_empty()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            _ => ka.cmp(kb),
        }
    });
}

/// Edges of the lower hull of `(i, v(a_i))` as `(i1, i2, μ)`, left to right.
fn newton_edges(a: &[PuiseuxElement]) -> Vec<(usize, usize, Exponent)> {
    let pts: Vec<(usize, Exponent)> = a.iter().enumerate().filter_map(|(i, c)| c.leading().map(|t| (i, t.0))).collect();
    let mut hull: Vec<(usize, Exponent)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (i1, v1) = hull[hull.len() - 2];
            let (i2, v2) = hull[hull.len() - 1];
            // drop the middle point unless it lies strictly below the chord
            let lhs = (v2 - v1) * Ratio::from_integer((p.0 - i1) as i64);
            let rhs = (p.1 - v1) * Ratio::from_integer((i2 - i1) as i64);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull.windows(2)
        .map(|w| {
            let slope = (w[1].1 - w[0].1) / Ratio::from_integer((w[1].0 - w[0].0) as i64);
            (w[0].0, w[1].0, -slope)
        })
        .collect()
}

/// Exact `ε^{-m} G(ε^μ (c + Y))` as coefficients in `Y`.
fn substitute(g: &[PuiseuxElement], mu: Exponent, c: &FieldElement, m: Exponent) -> Vec<PuiseuxElement> {
    let n = g.len();
    let b: Vec<PuiseuxElement> =
        g.iter().enumerate().map(|(i, a)| a.shift(mu * Ratio::from_integer(i as i64) - m)).collect();
    // Taylor shift by c: h_k = Σ_{i≥k} binom(i,k) c^{i-k} b_i
    let mut h = b;
    for k in 0..n {
        for i in (k + 1..n).rev() {
            let t = h[i].scale(c);
            h[i - 1] = &h[i - 1] + &t;
        }
    }
    h
}

fn solve(g: &[PuiseuxElement], target: Exponent, positive_only: bool, depth: usize) -> Result<Vec<PuiseuxElement>> {
    if depth > MAX_DEPTH {
        return Err(Error::TruncationInsufficient);
    }
    let field = g[0].field().clone();
    let mut out = Vec::new();
    let mut g: Vec<PuiseuxElement> = g.to_vec();
    while g.len() > 1 && g[0].zero_status() == ZeroStatus::Zero {
        out.push(PuiseuxElement::zero(&field));
        g.remove(0);
    }
    if out.len() > 1 {
        return Err(Error::NotSquareFree);
    }
    for (i1, i2, mu) in newton_edges(&g) {
        if positive_only && !mu.is_positive() {
            continue;
        }
        let m = g[i1].leading().expect("hull vertex").0 + mu * Ratio::from_integer(i1 as i64);
        let phi_coeffs: Vec<FieldElement> = (i1..=i2)
            .map(|i| match g[i].leading() {
                Some((v, c)) if *v + mu * Ratio::from_integer(i as i64) == m => c.clone(),
                _ => field.zero(),
            })
            .collect();
        let phi = Poly::new(phi_coeffs, field.zero());
        let roots = roots_in_field(&phi)?.require_all()?;
        for (c, r) in roots {
            let h = substitute(&g, mu, &c, m);
            let tails =
                if r == 1 { vec![simple_tail(&h, target - mu)?] } else { solve(&h, target - mu, true, depth + 1)? };
            if tails.len() != r {
                return Err(Error::NotSquareFree);
            }
            for y in tails {
                let x = &PuiseuxElement::constant(&c) + &y;
                out.push(x.shift(mu));
            }
        }
    }
    Ok(out)
}

/// The unique root of positive valuation of `H`, a polynomial over `O_v`
/// with `H(0) ∈ M_v` and `H'(0)` a unit, by Newton iteration with doubling
/// precision up to `prec`.
fn simple_tail(h: &[PuiseuxElement], prec: Exponent) -> Result<PuiseuxElement> {
    let field = h[0].field().clone();
    if h[0].zero_status() == ZeroStatus::Zero {
        return Ok(PuiseuxElement::zero(&field));
    }
    if !prec.is_positive() {
        return Ok(PuiseuxElement::from_terms(&field, [], Some(prec)));
    }
    let q = h.iter().map(PuiseuxElement::ramification).fold(1i64, num_integer::lcm);
    let dh: Vec<PuiseuxElement> =
        h[1..].iter().enumerate().map(|(i, a)| a.scale(&field.from_int(i as i64 + 1))).collect();
    let eval = |coeffs: &[PuiseuxElement], y: &PuiseuxElement, p: Exponent| {
        let mut acc = PuiseuxElement::zero(&field);
        for a in coeffs.iter().rev() {
            acc = (&(&acc * y) + &a.truncate(p)).truncate(p);
        }
        acc
    };
    let mut y = PuiseuxElement::zero(&field);
    let mut p = Ratio::new(1, q).min(prec);
    for _ in 0..200 {
        p = (p * 2).min(prec);
        let y_p = y.with_truncation(Some(p));
        let value = eval(h, &y_p, p);
        let slope = eval(&dh, &y_p, p);
        let delta = (&value * &slope.inv_to(p)?).truncate(p);
        y = &y_p - &delta;
        if p == prec && delta.terms().is_empty() {
            return Ok(y);
        }
    }
    Err(Error::TruncationInsufficient)
}
