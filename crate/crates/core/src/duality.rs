//! Recovering valuation data from a specialisation on `P¹`, and the round
//! trips between valuations and specialisations.
//!
//! A specialisation is seen only through `k ↦ π₁([k : 1])`. From that:
//! `O_K = (π₁∘γ)⁻¹(U)` with `U = P¹ ∖ {[1:0]}`, `M_K = (π₁∘γ)⁻¹([0:1])`,
//! and `v(x) ≤ v(y)` iff `y/x ∈ O_K`.

use crate::basefield::{BaseField, FieldElement, MPoly};
use crate::error::{Error, Result};
use crate::projective::{equation, ProjPointK, ProjPointL, VarietyPredicate};
use crate::puiseux::{exponent, Exponent, PuiseuxElement, ValuationValue};

/// `k ↦ π₁([k : 1])`.
pub trait SpecOracle: Sync {
    fn apply(&self, k: &PuiseuxElement) -> Result<ProjPointL>;
}

/// `γ(k) = [k : 1]`.
pub fn gamma(k: &PuiseuxElement) -> ProjPointK {
    ProjPointK::new(vec![k.clone(), PuiseuxElement::one(k.field())]).expect("second coordinate is 1")
}

/// A Krull valuation on `K` with value group inside `Q`.
pub trait Valuation: Sync {
    fn value(&self, k: &PuiseuxElement) -> Result<ValuationValue>;
}

/// The order in `ε`.
pub struct OrderValuation;

impl Valuation for OrderValuation {
    fn value(&self, k: &PuiseuxElement) -> Result<ValuationValue> {
        k.val()
    }
}

/// `c · v` for a positive rational `c`: an equivalent valuation.
pub struct ScaledOrderValuation(pub Exponent);

impl Valuation for ScaledOrderValuation {
    fn value(&self, k: &PuiseuxElement) -> Result<ValuationValue> {
        assert!(self.0 > exponent(0), "scale must be positive");
        Ok(match k.val()? {
            ValuationValue::Finite(e) => ValuationValue::Finite(e * self.0),
            ValuationValue::Infinity => ValuationValue::Infinity,
        })
    }
}

/// The specialisation `Ψ(v)`: multiply by `λ = 1/x_j` for a coordinate of
/// least value and take residues.
pub struct ValuationOracle<V: Valuation>(pub V);

impl<V: Valuation> SpecOracle for ValuationOracle<V> {
    fn apply(&self, k: &PuiseuxElement) -> Result<ProjPointL> {
        let point = gamma(k);
        let values = point.coords().iter().map(|c| self.0.value(c)).collect::<Result<Vec<_>>>()?;
        let min = *values.iter().min().expect("two coordinates");
        let j = values.iter().position(|v| *v == min).expect("present");
        let lambda = point.coords()[j].inv()?;
        let residues = point.coords().iter().map(|c| (c * &lambda).residue()).collect::<Result<Vec<_>>>()?;
        ProjPointL::new(residues)
    }
}

/// The specialisation of the order valuation.
pub fn honest_oracle() -> ValuationOracle<OrderValuation> {
    ValuationOracle(OrderValuation)
}

/// Sends everything to one fixed point; not a specialisation.
pub struct ConstantOracle(pub ProjPointL);

impl SpecOracle for ConstantOracle {
    fn apply(&self, _k: &PuiseuxElement) -> Result<ProjPointL> {
        Ok(self.0.clone())
    }
}

fn infinity_point(field: &BaseField) -> ProjPointL {
    ProjPointL::new(vec![field.one(), field.zero()]).expect("nonzero")
}

fn origin_point(field: &BaseField) -> ProjPointL {
    ProjPointL::new(vec![field.zero(), field.one()]).expect("nonzero")
}

/// `k ∈ O_K`.
pub fn in_valuation_ring(s: &dyn SpecOracle, k: &PuiseuxElement) -> Result<bool> {
    Ok(s.apply(k)? != infinity_point(k.field()))
}

/// `k ∈ M_K`.
pub fn in_maximal_ideal(s: &dyn SpecOracle, k: &PuiseuxElement) -> Result<bool> {
    Ok(s.apply(k)? == origin_point(k.field()))
}

/// The recovered order on values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueOrder {
    /// `v(x) ≤ v(y)`
    Le,
    /// `v(x) > v(y)`
    Gt,
}

pub fn value_compare(s: &dyn SpecOracle, x: &PuiseuxElement, y: &PuiseuxElement) -> Result<ValueOrder> {
    let q = y.div(x)?;
    Ok(if in_valuation_ring(s, &q)? { ValueOrder::Le } else { ValueOrder::Gt })
}

/// The `l ∈ L` with `π₁([k:1]) = [l:1]`, for `k ∈ O_K`.
pub fn recovered_residue(s: &dyn SpecOracle, k: &PuiseuxElement) -> Result<Option<FieldElement>> {
    let p = s.apply(k)?;
    let c = p.coords();
    if c[1].is_zero() {
        return Ok(None);
    }
    Ok(Some(c[0].div(&c[1])?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundtripReport {
    pub samples: usize,
}

fn counterexample(k: &PuiseuxElement) -> Error {
    Error::CounterexampleFound { element: k.to_string() }
}

/// Checks `Φ∘Ψ = Id` and `Ψ∘Φ = Id` on the samples for the oracle `s`,
/// taking the order valuation as the reference.
///
/// For each `k`: membership in the recovered `O_K` and `M_K` must match
/// `v(k) ≥ 0` and `v(k) > 0`; and the specialisation rebuilt from the
/// recovered ring (split `k = l + m` with `m ∈ M_K`, or use `1/k`) must
/// agree with `s`. The structural probes `ε ∈ M_K` and `ε⁻¹ ∉ O_K` come
/// last.
pub fn roundtrip_check_with(s: &dyn SpecOracle, samples: &[PuiseuxElement]) -> Result<RoundtripReport> {
    for k in samples {
        let field = k.field();
        let v = k.val()?;
        let in_o = in_valuation_ring(s, k)?;
        let in_m = in_maximal_ideal(s, k)?;
        let zero = ValuationValue::Finite(exponent(0));
        if in_o != (v >= zero) || in_m != (v > zero) {
            return Err(counterexample(k));
        }
        let rebuilt = if in_o {
            let l = k.coeff_at(exponent(0));
            if !in_maximal_ideal(s, &(k - &PuiseuxElement::constant(&l)))? {
                return Err(counterexample(k));
            }
            ProjPointL::new(vec![l, field.one()])?
        } else {
            let inv = k.inv()?;
            if !in_maximal_ideal(s, &inv)? {
                return Err(counterexample(k));
            }
            infinity_point(field)
        };
        if rebuilt != s.apply(k)? {
            return Err(counterexample(k));
        }
    }
    if let Some(k) = samples.first() {
        let eps = PuiseuxElement::eps(k.field());
        if !in_maximal_ideal(s, &eps)? {
            return Err(counterexample(&eps));
        }
        let big = eps.inv()?;
        if in_valuation_ring(s, &big)? {
            return Err(counterexample(&big));
        }
    }
    Ok(RoundtripReport { samples: samples.len() })
}

pub fn roundtrip_check(samples: &[PuiseuxElement]) -> Result<RoundtripReport> {
    roundtrip_check_with(&honest_oracle(), samples)
}

// Test varieties. Coordinates of a tuple are numbered block by block.

fn var(block: usize, width: usize, i: usize) -> usize {
    block * width + i
}

/// `uwz = yvx` on `(P¹)³` in coordinates `([u:v],[w:x],[y:z])`.
pub fn mul_graph(field: &BaseField) -> VarietyPredicate {
    let (u, v, w, x, y, z) = (0, 1, 2, 3, 4, 5);
    let eq = equation(field, 6, &[(1, &[(u, 1), (w, 1), (z, 1)]), (-1, &[(y, 1), (v, 1), (x, 1)])]);
    VarietyPredicate::new(3, 1, vec![eq]).expect("homogeneous")
}

/// `uxz + wvz = yvx` on `(P¹)³`.
pub fn add_graph(field: &BaseField) -> VarietyPredicate {
    let (u, v, w, x, y, z) = (0, 1, 2, 3, 4, 5);
    let eq = equation(
        field,
        6,
        &[(1, &[(u, 1), (x, 1), (z, 1)]), (1, &[(w, 1), (v, 1), (z, 1)]), (-1, &[(y, 1), (v, 1), (x, 1)])],
    );
    VarietyPredicate::new(3, 1, vec![eq]).expect("homogeneous")
}

/// `([x:1], [y:1], [xy:1])`, on `mul_graph`.
pub fn mul_graph_witness(x: &PuiseuxElement, y: &PuiseuxElement) -> [ProjPointK; 3] {
    [gamma(x), gamma(y), gamma(&(x * y))]
}

/// `([x:1], [y:1], [x+y:1])`, on `add_graph`.
pub fn add_graph_witness(x: &PuiseuxElement, y: &PuiseuxElement) -> [ProjPointK; 3] {
    [gamma(x), gamma(y), gamma(&(x + y))]
}

/// On `(P^{n+1})³`: `x₀y₁z₁ + y₀xₙz₁ = z₀xₙy₁` and
/// `x_{n+1}y₁z₁ + y_{n+1}xₙz₁ = z_{n+1}xₙy₁`.
pub fn sum(field: &BaseField, n: usize) -> VarietyPredicate {
    let w = n + 2;
    let eqs = [0, n + 1]
        .into_iter()
        .map(|j| {
            let (xj, yj, zj) = (var(0, w, j), var(1, w, j), var(2, w, j));
            let (xn, y1, z1) = (var(0, w, n), var(1, w, 1), var(2, w, 1));
            equation(
                field,
                3 * w,
                &[
                    (1, &[(xj, 1), (y1, 1), (z1, 1)]),
                    (1, &[(yj, 1), (xn, 1), (z1, 1)]),
                    (-1, &[(zj, 1), (xn, 1), (y1, 1)]),
                ],
            )
        })
        .collect();
    VarietyPredicate::new(3, n + 1, eqs).expect("homogeneous")
}

/// `([0:…:1:k], [k:1:0:…:0], [k:1:…:1:k])`, on `sum`.
pub fn sum_witness(k: &PuiseuxElement, n: usize) -> [ProjPointK; 3] {
    let f = k.field();
    let zero = PuiseuxElement::zero(f);
    let one = PuiseuxElement::one(f);
    let mut x = vec![zero.clone(); n + 2];
    x[n] = one.clone();
    x[n + 1] = k.clone();
    let mut y = vec![zero; n + 2];
    y[0] = k.clone();
    y[1] = one.clone();
    let mut z = vec![one; n + 2];
    z[0] = k.clone();
    z[n + 1] = k.clone();
    [x, y, z].map(|c| ProjPointK::new(c).expect("nonzero"))
}

/// On `(P^{n+1})³`, for every `j ≠ n`: `x_j yₙ zₙ + y_j xₙ zₙ = z_j xₙ yₙ`,
/// which says `x + y = z` after normalising the `n`-th coordinates.
pub fn sum_prime(field: &BaseField, n: usize) -> VarietyPredicate {
    let w = n + 2;
    let eqs = (0..n + 2)
        .filter(|j| *j != n)
        .map(|j| {
            let (xj, yj, zj) = (var(0, w, j), var(1, w, j), var(2, w, j));
            let (xn, yn, zn) = (var(0, w, n), var(1, w, n), var(2, w, n));
            equation(
                field,
                3 * w,
                &[
                    (1, &[(xj, 1), (yn, 1), (zn, 1)]),
                    (1, &[(yj, 1), (xn, 1), (zn, 1)]),
                    (-1, &[(zj, 1), (xn, 1), (yn, 1)]),
                ],
            )
        })
        .collect();
    VarietyPredicate::new(3, n + 1, eqs).expect("homogeneous")
}

/// `([0:…:0:1:k_{n+1}], [k₀:…:k_{n-1}:1:0], [k₀:…:k_{n-1}:1:k_{n+1}])`
/// from `ks = (k₀, …, k_{n-1}, k_{n+1})`, on `sum_prime`.
pub fn sum_prime_witness(ks: &[PuiseuxElement]) -> [ProjPointK; 3] {
    let n = ks.len() - 1;
    let f = ks[0].field();
    let zero = PuiseuxElement::zero(f);
    let one = PuiseuxElement::one(f);
    let last = ks[n].clone();
    let mut x = vec![zero.clone(); n + 2];
    x[n] = one.clone();
    x[n + 1] = last.clone();
    let mut y: Vec<PuiseuxElement> = ks[..n].to_vec();
    y.push(one.clone());
    y.push(zero);
    let mut z: Vec<PuiseuxElement> = ks[..n].to_vec();
    z.push(one);
    z.push(last);
    [x, y, z].map(|c| ProjPointK::new(c).expect("nonzero"))
}

/// `x₀ = … = x_{n-1} = 0` in `P^{n+1}`.
pub fn aux_c(field: &BaseField, n: usize) -> VarietyPredicate {
    let eqs: Vec<MPoly<FieldElement>> = (0..n).map(|i| equation(field, n + 2, &[(1, &[(i, 1)])])).collect();
    VarietyPredicate::new(1, n + 1, eqs).expect("homogeneous")
}

/// `[0:…:0:1:k]`, on `aux_c`.
pub fn aux_c_witness(k: &PuiseuxElement, n: usize) -> ProjPointK {
    let f = k.field();
    let mut c = vec![PuiseuxElement::zero(f); n + 2];
    c[n] = PuiseuxElement::one(f);
    c[n + 1] = k.clone();
    ProjPointK::new(c).expect("nonzero")
}

/// `x₁ = … = xₙ` and `x₀ = x_{n+1}` in `P^{n+1}`.
pub fn aux_d(field: &BaseField, n: usize) -> VarietyPredicate {
    let mut eqs: Vec<MPoly<FieldElement>> =
        (1..n).map(|i| equation(field, n + 2, &[(1, &[(i, 1)]), (-1, &[(i + 1, 1)])])).collect();
    eqs.push(equation(field, n + 2, &[(1, &[(0, 1)]), (-1, &[(n + 1, 1)])]));
    VarietyPredicate::new(1, n + 1, eqs).expect("homogeneous")
}

/// `[k:1:…:1:k]`, on `aux_d`.
pub fn aux_d_witness(k: &PuiseuxElement, n: usize) -> ProjPointK {
    let f = k.field();
    let mut c = vec![PuiseuxElement::one(f); n + 2];
    c[0] = k.clone();
    c[n + 1] = k.clone();
    ProjPointK::new(c).expect("nonzero")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_puiseux;
    use crate::projective::specialize;
    use crate::sample;

    fn q() -> BaseField {
        BaseField::rationals()
    }

    fn k(text: &str) -> PuiseuxElement {
        parse_puiseux(text, &q()).unwrap()
    }

    #[test]
    fn valuation_ring_membership() {
        let s = honest_oracle();
        assert!(in_valuation_ring(&s, &k("eps")).unwrap());
        assert!(!in_valuation_ring(&s, &k("eps^(-1)")).unwrap());
        assert!(in_valuation_ring(&s, &k("eps^(-1)").inv().unwrap()).unwrap());
        assert!(in_valuation_ring(&s, &k("5")).unwrap());
    }

    #[test]
    fn maximal_ideal_membership() {
        let s = honest_oracle();
        assert!(in_maximal_ideal(&s, &k("eps^(1/2)")).unwrap());
        assert!(!in_maximal_ideal(&s, &k("1 + eps")).unwrap());
        assert!(in_maximal_ideal(&s, &k("0")).unwrap());
    }

    #[test]
    fn value_comparisons() {
        let s = honest_oracle();
        assert_eq!(value_compare(&s, &k("eps^2"), &k("eps^3")).unwrap(), ValueOrder::Le);
        assert_eq!(value_compare(&s, &k("eps^3"), &k("eps^2")).unwrap(), ValueOrder::Gt);
        assert_eq!(value_compare(&s, &k("2"), &k("3")).unwrap(), ValueOrder::Le);
        assert_eq!(value_compare(&s, &k("3"), &k("2")).unwrap(), ValueOrder::Le);
    }

    #[test]
    fn roundtrip_examples() {
        let samples: Vec<_> = ["eps", "eps^(-1)", "1 + eps", "0", "7"].iter().map(|t| k(t)).collect();
        assert_eq!(roundtrip_check(&samples).unwrap().samples, 5);
        let fake = ConstantOracle(ProjPointL::parse("[1 : 1]", &q()).unwrap());
        assert!(matches!(roundtrip_check_with(&fake, &samples), Err(Error::CounterexampleFound { .. })));
    }

    #[test]
    fn roundtrip_random_seed_7() {
        let f = q();
        let mut r = sample::rng(7);
        let samples: Vec<_> = (0..200).map(|_| sample::puiseux(&mut r, &f)).collect();
        assert!(roundtrip_check(&samples).is_ok());
        // independent reference: the oracle agrees with val() directly
        let s = honest_oracle();
        for x in &samples {
            let v = x.val().unwrap();
            assert_eq!(in_valuation_ring(&s, x).unwrap(), v >= ValuationValue::Finite(exponent(0)));
        }
    }

    #[test]
    fn scaled_valuation_gives_same_ring() {
        let f = q();
        let a = honest_oracle();
        let b = ValuationOracle(ScaledOrderValuation(exponent(3)));
        let mut r = sample::rng(11);
        for _ in 0..100 {
            let x = sample::puiseux(&mut r, &f);
            assert_eq!(in_valuation_ring(&a, &x).unwrap(), in_valuation_ring(&b, &x).unwrap());
        }
    }

    #[test]
    fn witnesses_lie_on_fixtures() {
        let f = q();
        let x = k("eps + 2");
        let y = k("3*eps^(-1/2)");
        assert!(mul_graph(&f).holds_k(&mul_graph_witness(&x, &y)).unwrap());
        assert!(add_graph(&f).holds_k(&add_graph_witness(&x, &y)).unwrap());
        for n in 1..=3 {
            let kk = k("eps^(-1) + 1");
            let w = sum_witness(&kk, n);
            assert!(sum(&f, n).holds_k(&w).unwrap());
            let sp: Vec<ProjPointL> = w.iter().map(|p| specialize(p).unwrap()).collect();
            assert!(sum(&f, n).holds_l(&sp).unwrap());
            let ks: Vec<_> = (0..=n).map(|i| k(&format!("{} + eps^{}", i + 2, i + 1))).collect();
            let w = sum_prime_witness(&ks);
            assert!(sum_prime(&f, n).holds_k(&w).unwrap());
            assert!(aux_c(&f, n).holds_k(&[aux_c_witness(&kk, n)]).unwrap());
            assert!(aux_d(&f, n).holds_k(&[aux_d_witness(&kk, n)]).unwrap());
            assert!(!aux_d(&f, n).holds_k(&[aux_c_witness(&kk, n)]).unwrap());
        }
    }
}
