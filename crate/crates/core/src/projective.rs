//! Points of `Pⁿ(K)` and `Pⁿ(L)`, the embeddings `i_n`, the Segre map,
//! multi-homogeneous variety predicates, and the specialisation `π_n`
//! induced by the order valuation.

use std::fmt;

use crate::basefield::{BaseField, FieldElement, MPoly};
use crate::error::{Error, Result};
use crate::parse::{parse_field_element, parse_puiseux, split_point};
use crate::puiseux::{Exponent, PuiseuxElement, ZeroStatus};

/// A point of `Pⁿ(K)`. The given representative is kept; equality is up
/// to a `K*` scalar and is decided by cross products.
#[derive(Clone, Debug)]
pub struct ProjPointK {
    coords: Vec<PuiseuxElement>,
}

/// A point of `Pⁿ(L)` in canonical form: the first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPointL {
    coords: Vec<FieldElement>,
}

impl ProjPointK {
    /// Needs at least two coordinates, one of them certainly nonzero.
    pub fn new(coords: Vec<PuiseuxElement>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::Dimension("a projective point needs at least two coordinates".into()));
        }
        let statuses: Vec<ZeroStatus> = coords.iter().map(PuiseuxElement::zero_status).collect();
        if statuses.contains(&ZeroStatus::NonZero) {
            Ok(ProjPointK { coords })
        } else if statuses.contains(&ZeroStatus::Indeterminate) {
            Err(Error::IndeterminateValuation)
        } else {
            Err(Error::Dimension("all coordinates are zero".into()))
        }
    }

    pub fn from_l(p: &ProjPointL) -> Self {
        ProjPointK { coords: p.coords.iter().map(PuiseuxElement::constant).collect() }
    }

    pub fn parse(text: &str, field: &BaseField) -> Result<Self> {
        let coords = split_point(text)?.into_iter().map(|c| parse_puiseux(c, field)).collect::<Result<Vec<_>>>()?;
        Self::new(coords)
    }

    pub fn coords(&self) -> &[PuiseuxElement] {
        &self.coords
    }

    /// `n` for a point of `Pⁿ`.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn field(&self) -> &BaseField {
        self.coords[0].field()
    }

    pub fn scale(&self, c: &PuiseuxElement) -> Result<Self> {
        Self::new(self.coords.iter().map(|x| x * c).collect())
    }

    /// `i_n`: append a zero coordinate.
    pub fn embed(&self) -> Self {
        let mut coords = self.coords.clone();
        coords.push(PuiseuxElement::zero(self.field()));
        ProjPointK { coords }
    }

    /// Equality in `Pⁿ(K)`: all `x_i y_j - x_j y_i` vanish. Indeterminate
    /// when some cross product is zero only up to truncation.
    pub fn equals(&self, other: &Self) -> Result<bool> {
        if self.coords.len() != other.coords.len() {
            return Ok(false);
        }
        let mut undecided = false;
        for i in 0..self.coords.len() {
            for j in i + 1..self.coords.len() {
                let d = &(&self.coords[i] * &other.coords[j]) - &(&self.coords[j] * &other.coords[i]);
                match d.zero_status() {
                    ZeroStatus::Zero => {}
                    ZeroStatus::NonZero => return Ok(false),
                    ZeroStatus::Indeterminate => undecided = true,
                }
            }
        }
        if undecided {
            Err(Error::IndeterminateValuation)
        } else {
            Ok(true)
        }
    }

    /// Divide by the first coordinate of minimal valuation, which becomes 1;
    /// quotients are known up to about `ε^prec`.
    pub fn canonical(&self, prec: Exponent) -> Result<Self> {
        let vals = self.coords.iter().map(PuiseuxElement::val).collect::<Result<Vec<_>>>()?;
        let min = *vals.iter().min().expect("nonempty");
        let k = vals.iter().position(|v| *v == min).expect("present");
        let pivot = self.coords[k].clone();
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(i, x)| if i == k { Ok(PuiseuxElement::one(x.field())) } else { x.div_to(&pivot, prec) })
            .collect::<Result<Vec<_>>>()?;
        Ok(ProjPointK { coords })
    }
}

impl fmt::Display for ProjPointK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(" : "))
    }
}

impl ProjPointL {
    pub fn new(coords: Vec<FieldElement>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::Dimension("a projective point needs at least two coordinates".into()));
        }
        let Some(k) = coords.iter().position(|c| !c.is_zero()) else {
            return Err(Error::Dimension("all coordinates are zero".into()));
        };
        let inv = coords[k].inverse()?;
        Ok(ProjPointL { coords: coords.iter().map(|c| c * &inv).collect() })
    }

    pub fn parse(text: &str, field: &BaseField) -> Result<Self> {
        let coords =
            split_point(text)?.into_iter().map(|c| parse_field_element(c, field)).collect::<Result<Vec<_>>>()?;
        Self::new(coords)
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn field(&self) -> &BaseField {
        self.coords[0].field()
    }

    pub fn embed(&self) -> Self {
        let mut coords = self.coords.clone();
        coords.push(self.field().zero());
        ProjPointL { coords }
    }
}

impl fmt::Display for ProjPointL {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(" : "))
    }
}

/// `π_n`: scale by `ε^{-μ}` with `μ` the least coordinate valuation and
/// take residues.
///
/// A coordinate with no terms below a truncation `t > μ` certainly has
/// residue zero after scaling, so it does not make the answer indeterminate.
pub fn specialize(p: &ProjPointK) -> Result<ProjPointL> {
    let mu = p.coords.iter().filter_map(|c| c.leading().map(|t| t.0)).min().ok_or(Error::IndeterminateValuation)?;
    let mut out = Vec::with_capacity(p.coords.len());
    for c in &p.coords {
        if c.terms().is_empty() && c.truncation().is_some_and(|t| t <= mu) {
            return Err(Error::IndeterminateValuation);
        }
        out.push(c.coeff_at(mu));
    }
    ProjPointL::new(out)
}

/// The Segre map `Pⁿ × Pᵐ → P^{(n+1)(m+1)-1}`, coordinates `x_i y_j` in
/// row-major order.
pub fn segre_k(p: &ProjPointK, q: &ProjPointK) -> ProjPointK {
    let coords = p.coords.iter().flat_map(|x| q.coords.iter().map(move |y| x * y)).collect();
    ProjPointK { coords }
}

pub fn segre_l(p: &ProjPointL, q: &ProjPointL) -> ProjPointL {
    let coords = p.coords.iter().flat_map(|x| q.coords.iter().map(move |y| x * y)).collect();
    ProjPointL::new(coords).expect("product of nonzero points is nonzero")
}

/// A closed subvariety of `(Pⁿ)^m` cut out by multi-homogeneous equations
/// over `L`. Variables are numbered block by block.
#[derive(Clone, Debug)]
pub struct VarietyPredicate {
    m: usize,
    n: usize,
    equations: Vec<MPoly<FieldElement>>,
}

impl VarietyPredicate {
    pub fn new(m: usize, n: usize, equations: Vec<MPoly<FieldElement>>) -> Result<Self> {
        for eq in &equations {
            if eq.nvars() != m * (n + 1) {
                return Err(Error::Dimension(format!(
                    "equation has {} variables, expected {}",
                    eq.nvars(),
                    m * (n + 1)
                )));
            }
            for b in 0..m {
                if !eq.is_zero() && eq.homogeneous_degree_in(b * (n + 1)..(b + 1) * (n + 1)).is_none() {
                    return Err(Error::NotHomogeneous);
                }
            }
        }
        Ok(VarietyPredicate { m, n, equations })
    }

    pub fn arity(&self) -> usize {
        self.m
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn equations(&self) -> &[MPoly<FieldElement>] {
        &self.equations
    }

    fn check_arity(&self, dims: impl Iterator<Item = usize>, count: usize) -> Result<()> {
        if count != self.m {
            return Err(Error::Dimension(format!("expected {} points, got {count}", self.m)));
        }
        for d in dims {
            if d != self.n {
                return Err(Error::Dimension(format!("expected points of P^{}, got P^{d}", self.n)));
            }
        }
        Ok(())
    }

    /// `V(ā)` for a tuple of `K`-points. Zero only up to truncation is an
    /// error, not an answer.
    pub fn holds_k(&self, pts: &[ProjPointK]) -> Result<bool> {
        self.check_arity(pts.iter().map(ProjPointK::dim), pts.len())?;
        let field = pts[0].field().clone();
        let vars: Vec<PuiseuxElement> = pts.iter().flat_map(|p| p.coords.iter().cloned()).collect();
        let mut undecided = false;
        for eq in &self.equations {
            let v = eq.eval(&vars, PuiseuxElement::zero(&field), PuiseuxElement::constant);
            match v.zero_status() {
                ZeroStatus::Zero => {}
                ZeroStatus::NonZero => return Ok(false),
                ZeroStatus::Indeterminate => undecided = true,
            }
        }
        if undecided {
            Err(Error::IndeterminateValuation)
        } else {
            Ok(true)
        }
    }

    pub fn holds_l(&self, pts: &[ProjPointL]) -> Result<bool> {
        self.check_arity(pts.iter().map(ProjPointL::dim), pts.len())?;
        let field = pts[0].field().clone();
        let vars: Vec<FieldElement> = pts.iter().flat_map(|p| p.coords.iter().cloned()).collect();
        Ok(self.equations.iter().all(|eq| eq.eval(&vars, field.zero(), FieldElement::clone).is_zero()))
    }
}

/// Builds equations from monomials written as `(coefficient, [(var, power)])`.
pub fn equation(field: &BaseField, nvars: usize, terms: &[(i64, &[(usize, u32)])]) -> MPoly<FieldElement> {
    MPoly::from_terms(
        nvars,
        field.zero(),
        terms.iter().map(|(c, vars)| {
            let mut m = vec![0u32; nvars];
            for (v, k) in vars.iter() {
                m[*v] += k;
            }
            (m, field.from_int(*c))
        }),
    )
}
