//! Embeddings `L → L'` into larger number fields, for computations whose
//! answers live in an extension of the input field.

use num_rational::BigRational;

use super::field::{BaseField, FieldElement};
use super::poly::Poly;
use super::roots::roots_in_field;
use crate::error::{Error, Result};

/// A field embedding, determined by the image of the generator.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: BaseField,
    target: BaseField,
    generator_image: Option<FieldElement>,
}

impl Embedding {
    pub fn identity(field: &BaseField) -> Self {
        Embedding { source: field.clone(), target: field.clone(), generator_image: field.generator() }
    }

    /// `L → Q[t]/(minpoly)`, sending the generator of `L` to the first root
    /// of its minimal polynomial in the new field.
    pub fn adjoin(source: &BaseField, minpoly: &Poly<BigRational>) -> Result<Self> {
        let target = BaseField::new(Some(minpoly.clone()))?;
        let Some(m) = source.minpoly() else {
            return Ok(Embedding { source: source.clone(), target, generator_image: None });
        };
        let lifted = m.map(target.zero(), |c| target.from_rational(c.clone()));
        let roots = roots_in_field(&lifted)?.roots;
        let Some((rho, _)) = roots.into_iter().next() else {
            return Err(Error::RequiresExtension { minpoly: source.describe() });
        };
        Ok(Embedding { source: source.clone(), target, generator_image: Some(rho) })
    }

    pub fn source(&self) -> &BaseField {
        &self.source
    }

    pub fn target(&self) -> &BaseField {
        &self.target
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
    }

    pub fn apply(&self, x: &FieldElement) -> FieldElement {
        match &self.generator_image {
            None => self.target.from_rational(x.coords()[0].clone()),
            Some(rho) => x.as_poly().eval_with(rho, |c| self.target.from_rational(c.clone())),
        }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Embedding) -> Embedding {
        assert!(self.target == *next.source(), "embeddings do not compose");
        Embedding {
            source: self.source.clone(),
            target: next.target.clone(),
            generator_image: self.generator_image.as_ref().map(|g| next.apply(g)),
        }
    }

    pub fn apply_poly(&self, p: &Poly<FieldElement>) -> Poly<FieldElement> {
        p.map(self.target.zero(), |c| self.apply(c))
    }

    pub fn apply_poly2(&self, p: &Poly<Poly<FieldElement>>) -> Poly<Poly<FieldElement>> {
        p.map(Poly::zero(self.target.zero()), |c| self.apply_poly(c))
    }
}
