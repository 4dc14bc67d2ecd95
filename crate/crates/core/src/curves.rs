//! Plane projective curves as parameter points, their perturbations, linear
//! coordinate changes, and the `L`-rational intersection points of a pair.

use std::fmt;

use num_rational::BigRational;
use rand::Rng;

use crate::basefield::resultant::resultant;
use crate::basefield::roots::{roots_in_field, suggest_field};
use crate::basefield::{BaseField, FieldElement, MPoly, Poly, Ring};
use crate::error::{Error, Result};
use crate::parse::parse_form;
use crate::projective::{ProjPointK, ProjPointL};
use crate::puiseux::{PuiseuxElement, ZeroStatus};
use crate::sample::{self, monomials};

/// Bound on the integer jitter of a perturbation.
pub const JITTER_BOUND: i64 = 100;

/// Coordinate changes tried by [`generic_frame`] after the identity.
pub const FRAME_ATTEMPTS: usize = 50;

const FRAME_SEED: u64 = 0x0c0f_fee5;

const NAMES: [&str; 3] = ["x", "y", "z"];

/// A curve `F = 0` in `P²`, with `F` scaled so that its first nonzero
/// coefficient (graded lex, `x > y > z`) is 1.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneCurve {
    degree: u32,
    form: MPoly<FieldElement>,
    params: Vec<FieldElement>,
}

impl PlaneCurve {
    pub fn new(form: MPoly<FieldElement>) -> Result<Self> {
        if form.nvars() != 3 {
            return Err(Error::Dimension(format!("a plane curve needs 3 variables, got {}", form.nvars())));
        }
        if form.is_zero() {
            return Err(Error::Parse("the zero form does not define a curve".into()));
        }
        let degree = form.homogeneous_degree_in(0..3).ok_or(Error::NotHomogeneous)?;
        if degree == 0 {
            return Err(Error::Parse("a curve needs positive degree".into()));
        }
        let raw: Vec<FieldElement> = monomials(3, degree).iter().map(|m| form.coeff(m)).collect();
        let lead = raw.iter().find(|c| !c.is_zero()).expect("nonzero form").inverse()?;
        let form = form.scale(&lead);
        let params = raw.iter().map(|c| c * &lead).collect();
        Ok(PlaneCurve { degree, form, params })
    }

    /// The curve with the given coefficients in parameter order.
    pub fn from_params(degree: u32, params: &[FieldElement]) -> Result<Self> {
        let mons = monomials(3, degree);
        if params.len() != mons.len() {
            return Err(Error::Dimension(format!("degree {degree} needs {} parameters", mons.len())));
        }
        let zero = params[0].field().zero();
        PlaneCurve::new(MPoly::from_terms(3, zero, mons.into_iter().zip(params.iter().cloned())))
    }

    pub fn field(&self) -> &BaseField {
        self.params[0].field()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn form(&self) -> &MPoly<FieldElement> {
        &self.form
    }

    pub fn params(&self) -> &[FieldElement] {
        &self.params
    }

    /// The point of `P^{d(d+3)/2}` this curve is.
    pub fn params_point(&self) -> ProjPointL {
        ProjPointL::new(self.params.clone()).expect("form is nonzero")
    }

    pub fn incidence(&self, p: &ProjPointL) -> Result<bool> {
        check_plane(p.dim())?;
        Ok(self.form.eval(p.coords(), self.field().zero(), Clone::clone).is_zero())
    }

    /// `F(p) = 0` for a point over `K`; `IndeterminateValuation` when the
    /// truncation cannot decide.
    pub fn incidence_k(&self, p: &ProjPointK) -> Result<bool> {
        check_plane(p.dim())?;
        let v = self.form.eval(p.coords(), PuiseuxElement::zero(self.field()), PuiseuxElement::constant);
        zero_test(&v)
    }

    /// `F ∘ g`, the curve whose points are `g⁻¹` of the points of this one.
    pub fn change(&self, g: &Matrix3) -> Result<PlaneCurve> {
        if g.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        PlaneCurve::new(compose_linear(&self.form, g, Clone::clone))
    }

    /// `F + ε J` with `J` drawn from nonzero integers in `[-100, 100]`.
    pub fn perturb(&self, seed: u64) -> PerturbedCurve {
        let mut rng = sample::rng(seed);
        let jitter: Vec<i64> = self
            .params
            .iter()
            .map(|_| loop {
                let r = rng.random_range(-JITTER_BOUND..=JITTER_BOUND);
                if r != 0 {
                    break r;
                }
            })
            .collect();
        let field = self.field();
        let terms = monomials(3, self.degree)
            .into_iter()
            .zip(self.params.iter().zip(&jitter))
            .map(|(m, (c, r))| (m, Poly::new(vec![c.clone(), field.from_int(*r)], field.zero())));
        let form_eps = MPoly::from_terms(3, Poly::zero(field.zero()), terms);
        PerturbedCurve { base: self.clone(), seed, jitter, form_eps }
    }
}

impl fmt::Display for PlaneCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.form.display_with(&NAMES))
    }
}

fn check_plane(dim: usize) -> Result<()> {
    if dim != 2 {
        return Err(Error::Dimension(format!("expected a point of P^2, got P^{dim}")));
    }
    Ok(())
}

fn zero_test(v: &PuiseuxElement) -> Result<bool> {
    match v.zero_status() {
        ZeroStatus::Zero => Ok(true),
        ZeroStatus::NonZero => Ok(false),
        ZeroStatus::Indeterminate => Err(Error::IndeterminateValuation),
    }
}

pub fn parse_curve(text: &str, field: &BaseField) -> Result<PlaneCurve> {
    PlaneCurve::new(parse_form(text, field)?)
}

/// A curve with coefficients `c_i + ε r_i`: a point of `P_d(K)` over the
/// base curve's parameter point.
#[derive(Clone, Debug)]
pub struct PerturbedCurve {
    base: PlaneCurve,
    seed: u64,
    jitter: Vec<i64>,
    form_eps: MPoly<Poly<FieldElement>>,
}

impl PerturbedCurve {
    pub fn base(&self) -> &PlaneCurve {
        &self.base
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn jitter(&self) -> &[i64] {
        &self.jitter
    }

    /// The form, with coefficients polynomials in `ε`.
    pub fn form_eps(&self) -> &MPoly<Poly<FieldElement>> {
        &self.form_eps
    }

    pub fn params_point(&self) -> ProjPointK {
        let coords = monomials(3, self.base.degree)
            .iter()
            .map(|m| PuiseuxElement::from_eps_poly(&self.form_eps.coeff(m)))
            .collect();
        ProjPointK::new(coords).expect("coefficients are nonzero")
    }

    pub fn incidence_k(&self, p: &ProjPointK) -> Result<bool> {
        check_plane(p.dim())?;
        let v = self.form_eps.eval(p.coords(), PuiseuxElement::zero(self.base.field()), PuiseuxElement::from_eps_poly);
        zero_test(&v)
    }

    /// `F_ε ∘ g`.
    pub fn change(&self, g: &Matrix3) -> MPoly<Poly<FieldElement>> {
        compose_linear(&self.form_eps, g, |c| Poly::constant(c.clone()))
    }
}

/// An invertible-or-not 3×3 matrix over the constant field.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix3 {
    rows: [[FieldElement; 3]; 3],
}

impl Matrix3 {
    pub fn new(rows: [[FieldElement; 3]; 3]) -> Self {
        Matrix3 { rows }
    }

    pub fn from_ints(field: &BaseField, m: &[[i64; 3]; 3]) -> Self {
        Matrix3 { rows: std::array::from_fn(|i| std::array::from_fn(|j| field.from_int(m[i][j]))) }
    }

    /// Nine integers, row-major.
    pub fn from_row_major(field: &BaseField, entries: &[i64]) -> Result<Self> {
        if entries.len() != 9 {
            return Err(Error::Parse(format!("a matrix needs 9 entries, got {}", entries.len())));
        }
        let m: [[i64; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| entries[3 * i + j]));
        Ok(Self::from_ints(field, &m))
    }

    pub fn identity(field: &BaseField) -> Self {
        Self::from_ints(field, &[[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    }

    pub fn entry(&self, i: usize, j: usize) -> &FieldElement {
        &self.rows[i][j]
    }

    fn minor(&self, i: usize, j: usize) -> FieldElement {
        let r: Vec<usize> = (0..3).filter(|k| *k != i).collect();
        let c: Vec<usize> = (0..3).filter(|k| *k != j).collect();
        let m = &self.rows;
        &(&m[r[0]][c[0]] * &m[r[1]][c[1]]) - &(&m[r[0]][c[1]] * &m[r[1]][c[0]])
    }

    pub fn det(&self) -> FieldElement {
        let m = &self.rows;
        let mut acc = &m[0][0] * &self.minor(0, 0);
        acc = &acc - &(&m[0][1] * &self.minor(0, 1));
        &acc + &(&m[0][2] * &self.minor(0, 2))
    }

    pub fn inverse(&self) -> Result<Matrix3> {
        let d = self.det();
        if d.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let inv_d = d.inverse()?;
        Ok(Matrix3 {
            rows: std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    let c = &self.minor(j, i) * &inv_d;
                    if (i + j) % 2 == 1 {
                        -c
                    } else {
                        c
                    }
                })
            }),
        })
    }

    pub fn mul(&self, other: &Matrix3) -> Matrix3 {
        Matrix3 {
            rows: std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    (0..3).fold(self.rows[0][0].field().zero(), |acc, k| &acc + &(&self.rows[i][k] * &other.rows[k][j]))
                })
            }),
        }
    }

    /// `g · p`.
    pub fn apply(&self, p: &ProjPointL) -> Result<ProjPointL> {
        check_plane(p.dim())?;
        let c = p.coords();
        let coords =
            (0..3).map(|i| (0..3).fold(c[0].field().zero(), |acc, j| &acc + &(&self.rows[i][j] * &c[j]))).collect();
        ProjPointL::new(coords)
    }

    pub fn apply_k(&self, p: &ProjPointK) -> Result<ProjPointK> {
        check_plane(p.dim())?;
        let c = p.coords();
        let coords = (0..3)
            .map(|i| (0..3).fold(PuiseuxElement::zero(p.field()), |acc, j| &acc + &c[j].scale(&self.rows[i][j])))
            .collect();
        ProjPointK::new(coords)
    }

    pub fn map(&self, f: impl Fn(&FieldElement) -> FieldElement) -> Matrix3 {
        Matrix3 { rows: std::array::from_fn(|i| std::array::from_fn(|j| f(&self.rows[i][j]))) }
    }
}

impl fmt::Display for Matrix3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.rows.iter().map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")).collect();
        write!(f, "[[{}]]", rows.join("], ["))
    }
}

/// `F(g·(x, y, z))` for a form over any coefficient ring containing `L`.
pub fn compose_linear<R: Ring>(form: &MPoly<R>, g: &Matrix3, embed: impl Fn(&FieldElement) -> R) -> MPoly<R> {
    let zero = form.coeff_zero().clone();
    let subs: Vec<MPoly<R>> = (0..3)
        .map(|i| {
            (0..3).fold(MPoly::zero(3, zero.clone()), |acc, j| {
                acc.add(&MPoly::var(3, j, zero.clone()).scale(&embed(g.entry(i, j))))
            })
        })
        .collect();
    form.compose(&subs)
}

/// `F(X + a, Y + b, 1)` with `Y` outer and `X` inner.
pub fn affine_chart<R: Ring>(form: &MPoly<R>, a: &R, b: &R) -> Poly<Poly<R>> {
    let zero = form.coeff_zero().clone();
    let one = zero.one_like();
    let pzero = Poly::zero(zero.clone());
    let x_shift = Poly::new(vec![a.clone(), one.clone()], zero.clone());
    let y_shift = Poly::new(vec![Poly::constant(b.clone()), Poly::constant(one)], pzero.clone());
    let mut out = Poly::zero(pzero);
    for (m, c) in form.terms() {
        let xpart = x_shift.pow(m[0]).scale(c);
        let term = y_shift.pow(m[1]).map(Poly::zero(zero.clone()), |q| q.mul_ref(&xpart));
        out = out.add_ref(&term);
    }
    out
}

/// A point found by [`generic_frame`]: `[x : y : 1]` in the new coordinates,
/// `point` in the original ones.
#[derive(Clone, Debug, PartialEq)]
pub struct FramePoint {
    pub x: FieldElement,
    pub y: FieldElement,
    pub order: usize,
    pub point: ProjPointL,
}

/// Coordinates `g` in which both curves have constant leading coefficient
/// in `y`, no common point lies on `z = 0`, and common points with an
/// `L`-rational `x` are alone on their vertical line.
#[derive(Clone, Debug)]
pub struct Frame {
    pub g: Matrix3,
    pub g_inv: Matrix3,
    pub forms: [MPoly<FieldElement>; 2],
    /// `Res_y(F∘g, G∘g)` at `z = 1`, of degree `d·e`.
    pub res: Poly<FieldElement>,
    pub points: Vec<FramePoint>,
    /// Irreducible factors of `res` with no root in `L`.
    pub unresolved: Vec<Poly<BigRational>>,
}

impl Frame {
    /// The frame point over `l`, if `l` is a common point with `L`-rational
    /// coordinates.
    pub fn locate(&self, l: &ProjPointL) -> Result<Option<&FramePoint>> {
        let local = self.g_inv.apply(l)?;
        let c = local.coords();
        if c[2].is_zero() {
            return Ok(None);
        }
        let x = c[0].div(&c[2])?;
        Ok(self.points.iter().find(|p| p.x == x))
    }
}

/// The first coordinate change, among the identity and a fixed sequence of
/// small unimodular matrices, meeting the conditions of [`Frame`].
pub fn generic_frame(c1: &PlaneCurve, c2: &PlaneCurve) -> Result<Frame> {
    let field = c1.field();
    if c2.field() != field {
        return Err(Error::Dimension("curves over different fields".into()));
    }
    let mut rng = sample::rng(FRAME_SEED);
    for attempt in 0..=FRAME_ATTEMPTS {
        let g = if attempt == 0 {
            Matrix3::identity(field)
        } else {
            Matrix3::from_ints(field, &sample::unimodular(&mut rng))
        };
        if let Some(frame) = try_frame(c1, c2, g)? {
            return Ok(frame);
        }
    }
    Err(Error::DegenerateCoordinates)
}

fn try_frame(c1: &PlaneCurve, c2: &PlaneCurve, g: Matrix3) -> Result<Option<Frame>> {
    let field = c1.field();
    let f1 = compose_linear(c1.form(), &g, Clone::clone);
    let f2 = compose_linear(c2.form(), &g, Clone::clone);
    let (d, e) = (c1.degree(), c2.degree());
    if f1.coeff(&[0, d, 0]).is_zero() || f2.coeff(&[0, e, 0]).is_zero() {
        return Ok(None);
    }
    let zero = field.zero();
    let a1 = affine_chart(&f1, &zero, &zero);
    let a2 = affine_chart(&f2, &zero, &zero);
    let res = resultant(&a1, &a2)?;
    if res.is_zero() {
        return Err(Error::CommonComponent);
    }
    if res.degree() != Some((d * e) as usize) {
        return Ok(None);
    }
    let search = roots_in_field(&res)?;
    let mut points = Vec::new();
    for (x, order) in search.roots {
        let p1 = a1.map(zero.clone(), |c| c.eval(&x));
        let p2 = a2.map(zero.clone(), |c| c.eval(&x));
        let common = p1.gcd(&p2)?;
        if common.degree() != Some(1) {
            return Ok(None);
        }
        let y = -common.coeff(0).div(common.lc())?;
        let point = g.apply(&ProjPointL::new(vec![x.clone(), y.clone(), field.one()])?)?;
        points.push(FramePoint { x, y, order, point });
    }
    let g_inv = g.inverse()?;
    Ok(Some(Frame { g, g_inv, forms: [f1, f2], res, points, unresolved: search.unresolved }))
}

/// Every common point, canonical and sorted; `UnrepresentablePoint` names
/// a field that would contain the missing ones.
pub fn common_points(c1: &PlaneCurve, c2: &PlaneCurve) -> Result<Vec<ProjPointL>> {
    let frame = generic_frame(c1, c2)?;
    if let Some(f) = frame.unresolved.first() {
        return Err(Error::UnrepresentablePoint { factor: suggest_field(f) });
    }
    let mut pts: Vec<ProjPointL> = frame.points.into_iter().map(|p| p.point).collect();
    pts.sort();
    Ok(pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_field;
    use crate::projective::specialize;

    fn q() -> BaseField {
        BaseField::rationals()
    }

    fn curve(text: &str) -> PlaneCurve {
        parse_curve(text, &q()).unwrap()
    }

    fn pt(text: &str, field: &BaseField) -> ProjPointL {
        ProjPointL::parse(text, field).unwrap()
    }

    #[test]
    fn parsing() {
        let c = curve("y");
        assert_eq!(c.degree(), 1);
        assert_eq!(c.params().len(), 3);
        let c = curve("y*z - x^2");
        assert_eq!(c.degree(), 2);
        assert_eq!(c.params().len(), 6);
        assert_eq!(c.params_point().dim(), 5);
        assert_eq!(c.to_string(), "x^2 - y*z");
        assert_eq!(parse_curve("x + y^2", &q()).unwrap_err(), Error::NotHomogeneous);
        assert!(matches!(parse_curve("0", &q()), Err(Error::Parse(_))));
        assert_eq!(curve("2*x - 4*y"), curve("-x + 2*y"));
    }

    #[test]
    fn incidence_examples() {
        let c = curve("y*z - x^2");
        assert!(c.incidence(&pt("[0:0:1]", &q())).unwrap());
        assert!(c.incidence(&pt("[1:1:1]", &q())).unwrap());
        assert!(!curve("y").incidence(&pt("[1:1:1]", &q())).unwrap());
        let k = ProjPointK::parse("[eps : eps^2 : 1]", &q()).unwrap();
        assert!(c.incidence_k(&k).unwrap());
        let fuzzy = ProjPointK::parse("[O(eps) : O(eps) : 1]", &q()).unwrap();
        assert_eq!(c.incidence_k(&fuzzy).unwrap_err(), Error::IndeterminateValuation);
    }

    #[test]
    fn perturbation_specializes_back() {
        for text in ["y", "y*z - x^2", "y^2*z - x^3", "x^2 + y^2 - z^2"] {
            let c = curve(text);
            for seed in 1..=5 {
                let p = c.perturb(seed);
                assert_eq!(specialize(&p.params_point()).unwrap(), c.params_point());
            }
        }
        let y = curve("y");
        assert_ne!(y.perturb(1).jitter(), y.perturb(2).jitter());
        assert_eq!(y.perturb(1).jitter(), y.perturb(1).jitter());
        let p = curve("y*z - x^2").perturb(7);
        assert_eq!(p.jitter().len(), 6);
        assert!(p.jitter().iter().all(|r| *r != 0 && r.abs() <= JITTER_BOUND));
        assert_eq!(p.form_eps().terms().filter(|(_, c)| c.degree() == Some(1)).count(), 6);
    }

    #[test]
    fn coordinate_changes() {
        let f = q();
        let c = curve("y*z - x^2");
        assert_eq!(c.change(&Matrix3::identity(&f)).unwrap(), c);
        let swap = Matrix3::from_ints(&f, &[[0, 1, 0], [1, 0, 0], [0, 0, 1]]);
        assert_eq!(curve("y").change(&swap).unwrap(), curve("x"));
        let g = Matrix3::from_ints(&f, &[[1, 2, 0], [0, 1, -1], [3, 0, 1]]);
        let back = c.change(&g).unwrap().change(&g.inverse().unwrap()).unwrap();
        assert_eq!(back, c);
        let singular = Matrix3::from_ints(&f, &[[1, 2, 3], [2, 4, 6], [0, 0, 1]]);
        assert_eq!(c.change(&singular).unwrap_err(), Error::SingularMatrix);
        // points move by g^{-1}
        let p = pt("[1:1:1]", &f);
        assert!(c.change(&g).unwrap().incidence(&g.inverse().unwrap().apply(&p).unwrap()).unwrap());
    }

    #[test]
    fn intersection_points() {
        let f = q();
        assert_eq!(common_points(&curve("x"), &curve("y")).unwrap(), vec![pt("[0:0:1]", &f)]);
        assert_eq!(common_points(&curve("y"), &curve("y*z - x^2")).unwrap(), vec![pt("[0:0:1]", &f)]);
        let c1 = curve("x^2 + y^2 - z^2");
        let c2 = curve("x^2 + y^2 - 2*z^2");
        assert_eq!(common_points(&c1, &c2).unwrap_err(), Error::UnrepresentablePoint { factor: "t^2 + 1".into() });
        let gi = parse_field(Some("t^2 + 1")).unwrap();
        let c1 = parse_curve("x^2 + y^2 - z^2", &gi).unwrap();
        let c2 = parse_curve("x^2 + y^2 - 2*z^2", &gi).unwrap();
        let pts = common_points(&c1, &c2).unwrap();
        let mut want = vec![pt("[1:t:0]", &gi), pt("[1:-t:0]", &gi)];
        want.sort();
        assert_eq!(pts, want);
        for p in &pts {
            assert!(c1.incidence(p).unwrap() && c2.incidence(p).unwrap());
        }
        assert_eq!(common_points(&curve("x*y"), &curve("x*z")).unwrap_err(), Error::CommonComponent);
    }

    #[test]
    fn chart_translates() {
        // x^2 - y z at (X + 1, Y + 1, 1) is X^2 + 2X - Y
        let c = curve("y*z - x^2");
        let one = q().one();
        let ch = affine_chart(c.form(), &one, &one);
        assert_eq!(ch.degree(), Some(1));
        assert_eq!(ch.coeff(1).coeff(0).to_string(), "-1");
        assert_eq!(ch.coeff(0).coeff(2).to_string(), "1");
        assert_eq!(ch.coeff(0).coeff(1).to_string(), "2");
        assert!(ch.coeff(0).coeff(0).is_zero());
    }
}
