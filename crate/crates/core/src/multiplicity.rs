//! Intersection multiplicity of plane curves, counted two ways: the number
//! of distinct intersection points of generic infinitesimal perturbations
//! that specialise to `l`, and the order of the resultant at `l` in
//! generic coordinates. The Bezout check compares both with `d·e`.

use rayon::prelude::*;
use serde::Serialize;

use crate::basefield::extension::Embedding;
use crate::basefield::resultant::{first_subresultant, resultant};
use crate::basefield::{BaseField, FieldElement, Poly, Ring};
use crate::curves::{affine_chart, common_points, generic_frame, Frame, FramePoint, PlaneCurve};
use crate::error::{Error, Result};
use crate::newton_puiseux::{
    eval_at_series, is_squarefree_in_x, puiseux_roots, rescale_eps, unit_scale, BranchRequest,
};
use crate::parse::parse_minpoly;
use crate::projective::{specialize, ProjPointK, ProjPointL};
use crate::puiseux::{exponent, Exponent, PuiseuxElement};

/// Largest degree over `Q` of a field adjoined for the branches.
pub const MAX_EXTENSION_DEGREE: usize = 12;

const RESEED_STRIDE: u64 = 1_000_003;
const SECOND_CURVE_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Clone, Debug, PartialEq)]
pub struct MultConfig {
    pub truncation_start: Exponent,
    pub truncation_cap: Exponent,
    pub seeds: Vec<u64>,
    pub retry_limit: usize,
}

impl Default for MultConfig {
    fn default() -> Self {
        MultConfig { truncation_start: exponent(16), truncation_cap: exponent(1024), seeds: vec![1, 2], retry_limit: 5 }
    }
}

impl MultConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.truncation_start > exponent(0) && self.truncation_start <= self.truncation_cap) {
            return Err(Error::Parse("need 0 < truncation <= cap".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Parse("at least one seed is needed".into()));
        }
        Ok(())
    }
}

/// The non-standard count at one point, with the deformed intersection
/// points that realise it.
#[derive(Clone, Debug)]
pub struct NonstandardCount {
    pub count: usize,
    /// In the original coordinates, over `witness_field`.
    pub witnesses: Vec<ProjPointK>,
    /// The input field, or the extension of it the witnesses need.
    pub witness_field: BaseField,
    pub truncation_used: Exponent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultReport {
    pub l: String,
    pub mult_nonstandard: usize,
    pub mult_oracle: usize,
    pub agree: bool,
    pub witness_field: String,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BezoutReport {
    pub curve1: String,
    pub curve2: String,
    pub field: String,
    pub points: Vec<MultReport>,
    pub sum: usize,
    pub expected: usize,
    pub verdict: bool,
    pub seeds: Vec<u64>,
    pub truncation_used: String,
}

impl BezoutReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }
}

/// `[a:b:c]` without spaces.
pub fn compact_point(p: &ProjPointL) -> String {
    let parts: Vec<String> = p.coords().iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(":"))
}

fn on_both(c1: &PlaneCurve, c2: &PlaneCurve, l: &ProjPointL) -> Result<bool> {
    Ok(c1.incidence(l)? && c2.incidence(l)?)
}

/// The order of `Res_y` at `l` in generic coordinates; 0 off the curves.
pub fn mult_oracle(c1: &PlaneCurve, c2: &PlaneCurve, l: &ProjPointL) -> Result<usize> {
    let frame = generic_frame(c1, c2)?;
    oracle_in(&frame, c1, c2, l)
}

fn oracle_in(frame: &Frame, c1: &PlaneCurve, c2: &PlaneCurve, l: &ProjPointL) -> Result<usize> {
    if !on_both(c1, c2, l)? {
        return Ok(0);
    }
    Ok(frame.locate(l)?.map_or(0, |p| p.order))
}

pub fn mult_nonstandard(
    c1: &PlaneCurve,
    c2: &PlaneCurve,
    l: &ProjPointL,
    cfg: &MultConfig,
) -> Result<NonstandardCount> {
    cfg.validate()?;
    let frame = generic_frame(c1, c2)?;
    nonstandard_in(&frame, c1, c2, l, cfg)
}

/// `Mult(C₁, C₂, l) ≥ n`.
pub fn mult_geq(c1: &PlaneCurve, c2: &PlaneCurve, l: &ProjPointL, n: usize, cfg: &MultConfig) -> Result<bool> {
    if n == 0 {
        return Ok(true);
    }
    Ok(mult_nonstandard(c1, c2, l, cfg)?.count >= n)
}

fn nonstandard_in(
    frame: &Frame,
    c1: &PlaneCurve,
    c2: &PlaneCurve,
    l: &ProjPointL,
    cfg: &MultConfig,
) -> Result<NonstandardCount> {
    let located = if on_both(c1, c2, l)? { frame.locate(l)? } else { None };
    let Some(fp) = located else {
        return Ok(NonstandardCount {
            count: 0,
            witnesses: Vec::new(),
            witness_field: c1.field().clone(),
            truncation_used: cfg.truncation_start,
        });
    };
    let mut results: Vec<NonstandardCount> = Vec::new();
    for &seed in &cfg.seeds {
        let mut attempt = 0u64;
        loop {
            let s = seed.wrapping_add(attempt * RESEED_STRIDE);
            match count_at_seed(frame, c1, c2, fp, l, s, cfg) {
                Ok(r) => {
                    results.push(r);
                    break;
                }
                Err(Error::NotSquareFree) if (attempt as usize) < cfg.retry_limit => attempt += 1,
                Err(e) => return Err(e),
            }
        }
    }
    let counts: Vec<usize> = results.iter().map(|r| r.count).collect();
    if counts.iter().any(|c| *c != counts[0]) {
        return Err(Error::NondeterministicCount { counts });
    }
    let used = results.iter().map(|r| r.truncation_used).max().expect("a seed");
    let mut first = results.swap_remove(0);
    first.truncation_used = used;
    Ok(first)
}

type Bi = Poly<Poly<FieldElement>>;
type Tri = Poly<Bi>;

/// `F(X, Y)` for `F` with `Y` outer, `X` middle, `ε` inner.
fn eval_tri(f: &Tri, x: &PuiseuxElement, y: &PuiseuxElement) -> PuiseuxElement {
    let mut acc = PuiseuxElement::zero(x.field());
    for c in f.coeffs().iter().rev() {
        acc = &(&acc * y) + &eval_at_series(c, x);
    }
    acc
}

fn map_tri(e: &Embedding, f: &Tri) -> Tri {
    f.map(Poly::zero(Poly::zero(e.target().zero())), |c| e.apply_poly2(c))
}

/// `Y = -num(X) / den(X)` on the common roots.
fn back_substitution(t1: &Tri, t2: &Tri) -> Result<(Bi, Bi)> {
    for t in [t1, t2] {
        if t.degree() == Some(1) {
            return Ok((t.coeff(0).clone(), t.coeff(1).clone()));
        }
    }
    let (s1, s0) = first_subresultant(t1, t2)?;
    Ok((s0, s1))
}

fn count_at_seed(
    frame: &Frame,
    c1: &PlaneCurve,
    c2: &PlaneCurve,
    fp: &FramePoint,
    l: &ProjPointL,
    seed: u64,
    cfg: &MultConfig,
) -> Result<NonstandardCount> {
    let field = c1.field();
    let f_eps = c1.perturb(seed).change(&frame.g);
    let g_eps = c2.perturb(seed ^ SECOND_CURVE_SALT).change(&frame.g);
    let (a, b) = (Poly::constant(fp.x.clone()), Poly::constant(fp.y.clone()));
    let t1 = affine_chart(&f_eps, &a, &b);
    let t2 = affine_chart(&g_eps, &a, &b);
    let r = resultant(&t1, &t2)?;
    if r.is_zero() || !is_squarefree_in_x(&r)? {
        return Err(Error::NotSquareFree);
    }
    let (num, den) = back_substitution(&t1, &t2)?;
    // ε ↦ κε is another first-order perturbation; it keeps the branch
    // constants in a small cyclotomic extension
    let (r, t1, t2, num, den) = match unit_scale(&r) {
        None => (r, t1, t2, num, den),
        Some(k) => {
            let tri = |t: &Tri| t.map(t.coeff_zero().clone(), |c| rescale_eps(c, &k));
            (rescale_eps(&r, &k), tri(&t1), tri(&t2), rescale_eps(&num, &k), rescale_eps(&den, &k))
        }
    };
    let mut emb = Embedding::identity(field);
    let mut w = cfg.truncation_start;
    loop {
        match attempt(frame, fp, l, &r, &t1, &t2, (&num, &den), &emb, w, cfg) {
            Ok(out) => return Ok(out),
            Err(Error::RequiresExtension { minpoly }) => {
                let p = parse_minpoly(&minpoly)?;
                if p.degree().unwrap_or(0) > MAX_EXTENSION_DEGREE {
                    return Err(Error::RequiresExtension { minpoly });
                }
                emb = emb.then(&Embedding::adjoin(emb.target(), &p)?);
            }
            Err(Error::TruncationInsufficient | Error::IndeterminateValuation) => {
                w *= 2;
                if w > cfg.truncation_cap {
                    return Err(Error::TruncationInsufficient);
                }
            }
            Err(e) => return Err(e),
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn attempt(
    frame: &Frame,
    fp: &FramePoint,
    l: &ProjPointL,
    r: &Bi,
    t1: &Tri,
    t2: &Tri,
    (num, den): (&Bi, &Bi),
    emb: &Embedding,
    w: Exponent,
    cfg: &MultConfig,
) -> Result<NonstandardCount> {
    let target = emb.target();
    let req = BranchRequest { f: emb.apply_poly2(r), target_truncation: w, positive_valuation_only: true };
    let branches = puiseux_roots(&req)?;
    let (t1, t2) = (map_tri(emb, t1), map_tri(emb, t2));
    let (num, den) = (emb.apply_poly2(num), emb.apply_poly2(den));
    let g = frame.g.map(|c| emb.apply(c));
    let l_img = ProjPointL::new(l.coords().iter().map(|c| emb.apply(c)).collect())?;
    let x0 = PuiseuxElement::constant(&emb.apply(&fp.x));
    let y0 = PuiseuxElement::constant(&emb.apply(&fp.y));
    let mut witnesses = Vec::new();
    for br in branches {
        let x = br.series;
        let y = -&eval_at_series(&num, &x).div_to(&eval_at_series(&den, &x), w)?;
        for t in [&t1, &t2] {
            let res = eval_tri(t, &x, &y);
            let certified = res.terms().is_empty() && res.truncation().is_some_and(|tr| tr >= cfg.truncation_start);
            if !certified {
                return Err(Error::TruncationInsufficient);
            }
        }
        let local = ProjPointK::new(vec![&x + &x0, &y + &y0, PuiseuxElement::one(target)])?;
        let point = g.apply_k(&local)?;
        if specialize(&point)? == l_img {
            witnesses.push(point);
        }
    }
    Ok(NonstandardCount { count: witnesses.len(), witnesses, witness_field: target.clone(), truncation_used: w })
}

/// Witnesses are checked at the working truncation but shown only up to
/// this order.
pub const WITNESS_DISPLAY_ORDER: i64 = 3;

fn display_witness(p: &ProjPointK) -> String {
    let t = exponent(WITNESS_DISPLAY_ORDER);
    let parts: Vec<String> = p.coords().iter().map(|c| c.truncate(t).to_string()).collect();
    format!("[{}]", parts.join(" : "))
}

fn point_report(
    frame: &Frame,
    c1: &PlaneCurve,
    c2: &PlaneCurve,
    l: &ProjPointL,
    cfg: &MultConfig,
) -> Result<(MultReport, Exponent)> {
    let ns = nonstandard_in(frame, c1, c2, l, cfg)?;
    let oracle = oracle_in(frame, c1, c2, l)?;
    let report = MultReport {
        l: compact_point(l),
        mult_nonstandard: ns.count,
        mult_oracle: oracle,
        agree: ns.count == oracle,
        witness_field: ns.witness_field.describe(),
        witnesses: ns.witnesses.iter().map(display_witness).collect(),
    };
    Ok((report, ns.truncation_used))
}

#[allow(clippy::too_many_arguments)]
fn header(
    c1: &PlaneCurve,
    c2: &PlaneCurve,
    cfg: &MultConfig,
    points: Vec<MultReport>,
    sum: usize,
    expected: usize,
    verdict: bool,
    used: Exponent,
) -> BezoutReport {
    BezoutReport {
        curve1: c1.to_string(),
        curve2: c2.to_string(),
        field: c1.field().describe(),
        points,
        sum,
        expected,
        verdict,
        seeds: cfg.seeds.clone(),
        truncation_used: used.to_string(),
    }
}

/// Both counts at one point, in the report format: `sum` is the
/// non-standard count, `expected` the oracle's, `verdict` their agreement.
pub fn mult_report(c1: &PlaneCurve, c2: &PlaneCurve, l: &ProjPointL, cfg: &MultConfig) -> Result<BezoutReport> {
    cfg.validate()?;
    let frame = generic_frame(c1, c2)?;
    let (p, used) = point_report(&frame, c1, c2, l, cfg)?;
    let (sum, expected, verdict) = (p.mult_nonstandard, p.mult_oracle, p.agree);
    Ok(header(c1, c2, cfg, vec![p], sum, expected, verdict, used))
}

/// Both counts at every common point; the verdict holds when the
/// non-standard counts sum to `d·e` and agree with the oracle pointwise.
pub fn bezout_check(c1: &PlaneCurve, c2: &PlaneCurve, cfg: &MultConfig) -> Result<BezoutReport> {
    cfg.validate()?;
    let pts = common_points(c1, c2)?;
    let frame = generic_frame(c1, c2)?;
    let done: Vec<(MultReport, Exponent)> =
        pts.par_iter().map(|l| point_report(&frame, c1, c2, l, cfg)).collect::<Result<_>>()?;
    let used = done.iter().map(|d| d.1).max().unwrap_or(cfg.truncation_start);
    let points: Vec<MultReport> = done.into_iter().map(|d| d.0).collect();
    let sum: usize = points.iter().map(|p| p.mult_nonstandard).sum();
    let expected = (c1.degree() * c2.degree()) as usize;
    let verdict = sum == expected && points.iter().all(|p| p.agree);
    Ok(header(c1, c2, cfg, points, sum, expected, verdict, used))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::parse_curve;
    use crate::parse::parse_field;

    fn q() -> BaseField {
        BaseField::rationals()
    }

    fn curve(text: &str) -> PlaneCurve {
        parse_curve(text, &q()).unwrap()
    }

    fn origin() -> ProjPointL {
        ProjPointL::parse("[0:0:1]", &q()).unwrap()
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(mult_oracle(&curve("x"), &curve("y"), &origin()).unwrap(), 1);
        assert_eq!(mult_oracle(&curve("y"), &curve("y*z - x^2"), &origin()).unwrap(), 2);
        assert_eq!(mult_oracle(&curve("y"), &curve("y^2*z - x^3"), &origin()).unwrap(), 3);
        let off = ProjPointL::parse("[1:0:1]", &q()).unwrap();
        assert_eq!(mult_oracle(&curve("x"), &curve("y"), &off).unwrap(), 0);
    }

    #[test]
    fn transversal_lines() {
        let cfg = MultConfig::default();
        let r = mult_nonstandard(&curve("x"), &curve("y"), &origin(), &cfg).unwrap();
        assert_eq!(r.count, 1);
        assert!(!mult_geq(&curve("x"), &curve("y"), &origin(), 2, &cfg).unwrap());
        assert!(mult_geq(&curve("x"), &curve("y"), &origin(), 0, &cfg).unwrap());
    }

    #[test]
    fn tangent_line_to_conic() {
        let cfg = MultConfig::default();
        let (c1, c2) = (curve("y"), curve("y*z - x^2"));
        let r = mult_nonstandard(&c1, &c2, &origin(), &cfg).unwrap();
        assert_eq!(r.count, 2);
        for w in &r.witnesses {
            assert_eq!(specialize(w).unwrap().coords().len(), 3);
        }
        assert!(mult_geq(&c1, &c2, &origin(), 2, &cfg).unwrap());
        assert!(!mult_geq(&c1, &c2, &origin(), 3, &cfg).unwrap());
    }

    #[test]
    fn line_through_cusp() {
        let cfg = MultConfig::default();
        let r = mult_nonstandard(&curve("y"), &curve("y^2*z - x^3"), &origin(), &cfg).unwrap();
        assert_eq!(r.count, 3);
    }

    #[test]
    fn bezout_gaussian_conics() {
        let gi = parse_field(Some("t^2 + 1")).unwrap();
        let c1 = parse_curve("x^2 + y^2 - z^2", &gi).unwrap();
        let c2 = parse_curve("x^2 + y^2 - 2*z^2", &gi).unwrap();
        let rep = bezout_check(&c1, &c2, &MultConfig::default()).unwrap();
        assert!(rep.verdict, "{}", rep.to_json());
        assert_eq!(rep.sum, 4);
        assert!(rep.points.iter().all(|p| p.mult_nonstandard == 2));
    }

    #[test]
    fn config_validation() {
        let mut cfg = MultConfig::default();
        cfg.seeds.clear();
        assert!(cfg.validate().is_err());
        let cfg = MultConfig { truncation_start: exponent(8), truncation_cap: exponent(4), ..MultConfig::default() };
        assert!(cfg.validate().is_err());
    }
}
