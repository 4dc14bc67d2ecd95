//! The acceptance suite: one PASS/FAIL line per criterion, run in order on
//! one thread so the time limits measure the computation alone.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use infinitesimal::basefield::BaseField;
use infinitesimal::curves::{parse_curve, PlaneCurve};
use infinitesimal::duality::{
    add_graph, add_graph_witness, honest_oracle, in_maximal_ideal, in_valuation_ring, mul_graph, mul_graph_witness,
    roundtrip_check, sum, sum_witness,
};
use infinitesimal::multiplicity::{bezout_check, mult_report, BezoutReport, MultConfig};
use infinitesimal::newton_puiseux::{eval_at_series, puiseux_roots, BranchRequest};
use infinitesimal::parse::{parse_eps_poly, parse_field};
use infinitesimal::projective::{segre_k, segre_l, specialize, ProjPointL};
use infinitesimal::puiseux::{exponent, PuiseuxElement, ValuationValue};
use infinitesimal::sample;

type Outcome = Result<String, String>;

struct Criterion {
    number: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q() -> BaseField {
    BaseField::rationals()
}

fn field(text: Option<&str>) -> BaseField {
    parse_field(text).expect("valid field")
}

fn curve(text: &str, f: &BaseField) -> PlaneCurve {
    parse_curve(text, f).expect("valid curve")
}

fn roundtrips() -> Outcome {
    let f = q();
    let mut r = sample::rng(7);
    let ks: Vec<_> = (0..200).map(|_| sample::puiseux(&mut r, &f)).collect();
    roundtrip_check(&ks).map_err(|e| e.to_string())?;
    Ok("200 samples, seed 7".into())
}

fn valuation_axioms() -> Outcome {
    let f = q();
    let mut r = sample::rng(11);
    for i in 0..1000 {
        let x = sample::puiseux(&mut r, &f);
        let y = sample::puiseux(&mut r, &f);
        let (vx, vy) = (x.val().map_err(|e| e.to_string())?, y.val().map_err(|e| e.to_string())?);
        let vp = (&x * &y).val().map_err(|e| e.to_string())?;
        let vs = (&x + &y).val().map_err(|e| e.to_string())?;
        ensure(vp == vx + vy, || format!("pair {i}: v(xy) != v(x) + v(y) for {x}, {y}"))?;
        ensure(vs >= vx.min(vy), || format!("pair {i}: v(x+y) < min for {x}, {y}"))?;
        ensure(vx == vy || vs == vx.min(vy), || format!("pair {i}: v(x+y) != min for {x}, {y}"))?;
    }
    let fields = [q(), field(Some("t^2 + 1"))];
    for i in 0..1000 {
        let f = &fields[i % 2];
        let x = sample::integral_puiseux(&mut r, f);
        let y = sample::integral_puiseux(&mut r, f);
        let c = sample::field_element(&mut r, f);
        let res = |k: &PuiseuxElement| k.residue().map_err(|e| e.to_string());
        ensure(res(&(&x + &y))? == &res(&x)? + &res(&y)?, || format!("pair {i}: residue of a sum"))?;
        ensure(res(&(&x * &y))? == &res(&x)? * &res(&y)?, || format!("pair {i}: residue of a product"))?;
        ensure(res(&PuiseuxElement::constant(&c))? == c, || format!("pair {i}: residue moves {c}"))?;
    }
    Ok("1000 valuation pairs, 1000 residue pairs".into())
}

fn preservation() -> Outcome {
    let f = q();
    let mut r = sample::rng(3);
    for i in 0..200 {
        let m = 1 + i % 2;
        let n = 1 + (i / 2) % 3;
        let (v, pts) = sample::variety_through_point(&mut r, &f, m, n).map_err(|e| e.to_string())?;
        ensure(v.holds_k(&pts).map_err(|e| e.to_string())?, || format!("instance {i}: tuple not on V"))?;
        let sp = pts.iter().map(specialize).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
        ensure(v.holds_l(&sp).map_err(|e| e.to_string())?, || format!("instance {i}: not preserved"))?;
    }
    Ok("200 instances, m in {1, 2}".into())
}

fn segre() -> Outcome {
    let f = q();
    let mut r = sample::rng(5);
    for n in 1..=2 {
        for i in 0..100 {
            let p = sample::k_point(&mut r, &f, n);
            let s = sample::k_point(&mut r, &f, n);
            let top = specialize(&segre_k(&p, &s)).map_err(|e| e.to_string())?;
            let sp = specialize(&p).map_err(|e| e.to_string())?;
            let ss = specialize(&s).map_err(|e| e.to_string())?;
            ensure(top == segre_l(&sp, &ss), || format!("n = {n}, pair {i}: Segre square fails"))?;
            let emb = specialize(&p.embed()).map_err(|e| e.to_string())?;
            ensure(emb == sp.embed(), || format!("n = {n}, point {i}: embedding square fails"))?;
        }
    }
    Ok("100 points for each n in {1, 2}".into())
}

fn structure() -> Outcome {
    let f = q();
    let s = honest_oracle();
    let mut r = sample::rng(13);
    let eps = PuiseuxElement::eps(&f);
    for i in 0..500 {
        let a = sample::integral_puiseux(&mut r, &f);
        let b = sample::integral_puiseux(&mut r, &f);
        let o = |k: &PuiseuxElement| in_valuation_ring(&s, k).map_err(|e| e.to_string());
        let m = |k: &PuiseuxElement| in_maximal_ideal(&s, k).map_err(|e| e.to_string());
        ensure(o(&(&a + &b))? && o(&(&a * &b))? && o(&(-&a))?, || format!("instance {i}: O_K not a ring"))?;
        let (ma, mb) = (&a * &eps, &b * &eps);
        ensure(m(&(&ma + &mb))? && m(&(&ma * &b))?, || format!("instance {i}: M_K not an ideal"))?;
    }
    for i in 0..200 {
        let k = sample::nonzero_puiseux(&mut r, &f);
        let (num, den) = if in_valuation_ring(&s, &k).map_err(|e| e.to_string())? {
            (k.clone(), PuiseuxElement::one(&f))
        } else {
            (PuiseuxElement::one(&f), k.inv().map_err(|e| e.to_string())?)
        };
        let back = num.div(&den).map_err(|e| e.to_string())?;
        ensure(
            in_valuation_ring(&s, &num).map_err(|e| e.to_string())?
                && in_valuation_ring(&s, &den).map_err(|e| e.to_string())?
                && (&back - &k).terms().is_empty(),
            || format!("instance {i}: {k} is not a quotient of O_K elements"),
        )?;
    }
    // the witness tuples lie on their test varieties
    let x = sample::nonzero_puiseux(&mut r, &f);
    let y = sample::nonzero_puiseux(&mut r, &f);
    let holds = mul_graph(&f).holds_k(&mul_graph_witness(&x, &y)).map_err(|e| e.to_string())?
        && add_graph(&f).holds_k(&add_graph_witness(&x, &y)).map_err(|e| e.to_string())?
        && (1..=3).all(|n| sum(&f, n).holds_k(&sum_witness(&x, n)).unwrap_or(false));
    ensure(holds, || "a witness tuple misses its variety".into())?;
    Ok("500 closure and 200 fraction-field instances".into())
}

/// A multiplicity corpus entry: the point, or `None` for every common point,
/// and the expected multiplicities in canonical point order.
struct Entry {
    c1: &'static str,
    c2: &'static str,
    field: Option<&'static str>,
    point: Option<&'static str>,
    expected: &'static [usize],
}

const CORPUS: &[Entry] = &[
    Entry { c1: "x", c2: "y", field: None, point: Some("[0:0:1]"), expected: &[1] },
    Entry { c1: "y", c2: "y*z - x^2", field: None, point: Some("[0:0:1]"), expected: &[2] },
    Entry { c1: "y", c2: "y^2*z - x^3", field: None, point: Some("[0:0:1]"), expected: &[3] },
    Entry { c1: "x^2 + y^2 - 2*z^2", c2: "x^2 + 2*y^2 - 3*z^2", field: None, point: None, expected: &[1, 1, 1, 1] },
    Entry { c1: "x^2 + y^2 - z^2", c2: "x^2 + y^2 - 2*z^2", field: Some("t^2 + 1"), point: None, expected: &[2, 2] },
];

/// Further pairs for the Bezout check, up to degree (3, 3).
const BEZOUT_EXTRA: &[(&str, &str)] = &[
    ("y*z - x^2", "y*z - x^2 - y^2"),
    ("y*z - x^2", "y^2*z - x^3"),
    ("x*y*(x + y - z)", "(x - 2*z)*(y - 3*z)*(x - y + z)"),
    ("y^2*z - x^3", "y*(x - z)*(x - 4*z)"),
];

fn corpus_report(e: &Entry) -> Result<BezoutReport, String> {
    let f = field(e.field);
    let (c1, c2) = (curve(e.c1, &f), curve(e.c2, &f));
    let cfg = MultConfig::default();
    match e.point {
        Some(p) => {
            let l = ProjPointL::parse(p, &f).map_err(|e| e.to_string())?;
            mult_report(&c1, &c2, &l, &cfg)
        }
        None => bezout_check(&c1, &c2, &cfg),
    }
    .map_err(|err| format!("({}, {}): {err}", e.c1, e.c2))
}

fn corpus_reports() -> Result<Vec<(String, Duration)>, String> {
    let mut out = Vec::new();
    for e in CORPUS {
        let t = Instant::now();
        let r = corpus_report(e)?;
        out.push((r.to_json(), t.elapsed()));
    }
    Ok(out)
}

fn corpus() -> Outcome {
    let mut times = Vec::new();
    for e in CORPUS {
        let t = Instant::now();
        let r = corpus_report(e)?;
        let took = t.elapsed();
        let ns: Vec<usize> = r.points.iter().map(|p| p.mult_nonstandard).collect();
        let or: Vec<usize> = r.points.iter().map(|p| p.mult_oracle).collect();
        ensure(ns == e.expected && or == e.expected, || {
            format!("({}, {}): non-standard {ns:?}, oracle {or:?}, expected {:?}", e.c1, e.c2, e.expected)
        })?;
        ensure(took < Duration::from_secs(60), || format!("({}, {}) took {took:.1?}", e.c1, e.c2))?;
        times.push(format!("{:.1}s", took.as_secs_f64()));
    }
    Ok(format!("{} pairs agree; times {}", CORPUS.len(), times.join(", ")))
}

fn bezout() -> Outcome {
    let mut pairs: Vec<(&str, &str, Option<&str>)> = CORPUS.iter().map(|e| (e.c1, e.c2, e.field)).collect();
    pairs.extend(BEZOUT_EXTRA.iter().map(|(a, b)| (*a, *b, None)));
    for (a, b, fl) in &pairs {
        let f = field(*fl);
        let (c1, c2) = (curve(a, &f), curve(b, &f));
        let r = bezout_check(&c1, &c2, &MultConfig::default()).map_err(|e| format!("({a}, {b}): {e}"))?;
        let de = (c1.degree() * c2.degree()) as usize;
        ensure(r.sum == de && r.expected == de && r.verdict, || {
            format!("({a}, {b}): sum {} for d*e = {de}, verdict {}", r.sum, r.verdict)
        })?;
    }
    Ok(format!("{} pairs, degrees up to (3, 3)", pairs.len()))
}

/// `F(eps, x)` and the field it needs.
const NEWTON_SUITE: &[(&str, Option<&str>)] = &[
    ("x^2 - eps", None),
    ("x^2 + eps", Some("t^2 + 1")),
    ("(x - 1)*(x - eps)", None),
    ("x^3 - eps", Some("t^2 + t + 1")),
    ("x^2 - 2*eps", Some("t^2 - 2")),
    ("x^2 - eps^3", None),
    ("x^2 - x - eps", None),
    ("eps*x^2 - x + 1", None),
    ("x^4 - eps^2", Some("t^2 + 1")),
    ("(x + eps)^2 - eps^3", None),
];

fn newton_puiseux() -> Outcome {
    let target = exponent(8);
    for (text, fl) in NEWTON_SUITE {
        let f = field(*fl);
        let poly = parse_eps_poly(text, &f).map_err(|e| e.to_string())?;
        let deg = poly.degree().unwrap_or(0);
        let req = BranchRequest { f: poly.clone(), target_truncation: target, positive_valuation_only: false };
        let branches = puiseux_roots(&req).map_err(|e| format!("{text}: {e}"))?;
        ensure(branches.len() == deg, || format!("{text}: {} branches for degree {deg}", branches.len()))?;
        for b in &branches {
            let res = eval_at_series(&poly, &b.series);
            let ok = match res.val() {
                Ok(ValuationValue::Infinity) => true,
                Ok(ValuationValue::Finite(v)) => v >= target,
                Err(_) => res.terms().is_empty() && res.truncation().is_some_and(|t| t >= target),
            };
            ensure(ok, || format!("{text}: residual {res} at branch {}", b.series))?;
        }
    }
    Ok(format!("{} polynomials, residuals to eps^{target}", NEWTON_SUITE.len()))
}

fn determinism() -> Outcome {
    let first = corpus_reports()?;
    let second = corpus_reports()?;
    for (i, ((a, _), (b, _))) in first.iter().zip(&second).enumerate() {
        ensure(a == b, || format!("corpus entry {} differs between runs", i + 1))?;
    }
    Ok(format!("{} reports byte-identical", first.len()))
}

fn main() -> ExitCode {
    // cargo passes harness flags; a name filter selects criteria by number
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let criteria = [
        Criterion { number: 1, name: "duality round trips", limit: secs(5), run: roundtrips },
        Criterion { number: 2, name: "valuation axioms and residues", limit: secs(5), run: valuation_axioms },
        Criterion { number: 3, name: "specialisation preserves varieties", limit: secs(30), run: preservation },
        Criterion { number: 4, name: "Segre and embedding squares", limit: secs(10), run: segre },
        Criterion { number: 5, name: "valuation ring structure", limit: secs(10), run: structure },
        Criterion { number: 6, name: "multiplicity corpus", limit: None, run: corpus },
        Criterion { number: 7, name: "Bezout verdicts", limit: None, run: bezout },
        Criterion { number: 8, name: "Newton-Puiseux suite", limit: secs(10), run: newton_puiseux },
        Criterion { number: 9, name: "deterministic reports", limit: None, run: determinism },
    ];
    let mut failed = 0;
    for c in criteria.iter().filter(|c| filter.is_empty() || filter.contains(&c.number)) {
        let t = Instant::now();
        let outcome = (c.run)();
        let took = t.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if took >= limit => Err(format!("took {took:.2?}, limit {limit:?}")),
            (o, _) => o,
        };
        let limit = c.limit.map(|l| format!(" (limit {}s)", l.as_secs())).unwrap_or_default();
        match outcome {
            Ok(detail) => println!("PASS {} {}: {detail} in {:.2}s{limit}", c.number, c.name, took.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {}: {why} after {:.2}s{limit}", c.number, c.name, took.as_secs_f64());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
