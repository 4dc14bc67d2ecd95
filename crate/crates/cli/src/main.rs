//! `infmult`: intersection multiplicities, Bezout checks, branch expansion
//! and duality self-tests from the command line.

use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_rational::Ratio;
use serde_json::{json, Value};

use infinitesimal::curves::{parse_curve, Matrix3, PlaneCurve};
use infinitesimal::duality::roundtrip_check;
use infinitesimal::multiplicity::{bezout_check, mult_report, BezoutReport, MultConfig};
use infinitesimal::newton_puiseux::{puiseux_roots, BranchRequest};
use infinitesimal::parse::{parse_eps_poly, parse_field};
use infinitesimal::projective::{specialize, ProjPointK, ProjPointL};
use infinitesimal::puiseux::Exponent;
use infinitesimal::{sample, BaseField, Error};

const EXIT_VERIFICATION: u8 = 1;
const EXIT_COMMON_COMPONENT: u8 = 2;
const EXIT_EXTENSION: u8 = 3;
const EXIT_TRUNCATION: u8 = 4;
const EXIT_NONDETERMINISTIC: u8 = 5;
const EXIT_USAGE: u8 = 6;
const EXIT_OTHER: u8 = 7;

#[derive(Parser, Debug)]
#[command(name = "infmult", version, about = "Non-standard intersection multiplicity of plane curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Multiplicity of two curves at one point.
    Mult {
        #[command(flatten)]
        curves: CurveArgs,
        /// Point of P^2, e.g. "[0:0:1]", in the coordinates before any --matrix.
        #[arg(long)]
        point: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// All intersection points and the Bezout sum.
    Bezout {
        #[command(flatten)]
        curves: CurveArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Puiseux branches of F(eps, x) = 0, written with x and eps.
    Expand {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        field: Option<String>,
        #[arg(long, default_value = "16")]
        truncation: String,
        /// Keep only branches of positive valuation.
        #[arg(long)]
        positive: bool,
        #[arg(long)]
        json: bool,
    },
    /// Round trips between the order valuation and its specialisation.
    DualitySelftest {
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Specialisation of a point with Puiseux coordinates.
    Specialize {
        /// e.g. "[eps : 1 + eps : 2]".
        #[arg(long)]
        point: String,
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct CurveArgs {
    #[arg(long)]
    c1: String,
    #[arg(long)]
    c2: String,
    /// Minimal polynomial in t of the constant field; Q when absent.
    #[arg(long)]
    field: Option<String>,
    /// Replace each curve F by F∘g for the matrix g given by 9 integers,
    /// row-major.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    matrix: Option<Vec<i64>>,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, default_value = "16")]
    truncation: String,
    #[arg(long, default_value = "1024")]
    cap: String,
    #[arg(long, value_delimiter = ',', default_values_t = [1u64, 2])]
    seeds: Vec<u64>,
    #[arg(long, default_value_t = 5)]
    retries: usize,
    #[arg(long)]
    json: bool,
}

enum Failure {
    Lib(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CommonComponent => EXIT_COMMON_COMPONENT,
        Error::RequiresExtension { .. } | Error::UnrepresentablePoint { .. } => EXIT_EXTENSION,
        Error::TruncationInsufficient | Error::IndeterminateValuation => EXIT_TRUNCATION,
        Error::NondeterministicCount { .. } => EXIT_NONDETERMINISTIC,
        Error::Parse(_)
        | Error::NotHomogeneous
        | Error::Dimension(_)
        | Error::RedundantExtension { .. }
        | Error::SingularMatrix => EXIT_USAGE,
        Error::CounterexampleFound { .. } => EXIT_VERIFICATION,
        _ => EXIT_OTHER,
    }
}

fn exponent(text: &str, flag: &str) -> Result<Exponent, Failure> {
    Ratio::<i64>::from_str(text.trim()).map_err(|_| Failure::Usage(format!("--{flag}: not a rational number: {text}")))
}

fn field(text: &Option<String>) -> Result<BaseField, Failure> {
    Ok(parse_field(text.as_deref())?)
}

fn config(run: &RunArgs) -> Result<MultConfig, Failure> {
    let cfg = MultConfig {
        truncation_start: exponent(&run.truncation, "truncation")?,
        truncation_cap: exponent(&run.cap, "cap")?,
        seeds: run.seeds.clone(),
        retry_limit: run.retries,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn curves(args: &CurveArgs) -> Result<(PlaneCurve, PlaneCurve, Option<Matrix3>), Failure> {
    let f = field(&args.field)?;
    let mut c1 = parse_curve(&args.c1, &f)?;
    let mut c2 = parse_curve(&args.c2, &f)?;
    let g = match &args.matrix {
        None => None,
        Some(m) => {
            let g = Matrix3::from_row_major(&f, m)?;
            c1 = c1.change(&g)?;
            c2 = c2.change(&g)?;
            Some(g)
        }
    };
    Ok((c1, c2, g))
}

fn report_text(r: &BezoutReport) -> String {
    let mut out = format!("{}  and  {}  over {}\n", r.curve1, r.curve2, r.field);
    for p in &r.points {
        out.push_str(&format!(
            "  {}  non-standard {}  oracle {}  {}  witnesses over {}\n",
            p.l,
            p.mult_nonstandard,
            p.mult_oracle,
            if p.agree { "agree" } else { "DISAGREE" },
            p.witness_field
        ));
        for w in &p.witnesses {
            out.push_str(&format!("      {w}\n"));
        }
    }
    out.push_str(&format!(
        "sum {}  expected {}  verdict {}  seeds {:?}  truncation {}",
        r.sum, r.expected, r.verdict, r.seeds, r.truncation_used
    ));
    out
}

fn emit_report(r: &BezoutReport, json: bool) -> u8 {
    if json {
        println!("{}", r.to_json());
    } else {
        println!("{}", report_text(r));
    }
    if r.verdict {
        0
    } else {
        EXIT_VERIFICATION
    }
}

fn emit_value(v: &Value, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(v).expect("plain data"));
    } else if let Value::Object(map) = v {
        for (k, x) in map {
            match x {
                Value::String(s) => println!("{k}: {s}"),
                Value::Array(items) => {
                    println!("{k}:");
                    for i in items {
                        println!("  {}", i.as_str().map(str::to_string).unwrap_or_else(|| i.to_string()));
                    }
                }
                other => println!("{k}: {other}"),
            }
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Mult { curves: c, point, run } => {
            let cfg = config(&run)?;
            let (c1, c2, g) = curves(&c)?;
            let mut l = ProjPointL::parse(&point, c1.field())?;
            if let Some(g) = g {
                l = g.inverse()?.apply(&l)?;
            }
            Ok(emit_report(&mult_report(&c1, &c2, &l, &cfg)?, run.json))
        }
        Command::Bezout { curves: c, run } => {
            let cfg = config(&run)?;
            let (c1, c2, _) = curves(&c)?;
            Ok(emit_report(&bezout_check(&c1, &c2, &cfg)?, run.json))
        }
        Command::Expand { poly, field: fl, truncation, positive, json } => {
            let f = field(&fl)?;
            let target = exponent(&truncation, "truncation")?;
            if target <= Ratio::from_integer(0) {
                return Err(Failure::Usage("--truncation must be positive".into()));
            }
            let p = parse_eps_poly(&poly, &f)?;
            let req = BranchRequest { f: p, target_truncation: target, positive_valuation_only: positive };
            let branches = puiseux_roots(&req)?;
            let v = json!({
                "poly": poly,
                "field": f.describe(),
                "truncation": target.to_string(),
                "branches": branches.iter().map(|b| b.series.to_string()).collect::<Vec<_>>(),
            });
            emit_value(&v, json);
            Ok(0)
        }
        Command::DualitySelftest { samples, seed, field: fl, json } => {
            let f = field(&fl)?;
            let mut rng = sample::rng(seed);
            let ks: Vec<_> = (0..samples).map(|_| sample::puiseux(&mut rng, &f)).collect();
            let (pass, counterexample) = match roundtrip_check(&ks) {
                Ok(_) => (true, None),
                Err(Error::CounterexampleFound { element }) => (false, Some(element)),
                Err(e) => return Err(e.into()),
            };
            let v = json!({
                "samples": samples,
                "seed": seed,
                "field": f.describe(),
                "pass": pass,
                "counterexample": counterexample,
            });
            emit_value(&v, json);
            Ok(if pass { 0 } else { EXIT_VERIFICATION })
        }
        Command::Specialize { point, field: fl, json } => {
            let f = field(&fl)?;
            let p = ProjPointK::parse(&point, &f)?;
            let v = json!({
                "point": p.to_string(),
                "specialization": specialize(&p)?.to_string(),
            });
            emit_value(&v, json);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
