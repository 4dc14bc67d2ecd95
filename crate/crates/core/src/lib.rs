//! Exact Puiseux-series arithmetic over number fields, the correspondence
//! between valuations and specialisations, and intersection multiplicities
//! of plane curves counted by infinitesimal perturbation.

pub mod basefield;
pub mod curves;
pub mod duality;
pub mod error;
pub mod multiplicity;
pub mod newton_puiseux;
pub mod parse;
pub mod projective;
pub mod puiseux;
pub mod sample;

pub use basefield::{BaseField, FieldElement, MPoly, Poly};
pub use curves::{parse_curve, Matrix3, PlaneCurve};
pub use error::{Error, Result};
pub use multiplicity::{bezout_check, mult_nonstandard, mult_oracle, mult_report, BezoutReport, MultConfig};
pub use projective::{specialize, ProjPointK, ProjPointL};
pub use puiseux::{Exponent, PuiseuxElement};
