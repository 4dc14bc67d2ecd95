//! Fixed inputs shared by the benchmarks.

/// Curve pairs with their field, as accepted by the curve parser.
pub const CORPUS: &[(&str, &str, Option<&str>)] = &[
    ("x", "y", None),
    ("y", "y*z - x^2", None),
    ("y", "y^2*z - x^3", None),
    ("x^2 + y^2 - 2*z^2", "x^2 + 2*y^2 - 3*z^2", None),
    ("x^2 + y^2 - z^2", "x^2 + y^2 - 2*z^2", Some("t^2 + 1")),
];
