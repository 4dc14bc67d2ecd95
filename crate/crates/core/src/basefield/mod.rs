//! The constant field `L` (`Q` or `Q(θ)`) and polynomials over it.

pub mod extension;
pub mod factor;
pub mod field;
pub mod mpoly;
pub mod poly;
pub mod resultant;
pub mod roots;

pub use field::{BaseField, FieldDescriptor, FieldElement};
pub use mpoly::MPoly;
pub use poly::{Field, Poly, Ring};
