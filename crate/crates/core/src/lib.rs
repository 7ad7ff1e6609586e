//! Exact algebra over the Laurent ring Z[t, t^-1]: quadratic modules and
//! their unitary groups, a metastable Whitehead-product calculus, coinvariant
//! computations, Frobenius modules, and the lookup tables they feed.

pub mod error;
pub mod laurent;
pub mod poly_matrix;
pub mod quadratic;
pub mod unitary;
pub mod whitehead;
pub mod snf;
pub mod tables;
pub mod coinvariants;
pub mod frobenius;
pub mod cli;

pub use error::{Error, Result};
pub use laurent::{FormParameter, LaurentPoly, ParamVariant};
pub use poly_matrix::PolyMatrix;
pub use quadratic::{FormSpec, QuadraticModule, QuotientClass};
pub use unitary::{BlockMatrix, Family, GeneratorSpec};
pub use snf::{AbelianGroup, IntMatrix};
