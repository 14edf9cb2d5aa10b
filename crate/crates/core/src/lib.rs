//! Malcev-coordinate arithmetic in nilpotent groups, Γ-polynomials and
//! PET-induction, together with windowed recurrence experiments on
//! substitution subshifts.

pub mod corpus;
pub mod dynsys;
mod error;
mod expr;
pub mod gpoly;
pub mod nilgroup;
pub mod pet;
mod poly;
pub mod zsets;

pub use dynsys::{Cylinder, SubstitutionSystem};
pub use error::{Error, ErrorClass, Result};
pub use gpoly::{parse_gpoly, parse_integral_polynomial, GammaPolynomial, IntegralPolynomial, Weight};
pub use nilgroup::{GroupModel, IntMatrix, MalcevExponents};
pub use pet::{PolySystem, ReductionTrace, Rule, WeightVector};
pub use poly::{MultiPoly, QPoly};
pub use zsets::{ClassificationReport, WindowSet};
