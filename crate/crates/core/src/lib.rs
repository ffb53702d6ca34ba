//! Exact maximum likelihood degrees `φ(n, a)` of generic linear concentration
//! models, computed by torus localization on the variety of complete quadrics.
//!
//! The pipeline is: enumerate the torus-fixed points ([`chains`]), attach the
//! tangent characters at each ([`compass`]), localize the intersection class and
//! take the `t → 1` limit along a generic one-parameter subgroup, then sum the
//! exact rational contributions ([`localization`]). [`reference`] holds the
//! closed-form and conjectured formulas used as oracles.
//!
//! ```
//! use mldegree::ml_degree;
//! assert_eq!(ml_degree(4, 4, None).unwrap(), 17u32.into());
//! ```

pub mod chains;
pub mod cli;
pub mod compass;
pub mod error;
pub mod localization;
pub mod reference;
pub mod verify;

pub use chains::{enumerate_fixed_points, kappa, Block, FixedPoint, FixedPoints};
pub use compass::{compass, Character};
pub use error::{Error, Result};
pub use localization::{
    contribution, default_subgroup, limit_ratio, localization_sums, ml_degree, ml_degree_row,
    ml_degree_with, random_subgroup, restrict_class, validate_subgroup, Contribution,
    Parallelism, RestrictedClass, Subgroup,
};
pub use reference::{beta_diagonal, interpolate_phi, phi_closed_form, PhiPolynomial};
