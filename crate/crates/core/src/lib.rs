//! Exact κ-expansions of multiloop Feynman integrals.
//!
//! A diagram is given by its line momenta (integer combinations of loop and
//! external momenta) and propagator powers. Each generalized propagator is
//! written in Schwinger-parametric form, the loop integrals become Gaussian,
//! and `(det M)^(-D/2)` is expanded in κ with exact rational coefficients.
//! The parameter integrals then reduce to Pochhammer symbols.
//!
//! ```
//! use kappa_expand::{diagram::Diagram, expansion::expand_vacuum};
//!
//! let d = Diagram::watermelon();
//! let series = expand_vacuum(&d, 2).unwrap();
//! assert_eq!(series.coeffs[2].to_string(), "9/16 D + 9/32 D^2");
//! ```

pub mod algebra;
pub mod diagram;
pub mod expansion;
pub mod oracles;
pub mod render;
pub mod spec;

pub use algebra::{Fraction, Monomial, Poly, Rational, Var};
pub use diagram::{Diagram, DiagramError, LinePower};
pub use expansion::{expand_vacuum, expand_with_externals, ExpandError, KappaSeries, Prefactor};
