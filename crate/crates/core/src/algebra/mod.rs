//! Exact scalar and polynomial arithmetic.

mod fraction;
mod monomial;
mod poly;
pub mod rational;
mod special;

pub use fraction::Fraction;
pub use monomial::{Monomial, Var};
pub use poly::{latex_rational, Poly, PolyParseError};
pub use rational::Rational;
pub use special::{alternating_sign, binom_half_d, pochhammer};
