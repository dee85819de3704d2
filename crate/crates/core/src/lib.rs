//! Exact arithmetic for the rational and elliptic Gromov-Witten invariants of
//! the projective plane.
//!
//! The crate is `no_std` and only needs `alloc`. It contains:
//!
//! * [`series`]: truncated series in `e^{y1}` and `y2` with exact rational
//!   coefficients, the substrate for the potentials.
//! * [`rational_gw`]: the rational potential and an order-by-order WDVV solver.
//! * [`elliptic_gw`]: three independent routes to the elliptic invariants and
//!   the residual of Getzler's genus-one equation.
//! * [`diffpoly`]: differential polynomials in the jets of the rational
//!   potential, used to check the symbolic identity behind the elliptic
//!   recursion.
//! * [`strata`]: push-forward tables and boundary relations in the Chow group
//!   of dimension-two cycles on the moduli space of 4-pointed elliptic curves.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod diffpoly;
pub mod elliptic_gw;
mod error;
pub mod invariants;
pub mod rational;
pub mod rational_gw;
pub mod series;
pub mod strata;

pub use error::{Error, Result};
pub use invariants::{InvariantKind, InvariantTable, Route};
pub use rational::Rational;
pub use series::BigradedSeries;
