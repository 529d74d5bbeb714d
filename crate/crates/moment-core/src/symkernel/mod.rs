//! Exact arithmetic over a fixed rational function field.
//!
//! The variable universe is the fourteen symbols that appear in the
//! principal-frame curvature calculus:
//!
//! | name   | meaning                          |
//! |--------|----------------------------------|
//! | `k`    | first principal curvature        |
//! | `k2`   | second principal curvature       |
//! | `K`    | Gauss curvature                  |
//! | `c`    | a constant curvature parameter   |
//! | `a`    | the energy exponent              |
//! | `w`    | squared distance to the origin   |
//! | `g`    | tangential coefficient gamma     |
//! | `m`    | tangential coefficient mu        |
//! | `p`    | e1-derivative of `k`             |
//! | `q`    | e2-derivative of `k`             |
//! | `k11`  | e1 e1 second derivative of `k`   |
//! | `k12`  | mixed second derivative of `k`   |
//! | `k22`  | e2 e2 second derivative of `k`   |
//! | `nphi` | normal component of the position |
//!
//! Polynomials are sparse with arbitrary-precision rational coefficients;
//! rational functions are unreduced quotients compared by cross
//! multiplication. There is no GCD machinery anywhere: every identity check
//! reduces to "is this polynomial identically zero".

mod budget;
mod error;
mod parse;
mod poly;
mod ratio;
mod solve;
mod var;

pub use budget::{set_term_budget, term_budget, with_term_budget};
pub use error::SymError;
pub use parse::{lower, parse_expr, parse_ratio, ExprAst};
pub use poly::{Mono, Poly, NUM_VARS};
pub use ratio::{proportional, ratio_eq, Ratio};
pub use solve::solve_linear_2x2;
pub use var::VarId;
