//! Exact symbolic replay and floating-point verification for stationary
//! surfaces of the weighted area energy `E_a[S] = ∫ |x|^a dS`.
//!
//! The crate has two halves:
//!
//! * an exact computer-algebra kernel over a fixed fourteen-symbol rational
//!   function field ([`symkernel`]), together with the differential-field
//!   machinery of principal-frame derivations ([`derivation`]) and a script
//!   runner that replays the classification arguments check by check
//!   ([`proofscript`]);
//! * a numerical toolkit for parametric surfaces: curvatures, Euler–Lagrange
//!   residuals, energy quadrature, discrete first variation, profile-curve
//!   shooting and planar extremal residuals ([`geomnum`]).
//!
//! Everything is pure and immutable after construction; values may be shared
//! freely between threads.

pub mod derivation;
pub mod geomnum;
pub mod proofscript;
pub mod symkernel;
