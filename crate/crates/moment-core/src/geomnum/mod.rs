//! Floating-point verification of stationarity on parametric surfaces:
//! curvatures and Euler–Lagrange residuals, energy quadrature, discrete
//! first variation, profile shooting for rotational surfaces, and planar
//! extremal residuals.
//!
//! Sign convention, fixed once for the whole module: the shape operator is
//! `S = -dN`. With the outward normal on a sphere of radius `r` this gives
//! principal curvatures `-1/r` and (sum convention) `H = -2/r`, so the unit
//! sphere about the origin satisfies the stationarity equation
//! `H = a <N,x>/|x|^2` exactly at `a = -2`, and the sphere through the
//! origin at `a = -4`. Flipping orientation negates `H` and the residual
//! and leaves the Gauss curvature unchanged.

mod error;
mod euler;
mod grid;
mod quadrature;
mod shoot;
mod surface;
mod variation;
mod vec3;

pub use error::GeomError;
pub use euler::{discrete_variation_residual, euler_curve_residual, PolarCurve};
pub use grid::{residual_grid, write_grid_csv, GridRow, GridScan};
pub use quadrature::{energy, gauss_legendre};
pub use shoot::{shoot_rotational, ProfileCurve, ProfileSample};
pub use surface::{
    default_patch, stationarity_residual, surface_frame, Chart, FrameSample, NumConfig,
    Orientation, Patch, Shape, SurfaceSpec,
};
pub use variation::{first_variation, Perturbation};
