use std::sync::Arc;

use super::error::GeomError;
use super::shoot::ProfileCurve;
use super::vec3::{add, cross, dot, norm, normalize, orthonormal_to, scale, sub, Vec3};

/// Numerical configuration shared by the operations of this module.
#[derive(Clone, Debug)]
pub struct NumConfig {
    /// Central-difference step in chart coordinates.
    pub fd_step: f64,
    /// Tensor Gauss–Legendre order per axis.
    pub quad_order: usize,
    /// Fixed step of the profile integrator.
    pub ode_step: f64,
    /// Normal displacement used by the discrete first variation.
    pub variation_eps: f64,
}

impl Default for NumConfig {
    fn default() -> Self {
        NumConfig {
            fd_step: 1e-4,
            quad_order: 32,
            ode_step: 1e-3,
            variation_eps: 1e-4,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Orientation {
    /// Outward normal on closed shapes; the chart-induced normal
    /// `Xu x Xv / |.|` on analytic charts.
    Outward,
    /// The opposite normal.
    Inward,
}

/// A twice continuously differentiable parametric patch.
#[derive(Clone)]
pub struct Chart {
    pub u_range: (f64, f64),
    pub v_range: (f64, f64),
    pub map: Arc<dyn Fn(f64, f64) -> Vec3 + Send + Sync>,
}

impl std::fmt::Debug for Chart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Chart")
            .field("u_range", &self.u_range)
            .field("v_range", &self.v_range)
            .finish_non_exhaustive()
    }
}

#[derive(Clone, Debug)]
pub enum Shape {
    /// Points x with <normal, x> = offset.
    Plane { normal: Vec3, offset: f64 },
    Sphere { center: Vec3, radius: f64 },
    Cylinder {
        axis_point: Vec3,
        axis_dir: Vec3,
        radius: f64,
    },
    Rotational { profile: ProfileCurve },
    Analytic { chart: Chart },
}

#[derive(Clone, Debug)]
pub struct SurfaceSpec {
    pub shape: Shape,
    pub orientation: Orientation,
}

impl SurfaceSpec {
    pub fn new(shape: Shape) -> Result<SurfaceSpec, GeomError> {
        match &shape {
            Shape::Sphere { radius, .. } | Shape::Cylinder { radius, .. } if *radius <= 0.0 => {
                return Err(GeomError::InvalidSurface("radius must be positive".into()));
            }
            _ => {}
        }
        let shape = match shape {
            Shape::Plane { normal, offset } => Shape::Plane {
                normal: normalize(normal),
                offset,
            },
            Shape::Cylinder {
                axis_point,
                axis_dir,
                radius,
            } => Shape::Cylinder {
                axis_point,
                axis_dir: normalize(axis_dir),
                radius,
            },
            other => other,
        };
        Ok(SurfaceSpec {
            shape,
            orientation: Orientation::Outward,
        })
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> SurfaceSpec {
        self.orientation = orientation;
        self
    }

    /// Position of the canonical chart at `(u, v)`.
    pub fn position(&self, u: f64, v: f64) -> Vec3 {
        match &self.shape {
            Shape::Plane { normal, offset } => {
                let t1 = orthonormal_to(*normal);
                let t2 = cross(*normal, t1);
                add(scale(*normal, *offset), add(scale(t1, u), scale(t2, v)))
            }
            Shape::Sphere { center, radius } => add(
                *center,
                scale(
                    [u.sin() * v.cos(), u.sin() * v.sin(), u.cos()],
                    *radius,
                ),
            ),
            Shape::Cylinder {
                axis_point,
                axis_dir,
                radius,
            } => {
                let e1 = orthonormal_to(*axis_dir);
                let e2 = cross(*axis_dir, e1);
                add(
                    add(*axis_point, scale(*axis_dir, v)),
                    scale(add(scale(e1, u.cos()), scale(e2, u.sin())), *radius),
                )
            }
            Shape::Rotational { profile } => {
                let (f, z, _theta, _dtheta) = profile.eval(u);
                [f * v.cos(), f * v.sin(), z]
            }
            Shape::Analytic { chart } => (chart.map)(u, v),
        }
    }
}

/// Pointwise geometric data of a surface sample.
#[derive(Clone, Copy, Debug)]
pub struct FrameSample {
    pub position: Vec3,
    pub normal: Vec3,
    /// Sum of the principal curvatures.
    pub mean: f64,
    pub gauss: f64,
    pub kappa1: f64,
    pub kappa2: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct Patch {
    pub u0: f64,
    pub u1: f64,
    pub v0: f64,
    pub v1: f64,
}

/// The canonical parameter rectangle of each shape's chart.
pub fn default_patch(s: &SurfaceSpec) -> Patch {
    use std::f64::consts::PI;
    match &s.shape {
        Shape::Plane { .. } => Patch {
            u0: -1.0,
            u1: 1.0,
            v0: -1.0,
            v1: 1.0,
        },
        Shape::Sphere { .. } => Patch {
            u0: 0.0,
            u1: PI,
            v0: 0.0,
            v1: 2.0 * PI,
        },
        Shape::Cylinder { .. } => Patch {
            u0: 0.0,
            u1: 2.0 * PI,
            v0: -2.0,
            v1: 2.0,
        },
        Shape::Rotational { profile } => {
            let (s0, s1) = profile.s_range();
            Patch {
                u0: s0,
                u1: s1,
                v0: 0.0,
                v1: 2.0 * PI,
            }
        }
        Shape::Analytic { chart } => Patch {
            u0: chart.u_range.0,
            u1: chart.u_range.1,
            v0: chart.v_range.0,
            v1: chart.v_range.1,
        },
    }
}

fn orientation_sign(o: Orientation) -> f64 {
    match o {
        Orientation::Outward => 1.0,
        Orientation::Inward => -1.0,
    }
}

/// Geometric data at a chart point: closed forms for the elementary
/// shapes, profile data for rotational surfaces, second-order central
/// differences for analytic charts.
pub fn surface_frame(
    s: &SurfaceSpec,
    u: f64,
    v: f64,
    cfg: &NumConfig,
) -> Result<FrameSample, GeomError> {
    let sign = orientation_sign(s.orientation);
    let sample = match &s.shape {
        Shape::Plane { normal, .. } => FrameSample {
            position: s.position(u, v),
            normal: scale(*normal, sign),
            mean: 0.0,
            gauss: 0.0,
            kappa1: 0.0,
            kappa2: 0.0,
        },
        Shape::Sphere { center, radius } => {
            let position = s.position(u, v);
            let normal = scale(normalize(sub(position, *center)), sign);
            let k = -sign / radius;
            FrameSample {
                position,
                normal,
                mean: 2.0 * k,
                gauss: k * k,
                kappa1: k,
                kappa2: k,
            }
        }
        Shape::Cylinder {
            axis_point,
            axis_dir,
            radius,
        } => {
            let position = s.position(u, v);
            let radial = sub(
                position,
                add(*axis_point, scale(*axis_dir, dot(sub(position, *axis_point), *axis_dir))),
            );
            let normal = scale(normalize(radial), sign);
            let k_circ = -sign / radius;
            FrameSample {
                position,
                normal,
                mean: k_circ,
                gauss: 0.0,
                kappa1: k_circ,
                kappa2: 0.0,
            }
        }
        Shape::Rotational { profile } => {
            let (f, z, theta, dtheta) = profile.eval(u);
            let position = [f * v.cos(), f * v.sin(), z];
            let normal = scale(
                [theta.sin() * v.cos(), theta.sin() * v.sin(), -theta.cos()],
                sign,
            );
            let k_meridian = -sign * dtheta;
            let k_parallel = if f.abs() < 1e-8 {
                // axis limit: the parallel curvature tends to the meridian one
                k_meridian
            } else {
                -sign * theta.sin() / f
            };
            FrameSample {
                position,
                normal,
                mean: k_meridian + k_parallel,
                gauss: k_meridian * k_parallel,
                kappa1: k_meridian,
                kappa2: k_parallel,
            }
        }
        Shape::Analytic { .. } => finite_difference_frame(s, u, v, cfg, sign)?,
    };
    debug_assert!((norm(sample.normal) - 1.0).abs() < 1e-12);
    debug_assert!({
        let h = sample.kappa1 + sample.kappa2;
        let k = sample.kappa1 * sample.kappa2;
        let scale = sample.kappa1.abs().max(sample.kappa2.abs()).max(1.0);
        (h - sample.mean).abs() <= 1e-9 * scale && (k - sample.gauss).abs() <= 1e-9 * scale * scale
    });
    Ok(sample)
}

fn finite_difference_frame(
    s: &SurfaceSpec,
    u: f64,
    v: f64,
    cfg: &NumConfig,
    sign: f64,
) -> Result<FrameSample, GeomError> {
    let h = cfg.fd_step;
    let p = |du: f64, dv: f64| s.position(u + du, v + dv);
    let position = p(0.0, 0.0);
    let xu = scale(sub(p(h, 0.0), p(-h, 0.0)), 0.5 / h);
    let xv = scale(sub(p(0.0, h), p(0.0, -h)), 0.5 / h);
    let xuu = scale(
        add(sub(p(h, 0.0), scale(position, 2.0)), p(-h, 0.0)),
        1.0 / (h * h),
    );
    let xvv = scale(
        add(sub(p(0.0, h), scale(position, 2.0)), p(0.0, -h)),
        1.0 / (h * h),
    );
    let xuv = scale(
        sub(
            sub(p(h, h), p(h, -h)),
            sub(p(-h, h), p(-h, -h)),
        ),
        0.25 / (h * h),
    );
    let e_metric = dot(xu, xu);
    let f_metric = dot(xu, xv);
    let g_metric = dot(xv, xv);
    let det = e_metric * g_metric - f_metric * f_metric;
    if det <= 1e-12 {
        return Err(GeomError::DegenerateChart { u, v });
    }
    let normal = scale(normalize(cross(xu, xv)), sign);
    let e2 = dot(normal, xuu);
    let f2 = dot(normal, xuv);
    let g2 = dot(normal, xvv);
    let mean = (e2 * g_metric - 2.0 * f2 * f_metric + g2 * e_metric) / det;
    let gauss = (e2 * g2 - f2 * f2) / det;
    let disc = (mean * mean / 4.0 - gauss).max(0.0).sqrt();
    Ok(FrameSample {
        position,
        normal,
        mean,
        gauss,
        kappa1: mean / 2.0 + disc,
        kappa2: mean / 2.0 - disc,
    })
}

/// Area element `|Xu x Xv|` at a chart point.
pub fn area_element(s: &SurfaceSpec, u: f64, v: f64, cfg: &NumConfig) -> f64 {
    match &s.shape {
        Shape::Plane { .. } => 1.0,
        Shape::Sphere { radius, .. } => radius * radius * u.sin().abs(),
        Shape::Cylinder { radius, .. } => *radius,
        Shape::Rotational { profile } => profile.eval(u).0.abs(),
        Shape::Analytic { .. } => {
            let h = cfg.fd_step;
            let p = |du: f64, dv: f64| s.position(u + du, v + dv);
            let xu = scale(sub(p(h, 0.0), p(-h, 0.0)), 0.5 / h);
            let xv = scale(sub(p(0.0, h), p(0.0, -h)), 0.5 / h);
            norm(cross(xu, xv))
        }
    }
}

/// The Euler–Lagrange residual `H - a <N, x>/|x|^2` at a chart point.
pub fn stationarity_residual(
    s: &SurfaceSpec,
    alpha: f64,
    u: f64,
    v: f64,
    cfg: &NumConfig,
) -> Result<f64, GeomError> {
    let frame = surface_frame(s, u, v, cfg)?;
    let len2 = dot(frame.position, frame.position);
    if len2 < 1e-18 {
        return Err(GeomError::OriginOnSurface);
    }
    Ok(frame.mean - alpha * dot(frame.normal, frame.position) / len2)
}
