use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::error::GeomError;
use super::quadrature::gauss_legendre;
use super::surface::{surface_frame, NumConfig, Patch, SurfaceSpec};
use super::vec3::{add, cross, dot, norm, scale, sub, Vec3};

/// A scalar field on the chart used as a normal perturbation.
#[derive(Clone)]
pub struct Perturbation {
    f: Arc<dyn Fn(f64, f64, Vec3) -> f64 + Send + Sync>,
}

impl Perturbation {
    pub fn constant(c: f64) -> Perturbation {
        Perturbation {
            f: Arc::new(move |_, _, _| c),
        }
    }

    /// A seeded random trigonometric polynomial of the ambient coordinates;
    /// smooth on any surface, poles included.
    pub fn random_smooth(seed: u64) -> Perturbation {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let terms: Vec<(f64, Vec3, f64)> = (0..6)
            .map(|_| {
                let amp = rng.random_range(-1.0..1.0);
                let wave = [
                    rng.random_range(-2.0..2.0),
                    rng.random_range(-2.0..2.0),
                    rng.random_range(-2.0..2.0),
                ];
                let phase = rng.random_range(0.0..std::f64::consts::TAU);
                (amp, wave, phase)
            })
            .collect();
        Perturbation {
            f: Arc::new(move |_, _, pos| {
                terms
                    .iter()
                    .map(|(amp, wave, phase)| amp * (dot(*wave, pos) + phase).sin())
                    .sum()
            }),
        }
    }

    /// A chart-coordinate field, for compactly supported bumps.
    pub fn chart_field(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Perturbation {
        Perturbation {
            f: Arc::new(move |u, v, _| f(u, v)),
        }
    }

    pub fn eval(&self, u: f64, v: f64, pos: Vec3) -> f64 {
        (self.f)(u, v, pos)
    }
}

/// Central-difference first variation of the energy under a normal
/// perturbation: `(E(+eps) - E(-eps)) / (2 eps)` where the displaced
/// surface is `x + t phi N`.
pub fn first_variation(
    s: &SurfaceSpec,
    alpha: f64,
    perturbation: &Perturbation,
    eps: f64,
    patch: &Patch,
    n: usize,
    cfg: &NumConfig,
) -> Result<f64, GeomError> {
    let plus = displaced_energy(s, alpha, perturbation, eps, patch, n, cfg)?;
    let minus = displaced_energy(s, alpha, perturbation, -eps, patch, n, cfg)?;
    Ok((plus - minus) / (2.0 * eps))
}

fn displaced_energy(
    s: &SurfaceSpec,
    alpha: f64,
    perturbation: &Perturbation,
    t: f64,
    patch: &Patch,
    n: usize,
    cfg: &NumConfig,
) -> Result<f64, GeomError> {
    let displaced = |u: f64, v: f64| -> Result<Vec3, GeomError> {
        let frame = surface_frame(s, u, v, cfg)?;
        let phi = perturbation.eval(u, v, frame.position);
        Ok(add(frame.position, scale(frame.normal, t * phi)))
    };
    let (nodes, weights) = gauss_legendre(n);
    let mu = 0.5 * (patch.u1 - patch.u0);
    let cu = 0.5 * (patch.u1 + patch.u0);
    let mv = 0.5 * (patch.v1 - patch.v0);
    let cv = 0.5 * (patch.v1 + patch.v0);
    let h = cfg.fd_step;
    let mut total = 0.0;
    for (i, &xu) in nodes.iter().enumerate() {
        let u = cu + mu * xu;
        for (j, &xv) in nodes.iter().enumerate() {
            let v = cv + mv * xv;
            let xu_vec = scale(sub(displaced(u + h, v)?, displaced(u - h, v)?), 0.5 / h);
            let xv_vec = scale(sub(displaced(u, v + h)?, displaced(u, v - h)?), 0.5 / h);
            let area = norm(cross(xu_vec, xv_vec));
            let pos = displaced(u, v)?;
            let len = norm(pos);
            if alpha < 0.0 && len < 1e-9 {
                return Err(GeomError::SingularIntegrand { len });
            }
            let weight_fn = if alpha == 0.0 { 1.0 } else { len.powf(alpha) };
            total += weights[i] * weights[j] * weight_fn * area;
        }
    }
    Ok(total * mu * mv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::surface::{default_patch, Shape};
    use std::f64::consts::PI;

    #[test]
    fn plane_with_compact_bump_is_stationary() {
        let cfg = NumConfig::default();
        let s = SurfaceSpec::new(Shape::Plane {
            normal: [0.0, 0.0, 1.0],
            offset: 0.0,
        })
        .unwrap();
        let patch = default_patch(&s);
        let bump = Perturbation::chart_field(|u, v| {
            let g = (1.0 - u * u).max(0.0) * (1.0 - v * v).max(0.0);
            g * g
        });
        let fv = first_variation(&s, 1.0, &bump, 1e-4, &patch, 32, &cfg).unwrap();
        assert!(fv.abs() < 1e-6, "first variation {fv}");
    }

    #[test]
    fn dilation_of_the_unit_sphere() {
        // E(r) = 4 pi r^(2+alpha); at alpha = -1 the derivative is 4 pi
        let cfg = NumConfig::default();
        let s = SurfaceSpec::new(Shape::Sphere {
            center: [0.0; 3],
            radius: 1.0,
        })
        .unwrap();
        let patch = default_patch(&s);
        let fv = first_variation(&s, -1.0, &Perturbation::constant(1.0), 1e-4, &patch, 32, &cfg)
            .unwrap();
        assert!(
            (fv - 4.0 * PI).abs() < 1e-4,
            "dilation variation {fv}, want {}",
            4.0 * PI
        );
    }

    #[test]
    fn centered_sphere_is_stationary_at_critical_exponent() {
        let cfg = NumConfig::default();
        let s = SurfaceSpec::new(Shape::Sphere {
            center: [0.0; 3],
            radius: 1.0,
        })
        .unwrap();
        let patch = default_patch(&s);
        for seed in [1_u64, 2, 3] {
            let pert = Perturbation::random_smooth(seed);
            let fv =
                first_variation(&s, -2.0, &pert, 1e-4, &patch, 32, &cfg).unwrap();
            assert!(fv.abs() < 1e-5, "seed {seed}: first variation {fv}");
        }
    }
}
