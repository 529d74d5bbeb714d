use super::error::GeomError;
use super::surface::{area_element, NumConfig, Patch, Shape, SurfaceSpec};
use super::vec3::{dot, norm};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Value and derivative of the Legendre polynomial `P_n` at `x`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Tensor-product Gauss–Legendre quadrature of `|x|^alpha dS` over a
/// parameter rectangle.
///
/// Errors when the integrand is singular: `|x|` below threshold at a node
/// with a negative exponent. Splitting the patch around such points is the
/// caller's responsibility.
pub fn energy(
    s: &SurfaceSpec,
    alpha: f64,
    patch: &Patch,
    n: usize,
    cfg: &NumConfig,
) -> Result<f64, GeomError> {
    let (nodes, weights) = gauss_legendre(n);
    let mu = 0.5 * (patch.u1 - patch.u0);
    let cu = 0.5 * (patch.u1 + patch.u0);
    let mv = 0.5 * (patch.v1 - patch.v0);
    let cv = 0.5 * (patch.v1 + patch.v0);
    let mut total = 0.0;
    for (i, &xu) in nodes.iter().enumerate() {
        let u = cu + mu * xu;
        for (j, &xv) in nodes.iter().enumerate() {
            let v = cv + mv * xv;
            let pos = s.position(u, v);
            let len = norm(pos);
            if alpha < 0.0 && len < 1e-9 {
                return Err(GeomError::SingularIntegrand { len });
            }
            let weight_fn = if alpha == 0.0 { 1.0 } else { len.powf(alpha) };
            total += weights[i] * weights[j] * weight_fn * area_element(s, u, v, cfg);
        }
    }
    Ok(total * mu * mv)
}

/// Convenience: is the surface's position ever exactly the origin on the
/// closed shapes (used by the grid scan to report skipped nodes).
pub(crate) fn position_length2(s: &SurfaceSpec, u: f64, v: f64) -> f64 {
    let p = s.position(u, v);
    dot(p, p)
}

/// True if the shape has a closed-form area element (no finite differences
/// in the integrand).
#[allow(dead_code)]
pub(crate) fn has_closed_area_element(s: &SurfaceSpec) -> bool {
    !matches!(s.shape, Shape::Analytic { .. })
}
