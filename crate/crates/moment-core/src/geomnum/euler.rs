use std::sync::Arc;

use super::error::GeomError;

/// A polar curve `r(theta)` with first and second derivative evaluators.
#[derive(Clone)]
pub struct PolarCurve {
    pub theta_range: (f64, f64),
    r: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    dr: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    ddr: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for PolarCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PolarCurve")
            .field("theta_range", &self.theta_range)
            .finish_non_exhaustive()
    }
}

impl PolarCurve {
    pub fn new(
        theta_range: (f64, f64),
        r: impl Fn(f64) -> f64 + Send + Sync + 'static,
        dr: impl Fn(f64) -> f64 + Send + Sync + 'static,
        ddr: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> PolarCurve {
        PolarCurve {
            theta_range,
            r: Arc::new(r),
            dr: Arc::new(dr),
            ddr: Arc::new(ddr),
        }
    }

    /// The straight line x = 1, i.e. r = sec(theta).
    pub fn line() -> PolarCurve {
        PolarCurve::new(
            (-1.2, 1.2),
            |t: f64| 1.0 / t.cos(),
            |t: f64| t.sin() / (t.cos() * t.cos()),
            |t: f64| (1.0 + t.sin() * t.sin()) / t.cos().powi(3),
        )
    }

    pub fn circle(radius: f64) -> PolarCurve {
        PolarCurve::new(
            (0.0, std::f64::consts::TAU),
            move |_| radius,
            |_| 0.0,
            |_| 0.0,
        )
    }

    /// `r = sec(m theta)^(1/m)`, the classical extremal family
    /// `r^m cos(m theta) = 1`: the cubic-secant curve at `m = 3` and the
    /// rectangular hyperbola at `m = 2`.
    pub fn sec_power(m: f64) -> PolarCurve {
        let half_domain = std::f64::consts::FRAC_PI_2 / m;
        let r = move |t: f64| (m * t).cos().powf(-1.0 / m);
        let dr = move |t: f64| r(t) * (m * t).tan();
        let ddr = move |t: f64| r(t) * ((m + 1.0) * (m * t).tan().powi(2) + m);
        PolarCurve::new((-half_domain, half_domain), r, dr, ddr)
    }

    /// Named curves understood by the command line.
    pub fn named(name: &str) -> Option<PolarCurve> {
        match name {
            "line" => Some(PolarCurve::line()),
            "circle" => Some(PolarCurve::circle(1.0)),
            "sec3" => Some(PolarCurve::sec_power(3.0)),
            "hyperbola" => Some(PolarCurve::sec_power(2.0)),
            _ => None,
        }
    }

    pub fn eval(&self, theta: f64) -> (f64, f64, f64) {
        ((self.r)(theta), (self.dr)(theta), (self.ddr)(theta))
    }

    pub fn point(&self, theta: f64) -> [f64; 2] {
        let r = (self.r)(theta);
        [r * theta.cos(), r * theta.sin()]
    }

    /// Unit normal, the tangent rotated by +90 degrees.
    pub fn unit_normal(&self, theta: f64) -> [f64; 2] {
        let (r, dr, _) = self.eval(theta);
        let tx = dr * theta.cos() - r * theta.sin();
        let ty = dr * theta.sin() + r * theta.cos();
        let len = (tx * tx + ty * ty).sqrt();
        [-ty / len, tx / len]
    }
}

/// Planar Euler–Lagrange residual of the energy `∫ r^a ds` at `theta`:
/// `kappa - a <n, x>/|x|^2` with the signed curvature `kappa` and the unit
/// normal `n` consistent with it (`T' = kappa n`).
pub fn euler_curve_residual(
    alpha: f64,
    curve: &PolarCurve,
    theta: f64,
) -> Result<f64, GeomError> {
    let (r, dr, ddr) = curve.eval(theta);
    if !(r > 0.0) || !r.is_finite() {
        return Err(GeomError::InvalidCurve(format!(
            "r({theta}) = {r} is not positive"
        )));
    }
    let speed2 = r * r + dr * dr;
    let kappa = (r * r + 2.0 * dr * dr - r * ddr) / speed2.powf(1.5);
    let n = curve.unit_normal(theta);
    let x = curve.point(theta);
    let n_dot_x = n[0] * x[0] + n[1] * x[1];
    Ok(kappa - alpha * n_dot_x / (r * r))
}

/// Independent discrete oracle for the residual formula: the gradient of
/// the polyline energy `sum |P_{i+1} - P_i| |midpoint|^a` with respect to a
/// normal displacement of one vertex, normalized by `-r^a ds`.
///
/// Returns `(theta_i, oracle_residual_i)` for the interior vertices of a
/// `segments`-piece polyline over the curve's range shrunk by `margin` on
/// both ends. Vertices are spaced uniformly in arc length so the
/// discretization error stays even where the curve runs fast in `theta`.
pub fn discrete_variation_residual(
    alpha: f64,
    curve: &PolarCurve,
    segments: usize,
    margin: f64,
) -> Vec<(f64, f64)> {
    let (t0, t1) = curve.theta_range;
    let (lo, hi) = (t0 + margin, t1 - margin);
    let n = segments;
    let thetas = arc_length_spaced(curve, lo, hi, n);
    let base: Vec<[f64; 2]> = thetas.iter().map(|&t| curve.point(t)).collect();

    let energy = |points: &[[f64; 2]]| -> f64 {
        points
            .windows(2)
            .map(|w| {
                let dx = w[1][0] - w[0][0];
                let dy = w[1][1] - w[0][1];
                let len = (dx * dx + dy * dy).sqrt();
                let mx = 0.5 * (w[0][0] + w[1][0]);
                let my = 0.5 * (w[0][1] + w[1][1]);
                len * (mx * mx + my * my).sqrt().powf(alpha)
            })
            .sum()
    };

    let delta = 1e-5;
    (1..n)
        .map(|i| {
            let t = thetas[i];
            let normal = curve.unit_normal(t);
            let mut plus = base.clone();
            plus[i][0] += delta * normal[0];
            plus[i][1] += delta * normal[1];
            let mut minus = base.clone();
            minus[i][0] -= delta * normal[0];
            minus[i][1] -= delta * normal[1];
            let grad = (energy(&plus) - energy(&minus)) / (2.0 * delta);
            let (r, _, _) = curve.eval(t);
            let ds = {
                let before = base[i - 1];
                let after = base[i + 1];
                let d1 = ((base[i][0] - before[0]).powi(2) + (base[i][1] - before[1]).powi(2))
                    .sqrt();
                let d2 =
                    ((after[0] - base[i][0]).powi(2) + (after[1] - base[i][1]).powi(2)).sqrt();
                0.5 * (d1 + d2)
            };
            (t, -grad / (r.powf(alpha) * ds))
        })
        .collect()
}

/// `n + 1` parameter values between `lo` and `hi` spaced uniformly in arc
/// length, via trapezoid cumulative lengths on a refined grid.
fn arc_length_spaced(curve: &PolarCurve, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let fine = 16 * n;
    let speed = |t: f64| {
        let (r, dr, _) = curve.eval(t);
        (r * r + dr * dr).sqrt()
    };
    let mut cumulative = Vec::with_capacity(fine + 1);
    cumulative.push(0.0);
    let mut acc = 0.0;
    let h = (hi - lo) / fine as f64;
    for i in 0..fine {
        let a = lo + i as f64 * h;
        acc += 0.5 * (speed(a) + speed(a + h)) * h;
        cumulative.push(acc);
    }
    let total = acc;
    let mut out = Vec::with_capacity(n + 1);
    let mut idx = 0;
    for i in 0..=n {
        let target = total * i as f64 / n as f64;
        while idx + 1 < cumulative.len() && cumulative[idx + 1] < target {
            idx += 1;
        }
        let span = cumulative[idx + 1] - cumulative[idx];
        let frac = if span > 0.0 {
            (target - cumulative[idx]) / span
        } else {
            0.0
        };
        out.push(lo + (idx as f64 + frac) * h);
    }
    *out.last_mut().unwrap() = hi;
    out
}
