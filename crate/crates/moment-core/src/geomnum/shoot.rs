use std::io::Write;

use super::error::GeomError;

/// One sample of a unit-speed profile curve `(f(s), z(s))` with tangent
/// angle `theta` (`f' = cos theta`, `z' = sin theta`).
#[derive(Clone, Copy, Debug)]
pub struct ProfileSample {
    pub s: f64,
    pub f: f64,
    pub z: f64,
    pub theta: f64,
    /// Turning rate at the sample, kept for curvature evaluation.
    pub dtheta: f64,
}

/// A sampled unit-speed profile of a rotational surface about the z axis.
#[derive(Clone, Debug)]
pub struct ProfileCurve {
    samples: Vec<ProfileSample>,
}

impl ProfileCurve {
    pub fn new(samples: Vec<ProfileSample>) -> Result<ProfileCurve, GeomError> {
        if samples.len() < 2 {
            return Err(GeomError::InvalidSurface(
                "profile needs at least two samples".into(),
            ));
        }
        Ok(ProfileCurve { samples })
    }

    pub fn samples(&self) -> &[ProfileSample] {
        &self.samples
    }

    pub fn s_range(&self) -> (f64, f64) {
        (
            self.samples.first().unwrap().s,
            self.samples.last().unwrap().s,
        )
    }

    /// Cubic Hermite evaluation of `(f, z, theta, theta')` at arc length
    /// `s`, using the stored tangents (`f' = cos theta`, `z' = sin theta`).
    pub fn eval(&self, s: f64) -> (f64, f64, f64, f64) {
        let n = self.samples.len();
        let (s0, s1) = self.s_range();
        let clamped = s.clamp(s0.min(s1), s0.max(s1));
        // uniform spacing is the common case; fall back to search
        let idx = match self
            .samples
            .binary_search_by(|probe| probe.s.partial_cmp(&clamped).unwrap())
        {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        };
        let a = &self.samples[idx];
        let b = &self.samples[idx + 1];
        let h = b.s - a.s;
        let t = if h == 0.0 { 0.0 } else { (clamped - a.s) / h };
        let h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
        let h10 = t * (1.0 - t) * (1.0 - t);
        let h01 = t * t * (3.0 - 2.0 * t);
        let h11 = t * t * (t - 1.0);
        let f = h00 * a.f + h10 * h * a.theta.cos() + h01 * b.f + h11 * h * b.theta.cos();
        let z = h00 * a.z + h10 * h * a.theta.sin() + h01 * b.z + h11 * h * b.theta.sin();
        let theta = h00 * a.theta + h10 * h * a.dtheta + h01 * b.theta + h11 * h * b.dtheta;
        // derivative of the Hermite basis for theta'
        let d00 = 6.0 * t * (t - 1.0) / h;
        let d10 = (1.0 - t) * (1.0 - 3.0 * t);
        let d01 = -d00;
        let d11 = t * (3.0 * t - 2.0);
        let dtheta = d00 * a.theta + d10 * a.dtheta + d01 * b.theta + d11 * b.dtheta;
        (f, z, theta, dtheta)
    }

    /// Maximum deviation of consecutive samples from unit speed:
    /// `|(df^2 + dz^2)/ds^2 - 1|`.
    pub fn unit_speed_defect(&self) -> f64 {
        self.samples
            .windows(2)
            .map(|w| {
                let df = w[1].f - w[0].f;
                let dz = w[1].z - w[0].z;
                let ds = w[1].s - w[0].s;
                ((df * df + dz * dz) / (ds * ds) - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    /// CSV rows `s,f,z,theta` with 17 significant digits.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "s,f,z,theta")?;
        for p in &self.samples {
            writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e}", p.s, p.f, p.z, p.theta)?;
        }
        Ok(())
    }

    /// Parse the CSV form written by [`ProfileCurve::write_csv`];
    /// turning rates are reconstructed by central differences.
    pub fn read_csv(text: &str) -> Result<ProfileCurve, GeomError> {
        let mut rows: Vec<(f64, f64, f64, f64)> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (i == 0 && line.starts_with('s')) {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(GeomError::Io(format!(
                    "profile row {i} has {} fields, want 4",
                    fields.len()
                )));
            }
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| GeomError::Io(format!("profile row {i}: {e}")))
            };
            rows.push((
                parse(fields[0])?,
                parse(fields[1])?,
                parse(fields[2])?,
                parse(fields[3])?,
            ));
        }
        if rows.len() < 2 {
            return Err(GeomError::Io("profile needs at least two rows".into()));
        }
        let n = rows.len();
        let samples = (0..n)
            .map(|i| {
                let (lo, hi) = if i == 0 {
                    (0, 1)
                } else if i == n - 1 {
                    (n - 2, n - 1)
                } else {
                    (i - 1, i + 1)
                };
                let dtheta = (rows[hi].3 - rows[lo].3) / (rows[hi].0 - rows[lo].0);
                ProfileSample {
                    s: rows[i].0,
                    f: rows[i].1,
                    z: rows[i].2,
                    theta: rows[i].3,
                    dtheta,
                }
            })
            .collect();
        ProfileCurve::new(samples)
    }
}

/// Turning rate of the stationary profile: the stationarity equation
/// `H = a <N,x>/|x|^2` solved for `theta'`, with the on-axis limit of the
/// parallel curvature term when `f` is at the axis.
fn turning_rate(alpha: f64, f: f64, z: f64, theta: f64) -> f64 {
    let len2 = f * f + z * z;
    let normal_dot = f * theta.sin() - z * theta.cos();
    if f.abs() < 1e-8 {
        // on the axis both principal curvatures coincide
        -alpha * normal_dot / (2.0 * len2)
    } else {
        -theta.sin() / f - alpha * normal_dot / len2
    }
}

/// Integrate the unit-speed stationary profile from `(f0, z0, theta0)` for
/// the given arc length with the classical fourth-order Runge–Kutta
/// scheme at a fixed step.
pub fn shoot_rotational(
    alpha: f64,
    init: (f64, f64, f64),
    arclen: f64,
    step: f64,
) -> Result<ProfileCurve, GeomError> {
    assert!(step > 0.0 && arclen > 0.0);
    let (f0, z0, theta0) = init;
    if f0.abs() < 1e-8 && theta0.sin().abs() > 1e-6 {
        return Err(GeomError::AxisTransversal { s: 0.0 });
    }
    if f0 < -1e-12 {
        return Err(GeomError::InvalidSurface(
            "profile starts at negative distance from the axis".into(),
        ));
    }

    let steps = (arclen / step).ceil() as usize;
    let mut samples = Vec::with_capacity(steps + 1);
    let mut state = [f0, z0, theta0];
    let mut s = 0.0;
    let rhs = |y: [f64; 3], at: f64| -> Result<[f64; 3], GeomError> {
        let [f, z, theta] = y;
        let len2 = f * f + z * z;
        if alpha < 0.0 && len2 < 1e-12 {
            return Err(GeomError::OriginHit { s: at });
        }
        Ok([theta.cos(), theta.sin(), turning_rate(alpha, f, z, theta)])
    };

    let record =
        |samples: &mut Vec<ProfileSample>, s: f64, y: [f64; 3]| -> Result<(), GeomError> {
            let dtheta = turning_rate(alpha, y[0], y[1], y[2]);
            if dtheta.abs() * step > 0.5 {
                return Err(GeomError::StepInstability {
                    s,
                    magnitude: dtheta.abs() * step,
                });
            }
            samples.push(ProfileSample {
                s,
                f: y[0],
                z: y[1],
                theta: y[2],
                dtheta,
            });
            Ok(())
        };
    record(&mut samples, s, state)?;

    for i in 0..steps {
        let h = step.min(arclen - s);
        let k1 = rhs(state, s)?;
        let k2 = rhs(step_by(state, k1, h / 2.0), s + h / 2.0)?;
        let k3 = rhs(step_by(state, k2, h / 2.0), s + h / 2.0)?;
        let k4 = rhs(step_by(state, k3, h), s + h)?;
        for j in 0..3 {
            state[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        s += h;
        if state[0] < 1e-8 && state[2].sin().abs() > 1e-6 {
            return Err(GeomError::AxisTransversal { s });
        }
        record(&mut samples, s, state)?;
        if i + 1 == steps {
            break;
        }
    }
    ProfileCurve::new(samples)
}

fn step_by(y: [f64; 3], k: [f64; 3], h: f64) -> [f64; 3] {
    [y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]]
}
