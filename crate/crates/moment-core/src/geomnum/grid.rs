use std::io::Write;

use super::error::GeomError;
use super::quadrature::position_length2;
use super::surface::{stationarity_residual, surface_frame, NumConfig, Patch, SurfaceSpec};

#[derive(Clone, Copy, Debug)]
pub struct GridRow {
    pub u: f64,
    pub v: f64,
    pub position: [f64; 3],
    pub mean: f64,
    pub gauss: f64,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct GridScan {
    pub rows: Vec<GridRow>,
    pub max_abs_residual: f64,
    pub min_abs_residual: f64,
    /// Nodes where the position vanishes (the residual is undefined there).
    pub skipped: usize,
}

/// Evaluate the stationarity residual on an `n x n` grid of cell centers
/// over the patch. Nodes at the origin are skipped and counted.
pub fn residual_grid(
    s: &SurfaceSpec,
    alpha: f64,
    n: usize,
    patch: &Patch,
    cfg: &NumConfig,
) -> Result<GridScan, GeomError> {
    let mut rows = Vec::with_capacity(n * n);
    let mut skipped = 0;
    let mut max_abs = 0.0_f64;
    let mut min_abs = f64::INFINITY;
    for i in 0..n {
        let u = patch.u0 + (patch.u1 - patch.u0) * (i as f64 + 0.5) / n as f64;
        for j in 0..n {
            let v = patch.v0 + (patch.v1 - patch.v0) * (j as f64 + 0.5) / n as f64;
            if position_length2(s, u, v) < 1e-18 {
                skipped += 1;
                continue;
            }
            let frame = surface_frame(s, u, v, cfg)?;
            let residual = stationarity_residual(s, alpha, u, v, cfg)?;
            rows.push(GridRow {
                u,
                v,
                position: frame.position,
                mean: frame.mean,
                gauss: frame.gauss,
                residual,
            });
            max_abs = max_abs.max(residual.abs());
            min_abs = min_abs.min(residual.abs());
        }
    }
    Ok(GridScan {
        rows,
        max_abs_residual: max_abs,
        min_abs_residual: if min_abs.is_finite() { min_abs } else { 0.0 },
        skipped,
    })
}

/// CSV with the header `u,v,x,y,z,H,K,residual`, floats at 17 significant
/// digits.
pub fn write_grid_csv(scan: &GridScan, mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "u,v,x,y,z,H,K,residual")?;
    for r in &scan.rows {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.u, r.v, r.position[0], r.position[1], r.position[2], r.mean, r.gauss, r.residual
        )?;
    }
    Ok(())
}
