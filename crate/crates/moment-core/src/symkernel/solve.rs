use super::{ratio_eq, Ratio, SymError};

/// Solve the linear system
///
/// ```text
/// p1*x + q1*y + r1 = 0
/// p2*x + q2*y + r2 = 0
/// ```
///
/// over the rational function field. Errors when the determinant
/// `p1*q2 - p2*q1` is identically zero.
pub fn solve_linear_2x2(
    p1: &Ratio,
    q1: &Ratio,
    r1: &Ratio,
    p2: &Ratio,
    q2: &Ratio,
    r2: &Ratio,
) -> Result<(Ratio, Ratio), SymError> {
    let det = p1.mul(q2)?.sub(&p2.mul(q1)?)?;
    if det.is_zero() {
        return Err(SymError::SingularSystem);
    }
    let x = q1.mul(r2)?.sub(&q2.mul(r1)?)?.div(&det)?;
    let y = p2.mul(r1)?.sub(&p1.mul(r2)?)?.div(&det)?;
    debug_assert!({
        let back = p1.mul(&x)?.add(&q1.mul(&y)?)?.add(r1)?;
        ratio_eq(&back, &Ratio::zero())?
    });
    Ok((x, y))
}
