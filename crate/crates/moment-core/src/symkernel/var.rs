use std::fmt;

use super::SymError;

/// Canonical names of the variable universe, in index order.
pub(crate) const VAR_NAMES: [&str; 14] = [
    "k", "k2", "K", "c", "a", "w", "g", "m", "p", "q", "k11", "k12", "k22", "nphi",
];

/// One symbol of the fixed fourteen-variable universe.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VarId(u8);

impl VarId {
    /// First principal curvature.
    pub const KAPPA1: VarId = VarId(0);
    /// Second principal curvature.
    pub const KAPPA2: VarId = VarId(1);
    /// Gauss curvature.
    pub const GAUSS: VarId = VarId(2);
    /// Constant curvature parameter (a constant principal or mean curvature).
    pub const CONST: VarId = VarId(3);
    /// Energy exponent.
    pub const ALPHA: VarId = VarId(4);
    /// Squared distance of the surface point to the origin.
    pub const PHI_SQ: VarId = VarId(5);
    /// Coefficient of e1 in the tangential part of the position.
    pub const GAMMA: VarId = VarId(6);
    /// Coefficient of e2 in the tangential part of the position.
    pub const MU: VarId = VarId(7);
    /// e1-derivative of the first principal curvature.
    pub const DK1: VarId = VarId(8);
    /// e2-derivative of the first principal curvature.
    pub const DK2: VarId = VarId(9);
    /// e1 e1 second derivative.
    pub const DK11: VarId = VarId(10);
    /// Mixed second derivative (a single symbol for both orders).
    pub const DK12: VarId = VarId(11);
    /// e2 e2 second derivative.
    pub const DK22: VarId = VarId(12);
    /// Normal component of the position vector.
    pub const N_PHI: VarId = VarId(13);

    pub const ALL: [VarId; 14] = [
        VarId(0),
        VarId(1),
        VarId(2),
        VarId(3),
        VarId(4),
        VarId(5),
        VarId(6),
        VarId(7),
        VarId(8),
        VarId(9),
        VarId(10),
        VarId(11),
        VarId(12),
        VarId(13),
    ];

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn name(self) -> &'static str {
        VAR_NAMES[self.index()]
    }

    pub fn from_index(i: usize) -> Option<VarId> {
        (i < VAR_NAMES.len()).then_some(VarId(i as u8))
    }

    pub fn from_name(name: &str) -> Option<VarId> {
        VAR_NAMES
            .iter()
            .position(|n| *n == name)
            .map(|i| VarId(i as u8))
    }

    /// Like [`VarId::from_name`] but with a kernel error for unknown names.
    pub fn resolve(name: &str) -> Result<VarId, SymError> {
        Self::from_name(name).ok_or_else(|| SymError::UnknownName(name.to_string()))
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for v in VarId::ALL {
            assert_eq!(VarId::from_name(v.name()), Some(v));
        }
        assert_eq!(VarId::from_name("x"), None);
        assert_eq!(VarId::from_name("k1"), None);
    }

    #[test]
    fn resolve_reports_unknown() {
        assert_eq!(
            VarId::resolve("zz"),
            Err(SymError::UnknownName("zz".into()))
        );
    }
}
