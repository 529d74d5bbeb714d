//! Shipped theorem scripts, embedded from the `scripts/` data directory.

pub const T1_NONZERO: &str = include_str!("../../scripts/t1-nonzero.json");
pub const T1_ZERO: &str = include_str!("../../scripts/t1-zero.json");
pub const T22: &str = include_str!("../../scripts/t22.json");
pub const T3: &str = include_str!("../../scripts/t3.json");

pub const THEOREM_NAMES: [&str; 4] = ["t1-nonzero", "t1-zero", "t22", "t3"];

pub fn embedded(name: &str) -> Option<&'static str> {
    match name {
        "t1-nonzero" => Some(T1_NONZERO),
        "t1-zero" => Some(T1_ZERO),
        "t22" => Some(T22),
        "t3" => Some(T3),
        _ => None,
    }
}
