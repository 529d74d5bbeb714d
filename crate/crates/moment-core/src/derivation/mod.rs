//! Differential-field machinery for the principal line-of-curvature frame.
//!
//! A [`Context`] is a small differential field: a set of admissible symbols,
//! two derivation tables (the frame derivatives `e1` and `e2`), and a set of
//! defined symbols that expand to closed expressions before any chain rule
//! is applied. Each proof section of the replay corresponds to one
//! [`ContextKind`].

mod context;

pub use context::{Context, ContextKind, DeriveError, Dir};
