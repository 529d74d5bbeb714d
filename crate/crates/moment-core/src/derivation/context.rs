use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use thiserror::Error;

use crate::symkernel::{parse_ratio, Ratio, SymError, VarId};

/// Derivation direction: the two principal frame fields.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Dir {
    E1,
    E2,
}

impl Dir {
    fn index(self) -> usize {
        match self {
            Dir::E1 => 0,
            Dir::E2 => 1,
        }
    }

    pub fn from_number(n: u8) -> Option<Dir> {
        match n {
            1 => Some(Dir::E1),
            2 => Some(Dir::E2),
            _ => None,
        }
    }
}

impl std::fmt::Display for Dir {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Dir::E1 => f.write_str("e1"),
            Dir::E2 => f.write_str("e2"),
        }
    }
}

/// The proof-section flavours of the differential field.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum ContextKind {
    /// Constant non-zero Gauss curvature; the second derivatives of the
    /// principal curvature stay free symbols.
    KNonzeroOpen,
    /// Same field with the second derivatives bound to their closed
    /// expressions in first derivatives.
    KNonzeroClosed,
    /// Flat case: the second principal curvature vanishes.
    Flat,
    /// Constant second principal curvature.
    Cpc,
    /// Constant mean curvature; works with the raw position data instead of
    /// the line-of-curvature reductions.
    Cmc,
}

impl ContextKind {
    pub const ALL: [ContextKind; 5] = [
        ContextKind::KNonzeroOpen,
        ContextKind::KNonzeroClosed,
        ContextKind::Flat,
        ContextKind::Cpc,
        ContextKind::Cmc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ContextKind::KNonzeroOpen => "K_NONZERO_OPEN",
            ContextKind::KNonzeroClosed => "K_NONZERO_CLOSED",
            ContextKind::Flat => "FLAT",
            ContextKind::Cpc => "CPC",
            ContextKind::Cmc => "CMC",
        }
    }

    pub fn from_name(name: &str) -> Option<ContextKind> {
        ContextKind::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl std::fmt::Display for ContextKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeriveError {
    #[error("variable `{var}` is not part of the {context} context")]
    UnknownVar { var: String, context: String },

    #[error("no derivation rule for `{var}` along {dir} in the {context} context")]
    NoRule {
        var: String,
        dir: String,
        context: String,
    },

    #[error("the principal curvatures coincide identically in this context")]
    Umbilic,

    #[error("{op} is not defined in the CMC context")]
    CmcUnsupported { op: &'static str },

    #[error(transparent)]
    Sym(#[from] SymError),
}

// Closed expressions shared by the K != 0 contexts: the tangential
// coefficients solved from the stationarity identities, and the three
// second-derivative closures in first derivatives.
const GAMMA_KNZ: &str = "(w*(K-k^2)/(2*k*K+(a+2)*k^3))*p";
const MU_KNZ: &str = "(w*(K-k^2)/(2*k^3+(a+2)*k*K))*q";
const D7_E11: &str = "((a+4)*k*(k^2-3*K)/((k^2-K)*((a+2)*k^2+2*K)))*p^2 \
                      + (((a+2)*k^3+2*k*K)/((k^2-K)*(2*k^2+(a+2)*K)))*q^2 \
                      - (k*((a+2)*k^2+2*K)*(a+w*(k^2+K)))/(a*w*(k^2-K))";
const D7_E12: &str = "(k*(4/(2*k^2+(a+2)*K) + 3/(K-k^2)) - 4*K/(k*((a+2)*k^2+2*K)) + 2/k)*p*q";
const D7_E22: &str = "(K*(2*k^3+(a+2)*k*K)/((k^2-K)*((a+2)*k^4+2*k^2*K)))*p^2 \
                      - ((-4*k^4+(a+12)*k^2*K+a*K^2)/((k^2-K)*(2*k^3+(a+2)*k*K)))*q^2 \
                      - ((2*k^2+(a+2)*K)*(w*K*(k^2+K)+a*k^2))/(a*w*k*(k^2-K))";
const MU_FLAT: &str = "-(w/(2*k))*q";
const MU_CPC: &str = "-(w/(2*k+(a+2)*c))*q";

/// A proof-section differential field.
///
/// Immutable after construction; all operations are pure.
pub struct Context {
    kind: ContextKind,
    vars: BTreeSet<VarId>,
    defs: BTreeMap<VarId, Ratio>,
    rules: [BTreeMap<VarId, Ratio>; 2],
}

fn vars(names: &[&str]) -> BTreeSet<VarId> {
    names
        .iter()
        .map(|n| VarId::from_name(n).expect("table var"))
        .collect()
}

fn table(entries: &[(&str, &str)]) -> BTreeMap<VarId, Ratio> {
    entries
        .iter()
        .map(|(v, expr)| {
            (
                VarId::from_name(v).expect("table var"),
                parse_ratio(expr).expect("table expression"),
            )
        })
        .collect()
}

impl Context {
    /// Build the derivation tables for one proof section.
    pub fn new(kind: ContextKind) -> Context {
        let constants: &[(&str, &str)] = &[("K", "0"), ("c", "0"), ("a", "0")];
        let (vars, defs, d1, d2): (
            BTreeSet<VarId>,
            BTreeMap<VarId, Ratio>,
            BTreeMap<VarId, Ratio>,
            BTreeMap<VarId, Ratio>,
        ) = match kind {
            ContextKind::KNonzeroOpen | ContextKind::KNonzeroClosed => {
                let mut defs = table(&[("k2", "K/k"), ("g", GAMMA_KNZ), ("m", MU_KNZ)]);
                if kind == ContextKind::KNonzeroClosed {
                    defs.extend(table(&[("k11", D7_E11), ("k12", D7_E12), ("k22", D7_E22)]));
                }
                let mut d1 = table(constants);
                d1.extend(table(&[("k", "p"), ("w", "2*g"), ("p", "k11"), ("q", "k12")]));
                let mut d2 = table(constants);
                d2.extend(table(&[("k", "q"), ("w", "2*m"), ("p", "k12"), ("q", "k22")]));
                (
                    vars(&[
                        "k", "k2", "K", "c", "a", "w", "g", "m", "p", "q", "k11", "k12", "k22",
                    ]),
                    defs,
                    d1,
                    d2,
                )
            }
            ContextKind::Flat => {
                let defs = table(&[("k2", "0"), ("K", "0"), ("m", MU_FLAT)]);
                let mut d1 = table(constants);
                d1.extend(table(&[("k", "p"), ("w", "2*g")]));
                let mut d2 = table(constants);
                d2.extend(table(&[("k", "q"), ("w", "2*m"), ("q", "k22")]));
                (
                    vars(&["k", "k2", "K", "c", "a", "w", "g", "m", "p", "q", "k22"]),
                    defs,
                    d1,
                    d2,
                )
            }
            ContextKind::Cpc => {
                let defs = table(&[("k2", "c"), ("K", "c*k"), ("m", MU_CPC)]);
                let d1 = table(constants);
                let mut d2 = table(constants);
                d2.extend(table(&[("k", "q"), ("w", "2*m"), ("q", "k22")]));
                (
                    vars(&["k", "k2", "K", "c", "a", "w", "m", "q", "k22"]),
                    defs,
                    d1,
                    d2,
                )
            }
            ContextKind::Cmc => {
                let mut d1 = table(constants);
                d1.extend(table(&[("w", "2*g"), ("nphi", "-(k*g)")]));
                let mut d2 = table(constants);
                d2.extend(table(&[("w", "2*m"), ("nphi", "-(k2*m)")]));
                (
                    vars(&["k", "k2", "c", "a", "w", "g", "m", "nphi"]),
                    BTreeMap::new(),
                    d1,
                    d2,
                )
            }
        };
        // Defined symbols must expand in one pass.
        debug_assert!(defs
            .values()
            .all(|img| img.support().iter().all(|v| !defs.contains_key(v))));
        Context {
            kind,
            vars,
            defs,
            rules: [d1, d2],
        }
    }

    /// Shared immutable instance per kind.
    pub fn shared(kind: ContextKind) -> &'static Context {
        static CACHE: OnceLock<Vec<Context>> = OnceLock::new();
        let all = CACHE.get_or_init(|| ContextKind::ALL.into_iter().map(Context::new).collect());
        &all[ContextKind::ALL
            .into_iter()
            .position(|k| k == kind)
            .expect("kind listed")]
    }

    pub fn kind(&self) -> ContextKind {
        self.kind
    }

    /// Symbols that may appear in expressions handled by this context.
    pub fn vars(&self) -> &BTreeSet<VarId> {
        &self.vars
    }

    pub fn is_defined(&self, v: VarId) -> bool {
        self.defs.contains_key(&v)
    }

    fn check_support(&self, x: &Ratio) -> Result<(), DeriveError> {
        for v in x.support() {
            if !self.vars.contains(&v) && !self.defs.contains_key(&v) {
                return Err(DeriveError::UnknownVar {
                    var: v.name().to_string(),
                    context: self.kind.name().to_string(),
                });
            }
        }
        Ok(())
    }

    /// Substitute every defined symbol by its closed expression.
    pub fn expand(&self, x: &Ratio) -> Result<Ratio, DeriveError> {
        self.check_support(x)?;
        if x.support().iter().all(|v| !self.defs.contains_key(v)) {
            return Ok(x.clone());
        }
        Ok(x.substitute(&self.defs)?)
    }

    /// Apply the derivation `D_dir` by the chain rule.
    ///
    /// Defined symbols are expanded before and after differentiation, so an
    /// input may freely mention them and the result never contains one.
    pub fn derive(&self, dir: Dir, x: &Ratio) -> Result<Ratio, DeriveError> {
        let expanded = self.expand(x)?;
        let rules = &self.rules[dir.index()];
        let mut acc = Ratio::zero();
        for v in expanded.support() {
            let dxdv = expanded.partial_derivative(v)?;
            if dxdv.is_zero() {
                continue;
            }
            let image = rules.get(&v).ok_or_else(|| DeriveError::NoRule {
                var: v.name().to_string(),
                dir: dir.to_string(),
                context: self.kind.name().to_string(),
            })?;
            acc = acc.add(&dxdv.mul(image)?)?;
        }
        self.expand(&acc)
    }

    fn curvature_difference(&self) -> Result<Ratio, DeriveError> {
        if self.kind == ContextKind::Cmc {
            return Err(DeriveError::CmcUnsupported {
                op: "codazzi connection",
            });
        }
        let k = self.expand(&Ratio::var(VarId::KAPPA1))?;
        let k2 = self.expand(&Ratio::var(VarId::KAPPA2))?;
        let diff = k.sub(&k2)?;
        if diff.is_zero() {
            return Err(DeriveError::Umbilic);
        }
        Ok(diff)
    }

    /// Connection-form values `(omega(e1), omega(e2))` from the Codazzi
    /// equations, specialized by the context's second principal curvature.
    pub fn codazzi_omegas(&self) -> Result<(Ratio, Ratio), DeriveError> {
        let diff = self.curvature_difference()?;
        let e2k1 = self.derive(Dir::E2, &Ratio::var(VarId::KAPPA1))?;
        let e1k2 = self.derive(Dir::E1, &Ratio::var(VarId::KAPPA2))?;
        Ok((e2k1.div(&diff)?, e1k2.div(&diff)?))
    }

    /// Residual of the intrinsic Gauss-curvature identity in this context:
    ///
    /// ```text
    /// K - [ -e1( e1(k2)/(k - k2) ) + e2( e2(k)/(k - k2) )
    ///       - (e1(k2)^2 + e2(k)^2)/(k - k2)^2 ]
    /// ```
    ///
    /// computed entirely through the context's derivation tables, with the
    /// context's defined symbols substituted.
    pub fn gauss_residual(&self) -> Result<Ratio, DeriveError> {
        let diff = self.curvature_difference()?;
        let e1k2 = self.derive(Dir::E1, &Ratio::var(VarId::KAPPA2))?;
        let e2k1 = self.derive(Dir::E2, &Ratio::var(VarId::KAPPA1))?;
        let t1 = self.derive(Dir::E1, &e1k2.div(&diff)?)?;
        let t2 = self.derive(Dir::E2, &e2k1.div(&diff)?)?;
        let sq = e1k2
            .pow(2)?
            .add(&e2k1.pow(2)?)?
            .div(&diff.pow(2)?)?;
        let gauss = self.expand(&Ratio::var(VarId::GAUSS))?;
        Ok(gauss.sub(&t1.neg().add(&t2)?.sub(&sq)?)?)
    }

    /// `e2(e1(k)) - e1(e2(k))`: the mixed-derivative discrepancy of the
    /// replayed calculus, which treats both orders as one symbol. Recorded
    /// as an informational value, not asserted.
    pub fn mixed_second_derivative_gap(&self) -> Result<Ratio, DeriveError> {
        let k = Ratio::var(VarId::KAPPA1);
        let d12 = self.derive(Dir::E2, &self.derive(Dir::E1, &k)?)?;
        let d21 = self.derive(Dir::E1, &self.derive(Dir::E2, &k)?)?;
        Ok(d12.sub(&d21)?)
    }
}
