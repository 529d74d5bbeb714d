use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::budget::check_terms;
use super::{SymError, VarId};

/// Number of symbols in the fixed variable universe.
pub const NUM_VARS: usize = 14;

/// Dense exponent vector over the variable universe.
///
/// The universe is tiny, so a fixed-width array beats any sparse encoding;
/// the derived lexicographic order gives the canonical term order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Mono {
    exps: [u16; NUM_VARS],
}

impl Mono {
    pub fn one() -> Mono {
        Mono {
            exps: [0; NUM_VARS],
        }
    }

    pub fn var(v: VarId) -> Mono {
        let mut m = Mono::one();
        m.exps[v.index()] = 1;
        m
    }

    pub fn exp(&self, v: VarId) -> u16 {
        self.exps[v.index()]
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn try_mul(&self, other: &Mono) -> Result<Mono, SymError> {
        let mut exps = [0u16; NUM_VARS];
        for i in 0..NUM_VARS {
            exps[i] = self.exps[i]
                .checked_add(other.exps[i])
                .ok_or(SymError::ExponentOverflow)?;
        }
        Ok(Mono { exps })
    }

    /// Split into the part supported on `keep` and the remainder.
    pub fn split(&self, keep: impl Fn(VarId) -> bool) -> (Mono, Mono) {
        let mut kept = Mono::one();
        let mut rest = Mono::one();
        for v in VarId::ALL {
            let e = self.exps[v.index()];
            if keep(v) {
                kept.exps[v.index()] = e;
            } else {
                rest.exps[v.index()] = e;
            }
        }
        (kept, rest)
    }

    fn vars(&self) -> impl Iterator<Item = (VarId, u16)> + '_ {
        VarId::ALL
            .into_iter()
            .filter_map(|v| (self.exps[v.index()] > 0).then(|| (v, self.exps[v.index()])))
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Invariant: no stored coefficient is zero; the zero polynomial has an
/// empty term map. Equality is structural, which by the invariant is
/// semantic equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Default, Debug)]
pub struct Poly {
    terms: BTreeMap<Mono, BigRational>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono::one(), c);
        }
        Poly { terms }
    }

    pub fn int(n: i64) -> Poly {
        Poly::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn var(v: VarId) -> Poly {
        let mut terms = BTreeMap::new();
        terms.insert(Mono::var(v), BigRational::one());
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigRational)> {
        self.terms.iter()
    }

    /// The constant term, if the polynomial is a constant (or zero).
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn support(&self) -> BTreeSet<VarId> {
        let mut s = BTreeSet::new();
        for m in self.terms.keys() {
            for (v, _) in m.vars() {
                s.insert(v);
            }
        }
        s
    }

    fn insert_term(&mut self, mono: Mono, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Result<Poly, SymError> {
        check_terms(self.terms.len() + other.terms.len())?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly, SymError> {
        check_terms(self.terms.len() + other.terms.len())?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(*m, -c.clone());
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly, SymError> {
        let mut out = Poly::zero();
        let mut since_check = 0usize;
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.insert_term(ma.try_mul(mb)?, ca * cb);
                since_check += 1;
                if since_check >= 4096 {
                    check_terms(out.terms.len())?;
                    since_check = 0;
                }
            }
        }
        check_terms(out.terms.len())?;
        Ok(out)
    }

    pub fn mul_scalar(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (*m, k * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Result<Poly, SymError> {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Formal partial derivative; never grows the term count.
    pub fn partial_derivative(&self, v: VarId) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let mut dm = *m;
            dm.exps[v.index()] = e - 1;
            out.insert_term(dm, c * BigRational::from_integer(BigInt::from(e)));
        }
        out
    }

    pub fn degree_in(&self, v: VarId) -> u16 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    /// Coefficients `c_0 .. c_d` of the polynomial viewed in `v`.
    ///
    /// The zero polynomial yields an empty sequence; otherwise the last
    /// coefficient is non-zero and `sum c_i v^i` reconstructs the input.
    pub fn collect_coefficients(&self, v: VarId) -> Vec<Poly> {
        if self.is_zero() {
            return Vec::new();
        }
        let d = self.degree_in(v) as usize;
        let mut out = vec![Poly::zero(); d + 1];
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            let mut stripped = *m;
            stripped.exps[v.index()] = 0;
            out[e].insert_term(stripped, c.clone());
        }
        out
    }

    /// Group terms by their monomial part in the variables selected by
    /// `keep`; values are the cofactor polynomials in the other variables.
    pub fn collect_by(&self, keep: impl Fn(VarId) -> bool + Copy) -> BTreeMap<Mono, Poly> {
        let mut out: BTreeMap<Mono, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (kept, rest) = m.split(keep);
            out.entry(kept).or_default().insert_term(rest, c.clone());
        }
        out
    }

    /// Greatest common divisor of the integer parts of all coefficients,
    /// divided by the lcm of their denominators. Zero for the zero
    /// polynomial. Used only to normalize printed output.
    pub fn content(&self) -> BigRational {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(&c.numer().abs());
            den_lcm = den_lcm.lcm(c.denom());
        }
        if num_gcd.is_zero() {
            BigRational::zero()
        } else {
            BigRational::new(num_gcd, den_lcm)
        }
    }

    /// Sign of the leading (canonical-order-first) coefficient: -1, 0 or 1.
    pub fn leading_sign(&self) -> i32 {
        match self.terms.iter().next_back() {
            Some((_, c)) if c.is_positive() => 1,
            Some(_) => -1,
            None => 0,
        }
    }

    /// Exact division: `Some(q)` with `self = q * divisor`, or `None` when
    /// the division leaves a remainder. Plain long division under the
    /// canonical term order; not a GCD.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let (lead_m, lead_c) = divisor.terms.iter().next_back().expect("non-zero");
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while !rem.is_zero() {
            let (rm, rc) = rem.terms.iter().next_back().expect("non-zero");
            let mut qm = [0u16; NUM_VARS];
            for i in 0..NUM_VARS {
                qm[i] = rm.exps[i].checked_sub(lead_m.exps[i])?;
            }
            let qm = Mono { exps: qm };
            let qc = rc / lead_c;
            quot.insert_term(qm, qc.clone());
            // rem -= (qc * qm) * divisor
            for (dm, dc) in &divisor.terms {
                let prod = dm.try_mul(&qm).ok()?;
                rem.insert_term(prod, -(&qc * dc));
            }
        }
        Some(quot)
    }

    /// DSL text that parses back to an equal polynomial.
    pub fn to_dsl(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        // Highest total degree first, then reverse lexicographic.
        let mut terms: Vec<(&Mono, &BigRational)> = self.terms.iter().collect();
        terms.sort_by(|(ma, _), (mb, _)| {
            mb.total_degree()
                .cmp(&ma.total_degree())
                .then_with(|| mb.cmp(ma))
        });
        let mut out = String::new();
        for (i, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            // A leading "-k^2" would re-parse as (-k)^2 under the DSL
            // grammar, so a negated head term always keeps its coefficient.
            if !abs.is_one() || m.is_one() || (i == 0 && neg) {
                factors.push(rational_dsl(&abs));
            }
            for (v, e) in m.vars() {
                if e == 1 {
                    factors.push(v.name().to_string());
                } else {
                    factors.push(format!("{}^{}", v.name(), e));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

fn rational_dsl(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_dsl())
    }
}
