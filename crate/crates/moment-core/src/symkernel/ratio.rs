use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::One;

use super::{Poly, SymError, VarId};

/// Quotient of two polynomials; the universal symbolic value type.
///
/// The denominator is never the zero polynomial. No canonical form is
/// promised: two values are semantically equal iff they cross multiply to
/// the same polynomial, which is what [`ratio_eq`] tests.
///
/// Internally the denominator is kept as a multiset of polynomial factors.
/// Arithmetic cancels factors against the numerator by exact trial division
/// only (no GCDs); this keeps the long derivation chains from stacking
/// denominators multiplicatively, and is invisible through the public API.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Ratio {
    num: Poly,
    /// Factor -> multiplicity. Factors are non-constant, integer-primitive
    /// polynomials with positive leading sign; empty means denominator one.
    den: BTreeMap<Poly, u32>,
}

impl Ratio {
    pub fn new(num: Poly, den: Poly) -> Result<Ratio, SymError> {
        if den.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        let mut r = Ratio {
            num,
            den: BTreeMap::new(),
        };
        r.push_den_factor(&den, 1);
        r.reduce();
        Ok(r)
    }

    pub fn from_poly(num: Poly) -> Ratio {
        Ratio {
            num,
            den: BTreeMap::new(),
        }
    }

    pub fn zero() -> Ratio {
        Ratio::from_poly(Poly::zero())
    }

    pub fn one() -> Ratio {
        Ratio::from_poly(Poly::one())
    }

    pub fn int(n: i64) -> Ratio {
        Ratio::from_poly(Poly::int(n))
    }

    pub fn constant(c: BigRational) -> Ratio {
        Ratio::from_poly(Poly::constant(c))
    }

    pub fn var(v: VarId) -> Ratio {
        Ratio::from_poly(Poly::var(v))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    /// The denominator, materialized as a polynomial.
    pub fn den(&self) -> Result<Poly, SymError> {
        let mut out = Poly::one();
        for (f, m) in &self.den {
            out = out.mul(&f.pow(*m)?)?;
        }
        Ok(out)
    }

    /// True iff the value is identically zero (numerator zero).
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn support(&self) -> BTreeSet<VarId> {
        let mut s = self.num.support();
        for f in self.den.keys() {
            s.extend(f.support());
        }
        s
    }

    /// Divide by `factor^mult`, folding the factor's rational content and
    /// sign into the numerator and recording the primitive part.
    fn push_den_factor(&mut self, factor: &Poly, mult: u32) {
        debug_assert!(!factor.is_zero());
        if mult == 0 {
            return;
        }
        let mut content = factor.content();
        if factor.leading_sign() < 0 {
            content = -content;
        }
        let primitive = factor.mul_scalar(&content.recip());
        if !primitive.as_constant().map_or(false, |c| c.is_one()) {
            *self.den.entry(primitive).or_insert(0) += mult;
        }
        let mut scale = BigRational::one();
        for _ in 0..mult {
            scale = &scale * &content.recip();
        }
        self.num = self.num.mul_scalar(&scale);
    }

    /// Cancel denominator factors that divide the numerator exactly.
    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let factors: Vec<Poly> = self.den.keys().cloned().collect();
        for f in factors {
            while let Some(mult) = self.den.get(&f).copied() {
                if mult == 0 {
                    self.den.remove(&f);
                    break;
                }
                match self.num.div_exact(&f) {
                    Some(q) => {
                        self.num = q;
                        if mult == 1 {
                            self.den.remove(&f);
                            break;
                        }
                        self.den.insert(f.clone(), mult - 1);
                    }
                    None => break,
                }
            }
        }
    }

    pub fn add(&self, other: &Ratio) -> Result<Ratio, SymError> {
        // numerators over the factor-wise least common denominator
        let mut lcm: BTreeMap<Poly, u32> = self.den.clone();
        for (f, m) in &other.den {
            let e = lcm.entry(f.clone()).or_insert(0);
            *e = (*e).max(*m);
        }
        let mut left = self.num.clone();
        let mut right = other.num.clone();
        for (f, m) in &lcm {
            let da = m - self.den.get(f).copied().unwrap_or(0);
            let db = m - other.den.get(f).copied().unwrap_or(0);
            if da > 0 {
                left = left.mul(&f.pow(da)?)?;
            }
            if db > 0 {
                right = right.mul(&f.pow(db)?)?;
            }
        }
        let mut out = Ratio {
            num: left.add(&right)?,
            den: lcm,
        };
        out.reduce();
        Ok(out)
    }

    pub fn sub(&self, other: &Ratio) -> Result<Ratio, SymError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Ratio {
        Ratio {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Ratio) -> Result<Ratio, SymError> {
        let mut den = self.den.clone();
        for (f, m) in &other.den {
            *den.entry(f.clone()).or_insert(0) += m;
        }
        let mut out = Ratio {
            num: self.num.mul(&other.num)?,
            den,
        };
        out.reduce();
        Ok(out)
    }

    pub fn div(&self, other: &Ratio) -> Result<Ratio, SymError> {
        if other.num.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        let mut num = self.num.clone();
        for (f, m) in &other.den {
            num = num.mul(&f.pow(*m)?)?;
        }
        let mut out = Ratio {
            num,
            den: self.den.clone(),
        };
        out.push_den_factor(&other.num, 1);
        out.reduce();
        Ok(out)
    }

    pub fn inv(&self) -> Result<Ratio, SymError> {
        Ratio::one().div(self)
    }

    pub fn pow(&self, n: i32) -> Result<Ratio, SymError> {
        let e = n.unsigned_abs();
        let mut r = Ratio {
            num: self.num.pow(e)?,
            den: if e == 0 {
                BTreeMap::new()
            } else {
                self.den.iter().map(|(f, m)| (f.clone(), m * e)).collect()
            },
        };
        r.reduce();
        if n < 0 {
            r.inv()
        } else {
            Ok(r)
        }
    }

    /// Formal partial derivative with the quotient rule.
    ///
    /// For `n / prod f_i^(e_i)` the result is
    /// `[n' prod f_i - n sum_i e_i f_i' prod_{j != i} f_j] / prod f_i^(e_i + 1)`,
    /// so each factor's multiplicity grows by one instead of the whole
    /// denominator squaring.
    pub fn partial_derivative(&self, v: VarId) -> Result<Ratio, SymError> {
        let factors: Vec<(&Poly, u32)> = self.den.iter().map(|(f, m)| (f, *m)).collect();
        let mut product_all = Poly::one();
        for (f, _) in &factors {
            product_all = product_all.mul(f)?;
        }
        let mut num = self.num.partial_derivative(v).mul(&product_all)?;
        for (i, (f, m)) in factors.iter().enumerate() {
            let df = f.partial_derivative(v);
            if df.is_zero() {
                continue;
            }
            let mut cof = Poly::constant(BigRational::from_integer((*m).into()));
            for (j, (g, _)) in factors.iter().enumerate() {
                if i != j {
                    cof = cof.mul(g)?;
                }
            }
            num = num.sub(&self.num.mul(&df)?.mul(&cof)?)?;
        }
        let mut out = Ratio {
            num,
            den: factors
                .into_iter()
                .map(|(f, m)| (f.clone(), m + 1))
                .collect(),
        };
        out.reduce();
        Ok(out)
    }

    /// Simultaneous substitution; unbound variables pass through.
    ///
    /// Errors if the substituted denominator becomes identically zero.
    pub fn substitute(&self, bindings: &BTreeMap<VarId, Ratio>) -> Result<Ratio, SymError> {
        let mut cache: BTreeMap<(VarId, u16), Ratio> = BTreeMap::new();
        let mut out = subst_poly(&self.num, bindings, &mut cache)?;
        for (f, m) in &self.den {
            let fs = subst_poly(f, bindings, &mut cache)?;
            if fs.is_zero() {
                return Err(SymError::ZeroDenominator);
            }
            out = out.div(&fs.pow(*m as i32)?)?;
        }
        Ok(out)
    }

    /// DSL text that parses back to an equal value.
    pub fn to_dsl(&self) -> String {
        if self.den.is_empty() {
            return self.num.to_dsl();
        }
        let den = self.den().expect("denominator fits in budget");
        format!("({})/({})", self.num.to_dsl(), den.to_dsl())
    }
}

fn subst_poly(
    p: &Poly,
    bindings: &BTreeMap<VarId, Ratio>,
    cache: &mut BTreeMap<(VarId, u16), Ratio>,
) -> Result<Ratio, SymError> {
    let mut acc = Ratio::zero();
    for (mono, coeff) in p.terms() {
        let mut term = Ratio::constant(coeff.clone());
        for v in VarId::ALL {
            let e = mono.exp(v);
            if e == 0 {
                continue;
            }
            let factor = match bindings.get(&v) {
                None => Ratio::from_poly(Poly::var(v).pow(e as u32)?),
                Some(r) => match cache.get(&(v, e)) {
                    Some(hit) => hit.clone(),
                    None => {
                        let pw = r.pow(e as i32)?;
                        cache.insert((v, e), pw.clone());
                        pw
                    }
                },
            };
            term = term.mul(&factor)?;
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// Semantic equality by cross multiplication: true iff
/// `x.num * y.den - y.num * x.den` is the zero polynomial.
///
/// Denominator factors common to both sides are skipped before
/// multiplying; that changes the work done, not the answer.
pub fn ratio_eq(x: &Ratio, y: &Ratio) -> Result<bool, SymError> {
    let mut xs = x.num.clone();
    let mut ys = y.num.clone();
    for (f, m) in &y.den {
        let shared = x.den.get(f).copied().unwrap_or(0).min(*m);
        if *m > shared {
            xs = xs.mul(&f.pow(m - shared)?)?;
        }
    }
    for (f, m) in &x.den {
        let shared = y.den.get(f).copied().unwrap_or(0).min(*m);
        if *m > shared {
            ys = ys.mul(&f.pow(m - shared)?)?;
        }
    }
    Ok(xs.sub(&ys)?.is_zero())
}

/// Test whether `x = lambda * y` for some non-zero `lambda` whose variables
/// all satisfy `free`. Returns the factor as a (numerator, denominator)
/// polynomial pair when proportional, `None` otherwise.
///
/// Both zero is proportional with factor 1; zero against non-zero is not.
pub fn proportional(
    x: &Ratio,
    y: &Ratio,
    free: impl Fn(VarId) -> bool + Copy,
) -> Result<Option<(Poly, Poly)>, SymError> {
    if x.is_zero() && y.is_zero() {
        return Ok(Some((Poly::one(), Poly::one())));
    }
    if x.is_zero() || y.is_zero() {
        return Ok(None);
    }
    let l = x.num.mul(&y.den()?)?;
    let r = y.num.mul(&x.den()?)?;
    // x/y = l/r; the quotient is free of the constrained variables iff the
    // coefficient vectors of l and r over the constrained monomials are
    // parallel.
    let lc = l.collect_by(|v| !free(v));
    let rc = r.collect_by(|v| !free(v));
    if lc.keys().ne(rc.keys()) {
        return Ok(None);
    }
    let (pivot, l0) = lc.iter().next().expect("non-zero poly has terms");
    let r0 = &rc[pivot];
    for (mono, li) in &lc {
        let ri = &rc[mono];
        if li.mul(r0)? != ri.mul(l0)? {
            return Ok(None);
        }
    }
    Ok(Some((l0.clone(), r0.clone())))
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_dsl())
    }
}
