//! Truncated Laurent series in `1/T` with a certified precision floor.
//!
//! A [`LaurentSeries`] stores the coefficients of `T^hi, T^(hi-1), ..., T^lo`.
//! Every stored coefficient is exactly right; below `lo` nothing is known
//! unless the series is `exact`, in which case everything below `lo` is zero.
//! Each operation computes the worst-case floor of its output, so the
//! certified window never overstates what is known.

use std::fmt;

use thiserror::Error;

use crate::ffield::{Field, FieldElement};
use crate::polyring::{mul_coeffs, PolyError, RationalFunc, TPoly, XPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("precision exhausted: coefficients down to T^{needed} are required but only T^{floor} is certified")]
    PrecisionExhausted { needed: i64, floor: i64 },
    #[error("inverse of a series whose leading coefficient is not certified")]
    ZeroInverse,
    #[error("exponent {0} is not a power of the characteristic")]
    NotPowerOfP(u64),
    #[error("an exact non-monomial series needs an explicit output precision")]
    NeedsPrecision,
    #[error("Hensel condition fails at the seed: residual exponent {residual} >= 2 * derivative exponent {derivative}")]
    HenselFailed { residual: i64, derivative: i64 },
    #[error("Newton iteration stalls at residual exponent {0}: no root in F_q((1/T)) near the seed")]
    NewtonStalled(i64),
    #[error("the derivative vanishes at working precision")]
    DerivativeVanishes,
    #[error("Newton iteration did not certify {0} coefficients")]
    NoConvergence(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    field: Field,
    /// Certified floor: exponents `>= lo` are known.
    lo: i64,
    /// Coefficients of `T^hi, ..., T^lo`, with `hi = lo + len - 1`.
    coeffs: Vec<FieldElement>,
    exact: bool,
}

impl LaurentSeries {
    /// Builds a series with leading exponent `hi` from descending coefficients.
    pub fn new(field: &Field, hi: i64, coeffs: Vec<FieldElement>, exact: bool) -> Self {
        let lo = hi - coeffs.len() as i64 + 1;
        Self::from_parts(field.clone(), lo, coeffs, exact)
    }

    fn from_parts(field: Field, lo: i64, mut coeffs: Vec<FieldElement>, exact: bool) -> Self {
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            coeffs.drain(..lead);
        }
        let mut lo = lo;
        if exact {
            while coeffs.last().is_some_and(|c| c.is_zero()) {
                coeffs.pop();
                lo += 1;
            }
            if coeffs.is_empty() {
                lo = 0;
            }
        }
        LaurentSeries { field, lo, coeffs, exact }
    }

    pub fn zero(field: &Field) -> Self {
        LaurentSeries { field: field.clone(), lo: 0, coeffs: Vec::new(), exact: true }
    }

    /// Known to vanish at every exponent `>= floor`, unknown below.
    pub fn zero_to(field: &Field, floor: i64) -> Self {
        LaurentSeries { field: field.clone(), lo: floor, coeffs: Vec::new(), exact: false }
    }

    pub fn monomial(field: &Field, c: FieldElement, e: i64) -> Self {
        Self::new(field, e, vec![c], true)
    }

    pub fn from_poly(p: &TPoly) -> Self {
        let f = p.field();
        match p.degree() {
            None => Self::zero(f),
            Some(d) => Self::new(f, d as i64, p.coeffs().iter().rev().copied().collect(), true),
        }
    }

    /// Long-division expansion of `f` with `terms` coefficients from the
    /// leading one; exact when the division terminates.
    pub fn from_rational(f: &RationalFunc, terms: usize) -> Self {
        let field = f.field();
        let (num, den) = (f.num(), f.den());
        let Some(dn) = num.degree() else {
            return Self::zero(field);
        };
        let dd = den.degree().expect("nonzero denominator");
        let hi = dn as i64 - dd as i64;
        let den_desc: Vec<FieldElement> = den.coeffs().iter().rev().copied().collect();
        let lc_inv = field.inv(den_desc[0]).expect("nonzero");
        let mut rem: Vec<FieldElement> = num.coeffs().iter().rev().copied().collect();
        rem.resize(rem.len().max(terms + dd), field.zero());
        let mut out = Vec::with_capacity(terms);
        for i in 0..terms {
            let c = field.mul(rem[i], lc_inv);
            out.push(c);
            if !c.is_zero() {
                for (j, &d) in den_desc.iter().enumerate() {
                    rem[i + j] = field.sub(rem[i + j], field.mul(c, d));
                }
            }
        }
        let exact = rem[terms.min(rem.len())..].iter().all(|c| c.is_zero());
        Self::new(field, hi, out, exact)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Leading exponent; `None` when no nonzero coefficient is stored.
    pub fn hi(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then(|| self.lo + self.coeffs.len() as i64 - 1)
    }

    /// Certified floor (for exact series: the last stored exponent).
    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Descending coefficients from `hi` to `lo`.
    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Number of stored (certified) coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.exact && self.coeffs.is_empty()
    }

    /// Coefficient of `T^e`, or `None` if it is below the certified floor.
    pub fn coeff(&self, e: i64) -> Option<FieldElement> {
        match self.hi() {
            Some(hi) if e > hi => Some(self.field.zero()),
            Some(hi) if e >= self.lo => Some(self.coeffs[(hi - e) as usize]),
            None if e >= self.lo || self.exact => Some(self.field.zero()),
            _ if self.exact => Some(self.field.zero()),
            _ => None,
        }
    }

    /// Upper bound on the exponent of the leading term (`None` for exact zero).
    fn top(&self) -> Option<i64> {
        match self.hi() {
            Some(h) => Some(h),
            None if self.exact => None,
            None => Some(self.lo - 1),
        }
    }

    /// Forgets everything below `floor`.
    pub fn truncate(&self, floor: i64) -> Self {
        if !self.exact && floor <= self.lo {
            return self.clone();
        }
        let Some(hi) = self.hi() else {
            return Self::zero_to(&self.field, if self.exact { floor } else { floor.max(self.lo) });
        };
        let floor = if self.exact { floor } else { floor.max(self.lo) };
        if floor > hi {
            return Self::zero_to(&self.field, floor);
        }
        let keep = (hi - floor + 1) as usize;
        let mut coeffs: Vec<FieldElement> = self.coeffs.iter().take(keep).copied().collect();
        coeffs.resize(keep, self.field.zero());
        Self::from_parts(self.field.clone(), floor, coeffs, false)
    }

    /// Keeps `n` coefficients counted from the leading exponent.
    pub fn truncate_rel(&self, n: usize) -> Self {
        match self.hi() {
            Some(hi) => self.truncate(hi - n as i64 + 1),
            None => self.clone(),
        }
    }

    /// Reinterprets the stored coefficients as an exact Laurent polynomial.
    pub fn to_exact(&self) -> Self {
        Self::from_parts(self.field.clone(), self.lo, self.coeffs.clone(), true)
    }

    /// Whether both series agree on every exponent known to both.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let floor = match (self.exact, other.exact) {
            (true, true) => return self == other,
            (true, false) => other.lo,
            (false, true) => self.lo,
            (false, false) => self.lo.max(other.lo),
        };
        let top = self.hi().unwrap_or(floor).max(other.hi().unwrap_or(floor));
        (floor..=top).all(|e| self.coeff(e) == other.coeff(e))
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        LaurentSeries {
            field: f.clone(),
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
            exact: self.exact,
        }
    }

    pub fn scale(&self, c: FieldElement) -> Self {
        let f = &self.field;
        Self::from_parts(f.clone(), self.lo, self.coeffs.iter().map(|&x| f.mul(x, c)).collect(), self.exact)
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &self.field;
        assert!(*f == other.field, "series over different fields");
        let exact = self.exact && other.exact;
        let floor = match (self.exact, other.exact) {
            (true, true) => self.lo.min(other.lo),
            (true, false) => other.lo,
            (false, true) => self.lo,
            (false, false) => self.lo.max(other.lo),
        };
        let top = match (self.hi(), other.hi()) {
            (None, None) => return Self::from_parts(f.clone(), floor, Vec::new(), exact),
            (a, b) => a.unwrap_or(i64::MIN).max(b.unwrap_or(i64::MIN)),
        };
        if top < floor {
            return Self::zero_to(f, floor);
        }
        let coeffs = (floor..=top)
            .rev()
            .map(|e| f.add(self.coeff(e).unwrap_or_default(), other.coeff(e).unwrap_or_default()))
            .collect();
        Self::from_parts(f.clone(), floor, coeffs, exact)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        assert!(*f == other.field, "series over different fields");
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero(f);
        }
        let (ta, tb) = (self.top().unwrap(), other.top().unwrap());
        let mut floor: Option<i64> = None;
        if !other.exact {
            floor = Some(ta + other.lo);
        }
        if !self.exact {
            floor = Some(floor.map_or(tb + self.lo, |x: i64| x.max(tb + self.lo)));
        }
        let (Some(ha), Some(hb)) = (self.hi(), other.hi()) else {
            return Self::zero_to(f, floor.expect("an empty operand here is inexact"));
        };
        let (a, b) = match floor {
            Some(fl) => (self.truncate_exact_part(fl - hb), other.truncate_exact_part(fl - ha)),
            None => (self.coeffs.as_slice(), other.coeffs.as_slice()),
        };
        let prod = mul_coeffs(f, a, b);
        let hi = ha + hb;
        match floor {
            None => Self::new(f, hi, prod, true),
            Some(fl) => {
                if fl > hi {
                    return Self::zero_to(f, fl);
                }
                let keep = (hi - fl + 1) as usize;
                let mut coeffs = prod;
                coeffs.resize(keep.max(coeffs.len()), f.zero());
                coeffs.truncate(keep);
                Self::from_parts(f.clone(), fl, coeffs, false)
            }
        }
    }

    /// Stored coefficients at exponents `>= floor`.
    fn truncate_exact_part(&self, floor: i64) -> &[FieldElement] {
        match self.hi() {
            Some(hi) if floor <= hi => {
                let keep = ((hi - floor + 1) as usize).min(self.coeffs.len());
                &self.coeffs[..keep]
            }
            _ => &[],
        }
    }

    pub fn mul_poly(&self, p: &TPoly) -> Self {
        self.mul(&Self::from_poly(p))
    }

    /// Inverse with as many certified coefficients as `self` stores.
    pub fn inv(&self) -> Result<Self, SeriesError> {
        if self.coeffs.is_empty() {
            return Err(SeriesError::ZeroInverse);
        }
        if self.exact && self.coeffs.len() == 1 {
            let f = &self.field;
            let c = f.inv(self.coeffs[0]).expect("nonzero");
            return Ok(Self::monomial(f, c, -self.hi().unwrap()));
        }
        if self.exact {
            return Err(SeriesError::NeedsPrecision);
        }
        Ok(self.inv_newton(self.coeffs.len()))
    }

    /// Inverse with `n` certified coefficients (at most the stored count
    /// for inexact input).
    pub fn inv_to(&self, n: usize) -> Result<Self, SeriesError> {
        if self.coeffs.is_empty() {
            return Err(SeriesError::ZeroInverse);
        }
        let n = if self.exact { n } else { n.min(self.coeffs.len()) };
        Ok(self.inv_newton(n))
    }

    fn inv_newton(&self, n: usize) -> Self {
        let f = &self.field;
        let s = &self.coeffs;
        let mut g = vec![f.inv(s[0]).expect("nonzero leading")];
        let mut k = 1;
        while k < n {
            let k2 = (2 * k).min(n);
            let mut e = mul_coeffs(f, &s[..k2.min(s.len())], &g);
            e.truncate(k2);
            // g <- g * (2 - e)
            let mut corr: Vec<FieldElement> = e.iter().map(|&c| f.neg(c)).collect();
            corr.resize(k2, f.zero());
            corr[0] = f.add(corr[0], f.from_int(2));
            let mut next = mul_coeffs(f, &g, &corr);
            next.truncate(k2);
            next.resize(k2, f.zero());
            g = next;
            k = k2;
        }
        g.truncate(n);
        Self::new(f, -self.hi().unwrap(), g, false)
    }

    /// `self / other`, certified to the propagated precision.
    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        let inv = if other.exact && other.coeffs.len() > 1 {
            let n = if self.exact { self.coeffs.len().max(other.coeffs.len()) } else { self.coeffs.len() + 1 };
            other.inv_to(n)?
        } else {
            other.inv()?
        };
        Ok(self.mul(&inv))
    }

    /// `self^e` for `e` a power of the characteristic: coefficients are
    /// raised to the `e`-th power and exponents dilated by `e`.
    pub fn frobenius(&self, e: u64) -> Result<Self, SeriesError> {
        let f = &self.field;
        let p = f.characteristic() as u64;
        let mut t = e;
        while t > 1 && t % p == 0 {
            t /= p;
        }
        if e == 0 || t != 1 {
            return Err(SeriesError::NotPowerOfP(e));
        }
        let ei = e as i64;
        let floor = if self.exact { self.lo * ei } else { (self.lo - 1) * ei + 1 };
        let Some(hi) = self.hi() else {
            return Ok(if self.exact { Self::zero(f) } else { Self::zero_to(f, floor) });
        };
        let new_hi = hi * ei;
        let mut coeffs = vec![f.zero(); (new_hi - floor + 1) as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * e as usize] = f.pow(c, e);
        }
        Ok(Self::from_parts(f.clone(), floor, coeffs, self.exact))
    }

    /// `self^e` using base-`p` digits and Frobenius for large exponents.
    pub fn pow(&self, e: u64) -> Self {
        let f = &self.field;
        let p = f.characteristic() as u64;
        let mut acc = Self::monomial(f, f.one(), 0);
        let mut frob = self.clone();
        let mut rest = e;
        let mut place = 1u64;
        while rest > 0 {
            let d = rest % p;
            if d > 0 {
                let mut part = Self::monomial(f, f.one(), 0);
                for _ in 0..d {
                    part = part.mul(&frob);
                }
                acc = acc.mul(&part);
            }
            rest /= p;
            if rest > 0 {
                frob = self.frobenius(place * p).expect("power of p");
                place *= p;
            }
        }
        acc
    }

    /// Splits into the polynomial part (exponents `>= 0`) and the remainder.
    pub fn polypart(&self) -> Result<(TPoly, Self), SeriesError> {
        let f = &self.field;
        if !self.exact && self.lo > 0 {
            return Err(SeriesError::PrecisionExhausted { needed: 0, floor: self.lo });
        }
        let Some(hi) = self.hi() else {
            return Ok((TPoly::zero(f), self.clone()));
        };
        if hi < 0 {
            return Ok((TPoly::zero(f), self.clone()));
        }
        let mut poly = vec![f.zero(); hi as usize + 1];
        for e in 0.max(self.lo)..=hi {
            poly[e as usize] = self.coeffs[(hi - e) as usize];
        }
        let split = (hi + 1) as usize;
        let rest = if split >= self.coeffs.len() {
            if self.exact {
                Self::zero(f)
            } else {
                Self::zero_to(f, self.lo)
            }
        } else {
            Self::from_parts(f.clone(), self.lo, self.coeffs[split..].to_vec(), self.exact)
        };
        Ok((TPoly::new(f, poly), rest))
    }

    /// Substitution `T -> vT` (`v` nonzero).
    pub fn scale_t(&self, v: FieldElement) -> Self {
        let f = &self.field;
        let Some(hi) = self.hi() else {
            return self.clone();
        };
        let vinv = f.inv(v).expect("nonzero scaling");
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let e = hi - i as i64;
                let w = if e >= 0 { f.pow(v, e as u64) } else { f.pow(vinv, e.unsigned_abs()) };
                f.mul(c, w)
            })
            .collect();
        Self::from_parts(f.clone(), self.lo, coeffs, self.exact)
    }
}

/// Horner evaluation of `sum coeffs[i] * x^i`.
pub fn eval_poly_coeffs(coeffs: &[TPoly], x: &LaurentSeries) -> LaurentSeries {
    let f = x.field();
    let mut acc = LaurentSeries::zero(f);
    for c in coeffs.iter().rev() {
        acc = acc.mul(x).add(&LaurentSeries::from_poly(c));
    }
    acc
}

/// Evaluates a nonzero `F_q(T)`-multiple of `s` (denominators cleared) at `x`.
pub fn eval_xpoly(s: &XPoly, x: &LaurentSeries) -> LaurentSeries {
    eval_poly_coeffs(&s.to_poly_coeffs(), x)
}

fn derivative_coeffs(coeffs: &[TPoly]) -> Vec<TPoly> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.scale(c.field().from_int(i as i64)))
        .collect()
}

/// Hensel/Newton root of `s` near `seed`, with `terms` certified coefficients.
///
/// Certification: for an approximation `x` with `|s(x)| < |s'(x)|^2` there is
/// a unique root `a` with `|a - x| = |s(x)/s'(x)|`, so the coefficients of `x`
/// above that exponent are those of the root.
pub fn newton_root(s: &XPoly, seed: &LaurentSeries, terms: usize) -> Result<LaurentSeries, SeriesError> {
    let coeffs = s.to_poly_coeffs();
    let dcoeffs = derivative_coeffs(&coeffs);
    let mut x = seed.to_exact();
    let x_hi = x.hi().ok_or(SeriesError::ZeroInverse)?;

    // Hensel check at the seed.
    let probe = x.truncate_rel(x.len().max(4) + 8);
    let dv = eval_poly_coeffs(&dcoeffs, &probe);
    let d_top = dv.hi().ok_or(SeriesError::DerivativeVanishes)?;
    let mut w = (4 * (d_top.unsigned_abs() as usize + 1) + seed.len()).max(16);
    let mut best = i64::MAX;
    let mut stalled = 0;

    for _ in 0..64 {
        let xin = if x.hi().is_some() { x.truncate_rel(w) } else { x.truncate(x_hi - w as i64 + 1) };
        let sv = eval_poly_coeffs(&coeffs, &xin);
        let dv = eval_poly_coeffs(&dcoeffs, &xin);
        let d_top = dv.hi().ok_or(SeriesError::DerivativeVanishes)?;
        let s_top = sv.top().unwrap_or(i64::MIN / 4);
        if s_top < 2 * d_top {
            let floor = s_top - d_top + 1;
            let hi = x.hi().unwrap_or(x_hi);
            if hi - floor + 1 >= terms as i64 {
                return Ok(x.truncate(hi - terms as i64 + 1));
            }
        } else if x.len() <= seed.len() {
            return Err(SeriesError::HenselFailed { residual: s_top, derivative: d_top });
        }
        if s_top < best {
            best = s_top;
            stalled = 0;
        } else {
            stalled += 1;
            if stalled >= 3 {
                return Err(SeriesError::NewtonStalled(best));
            }
        }
        if sv.hi().is_some() {
            let delta = sv.mul(&dv.inv_to(w)?);
            let delta = if delta.is_empty() { delta } else { delta.to_exact() };
            x = x.sub(&delta).to_exact();
        }
        w *= 2;
    }
    Err(SeriesError::NoConvergence(terms))
}

impl fmt::Display for LaurentSeries {
    /// `c_hi*T^hi + ... + c_lo*T^lo + O(T^(lo-1))`; exact series omit the O-term.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let f = &self.field;
        let mut parts: Vec<String> = Vec::new();
        if let Some(hi) = self.hi() {
            for (i, &c) in self.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let e = hi - i as i64;
                let cs = if f.in_prime_subfield(c) { c.index().to_string() } else { format!("({})", f.format(c)) };
                parts.push(match (e, c == f.one()) {
                    (0, _) => cs,
                    (_, true) => format!("T^{e}"),
                    _ => format!("{cs}*T^{e}"),
                });
            }
        }
        if !self.exact {
            parts.push(format!("O(T^{})", self.lo - 1));
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(out, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentSeries({self})")
    }
}
