use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{mul_coeffs, PolyError};
use crate::ffield::{Field, FieldElement};

/// Dense polynomial in `T`; `coeffs[i]` is the coefficient of `T^i`.
///
/// The zero polynomial has no coefficients and no degree; otherwise the last
/// coefficient is nonzero.
#[derive(Clone, PartialEq, Eq)]
pub struct TPoly {
    field: Field,
    coeffs: Vec<FieldElement>,
}

impl TPoly {
    pub fn new(field: &Field, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        TPoly { field: field.clone(), coeffs }
    }

    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Self {
        TPoly::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn zero(field: &Field) -> Self {
        TPoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Self {
        TPoly::constant(field, field.one())
    }

    pub fn constant(field: &Field, c: FieldElement) -> Self {
        TPoly::new(field, vec![c])
    }

    /// `c * T^e`.
    pub fn monomial(field: &Field, c: FieldElement, e: usize) -> Self {
        if c.is_zero() {
            return TPoly::zero(field);
        }
        let mut coeffs = vec![field.zero(); e + 1];
        coeffs[e] = c;
        TPoly { field: field.clone(), coeffs }
    }

    /// The indeterminate `T`.
    pub fn t(field: &Field) -> Self {
        TPoly::monomial(field, field.one(), 1)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<FieldElement> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == self.field.one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: FieldElement) -> TPoly {
        let f = &self.field;
        TPoly::new(f, self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    /// Multiplies by `T^e`.
    pub fn shift(&self, e: usize) -> TPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); e];
        coeffs.extend_from_slice(&self.coeffs);
        TPoly { field: self.field.clone(), coeffs }
    }

    /// Scales to leading coefficient one (zero stays zero).
    pub fn monic(&self) -> TPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.leading()).expect("nonzero leading coefficient"))
    }

    pub fn pow(&self, mut e: u64) -> TPoly {
        let mut base = self.clone();
        let mut acc = TPoly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Quotient and remainder with `deg r < deg b`.
    pub fn divmod(&self, b: &TPoly) -> Result<(TPoly, TPoly), PolyError> {
        self.check_field(b)?;
        let Some(db) = b.degree() else {
            return Err(PolyError::DivisionByZero);
        };
        let f = &self.field;
        if self.coeffs.len() <= db {
            return Ok((TPoly::zero(f), self.clone()));
        }
        let lead_inv = f.inv(b.leading())?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![f.zero(); rem.len() - db];
        for top in (db..rem.len()).rev() {
            let c = rem[top];
            if c.is_zero() {
                continue;
            }
            let qc = f.mul(c, lead_inv);
            quot[top - db] = qc;
            let base = top - db;
            for (i, &bc) in b.coeffs.iter().enumerate() {
                if !bc.is_zero() {
                    rem[base + i] = f.sub(rem[base + i], f.mul(qc, bc));
                }
            }
        }
        rem.truncate(db);
        Ok((TPoly::new(f, quot), TPoly::new(f, rem)))
    }

    pub fn rem(&self, b: &TPoly) -> Result<TPoly, PolyError> {
        Ok(self.divmod(b)?.1)
    }

    /// Exact division; `None` if `b` does not divide `self`.
    pub fn div_exact(&self, b: &TPoly) -> Option<TPoly> {
        match self.divmod(b) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, b: &TPoly) -> TPoly {
        let mut a = self.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Substitution `T -> vT`: the coefficient of `T^i` is multiplied by `v^i`.
    pub fn scale_t(&self, v: FieldElement) -> TPoly {
        let f = &self.field;
        let mut vp = f.one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for &c in &self.coeffs {
            out.push(f.mul(c, vp));
            vp = f.mul(vp, v);
        }
        TPoly::new(f, out)
    }

    pub fn derivative(&self) -> TPoly {
        let f = &self.field;
        TPoly::new(
            f,
            self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| f.mul(c, f.from_int(i as i64))).collect(),
        )
    }

    pub fn eval(&self, x: FieldElement) -> FieldElement {
        let f = &self.field;
        self.coeffs.iter().rev().fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// `self^p` computed coefficient-wise.
    pub fn frobenius(&self) -> TPoly {
        let f = &self.field;
        let p = f.characteristic() as usize;
        if self.is_zero() {
            return self.clone();
        }
        let mut out = vec![f.zero(); (self.coeffs.len() - 1) * p + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i * p] = f.frobenius(c);
        }
        TPoly::new(f, out)
    }

    /// If every coefficient is a multiple of the lead of `other` and the
    /// polynomials are proportional, returns `c` with `self = c * other`.
    pub fn proportional_to(&self, other: &TPoly) -> Option<FieldElement> {
        if self.degree() != other.degree() || self.is_zero() {
            return None;
        }
        let f = &self.field;
        let c = f.div(self.leading(), other.leading()).ok()?;
        (other.scale(c) == *self).then_some(c)
    }

    pub(crate) fn check_field(&self, other: &TPoly) -> Result<(), PolyError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(PolyError::FieldMismatch)
        }
    }

    fn zip_with(&self, other: &TPoly, op: impl Fn(FieldElement, FieldElement) -> FieldElement) -> TPoly {
        assert!(self.field == other.field, "polynomials over different fields");
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| op(self.coeff(i), other.coeff(i))).collect();
        TPoly::new(&self.field, coeffs)
    }
}

impl Add for &TPoly {
    type Output = TPoly;
    fn add(self, rhs: &TPoly) -> TPoly {
        let f = self.field.clone();
        self.zip_with(rhs, |a, b| f.add(a, b))
    }
}

impl Sub for &TPoly {
    type Output = TPoly;
    fn sub(self, rhs: &TPoly) -> TPoly {
        let f = self.field.clone();
        self.zip_with(rhs, |a, b| f.sub(a, b))
    }
}

impl Mul for &TPoly {
    type Output = TPoly;
    fn mul(self, rhs: &TPoly) -> TPoly {
        assert!(self.field == rhs.field, "polynomials over different fields");
        TPoly::new(&self.field, mul_coeffs(&self.field, &self.coeffs, &rhs.coeffs))
    }
}

impl Neg for &TPoly {
    type Output = TPoly;
    fn neg(self) -> TPoly {
        let f = &self.field;
        TPoly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

macro_rules! forward_owned {
    ($ty:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty { (&self).$m(&rhs) }
        }
        impl $tr<&$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: &$ty) -> $ty { (&self).$m(rhs) }
        }
        impl $tr<$ty> for &$ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty { self.$m(&rhs) }
        }
    )*};
}
pub(crate) use forward_owned;

forward_owned!(TPoly, Add add, Sub sub, Mul mul);

impl Neg for TPoly {
    type Output = TPoly;
    fn neg(self) -> TPoly {
        -&self
    }
}

/// Writes a coefficient in the position of a multiplier; `None` means "1".
pub(crate) fn coeff_prefix(f: &Field, c: FieldElement) -> Option<String> {
    if c == f.one() {
        None
    } else if f.in_prime_subfield(c) {
        Some(c.index().to_string())
    } else {
        Some(format!("({})", f.format(c)))
    }
}

/// A standalone coefficient (constant term).
pub(crate) fn coeff_standalone(f: &Field, c: FieldElement) -> String {
    if f.in_prime_subfield(c) {
        c.index().to_string()
    } else {
        format!("({})", f.format(c))
    }
}

impl fmt::Display for TPoly {
    /// Descending exponents, least nonnegative coefficients, e.g. `3*T^2+T+6`.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let f = &self.field;
        let mut first = true;
        for (e, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(out, "+")?;
            }
            first = false;
            if e == 0 {
                write!(out, "{}", coeff_standalone(f, c))?;
                continue;
            }
            if let Some(pre) = coeff_prefix(f, c) {
                write!(out, "{pre}*")?;
            }
            if e == 1 {
                write!(out, "T")?;
            } else {
                write!(out, "T^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TPoly[{:?}]({self})", self.field)
    }
}
