use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::tpoly::{coeff_prefix, forward_owned};
use super::{PolyError, RationalFunc, TPoly};
use crate::ffield::Field;

/// Polynomial in `X` over `F_q(T)`; `coeffs[i]` is the coefficient of `X^i`.
#[derive(Clone, PartialEq, Eq)]
pub struct XPoly {
    field: Field,
    coeffs: Vec<RationalFunc>,
}

impl XPoly {
    pub fn new(field: &Field, mut coeffs: Vec<RationalFunc>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        XPoly { field: field.clone(), coeffs }
    }

    pub fn from_tpolys(field: &Field, coeffs: Vec<TPoly>) -> Self {
        XPoly::new(field, coeffs.into_iter().map(RationalFunc::from_poly).collect())
    }

    pub fn zero(field: &Field) -> Self {
        XPoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Self {
        XPoly::new(field, vec![RationalFunc::one(field)])
    }

    /// `c * X^e`.
    pub fn monomial(c: RationalFunc, e: usize) -> Self {
        let field = c.field().clone();
        let mut coeffs = vec![RationalFunc::zero(&field); e];
        coeffs.push(c);
        XPoly::new(&field, coeffs)
    }

    pub fn x(field: &Field) -> Self {
        XPoly::monomial(RationalFunc::one(field), 1)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[RationalFunc] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> RationalFunc {
        self.coeffs.get(i).cloned().unwrap_or_else(|| RationalFunc::zero(&self.field))
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> RationalFunc {
        self.coeffs.last().cloned().unwrap_or_else(|| RationalFunc::zero(&self.field))
    }

    /// X-degrees carrying a nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i).collect()
    }

    pub fn scale(&self, c: &RationalFunc) -> XPoly {
        XPoly::new(&self.field, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn derivative(&self) -> XPoly {
        let f = &self.field;
        XPoly::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(f.from_int(i as i64)))
                .collect(),
        )
    }

    /// Quotient and remainder over `F_q(T)` with `deg r < deg p`.
    pub fn divmod(&self, p: &XPoly) -> Result<(XPoly, XPoly), PolyError> {
        if self.field != p.field {
            return Err(PolyError::FieldMismatch);
        }
        let Some(dp) = p.degree() else {
            return Err(PolyError::DivisionByZero);
        };
        let f = &self.field;
        if self.coeffs.len() <= dp {
            return Ok((XPoly::zero(f), self.clone()));
        }
        let lead_inv = p.leading().inv()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![RationalFunc::zero(f); rem.len() - dp];
        for top in (dp..rem.len()).rev() {
            if rem[top].is_zero() {
                continue;
            }
            let qc = &rem[top] * &lead_inv;
            let base = top - dp;
            for (i, pc) in p.coeffs.iter().enumerate().take(dp) {
                if !pc.is_zero() {
                    rem[base + i] = &rem[base + i] - &(&qc * pc);
                }
            }
            rem[top] = RationalFunc::zero(f);
            quot[base] = qc;
        }
        rem.truncate(dp);
        Ok((XPoly::new(f, quot), XPoly::new(f, rem)))
    }

    pub fn rem(&self, p: &XPoly) -> Result<XPoly, PolyError> {
        Ok(self.divmod(p)?.1)
    }

    /// `X^r mod self` by square-and-multiply on residues.
    pub fn modpow_x(&self, r: u64) -> Result<XPoly, PolyError> {
        if self.degree().unwrap_or(0) == 0 {
            return Err(PolyError::DivisionByZero);
        }
        let f = &self.field;
        let mut acc = XPoly::one(f).rem(self)?;
        for bit in (0..64 - r.leading_zeros()).rev() {
            acc = (&acc * &acc).rem(self)?;
            if (r >> bit) & 1 == 1 {
                acc = acc.mul_x().rem(self)?;
            }
        }
        Ok(acc)
    }

    fn mul_x(&self) -> XPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![RationalFunc::zero(&self.field)];
        coeffs.extend(self.coeffs.iter().cloned());
        XPoly { field: self.field.clone(), coeffs }
    }

    /// Monic gcd over `F_q(T)`.
    pub fn gcd(&self, other: &XPoly) -> Result<XPoly, PolyError> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            return Ok(a);
        }
        let lead = a.leading().inv()?;
        Ok(a.scale(&lead))
    }

    /// Squarefree in `X` over `F_q(T)`: `gcd(P, P')` is constant and `P' != 0`.
    pub fn is_squarefree(&self) -> Result<bool, PolyError> {
        let d = self.derivative();
        if d.is_zero() {
            return Ok(self.degree().unwrap_or(0) == 0);
        }
        Ok(self.gcd(&d)?.degree() == Some(0))
    }

    /// Clears denominators: returns polynomial coefficients of a nonzero
    /// `F_q(T)`-multiple of `self` without common factor.
    pub fn to_poly_coeffs(&self) -> Vec<TPoly> {
        let f = &self.field;
        let mut lcm = TPoly::one(f);
        for c in &self.coeffs {
            let g = lcm.gcd(c.den());
            lcm = &lcm * &c.den().div_exact(&g).expect("gcd divides");
        }
        let polys: Vec<TPoly> = self
            .coeffs
            .iter()
            .map(|c| {
                let cofactor = lcm.div_exact(c.den()).expect("den divides lcm");
                &c.num().clone() * &cofactor
            })
            .collect();
        let content = polys.iter().fold(TPoly::zero(f), |g, c| g.gcd(c));
        if content.is_zero() || content.is_one() {
            return polys;
        }
        polys.into_iter().map(|c| c.div_exact(&content).expect("content divides")).collect()
    }

    /// Whether `self = c * other` for some nonzero `c` in `F_q(T)`.
    pub fn proportional_to(&self, other: &XPoly) -> bool {
        if self.degree() != other.degree() || self.is_zero() {
            return false;
        }
        let c = self.leading().div(&other.leading()).expect("nonzero leading");
        other.scale(&c) == *self
    }
}

impl Add for &XPoly {
    type Output = XPoly;
    fn add(self, rhs: &XPoly) -> XPoly {
        assert!(self.field == rhs.field, "polynomials over different fields");
        let n = self.coeffs.len().max(rhs.coeffs.len());
        XPoly::new(&self.field, (0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect())
    }
}

impl Sub for &XPoly {
    type Output = XPoly;
    fn sub(self, rhs: &XPoly) -> XPoly {
        self + &(-rhs)
    }
}

impl Neg for &XPoly {
    type Output = XPoly;
    fn neg(self) -> XPoly {
        XPoly::new(&self.field, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &XPoly {
    type Output = XPoly;
    fn mul(self, rhs: &XPoly) -> XPoly {
        assert!(self.field == rhs.field, "polynomials over different fields");
        let f = &self.field;
        if self.is_zero() || rhs.is_zero() {
            return XPoly::zero(f);
        }
        let mut out = vec![RationalFunc::zero(f); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        XPoly::new(f, out)
    }
}

forward_owned!(XPoly, Add add, Sub sub, Mul mul);

impl fmt::Display for XPoly {
    /// e.g. `(T^2+1)*X^8+(5*T^3+6*T)*X^7+2*T*X+4`.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(out, "+")?;
            }
            first = false;
            let body = c.to_string();
            let simple_const = c.is_poly() && c.num().is_constant();
            let single_term = c.is_poly() && c.num().coeffs().iter().filter(|x| !x.is_zero()).count() == 1;
            if e == 0 {
                if simple_const || single_term {
                    write!(out, "{body}")?;
                } else {
                    write!(out, "({body})")?;
                }
                continue;
            }
            if simple_const {
                if let Some(pre) = coeff_prefix(&self.field, c.num().leading()) {
                    write!(out, "{pre}*")?;
                }
            } else if single_term {
                write!(out, "{body}*")?;
            } else {
                write!(out, "({body})*")?;
            }
            if e == 1 {
                write!(out, "X")?;
            } else {
                write!(out, "X^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for XPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "XPoly({self})")
    }
}
