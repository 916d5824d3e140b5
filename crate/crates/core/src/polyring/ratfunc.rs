use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::tpoly::forward_owned;
use super::{PolyError, TPoly};
use crate::ffield::{Field, FieldElement};

/// `num / den` in lowest terms with a monic denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunc {
    num: TPoly,
    den: TPoly,
}

impl RationalFunc {
    pub fn new(num: TPoly, den: TPoly) -> Result<Self, PolyError> {
        num.check_field(&den)?;
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: TPoly, den: TPoly) -> Self {
        let f = num.field().clone();
        if num.is_zero() {
            return RationalFunc { num, den: TPoly::one(&f) };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = den.leading();
        if lc != f.one() {
            let inv = f.inv(lc).expect("nonzero");
            num = num.scale(inv);
            den = den.scale(inv);
        }
        RationalFunc { num, den }
    }

    pub fn from_poly(p: TPoly) -> Self {
        let f = p.field().clone();
        RationalFunc { num: p, den: TPoly::one(&f) }
    }

    pub fn zero(field: &Field) -> Self {
        Self::from_poly(TPoly::zero(field))
    }

    pub fn one(field: &Field) -> Self {
        Self::from_poly(TPoly::one(field))
    }

    pub fn constant(field: &Field, c: FieldElement) -> Self {
        Self::from_poly(TPoly::constant(field, c))
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn num(&self) -> &TPoly {
        &self.num
    }

    pub fn den(&self) -> &TPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    /// The polynomial value, if the denominator is one.
    pub fn as_poly(&self) -> Option<&TPoly> {
        self.is_poly().then_some(&self.num)
    }

    pub fn inv(&self) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self, PolyError> {
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, c: FieldElement) -> Self {
        if c.is_zero() {
            return Self::zero(self.field());
        }
        RationalFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn mul_poly(&self, p: &TPoly) -> Self {
        Self::normalized(&self.num * p, self.den.clone())
    }

    pub fn pow(&self, e: u64) -> Self {
        RationalFunc { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Substitution `T -> vT`.
    pub fn scale_t(&self, v: FieldElement) -> Self {
        Self::normalized(self.num.scale_t(v), self.den.scale_t(v))
    }
}

impl Add for &RationalFunc {
    type Output = RationalFunc;
    fn add(self, rhs: &RationalFunc) -> RationalFunc {
        if self.den == rhs.den {
            return RationalFunc::normalized(&self.num + &rhs.num, self.den.clone());
        }
        if rhs.den.is_one() {
            return RationalFunc::normalized(&self.num + &(&rhs.num * &self.den), self.den.clone());
        }
        if self.den.is_one() {
            return RationalFunc::normalized(&(&self.num * &rhs.den) + &rhs.num, rhs.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunc::normalized(num, &self.den * &rhs.den)
    }
}

impl Sub for &RationalFunc {
    type Output = RationalFunc;
    fn sub(self, rhs: &RationalFunc) -> RationalFunc {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunc {
    type Output = RationalFunc;
    fn mul(self, rhs: &RationalFunc) -> RationalFunc {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunc::zero(self.field());
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFunc::from_poly(&self.num * &rhs.num);
        }
        // cross-cancel before multiplying
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g1).expect("gcd divides");
        let n2 = rhs.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        RationalFunc::normalized(&n1 * &n2, &d1 * &d2)
    }
}

impl Neg for &RationalFunc {
    type Output = RationalFunc;
    fn neg(self) -> RationalFunc {
        RationalFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RationalFunc {
    type Output = RationalFunc;
    fn neg(self) -> RationalFunc {
        -&self
    }
}

forward_owned!(RationalFunc, Add add, Sub sub, Mul mul);

impl From<TPoly> for RationalFunc {
    fn from(p: TPoly) -> Self {
        RationalFunc::from_poly(p)
    }
}

impl fmt::Display for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunc({self})")
    }
}
