//! Exact arithmetic in `F_p` and in small extensions `F_{p^n} = F_p[u]/(m(u))`.
//!
//! Elements are plain `Copy` indices; the [`Field`] handle carries the
//! characteristic, the modulus and (for tiny extension fields) lookup tables.
//! An element with index `i` has base-`p` digits `d_0, d_1, ...` and stands
//! for `d_0 + d_1 u + d_2 u^2 + ...`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest supported field order.
const MAX_ORDER: u64 = 1 << 31;
/// Extension fields up to this order get full addition/multiplication tables.
const TABLE_ORDER: u32 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension modulus must be monic with degree >= 1")]
    BadModulus,
    #[error("modulus is reducible over F_{0}")]
    Reducible(u32),
    #[error("field order {0} exceeds the supported range")]
    TooLarge(u64),
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("denominator {den} vanishes modulo {p}")]
    DenominatorDivisible { den: i64, p: u32 },
    #[error("operands belong to different fields")]
    Mismatch,
}

/// An element of some [`Field`]; meaningless without its field.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// The canonical index (base-`p` digits of the `u`-representation).
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

#[derive(Debug)]
struct FieldSpec {
    p: u32,
    n: usize,
    q: u32,
    /// Ascending coefficients of the monic modulus; empty for prime fields.
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

/// Shared handle on a finite field description. Cloning is cheap.
#[derive(Clone)]
pub struct Field(Arc<FieldSpec>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.n == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}[u]/({})", self.0.p, format_upoly(&self.0.modulus))
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Field, FieldError> {
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        Ok(Field(Arc::new(FieldSpec { p, n: 1, q: p, modulus: Vec::new(), tables: None })))
    }

    /// `F_p[u]/(modulus)`, where `modulus` lists ascending coefficients of a
    /// monic irreducible polynomial. Degree one collapses to `F_p`.
    pub fn extension(p: u32, modulus: &[u32]) -> Result<Field, FieldError> {
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        let mut m: Vec<u32> = modulus.iter().map(|&c| c % p).collect();
        while m.last() == Some(&0) {
            m.pop();
        }
        if m.len() < 2 || *m.last().unwrap() != 1 {
            return Err(FieldError::BadModulus);
        }
        let n = m.len() - 1;
        if n == 1 {
            return Field::prime(p);
        }
        let q = (p as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
        if q > MAX_ORDER {
            return Err(FieldError::TooLarge(q));
        }
        if !upoly_is_irreducible(p, &m) {
            return Err(FieldError::Reducible(p));
        }
        let mut spec = FieldSpec { p, n, q: q as u32, modulus: m, tables: None };
        if spec.q <= TABLE_ORDER {
            spec.tables = Some(build_tables(&spec));
        }
        Ok(Field(Arc::new(spec)))
    }

    /// Built-in choice of `F_{p^n}`: `u^2+u+1` for `F_4`, `u^2 - c` for the
    /// least non-residue `c` when `n = 2` and `p` is odd, otherwise the first
    /// irreducible monic polynomial in scan order.
    pub fn builtin(p: u32, n: usize) -> Result<Field, FieldError> {
        if n <= 1 {
            return Field::prime(p);
        }
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        if p == 2 && n == 2 {
            return Field::extension(2, &[1, 1, 1]);
        }
        if n == 2 {
            for c in 2..p {
                let m = [(p - c) % p, 0, 1];
                if upoly_is_irreducible(p, &m) {
                    return Field::extension(p, &m);
                }
            }
        }
        let total = (p as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
        if total > MAX_ORDER {
            return Err(FieldError::TooLarge(total));
        }
        for idx in 0..total {
            let mut m = digits_of(idx as u32, p, n);
            m.push(1);
            if upoly_is_irreducible(p, &m) {
                return Field::extension(p, &m);
            }
        }
        Err(FieldError::BadModulus)
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    /// Extension degree `n`.
    pub fn degree(&self) -> usize {
        self.0.n
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.n == 1
    }

    /// Ascending coefficients of the `u`-modulus (empty for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// The generator `u` of an extension field.
    pub fn generator(&self) -> Option<FieldElement> {
        (self.0.n > 1).then_some(FieldElement(self.0.p))
    }

    pub fn from_int(&self, v: i64) -> FieldElement {
        FieldElement(v.rem_euclid(self.0.p as i64) as u32)
    }

    /// Builds an element from ascending `u`-coefficients (reduced modulo `p`
    /// and, if longer than `n`, modulo the field modulus).
    pub fn from_digits(&self, digits: &[i64]) -> FieldElement {
        let p = self.0.p as i64;
        let mut acc = self.zero();
        let mut upow = self.one();
        let u = self.generator().unwrap_or(self.one());
        for (i, &d) in digits.iter().enumerate() {
            if i > 0 {
                upow = self.mul(upow, u);
            }
            let c = self.from_int(d.rem_euclid(p));
            acc = self.add(acc, self.mul(c, upow));
        }
        acc
    }

    pub fn digits(&self, a: FieldElement) -> Vec<u32> {
        digits_of(a.0, self.0.p, self.0.n)
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.0.q).map(FieldElement)
    }

    /// `true` when `a` lies in the prime subfield `F_p`.
    pub fn in_prime_subfield(&self, a: FieldElement) -> bool {
        a.0 < self.0.p
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let s = &self.0;
        if s.n == 1 {
            let r = a.0 as u64 + b.0 as u64;
            let p = s.p as u64;
            return FieldElement(if r >= p { r - p } else { r } as u32);
        }
        if let Some(t) = &s.tables {
            return FieldElement(t.add[(a.0 * s.q + b.0) as usize]);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..s.n {
            let d = (x % s.p + y % s.p) % s.p;
            out += d * place;
            x /= s.p;
            y /= s.p;
            place = place.wrapping_mul(s.p);
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let s = &self.0;
        if s.n == 1 {
            return FieldElement(if a.0 == 0 { 0 } else { s.p - a.0 });
        }
        if let Some(t) = &s.tables {
            return FieldElement(t.neg[a.0 as usize]);
        }
        let d: Vec<u32> = self.digits(a).into_iter().map(|c| (s.p - c) % s.p).collect();
        FieldElement(index_of(&d, s.p))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let s = &self.0;
        if s.n == 1 {
            return FieldElement((a.0 as u64 * b.0 as u64 % s.p as u64) as u32);
        }
        if let Some(t) = &s.tables {
            return FieldElement(t.mul[(a.0 * s.q + b.0) as usize]);
        }
        mul_digits(s, a.0, b.0)
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        let s = &self.0;
        if s.n == 1 {
            return Ok(FieldElement(inv_mod(a.0 as i64, s.p as i64) as u32));
        }
        if let Some(t) = &s.tables {
            return Ok(FieldElement(t.inv[a.0 as usize]));
        }
        Ok(self.pow(a, s.q as u64 - 2))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Signed exponent; negative powers of zero are reported as an error.
    pub fn powi(&self, a: FieldElement, e: i64) -> Result<FieldElement, FieldError> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(self.inv(a)?, e.unsigned_abs()))
        }
    }

    /// The Frobenius map `a -> a^p`.
    pub fn frobenius(&self, a: FieldElement) -> FieldElement {
        if self.0.n == 1 {
            a
        } else {
            self.pow(a, self.0.p as u64)
        }
    }

    /// `num / den` reduced into the prime subfield.
    pub fn from_rational(&self, num: i64, den: i64) -> Result<FieldElement, FieldError> {
        let d = self.from_int(den);
        if d.is_zero() {
            return Err(FieldError::DenominatorDivisible { den, p: self.0.p });
        }
        self.div(self.from_int(num), d)
    }

    /// `C(n, k)` modulo `p` via Lucas' theorem.
    pub fn binomial(&self, mut n: u64, mut k: u64) -> FieldElement {
        if k > n {
            return self.zero();
        }
        let p = self.0.p as u64;
        let mut acc = self.one();
        while n > 0 || k > 0 {
            let (nd, kd) = (n % p, k % p);
            if kd > nd {
                return self.zero();
            }
            let mut c = self.one();
            for i in 0..kd {
                c = self.mul(c, self.from_int((nd - i) as i64));
                c = self.div(c, self.from_int((i + 1) as i64)).expect("i + 1 < p");
            }
            acc = self.mul(acc, c);
            n /= p;
            k /= p;
        }
        acc
    }

    /// A square root of `a` with the smallest index, if `a` is a square.
    pub fn sqrt(&self, a: FieldElement) -> Option<FieldElement> {
        self.elements().find(|&r| self.mul(r, r) == a)
    }

    /// Prints an element: an integer for prime fields, a `u`-polynomial otherwise.
    pub fn format(&self, a: FieldElement) -> String {
        if self.0.n == 1 {
            a.0.to_string()
        } else {
            format_upoly(&self.digits(a))
        }
    }
}

fn digits_of(mut idx: u32, p: u32, n: usize) -> Vec<u32> {
    let mut d = Vec::with_capacity(n);
    for _ in 0..n {
        d.push(idx % p);
        idx /= p;
    }
    d
}

fn index_of(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0u32, |acc, &d| acc * p + d)
}

fn mul_digits(s: &FieldSpec, a: u32, b: u32) -> FieldElement {
    let p = s.p as u64;
    let n = s.n;
    let da = digits_of(a, s.p, n);
    let db = digits_of(b, s.p, n);
    let mut prod = vec![0u64; 2 * n - 1];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
        }
    }
    // u^n = -(m_0 + m_1 u + ... + m_{n-1} u^{n-1})
    for top in (n..prod.len()).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        prod[top] = 0;
        for (i, &m) in s.modulus[..n].iter().enumerate() {
            let t = top - n + i;
            prod[t] = (prod[t] + (p - c) * m as u64) % p;
        }
    }
    let d: Vec<u32> = prod[..n].iter().map(|&c| c as u32).collect();
    FieldElement(index_of(&d, s.p))
}

fn build_tables(s: &FieldSpec) -> Tables {
    let q = s.q as usize;
    let mut add = vec![0u32; q * q];
    let mut mul = vec![0u32; q * q];
    let mut neg = vec![0u32; q];
    let mut inv = vec![0u32; q];
    for a in 0..q as u32 {
        let da = digits_of(a, s.p, s.n);
        neg[a as usize] = index_of(&da.iter().map(|&c| (s.p - c) % s.p).collect::<Vec<_>>(), s.p);
        for b in 0..q as u32 {
            let db = digits_of(b, s.p, s.n);
            let sum: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % s.p).collect();
            add[a as usize * q + b as usize] = index_of(&sum, s.p);
            let m = mul_digits(s, a, b).0;
            mul[a as usize * q + b as usize] = m;
            if m == 1 {
                inv[a as usize] = b;
            }
        }
    }
    Tables { add, mul, neg, inv }
}

pub(crate) fn inv_mod(a: i64, m: i64) -> i64 {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "{a} not invertible mod {m}");
    old_s.rem_euclid(m)
}

/// Remainder of `a` modulo `b` over `F_p` (ascending coefficients).
fn upoly_rem(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    let p64 = p as u64;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db] as i64, p as i64) as u64;
    while r.len() > db {
        let top = *r.last().unwrap();
        if top != 0 {
            let c = top * lead_inv % p64;
            let shift = r.len() - 1 - db;
            for (i, &bc) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p64 - c) * bc as u64) % p64;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r.into_iter().map(|c| c as u32).collect()
}

/// Brute force: no monic factor of degree `1..=n/2`.
fn upoly_is_irreducible(p: u32, m: &[u32]) -> bool {
    let n = m.len() - 1;
    for d in 1..=n / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut g = digits_of(idx as u32, p, d);
            g.push(1);
            if upoly_rem(p, m, &g).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Formats ascending `u`-coefficients as e.g. `2u^2+u+1`.
pub(crate) fn format_upoly(digits: &[u32]) -> String {
    let mut out = String::new();
    for (i, &c) in digits.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        if !out.is_empty() {
            out.push('+');
        }
        match (i, c) {
            (0, _) => out.push_str(&c.to_string()),
            (_, 1) => {}
            _ => out.push_str(&c.to_string()),
        }
        match i {
            0 => {}
            1 => out.push('u'),
            _ => out.push_str(&format!("u^{i}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Field {
        Field::extension(2, &[1, 1, 1]).unwrap()
    }

    #[test]
    fn prime_field_basics() {
        let f7 = Field::prime(7).unwrap();
        assert_eq!(f7.add(f7.from_int(3), f7.from_int(5)), f7.from_int(1));
        let f13 = Field::prime(13).unwrap();
        assert_eq!(f13.mul(f13.from_int(7), f13.from_int(2)), f13.one());
        assert_eq!(f7.inv(f7.from_int(3)).unwrap(), f7.from_int(5));
        assert_eq!(f13.inv(f13.from_int(6)).unwrap(), f13.from_int(11));
        assert_eq!(f7.inv(f7.zero()), Err(FieldError::ZeroInverse));
        assert_eq!(Field::prime(15).unwrap_err(), FieldError::NotPrime(15));
    }

    #[test]
    fn f4_generator() {
        let f = f4();
        let u = f.generator().unwrap();
        let u2 = f.mul(u, u);
        assert_eq!(f.format(u2), "u+1");
        assert_eq!(f.inv(u).unwrap(), f.add(u, f.one()));
    }

    #[test]
    fn rational_literals() {
        let f7 = Field::prime(7).unwrap();
        assert_eq!(f7.from_rational(32, 9).unwrap(), f7.from_int(2));
        assert_eq!(f7.from_rational(8, 27).unwrap(), f7.from_int(6));
        assert_eq!(f7.from_rational(0, 5).unwrap(), f7.zero());
        assert!(matches!(f7.from_rational(1, 14), Err(FieldError::DenominatorDivisible { .. })));
    }

    #[test]
    fn binomials() {
        let f7 = Field::prime(7).unwrap();
        let f13 = Field::prime(13).unwrap();
        assert_eq!(f7.binomial(4, 2), f7.from_int(6));
        assert_eq!(f13.binomial(4, 2), f13.from_int(6));
        assert_eq!(f13.binomial(8, 4), f13.from_int(5));
        // Lucas: C(14, 7) = 3432 = 3432 mod 7
        assert_eq!(f7.binomial(14, 7), f7.from_int(3432));
        assert_eq!(f7.binomial(3, 5), f7.zero());
    }

    #[test]
    fn square_roots() {
        let f7 = Field::prime(7).unwrap();
        assert_eq!(f7.sqrt(f7.from_int(4)), Some(f7.from_int(2)));
        let f13 = Field::prime(13).unwrap();
        assert_eq!(f13.sqrt(f13.from_int(5)), None);
        let f169 = Field::builtin(13, 2).unwrap();
        let r = f169.sqrt(f169.from_int(5)).unwrap();
        assert_eq!(f169.mul(r, r), f169.from_int(5));
        for p in [3u32, 5, 7, 11, 13] {
            let f = Field::prime(p).unwrap();
            let squares = f.elements().skip(1).filter(|&a| f.sqrt(a).is_some()).count();
            assert_eq!(squares as u32, (p - 1) / 2);
        }
    }

    #[test]
    fn builtin_moduli() {
        assert_eq!(Field::builtin(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(Field::builtin(13, 2).unwrap().modulus(), &[11, 0, 1]);
        assert_eq!(Field::builtin(7, 2).unwrap().modulus(), &[4, 0, 1]);
        assert!(matches!(Field::extension(5, &[1, 0, 1]), Err(FieldError::Reducible(5))));
        let f8 = Field::builtin(2, 3).unwrap();
        assert_eq!(f8.order(), 8);
    }

    #[test]
    fn field_axioms_and_frobenius() {
        for f in [Field::prime(11).unwrap(), f4(), Field::builtin(3, 2).unwrap(), Field::builtin(5, 3).unwrap()] {
            let p = f.characteristic() as u64;
            for a in f.elements() {
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                }
                let frob = f.from_digits(
                    &f.digits(a).iter().map(|&d| d as i64).collect::<Vec<_>>(),
                );
                assert_eq!(frob, a);
                assert_eq!(f.add(a, f.neg(a)), f.zero());
                let mut rep = f.one();
                for _ in 0..p {
                    rep = f.mul(rep, a);
                }
                assert_eq!(rep, f.frobenius(a));
                for b in f.elements().step_by(3) {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.pow(f.add(a, b), p), f.add(f.frobenius(a), f.frobenius(b)));
                }
            }
        }
    }

    #[test]
    fn rational_literal_scaling() {
        let f = Field::prime(13).unwrap();
        for (a, b, c) in [(3i64, 5i64, 2i64), (-7, 4, 9), (32, 9, 14)] {
            assert_eq!(f.from_rational(a * c, b * c).unwrap(), f.from_rational(a, b).unwrap());
        }
    }
}
