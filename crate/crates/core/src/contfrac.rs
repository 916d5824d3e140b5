//! Continued fractions `[a_0, a_1, a_2, ...]` over `F_q(T)` and `F_q((1/T))`.

use std::collections::HashMap;

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::ffield::{Field, FieldElement};
use crate::laurent::{newton_root, LaurentSeries, SeriesError};
use crate::polyring::{PolyError, RationalFunc, TPoly, XPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CfError {
    #[error("zero denominator while evaluating a finite continued fraction")]
    ZeroDenominator,
    #[error("the tail equation degenerated (A' = 0): the root is rational")]
    RationalRoot,
    #[error("quadratic equation is degenerate")]
    Degenerate,
    #[error("no repetition of the tail equation within {0} steps")]
    NoPeriod(usize),
    #[error("period must be nonempty with positive-degree quotients")]
    BadPeriod,
    #[error("at least two certified quotients are required")]
    TooShort,
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `<x_1, ..., x_n>` with `<> = 1` and `<x_1> = x_1`.
pub fn continuant(field: &Field, xs: &[TPoly]) -> TPoly {
    // right-to-left: c_i = x_i c_{i+1} + c_{i+2}
    let mut next = TPoly::one(field);
    let mut after = TPoly::zero(field);
    for x in xs.iter().rev() {
        let cur = &(x * &next) + &after;
        after = next;
        next = cur;
    }
    next
}

/// The continuant over constants.
pub fn continuant_const(field: &Field, xs: &[FieldElement]) -> FieldElement {
    let mut next = field.one();
    let mut after = field.zero();
    for &x in xs.iter().rev() {
        let cur = field.add(field.mul(x, next), after);
        after = next;
        next = cur;
    }
    next
}

/// `[x_1, ..., x_m] = <x_1..x_m> / <x_2..x_m>` over constants.
pub fn bracket_const(field: &Field, xs: &[FieldElement]) -> Result<FieldElement, CfError> {
    let num = continuant_const(field, xs);
    let den = continuant_const(field, xs.get(1..).unwrap_or(&[]));
    field.div(num, den).map_err(|_| CfError::ZeroDenominator)
}

/// Value of the finite continued fraction `[a_1, ..., a_n]`.
pub fn eval_cf(field: &Field, quotients: &[TPoly]) -> Result<RationalFunc, CfError> {
    if quotients.is_empty() {
        return Err(CfError::ZeroDenominator);
    }
    let num = continuant(field, quotients);
    let den = continuant(field, &quotients[1..]);
    if den.is_zero() {
        return Err(CfError::ZeroDenominator);
    }
    Ok(RationalFunc::new(num, den)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StopReason {
    /// The requested number of quotients was produced.
    Budget,
    /// The certified precision could not vouch for another quotient.
    Precision,
    /// The expansion terminated (rational input).
    Finite,
}

/// A certified list of partial quotients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    pub field: Field,
    pub quotients: Vec<TPoly>,
    pub certified: usize,
    pub stopped: StopReason,
}

#[derive(Serialize)]
struct ExpansionJson {
    p: u32,
    n: usize,
    quotients: Vec<String>,
    certified: usize,
    degrees: Vec<i64>,
    stopped: StopReason,
}

impl Expansion {
    /// Degrees of the quotients; `-1` marks a zero `a_0`.
    pub fn degrees(&self) -> Vec<i64> {
        self.quotients.iter().map(|q| q.degree().map_or(-1, |d| d as i64)).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ExpansionJson {
            p: self.field.characteristic(),
            n: self.field.degree(),
            quotients: self.quotients.iter().map(|q| q.to_string()).collect(),
            certified: self.certified,
            degrees: self.degrees(),
            stopped: self.stopped,
        })
        .expect("serializable")
    }
}

/// Euclidean expansion of a rational function.
pub fn expand_rational(f: &RationalFunc) -> Expansion {
    let field = f.field().clone();
    let mut a = f.num().clone();
    let mut b = f.den().clone();
    let mut quotients = Vec::new();
    while !b.is_zero() {
        let (q, r) = a.divmod(&b).expect("nonzero divisor");
        quotients.push(q);
        a = b;
        b = r;
    }
    let certified = quotients.len();
    Expansion { field, quotients, certified, stopped: StopReason::Finite }
}

fn deg(p: &TPoly) -> i64 {
    p.degree().map_or(i64::MIN / 4, |d| d as i64)
}

/// Certified expansion of a series: up to `max_terms` quotients, each one
/// emitted only if it is determined by the certified coefficients.
///
/// Writes `alpha = (X + e) / T^s` with `X` a polynomial and `|e| < 1`
/// unknown, runs the Euclidean algorithm on `(X, T^s)`, and carries the
/// cofactor of `e` in every remainder to bound its influence.
pub fn expand_series(alpha: &LaurentSeries, max_terms: usize) -> Expansion {
    let field = alpha.field().clone();
    let mut quotients = Vec::new();
    let done = |quotients: Vec<TPoly>, stopped| {
        let certified = quotients.len();
        Expansion { field: field.clone(), quotients, certified, stopped }
    };
    if alpha.is_exact_zero() {
        return done(vec![TPoly::zero(&field)], StopReason::Finite);
    }
    let exact = alpha.is_exact();
    if !exact && alpha.lo() > 0 {
        return done(quotients, StopReason::Precision);
    }
    let shift = (-alpha.lo()).max(0);
    let mut x = vec![field.zero(); (alpha.hi().unwrap_or(alpha.lo()) + shift + 1).max(0) as usize];
    if let Some(hi) = alpha.hi() {
        for (i, &c) in alpha.coeffs().iter().enumerate() {
            x[(hi - i as i64 + shift) as usize] = c;
        }
    }
    let mut r0 = TPoly::new(&field, x);
    let mut r1 = TPoly::monomial(&field, field.one(), shift as usize);
    // cofactors of the unknown tail in r0 and r1
    let mut e0 = if exact { TPoly::zero(&field) } else { TPoly::one(&field) };
    let mut e1 = TPoly::zero(&field);

    while quotients.len() < max_terms {
        if r1.is_zero() {
            let stop = if e1.is_zero() && e0.is_zero() { StopReason::Finite } else { StopReason::Precision };
            return done(quotients, stop);
        }
        if !exact {
            let (d0, d1) = (deg(&r0), deg(&r1));
            let err0 = deg(&e0) - 1;
            let err1 = deg(&e1) - 1;
            if d1 <= err1 || (err0 + d1).max(err1 + d0) - 2 * d1 >= 0 {
                return done(quotients, StopReason::Precision);
            }
        }
        let (q, r) = r0.divmod(&r1).expect("nonzero divisor");
        let e2 = &e0 - &(&q * &e1);
        quotients.push(q);
        r0 = std::mem::replace(&mut r1, r);
        e0 = std::mem::replace(&mut e1, e2);
    }
    if r1.is_zero() && exact {
        return done(quotients, StopReason::Finite);
    }
    done(quotients, StopReason::Budget)
}

/// The equation `A x^2 + B x + C = 0`, normalized: no common factor and `A`
/// (or the first nonzero coefficient) monic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadTriple {
    pub a: TPoly,
    pub b: TPoly,
    pub c: TPoly,
}

impl QuadTriple {
    pub fn new(a: TPoly, b: TPoly, c: TPoly) -> Self {
        QuadTriple { a, b, c }.normalized()
    }

    pub fn normalized(&self) -> Self {
        let g = self.a.gcd(&self.b).gcd(&self.c);
        if g.is_zero() {
            return self.clone();
        }
        let div = |p: &TPoly| p.div_exact(&g).expect("gcd divides");
        let (a, b, c) = (div(&self.a), div(&self.b), div(&self.c));
        let lead = [&a, &b, &c].into_iter().find(|p| !p.is_zero()).expect("nonzero").leading();
        let inv = a.field().inv(lead).expect("nonzero");
        QuadTriple { a: a.scale(inv), b: b.scale(inv), c: c.scale(inv) }
    }

    pub fn field(&self) -> &Field {
        self.a.field()
    }

    /// `B^2 - 4AC`.
    pub fn discriminant(&self) -> TPoly {
        let four = self.field().from_int(4);
        &(&self.b * &self.b) - &(&self.a * &self.c).scale(four)
    }

    /// Whether `self` is a nonzero `F_q(T)`-multiple of `other`.
    pub fn proportional_to(&self, other: &QuadTriple) -> bool {
        self.normalized() == other.normalized()
    }

    pub fn to_xpoly(&self) -> XPoly {
        XPoly::from_tpolys(self.field(), vec![self.c.clone(), self.b.clone(), self.a.clone()])
    }

    /// Irrationality of the roots. In odd characteristic this is "the
    /// discriminant is not a square"; in characteristic 2 only the
    /// degenerate case `A = 0` is rejected here (rational roots surface as
    /// [`CfError::RationalRoot`] during expansion).
    pub fn is_irrational(&self) -> bool {
        if self.a.is_zero() {
            return false;
        }
        if self.field().characteristic() == 2 {
            return true;
        }
        poly_sqrt(&self.discriminant()).is_none()
    }

    /// Exponent at which the two roots first differ.
    fn root_separation(&self) -> i64 {
        let d = self.discriminant();
        let half = if self.field().characteristic() == 2 { deg(&self.b) } else { deg(&d) / 2 };
        half - deg(&self.a)
    }

    fn key(&self) -> Vec<Vec<u32>> {
        [&self.a, &self.b, &self.c]
            .iter()
            .map(|p| p.coeffs().iter().map(|c| c.index()).collect())
            .collect()
    }
}

/// Exact square root of a polynomial, if it is a square.
pub fn poly_sqrt(d: &TPoly) -> Option<TPoly> {
    let f = d.field();
    let Some(n) = d.degree() else {
        return Some(d.clone());
    };
    if n % 2 == 1 || f.characteristic() == 2 {
        if f.characteristic() == 2 {
            // squares are sums of c^2 T^{2i}
            if d.coeffs().iter().enumerate().any(|(i, c)| i % 2 == 1 && !c.is_zero()) {
                return None;
            }
            let half: Vec<FieldElement> = d
                .coeffs()
                .iter()
                .step_by(2)
                .map(|&c| f.sqrt(c).expect("every element of F_{2^n} is a square"))
                .collect();
            return Some(TPoly::new(f, half));
        }
        return None;
    }
    let m = n / 2;
    let lead = f.sqrt(d.leading())?;
    // top-down: s = sum s_i T^i with s_m = lead
    let mut s = vec![f.zero(); m + 1];
    s[m] = lead;
    let two_lead_inv = f.inv(f.add(lead, lead)).ok()?;
    for k in (0..m).rev() {
        // coefficient of T^{m+k} in s^2 must equal d_{m+k}
        let mut acc = f.zero();
        for i in k + 1..=m {
            let j = m + k - i;
            if j > k && j <= m {
                acc = f.add(acc, f.mul(s[i], s[j]));
            }
        }
        let target = d.coeff(m + k);
        s[k] = f.mul(f.sub(target, acc), two_lead_inv);
    }
    let s = TPoly::new(f, s);
    (&s * &s == *d).then_some(s)
}

/// Equation of `alpha'` where `alpha = a + 1/alpha'`.
pub fn quad_tail_step(t: &QuadTriple, a: &TPoly) -> Result<QuadTriple, CfError> {
    let f = t.field();
    let a2 = &t.a * &(a * a);
    let new_a = &(&a2 + &(&t.b * a)) + &t.c;
    if new_a.is_zero() {
        return Err(CfError::RationalRoot);
    }
    let new_b = &(&t.a * a).scale(f.from_int(2)) + &t.b;
    Ok(QuadTriple::new(new_a, new_b, t.a.clone()))
}

/// An eventually periodic expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicExpansion {
    pub preperiod: Vec<TPoly>,
    pub period: Vec<TPoly>,
}

/// Default step cap: `10 * (deg disc + 1) * q`.
pub fn default_period_bound(t: &QuadTriple) -> usize {
    let d = t.discriminant().degree().unwrap_or(0);
    10 * (d + 1) * t.field().order() as usize
}

/// Exact expansion of the root of `t` selected by `branch_seed`.
///
/// Tail equations are transported exactly; a series shadow of the current
/// tail is used only to read off the next quotient and is refreshed by
/// Newton's method on the current tail equation when it runs low.
pub fn quad_expand(
    t: &QuadTriple,
    branch_seed: &LaurentSeries,
    bound: Option<usize>,
) -> Result<PeriodicExpansion, CfError> {
    let mut t = t.normalized();
    if !t.is_irrational() {
        return Err(CfError::Degenerate);
    }
    let bound = bound.unwrap_or_else(|| default_period_bound(&t));
    let margin = 16 + 2 * (deg(&t.a) + deg(&t.b) + deg(&t.c)).max(0) as usize;
    let mut shadow = refresh(&t, branch_seed, margin)?;
    let mut seen: HashMap<(Vec<Vec<u32>>, Vec<u32>), usize> = HashMap::new();
    let mut quotients: Vec<TPoly> = Vec::new();

    for n in 0..=bound {
        let sep = t.root_separation();
        if shadow.lo() > sep.min(0) - 1 {
            shadow = refresh(&t, &shadow, margin)?;
        }
        let prefix: Vec<u32> = (sep.min(0) - 1..=shadow.hi().unwrap_or(0))
            .rev()
            .map(|e| shadow.coeff(e).expect("certified").index())
            .collect();
        if let Some(&m) = seen.get(&(t.key(), prefix.clone())) {
            return Ok(PeriodicExpansion { preperiod: quotients[..m].to_vec(), period: quotients[m..].to_vec() });
        }
        seen.insert((t.key(), prefix), n);

        let mut extra = margin;
        let (a, next) = loop {
            let (a, rest) = shadow.polypart()?;
            if !rest.is_empty() {
                let next = rest.inv()?;
                let next_t = quad_tail_step(&t, &a)?;
                if next.lo() <= next_t.root_separation().min(0) - 1 {
                    break (a, next);
                }
            }
            extra *= 2;
            shadow = refresh(&t, &shadow, extra)?;
        };
        t = quad_tail_step(&t, &a)?;
        quotients.push(a);
        shadow = next;
    }
    Err(CfError::NoPeriod(bound))
}

fn refresh(t: &QuadTriple, seed: &LaurentSeries, extra: usize) -> Result<LaurentSeries, CfError> {
    let hi = seed.hi().ok_or(SeriesError::ZeroInverse)?;
    let floor = t.root_separation().min(0) - extra as i64;
    let terms = (hi - floor + 1).max(1) as usize;
    Ok(newton_root(&t.to_xpoly(), seed, terms)?)
}

type Mat = [[TPoly; 2]; 2];

fn cf_matrix(field: &Field, qs: &[TPoly]) -> Mat {
    let mut m: Mat = [[TPoly::one(field), TPoly::zero(field)], [TPoly::zero(field), TPoly::one(field)]];
    for a in qs {
        // m * [[a, 1], [1, 0]]
        m = [
            [&(&m[0][0] * a) + &m[0][1], m[0][0].clone()],
            [&(&m[1][0] * a) + &m[1][1], m[1][0].clone()],
        ];
    }
    m
}

/// Quadratic equation of `[preperiod, period, period, ...]`.
pub fn periodic_to_equation(field: &Field, preperiod: &[TPoly], period: &[TPoly]) -> Result<QuadTriple, CfError> {
    if period.is_empty() || period.iter().any(|a| a.degree().unwrap_or(0) == 0) {
        return Err(CfError::BadPeriod);
    }
    let m = cf_matrix(field, period);
    // beta = (m00 beta + m01) / (m10 beta + m11)
    let a = m[1][0].clone();
    let b = &m[1][1] - &m[0][0];
    let c = -&m[0][1];
    let n = cf_matrix(field, preperiod);
    let two = field.from_int(2);
    let (n00, n01, n10, n11) = (&n[0][0], &n[0][1], &n[1][0], &n[1][1]);
    let na = &(&(&a * &(n11 * n11)) - &(&b * &(n11 * n10))) + &(&c * &(n10 * n10));
    let nb = &(&(&(&a * &(n01 * n11)).scale(two) * &TPoly::constant(field, field.neg(field.one())))
        + &(&b * &(&(n01 * n10) + &(n11 * n00))))
        - &(&c * &(n10 * n00)).scale(two);
    let nc = &(&(&a * &(n01 * n01)) - &(&b * &(n01 * n00))) + &(&c * &(n00 * n00));
    let t = QuadTriple::new(na, nb, nc);
    if t.a.is_zero() && t.b.is_zero() && t.c.is_zero() {
        return Err(CfError::Degenerate);
    }
    if !t.is_irrational() {
        return Err(CfError::Degenerate);
    }
    Ok(t)
}

/// Finite-prefix growth data: `deg(a_{n+1}) / sum_{k<=n} deg(a_k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthStat {
    /// `(n, ratio)` for every `n` with a positive partial degree sum.
    pub values: Vec<(usize, Ratio<i64>)>,
    pub window: usize,
    /// Supremum over the last `window` values: an estimate, not a limsup.
    pub window_sup: Ratio<i64>,
    /// Strict running maxima of the ratio restricted to the window's
    /// "new record degree" points, useful for watching convergence.
    pub records: Vec<(usize, Ratio<i64>)>,
}

pub fn growth_stat(e: &Expansion, window: usize) -> Result<GrowthStat, CfError> {
    if e.certified < 2 {
        return Err(CfError::TooShort);
    }
    let degs: Vec<i64> = e.quotients[..e.certified].iter().map(|q| q.degree().map_or(0, |d| d as i64)).collect();
    let mut values = Vec::new();
    let mut records = Vec::new();
    let mut sum = 0i64;
    let mut max_deg = i64::MIN;
    for n in 0..degs.len() - 1 {
        sum += degs[n];
        if sum > 0 {
            let r = Ratio::new(degs[n + 1], sum);
            values.push((n, r));
            if degs[n + 1] > max_deg {
                records.push((n, r));
            }
        }
        max_deg = max_deg.max(degs[n + 1]);
    }
    if values.is_empty() {
        return Err(CfError::TooShort);
    }
    let window = window.clamp(1, values.len());
    let window_sup = values[values.len() - window..].iter().map(|&(_, r)| r).max().expect("nonempty");
    Ok(GrowthStat { values, window, window_sup, records })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    fn lin(f: &Field, c: i64) -> TPoly {
        TPoly::from_ints(f, &[0, c])
    }

    #[test]
    fn continuant_examples() {
        let f = fp(7);
        assert!(continuant(&f, &[]).is_one());
        assert_eq!(continuant(&f, &[lin(&f, 3)]), lin(&f, 3));
        assert_eq!(continuant(&f, &[lin(&f, 1), lin(&f, 1)]), TPoly::from_ints(&f, &[1, 0, 1]));
        assert_eq!(
            continuant(&f, &[lin(&f, 5), lin(&f, 1), lin(&f, 1)]),
            TPoly::from_ints(&f, &[0, 6, 0, 5])
        );
    }

    #[test]
    fn eval_examples() {
        let f = fp(5);
        let a = TPoly::from_ints(&f, &[2, 1]);
        assert_eq!(eval_cf(&f, &[a.clone()]).unwrap(), RationalFunc::from_poly(a));
        let t = TPoly::t(&f);
        let v = eval_cf(&f, &[t.clone(), t.clone(), t.clone()]).unwrap();
        let expect = RationalFunc::new(TPoly::from_ints(&f, &[0, 2, 0, 1]), TPoly::from_ints(&f, &[1, 0, 1])).unwrap();
        assert_eq!(v, expect);
        let zero = TPoly::zero(&f);
        assert_eq!(eval_cf(&f, &[t, zero]), Err(CfError::ZeroDenominator));
    }

    #[test]
    fn small_rational_expansions() {
        let f3 = fp(3);
        let r = RationalFunc::new(TPoly::from_ints(&f3, &[1, 0, 1]), TPoly::t(&f3)).unwrap();
        let e = expand_rational(&r);
        assert_eq!(e.quotients, vec![TPoly::t(&f3), TPoly::t(&f3)]);
        let e = expand_rational(&RationalFunc::from_poly(TPoly::t(&f3)));
        assert_eq!(e.quotients, vec![TPoly::t(&f3)]);
    }

    #[test]
    fn constant_brackets() {
        let f = fp(7);
        let xs = [5, 1, 2].map(|x| f.from_int(x));
        assert_eq!(bracket_const(&f, &xs).unwrap(), f.one());
        let bad = [1, 6].map(|x| f.from_int(x)); // <6> = 6, <1,6> = 7 = 0 ... denominator is <6>
        assert!(bracket_const(&f, &bad).is_ok());
        let zero_den = [3, 0].map(|x| f.from_int(x));
        assert_eq!(bracket_const(&f, &zero_den), Err(CfError::ZeroDenominator));
    }

    #[test]
    fn poly_square_roots() {
        let f = fp(11);
        let s = TPoly::from_ints(&f, &[3, 5, 0, 2]);
        assert_eq!(poly_sqrt(&(&s * &s)).map(|r| r.monic()), Some(s.monic()));
        assert!(poly_sqrt(&TPoly::from_ints(&f, &[1, 0, 0, 1])).is_none());
    }

    #[test]
    fn tail_step_with_zero_quotient_swaps() {
        let f = fp(11);
        let t = QuadTriple::new(TPoly::from_ints(&f, &[1, 0, 6]), TPoly::from_ints(&f, &[0, 9, 0, 5]), TPoly::from_ints(&f, &[10, 0, 9]));
        let s = quad_tail_step(&t, &TPoly::zero(&f)).unwrap();
        assert_eq!(s, QuadTriple::new(t.c.clone(), t.b.clone(), t.a.clone()));
    }

    #[test]
    fn growth_of_constant_quotients() {
        let f = fp(3);
        let e = Expansion {
            field: f.clone(),
            quotients: vec![TPoly::t(&f); 6],
            certified: 6,
            stopped: StopReason::Budget,
        };
        let g = growth_stat(&e, 2).unwrap();
        let vals: Vec<Ratio<i64>> = g.values.iter().map(|&(_, r)| r).collect();
        assert_eq!(vals, (1..=5).map(|k| Ratio::new(1, k)).collect::<Vec<_>>());
        assert_eq!(g.window_sup, Ratio::new(1, 4));
    }
}
