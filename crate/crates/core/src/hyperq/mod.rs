//! Hyperquadratic power series: the `E(p, k, l)` family, the quartic
//! verifier and its companions.

mod mills;
mod rqe;
mod theorem1;

pub use mills::{mills_robbins_check, mills_robbins_target, MillsRobbinsReport, MILLS_ROBBINS_DEFAULT_V2};
pub use rqe::{
    certify_pattern, perfect_growth_check, rqe_divides, rqe_epsilons, rqe_h, rqe_p, rqe_p_in, rqe_params,
    certify_rqe, rqe_expansion, rqe_root, rqe_theorem1_coefficients, scan_primes, DivisibilityReport, GrowthCheck, Mismatch, PatternReport,
    RqeData, ScanEntry, ScanReport,
};
pub use theorem1::{nullspace, theorem1_exponent, theorem1_solve, Theorem1Outcome};

use thiserror::Error;

use crate::contfrac::{bracket_const, continuant, CfError};
use crate::ffield::{Field, FieldElement, FieldError};
use crate::laurent::{LaurentSeries, SeriesError};
use crate::polyring::{PolyError, TPoly, XPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HyperError {
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("zero denominator in a constant continued fraction")]
    ZeroDenominator,
    #[error("p = {0} is not a prime congruent to 1 mod 3 above 3")]
    NotRqePrime(u32),
    #[error("hypothesis 12A + C^2 = 0 fails")]
    Hypothesis,
    #[error("precision too low: {0}")]
    Precision(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Cf(#[from] CfError),
}

fn bracket(f: &Field, xs: &[FieldElement]) -> Result<FieldElement, HyperError> {
    bracket_const(f, xs).map_err(|_| HyperError::ZeroDenominator)
}

/// Necessary-condition check of `alpha = (A alpha^r + B) / (C alpha^r + D)`
/// at the certified precision of `alpha`.
pub fn is_hyperquadratic_witness(
    alpha: &LaurentSeries,
    r: u64,
    a: &TPoly,
    b: &TPoly,
    c: &TPoly,
    d: &TPoly,
) -> Result<bool, HyperError> {
    if [a, b, c, d].iter().all(|x| x.is_zero()) {
        return Err(HyperError::BadParams("witness is all zero".into()));
    }
    let ar = alpha.frobenius(r)?;
    let den = ar.mul_poly(c).add(&LaurentSeries::from_poly(d));
    let num = ar.mul_poly(a).add(&LaurentSeries::from_poly(b));
    let top = [alpha.hi().zip(den.hi()).map(|(x, y)| x + y), num.hi()].into_iter().flatten().max();
    let res = alpha.mul(&den).sub(&num);
    if !res.is_exact() && top.is_none_or(|t| res.lo() > t) {
        return Err(HyperError::Precision("no certified coefficient of the residual".into()));
    }
    Ok(res.coeffs().iter().all(|c| c.is_zero()))
}

/// `(v_1, ..., v_{2k})` with `v_1 = 2k - 1` and
/// `v_{i+1} v_i = (2k-2i-1)(2k-2i+1) / (i(2k-i))`.
pub fn v_sequence(p: u32, k: u32) -> Result<Vec<FieldElement>, HyperError> {
    if p < 3 || !crate::ffield::is_prime(p as u64) || k == 0 || 2 * k >= p {
        return Err(HyperError::BadParams(format!("need p an odd prime and 1 <= k < p/2, got p={p}, k={k}")));
    }
    let f = Field::prime(p)?;
    v_sequence_in(&f, k)
}

pub(crate) fn v_sequence_in(f: &Field, k: u32) -> Result<Vec<FieldElement>, HyperError> {
    let k = k as i64;
    let mut v = vec![f.from_int(2 * k - 1)];
    for i in 1..2 * k {
        let num = f.from_int((2 * k - 2 * i - 1) * (2 * k - 2 * i + 1));
        let den = f.from_int(i * (2 * k - i));
        let prod = f.div(num, den)?;
        let prev = *v.last().expect("nonempty");
        v.push(f.div(prod, prev)?);
    }
    if v.iter().any(|x| x.is_zero()) {
        return Err(HyperError::BadParams("zero entry in v-sequence".into()));
    }
    Ok(v)
}

/// The continuants `K_{m,n} = <v_m T, ..., v_n T>`.
#[derive(Clone, Debug)]
pub struct KTable {
    field: Field,
    v: Vec<FieldElement>,
}

impl KTable {
    pub fn new(p: u32, k: u32) -> Result<Self, HyperError> {
        let v = v_sequence(p, k)?;
        Ok(KTable { field: Field::prime(p)?, v })
    }

    pub(crate) fn from_parts(field: Field, v: Vec<FieldElement>) -> Self {
        KTable { field, v }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// 1-based `v_i`.
    pub fn v(&self, i: usize) -> FieldElement {
        self.v[i - 1]
    }

    pub fn vs(&self) -> &[FieldElement] {
        &self.v
    }

    /// `K_{m,n}` for `1 <= m <= n <= 2k`, with `K_{m,m-1} = 1`.
    pub fn k(&self, m: usize, n: usize) -> Result<TPoly, HyperError> {
        if m == 0 || n > self.v.len() || n + 1 < m {
            return Err(HyperError::BadParams(format!("K index ({m},{n}) out of range")));
        }
        let xs: Vec<TPoly> = self.v[m - 1..n].iter().map(|&c| TPoly::monomial(&self.field, c, 1)).collect();
        Ok(continuant(&self.field, &xs))
    }
}

/// `K_{m,n}` for the v-sequence of `(p, k)`.
pub fn k_continuant(p: u32, k: u32, m: usize, n: usize) -> Result<TPoly, HyperError> {
    KTable::new(p, k)?.k(m, n)
}

/// `A_0 = T`, `A_{m+1}` = polynomial part of `A_m^p / (T^2 - 1)^k`.
pub fn a_sequence(p: u32, k: u32, m_max: usize) -> Result<Vec<TPoly>, HyperError> {
    let f = Field::prime(p)?;
    Ok(a_sequence_in(&f, k, m_max))
}

pub(crate) fn a_sequence_in(f: &Field, k: u32, m_max: usize) -> Vec<TPoly> {
    let p = f.characteristic() as u64;
    let den = TPoly::from_ints(f, &[-1, 0, 1]).pow(k as u64);
    let mut out = vec![TPoly::t(f)];
    for _ in 0..m_max {
        let prev = out.last().expect("nonempty");
        // over F_p, A^p just dilates exponents
        let ap = prev.frobenius();
        let (q, _) = ap.divmod(&den).expect("nonzero");
        debug_assert_eq!(q.degree(), prev.degree().map(|d| d * p as usize - 2 * k as usize));
        out.push(q);
    }
    out
}

/// `max { k : m^k | n }`.
pub fn padic_valuation(m: u64, n: u64) -> u32 {
    assert!(m >= 2 && n >= 1, "padic_valuation needs m >= 2 and n >= 1");
    let mut n = n;
    let mut k = 0;
    while n % m == 0 {
        n /= m;
        k += 1;
    }
    k
}

/// `i(n) = v_{4j+1}(4n - 1)`.
pub fn i_of_n(j: u64, n: u64) -> u32 {
    padic_valuation(4 * j + 1, 4 * n - 1)
}

/// Parameters of `E(p, k, l)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperParams {
    pub p: u32,
    pub k: u32,
    pub lambdas: Vec<FieldElement>,
    pub u1: FieldElement,
    pub u2: FieldElement,
}

impl HyperParams {
    pub fn l(&self) -> usize {
        self.lambdas.len()
    }

    pub fn validate(&self) -> Result<Field, HyperError> {
        let f = Field::prime(self.p)?;
        if self.p < 3 || self.k == 0 || 2 * self.k >= self.p {
            return Err(HyperError::BadParams(format!("need p > 2 and 1 <= k < p/2, got p={}, k={}", self.p, self.k)));
        }
        if self.lambdas.is_empty() {
            return Err(HyperError::BadParams("l must be at least 1".into()));
        }
        if self.lambdas.iter().chain([&self.u1, &self.u2]).any(|x| x.is_zero() || x.index() >= self.p) {
            return Err(HyperError::BadParams("lambdas, u1, u2 must be nonzero elements of F_p".into()));
        }
        Ok(f)
    }

    fn continuants(&self, f: &Field) -> [TPoly; 4] {
        let qs: Vec<TPoly> = self.lambdas.iter().map(|&c| TPoly::monomial(f, c, 1)).collect();
        let l = qs.len();
        [
            continuant(f, &qs),
            continuant(f, &qs[..l - 1]),
            continuant(f, &qs[1..]),
            if l >= 2 { continuant(f, &qs[1..l - 1]) } else { TPoly::zero(f) },
        ]
    }
}

/// Condition (*): `[lambda_1, ..., lambda_{l-1}, lambda_l - 2k (u1/u2)(v_{2k}/v_1)]
/// = k 2^{1-2k} binom(2k, k) u2` in `F_p`.
pub fn condition_star(params: &HyperParams) -> Result<bool, HyperError> {
    let f = params.validate()?;
    let v = v_sequence_in(&f, params.k)?;
    let k = params.k as i64;
    let shift = f.mul(
        f.mul(f.from_int(2 * k), f.div(params.u1, params.u2)?),
        f.div(v[2 * params.k as usize - 1], v[0])?,
    );
    let mut xs = params.lambdas.clone();
    let last = xs.len() - 1;
    xs[last] = f.sub(xs[last], shift);
    let lhs = bracket(&f, &xs)?;
    let rhs = f.mul(
        f.mul(f.from_int(k), f.powi(f.from_int(2), 1 - 2 * k)?),
        f.mul(f.binomial(2 * k as u64, k as u64), params.u2),
    );
    Ok(lhs == rhs)
}

/// The degree `p + 1` equation of the element of `E(p, k, l)` with the given
/// parameters: `Q_l X^{p+1} - P_l X^p + (u1 K Q_{l-1} - u2 K' Q_l) X
/// + (u2 K' P_l - u1 K P_{l-1})` where `P, Q` are the continuants of
/// `lambda_i T` and `K = K_{1,2k}`, `K' = K_{1,2k-1}`.
pub fn build_e_equation(params: &HyperParams) -> Result<XPoly, HyperError> {
    let f = params.validate()?;
    let table = KTable::from_parts(f.clone(), v_sequence_in(&f, params.k)?);
    let two_k = 2 * params.k as usize;
    let kk = table.k(1, two_k)?.scale(params.u1);
    let kp = table.k(1, two_k - 1)?.scale(params.u2);
    let [pl, pl1, ql, ql1] = params.continuants(&f);
    let p = params.p as usize;
    let mut coeffs = vec![TPoly::zero(&f); p + 2];
    coeffs[p + 1] = ql.clone();
    coeffs[p] = -&pl;
    coeffs[1] = &(&kk * &ql1) - &(&kp * &ql);
    coeffs[0] = &(&kp * &pl) - &(&kk * &pl1);
    Ok(XPoly::from_tpolys(&f, coeffs))
}

/// Strips `count` quotients from `alpha`, returning them and the tail.
pub fn strip_quotients(alpha: &LaurentSeries, count: usize) -> Result<(Vec<TPoly>, LaurentSeries), HyperError> {
    let mut x = alpha.clone();
    let mut qs = Vec::with_capacity(count);
    for _ in 0..count {
        let (a, rest) = x.polypart()?;
        qs.push(a);
        x = rest.inv()?;
    }
    Ok((qs, x))
}

/// Checks `alpha^p = u1 K_{1,2k} alpha_{l+1} + u2 K_{1,2k-1}` on the common
/// certified precision; `None` when nothing is certified.
pub fn frobenius_relation_holds(params: &HyperParams, alpha: &LaurentSeries) -> Result<Option<bool>, HyperError> {
    let f = alpha.field();
    let kfield = Field::prime(params.p)?;
    let table = KTable::from_parts(kfield, v_sequence_in(&Field::prime(params.p)?, params.k)?);
    let two_k = 2 * params.k as usize;
    let lift = |t: TPoly| TPoly::new(f, t.coeffs().to_vec());
    let kk = lift(table.k(1, two_k)?).scale(params.u1);
    let kp = lift(table.k(1, two_k - 1)?).scale(params.u2);
    let (_, tail) = strip_quotients(alpha, params.l())?;
    let lhs = alpha.frobenius(params.p as u64)?;
    let rhs = tail.mul_poly(&kk).add(&LaurentSeries::from_poly(&kp));
    let top = lhs.hi().into_iter().chain(rhs.hi()).max();
    let diff = lhs.sub(&rhs);
    if top.is_none_or(|t| diff.lo() > t) {
        return Ok(None);
    }
    Ok(Some(diff.coeffs().iter().all(|c| c.is_zero())))
}
