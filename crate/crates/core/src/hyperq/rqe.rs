//! The quartic `(9/32)X^4 - T X^3 + X^2 - 8/27 = 0` for `p = 1 mod 3`.

use std::time::Instant;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    a_sequence_in, bracket, condition_star, frobenius_relation_holds, i_of_n, v_sequence_in, HyperError,
    HyperParams, KTable,
};
use crate::contfrac::{expand_series, growth_stat, Expansion};
use crate::ffield::{is_prime, Field, FieldElement};
use crate::laurent::{newton_root, LaurentSeries};
use crate::polyring::{RationalFunc, TPoly, XPoly};

fn check_rqe_prime(p: u32) -> Result<u32, HyperError> {
    if p <= 3 || !is_prime(p as u64) || p % 3 != 1 {
        return Err(HyperError::NotRqePrime(p));
    }
    Ok((p - 1) / 6)
}

fn rat(f: &Field, n: i64, d: i64) -> FieldElement {
    f.from_rational(n, d).expect("denominator prime to p")
}

/// The quartic over `field` (characteristic above 3).
pub fn rqe_p_in(field: &Field) -> Result<XPoly, HyperError> {
    if field.characteristic() <= 3 {
        return Err(HyperError::BadParams("characteristic must exceed 3".into()));
    }
    let c = |n, d| TPoly::constant(field, rat(field, n, d));
    let coeffs = vec![c(-8, 27), TPoly::zero(field), TPoly::one(field), -&TPoly::t(field), c(9, 32)];
    Ok(XPoly::from_tpolys(field, coeffs))
}

/// The quartic over `F_p`, `p > 3`.
pub fn rqe_p(p: u32) -> Result<XPoly, HyperError> {
    if p <= 3 || !is_prime(p as u64) {
        return Err(HyperError::BadParams(format!("p = {p} must be a prime above 3")));
    }
    rqe_p_in(&Field::prime(p)?)
}

/// `(A, B, C)` of the quartic scaled to constant term 1, i.e. divided by
/// `-8/27`: `(-243/256, 27T/8, -27/8)`.
pub fn rqe_theorem1_coefficients(field: &Field) -> [RationalFunc; 3] {
    let s = rat(field, -27, 8);
    let p = rqe_p_in(field).expect("characteristic above 3");
    [p.coeff(4).scale(s), p.coeff(3).scale(s), p.coeff(2).scale(s)]
}

/// `(epsilon, epsilon')`.
pub fn rqe_epsilons(p: u32) -> Result<(FieldElement, FieldElement), HyperError> {
    let j = check_rqe_prime(p)? as usize;
    let f = Field::prime(p)?;
    let v = v_sequence_in(&f, 2 * j as u32)?;
    epsilons(&f, j, &v)
}

fn epsilons(f: &Field, j: usize, v: &[FieldElement]) -> Result<(FieldElement, FieldElement), HyperError> {
    let vj1 = v[j];
    let eps = f.div(rat(f, 32, 9), vj1)?;
    // [v_{j+1}, ..., v_{4j-1}, 3 v_{4j} / 5]
    let mut xs = v[j..4 * j - 1].to_vec();
    xs.push(f.mul(v[4 * j - 1], rat(f, 3, 5)));
    let br = bracket(f, &xs)?;
    let num = f.powi(f.from_int(-16), j as i64 + 1)?;
    let den = f.mul(f.mul(f.from_int(3), vj1), f.binomial(4 * j as u64, 2 * j as u64));
    let eps_p = f.mul(f.div(num, den)?, br);
    if eps.is_zero() || eps_p.is_zero() {
        return Err(HyperError::BadParams("epsilon vanishes".into()));
    }
    Ok((eps, eps_p))
}

/// Everything derived from `p`.
#[derive(Clone, Debug)]
pub struct RqeData {
    pub p: u32,
    pub j: u32,
    pub epsilon: FieldElement,
    pub epsilon_prime: FieldElement,
    pub k_table: KTable,
    pub h: XPoly,
    pub p_poly: XPoly,
}

impl RqeData {
    pub fn new(p: u32) -> Result<Self, HyperError> {
        let j = check_rqe_prime(p)?;
        let f = Field::prime(p)?;
        let v = v_sequence_in(&f, 2 * j)?;
        let (epsilon, epsilon_prime) = epsilons(&f, j as usize, &v)?;
        let k_table = KTable::from_parts(f.clone(), v);
        let h = build_h(&f, j as usize, &k_table, epsilon, epsilon_prime)?;
        Ok(RqeData { p, j, epsilon, epsilon_prime, k_table, h, p_poly: rqe_p_in(&f)? })
    }

    pub fn field(&self) -> &Field {
        self.k_table.field()
    }
}

/// `H = K_{j+2,4j} X^{p+1} - eps K_{j+1,4j} X^p + eps' (K_{1,j} X + eps K_{1,j-1})`.
fn build_h(f: &Field, j: usize, kt: &KTable, eps: FieldElement, eps_p: FieldElement) -> Result<XPoly, HyperError> {
    let p = f.characteristic() as usize;
    let mut coeffs = vec![TPoly::zero(f); p + 2];
    coeffs[p + 1] = kt.k(j + 2, 4 * j)?;
    coeffs[p] = kt.k(j + 1, 4 * j)?.scale(f.neg(eps));
    coeffs[1] = kt.k(1, j)?.scale(eps_p);
    coeffs[0] = kt.k(1, j - 1)?.scale(f.mul(eps_p, eps));
    Ok(XPoly::from_tpolys(f, coeffs))
}

pub fn rqe_h(p: u32) -> Result<XPoly, HyperError> {
    Ok(RqeData::new(p)?.h)
}

/// `E(p, 2j, 3j)` parameters: `lambda_i = v_{j+i} eps^{(-1)^{i+1}}`,
/// `u2 = (-1)^j eps'`, `u1 = u2 eps^{(-1)^{j+1}}`.
pub fn rqe_params(p: u32) -> Result<HyperParams, HyperError> {
    let data = RqeData::new(p)?;
    let f = data.field();
    let j = data.j as usize;
    let eps = data.epsilon;
    let eps_inv = f.inv(eps)?;
    let alt = |i: usize| if i % 2 == 1 { eps } else { eps_inv };
    let lambdas = (1..=3 * j).map(|i| f.mul(data.k_table.v(j + i), alt(i))).collect();
    let sign = if j % 2 == 0 { f.one() } else { f.neg(f.one()) };
    let u2 = f.mul(sign, data.epsilon_prime);
    let u1 = f.mul(u2, if j % 2 == 0 { eps_inv } else { eps });
    Ok(HyperParams { p, k: 2 * data.j, lambdas, u1, u2 })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisibilityReport {
    pub p: u32,
    pub divides: bool,
    /// `quotient * P == H` recomputed exactly.
    pub remultiplied: bool,
    pub quotient_degree: Option<usize>,
    /// Printed remainder when nonzero.
    pub remainder: Option<String>,
}

/// Whether the quartic divides `H`, with an exact re-multiplication check.
pub fn rqe_divides(p: u32) -> Result<DivisibilityReport, HyperError> {
    let data = RqeData::new(p)?;
    let (q, r) = data.h.divmod(&data.p_poly)?;
    let divides = r.is_zero();
    let remultiplied = divides && &q * &data.p_poly == data.h;
    Ok(DivisibilityReport {
        p,
        divides,
        remultiplied,
        quotient_degree: q.degree(),
        remainder: (!divides).then(|| r.to_string()),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanEntry {
    pub p: u32,
    pub divides: bool,
    pub remultiplied: bool,
    /// `12A + C^2 = 0` for the quartic as displayed.
    pub raw_hypothesis: bool,
    /// The same for the quartic scaled to constant term 1.
    pub normalized_hypothesis: bool,
    /// Wall time; kept out of JSON so reports are reproducible.
    #[serde(skip)]
    pub millis: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub p_max: u32,
    pub checked: usize,
    pub all_divide: bool,
    pub primes: Vec<ScanEntry>,
}

fn hypothesis(a: &RationalFunc, c: &RationalFunc) -> bool {
    let f = a.field();
    (&a.scale(f.from_int(12)) + &(c * c)).is_zero()
}

/// Runs [`rqe_divides`] for every prime `p = 1 mod 3` in `[7, p_max]`, in
/// parallel, reported in increasing `p`.
pub fn scan_primes(p_max: u32) -> Result<ScanReport, HyperError> {
    let primes: Vec<u32> = (7..=p_max).filter(|&p| is_prime(p as u64) && p % 3 == 1).collect();
    let mut primes: Vec<ScanEntry> = primes
        .par_iter()
        .map(|&p| {
            let start = Instant::now();
            let d = rqe_divides(p)?;
            let f = Field::prime(p)?;
            let raw = rqe_p_in(&f)?;
            let [a, _, c] = rqe_theorem1_coefficients(&f);
            Ok(ScanEntry {
                p,
                divides: d.divides,
                remultiplied: d.remultiplied,
                raw_hypothesis: hypothesis(&raw.coeff(4), &raw.coeff(2)),
                normalized_hypothesis: hypothesis(&a, &c),
                millis: start.elapsed().as_millis(),
            })
        })
        .collect::<Result<_, HyperError>>()?;
    primes.sort_by_key(|e| e.p);
    Ok(ScanReport {
        p_max,
        checked: primes.len(),
        all_divide: primes.iter().all(|e| e.divides && e.remultiplied),
        primes,
    })
}

/// Root of the quartic with leading term `(32/9) T`, to `terms` coefficients.
pub fn rqe_root(field: &Field, terms: usize) -> Result<LaurentSeries, HyperError> {
    let s = rqe_p_in(field)?;
    let seed = LaurentSeries::monomial(field, rat(field, 32, 9), 1);
    Ok(newton_root(&s, &seed, terms)?)
}

/// Root and a certified expansion of at least `min_certified` quotients.
pub fn rqe_expansion(p: u32, min_certified: usize) -> Result<(LaurentSeries, Expansion), HyperError> {
    check_rqe_prime(p)?;
    let f = Field::prime(p)?;
    let mut terms = 4 * min_certified + 64;
    loop {
        let alpha = rqe_root(&f, terms)?;
        let e = expand_series(&alpha, min_certified);
        if e.certified >= min_certified {
            return Ok((alpha, e));
        }
        if terms > 1 << 22 {
            return Err(HyperError::Precision(format!("only {} quotients certified", e.certified)));
        }
        terms *= 2;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    /// 1-based position (`a_1` is the first quotient).
    pub n: usize,
    pub i_n: u32,
    pub expected_degree: String,
    pub actual: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthCheck {
    pub target: String,
    pub window: usize,
    pub window_sup: Option<String>,
    /// `"attained"`, `"not attained"` or `"prefix too short"`.
    pub status: String,
    pub attained: bool,
    /// `(n, ratio)` at each new record degree.
    pub records: Vec<(usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternReport {
    pub p: u32,
    pub j: u32,
    pub certified: usize,
    pub passed: bool,
    pub shape_ok: bool,
    pub degree_ok: bool,
    pub initial_lambdas_ok: bool,
    /// `null` when the constant continued fraction has a zero denominator.
    pub condition_star: Option<bool>,
    /// Filled by the pipeline that also holds the series.
    pub frobenius_relation: Option<bool>,
    pub epsilon: u32,
    pub epsilon_prime: u32,
    pub u1: u32,
    pub u2: u32,
    pub degrees: Vec<i64>,
    pub lambdas: Vec<u32>,
    pub mismatches: Vec<Mismatch>,
    pub growth: GrowthCheck,
}

fn show(r: Ratio<i64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Compares the growth window-sup with `(p - 2k - 1) / l`.
pub fn perfect_growth_check(p: u32, k: u32, l: usize, expansion: &Expansion, window: usize) -> GrowthCheck {
    let target = Ratio::new(p as i64 - 2 * k as i64 - 1, l as i64);
    let short = |window| GrowthCheck {
        target: show(target),
        window,
        window_sup: None,
        status: "prefix too short".into(),
        attained: false,
        records: vec![],
    };
    if expansion.certified <= l + 1 {
        return short(window);
    }
    let Ok(g) = growth_stat(expansion, window) else {
        return short(window);
    };
    let attained = g.window_sup == target;
    GrowthCheck {
        target: show(target),
        window: g.window,
        window_sup: Some(show(g.window_sup)),
        status: if attained { "attained" } else { "not attained" }.into(),
        attained,
        records: g.records.iter().map(|&(n, r)| (n, show(r))).collect(),
    }
}

/// Shape certification of a certified prefix of the quartic's root:
/// `a_n = lambda_n A_{i(n)}` with `deg a_n = (p^{i(n)} + 2)/3`, the initial
/// `lambda_i` for `i <= 3j`, and condition (*) for the implied parameters.
pub fn certify_pattern(p: u32, expansion: &Expansion) -> Result<PatternReport, HyperError> {
    let params = rqe_params(p)?;
    let data = RqeData::new(p)?;
    let f = data.field().clone();
    let j = data.j as u64;
    let l = params.l();
    let qs = &expansion.quotients[..expansion.certified];
    if expansion.field != f {
        return Err(HyperError::BadParams("expansion is not over F_p".into()));
    }
    let max_i = (1..=qs.len() as u64).map(|n| i_of_n(j, n)).max().unwrap_or(0);
    let a_seq = a_sequence_in(&f, 2 * j as u32, max_i as usize);
    let mut mismatches = Vec::new();
    let mut lambdas = Vec::with_capacity(qs.len());
    let (mut shape_ok, mut degree_ok) = (true, true);
    for (idx, a) in qs.iter().enumerate() {
        let n = idx + 1;
        let i = i_of_n(j, n as u64);
        let expected = (p as u128).pow(i) + 2;
        let want_deg = expected / 3;
        if a.degree().map(|d| d as u128) != Some(want_deg) {
            degree_ok = false;
            mismatches.push(Mismatch {
                n,
                i_n: i,
                expected_degree: want_deg.to_string(),
                actual: a.to_string(),
                reason: "degree".into(),
            });
        }
        match a.proportional_to(&a_seq[i as usize]) {
            Some(c) if !c.is_zero() => lambdas.push(c.index()),
            _ => {
                shape_ok = false;
                lambdas.push(0);
                mismatches.push(Mismatch {
                    n,
                    i_n: i,
                    expected_degree: want_deg.to_string(),
                    actual: a.to_string(),
                    reason: format!("not a multiple of A_{i}"),
                });
            }
        }
    }
    let initial_lambdas_ok = qs.len() >= l
        && params.lambdas.iter().zip(&lambdas).all(|(want, &got)| want.index() == got);
    let observed = HyperParams {
        lambdas: lambdas.iter().take(l).map(|&x| f.from_int(x as i64)).collect(),
        ..params.clone()
    };
    let condition = if lambdas.len() >= l && lambdas[..l].iter().all(|&x| x != 0) {
        match condition_star(&observed) {
            Ok(b) => Some(b),
            Err(HyperError::ZeroDenominator) => None,
            Err(e) => return Err(e),
        }
    } else {
        Some(false)
    };
    let growth = perfect_growth_check(p, params.k, l, expansion, expansion.certified);
    let passed = shape_ok && degree_ok && initial_lambdas_ok && condition == Some(true);
    Ok(PatternReport {
        p,
        j: data.j,
        certified: expansion.certified,
        passed,
        shape_ok,
        degree_ok,
        initial_lambdas_ok,
        condition_star: condition,
        frobenius_relation: None,
        epsilon: data.epsilon.index(),
        epsilon_prime: data.epsilon_prime.index(),
        u1: params.u1.index(),
        u2: params.u2.index(),
        degrees: expansion.degrees()[..expansion.certified].to_vec(),
        lambdas,
        mismatches,
        growth,
    })
}

/// Full pipeline: root, expansion, shape certification and the Frobenius
/// relation `alpha^p = u1 K_{1,2k} alpha_{l+1} + u2 K_{1,2k-1}`.
pub fn certify_rqe(p: u32, min_certified: usize) -> Result<PatternReport, HyperError> {
    let (alpha, e) = rqe_expansion(p, min_certified)?;
    let mut report = certify_pattern(p, &e)?;
    let params = rqe_params(p)?;
    report.frobenius_relation = frobenius_relation_holds(&params, &alpha)?;
    report.passed &= report.frobenius_relation == Some(true);
    Ok(report)
}
