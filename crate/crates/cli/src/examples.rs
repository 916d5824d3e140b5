//! The worked examples, run as a golden suite.

use serde::Serialize;

use hyperfrac::contfrac::{continuant, eval_cf, expand_rational, expand_series, periodic_to_equation, quad_expand, QuadTriple};
use hyperfrac::ffield::Field;
use hyperfrac::hyperq::{
    certify_rqe, is_hyperquadratic_witness, k_continuant, mills_robbins_check, rqe_divides, rqe_h, rqe_root,
    scan_primes, theorem1_solve, v_sequence, Theorem1Outcome, MILLS_ROBBINS_DEFAULT_V2,
};
use hyperfrac::laurent::{newton_root, LaurentSeries};
use hyperfrac::polyring::{RationalFunc, TPoly, XPoly};

#[derive(Serialize)]
pub struct ExampleResult {
    pub id: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Serialize)]
pub struct ExamplesReport {
    pub passed: usize,
    pub failed: usize,
    pub examples: Vec<ExampleResult>,
}

impl ExamplesReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.examples {
            s += &format!("{} {}: {}\n", if e.passed { "ok  " } else { "FAIL" }, e.id, e.detail);
        }
        s + &format!("{} passed, {} failed", self.passed, self.failed)
    }
}

type Check = fn() -> Result<(bool, String), String>;

const EXAMPLES: &[(&str, Check)] = &[
    ("continuant-base", continuant_base),
    ("f13-rational", f13_rational),
    ("f13-eval", f13_eval),
    ("f11-period", f11_period),
    ("golden", golden),
    ("frobenius-family", frobenius_family),
    ("f2-cubic", f2_cubic),
    ("f4-quintic", f4_quintic),
    ("witness-frobenius", witness_frobenius),
    ("witness-golden", witness_golden),
    ("v-first", v_first),
    ("k-empty", k_empty),
    ("rqe-divides-7", || divides(7)),
    ("rqe-divides-13", || divides(13)),
    ("rqe-divides-199", || divides(199)),
    ("scan-13", scan_13),
    ("rqe-h-shape", rqe_h_shape),
    ("rqe-first-quotient", rqe_first_quotient),
    ("rqe-pattern-13", rqe_pattern_13),
    ("theorem1-p5", theorem1_p5),
    ("mills-robbins", mills_robbins),
];

pub fn example_ids() -> Vec<&'static str> {
    EXAMPLES.iter().map(|(id, _)| *id).collect()
}

pub fn run_examples(only: Option<&str>) -> Result<ExamplesReport, String> {
    let selected: Vec<&(&str, Check)> = EXAMPLES.iter().filter(|(id, _)| only.is_none_or(|o| o == *id)).collect();
    if selected.is_empty() {
        return Err(format!("unknown example id; known: {}", example_ids().join(", ")));
    }
    let examples: Vec<ExampleResult> = selected
        .into_iter()
        .map(|(id, f)| {
            let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
            ExampleResult { id, passed, detail }
        })
        .collect();
    let passed = examples.iter().filter(|e| e.passed).count();
    Ok(ExamplesReport { passed, failed: examples.len() - passed, examples })
}

fn fp(p: u32) -> Field {
    Field::prime(p).expect("prime")
}

fn tpow(f: &Field, e: usize) -> TPoly {
    TPoly::monomial(f, f.one(), e)
}

fn lin(f: &Field, c: i64) -> TPoly {
    TPoly::from_ints(f, &[0, c])
}

fn s<E: ToString>(e: E) -> String {
    e.to_string()
}

fn join(qs: &[TPoly]) -> String {
    qs.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(", ")
}

fn root(f: &Field, coeffs: Vec<TPoly>, seed: TPoly, terms: usize) -> Result<LaurentSeries, String> {
    newton_root(&XPoly::from_tpolys(f, coeffs), &LaurentSeries::from_poly(&seed), terms).map_err(s)
}

fn continuant_base() -> Result<(bool, String), String> {
    let f = fp(7);
    let x = lin(&f, 3);
    let ok = continuant(&f, &[]).is_one() && continuant(&f, std::slice::from_ref(&x)) == x;
    Ok((ok, "<> = 1, <x> = x".into()))
}

fn f13_rational() -> Result<(bool, String), String> {
    let f = fp(13);
    let num = TPoly::from_ints(&f, &[-1, 0, 1]).pow(4);
    let den = TPoly::from_ints(&f, &[0, -1, 0, 1, 0, 2, 0, 2]);
    let r = RationalFunc::new(num, den).map_err(s)?;
    let e = expand_rational(&r);
    let want: Vec<TPoly> = [7, 10, 5, 12, 9, 11, 1, 5].iter().map(|&c| lin(&f, c)).collect();
    let ok = e.quotients == want && eval_cf(&f, &e.quotients).map_err(s)? == r;
    Ok((ok, format!("[{}]", join(&e.quotients))))
}

fn f13_eval() -> Result<(bool, String), String> {
    let f = fp(13);
    let qs = [7, 10, 5, -1, 9, 11, 1, 5].map(|c| lin(&f, c));
    let v = eval_cf(&f, &qs).map_err(s)?;
    let num = TPoly::from_ints(&f, &[-1, 0, 1]).pow(4);
    let den = TPoly::from_ints(&f, &[0, -1, 0, 1, 0, 2, 0, 2]);
    Ok((v == RationalFunc::new(num, den).map_err(s)?, v.to_string()))
}

fn f11_period() -> Result<(bool, String), String> {
    let f = fp(11);
    let t = QuadTriple::new(
        TPoly::from_ints(&f, &[1, 0, 6]),
        TPoly::from_ints(&f, &[0, 9, 0, 5]),
        TPoly::from_ints(&f, &[10, 0, 9]),
    );
    let e = quad_expand(&t, &LaurentSeries::from_poly(&TPoly::t(&f)), None).map_err(s)?;
    let back = periodic_to_equation(&f, &e.preperiod, &e.period).map_err(s)?;
    let ok = e.preperiod.is_empty() && e.period == [lin(&f, 1), lin(&f, 2), lin(&f, 3)] && back.proportional_to(&t);
    Ok((ok, format!("period [{}]", join(&e.period))))
}

fn golden() -> Result<(bool, String), String> {
    let f = fp(3);
    let m1 = TPoly::constant(&f, f.from_int(-1));
    let alpha = root(&f, vec![m1, -&TPoly::t(&f), TPoly::one(&f)], TPoly::t(&f), 220)?;
    let e = expand_series(&alpha, 50);
    let ok = e.certified == 50 && e.quotients.iter().all(|q| *q == TPoly::t(&f));
    Ok((ok, format!("{} quotients equal to T", e.certified)))
}

fn frobenius_family() -> Result<(bool, String), String> {
    let mut detail = Vec::new();
    let mut ok = true;
    for p in [2u32, 3, 5] {
        let f = fp(p);
        let r = p as usize;
        let mut c = vec![TPoly::zero(&f); r + 2];
        c[0] = TPoly::constant(&f, f.from_int(-1));
        c[r] = -&TPoly::t(&f);
        c[r + 1] = TPoly::one(&f);
        let alpha = root(&f, c, TPoly::t(&f), 4 * r * r * r + 40)?;
        let e = expand_series(&alpha, 3);
        ok &= e.quotients == [TPoly::t(&f), tpow(&f, r), tpow(&f, r * r)];
        detail.push(format!("p={p}: [{}]", join(&e.quotients)));
    }
    Ok((ok, detail.join("; ")))
}

fn blocks_match(got: &[TPoly], want: &[TPoly], min: usize) -> bool {
    let k = got.len().min(want.len());
    k >= min && got[..k] == want[..k]
}

fn f2_cubic() -> Result<(bool, String), String> {
    let f = fp(2);
    let t2p1 = TPoly::from_ints(&f, &[1, 0, 1]);
    let alpha = root(&f, vec![TPoly::t(&f), TPoly::zero(&f), t2p1.clone(), TPoly::one(&f)], t2p1.clone(), 400)?;
    let e = expand_series(&alpha, 200);
    let mut want = vec![t2p1];
    for n in 1..=4 {
        want.push(tpow(&f, (1 << n) + 1));
        want.extend(std::iter::repeat_n(TPoly::t(&f), (1 << n) - 1));
    }
    Ok((blocks_match(&e.quotients, &want, want.len()), format!("{} certified", e.certified)))
}

fn f4_quintic() -> Result<(bool, String), String> {
    let f = Field::builtin(2, 2).map_err(s)?;
    let u = f.generator().expect("extension");
    let ut = TPoly::monomial(&f, u, 1);
    let mid = &(&TPoly::monomial(&f, u, 4) + &tpow(&f, 2)) + &TPoly::one(&f);
    let z = TPoly::zero(&f);
    let alpha = root(&f, vec![TPoly::one(&f), z.clone(), z.clone(), z, mid, tpow(&f, 3)], ut.clone(), 600)?;
    let e = expand_series(&alpha, 120);
    let mut want = Vec::new();
    for n in 1..=2 {
        want.push(ut.clone());
        want.extend(std::iter::repeat_n(TPoly::t(&f), (1 << (2 * n)) - 1));
    }
    Ok((blocks_match(&e.quotients, &want, want.len()), format!("{} certified", e.certified)))
}

fn witness_frobenius() -> Result<(bool, String), String> {
    let f = fp(3);
    let mut c = vec![TPoly::zero(&f); 5];
    c[0] = TPoly::constant(&f, f.from_int(-1));
    c[3] = -&TPoly::t(&f);
    c[4] = TPoly::one(&f);
    let alpha = root(&f, c, TPoly::t(&f), 200)?;
    let (one, zero) = (TPoly::one(&f), TPoly::zero(&f));
    let ok = is_hyperquadratic_witness(&alpha, 3, &TPoly::t(&f), &one, &one, &zero).map_err(s)?;
    Ok((ok, "alpha = T + 1/alpha^3 over F_3".into()))
}

fn witness_golden() -> Result<(bool, String), String> {
    let f = fp(5);
    let m1 = TPoly::constant(&f, f.from_int(-1));
    let alpha = root(&f, vec![m1, -&TPoly::t(&f), TPoly::one(&f)], TPoly::t(&f), 200)?;
    let (one, zero) = (TPoly::one(&f), TPoly::zero(&f));
    let ok = is_hyperquadratic_witness(&alpha, 1, &TPoly::t(&f), &one, &one, &zero).map_err(s)?;
    Ok((ok, "alpha = T + 1/alpha over F_5".into()))
}

fn v_first() -> Result<(bool, String), String> {
    let mut ok = true;
    for (p, k) in [(7u32, 1u32), (7, 2), (13, 4), (31, 10)] {
        ok &= v_sequence(p, k).map_err(s)?[0].index() as i64 == (2 * k as i64 - 1).rem_euclid(p as i64);
    }
    Ok((ok, "v_1 = 2k - 1".into()))
}

fn k_empty() -> Result<(bool, String), String> {
    Ok((k_continuant(13, 4, 1, 0).map_err(s)?.is_one(), "K_{1,0} = 1".into()))
}

fn divides(p: u32) -> Result<(bool, String), String> {
    let r = rqe_divides(p).map_err(s)?;
    Ok((r.divides && r.remultiplied, format!("quotient degree {:?}", r.quotient_degree)))
}

fn scan_13() -> Result<(bool, String), String> {
    let r = scan_primes(13).map_err(s)?;
    let ps: Vec<u32> = r.primes.iter().map(|e| e.p).collect();
    Ok((ps == [7, 13] && r.all_divide, format!("{ps:?}")))
}

fn rqe_h_shape() -> Result<(bool, String), String> {
    let mut ok = true;
    for p in [7u32, 13, 19] {
        let h = rqe_h(p).map_err(s)?;
        ok &= h.support() == [0, 1, p as usize, p as usize + 1];
    }
    Ok((ok, "support {0, 1, p, p+1}".into()))
}

fn rqe_first_quotient() -> Result<(bool, String), String> {
    let f = fp(13);
    let alpha = rqe_root(&f, 40).map_err(s)?;
    let e = expand_series(&alpha, 1);
    let want = TPoly::monomial(&f, f.from_rational(32, 9).map_err(s)?, 1);
    Ok((e.quotients.first() == Some(&want), format!("a_1 = {}", join(&e.quotients))))
}

fn rqe_pattern_13() -> Result<(bool, String), String> {
    let r = certify_rqe(13, 200).map_err(s)?;
    let mut degs = r.degrees.clone();
    degs.sort();
    degs.dedup();
    Ok((r.passed && degs == [1, 5, 57], format!("{} certified, degrees {degs:?}", r.certified)))
}

fn theorem1_p5() -> Result<(bool, String), String> {
    let f = fp(5);
    let c = RationalFunc::from_poly(TPoly::from_ints(&f, &[2, 1]));
    let a = (&c * &c).scale(f.neg(f.inv(f.from_int(12)).map_err(s)?));
    let b = RationalFunc::from_poly(TPoly::t(&f));
    match theorem1_solve(&a, &b, &c, &f).map_err(s)? {
        Theorem1Outcome::Found { r, h, verified, .. } => {
            let ok = verified && r == 25 && h.support() == [0, 1, 25, 26];
            Ok((ok, format!("r = {r}, support {:?}", h.support())))
        }
        Theorem1Outcome::EmptyKernel { r, .. } => Ok((false, format!("r = {r}: empty kernel"))),
    }
}

fn mills_robbins() -> Result<(bool, String), String> {
    let r = mills_robbins_check(200, MILLS_ROBBINS_DEFAULT_V2).map_err(s)?;
    Ok((r.passed, format!("v^2 = {}, {} residual coefficients vanish", r.v_squared, r.residual_certified)))
}
