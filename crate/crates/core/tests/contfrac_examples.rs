use hyperfrac::contfrac::*;
use hyperfrac::ffield::Field;
use hyperfrac::laurent::{newton_root, LaurentSeries, SeriesError};
use hyperfrac::polyring::{RationalFunc, TPoly, XPoly};

fn lin(f: &Field, c: i64) -> TPoly {
    TPoly::from_ints(f, &[0, c])
}

fn tpow(f: &Field, e: usize) -> TPoly {
    TPoly::monomial(f, f.one(), e)
}

fn root(f: &Field, coeffs: Vec<TPoly>, seed: TPoly, terms: usize) -> LaurentSeries {
    let s = XPoly::from_tpolys(f, coeffs);
    newton_root(&s, &LaurentSeries::from_poly(&seed), terms).unwrap()
}

#[test]
fn f13_rational() {
    let f = Field::prime(13).unwrap();
    let t2m1 = TPoly::from_ints(&f, &[-1, 0, 1]);
    let num = t2m1.pow(4);
    let den = TPoly::from_ints(&f, &[0, -1, 0, 1, 0, 2, 0, 2]);
    let r = RationalFunc::new(num, den).unwrap();
    let e = expand_rational(&r);
    let want: Vec<TPoly> = [7, 10, 5, 12, 9, 11, 1, 5].iter().map(|&c| lin(&f, c)).collect();
    assert_eq!(e.quotients, want);
    assert_eq!(eval_cf(&f, &e.quotients).unwrap(), r);
    let shown = [7, 10, 5, -1, 9, 11, 1, 5].map(|c| lin(&f, c));
    assert_eq!(eval_cf(&f, &shown).unwrap(), r);
}

#[test]
fn f11_pure_period() {
    let f = Field::prime(11).unwrap();
    let t = QuadTriple::new(
        TPoly::from_ints(&f, &[1, 0, 6]),
        TPoly::from_ints(&f, &[0, 9, 0, 5]),
        TPoly::from_ints(&f, &[10, 0, 9]),
    );
    let p = quad_expand(&t, &LaurentSeries::from_poly(&TPoly::t(&f)), None).unwrap();
    assert!(p.preperiod.is_empty());
    assert_eq!(p.period, vec![lin(&f, 1), lin(&f, 2), lin(&f, 3)]);
    let back = periodic_to_equation(&f, &p.preperiod, &p.period).unwrap();
    assert!(back.proportional_to(&t));
    let mut s = t.clone();
    for a in &p.period {
        s = quad_tail_step(&s, a).unwrap();
    }
    assert_eq!(s, t.normalized());
}

#[test]
fn golden_period_and_series() {
    for p in [2, 3, 5, 7] {
        let f = Field::prime(p).unwrap();
        let t = QuadTriple::new(TPoly::one(&f), -&TPoly::t(&f), TPoly::constant(&f, f.from_int(-1)));
        let e = quad_expand(&t, &LaurentSeries::from_poly(&TPoly::t(&f)), None).unwrap();
        assert!(e.preperiod.is_empty());
        assert_eq!(e.period, vec![TPoly::t(&f)]);
        let alpha = root(&f, vec![TPoly::constant(&f, f.from_int(-1)), -&TPoly::t(&f), TPoly::one(&f)], TPoly::t(&f), 220);
        let x = expand_series(&alpha, 50);
        assert_eq!(x.certified, 50, "p={p}");
        assert!(x.quotients.iter().all(|q| *q == TPoly::t(&f)));
    }
}

#[test]
fn preperiodic_round_trip() {
    let f = Field::prime(5).unwrap();
    let pre = vec![tpow(&f, 2)];
    let per = vec![TPoly::t(&f)];
    let t = periodic_to_equation(&f, &pre, &per).unwrap();
    let seed = LaurentSeries::from_poly(&tpow(&f, 2));
    let e = quad_expand(&t, &seed, None).unwrap();
    assert_eq!(e.preperiod, pre);
    assert_eq!(e.period, per);
}

#[test]
fn frobenius_family() {
    for p in [2u32, 3, 5] {
        let f = Field::prime(p).unwrap();
        let r = p as usize;
        let mut c = vec![TPoly::zero(&f); r + 2];
        c[0] = TPoly::constant(&f, f.from_int(-1));
        c[r] = -&TPoly::t(&f);
        c[r + 1] = TPoly::one(&f);
        let alpha = root(&f, c, TPoly::t(&f), 4 * r * r * r + 40);
        let x = expand_series(&alpha, 3);
        assert_eq!(x.quotients, vec![TPoly::t(&f), tpow(&f, r), tpow(&f, r * r)], "p={p}");
    }
}

#[test]
fn frobenius_power_of_p_over_f5() {
    let f = Field::prime(5).unwrap();
    let mut c = vec![TPoly::zero(&f); 7];
    c[0] = TPoly::constant(&f, f.from_int(-1));
    c[5] = -&TPoly::t(&f);
    c[6] = TPoly::one(&f);
    let alpha = root(&f, c, TPoly::t(&f), 700);
    let x = expand_series(&alpha, 4);
    assert_eq!(x.quotients, vec![TPoly::t(&f), tpow(&f, 5), tpow(&f, 25), tpow(&f, 125)]);
}

#[test]
fn exponent_not_a_power_of_p_breaks_the_pattern() {
    // alpha = T + 1/alpha^2 over F_5: the tail after T is alpha^2 only up to
    // lower terms, so the third quotient is 3T rather than T^4
    let f = Field::prime(5).unwrap();
    let c = vec![TPoly::constant(&f, f.from_int(-1)), TPoly::zero(&f), -&TPoly::t(&f), TPoly::one(&f)];
    let alpha = root(&f, c, TPoly::t(&f), 200);
    let x = expand_series(&alpha, 3);
    assert_eq!(x.quotients, vec![TPoly::t(&f), tpow(&f, 2), lin(&f, 3)]);
}

#[test]
fn f2_cubic_prefix() {
    let f = Field::prime(2).unwrap();
    let t2p1 = TPoly::from_ints(&f, &[1, 0, 1]);
    let alpha = root(&f, vec![TPoly::t(&f), TPoly::zero(&f), t2p1.clone(), TPoly::one(&f)], t2p1.clone(), 400);
    let x = expand_series(&alpha, 200);
    let mut want = vec![t2p1];
    for n in 1..=5 {
        want.push(tpow(&f, (1 << n) + 1));
        want.extend(std::iter::repeat(TPoly::t(&f)).take((1 << n) - 1));
    }
    let k = want.len().min(x.certified);
    assert!(k >= 1 + 2 + 4 + 8 + 16 + 4, "certified {}", x.certified);
    assert_eq!(&x.quotients[..k], &want[..k]);
}

#[test]
fn f4_quintic_prefix() {
    let f = Field::extension(2, &[1, 1, 1]).unwrap();
    let u = f.generator().unwrap();
    let ut = TPoly::monomial(&f, u, 1);
    let mid = &(&TPoly::monomial(&f, u, 4) + &tpow(&f, 2)) + &TPoly::one(&f);
    let c = vec![TPoly::one(&f), TPoly::zero(&f), TPoly::zero(&f), TPoly::zero(&f), mid, tpow(&f, 3)];
    let alpha = root(&f, c, ut.clone(), 600);
    let x = expand_series(&alpha, 120);
    let mut want = Vec::new();
    for n in 1..=3 {
        want.push(ut.clone());
        want.extend(std::iter::repeat(TPoly::t(&f)).take((1 << (2 * n)) - 1));
    }
    let k = want.len().min(x.certified);
    assert!(k >= 1 + 3 + 1 + 15, "certified {}", x.certified);
    assert_eq!(&x.quotients[..k], &want[..k]);
}

#[test]
fn cubic_growth_records_exceed_half_by_exact_amount() {
    use num_rational::Ratio;
    let f = Field::prime(2).unwrap();
    let t2p1 = TPoly::from_ints(&f, &[1, 0, 1]);
    let alpha = root(&f, vec![TPoly::t(&f), TPoly::zero(&f), t2p1.clone(), TPoly::one(&f)], t2p1, 600);
    let e = expand_series(&alpha, 300);
    let g = growth_stat(&e, e.certified).unwrap();
    // records at T^{2^n+1}: 1/2 + 1/(2^n - 1)
    for (n, &(_, r)) in g.records.iter().enumerate().skip(1) {
        let m = n as i64 + 1;
        assert_eq!(r, Ratio::new(1, 2) + Ratio::new(1, (1 << m) - 1));
    }
    assert!(g.records.len() >= 6);
}

#[test]
fn frobenius_growth_values_exceed_r_minus_one() {
    use num_rational::Ratio;
    let f = Field::prime(3).unwrap();
    let mut c = vec![TPoly::zero(&f); 5];
    c[0] = TPoly::constant(&f, f.from_int(-1));
    c[3] = -&TPoly::t(&f);
    c[4] = TPoly::one(&f);
    let alpha = root(&f, c, TPoly::t(&f), 600);
    let e = expand_series(&alpha, 5);
    let g = growth_stat(&e, 10).unwrap();
    for &(n, r) in &g.values {
        let rn = 3i64.pow(n as u32 + 1);
        assert_eq!(r, Ratio::new(2 * rn, rn - 1));
    }
}

#[test]
fn newton_gives_up_without_a_laurent_root() {
    // every root of X^5 + X^4 + uT X^2 + 1 over F_4 has degree 1/3 in T
    let f = Field::extension(2, &[1, 1, 1]).unwrap();
    let ut = TPoly::monomial(&f, f.generator().unwrap(), 1);
    let s = XPoly::from_tpolys(&f, vec![TPoly::one(&f), TPoly::zero(&f), ut.clone(), TPoly::zero(&f), TPoly::one(&f), TPoly::one(&f)]);
    assert!(matches!(newton_root(&s, &LaurentSeries::from_poly(&ut), 20), Err(SeriesError::NewtonStalled(_))));
}
