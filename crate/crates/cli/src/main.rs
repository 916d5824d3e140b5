use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use hyperfrac::contfrac::{expand_rational, expand_series, periodic_to_equation, quad_expand, QuadTriple};
use hyperfrac::ffield::Field;
use hyperfrac::hyperq::{
    certify_rqe, mills_robbins_check, rqe_divides, rqe_theorem1_coefficients, scan_primes, theorem1_solve,
    Theorem1Outcome, MILLS_ROBBINS_DEFAULT_V2,
};
use hyperfrac::laurent::{newton_root, LaurentSeries};
use hyperfrac::polyring::{parse_ratfunc, parse_tpoly, parse_xpoly, RationalFunc};

mod examples;

#[derive(Parser)]
#[command(name = "hyperfrac", version, about = "Continued fractions of power series over finite fields")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Characteristic of the base field.
    #[arg(long, global = true)]
    p: Option<u32>,
    /// Monic modulus of an extension, e.g. "u^2+u+1" or "1,1,1" (ascending).
    #[arg(long, global = true)]
    ext_modulus: Option<String>,
    /// Number of partial quotients to produce.
    #[arg(long, global = true)]
    terms: Option<usize>,
    /// Number of series coefficients to compute.
    #[arg(long, global = true)]
    precision: Option<usize>,
    /// Emit one JSON document on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Leading part of the wanted root, e.g. "2*T".
    #[arg(long, global = true)]
    seed_poly: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Euclidean expansion of num/den.
    ExpandRational {
        #[arg(long)]
        num: String,
        #[arg(long, default_value = "1")]
        den: String,
    },
    /// Certified expansion of a root of a polynomial in X.
    ExpandRoot {
        #[arg(long)]
        poly_x: String,
    },
    /// Exact periodic expansion of a root of A X^2 + B X + C.
    QuadExpand {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        c: String,
        /// Step cap for period detection.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Run the worked examples.
    Examples {
        #[arg(long)]
        only: Option<String>,
    },
    /// Check that the quartic divides H for one prime.
    RqeVerify,
    /// Certify the partial-quotient pattern of the quartic's root.
    RqePattern,
    /// Divisibility check for every prime p = 1 mod 3 up to --pmax.
    Scan {
        #[arg(long, default_value_t = 199)]
        pmax: u32,
    },
    /// Find H = U X^{r+1} + V X^r + W X + Z divisible by A X^4 + B X^3 + C X^2 + 1.
    Theorem1 {
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        c: Option<String>,
    },
    /// Check the transformation to X^4 + X^2 - T X + 1 over F_13.
    MillsRobbins {
        /// Square of the scaling constant.
        #[arg(long, default_value_t = MILLS_ROBBINS_DEFAULT_V2, allow_hyphen_values = true)]
        v_squared: i64,
    },
}

/// `Ok(true)`: success, `Ok(false)`: verification failure, `Err`: usage.
type Outcome = Result<bool, String>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn field(c: &Common, default_p: Option<u32>) -> Result<Field, String> {
    let p = c.p.or(default_p).ok_or("--p is required")?;
    let base = Field::prime(p).map_err(|e| e.to_string())?;
    let Some(m) = &c.ext_modulus else {
        return Ok(base);
    };
    let digits: Vec<u32> = if m.contains('u') {
        let poly = parse_tpoly(&base, &m.replace('u', "T")).map_err(|e| format!("--ext-modulus {e}"))?;
        poly.coeffs().iter().map(|x| x.index()).collect()
    } else {
        m.split(',')
            .map(|s| s.trim().parse::<i64>().map(|v| v.rem_euclid(p as i64) as u32))
            .collect::<Result<_, _>>()
            .map_err(|e| format!("--ext-modulus: {e}"))?
    };
    Field::extension(p, &digits).map_err(|e| e.to_string())
}

fn emit(json: bool, doc: serde_json::Value, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    } else {
        println!("{}", text());
    }
}

fn run(cli: &Cli) -> Outcome {
    let c = &cli.common;
    match &cli.cmd {
        Cmd::ExpandRational { num, den } => {
            let f = field(c, None)?;
            let n = parse_tpoly(&f, num).map_err(|e| format!("--num {e}"))?;
            let d = parse_tpoly(&f, den).map_err(|e| format!("--den {e}"))?;
            let r = RationalFunc::new(n, d).map_err(|e| e.to_string())?;
            let e = expand_rational(&r);
            emit(c.json, e.to_json(), || show_quotients(&e.quotients));
            Ok(true)
        }
        Cmd::ExpandRoot { poly_x } => {
            let f = field(c, None)?;
            let s = parse_xpoly(&f, poly_x).map_err(|e| format!("--poly-x {e}"))?;
            let seed = c.seed_poly.as_deref().ok_or("--seed-poly is required")?;
            let seed = parse_ratfunc(&f, seed).map_err(|e| format!("--seed-poly {e}"))?;
            let terms = c.terms.unwrap_or(50);
            let mut prec = c.precision.unwrap_or(4 * terms + 64);
            let seed = LaurentSeries::from_rational(&seed, 64);
            let e = loop {
                let alpha = newton_root(&s, &seed, prec).map_err(|e| e.to_string())?;
                let e = expand_series(&alpha, terms);
                if e.certified >= terms || c.precision.is_some() || prec > 1 << 20 {
                    break e;
                }
                prec *= 2;
            };
            eprintln!("series precision {prec}, certified {}", e.certified);
            emit(c.json, e.to_json(), || show_quotients(&e.quotients));
            Ok(true)
        }
        Cmd::QuadExpand { a, b, c: cc, bound } => {
            let f = field(c, None)?;
            let parse = |flag: &str, s: &str| parse_tpoly(&f, s).map_err(|e| format!("--{flag} {e}"));
            let t = QuadTriple::new(parse("a", a)?, parse("b", b)?, parse("c", cc)?);
            let seed = c.seed_poly.as_deref().ok_or("--seed-poly is required")?;
            let seed = LaurentSeries::from_rational(&parse_ratfunc(&f, seed).map_err(|e| format!("--seed-poly {e}"))?, 64);
            let e = quad_expand(&t, &seed, *bound).map_err(|e| e.to_string())?;
            let back = periodic_to_equation(&f, &e.preperiod, &e.period).map_err(|e| e.to_string())?;
            let round_trip = back.proportional_to(&t);
            let strs = |v: &[hyperfrac::polyring::TPoly]| v.iter().map(|q| q.to_string()).collect::<Vec<_>>();
            let doc = json!({
                "p": f.characteristic(),
                "n": f.degree(),
                "equation": { "a": t.a.to_string(), "b": t.b.to_string(), "c": t.c.to_string() },
                "preperiod": strs(&e.preperiod),
                "period": strs(&e.period),
                "round_trip": round_trip,
            });
            emit(c.json, doc, || {
                format!("preperiod [{}]\nperiod [{}]", strs(&e.preperiod).join(", "), strs(&e.period).join(", "))
            });
            Ok(round_trip)
        }
        Cmd::Examples { only } => {
            let report = examples::run_examples(only.as_deref())?;
            let ok = report.failed == 0;
            emit(c.json, serde_json::to_value(&report).expect("serializable"), || report.to_text());
            Ok(ok)
        }
        Cmd::RqeVerify => {
            let r = rqe_divides(c.p.unwrap_or(7)).map_err(|e| e.to_string())?;
            let ok = r.divides && r.remultiplied;
            emit(c.json, serde_json::to_value(&r).expect("serializable"), || {
                format!("p = {}: P | H {}, re-multiplied {}", r.p, r.divides, r.remultiplied)
            });
            Ok(ok)
        }
        Cmd::RqePattern => {
            let p = c.p.unwrap_or(13);
            let r = certify_rqe(p, c.terms.unwrap_or(200)).map_err(|e| e.to_string())?;
            emit(c.json, serde_json::to_value(&r).expect("serializable"), || {
                let mut s = format!(
                    "p = {p}: {} certified, shape {}, degrees {}, initial lambdas {}, condition (*) {:?}, Frobenius relation {:?}",
                    r.certified, r.shape_ok, r.degree_ok, r.initial_lambdas_ok, r.condition_star, r.frobenius_relation
                );
                s += &format!(
                    "\ngrowth: window sup {} vs {} ({})",
                    r.growth.window_sup.as_deref().unwrap_or("-"),
                    r.growth.target,
                    r.growth.status
                );
                for m in r.mismatches.iter().take(10) {
                    s += &format!("\n  n = {}: {} ({})", m.n, m.actual, m.reason);
                }
                s
            });
            Ok(r.passed)
        }
        Cmd::Scan { pmax } => {
            let start = Instant::now();
            let r = scan_primes(*pmax).map_err(|e| e.to_string())?;
            eprintln!("scanned {} primes in {:?}", r.checked, start.elapsed());
            emit(c.json, serde_json::to_value(&r).expect("serializable"), || {
                let mut s = String::new();
                for e in &r.primes {
                    s += &format!("p = {:>4}: divides {} ({} ms)\n", e.p, e.divides && e.remultiplied, e.millis);
                }
                s + &format!("{} primes, all divide: {}", r.checked, r.all_divide)
            });
            Ok(r.all_divide)
        }
        Cmd::Theorem1 { a, b, c: cc } => {
            let f = field(c, None)?;
            let [da, db, dc] = if f.characteristic() > 3 { rqe_theorem1_coefficients(&f).map(Some) } else { [None, None, None] };
            let pick = |flag: &str, s: &Option<String>, d: Option<RationalFunc>| match s {
                Some(s) => parse_ratfunc(&f, s).map_err(|e| format!("--{flag} {e}")),
                None => d.ok_or(format!("--{flag} is required")),
            };
            let (a, b, cc) = (pick("a", a, da)?, pick("b", b, db)?, pick("c", cc, dc)?);
            let out = theorem1_solve(&a, &b, &cc, &f).map_err(|e| e.to_string())?;
            match out {
                Theorem1Outcome::Found { r, h, kernel_dim, verified } => {
                    let doc = json!({
                        "p": f.characteristic(),
                        "r": r,
                        "kernel_dim": kernel_dim,
                        "verified": verified,
                        "h": h.to_string(),
                    });
                    emit(c.json, doc, || format!("r = {r}, kernel dimension {kernel_dim}, P | H {verified}\nH = {h}"));
                    Ok(verified)
                }
                Theorem1Outcome::EmptyKernel { r, x_r, x_r1 } => {
                    let doc = json!({ "p": f.characteristic(), "r": r, "kernel_dim": 0, "verified": false,
                        "x_r_mod_p": x_r.to_string(), "x_r1_mod_p": x_r1.to_string() });
                    emit(c.json, doc, || format!("r = {r}: empty kernel, no H exists for this instance"));
                    Ok(false)
                }
            }
        }
        Cmd::MillsRobbins { v_squared } => {
            let r = mills_robbins_check(c.precision.unwrap_or(200), *v_squared).map_err(|e| e.to_string())?;
            emit(c.json, serde_json::to_value(&r).expect("serializable"), || {
                format!(
                    "v^2 = {}: {} residual coefficients certified, all zero {}, beta over F_13 {}",
                    r.v_squared, r.residual_certified, r.residual_vanishes, r.beta_in_prime_field
                )
            });
            Ok(r.passed)
        }
    }
}

fn show_quotients(qs: &[hyperfrac::polyring::TPoly]) -> String {
    let s: Vec<String> = qs.iter().map(|q| q.to_string()).collect();
    format!("[{}]", s.join(", "))
}
