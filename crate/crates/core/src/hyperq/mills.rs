//! `1/beta(T) = v alpha(vT)` sends the quartic's root over `F_13` to the
//! root of `X^4 + X^2 - T X + 1` in `F_13((1/T))`.

use serde::Serialize;

use super::{rqe_root, HyperError};
use crate::ffield::Field;
use crate::laurent::eval_xpoly;
use crate::polyring::{TPoly, XPoly};

/// Square of the scaling constant that makes the transformation work.
pub const MILLS_ROBBINS_DEFAULT_V2: i64 = -5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MillsRobbinsReport {
    pub precision: usize,
    pub v_squared: i64,
    /// Number of certified residual coefficients at exponents `<= 0`
    /// (`|beta| < 1`, so the residual has no larger terms).
    pub residual_certified: usize,
    pub residual_vanishes: bool,
    /// Exponent of the first nonzero residual coefficient, if any.
    pub first_nonzero: Option<i64>,
    pub beta_in_prime_field: bool,
    pub passed: bool,
}

/// The target quartic `X^4 + X^2 - T X + 1` over `field`.
pub fn mills_robbins_target(field: &Field) -> XPoly {
    let one = TPoly::one(field);
    let z = TPoly::zero(field);
    XPoly::from_tpolys(field, vec![one.clone(), -&TPoly::t(field), one.clone(), z, one])
}

/// Runs the check over `F_169` with `v^2 = v_squared` and the root of the
/// quartic computed to `precision` coefficients.
pub fn mills_robbins_check(precision: usize, v_squared: i64) -> Result<MillsRobbinsReport, HyperError> {
    if precision < 50 {
        return Err(HyperError::Precision(format!("need at least 50 coefficients, got {precision}")));
    }
    let f = Field::builtin(13, 2)?;
    let v = f
        .sqrt(f.from_int(v_squared))
        .ok_or_else(|| HyperError::BadParams(format!("{v_squared} has no square root in F_169")))?;
    let alpha = rqe_root(&f, precision)?;
    let beta = alpha.scale_t(v).scale(v).inv()?;
    let res = eval_xpoly(&mills_robbins_target(&f), &beta);
    let first_nonzero = res.hi().filter(|_| res.coeffs().iter().any(|c| !c.is_zero())).map(|hi| {
        let i = res.coeffs().iter().position(|c| !c.is_zero()).expect("some nonzero");
        hi - i as i64
    });
    let residual_certified = (1 - res.lo()).max(0) as usize;
    let residual_vanishes = residual_certified > 0 && first_nonzero.is_none();
    let beta_in_prime_field = beta.coeffs().iter().all(|&c| f.in_prime_subfield(c));
    Ok(MillsRobbinsReport {
        precision,
        v_squared,
        residual_certified,
        residual_vanishes,
        first_nonzero,
        beta_in_prime_field,
        passed: residual_vanishes && beta_in_prime_field,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_square_passes() {
        let r = mills_robbins_check(120, MILLS_ROBBINS_DEFAULT_V2).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.residual_certified > 50);
    }

    #[test]
    fn literal_square_fails() {
        let r = mills_robbins_check(120, 5).unwrap();
        assert!(!r.residual_vanishes);
        assert_eq!(r.first_nonzero, Some(0));
    }

    #[test]
    fn too_short() {
        assert!(mills_robbins_check(10, -5).is_err());
    }
}
