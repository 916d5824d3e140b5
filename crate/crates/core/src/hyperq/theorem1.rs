//! Constructive form of the degree-four existence theorem: for
//! `P = A X^4 + B X^3 + C X^2 + 1` with `12A + C^2 = 0`, find
//! `H = U X^{r+1} + V X^r + W X + Z` divisible by `P`.

use super::HyperError;
use crate::ffield::Field;
use crate::polyring::{RationalFunc, XPoly};

/// `r = p` for `p = 1 mod 3`, `r = p^2` for `p = 2 mod 3`.
pub fn theorem1_exponent(p: u32) -> u64 {
    if p % 3 == 1 {
        p as u64
    } else {
        (p as u64) * (p as u64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Theorem1Outcome {
    Found {
        r: u64,
        /// Polynomial coefficients, no common factor.
        h: XPoly,
        kernel_dim: usize,
        /// `P | H` and `quotient * P == H`, recomputed exactly.
        verified: bool,
    },
    /// No nonzero `(U, V, W, Z)`: a counterexample to the theorem instance.
    EmptyKernel { r: u64, x_r: XPoly, x_r1: XPoly },
}

/// Basis of the right kernel of `rows` (each of length `ncols`).
pub fn nullspace(field: &Field, rows: &[Vec<RationalFunc>], ncols: usize) -> Vec<Vec<RationalFunc>> {
    let mut m: Vec<Vec<RationalFunc>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(piv) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, piv);
        let inv = m[row][col].inv().expect("nonzero pivot");
        m[row] = m[row].iter().map(|x| x * &inv).collect();
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                let pivot_row = m[row].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&factor * y);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![RationalFunc::zero(field); ncols];
            v[fc] = RationalFunc::one(field);
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -&m[r][fc];
            }
            v
        })
        .collect()
}

fn hypothesis(a: &RationalFunc, c: &RationalFunc) -> bool {
    (&a.scale(a.field().from_int(12)) + &(c * c)).is_zero()
}

pub fn theorem1_solve(
    a: &RationalFunc,
    b: &RationalFunc,
    c: &RationalFunc,
    field: &Field,
) -> Result<Theorem1Outcome, HyperError> {
    let p = field.characteristic();
    if p <= 3 {
        return Err(HyperError::BadParams("characteristic must exceed 3".into()));
    }
    if !hypothesis(a, c) {
        return Err(HyperError::Hypothesis);
    }
    if a.is_zero() {
        return Err(HyperError::BadParams("A = 0: P is not quartic".into()));
    }
    let big_p = XPoly::new(field, vec![RationalFunc::one(field), RationalFunc::zero(field), c.clone(), b.clone(), a.clone()]);
    if !big_p.is_squarefree()? {
        return Err(HyperError::BadParams("P is not squarefree in X".into()));
    }
    let r = theorem1_exponent(p);
    let x_r = big_p.modpow_x(r)?;
    let x_r1 = (&x_r * &XPoly::x(field)).rem(&big_p)?;
    // rows: coefficient of X^i; columns: U, V, W, Z
    let rows: Vec<Vec<RationalFunc>> = (0..4)
        .map(|i| {
            let unit = |hit: bool| if hit { RationalFunc::one(field) } else { RationalFunc::zero(field) };
            vec![x_r1.coeff(i), x_r.coeff(i), unit(i == 1), unit(i == 0)]
        })
        .collect();
    let kernel = nullspace(field, &rows, 4);
    let Some(vec) = kernel.first() else {
        return Ok(Theorem1Outcome::EmptyKernel { r, x_r, x_r1 });
    };
    let mut coeffs = vec![RationalFunc::zero(field); r as usize + 2];
    coeffs[r as usize + 1] = vec[0].clone();
    coeffs[r as usize] = vec[1].clone();
    coeffs[1] = vec[2].clone();
    coeffs[0] = vec[3].clone();
    let h = XPoly::new(field, coeffs);
    let h = XPoly::from_tpolys(field, h.to_poly_coeffs());
    let (q, rem) = h.divmod(&big_p)?;
    let verified = !h.is_zero() && rem.is_zero() && &q * &big_p == h;
    Ok(Theorem1Outcome::Found { r, h, kernel_dim: kernel.len(), verified })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperq::rqe_theorem1_coefficients;

    #[test]
    fn exponent_by_class() {
        assert_eq!(theorem1_exponent(7), 7);
        assert_eq!(theorem1_exponent(5), 25);
        assert_eq!(theorem1_exponent(11), 121);
    }

    #[test]
    fn nullspace_small() {
        let f = Field::prime(5).unwrap();
        let c = |x: i64| RationalFunc::constant(&f, f.from_int(x));
        let rows = vec![vec![c(1), c(2), c(3)], vec![c(0), c(1), c(4)]];
        let k = nullspace(&f, &rows, 3);
        assert_eq!(k.len(), 1);
        for row in &rows {
            let dot = row.iter().zip(&k[0]).fold(RationalFunc::zero(&f), |acc, (x, y)| &acc + &(x * y));
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn quartic_at_7() {
        let f = Field::prime(7).unwrap();
        let [a, b, c] = rqe_theorem1_coefficients(&f);
        match theorem1_solve(&a, &b, &c, &f).unwrap() {
            Theorem1Outcome::Found { h, verified, r, .. } => {
                assert!(verified);
                assert_eq!(r, 7);
                assert_eq!(h.support(), vec![0, 1, 7, 8]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_hypothesis_failure() {
        let f = Field::prime(7).unwrap();
        let one = RationalFunc::one(&f);
        assert_eq!(theorem1_solve(&one, &one, &one, &f), Err(HyperError::Hypothesis));
        let zero = RationalFunc::zero(&f);
        assert!(matches!(theorem1_solve(&zero, &one, &zero, &f), Err(HyperError::BadParams(_))));
    }
}
