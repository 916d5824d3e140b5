//! Coefficient-vector kernels shared by polynomials and series.

use crate::ffield::{Field, FieldElement};

const KARATSUBA_CUTOFF: usize = 32;

/// Product of two ascending coefficient vectors.
pub(crate) fn mul_coeffs(f: &Field, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if f.is_prime_field() {
        let p = f.characteristic() as u64;
        let a: Vec<u64> = a.iter().map(|c| c.index() as u64).collect();
        let b: Vec<u64> = b.iter().map(|c| c.index() as u64).collect();
        return karatsuba(p, &a, &b)
            .into_iter()
            .map(|c| f.from_int(c as i64))
            .collect();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    out
}

fn schoolbook(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    if p < (1 << 16) {
        // products stay below 2^32, so up to 2^32 of them fit in a u64
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (o, &y) in out[i..].iter_mut().zip(b) {
                *o += x * y;
            }
        }
        out.iter_mut().for_each(|c| *c %= p);
    } else {
        for (i, &x) in a.iter().enumerate() {
            for (o, &y) in out[i..].iter_mut().zip(b) {
                *o = (*o + x * y % p) % p;
            }
        }
    }
    out
}

fn karatsuba(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let (n, m) = (a.len(), b.len());
    if n.min(m) < KARATSUBA_CUTOFF {
        return schoolbook(p, a, b);
    }
    if n > 2 * m || m > 2 * n {
        let (long, short) = if n > m { (a, b) } else { (b, a) };
        let mut out = vec![0u64; n + m - 1];
        for (k, chunk) in long.chunks(short.len()).enumerate() {
            let part = karatsuba(p, chunk, short);
            let off = k * short.len();
            for (o, c) in out[off..].iter_mut().zip(part) {
                *o = (*o + c) % p;
            }
        }
        return out;
    }
    let h = n.max(m) / 2;
    let (a0, a1) = a.split_at(h.min(n));
    let (b0, b1) = b.split_at(h.min(m));
    let z0 = karatsuba(p, a0, b0);
    let z2 = if a1.is_empty() || b1.is_empty() { Vec::new() } else { karatsuba(p, a1, b1) };
    let sa = add_vec(p, a0, a1);
    let sb = add_vec(p, b0, b1);
    let mut z1 = karatsuba(p, &sa, &sb);
    for (i, c) in z0.iter().enumerate() {
        z1[i] = (z1[i] + p - c) % p;
    }
    for (i, c) in z2.iter().enumerate() {
        z1[i] = (z1[i] + p - c) % p;
    }
    let mut out = vec![0u64; n + m - 1];
    for (i, c) in z0.into_iter().enumerate() {
        out[i] = (out[i] + c) % p;
    }
    for (i, c) in z1.into_iter().enumerate() {
        if i + h < out.len() {
            out[i + h] = (out[i + h] + c) % p;
        } else {
            debug_assert_eq!(c, 0);
        }
    }
    for (i, c) in z2.into_iter().enumerate() {
        out[i + 2 * h] = (out[i + 2 * h] + c) % p;
    }
    out
}

fn add_vec(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + y) % p;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn karatsuba_matches_schoolbook() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for p in [2u64, 13, 65537] {
            for (n, m) in [(40, 40), (100, 37), (33, 200), (257, 129)] {
                let a: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
                let b: Vec<u64> = (0..m).map(|_| rng.gen_range(0..p)).collect();
                assert_eq!(karatsuba(p, &a, &b), schoolbook(p, &a, &b));
            }
        }
    }
}
