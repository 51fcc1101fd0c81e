//! Polynomial arithmetic and factorization over Z/p for small odd primes p.
//!
//! Used as the modular layer of the univariate factorizer. Equal-degree
//! splitting uses Cantor-Zassenhaus with a fixed-seed ChaCha stream so the
//! whole pipeline is deterministic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type ZpPoly = Vec<u64>;

fn trim(mut a: ZpPoly) -> ZpPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn deg(a: &ZpPoly) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}


fn subm(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    // extended Euclid
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    assert_eq!(r0, 1, "not invertible mod p");
    (s0.rem_euclid(p as i128)) as u64
}


pub fn sub(a: &ZpPoly, b: &ZpPoly, p: u64) -> ZpPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| subm(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p))
            .collect(),
    )
}

pub fn mul(a: &ZpPoly, b: &ZpPoly, p: u64) -> ZpPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulm(x, y, p)) % p;
        }
    }
    trim(out)
}

pub fn div_rem(a: &ZpPoly, b: &ZpPoly, p: u64) -> (ZpPoly, ZpPoly) {
    assert!(!b.is_empty(), "division by zero poly");
    if a.len() < b.len() {
        return (vec![], a.clone());
    }
    let lc_inv = inv_mod(*b.last().unwrap(), p);
    let mut rem = a.clone();
    let qlen = a.len() - b.len() + 1;
    let mut quot = vec![0u64; qlen];
    for k in (0..qlen).rev() {
        let c = mulm(rem[k + b.len() - 1], lc_inv, p);
        if c == 0 {
            continue;
        }
        quot[k] = c;
        for (j, &bc) in b.iter().enumerate() {
            rem[k + j] = subm(rem[k + j], mulm(c, bc, p), p);
        }
    }
    (trim(quot), trim(rem))
}

pub fn monic(a: &ZpPoly, p: u64) -> ZpPoly {
    if a.is_empty() {
        return vec![];
    }
    let inv = inv_mod(*a.last().unwrap(), p);
    a.iter().map(|&c| mulm(c, inv, p)).collect()
}

pub fn gcd(a: &ZpPoly, b: &ZpPoly, p: u64) -> ZpPoly {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_empty() {
        let (_, r) = div_rem(&a, &b, p);
        a = b;
        b = r;
    }
    if a.is_empty() {
        a
    } else {
        monic(&a, p)
    }
}

pub fn derivative(a: &ZpPoly, p: u64) -> ZpPoly {
    if a.len() <= 1 {
        return vec![];
    }
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulm(c, (i as u64) % p, p))
            .collect(),
    )
}

/// base^e mod (f, p); the exponent can exceed machine size (p^d gets big).
pub fn pow_mod(base: &ZpPoly, e: &num_bigint::BigUint, f: &ZpPoly, p: u64) -> ZpPoly {
    use num_traits::Zero;
    let mut acc = vec![1u64];
    let mut b = div_rem(base, f, p).1;
    let mut e = e.clone();
    let one: num_bigint::BigUint = 1u32.into();
    while !e.is_zero() {
        if (&e & &one) == one {
            acc = div_rem(&mul(&acc, &b, p), f, p).1;
        }
        e >>= 1;
        if !e.is_zero() {
            b = div_rem(&mul(&b, &b, p), f, p).1;
        }
    }
    acc
}

/// Factor a squarefree monic polynomial over Z/p into monic irreducibles.
/// The result is sorted (by degree, then coefficients) for determinism.
pub fn factor_squarefree(f: &ZpPoly, p: u64) -> Vec<ZpPoly> {
    assert!(f.len() >= 2);
    let mut out = Vec::new();
    // distinct-degree
    let x = vec![0u64, 1u64];
    let mut h = x.clone(); // x^(p^d) mod f, running
    let mut rest = f.clone();
    let mut d = 0usize;
    while deg(&rest).unwrap_or(0) > 0 {
        d += 1;
        if 2 * d > deg(&rest).unwrap() {
            // remainder is irreducible
            out.push(monic(&rest, p));
            break;
        }
        h = pow_mod(&h, &num_bigint::BigUint::from(p), &rest, p);
        let g = gcd(&sub(&h, &x, p), &rest, p);
        if deg(&g).unwrap_or(0) > 0 {
            // g is a product of irreducibles of degree d
            equal_degree_split(&g, d, p, &mut out);
            rest = div_rem(&rest, &g, p).0;
            h = div_rem(&h, &rest, p).1;
        }
    }
    out.sort();
    out
}

fn equal_degree_split(f: &ZpPoly, d: usize, p: u64, out: &mut Vec<ZpPoly>) {
    let n = deg(f).unwrap();
    if n == d {
        out.push(monic(f, p));
        return;
    }
    // Cantor-Zassenhaus, odd p. Deterministic seed keeps output reproducible.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed + n as u64 + (p << 8));
    let e: num_bigint::BigUint =
        (num_bigint::BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a: ZpPoly = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if deg(&a).unwrap_or(0) < 1 {
            continue;
        }
        let b = pow_mod(&a, &e, f, p);
        let g = gcd(&sub(&b, &vec![1u64], p), f, p);
        let k = deg(&g).unwrap_or(0);
        if k > 0 && k < n {
            equal_degree_split(&g, d, p, out);
            equal_degree_split(&div_rem(f, &g, p).0, d, p, out);
            return;
        }
    }
}

/// Extended Euclid over Z/p: returns (u, v) with u*a + v*b = 1.
/// Panics if gcd(a, b) != 1.
pub fn bezout(a: &ZpPoly, b: &ZpPoly, p: u64) -> (ZpPoly, ZpPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![1u64], vec![]);
    let (mut t0, mut t1) = (vec![], vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = div_rem(&r0, &r1, p);
        let ns = sub(&s0, &mul(&q, &s1, p), p);
        let nt = sub(&t0, &mul(&q, &t1, p), p);
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, ns);
        (t0, t1) = (t1, nt);
    }
    assert_eq!(deg(&r0), Some(0), "inputs not coprime mod p");
    let inv = inv_mod(r0[0], p);
    (
        s0.iter().map(|&c| mulm(c, inv, p)).collect::<Vec<_>>(),
        t0.iter().map(|&c| mulm(c, inv, p)).collect::<Vec<_>>(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn add(a: &ZpPoly, b: &ZpPoly, p: u64) -> ZpPoly {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| (a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)) % p)
                .collect(),
        )
    }

    #[test]
    fn factor_mod_5() {
        // x^2 - 1 = (x-1)(x+1) mod 5
        let f = vec![4u64, 0, 1];
        let fs = factor_squarefree(&f, 5);
        assert_eq!(fs.len(), 2);
        assert_eq!(mul(&fs[0], &fs[1], 5), f);
    }

    #[test]
    fn factor_irreducible_mod_3() {
        // x^2 + 1 is irreducible mod 3
        let f = vec![1u64, 0, 1];
        let fs = factor_squarefree(&f, 3);
        assert_eq!(fs, vec![f]);
    }

    #[test]
    fn bezout_identity() {
        let p = 7;
        let a = vec![1u64, 1]; // x + 1
        let b = vec![2u64, 0, 1]; // x^2 + 2
        let (u, v) = bezout(&a, &b, p);
        let lhs = add(&mul(&u, &a, p), &mul(&v, &b, p), p);
        assert_eq!(lhs, vec![1u64]);
    }
}
