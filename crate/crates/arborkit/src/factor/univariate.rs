//! Univariate factorization over Q: squarefree decomposition, modular
//! factorization, Hensel lifting past the Mignotte bound, and subset
//! recombination.

use super::zp::{self, ZpPoly};
use crate::poly::Poly;
use crate::rational::Rational;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

const PRIMES: &[u64] = &[
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193,
    197, 199, 211, 223, 227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293,
];

/// Yun's squarefree decomposition of a monic polynomial over Q.
/// Returns pairs (monic squarefree part, multiplicity).
pub fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, u32)> {
    assert!(!f.is_zero());
    let f = f.monic();
    if f.degree() == Some(0) {
        return vec![];
    }
    let df = f.derivative();
    let a = f.gcd(&df);
    let mut b = f.div_rem(&a).unwrap().0;
    let mut d = df.div_rem(&a).unwrap().0.sub(&b.derivative());
    let mut out = Vec::new();
    let mut i = 1u32;
    while b.degree() != Some(0) {
        let ai = b.gcd(&d);
        let bn = b.div_rem(&ai).unwrap().0;
        let c = d.div_rem(&ai).unwrap().0;
        d = c.sub(&bn.derivative());
        b = bn;
        if ai.degree().map_or(false, |dg| dg > 0) {
            out.push((ai.monic(), i));
        }
        i += 1;
    }
    out
}

// ---- integer polynomial helpers ----

type ZPoly = Vec<BigInt>;

fn ztrim(mut a: ZPoly) -> ZPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn zmul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    ztrim(out)
}

fn zsub(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    ztrim(
        (0..n)
            .map(|i| {
                a.get(i).cloned().unwrap_or_else(BigInt::zero)
                    - b.get(i).cloned().unwrap_or_else(BigInt::zero)
            })
            .collect(),
    )
}

/// Exact division of integer polynomials by a monic divisor.
/// Returns None if the division is not exact over Z.
fn zdiv_exact_monic(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    assert!(b.last().is_some_and(|c| c.is_one()), "divisor must be monic");
    if a.is_empty() {
        return Some(vec![]);
    }
    if a.len() < b.len() {
        return None;
    }
    let mut rem = a.clone();
    let qlen = a.len() - b.len() + 1;
    let mut quot = vec![BigInt::zero(); qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + b.len() - 1].clone();
        if !c.is_zero() {
            for (j, bc) in b.iter().enumerate() {
                rem[k + j] -= &c * bc;
            }
        }
        quot[k] = c;
    }
    if ztrim(rem).is_empty() {
        Some(ztrim(quot))
    } else {
        None
    }
}

fn reduce_mod(a: &ZPoly, m: &BigInt) -> ZPoly {
    ztrim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn to_zp(a: &ZPoly, p: u64) -> ZpPoly {
    let pm = BigInt::from(p);
    let mut out: ZpPoly = a
        .iter()
        .map(|c| {
            let r = c.mod_floor(&pm);
            let d: BigUint = r.to_biguint().unwrap();
            let v: u64 = (&d).try_into().unwrap();
            v
        })
        .collect();
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

fn zp_to_z(a: &ZpPoly) -> ZPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Centered representative in (-m/2, m/2].
fn symmetric(a: &ZPoly, m: &BigInt) -> ZPoly {
    let half = m / 2;
    ztrim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

/// Lift f = g*h (mod p), g and h monic and coprime mod p, to a factorization
/// mod p^k. `f` itself is taken mod p^k; both outputs are monic.
fn hensel_pair(f: &ZPoly, g0: &ZpPoly, h0: &ZpPoly, p: u64, k: u32) -> (ZPoly, ZPoly) {
    let (_u, v) = zp::bezout(g0, h0, p);
    let pk = BigInt::from(p).pow(k);
    let mut g = zp_to_z(g0);
    let mut h = zp_to_z(h0);
    let mut m = BigInt::from(p);
    while m < pk {
        let m_next = (&m * p).min(pk.clone());
        // error term, divisible by m
        let e = reduce_mod(&zsub(f, &zmul(&g, &h)), &m_next);
        let t: ZPoly = ztrim(e.iter().map(|c| c / &m).collect());
        let t_p = to_zp(&t, p);
        // solve a*h0 + b*g0 = t (mod p) with deg a < deg g0
        let a = zp::div_rem(&zp::mul(&t_p, &v, p), g0, p).1;
        let num = zp::sub(&t_p, &zp::mul(&a, h0, p), p);
        let (b, r) = zp::div_rem(&num, g0, p);
        debug_assert!(r.is_empty());
        let add_g = zp_to_z(&a);
        let add_h = zp_to_z(&b);
        for (i, c) in add_g.iter().enumerate() {
            if i >= g.len() {
                g.push(BigInt::zero());
            }
            g[i] += c * &m;
        }
        for (i, c) in add_h.iter().enumerate() {
            if i >= h.len() {
                h.push(BigInt::zero());
            }
            h[i] += c * &m;
        }
        g = reduce_mod(&g, &m_next);
        h = reduce_mod(&h, &m_next);
        m = m_next;
    }
    (ztrim(g), ztrim(h))
}

/// Lift a list of pairwise-coprime monic factors of f (mod p) to mod p^k.
fn hensel_list(f: &ZPoly, factors: &[ZpPoly], p: u64, k: u32) -> Vec<ZPoly> {
    if factors.len() == 1 {
        let pk = BigInt::from(p).pow(k);
        return vec![reduce_mod(f, &pk)];
    }
    let mid = factors.len() / 2;
    let (left, right) = factors.split_at(mid);
    let g0 = left
        .iter()
        .fold(vec![1u64], |acc, fac| zp::mul(&acc, fac, p));
    let h0 = right
        .iter()
        .fold(vec![1u64], |acc, fac| zp::mul(&acc, fac, p));
    let (g, h) = hensel_pair(f, &g0, &h0, p, k);
    let mut out = hensel_list(&g, left, p, k);
    out.extend(hensel_list(&h, right, p, k));
    out
}

/// Mignotte-style bound on the coefficients of any monic factor of a monic
/// integer polynomial.
fn factor_coeff_bound(f: &ZPoly) -> BigInt {
    let n = f.len() - 1;
    let sumsq: BigInt = f.iter().map(|c| c * c).sum();
    let norm = sumsq.to_biguint().unwrap().sqrt() + BigUint::one();
    (BigInt::from(norm)) << n
}

fn subsets_of_size(n: usize, s: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(s);
    fn rec(start: usize, n: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, s, cur, out);
            cur.pop();
        }
    }
    rec(0, n, s, &mut cur, &mut out);
    out
}

/// Factor a squarefree monic integer polynomial into monic integer
/// irreducibles (Zassenhaus).
pub fn factor_squarefree_monic_int(f: &ZPoly) -> Vec<ZPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.clone()];
    }
    // choose a prime keeping f squarefree
    let p = *PRIMES
        .iter()
        .find(|&&p| {
            let fp = to_zp(f, p);
            if zp::deg(&fp) != Some(n) {
                return false;
            }
            let d = zp::derivative(&fp, p);
            zp::deg(&zp::gcd(&fp, &d, p)) == Some(0)
        })
        .expect("no suitable prime found (squarefree input expected)");
    let fp = to_zp(f, p);
    let modular = zp::factor_squarefree(&fp, p);
    if modular.len() == 1 {
        return vec![f.clone()];
    }
    let bound = factor_coeff_bound(f);
    let target: BigInt = &bound * 2 + 1;
    let mut k = 1u32;
    let mut pk = BigInt::from(p);
    while pk < target {
        pk *= p;
        k += 1;
    }
    let lifted = hensel_list(&reduce_mod(f, &pk), &modular, p, k);

    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut current = f.clone();
    let mut out: Vec<ZPoly> = Vec::new();
    'outer: loop {
        let r = remaining.len();
        for s in 1..=r / 2 {
            for subset in subsets_of_size(r, s) {
                let prod = subset
                    .iter()
                    .map(|&i| &lifted[remaining[i]])
                    .fold(vec![BigInt::one()], |acc, fac| {
                        reduce_mod(&zmul(&acc, fac), &pk)
                    });
                let cand = symmetric(&prod, &pk);
                if cand.last().map_or(true, |c| !c.is_one()) {
                    continue;
                }
                if let Some(q) = zdiv_exact_monic(&current, &cand) {
                    out.push(cand);
                    current = q;
                    let removed: Vec<usize> = subset.iter().map(|&i| remaining[i]).collect();
                    remaining.retain(|i| !removed.contains(i));
                    continue 'outer;
                }
            }
        }
        break;
    }
    if current.len() > 1 {
        out.push(current);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Factor a monic squarefree polynomial over Q into monic irreducible
/// rational factors.
pub fn factor_squarefree_monic_rational(g: &Poly) -> Vec<Poly> {
    let var = g.var();
    let n = g.degree().expect("nonzero");
    if n == 0 {
        return vec![];
    }
    if n == 1 {
        return vec![g.monic()];
    }
    // clear denominators: P = D*g has integer coefficients, leading coeff D
    let mut d = BigInt::one();
    for c in g.coeffs() {
        d = d.lcm(c.denom());
    }
    let p_int: ZPoly = ztrim(
        g.coeffs()
            .iter()
            .map(|c| {
                let scaled = c * Rational::from_integer(d.clone());
                assert!(scaled.is_integer());
                scaled.to_integer()
            })
            .collect(),
    );
    // monicize: F(y) = l^(n-1) * P(y/l), monic integer
    let l = p_int.last().unwrap().clone();
    let f_monic: ZPoly = (0..=n)
        .map(|i| {
            if i == n {
                BigInt::one()
            } else {
                &p_int[i] * l.pow((n - 1 - i) as u32)
            }
        })
        .collect();
    let factors = factor_squarefree_monic_int(&f_monic);
    // map back: h(x) = monic(H(l*x)) over Q
    factors
        .into_iter()
        .map(|h| {
            let m = h.len() - 1;
            let coeffs: Vec<Rational> = h
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    // c * l^i / l^m
                    Rational::new(c * l.pow(i as u32), l.pow(m as u32))
                })
                .collect();
            Poly::new(var, coeffs).monic()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Var;
    use crate::rational::rat;

    fn xp(coeffs: &[i64]) -> Poly {
        Poly::new(Var::X, coeffs.iter().map(|&c| rat(c)).collect())
    }

    #[test]
    fn squarefree_decomposition_basic() {
        // (x-1)^2 (x+2)
        let f = xp(&[-1, 1]).pow(2).mul(&xp(&[2, 1]));
        let parts = squarefree_decomposition(&f);
        assert_eq!(parts, vec![(xp(&[2, 1]), 1), (xp(&[-1, 1]), 2)]);
    }

    #[test]
    fn zassenhaus_splits_product() {
        // (x^2+1)(x^2-2)(x+3)
        let f = xp(&[1, 0, 1]).mul(&xp(&[-2, 0, 1])).mul(&xp(&[3, 1]));
        let fs = factor_squarefree_monic_rational(&f);
        assert_eq!(fs.len(), 3);
        let prod = fs.iter().fold(Poly::one(Var::X), |acc, g| acc.mul(g));
        assert_eq!(prod, f);
    }

    #[test]
    fn irreducible_quartic() {
        // x^4 + 1 is irreducible over Q
        let f = xp(&[1, 0, 0, 0, 1]);
        let fs = factor_squarefree_monic_rational(&f);
        assert_eq!(fs, vec![f]);
    }

    #[test]
    fn non_monic_input() {
        // 6x^2 - x - 1 = 6(x - 1/2)(x + 1/3)
        let f = xp(&[-1, -1, 6]).monic();
        let fs = factor_squarefree_monic_rational(&f);
        assert_eq!(fs.len(), 2);
    }
}
