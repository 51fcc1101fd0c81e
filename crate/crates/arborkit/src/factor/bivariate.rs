//! Factorization of squarefree monic polynomials in Q(t)[x] by the
//! evaluation / Hensel-lift / recombination scheme, with a Newton-polygon
//! irreducibility shortcut.

use super::univariate;
use crate::places::{self, Place};
use crate::poly::{Poly, Var};
use crate::polyx::PolyX;
use crate::rational::{rat, Rational};
use crate::ratfunc::RatFunc;
use num_traits::{One, Zero};

/// Yun's squarefree decomposition over Q(t): (monic squarefree part,
/// multiplicity) pairs for a monic input.
pub fn squarefree_decomposition_ft(f: &PolyX) -> Vec<(PolyX, u32)> {
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

// ---- truncated power series in s over Q, fixed precision ----

type Ser = Vec<Rational>;

fn ser_zero(k: usize) -> Ser {
    vec![Rational::zero(); k]
}

fn ser_mul(a: &Ser, b: &Ser, k: usize) -> Ser {
    let mut out = ser_zero(k);
    for i in 0..k.min(a.len()) {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..(k - i).min(b.len()) {
            if !b[j].is_zero() {
                out[i + j] += &a[i] * &b[j];
            }
        }
    }
    out
}

fn ser_sub(a: &Ser, b: &Ser, k: usize) -> Ser {
    (0..k)
        .map(|i| {
            a.get(i).cloned().unwrap_or_else(Rational::zero)
                - b.get(i).cloned().unwrap_or_else(Rational::zero)
        })
        .collect()
}

/// Inverse of a unit series (nonzero constant term).
fn ser_inv(a: &Ser, k: usize) -> Ser {
    assert!(!a[0].is_zero(), "series not a unit");
    let c0 = Rational::one() / &a[0];
    let mut out = ser_zero(k);
    out[0] = c0.clone();
    for j in 1..k {
        let mut acc = Rational::zero();
        for i in 1..=j.min(a.len() - 1) {
            acc += &a[i] * &out[j - i];
        }
        out[j] = -acc * &c0;
    }
    out
}

// ---- polynomials in x with series coefficients ----

type SerPoly = Vec<Ser>;

fn sp_mul(a: &SerPoly, b: &SerPoly, k: usize) -> SerPoly {
    let mut out = vec![ser_zero(k); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        for (j, cb) in b.iter().enumerate() {
            let prod = ser_mul(ca, cb, k);
            for (m, v) in prod.into_iter().enumerate() {
                out[i + j][m] += v;
            }
        }
    }
    out
}

fn sp_sub(a: &SerPoly, b: &SerPoly, k: usize) -> SerPoly {
    let n = a.len().max(b.len());
    let zero = ser_zero(k);
    (0..n)
        .map(|i| {
            ser_sub(
                a.get(i).unwrap_or(&zero),
                b.get(i).unwrap_or(&zero),
                k,
            )
        })
        .collect()
}

// ---- rational polynomial helpers (x over Q) ----

/// Extended Euclid over Q[x]: (u, v) with u*a + v*b = 1; inputs coprime.
fn bezout_q(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (Poly::one(Var::X), Poly::zero(Var::X));
    let (mut t0, mut t1) = (Poly::zero(Var::X), Poly::one(Var::X));
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1).expect("r1 nonzero");
        let ns = s0.sub(&q.mul(&s1));
        let nt = t0.sub(&q.mul(&t1));
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, ns);
        (t0, t1) = (t1, nt);
    }
    assert_eq!(r0.degree(), Some(0), "inputs not coprime");
    let inv = Rational::one() / r0.coeff(0);
    (s0.scale(&inv), t0.scale(&inv))
}

fn poly_to_serpoly(p: &Poly, k: usize) -> SerPoly {
    (0..=p.deg_or_zero())
        .map(|i| {
            let mut s = ser_zero(k);
            s[0] = p.coeff(i);
            s
        })
        .collect()
}

/// Coefficient of s^j across the x-coefficients, as a polynomial in x.
fn extract_layer(e: &SerPoly, j: usize) -> Poly {
    Poly::new(Var::X, e.iter().map(|c| c[j].clone()).collect())
}

/// s-adic Hensel lift: f monic over Q[[s]]/(s^k), f = g0*h0 (mod s) with
/// g0, h0 monic coprime in Q[x]. Returns monic lifts to precision k.
fn hensel_pair_s(f: &SerPoly, g0: &Poly, h0: &Poly, k: usize) -> (SerPoly, SerPoly) {
    let (_u, v) = bezout_q(g0, h0);
    let mut g = poly_to_serpoly(g0, k);
    let mut h = poly_to_serpoly(h0, k);
    for j in 1..k {
        let e = sp_sub(f, &sp_mul(&g, &h, k), k);
        let tj = extract_layer(&e, j);
        if tj.is_zero() {
            continue;
        }
        // solve a*h0 + b*g0 = tj with deg a < deg g0, deg b < deg h0
        let a = tj.mul(&v).div_rem(g0).unwrap().1;
        let num = tj.sub(&a.mul(h0));
        let (b, r) = num.div_rem(g0).unwrap();
        debug_assert!(r.is_zero());
        for i in 0..=a.deg_or_zero() {
            g[i][j] += a.coeff(i);
        }
        for i in 0..=b.deg_or_zero() {
            h[i][j] += b.coeff(i);
        }
    }
    (g, h)
}

/// Lift a list of pairwise-coprime monic rational factors of f (mod s) to
/// precision k.
fn hensel_list_s(f: &SerPoly, factors: &[Poly], k: usize) -> Vec<SerPoly> {
    if factors.len() == 1 {
        return vec![f.clone()];
    }
    let mid = factors.len() / 2;
    let (left, right) = factors.split_at(mid);
    let g0 = left.iter().fold(Poly::one(Var::X), |acc, p| acc.mul(p));
    let h0 = right.iter().fold(Poly::one(Var::X), |acc, p| acc.mul(p));
    let (g, h) = hensel_pair_s(f, &g0, &h0, k);
    let mut out = hensel_list_s(&g, left, k);
    out.extend(hensel_list_s(&h, right, k));
    out
}

/// Coefficients of p(s + a) as a polynomial in s (Taylor shift).
fn taylor_shift(p: &Poly, a: &Rational) -> Vec<Rational> {
    let mut r: Vec<Rational> = p.coeffs().to_vec();
    if r.is_empty() {
        return vec![Rational::zero()];
    }
    let m = r.len() - 1;
    for i in 0..m {
        for j in (i..m).rev() {
            let add = a * &r[j + 1];
            r[j] += add;
        }
    }
    r
}

/// Series (truncated at k) back to a polynomial in t via s = t - a.
fn series_to_poly_t(ser: &Ser, a: &Rational) -> Poly {
    let s = Poly::new(Var::T, vec![-a.clone(), Rational::one()]);
    let mut acc = Poly::zero(Var::T);
    for c in ser.iter().rev() {
        acc = acc.mul(&s).add(&Poly::constant(Var::T, c.clone()));
    }
    acc
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

/// Clear denominators and content: monic g over Q(t) becomes a primitive
/// element of Q[t][x], returned as its x-coefficients (polynomials in t).
fn to_primitive_bipoly(g: &PolyX) -> Vec<Poly> {
    let mut d = Poly::one(Var::T);
    for c in g.coeffs() {
        // lcm(d, den) = d * den / gcd
        let gc = d.gcd(c.den());
        d = d.mul(&c.den().div_rem(&gc).unwrap().0);
    }
    let coeffs: Vec<Poly> = g
        .coeffs()
        .iter()
        .map(|c| {
            let cof = d.div_rem(c.den()).unwrap().0;
            c.num().mul(&cof)
        })
        .collect();
    let mut content = Poly::zero(Var::T);
    for c in &coeffs {
        content = content.gcd(c);
    }
    coeffs
        .iter()
        .map(|c| c.div_rem(&content).unwrap().0)
        .collect()
}

fn bipoly_to_polyx(coeffs: &[Poly]) -> PolyX {
    PolyX::new(
        coeffs
            .iter()
            .map(|c| RatFunc::from_poly(c.clone()))
            .collect(),
    )
}

/// Factor a squarefree monic polynomial in Q(t)[x] into monic irreducible
/// factors.
pub fn factor_squarefree_monic(g: &PolyX) -> Vec<PolyX> {
    let mut g = g.monic();
    let n = match g.degree() {
        None | Some(0) => return vec![],
        Some(n) => n,
    };
    if n == 1 {
        return vec![g];
    }
    let mut out: Vec<PolyX> = Vec::new();
    // peel off an x factor so Newton polygons and evaluations are clean
    if g.coeff(0).is_zero() {
        out.push(PolyX::x());
        g = g.div_rem(&PolyX::x()).unwrap().0;
        if g.degree() == Some(1) {
            out.push(g);
            out.sort_by(super::cmp_polyx);
            return out;
        }
    }
    // Newton-polygon shortcut at (t) and at infinity
    for v in [
        Place::finite_unchecked(Poly::var_poly(Var::T)),
        Place::Infinity,
    ] {
        if places::eisenstein_certificate(&g, &v) == Ok(true) {
            out.push(g);
            out.sort_by(super::cmp_polyx);
            return out;
        }
    }
    let bi = to_primitive_bipoly(&g);
    let deg_t = bi.iter().map(|c| c.deg_or_zero()).max().unwrap_or(0);
    if deg_t == 0 {
        // constant coefficients: factors over Q stay irreducible over Q(t)
        let q_poly = Poly::new(Var::X, bi.iter().map(|c| c.coeff(0)).collect());
        for f in univariate::factor_squarefree_monic_rational(&q_poly.monic()) {
            out.push(PolyX::from_poly_x(&f));
        }
        out.sort_by(super::cmp_polyx);
        return out;
    }
    let lead = bi.last().unwrap().clone();
    // evaluation point: first a with lc(a) != 0 and squarefree specialization
    let mut a = Rational::zero();
    let mut spec_factors: Vec<Poly> = Vec::new();
    for cand in candidate_points() {
        if lead.eval(&cand).is_zero() {
            continue;
        }
        let spec = Poly::new(Var::X, bi.iter().map(|c| c.eval(&cand)).collect()).monic();
        let gc = spec.gcd(&spec.derivative());
        if gc.degree() != Some(0) {
            continue;
        }
        a = cand;
        spec_factors = univariate::factor_squarefree_monic_rational(&spec);
        break;
    }
    assert!(!spec_factors.is_empty(), "no good evaluation point found");
    if spec_factors.len() == 1 {
        out.push(g);
        out.sort_by(super::cmp_polyx);
        return out;
    }
    // lift (t - a)-adically past twice the t-degree
    let k = 2 * deg_t + 1;
    let shifted: Vec<Ser> = bi
        .iter()
        .map(|c| {
            let mut s = taylor_shift(c, &a);
            s.resize(k, Rational::zero());
            s
        })
        .collect();
    let lead_ser = shifted.last().unwrap().clone();
    let lead_inv = ser_inv(&lead_ser, k);
    let f_monic: SerPoly = shifted.iter().map(|c| ser_mul(c, &lead_inv, k)).collect();
    let lifted = hensel_list_s(&f_monic, &spec_factors, k);

    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut cur = g.clone();
    'outer: loop {
        let r = remaining.len();
        for s in 1..=r / 2 {
            for subset in subsets_of_size(r, s) {
                let prod = subset
                    .iter()
                    .map(|&i| &lifted[remaining[i]])
                    .fold(vec![{
                        let mut one = ser_zero(k);
                        one[0] = Rational::one();
                        one
                    }], |acc, fac| sp_mul(&acc, fac, k));
                // scale by the leading coefficient so true factors become
                // polynomial in t
                let scaled: SerPoly = prod
                    .iter()
                    .map(|c| ser_mul(c, &lead_ser, k))
                    .collect();
                let coeffs_t: Vec<Poly> =
                    scaled.iter().map(|c| series_to_poly_t(c, &a)).collect();
                let cand = bipoly_to_polyx(&coeffs_t).monic();
                if cand.degree() != Some(scaled.len() - 1) {
                    continue;
                }
                if let Ok((q, rem)) = cur.div_rem(&cand) {
                    if rem.is_zero() {
                        out.push(cand);
                        cur = q;
                        let removed: Vec<usize> =
                            subset.iter().map(|&i| remaining[i]).collect();
                        remaining.retain(|i| !removed.contains(i));
                        continue 'outer;
                    }
                }
            }
        }
        break;
    }
    if cur.degree().map_or(false, |d| d >= 1) {
        out.push(cur);
    }
    out.sort_by(super::cmp_polyx);
    out
}

/// 0, 1, -1, 2, -2, ...
fn candidate_points() -> impl Iterator<Item = Rational> {
    (0i64..).flat_map(|i| {
        if i == 0 {
            vec![rat(0)]
        } else {
            vec![rat(i), rat(-i)]
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> RatFunc {
        RatFunc::t()
    }

    #[test]
    fn x2_plus_t_irreducible() {
        let f = PolyX::new(vec![t(), RatFunc::zero(), RatFunc::one()]);
        let fs = factor_squarefree_monic(&f);
        assert_eq!(fs, vec![f]);
    }

    #[test]
    fn constructed_product_recovered() {
        // (x^2 - t)(x^2 - t - 1)
        let a = PolyX::new(vec![t().neg(), RatFunc::zero(), RatFunc::one()]);
        let b = PolyX::new(vec![
            t().add(&RatFunc::one()).neg(),
            RatFunc::zero(),
            RatFunc::one(),
        ]);
        let prod = a.mul(&b);
        let fs = factor_squarefree_monic(&prod);
        assert_eq!(fs.len(), 2);
        assert!(fs.contains(&a));
        assert!(fs.contains(&b));
    }

    #[test]
    fn linear_times_quadratic() {
        // (x - t)(x^2 + x + t)
        let a = PolyX::new(vec![t().neg(), RatFunc::one()]);
        let b = PolyX::new(vec![t(), RatFunc::one(), RatFunc::one()]);
        let prod = a.mul(&b);
        let fs = factor_squarefree_monic(&prod);
        assert_eq!(fs.len(), 2);
        assert!(fs.contains(&a));
        assert!(fs.contains(&b));
    }

    #[test]
    fn rational_function_coefficients() {
        // (x - 1/t)(x + 1/t) = x^2 - 1/t^2
        let inv_t = t().inv().unwrap();
        let a = PolyX::new(vec![inv_t.neg(), RatFunc::one()]);
        let b = PolyX::new(vec![inv_t, RatFunc::one()]);
        let prod = a.mul(&b);
        let fs = factor_squarefree_monic(&prod);
        assert_eq!(fs.len(), 2);
    }
}
