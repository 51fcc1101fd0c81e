//! Polynomials in x with coefficients in Q(t).

use crate::poly::{ArithError, Poly, Var};
use crate::ratfunc::RatFunc;
use std::fmt;

/// Dense polynomial in x over the field Q(t).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyX {
    coeffs: Vec<RatFunc>,
}

impl PolyX {
    pub fn new(mut coeffs: Vec<RatFunc>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolyX { coeffs }
    }

    pub fn zero() -> Self {
        PolyX { coeffs: vec![] }
    }

    pub fn one() -> Self {
        PolyX::constant(RatFunc::one())
    }

    pub fn constant(c: RatFunc) -> Self {
        PolyX::new(vec![c])
    }

    pub fn monomial(c: RatFunc, k: usize) -> Self {
        if c.is_zero() {
            return PolyX::zero();
        }
        let mut coeffs = vec![RatFunc::zero(); k + 1];
        coeffs[k] = c;
        PolyX { coeffs }
    }

    /// x itself.
    pub fn x() -> Self {
        PolyX::monomial(RatFunc::one(), 1)
    }

    /// Lift a polynomial in x over Q into Q(t)[x].
    pub fn from_poly_x(p: &Poly) -> Self {
        assert_eq!(p.var(), Var::X);
        PolyX::new(
            p.coeffs()
                .iter()
                .map(|c| RatFunc::from_rational(c.clone()))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> RatFunc {
        self.coeffs.get(i).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading_coeff(&self) -> RatFunc {
        self.coeffs.last().cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_one()
    }

    pub fn monic(&self) -> PolyX {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let lc = self.leading_coeff();
        PolyX::new(
            self.coeffs
                .iter()
                .map(|c| c.div(&lc).expect("lc nonzero"))
                .collect(),
        )
    }

    pub fn add(&self, o: &PolyX) -> PolyX {
        let n = self.coeffs.len().max(o.coeffs.len());
        PolyX::new((0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &PolyX) -> PolyX {
        let n = self.coeffs.len().max(o.coeffs.len());
        PolyX::new((0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect())
    }

    pub fn mul(&self, o: &PolyX) -> PolyX {
        if self.is_zero() || o.is_zero() {
            return PolyX::zero();
        }
        let mut coeffs = vec![RatFunc::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        PolyX::new(coeffs)
    }

    pub fn scale(&self, c: &RatFunc) -> PolyX {
        PolyX::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn pow(&self, mut e: u32) -> PolyX {
        let mut base = self.clone();
        let mut acc = PolyX::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn div_rem(&self, div: &PolyX) -> Result<(PolyX, PolyX), ArithError> {
        if div.is_zero() {
            return Err(ArithError::ZeroDivision);
        }
        let dd = div.degree().unwrap();
        if self.degree().map_or(true, |d| d < dd) {
            return Ok((PolyX::zero(), self.clone()));
        }
        let lc = div.leading_coeff();
        let mut rem = self.coeffs.clone();
        let qlen = rem.len() - dd;
        let mut quot = vec![RatFunc::zero(); qlen];
        for k in (0..qlen).rev() {
            let c = rem[k + dd].div(&lc).expect("lc nonzero");
            if c.is_zero() {
                continue;
            }
            for (j, b) in div.coeffs.iter().enumerate() {
                let v = c.mul(b);
                rem[k + j] = rem[k + j].sub(&v);
            }
            quot[k] = c;
        }
        Ok((PolyX::new(quot), PolyX::new(rem)))
    }

    pub fn divides_exactly(&self, div: &PolyX) -> bool {
        match self.div_rem(div) {
            Ok((_, r)) => r.is_zero(),
            Err(_) => false,
        }
    }

    pub fn gcd(&self, other: &PolyX) -> PolyX {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        // primitive pseudo-remainder sequence over Q[t]: naive Euclid over
        // Q(t) blows up its coefficient degrees exponentially
        let mut a = clear_denominators(self);
        let mut b = clear_denominators(other);
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let r = pseudo_rem(&a, &b);
            a = b;
            b = primitive_part(r);
        }
        PolyX::new(
            a.into_iter().map(RatFunc::from_poly).collect(),
        )
        .monic()
    }

    pub fn derivative(&self) -> PolyX {
        if self.coeffs.len() <= 1 {
            return PolyX::zero();
        }
        PolyX::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(&crate::rational::rat(i as i64)))
                .collect(),
        )
    }

    /// Evaluate at x = z in Q(t).
    pub fn eval(&self, z: &RatFunc) -> RatFunc {
        let mut acc = RatFunc::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(c);
        }
        acc
    }

    /// Evaluate the t-variable at t = a, giving a polynomial in x over Q.
    /// `None` if a is a pole of some coefficient.
    pub fn specialize_t(&self, a: &crate::rational::Rational) -> Option<Poly> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(c.eval(a)?);
        }
        Some(Poly::new(Var::X, coeffs))
    }

    /// Largest t-degree appearing among numerators and denominators.
    pub fn t_degree_bound(&self) -> usize {
        self.coeffs
            .iter()
            .map(|c| c.num().deg_or_zero().max(c.den().deg_or_zero()))
            .max()
            .unwrap_or(0)
    }
}

/// x-coefficients in Q[t] after clearing denominators, trailing zeros
/// trimmed; an empty vector encodes zero.
fn clear_denominators(p: &PolyX) -> Vec<Poly> {
    let mut d = Poly::one(Var::T);
    for c in p.coeffs() {
        let g = d.gcd(c.den());
        d = d.mul(&c.den().div_rem(&g).unwrap().0);
    }
    let mut out: Vec<Poly> = p
        .coeffs()
        .iter()
        .map(|c| c.num().mul(&d.div_rem(c.den()).unwrap().0))
        .collect();
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

/// Remainder of a modulo b up to a unit of Q[t]: repeatedly eliminates the
/// top coefficient after scaling by lc(b), staying inside Q[t].
fn pseudo_rem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    let mut r = a.to_vec();
    while r.len() > db {
        let top = r.pop().unwrap();
        if top.is_zero() {
            continue;
        }
        let shift = r.len() - db;
        for c in r.iter_mut() {
            *c = c.mul(lb);
        }
        for (j, bc) in b[..db].iter().enumerate() {
            r[shift + j] = r[shift + j].sub(&top.mul(bc));
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

/// Divide out the Q[t]-content.
fn primitive_part(r: Vec<Poly>) -> Vec<Poly> {
    if r.is_empty() {
        return r;
    }
    let mut content = Poly::zero(Var::T);
    for c in &r {
        content = content.gcd(c);
    }
    r.into_iter()
        .map(|c| c.div_rem(&content).unwrap().0)
        .collect()
}

impl fmt::Display for PolyX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "({c})")?;
            } else if i == 1 {
                write!(f, "({c})*x")?;
            } else {
                write!(f, "({c})*x^{i}")?;
            }
        }
        Ok(())
    }
}
