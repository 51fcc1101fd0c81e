//! Dense univariate polynomials over Q, tagged with their variable.

use crate::rational::Rational;
use num_traits::{One, Zero};
use std::fmt;

use thiserror::Error;

/// Variable tag. Polynomials in `t` live in the base field Q(t); polynomials
/// in `x` are the dynamical variable. Mixing the two in one arithmetic
/// operation is a programming error and panics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    T,
    X,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::T => write!(f, "t"),
            Var::X => write!(f, "x"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("division by the zero polynomial")]
    ZeroDivision,
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("operation requires a nonzero input")]
    ZeroInput,
}

/// Dense polynomial over Q. The coefficient of degree i sits at index i and
/// the highest index is nonzero unless the polynomial is zero (empty vector).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    var: Var,
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(var: Var, mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { var, coeffs }
    }

    pub fn zero(var: Var) -> Self {
        Poly { var, coeffs: vec![] }
    }

    pub fn one(var: Var) -> Self {
        Poly::constant(var, Rational::one())
    }

    pub fn constant(var: Var, c: Rational) -> Self {
        Poly::new(var, vec![c])
    }

    /// c * var^k
    pub fn monomial(var: Var, c: Rational, k: usize) -> Self {
        if c.is_zero() {
            return Poly::zero(var);
        }
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Poly { var, coeffs }
    }

    /// The variable itself as a polynomial.
    pub fn var_poly(var: Var) -> Self {
        Poly::monomial(var, Rational::one(), 1)
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` is the "-infinity" degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn deg_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading_coeff(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.coeff(0))
        } else {
            None
        }
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_one()
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let lc = self.leading_coeff();
        Poly::new(
            self.var,
            self.coeffs.iter().map(|c| c / &lc).collect(),
        )
    }

    fn check_var(&self, other: &Poly) {
        assert_eq!(
            self.var, other.var,
            "mixed polynomial variables: {} vs {}",
            self.var, other.var
        );
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check_var(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + other.coeff(i));
        }
        Poly::new(self.var, coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.check_var(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) - other.coeff(i));
        }
        Poly::new(self.var, coeffs)
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.var, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check_var(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.var);
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] += a * b;
            }
        }
        Poly::new(self.var, coeffs)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.var, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.var);
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

    /// Euclidean division: self = q * div + r with deg r < deg div.
    pub fn div_rem(&self, div: &Poly) -> Result<(Poly, Poly), ArithError> {
        self.check_var(div);
        if div.is_zero() {
            return Err(ArithError::ZeroDivision);
        }
        let dd = div.degree().unwrap();
        let lc = div.leading_coeff();
        if self.degree().map_or(true, |d| d < dd) {
            return Ok((Poly::zero(self.var), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let qlen = rem.len() - dd;
        let mut quot = vec![Rational::zero(); qlen];
        for k in (0..qlen).rev() {
            let c = &rem[k + dd] / &lc;
            if c.is_zero() {
                continue;
            }
            for (j, b) in div.coeffs.iter().enumerate() {
                let v = c.clone() * b;
                rem[k + j] -= v;
            }
            quot[k] = c;
        }
        Ok((Poly::new(self.var, quot), Poly::new(self.var, rem)))
    }

    /// True iff `div` divides self exactly.
    pub fn divides_exactly(&self, div: &Poly) -> bool {
        match self.div_rem(div) {
            Ok((_, r)) => r.is_zero(),
            Err(_) => false,
        }
    }

    /// Monic greatest common divisor; gcd(a, 0) = monic(a).
    pub fn gcd(&self, other: &Poly) -> Poly {
        self.check_var(other);
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("b nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero(self.var);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rational::from_integer(i.into()))
            .collect();
        Poly::new(self.var, coeffs)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = if c < &Rational::zero() { -c } else { c.clone() };
            if first {
                if c < &Rational::zero() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c < &Rational::zero() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if i == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if i == 1 {
                    write!(f, "{}", self.var)?;
                } else {
                    write!(f, "{}^{}", self.var, i)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn tp(coeffs: &[i64]) -> Poly {
        Poly::new(Var::T, coeffs.iter().map(|&c| rat(c)).collect())
    }

    #[test]
    fn gcd_examples() {
        // gcd(t^2 - 1, t^2 - 2t + 1) = t - 1
        let a = tp(&[-1, 0, 1]);
        let b = tp(&[1, -2, 1]);
        assert_eq!(a.gcd(&b), tp(&[-1, 1]));
        // gcd(a, 0) = monic(a)
        let c = tp(&[2, 4]);
        assert_eq!(c.gcd(&Poly::zero(Var::T)), tp(&[1, 2]).monic());
        // gcd(t^2 + 1, t + 1) = 1
        assert_eq!(tp(&[1, 0, 1]).gcd(&tp(&[1, 1])), Poly::one(Var::T));
    }

    #[test]
    fn div_rem_roundtrip() {
        let a = tp(&[3, -2, 0, 5, 1]);
        let b = tp(&[1, 2, 3]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    #[should_panic(expected = "mixed polynomial variables")]
    fn mixed_vars_panic() {
        let a = tp(&[1, 1]);
        let b = Poly::new(Var::X, vec![rat(1), rat(1)]);
        let _ = a.add(&b);
    }

    #[test]
    fn zero_degree_sentinel() {
        assert_eq!(Poly::zero(Var::T).degree(), None);
        assert_eq!(tp(&[7]).degree(), Some(0));
    }
}
