//! Reduced rational functions over Q in the variable t — the field K = Q(t).

use crate::poly::{ArithError, Poly, Var};
use crate::rational::Rational;
use num_traits::{One, Zero};
use std::fmt;

/// A rational function num/den with gcd(num, den) = 1 and den monic.
/// Reduction is eager: every value of this type is in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Normalize num/den to the reduced, monic-denominator form.
    pub fn new(num: Poly, den: Poly) -> Result<Self, ArithError> {
        assert_eq!(num.var(), Var::T);
        assert_eq!(den.var(), Var::T);
        if den.is_zero() {
            return Err(ArithError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RatFunc {
                num: Poly::zero(Var::T),
                den: Poly::one(Var::T),
            });
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g).expect("gcd nonzero");
        let (den, _) = den.div_rem(&g).expect("gcd nonzero");
        let lc = den.leading_coeff();
        let num = num.scale(&(Rational::one() / &lc));
        let den = den.scale(&(Rational::one() / &lc));
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(p: Poly) -> Self {
        assert_eq!(p.var(), Var::T);
        RatFunc {
            num: p,
            den: Poly::one(Var::T),
        }
    }

    pub fn from_rational(r: Rational) -> Self {
        RatFunc::from_poly(Poly::constant(Var::T, r))
    }

    pub fn from_int(n: i64) -> Self {
        RatFunc::from_rational(crate::rational::rat(n))
    }

    /// The generator t of Q(t).
    pub fn t() -> Self {
        RatFunc::from_poly(Poly::var_poly(Var::T))
    }

    pub fn zero() -> Self {
        RatFunc::from_poly(Poly::zero(Var::T))
    }

    pub fn one() -> Self {
        RatFunc::from_poly(Poly::one(Var::T))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_monic() && self.num.is_constant() && self.den.is_one_poly()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        let den = self.den.mul(&o.den);
        RatFunc::new(num, den).expect("den nonzero")
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        let num = self.num.mul(&o.den).sub(&o.num.mul(&self.den));
        let den = self.den.mul(&o.den);
        RatFunc::new(num, den).expect("den nonzero")
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("den nonzero")
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc, ArithError> {
        if o.is_zero() {
            return Err(ArithError::ZeroDivision);
        }
        RatFunc::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn inv(&self) -> Result<RatFunc, ArithError> {
        RatFunc::one().div(self)
    }

    pub fn scale(&self, c: &Rational) -> RatFunc {
        RatFunc::new(self.num.scale(c), self.den.clone()).expect("den nonzero")
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        let mut acc = RatFunc::one();
        let mut base = self.clone();
        let mut e = e;
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

    /// Evaluate at t = a; `None` if a is a pole.
    pub fn eval(&self, a: &Rational) -> Option<Rational> {
        let d = self.den.eval(a);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(a) / d)
    }
}

trait IsOnePoly {
    fn is_one_poly(&self) -> bool;
}

impl IsOnePoly for Poly {
    fn is_one_poly(&self) -> bool {
        self.is_constant() && self.leading_coeff().is_one() && !self.is_zero()
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one_poly() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_frac};

    fn tp(coeffs: &[i64]) -> Poly {
        Poly::new(Var::T, coeffs.iter().map(|&c| rat(c)).collect())
    }

    #[test]
    fn normalize_cancels_common_factor() {
        // (2t^2 + 2t) / (2t) = t + 1
        let z = RatFunc::new(tp(&[0, 2, 2]), tp(&[0, 2])).unwrap();
        assert_eq!(z, RatFunc::from_poly(tp(&[1, 1])));
    }

    #[test]
    fn normalize_identity() {
        let z = RatFunc::new(tp(&[0, 1]), tp(&[0, 1])).unwrap();
        assert_eq!(z, RatFunc::one());
    }

    #[test]
    fn normalize_monic_denominator() {
        // 1 / (2t - 4) = (1/2) / (t - 2)
        let z = RatFunc::new(tp(&[1]), tp(&[-4, 2])).unwrap();
        assert_eq!(z.num().as_constant(), Some(rat_frac(1, 2)));
        assert_eq!(z.den(), &tp(&[-2, 1]));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(
            RatFunc::new(tp(&[1]), Poly::zero(Var::T)),
            Err(ArithError::ZeroDenominator)
        );
    }

    #[test]
    fn field_ops() {
        let t = RatFunc::t();
        let z = t.add(&RatFunc::one()).div(&t).unwrap(); // (t+1)/t
        assert_eq!(z.mul(&t), t.add(&RatFunc::one()));
        assert_eq!(z.sub(&z), RatFunc::zero());
    }
}
