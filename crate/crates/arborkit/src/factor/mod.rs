//! Irreducible factorization over Q and over the rational function field Q(t).

mod bivariate;
mod univariate;
mod zp;

pub use univariate::squarefree_decomposition;

use crate::poly::Poly;
use crate::polyx::PolyX;
use crate::rational::Rational;
use crate::ratfunc::RatFunc;
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("cannot factor the zero polynomial")]
    ZeroPolynomial,
    #[error("x-degree {degree} exceeds the configured bound {bound}")]
    DegreeBoundExceeded { degree: usize, bound: usize },
}

/// Factorization of a univariate polynomial over Q:
/// content * prod factor^multiplicity reconstructs the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationQ {
    pub content: Rational,
    pub factors: Vec<(Poly, u32)>,
}

impl FactorizationQ {
    pub fn product(&self) -> Poly {
        let var = self
            .factors
            .first()
            .map(|(f, _)| f.var())
            .unwrap_or(crate::poly::Var::X);
        self.factors
            .iter()
            .fold(Poly::constant(var, self.content.clone()), |acc, (f, m)| {
                acc.mul(&f.pow(*m))
            })
    }

    /// Number of distinct irreducible factors.
    pub fn count(&self) -> usize {
        self.factors.len()
    }
}

/// Factorization over Q(t) of a polynomial in x.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationFt {
    pub content: RatFunc,
    pub factors: Vec<(PolyX, u32)>,
}

impl FactorizationFt {
    pub fn product(&self) -> PolyX {
        self.factors
            .iter()
            .fold(PolyX::constant(self.content.clone()), |acc, (f, m)| {
                acc.mul(&f.pow(*m))
            })
    }

    pub fn count(&self) -> usize {
        self.factors.len()
    }
}

fn cmp_poly(a: &Poly, b: &Poly) -> Ordering {
    a.coeffs()
        .len()
        .cmp(&b.coeffs().len())
        .then_with(|| a.coeffs().cmp(b.coeffs()))
}

pub(crate) fn cmp_polyx(a: &PolyX, b: &PolyX) -> Ordering {
    a.coeffs().len().cmp(&b.coeffs().len()).then_with(|| {
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            let o = cmp_poly(x.num(), y.num()).then_with(|| cmp_poly(x.den(), y.den()));
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    })
}

/// Factor a nonzero polynomial over Q into monic irreducible factors with
/// multiplicities; the content is the leading coefficient.
pub fn factor_over_q(p: &Poly) -> Result<FactorizationQ, FactorError> {
    if p.is_zero() {
        return Err(FactorError::ZeroPolynomial);
    }
    let content = p.leading_coeff();
    let monic = p.monic();
    let mut factors: Vec<(Poly, u32)> = Vec::new();
    for (part, mult) in squarefree_decomposition(&monic) {
        for irr in univariate::factor_squarefree_monic_rational(&part) {
            factors.push((irr, mult));
        }
    }
    factors.sort_by(|(a, _), (b, _)| cmp_poly(a, b));
    Ok(FactorizationQ { content, factors })
}

/// Factor a nonzero polynomial in Q(t)[x] with the default x-degree bound.
pub fn factor_over_function_field(f: &PolyX) -> Result<FactorizationFt, FactorError> {
    factor_over_function_field_with_bound(f, crate::DEFAULT_MAX_DEGREE)
}

/// Factor a nonzero polynomial in Q(t)[x] into monic irreducible factors over
/// Q(t); the content is the leading coefficient.
pub fn factor_over_function_field_with_bound(
    f: &PolyX,
    bound: usize,
) -> Result<FactorizationFt, FactorError> {
    if f.is_zero() {
        return Err(FactorError::ZeroPolynomial);
    }
    let degree = f.degree().unwrap();
    if degree > bound {
        return Err(FactorError::DegreeBoundExceeded { degree, bound });
    }
    let content = f.leading_coeff();
    let monic = f.monic();
    let mut factors: Vec<(PolyX, u32)> = Vec::new();
    for (part, mult) in bivariate::squarefree_decomposition_ft(&monic) {
        for irr in bivariate::factor_squarefree_monic(&part) {
            factors.push((irr, mult));
        }
    }
    factors.sort_by(|(a, _), (b, _)| cmp_polyx(a, b));
    Ok(FactorizationFt { content, factors })
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
    fn difference_of_squares() {
        let f = xp(&[-1, 0, 1]);
        let fac = factor_over_q(&f).unwrap();
        assert_eq!(fac.content, rat(1));
        assert_eq!(fac.factors, vec![(xp(&[-1, 1]), 1), (xp(&[1, 1]), 1)]);
    }

    #[test]
    fn quartic_with_square_factor() {
        // x^4 - 2x^2 = x^2 (x^2 - 2)
        let f = xp(&[0, 0, -2, 0, 1]);
        let fac = factor_over_q(&f).unwrap();
        assert_eq!(fac.content, rat(1));
        assert_eq!(fac.factors, vec![(xp(&[0, 1]), 2), (xp(&[-2, 0, 1]), 1)]);
        assert_eq!(fac.product(), f);
    }

    #[test]
    fn irreducible_x4_plus_1() {
        let f = xp(&[1, 0, 0, 0, 1]);
        let fac = factor_over_q(&f).unwrap();
        assert_eq!(fac.factors, vec![(f, 1)]);
    }

    #[test]
    fn zero_rejected() {
        assert_eq!(
            factor_over_q(&Poly::zero(Var::X)),
            Err(FactorError::ZeroPolynomial)
        );
    }

    #[test]
    fn degree_bound_enforced() {
        let f = PolyX::x().pow(65).add(&PolyX::one());
        assert_eq!(
            factor_over_function_field(&f),
            Err(FactorError::DegreeBoundExceeded {
                degree: 65,
                bound: 64
            })
        );
    }
}
