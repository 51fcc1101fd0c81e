//! Places and valuations of Q(t), Newton polygons at a place, and
//! Eisenstein-type irreducibility certificates.
//!
//! A place is either a monic irreducible polynomial in t or the place at
//! infinity. Valuations are exact integers: a simple zero counts 1.

use crate::factor::factor_over_q;
use crate::poly::{Poly, Var};
use crate::polyx::PolyX;
use crate::rational::Rational;
use crate::ratfunc::RatFunc;
use num_traits::Signed;
use std::fmt;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PlaceError {
    #[error("valuation of zero is undefined")]
    ZeroInput,
    #[error("constant or leading coefficient vanishes; shift or deflate first")]
    ZeroCoefficientEnds,
    #[error("defining polynomial of a finite place must be monic irreducible")]
    NotIrreducible,
}

/// A place of Q(t): a monic irreducible polynomial in t, or infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    Finite(Poly),
    Infinity,
}

impl Place {
    /// Finite place defined by a monic irreducible polynomial in t.
    pub fn finite(p: Poly) -> Result<Place, PlaceError> {
        assert_eq!(p.var(), Var::T);
        if !p.is_monic() || p.degree().map_or(true, |d| d == 0) {
            return Err(PlaceError::NotIrreducible);
        }
        let fac = factor_over_q(&p).expect("nonzero");
        if fac.factors.len() != 1 || fac.factors[0].1 != 1 {
            return Err(PlaceError::NotIrreducible);
        }
        Ok(Place::Finite(p))
    }

    /// Internal constructor for polynomials already known irreducible.
    pub(crate) fn finite_unchecked(p: Poly) -> Place {
        Place::Finite(p)
    }

    pub fn infinity() -> Place {
        Place::Infinity
    }

    /// Degree of the residue field over Q.
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.degree().expect("irreducible is nonzero"),
            Place::Infinity => 1,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "({p})"),
            Place::Infinity => write!(f, "infinity"),
        }
    }
}

fn multiplicity(p: &Poly, pi: &Poly) -> i64 {
    let mut m = 0;
    let mut cur = p.clone();
    loop {
        match cur.div_rem(pi) {
            Ok((q, r)) if r.is_zero() && !q.is_zero() => {
                m += 1;
                cur = q;
            }
            _ => return m,
        }
    }
}

/// Exponential valuation of a nonzero rational function at a place.
pub fn valuation(z: &RatFunc, v: &Place) -> Result<i64, PlaceError> {
    if z.is_zero() {
        return Err(PlaceError::ZeroInput);
    }
    Ok(match v {
        Place::Finite(pi) => multiplicity(z.num(), pi) - multiplicity(z.den(), pi),
        Place::Infinity => z.den().deg_or_zero() as i64 - z.num().deg_or_zero() as i64,
    })
}

/// All places where z has nonzero valuation, with their valuations.
/// Finite places come sorted (degree, then coefficients); infinity last.
pub fn places_of(z: &RatFunc) -> Result<Vec<(Place, i64)>, PlaceError> {
    if z.is_zero() {
        return Err(PlaceError::ZeroInput);
    }
    let mut out: Vec<(Place, i64)> = Vec::new();
    let num_fac = factor_over_q(z.num()).expect("nonzero");
    for (pi, m) in num_fac.factors {
        out.push((Place::finite_unchecked(pi), m as i64));
    }
    let den_fac = factor_over_q(z.den()).expect("nonzero");
    for (pi, m) in den_fac.factors {
        out.push((Place::finite_unchecked(pi), -(m as i64)));
    }
    out.sort_by(|(a, _), (b, _)| match (a, b) {
        (Place::Finite(p), Place::Finite(q)) => p
            .coeffs()
            .len()
            .cmp(&q.coeffs().len())
            .then_with(|| p.coeffs().cmp(q.coeffs())),
        _ => std::cmp::Ordering::Equal,
    });
    let vinf = valuation(z, &Place::Infinity)?;
    if vinf != 0 {
        out.push((Place::Infinity, vinf));
    }
    Ok(out)
}

/// Degree-weighted sum of valuations over all places. Always 0 for nonzero z.
pub fn product_formula_check(z: &RatFunc) -> Result<i64, PlaceError> {
    Ok(places_of(z)?
        .iter()
        .map(|(v, val)| v.degree() as i64 * val)
        .sum())
}

/// Newton polygon of a polynomial in x at a place: the lower convex hull of
/// the points (i, v(a_i)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    /// (slope, horizontal length) with slopes strictly increasing.
    pub segments: Vec<(Rational, usize)>,
}

pub fn newton_polygon(f: &PolyX, v: &Place) -> Result<NewtonPolygon, PlaceError> {
    if f.is_zero() {
        return Err(PlaceError::ZeroInput);
    }
    let n = f.degree().unwrap();
    if f.coeff(0).is_zero() || f.coeff(n).is_zero() {
        return Err(PlaceError::ZeroCoefficientEnds);
    }
    let points: Vec<(i64, i64)> = (0..=n)
        .filter(|&i| !f.coeff(i).is_zero())
        .map(|i| Ok((i as i64, valuation(&f.coeff(i), v)?)))
        .collect::<Result<_, PlaceError>>()?;
    // monotone-chain lower hull; collinear points are dropped, merging slopes
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for p in points {
        while hull.len() >= 2 {
            let o = hull[hull.len() - 2];
            let a = hull[hull.len() - 1];
            let cross = (a.0 - o.0) * (p.1 - o.1) - (a.1 - o.1) * (p.0 - o.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let segments = hull
        .windows(2)
        .map(|w| {
            let dx = w[1].0 - w[0].0;
            let dy = w[1].1 - w[0].1;
            (Rational::new(dy.into(), dx.into()), dx as usize)
        })
        .collect();
    Ok(NewtonPolygon { segments })
}

/// True iff the Newton polygon at v is a single segment whose slope, in
/// lowest terms, has denominator equal to deg_x(F). True implies F is
/// irreducible over Q(t).
pub fn eisenstein_certificate(f: &PolyX, v: &Place) -> Result<bool, PlaceError> {
    let np = newton_polygon(f, v)?;
    if np.segments.len() != 1 {
        return Ok(false);
    }
    let n = f.degree().unwrap();
    Ok(np.segments[0].0.denom().abs() == num_bigint::BigInt::from(n))
}

/// True iff z = w^q for some w in Q(t).
pub fn is_qth_power(z: &RatFunc, q: u32) -> Result<bool, PlaceError> {
    assert!(q >= 1);
    if z.is_zero() {
        return Err(PlaceError::ZeroInput);
    }
    for (_, val) in places_of(z)? {
        if val.rem_euclid(q as i64) != 0 {
            return Ok(false);
        }
    }
    // leading rational constant: num is lc * monic, den already monic
    let lead = z.num().leading_coeff();
    Ok(crate::rational::is_qth_power_rational(&lead, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_frac};

    fn tp(coeffs: &[i64]) -> Poly {
        Poly::new(Var::T, coeffs.iter().map(|&c| rat(c)).collect())
    }

    fn place_t() -> Place {
        Place::finite(tp(&[0, 1])).unwrap()
    }

    #[test]
    fn valuation_examples() {
        // z = t^2/(t+1)
        let z = RatFunc::new(tp(&[0, 0, 1]), tp(&[1, 1])).unwrap();
        assert_eq!(valuation(&z, &place_t()), Ok(2));
        assert_eq!(
            valuation(&z, &Place::finite(tp(&[1, 1])).unwrap()),
            Ok(-1)
        );
        assert_eq!(valuation(&RatFunc::t(), &Place::Infinity), Ok(-1));
        assert_eq!(valuation(&z, &Place::Infinity), Ok(-1));
    }

    #[test]
    fn product_formula_examples() {
        assert_eq!(product_formula_check(&RatFunc::t()), Ok(0));
        let z = RatFunc::new(tp(&[1, 0, 1]), tp(&[0, 1])).unwrap();
        assert_eq!(product_formula_check(&z), Ok(0));
        assert_eq!(product_formula_check(&RatFunc::from_int(7)), Ok(0));
    }

    #[test]
    fn reducible_place_rejected() {
        assert_eq!(Place::finite(tp(&[-1, 0, 1])), Err(PlaceError::NotIrreducible));
        assert!(Place::finite(tp(&[1, 0, 1])).is_ok());
    }

    #[test]
    fn newton_polygon_examples() {
        let t = RatFunc::t();
        // x^2 + t
        let f = PolyX::new(vec![t.clone(), RatFunc::zero(), RatFunc::one()]);
        let np = newton_polygon(&f, &place_t()).unwrap();
        assert_eq!(np.segments, vec![(rat_frac(-1, 2), 2)]);
        assert_eq!(eisenstein_certificate(&f, &place_t()), Ok(true));

        // x^4 + 2t x^2 + t^2 + t
        let g = PolyX::new(vec![
            t.pow(2).add(&t),
            RatFunc::zero(),
            t.scale(&rat(2)),
            RatFunc::zero(),
            RatFunc::one(),
        ]);
        let np = newton_polygon(&g, &place_t()).unwrap();
        assert_eq!(np.segments, vec![(rat_frac(-1, 4), 4)]);
        assert_eq!(eisenstein_certificate(&g, &place_t()), Ok(true));

        // x^2 - t^2
        let h = PolyX::new(vec![t.pow(2).neg(), RatFunc::zero(), RatFunc::one()]);
        let np = newton_polygon(&h, &place_t()).unwrap();
        assert_eq!(np.segments, vec![(rat(-1), 2)]);
        assert_eq!(eisenstein_certificate(&h, &place_t()), Ok(false));
    }

    #[test]
    fn qth_power_examples() {
        // t^2 (t+1)^2
        let z = RatFunc::from_poly(tp(&[0, 0, 1]).mul(&tp(&[1, 1]).pow(2)));
        assert_eq!(is_qth_power(&z, 2), Ok(true));
        let w = RatFunc::from_poly(tp(&[0, 1]).mul(&tp(&[1, 1])));
        assert_eq!(is_qth_power(&w, 2), Ok(false));
        // 8t^3 = (2t)^3
        let u = RatFunc::from_poly(tp(&[0, 0, 0, 8]));
        assert_eq!(is_qth_power(&u, 3), Ok(true));
        assert_eq!(is_qth_power(&u, 2), Ok(false));
    }
}
