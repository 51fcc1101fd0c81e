//! Weil and Call-Silverman canonical heights: exact over Q(t), numeric with
//! a certified error budget over Q.

use crate::dynamics::UnicriticalMap;
use crate::places::{self, Place};
use crate::rational::{height_log, Rational};
use crate::ratfunc::RatFunc;
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum HeightError {
    #[error("no place stabilized within the iteration cap")]
    NotStabilized,
    #[error("intermediate values exceeded the size budget")]
    IterateOverflow,
}

/// Weil height of z in Q(t), in integer units: max(deg num, deg den).
pub fn weil_height_fn(z: &RatFunc) -> u64 {
    z.num().deg_or_zero().max(z.den().deg_or_zero()) as u64
}

/// Weil height of a rational number, in natural-log units.
pub fn weil_height_rat(z: &Rational) -> f64 {
    height_log(z)
}

/// True iff f is isotrivial, i.e. c is a constant rational function.
pub fn is_isotrivial(f: &UnicriticalMap) -> bool {
    f.c().is_constant()
}

const SIZE_BUDGET_DEG: u64 = 1 << 14;

/// Exact canonical height of z relative to f = x^q + c over Q(t), in integer
/// units. Computed place by place: once a pole order strictly exceeds
/// max(0, -v(c))/(q - 1), valuations multiply exactly by q thereafter, so the
/// local limit is attained at a finite step.
pub fn canonical_height_fn(f: &UnicriticalMap, z: &RatFunc) -> Result<Rational, HeightError> {
    let q = f.q() as i64;
    let c = f.c();
    // only places where z or c has a pole can ever contribute
    let mut candidates: Vec<Place> = Vec::new();
    let push_poles = |w: &RatFunc, candidates: &mut Vec<Place>| {
        if w.is_zero() {
            return;
        }
        for (v, val) in places::places_of(w).expect("nonzero") {
            if val < 0 && !candidates.contains(&v) {
                candidates.push(v);
            }
        }
    };
    push_poles(z, &mut candidates);
    push_poles(c, &mut candidates);

    struct Pending {
        place: Place,
        bound: Rational, // max(0, -v(c))/(q - 1)
        c_val_nonneg: bool,
    }
    let mut pending: Vec<Pending> = candidates
        .into_iter()
        .map(|v| {
            let vc = if c.is_zero() {
                0
            } else {
                places::valuation(c, &v).expect("nonzero")
            };
            Pending {
                place: v,
                bound: Rational::new(BigInt::from((-vc).max(0)), BigInt::from(q - 1)),
                c_val_nonneg: vc >= 0,
            }
        })
        .collect();

    let mut total = Rational::zero();
    let mut w = z.clone();
    let mut seen: HashMap<RatFunc, u32> = HashMap::new();
    let mut qpow = Rational::from_integer(BigInt::from(1));
    let qrat = Rational::from_integer(BigInt::from(q));
    let mut m = 0u32;
    while !pending.is_empty() {
        if m > crate::DEFAULT_MAX_ITER {
            return Err(HeightError::NotStabilized);
        }
        if weil_height_fn(&w) > SIZE_BUDGET_DEG {
            return Err(HeightError::IterateOverflow);
        }
        if let Some(_) = seen.get(&w) {
            // preperiodic orbit: every remaining local limit is 0
            break;
        }
        seen.insert(w.clone(), m);
        pending.retain(|p| {
            if w.is_zero() {
                // v(0) = +infinity: resolves to 0 when c is integral at v
                return !p.c_val_nonneg;
            }
            let val = places::valuation(&w, &p.place).expect("nonzero");
            let neg = Rational::from_integer(BigInt::from(-val));
            if neg > p.bound {
                // strict escape: local limit is -v(w_m)/q^m exactly
                total += neg / &qpow * Rational::from_integer(BigInt::from(p.place.degree() as i64));
                return false;
            }
            if val >= 0 && p.c_val_nonneg {
                return false; // stays integral forever
            }
            true
        });
        if pending.is_empty() {
            break;
        }
        w = f.evaluate(&w);
        qpow *= &qrat;
        m += 1;
    }
    Ok(total)
}

/// Canonical height of z relative to f = x^q + c over Q, within ε, in
/// natural-log units. Uses h(f^N(z))/q^N with N chosen from the bound
/// |h(f(w)) - q h(w)| <= C_f = log 2 + h(c).
pub fn canonical_height_num(
    f: &UnicriticalMap,
    z: &Rational,
    eps: f64,
) -> Result<f64, HeightError> {
    assert!(eps > 0.0, "eps must be positive");
    let q = f.q() as f64;
    let c = f.c_rational().expect("base Q map");
    let c_f = std::f64::consts::LN_2 + height_log(&c);
    // need C_f / ((q - 1) q^N) < eps
    let mut n = 0u32;
    let mut qn = 1.0f64;
    while c_f / ((q - 1.0) * qn) >= eps {
        n += 1;
        qn *= q;
    }
    let mut w = z.clone();
    let mut qm = 1.0f64;
    for m in 0..n {
        // escape acceleration for integer orbits: once |w|^q dominates 2|c|,
        // the tail of the limit is below the remaining budget and
        // log|w|/q^m is already within eps
        if w.is_integer() && c.is_integer() && m > 0 {
            let hw = height_log(&w);
            let log_tail = (2.0 * c.numer().magnitude().bits() as f64 * std::f64::consts::LN_2)
                - q * hw;
            if hw > std::f64::consts::LN_2 && log_tail < (eps * (q - 1.0) * qm).ln() {
                return Ok(hw / qm);
            }
        }
        crate::dynamics::check_size_rat(&w).map_err(|_| HeightError::IterateOverflow)?;
        w = f.evaluate_rat(&w);
        qm *= q;
    }
    crate::dynamics::check_size_rat(&w).map_err(|_| HeightError::IterateOverflow)?;
    Ok(height_log(&w) / qn)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Poly, Var};
    use crate::rational::{rat, rat_frac};

    fn t() -> RatFunc {
        RatFunc::t()
    }

    fn tp(coeffs: &[i64]) -> RatFunc {
        RatFunc::from_poly(Poly::new(Var::T, coeffs.iter().map(|&c| rat(c)).collect()))
    }

    #[test]
    fn weil_height_fn_examples() {
        assert_eq!(weil_height_fn(&t()), 1);
        assert_eq!(weil_height_fn(&RatFunc::from_int(5)), 0);
        let z = tp(&[1, 0, 1]).div(&t()).unwrap();
        assert_eq!(weil_height_fn(&z), 2);
    }

    #[test]
    fn weil_height_rat_examples() {
        assert!((weil_height_rat(&rat(2)) - 2.0f64.ln()).abs() < 1e-12);
        assert_eq!(weil_height_rat(&rat(1)), 0.0);
        assert!((weil_height_rat(&rat_frac(3, 5)) - 5.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn canonical_height_fn_examples() {
        let f = UnicriticalMap::over_qt(2, t()).unwrap();
        assert_eq!(
            canonical_height_fn(&f, &RatFunc::zero()),
            Ok(rat_frac(1, 2))
        );
        assert_eq!(canonical_height_fn(&f, &t()), Ok(rat(1)));
        let g = UnicriticalMap::over_qt(2, t().sub(&t().pow(2))).unwrap();
        assert_eq!(canonical_height_fn(&g, &t()), Ok(rat(0)));
    }

    #[test]
    fn canonical_height_functorial() {
        let f = UnicriticalMap::over_qt(2, t()).unwrap();
        let z = t().add(&RatFunc::one());
        let h = canonical_height_fn(&f, &z).unwrap();
        let hf = canonical_height_fn(&f, &f.evaluate(&z)).unwrap();
        assert_eq!(hf, h * rat(2));
    }

    #[test]
    fn canonical_height_num_examples() {
        let f = UnicriticalMap::over_q(2, rat(0)).unwrap();
        let h = canonical_height_num(&f, &rat(2), 1e-6).unwrap();
        assert!((h - 2.0f64.ln()).abs() < 1e-6);

        let g = UnicriticalMap::over_q(2, rat(-1)).unwrap();
        let h = canonical_height_num(&g, &rat(-1), 1e-6).unwrap();
        assert!(h.abs() < 1e-6);
    }

    #[test]
    fn isotriviality() {
        let f = UnicriticalMap::over_qt(2, RatFunc::from_int(5)).unwrap();
        assert!(is_isotrivial(&f));
        let g = UnicriticalMap::over_qt(2, t()).unwrap();
        assert!(!is_isotrivial(&g));
        let z = tp(&[1, 0, 1]).div(&t().pow(2)).unwrap();
        let h = UnicriticalMap::over_qt(2, z).unwrap();
        assert!(!is_isotrivial(&h));
    }
}
