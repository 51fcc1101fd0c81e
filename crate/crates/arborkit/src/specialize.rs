//! Specialization t -> a of maps and points, canonical-height convergence
//! experiments, the height-window filter, and orbit-hit searches.

use crate::dynamics::{BaseField, DynError, UnicriticalMap};
use crate::factor;
use crate::heights::{self, HeightError};
use crate::rational::{height_log, Rational};
use crate::ratfunc::RatFunc;
use num_traits::Zero;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PoleSource {
    C,
    Beta,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SpecializeError {
    #[error("specialization point is a pole of {0:?}")]
    PoleAtSpecialization(PoleSource),
    #[error("c is constant: the family is isotrivial")]
    IsotrivialInput,
    #[error("target beta2 must be nonconstant")]
    ConstantTarget,
    #[error(transparent)]
    Dynamics(#[from] DynError),
    #[error(transparent)]
    Height(#[from] HeightError),
}

/// A member of the family at t = a.
#[derive(Clone, Debug)]
pub struct SpecializedInstance {
    pub map: UnicriticalMap,
    pub beta: Rational,
    pub a: Rational,
    /// weil_height_rat(a)
    pub h_a: f64,
}

/// Evaluate the family (f, beta) at t = a.
pub fn specialize(
    f: &UnicriticalMap,
    beta: &RatFunc,
    a: &Rational,
) -> Result<SpecializedInstance, SpecializeError> {
    assert_eq!(f.base(), BaseField::Qt);
    let c_a = f
        .c()
        .eval(a)
        .ok_or(SpecializeError::PoleAtSpecialization(PoleSource::C))?;
    let beta_a = beta
        .eval(a)
        .ok_or(SpecializeError::PoleAtSpecialization(PoleSource::Beta))?;
    let map = UnicriticalMap::over_q(f.q(), c_a).expect("q already validated");
    Ok(SpecializedInstance {
        map,
        beta: beta_a.clone(),
        a: a.clone(),
        h_a: height_log(a),
    })
}

#[derive(Clone, Debug)]
pub struct ConvergenceRow {
    pub a: Rational,
    pub h_a: f64,
    /// Numeric canonical height of beta(a) under the specialized map.
    pub hhat: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// Exact function-field limit of the ratios.
    pub limit: Rational,
}

pub const DEFAULT_EPS: f64 = 1e-4;

/// Per-point ratios h^(beta(a))/h(a) alongside the exact function-field
/// limit, at numeric precision eps = 1e-4.
pub fn convergence_experiment(
    f: &UnicriticalMap,
    beta: &RatFunc,
    points: &[Rational],
) -> Result<ConvergenceReport, SpecializeError> {
    if f.c().is_constant() {
        return Err(SpecializeError::IsotrivialInput);
    }
    let limit = heights::canonical_height_fn(f, beta)?;
    let mut rows = Vec::with_capacity(points.len());
    for a in points {
        let inst = specialize(f, beta, a)?;
        let hhat = heights::canonical_height_num(&inst.map, &inst.beta, DEFAULT_EPS)?;
        rows.push(ConvergenceRow {
            a: a.clone(),
            h_a: inst.h_a,
            hhat,
            ratio: hhat / inst.h_a,
        });
    }
    Ok(ConvergenceReport { rows, limit })
}

/// Keep exactly the heights h with |h - C8 q^n| > C9 for every n >= 0.
pub fn height_window_filter(candidates: &[f64], c8: f64, c9: f64, q: u32) -> Vec<f64> {
    assert!(c8 > 0.0 && c9 >= 0.0);
    let q = q as f64;
    candidates
        .iter()
        .copied()
        .filter(|&h| {
            let mut center = c8;
            while center - c9 <= h {
                if (h - center).abs() <= c9 {
                    return false;
                }
                center *= q;
            }
            true
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitHit {
    pub n: u32,
    pub gamma: Rational,
    /// weil_height_rat(gamma)
    pub height: f64,
}

#[derive(Clone, Debug)]
pub struct OrbitHitsReport {
    pub hits: Vec<OrbitHit>,
    /// Median of h(gamma)/q^n over the hits: the empirical window constant.
    pub c8_estimate: Option<f64>,
}

/// For each step n = 0..=N, solve beta2(gamma) = f^(n+1)(beta1) exactly over
/// Q and record the rational solutions with their heights.
pub fn find_orbit_hits(
    f: &UnicriticalMap,
    beta1: &Rational,
    beta2: &RatFunc,
    n_max: u32,
) -> Result<OrbitHitsReport, SpecializeError> {
    assert_eq!(f.base(), BaseField::Q);
    assert!(n_max <= 12, "N must be at most 12");
    if beta2.is_constant() {
        return Err(SpecializeError::ConstantTarget);
    }
    let mut hits = Vec::new();
    let mut w = beta1.clone();
    for n in 0..=n_max {
        w = f.evaluate_rat(&w);
        crate::dynamics::check_size_rat(&w)?;
        // rational roots of the numerator of beta2(t) - w
        let diff = beta2.sub(&RatFunc::from_rational(w.clone()));
        if diff.is_zero() {
            continue;
        }
        let fac = factor::factor_over_q(diff.num()).expect("nonzero");
        for (p, _) in fac.factors {
            if p.degree() == Some(1) {
                let gamma = -p.coeff(0);
                if !beta2.den().eval(&gamma).is_zero() {
                    hits.push(OrbitHit {
                        n,
                        height: height_log(&gamma),
                        gamma,
                    });
                }
            }
        }
    }
    let mut ratios: Vec<f64> = hits
        .iter()
        .map(|h| h.height / (f.q() as f64).powi(h.n as i32))
        .collect();
    ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let c8_estimate = if ratios.is_empty() {
        None
    } else {
        let m = ratios.len();
        Some(if m % 2 == 1 {
            ratios[m / 2]
        } else {
            (ratios[m / 2 - 1] + ratios[m / 2]) / 2.0
        })
    };
    Ok(OrbitHitsReport { hits, c8_estimate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use num_bigint::BigInt;

    fn t() -> RatFunc {
        RatFunc::t()
    }

    fn map_t() -> UnicriticalMap {
        UnicriticalMap::over_qt(2, t()).unwrap()
    }

    #[test]
    fn specialize_examples() {
        let inst = specialize(&map_t(), &RatFunc::zero(), &rat(3)).unwrap();
        assert_eq!(inst.map.c_rational(), Some(rat(3)));
        assert_eq!(inst.beta, rat(0));

        let f = UnicriticalMap::over_qt(2, t().inv().unwrap()).unwrap();
        assert_eq!(
            specialize(&f, &RatFunc::zero(), &rat(0)).unwrap_err(),
            SpecializeError::PoleAtSpecialization(PoleSource::C)
        );

        let beta = t()
            .add(&RatFunc::one())
            .div(&t().sub(&RatFunc::one()))
            .unwrap();
        assert_eq!(
            specialize(&map_t(), &beta, &rat(1)).unwrap_err(),
            SpecializeError::PoleAtSpecialization(PoleSource::Beta)
        );
    }

    #[test]
    fn convergence_to_half() {
        let points: Vec<Rational> = [10u32, 20, 30]
            .iter()
            .map(|&k| Rational::from_integer(BigInt::from(2u8).pow(k)))
            .collect();
        let report = convergence_experiment(&map_t(), &RatFunc::zero(), &points).unwrap();
        assert_eq!(report.limit, crate::rational::rat_frac(1, 2));
        let last = report.rows.last().unwrap();
        assert!((last.ratio - 0.5).abs() < 0.025, "ratio {}", last.ratio);
    }

    #[test]
    fn isotrivial_rejected() {
        let f = UnicriticalMap::over_qt(2, RatFunc::from_int(5)).unwrap();
        assert_eq!(
            convergence_experiment(&f, &RatFunc::zero(), &[]).unwrap_err(),
            SpecializeError::IsotrivialInput
        );
    }

    #[test]
    fn window_filter_examples() {
        assert_eq!(height_window_filter(&[2.0, 3.0, 4.0], 1.0, 0.1, 2), vec![3.0]);
        assert_eq!(height_window_filter(&[2.0, 3.0], 1.0, 0.0, 2), vec![3.0]);
        assert!(height_window_filter(&[], 1.0, 0.1, 2).is_empty());
    }

    #[test]
    fn orbit_hits_linear_target() {
        let f = UnicriticalMap::over_q(2, rat(1)).unwrap();
        let report = find_orbit_hits(&f, &rat(0), &t(), 4).unwrap();
        let gammas: Vec<Rational> = report.hits.iter().map(|h| h.gamma.clone()).collect();
        assert_eq!(gammas, vec![rat(1), rat(2), rat(5), rat(26), rat(677)]);
        assert_eq!(
            report.hits.iter().map(|h| h.n).collect::<Vec<_>>(),
            vec![0, 1, 2, 3, 4]
        );
    }

    #[test]
    fn orbit_hits_square_target() {
        let f = UnicriticalMap::over_q(2, rat(1)).unwrap();
        let report = find_orbit_hits(&f, &rat(0), &t().pow(2), 2).unwrap();
        let gammas: Vec<Rational> = report.hits.iter().map(|h| h.gamma.clone()).collect();
        assert_eq!(gammas, vec![rat(1), rat(-1)]);
        assert!(report.hits.iter().all(|h| h.n == 0));
    }

    #[test]
    fn constant_target_rejected() {
        let f = UnicriticalMap::over_q(2, rat(1)).unwrap();
        assert_eq!(
            find_orbit_hits(&f, &rat(0), &RatFunc::from_int(7), 2).unwrap_err(),
            SpecializeError::ConstantTarget
        );
    }
}
