//! Detection of pairs (alpha_i, alpha_j) lying on a periodic plane curve of
//! the classified forms y = zeta * f_i^n(x) / x = zeta^(-1) * f_j^n(y).

use crate::dynamics::{BaseField, UnicriticalMap};
use crate::heights;
use crate::rational::Rational;
use crate::ratfunc::RatFunc;
use num_traits::{One, Signed};
use std::collections::HashSet;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DisjointError {
    #[error("all maps must share the same q and have nonconstant c over Q(t)")]
    InvalidSystem,
    #[error("height computation failed: {0}")]
    Height(#[from] heights::HeightError),
    #[error(transparent)]
    Dynamics(#[from] crate::dynamics::DynError),
}

/// A list of (map, marked point) pairs sharing a common q.
#[derive(Clone, Debug)]
pub struct MapPointSystem {
    entries: Vec<(UnicriticalMap, RatFunc)>,
}

impl MapPointSystem {
    pub fn new(entries: Vec<(UnicriticalMap, RatFunc)>) -> Result<Self, DisjointError> {
        let q = entries.first().map(|(f, _)| f.q()).ok_or(DisjointError::InvalidSystem)?;
        for (f, _) in &entries {
            if f.q() != q || f.base() != BaseField::Qt || f.c().is_constant() {
                return Err(DisjointError::InvalidSystem);
            }
        }
        Ok(MapPointSystem { entries })
    }

    pub fn entries(&self) -> &[(UnicriticalMap, RatFunc)] {
        &self.entries
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Forward,
    Backward,
}

/// Indices are 0-based positions in the system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicCurveWitness {
    pub i: usize,
    pub j: usize,
    pub zeta: Rational,
    pub n: u32,
    pub orientation: Orientation,
}

/// Some(zeta) iff c_j / c_i is a constant zeta in Q with zeta^(q-1) = 1;
/// over Q that means zeta = 1, or zeta = -1 when q is odd.
pub fn root_of_unity_ratio(ci: &RatFunc, cj: &RatFunc, q: u32) -> Option<Rational> {
    assert!(!ci.is_zero() && !cj.is_zero());
    let zeta = cj.div(ci).ok()?.as_constant()?;
    let ok = if zeta.is_one() {
        true
    } else if zeta == -Rational::one() {
        (q - 1) % 2 == 0
    } else {
        false
    };
    if ok {
        Some(zeta)
    } else {
        None
    }
}

/// Least n with target = f^n(start), pinned by the exact canonical-height
/// ratio (a power of q) or, for height-zero points, by enumerating the
/// finite orbit.
fn orbit_exponent(
    f: &UnicriticalMap,
    start: &RatFunc,
    target: &RatFunc,
) -> Result<Option<u32>, DisjointError> {
    let h_start = heights::canonical_height_fn(f, start)?;
    let h_target = heights::canonical_height_fn(f, target)?;
    if h_start.is_positive() {
        // need h_target = q^n * h_start exactly
        let mut expected = h_start;
        let q = Rational::from_integer(f.q().into());
        for n in 0..=crate::DEFAULT_MAX_ITER {
            if expected == h_target {
                return Ok(if f.orbit(start, n)?.last().unwrap() == target {
                    Some(n)
                } else {
                    None
                });
            }
            if expected > h_target {
                return Ok(None);
            }
            expected *= &q;
        }
        return Ok(None);
    }
    if h_target.is_positive() {
        return Ok(None);
    }
    // both preperiodic: walk the finite orbit until it closes
    let mut seen: HashSet<RatFunc> = HashSet::new();
    let mut w = start.clone();
    let mut n = 0u32;
    while seen.insert(w.clone()) {
        if &w == target {
            return Ok(Some(n));
        }
        w = f.evaluate(&w);
        n += 1;
    }
    Ok(None)
}

/// Witness that (alpha_i, alpha_j) lies on a periodic curve for the pair
/// (f_i, f_j), if one exists.
pub fn periodic_curve_witness(
    fi: &UnicriticalMap,
    alpha_i: &RatFunc,
    fj: &UnicriticalMap,
    alpha_j: &RatFunc,
) -> Result<Option<(Rational, u32, Orientation)>, DisjointError> {
    assert_eq!(fi.q(), fj.q());
    let zeta = match root_of_unity_ratio(fi.c(), fj.c(), fi.q()) {
        Some(z) => z,
        None => return Ok(None),
    };
    // forward curve: alpha_j = zeta * f_i^n(alpha_i)
    let target_fwd = alpha_j.scale(&(Rational::one() / &zeta));
    if let Some(n) = orbit_exponent(fi, alpha_i, &target_fwd)? {
        return Ok(Some((zeta, n, Orientation::Forward)));
    }
    // backward curve: alpha_i = zeta^(-1) * f_j^n(alpha_j)
    let target_bwd = alpha_i.scale(&zeta);
    if let Some(n) = orbit_exponent(fj, alpha_j, &target_bwd)? {
        return Ok(Some((zeta, n, Orientation::Backward)));
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DisjointnessVerdict {
    Ok,
    Violation(PeriodicCurveWitness),
}

/// Check every ordered pair of the system; the first violation in
/// lexicographic pair order wins.
pub fn disjointness_hypothesis(
    system: &MapPointSystem,
) -> Result<DisjointnessVerdict, DisjointError> {
    let entries = system.entries();
    for i in 0..entries.len() {
        for j in 0..entries.len() {
            if i == j {
                continue;
            }
            let (fi, ai) = &entries[i];
            let (fj, aj) = &entries[j];
            if let Some((zeta, n, orientation)) = periodic_curve_witness(fi, ai, fj, aj)? {
                return Ok(DisjointnessVerdict::Violation(PeriodicCurveWitness {
                    i,
                    j,
                    zeta,
                    n,
                    orientation,
                }));
            }
        }
    }
    Ok(DisjointnessVerdict::Ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn t() -> RatFunc {
        RatFunc::t()
    }

    fn map_t() -> UnicriticalMap {
        UnicriticalMap::over_qt(2, t()).unwrap()
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(root_of_unity_ratio(&t(), &t(), 2), Some(rat(1)));
        assert_eq!(root_of_unity_ratio(&t(), &t().neg(), 3), Some(rat(-1)));
        assert_eq!(root_of_unity_ratio(&t(), &t().neg(), 2), None);
        assert_eq!(
            root_of_unity_ratio(&t(), &t().add(&RatFunc::one()), 2),
            None
        );
    }

    #[test]
    fn witness_found_forward() {
        let f = map_t();
        let w = periodic_curve_witness(&f, &RatFunc::one(), &f, &t().add(&RatFunc::one()))
            .unwrap();
        assert_eq!(w, Some((rat(1), 1, Orientation::Forward)));
    }

    #[test]
    fn diagonal_witness() {
        let f = map_t();
        let w = periodic_curve_witness(&f, &RatFunc::one(), &f, &RatFunc::one()).unwrap();
        assert_eq!(w, Some((rat(1), 0, Orientation::Forward)));
    }

    #[test]
    fn no_witness() {
        let f = map_t();
        let w = periodic_curve_witness(&f, &RatFunc::zero(), &f, &RatFunc::one()).unwrap();
        assert_eq!(w, None);
    }

    #[test]
    fn system_verdicts() {
        let f = map_t();
        let violating = MapPointSystem::new(vec![
            (f.clone(), RatFunc::one()),
            (f.clone(), t().add(&RatFunc::one())),
        ])
        .unwrap();
        match disjointness_hypothesis(&violating).unwrap() {
            DisjointnessVerdict::Violation(w) => {
                assert_eq!((w.i, w.j, w.zeta, w.n, w.orientation),
                    (0, 1, rat(1), 1, Orientation::Forward));
            }
            other => panic!("expected violation, got {other:?}"),
        }
        let ok = MapPointSystem::new(vec![
            (f.clone(), RatFunc::zero()),
            (f.clone(), RatFunc::one()),
        ])
        .unwrap();
        assert_eq!(
            disjointness_hypothesis(&ok).unwrap(),
            DisjointnessVerdict::Ok
        );
        let mixed = MapPointSystem::new(vec![
            (f, RatFunc::zero()),
            (UnicriticalMap::over_qt(3, t()).unwrap(), RatFunc::zero()),
        ]);
        assert!(mixed.is_err());
    }
}
