//! Kummer-layer maximality certificates, the level-2 rank oracle for q = 2,
//! eventual-stability verdicts, layer-rank profiles with index bounds, and
//! the assembled dichotomy report.

use crate::dynamics::{self, BaseField, DynError, OrbitStatus, OrbitVerdict, UnicriticalMap};
use crate::factor::{self, FactorError};
use crate::places::{self, Place};
use crate::poly::{Poly, Var};
use crate::polyx::PolyX;
use crate::ratfunc::RatFunc;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GaloisError {
    #[error("f^n(0) = beta: the basepoint is postcritical at this level")]
    PostcriticalDegenerate,
    #[error("beta = c: the level-1 Kummer generator degenerates")]
    DegenerateBeta,
    #[error("beta is periodic under f")]
    PeriodicBasepoint,
    #[error("rank oracle requires q = 2")]
    OracleRequiresQ2,
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Dynamics(#[from] DynError),
}

/// One recorded freshness check of a layer certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreshnessCheck {
    pub check: String,
    pub ok: bool,
}

/// Witness that the level-n Kummer layer is maximal: a finite place with
/// v(f^n(0) - beta) not divisible by p, fresh at all lower levels, with
/// v(c) >= 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerCertificate {
    pub level: u32,
    pub witness: Place,
    pub valuation: i64,
    pub freshness: Vec<FreshnessCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LayerOutcome {
    Certified(LayerCertificate),
    Inconclusive,
}

/// f^n(x) - beta as a polynomial in Q(t)[x].
pub fn level_polynomial(f: &UnicriticalMap, beta: &RatFunc, n: u32) -> PolyX {
    let mut cur = PolyX::x();
    for _ in 0..n {
        cur = cur.pow(f.q()).add(&PolyX::constant(f.c().clone()));
    }
    cur.sub(&PolyX::constant(beta.clone()))
}

/// f^n(x) - beta over Q.
pub fn level_polynomial_q(f: &UnicriticalMap, beta: &crate::rational::Rational, n: u32) -> Poly {
    let c = Poly::constant(Var::X, f.c_rational().expect("base Q map"));
    let mut cur = Poly::var_poly(Var::X);
    for _ in 0..n {
        cur = cur.pow(f.q()).add(&c);
    }
    cur.sub(&Poly::constant(Var::X, beta.clone()))
}

/// Try to certify maximality of the level-n Kummer layer by a fresh place of
/// nondivisible valuation on f^n(0) - beta.
pub fn certify_layer(
    f: &UnicriticalMap,
    beta: &RatFunc,
    n: u32,
) -> Result<LayerOutcome, GaloisError> {
    assert!(n >= 1);
    assert_eq!(f.base(), BaseField::Qt, "layer certificates live over Q(t)");
    let orbit = f.orbit(&RatFunc::zero(), n)?;
    let diffs: Vec<RatFunc> = orbit[1..].iter().map(|w| w.sub(beta)).collect();
    let d_n = diffs.last().unwrap();
    if d_n.is_zero() {
        return Err(GaloisError::PostcriticalDegenerate);
    }
    let p = f.p() as i64;
    for (v, val) in places::places_of(d_n).expect("nonzero") {
        if matches!(v, Place::Infinity) {
            continue;
        }
        if val.rem_euclid(p) == 0 {
            continue;
        }
        let vc = if f.c().is_zero() {
            0
        } else {
            places::valuation(f.c(), &v).expect("nonzero")
        };
        let mut freshness = vec![FreshnessCheck {
            check: format!("v(c) >= 0 at {v}"),
            ok: vc >= 0,
        }];
        for (k, d) in diffs[..diffs.len() - 1].iter().enumerate() {
            let ok = !d.is_zero() && places::valuation(d, &v).expect("nonzero") == 0;
            freshness.push(FreshnessCheck {
                check: format!("v(f^{}(0) - beta) = 0 at {v}", k + 1),
                ok,
            });
        }
        if freshness.iter().all(|f| f.ok) {
            return Ok(LayerOutcome::Certified(LayerCertificate {
                level: n,
                witness: v,
                valuation: val,
                freshness,
            }));
        }
    }
    Ok(LayerOutcome::Inconclusive)
}

fn is_square(z: &RatFunc) -> bool {
    places::is_qth_power(z, 2) == Ok(true)
}

/// Square root of a perfect-square rational function.
fn ratfunc_sqrt(z: &RatFunc) -> Option<RatFunc> {
    if z.is_zero() {
        return Some(RatFunc::zero());
    }
    let half = |p: &Poly| -> Option<Poly> {
        let fac = factor::factor_over_q(p).ok()?;
        let lead = crate::rational::qth_root(&fac.content, 2)?;
        let mut out = Poly::constant(Var::T, lead);
        for (pi, m) in fac.factors {
            if m % 2 != 0 {
                return None;
            }
            out = out.mul(&pi.pow(m / 2));
        }
        Some(out)
    };
    let n = half(z.num())?;
    let d = half(z.den())?;
    Some(RatFunc::new(n, d).expect("den nonzero"))
}

/// Exact Kummer ranks (r1, r2) of the first two layers for q = 2 over Q(t).
pub fn kummer_rank_level2_oracle(
    f: &UnicriticalMap,
    beta: &RatFunc,
) -> Result<(u32, u32), GaloisError> {
    if f.q() != 2 {
        return Err(GaloisError::OracleRequiresQ2);
    }
    let c = f.c();
    let w = beta.sub(c);
    if w.is_zero() {
        return Err(GaloisError::DegenerateBeta);
    }
    let r1 = if is_square(&w) { 0 } else { 1 };
    let (a_trivial, ab_trivial);
    if r1 == 1 {
        // roots z = ±sqrt(w) live in K1 = K(sqrt(w)); a class of z - c is
        // trivial iff its norm c^2 - w is a square in K, and the product
        // class c^2 - w, lying in K, is trivial iff it or its product with w
        // is a square in K
        let norm = c.mul(c).sub(&w);
        if norm.is_zero() {
            return Err(GaloisError::PostcriticalDegenerate);
        }
        a_trivial = is_square(&norm);
        ab_trivial = is_square(&norm) || is_square(&norm.mul(&w));
    } else {
        // w is a square in K: both roots are rational functions
        let z = ratfunc_sqrt(&w).expect("square");
        let a = z.sub(c);
        let b = z.neg().sub(c);
        if a.is_zero() || b.is_zero() {
            return Err(GaloisError::PostcriticalDegenerate);
        }
        let at = is_square(&a);
        let bt = is_square(&b);
        let abt = is_square(&a.mul(&b));
        let r2 = match (at, bt, abt) {
            (true, true, _) => 0,
            (false, false, false) => 2,
            _ => 1,
        };
        return Ok((0, r2));
    }
    let r2 = match (a_trivial, ab_trivial) {
        (true, _) => 0,
        (false, false) => 2,
        (false, true) => 1,
    };
    Ok((r1, r2))
}

/// Eventual-stability verdict: factor counts of f^n(x) - beta for levels
/// 0..=N (level 0 is x - beta, count 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StabilityVerdict {
    /// A single place certifies irreducibility at every level up to N.
    CertifiedStable { place: Place, levels: u32 },
    /// Counts computed exactly and not growing at the last level.
    ObservedStable { levels: u32, counts: Vec<usize> },
    /// Counts still growing at the last computed level.
    UnstableWitness { level: u32, counts: Vec<usize> },
}

pub fn eventual_stability(
    f: &UnicriticalMap,
    beta: &RatFunc,
    n: u32,
) -> Result<StabilityVerdict, GaloisError> {
    let status = dynamics::periodicity_status(f, beta)?;
    if matches!(status.verdict, OrbitVerdict::Periodic(_)) {
        return Err(GaloisError::PeriodicBasepoint);
    }
    eventual_stability_unchecked(f, beta, n)
}

/// As eventual_stability, but without rejecting periodic basepoints; used to
/// observe factor-count growth for periodic beta.
pub fn eventual_stability_unchecked(
    f: &UnicriticalMap,
    beta: &RatFunc,
    n: u32,
) -> Result<StabilityVerdict, GaloisError> {
    assert!(n >= 1);
    if f.base() == BaseField::Qt {
        if let Some(place) = certified_stable_place(f, beta, n)? {
            return Ok(StabilityVerdict::CertifiedStable { place, levels: n });
        }
    }
    let mut counts = vec![1usize];
    for k in 1..=n {
        let count = match f.base() {
            BaseField::Qt => factor::factor_over_function_field(&level_polynomial(f, beta, k))?
                .count(),
            BaseField::Q => {
                let b = beta.as_constant().expect("base Q point");
                factor::factor_over_q(&level_polynomial_q(f, &b, k))?.count()
            }
        };
        counts.push(count);
    }
    if counts[n as usize] > counts[n as usize - 1] {
        Ok(StabilityVerdict::UnstableWitness { level: n, counts })
    } else {
        Ok(StabilityVerdict::ObservedStable { levels: n, counts })
    }
}

/// A place v with v(f^n(0) - beta) = 1 for all n <= N whose Eisenstein
/// certificate holds at every level.
fn certified_stable_place(
    f: &UnicriticalMap,
    beta: &RatFunc,
    n: u32,
) -> Result<Option<Place>, GaloisError> {
    let d1 = f.c().sub(beta);
    if d1.is_zero() {
        return Ok(None);
    }
    let orbit = f.orbit(&RatFunc::zero(), n)?;
    'places: for (v, val) in places::places_of(&d1).expect("nonzero") {
        if val != 1 || matches!(v, Place::Infinity) {
            continue;
        }
        for k in 1..=n {
            let dk = orbit[k as usize].sub(beta);
            if dk.is_zero() || places::valuation(&dk, &v).expect("nonzero") != 1 {
                continue 'places;
            }
            let lp = level_polynomial(f, beta, k);
            if places::eisenstein_certificate(&lp, &v) != Ok(true) {
                continue 'places;
            }
        }
        return Ok(Some(v));
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankProvenance {
    Certified,
    OracleExact,
    LowerBound,
}

/// Per-level Kummer ranks with provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerRankProfile {
    /// (rank r_n, provenance) for n = 1..=N; 0 <= r_n <= q^(n-1).
    pub ranks: Vec<(BigUint, RankProvenance)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexBound {
    /// q^(sum of (q^(n-1) - r_n)): upper bound for the index at level N.
    pub index_upper: BigUint,
    /// q^(sum of r_n): lower bound for |G_N|.
    pub group_lower: BigUint,
}

/// Ranks for levels 1..=N with the resulting index bound at level N.
pub fn layer_profile_and_index(
    f: &UnicriticalMap,
    beta: &RatFunc,
    n: u32,
) -> Result<(LayerRankProfile, IndexBound), GaloisError> {
    let q = BigUint::from(f.q());
    let oracle = if f.q() == 2 {
        match kummer_rank_level2_oracle(f, beta) {
            Ok(r) => Some(r),
            Err(GaloisError::DegenerateBeta) | Err(GaloisError::PostcriticalDegenerate) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let mut ranks = Vec::new();
    for level in 1..=n {
        let max_rank = q.pow(level - 1);
        let entry = match certify_layer(f, beta, level)? {
            LayerOutcome::Certified(_) => (max_rank, RankProvenance::Certified),
            LayerOutcome::Inconclusive => match (level, oracle) {
                (1, Some((r1, _))) => (BigUint::from(r1), RankProvenance::OracleExact),
                (2, Some((_, r2))) => (BigUint::from(r2), RankProvenance::OracleExact),
                _ => (BigUint::zero(), RankProvenance::LowerBound),
            },
        };
        ranks.push(entry);
    }
    let mut deficit = BigUint::zero();
    let mut total = BigUint::zero();
    for (level, (r, _)) in ranks.iter().enumerate() {
        deficit += q.pow(level as u32) - r;
        total += r;
    }
    let bound = IndexBound {
        index_upper: pow_big(&q, &deficit),
        group_lower: pow_big(&q, &total),
    };
    Ok((LayerRankProfile { ranks }, bound))
}

fn pow_big(base: &BigUint, e: &BigUint) -> BigUint {
    let mut acc = BigUint::one();
    let mut i = BigUint::zero();
    while &i < e {
        acc *= base;
        i += 1u32;
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dichotomy {
    /// beta neither periodic nor postcritical: finite-index evidence with
    /// per-level certificates.
    FiniteIndexEvidence,
    /// beta lies in the critical orbit.
    ConditionBViolated { postcritical_level: u32 },
    /// beta is periodic.
    ConditionPeriodic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisReport {
    pub periodic: OrbitStatus,
    pub postcritical: Option<u32>,
    pub stability: Option<StabilityVerdict>,
    pub profile: Option<LayerRankProfile>,
    pub index_bound_at_n: Option<IndexBound>,
    pub dichotomy: Dichotomy,
}

/// Assemble the full dichotomy report for (f, beta) at depth N.
pub fn analyze(f: &UnicriticalMap, beta: &RatFunc, n: u32) -> Result<AnalysisReport, GaloisError> {
    let periodic = dynamics::periodicity_status(f, beta)?;
    let postcritical = dynamics::is_postcritical(f, beta)?;
    if matches!(periodic.verdict, OrbitVerdict::Periodic(_)) {
        return Ok(AnalysisReport {
            periodic,
            postcritical,
            stability: None,
            profile: None,
            index_bound_at_n: None,
            dichotomy: Dichotomy::ConditionPeriodic,
        });
    }
    if let Some(level) = postcritical {
        return Ok(AnalysisReport {
            periodic,
            postcritical,
            stability: None,
            profile: None,
            index_bound_at_n: None,
            dichotomy: Dichotomy::ConditionBViolated {
                postcritical_level: level,
            },
        });
    }
    let stability = eventual_stability(f, beta, n)?;
    let (profile, bound) = layer_profile_and_index(f, beta, n)?;
    Ok(AnalysisReport {
        periodic,
        postcritical,
        stability: Some(stability),
        profile: Some(profile),
        index_bound_at_n: Some(bound),
        dichotomy: Dichotomy::FiniteIndexEvidence,
    })
}
