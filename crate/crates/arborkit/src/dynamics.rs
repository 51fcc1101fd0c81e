//! Unicritical maps x^q + c, orbits, periodicity and postcriticality
//! decisions, and the depressed-cubic critical-orbit checks.

use crate::heights;
use crate::rational::Rational;
use crate::ratfunc::RatFunc;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DynError {
    #[error("q must be a prime power p^r with r >= 1 and q >= 2")]
    NotPrimePower,
    #[error("isotrivial pair (constant c and constant point); analyze over Q instead")]
    IsotrivialUndecidable,
    #[error("zero input")]
    ZeroInput,
    #[error("intermediate values exceeded the size budget")]
    IterateOverflow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseField {
    Q,
    Qt,
}

/// f(x) = x^q + c with q a prime power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnicriticalMap {
    q: u32,
    p: u32,
    c: RatFunc,
    base: BaseField,
}

fn prime_power_base(q: u32) -> Option<u32> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0).unwrap();
    let mut m = q;
    while m % p == 0 {
        m /= p;
    }
    if m == 1 {
        Some(p)
    } else {
        None
    }
}

impl UnicriticalMap {
    pub fn over_q(q: u32, c: Rational) -> Result<Self, DynError> {
        let p = prime_power_base(q).ok_or(DynError::NotPrimePower)?;
        Ok(UnicriticalMap {
            q,
            p,
            c: RatFunc::from_rational(c),
            base: BaseField::Q,
        })
    }

    pub fn over_qt(q: u32, c: RatFunc) -> Result<Self, DynError> {
        let p = prime_power_base(q).ok_or(DynError::NotPrimePower)?;
        Ok(UnicriticalMap {
            q,
            p,
            c,
            base: BaseField::Qt,
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// The prime p with q = p^r.
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn c(&self) -> &RatFunc {
        &self.c
    }

    pub fn base(&self) -> BaseField {
        self.base
    }

    pub fn c_rational(&self) -> Option<Rational> {
        self.c.as_constant()
    }

    pub fn evaluate(&self, z: &RatFunc) -> RatFunc {
        z.pow(self.q).add(&self.c)
    }

    pub fn evaluate_rat(&self, z: &Rational) -> Rational {
        let mut acc = Rational::one();
        for _ in 0..self.q {
            acc *= z;
        }
        acc + self.c.as_constant().expect("base Q map")
    }

    /// f^n(z) for n = |orbit| - 1; returns [z, f(z), ..., f^N(z)].
    pub fn orbit(&self, z: &RatFunc, n: u32) -> Result<Vec<RatFunc>, DynError> {
        let mut out = Vec::with_capacity(n as usize + 1);
        out.push(z.clone());
        for _ in 0..n {
            let next = self.evaluate(out.last().unwrap());
            check_size(&next)?;
            out.push(next);
        }
        Ok(out)
    }
}

const SIZE_BUDGET_DEG: usize = 1 << 14;
const SIZE_BUDGET_BITS: u64 = 1 << 26;

fn check_size(z: &RatFunc) -> Result<(), DynError> {
    if z.num().deg_or_zero() > SIZE_BUDGET_DEG || z.den().deg_or_zero() > SIZE_BUDGET_DEG {
        return Err(DynError::IterateOverflow);
    }
    Ok(())
}

/// Guard against runaway integer growth in rational orbits.
pub fn check_size_rat(z: &Rational) -> Result<(), DynError> {
    if z.numer().bits() > SIZE_BUDGET_BITS || z.denom().bits() > SIZE_BUDGET_BITS {
        return Err(DynError::IterateOverflow);
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitVerdict {
    Periodic(u32),
    Preperiodic { tail: u32, period: u32 },
    Wandering,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitProof {
    /// Exact positive canonical height over Q(t).
    PositiveCanonicalHeight(Rational),
    /// Indices n1 < n2 with f^n1(z) = f^n2(z).
    Cycle { first: u32, again: u32 },
    /// Step at which an escape bound was crossed (base Q).
    Escape { step: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitStatus {
    pub verdict: OrbitVerdict,
    pub proof: OrbitProof,
}

/// Decide whether β is periodic, preperiodic, or wandering under f.
pub fn periodicity_status(f: &UnicriticalMap, beta: &RatFunc) -> Result<OrbitStatus, DynError> {
    match f.base {
        BaseField::Qt => {
            if f.c.is_constant() && beta.is_constant() {
                return Err(DynError::IsotrivialUndecidable);
            }
            let h = heights::canonical_height_fn(f, beta).map_err(|e| match e {
                heights::HeightError::IterateOverflow => DynError::IterateOverflow,
                heights::HeightError::NotStabilized => DynError::IterateOverflow,
            })?;
            if h.is_positive() {
                return Ok(OrbitStatus {
                    verdict: OrbitVerdict::Wandering,
                    proof: OrbitProof::PositiveCanonicalHeight(h),
                });
            }
            cycle_search(f, beta)
        }
        BaseField::Q => {
            let b = beta.as_constant().expect("base Q point must be constant");
            let c = f.c.as_constant().unwrap();
            // escape test per prime and at the archimedean place; bounded
            // orbits are finite, so the cycle search below terminates
            let arch_bound = Rational::one().max(c.abs()) + Rational::one();
            let mut z = b.clone();
            let mut seen: HashMap<Rational, u32> = HashMap::new();
            let mut n = 0u32;
            loop {
                if z.abs() > arch_bound || nonarch_escaped(&z, &c, f.q) {
                    return Ok(OrbitStatus {
                        verdict: OrbitVerdict::Wandering,
                        proof: OrbitProof::Escape { step: n },
                    });
                }
                if let Some(&first) = seen.get(&z) {
                    let period = n - first;
                    let verdict = if first == 0 {
                        OrbitVerdict::Periodic(period)
                    } else {
                        OrbitVerdict::Preperiodic {
                            tail: first,
                            period,
                        }
                    };
                    return Ok(OrbitStatus {
                        verdict,
                        proof: OrbitProof::Cycle {
                            first,
                            again: n,
                        },
                    });
                }
                seen.insert(z.clone(), n);
                z = f.evaluate_rat(&z);
                check_size_rat(&z)?;
                n += 1;
            }
        }
    }
}

/// True once v_p(z) is below the p-adic preperiodicity floor for some prime,
/// after which the valuation strictly decreases forever.
fn nonarch_escaped(z: &Rational, c: &Rational, q: u32) -> bool {
    use num_bigint::BigInt;
    use num_integer::Integer;
    // only primes dividing den(z) matter
    let mut d = z.denom().clone();
    let mut trial = BigInt::from(2);
    let mut primes = Vec::new();
    while &trial * &trial <= d {
        if d.is_multiple_of(&trial) {
            primes.push(trial.clone());
            while d.is_multiple_of(&trial) {
                d = d / &trial;
            }
        }
        trial += 1;
    }
    if d > BigInt::one() {
        primes.push(d);
    }
    let vp = |x: &BigInt, p: &BigInt| -> i64 {
        let mut m = 0;
        let mut x = x.clone();
        while !x.is_zero() && x.is_multiple_of(p) {
            x = x / p;
            m += 1;
        }
        m
    };
    for p in primes {
        let vz = -vp(z.denom(), &p);
        let vc = vp(c.numer(), &p) - vp(c.denom(), &p);
        // escape once -v(z) > max(0, -v(c))/(q - 1)
        let bound = Rational::new(BigInt::from((-vc).max(0)), BigInt::from(q as i64 - 1));
        if Rational::from_integer(BigInt::from(-vz)) > bound {
            return true;
        }
    }
    false
}

fn cycle_search(f: &UnicriticalMap, beta: &RatFunc) -> Result<OrbitStatus, DynError> {
    let mut seen: HashMap<RatFunc, u32> = HashMap::new();
    let mut z = beta.clone();
    let mut n = 0u32;
    loop {
        if let Some(&first) = seen.get(&z) {
            let period = n - first;
            let verdict = if first == 0 {
                OrbitVerdict::Periodic(period)
            } else {
                OrbitVerdict::Preperiodic {
                    tail: first,
                    period,
                }
            };
            return Ok(OrbitStatus {
                verdict,
                proof: OrbitProof::Cycle { first, again: n },
            });
        }
        seen.insert(z.clone(), n);
        z = f.evaluate(&z);
        check_size(&z)?;
        n += 1;
    }
}

/// Least n >= 1 with f^n(0) = β, or None.
pub fn is_postcritical(f: &UnicriticalMap, beta: &RatFunc) -> Result<Option<u32>, DynError> {
    let beta_h = heights::weil_height_fn(beta);
    let mut z = RatFunc::zero();
    let mut seen: HashMap<RatFunc, u32> = HashMap::new();
    let mut n = 0u32;
    loop {
        z = f.evaluate(&z);
        check_size(&z)?;
        n += 1;
        if &z == beta {
            return Ok(Some(n));
        }
        match f.base {
            BaseField::Qt if !f.c.is_constant() => {
                // heights of f^n(0) strictly multiply by q from n = 1 on;
                // once past h(β) the orbit cannot return
                if n >= 2 && heights::weil_height_fn(&z) > beta_h {
                    return Ok(None);
                }
            }
            _ => {
                let zc = z.as_constant();
                let bc = beta.as_constant();
                if f.c.is_constant() && bc.is_none() {
                    // constant orbit can never reach a nonconstant β
                    return Ok(None);
                }
                if let (Some(zr), Some(br)) = (zc, bc) {
                    let c = f.c.as_constant().unwrap();
                    let arch_bound = Rational::one().max(c.abs()) + Rational::one();
                    if (zr.abs() > arch_bound || nonarch_escaped(&zr, &c, f.q))
                        && crate::rational::height_log(&zr) > crate::rational::height_log(&br)
                    {
                        return Ok(None);
                    }
                    if seen.contains_key(&z) {
                        return Ok(None);
                    }
                    seen.insert(z.clone(), n);
                }
            }
        }
    }
}

/// x^3 + b x + a over Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepressedCubic {
    pub a: Rational,
    pub b: Rational,
}

impl DepressedCubic {
    pub fn new(a: Rational, b: Rational) -> Self {
        DepressedCubic { a, b }
    }

    pub fn evaluate(&self, x: &Rational) -> Rational {
        x * x * x + &self.b * x + &self.a
    }
}

/// Critical points of x^3 + bx + a for b = -3e^2: the roots of 3x^2 + b.
pub fn cubic_critical_points(e: &Rational) -> Result<(Rational, Rational), DynError> {
    if e.is_zero() {
        return Err(DynError::ZeroInput);
    }
    Ok((-e.clone(), e.clone()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSeparation {
    /// Least n <= N with f^n(u) = f^n(v), if any.
    pub coincidence: Option<u32>,
    /// Whether f^n(u) > f^n(v) held at every step 1 <= n <= N.
    pub first_always_greater: bool,
}

/// Track the orbits of u and v under a depressed cubic and report the first
/// coincidence index within N steps, if any.
pub fn orbit_separation(
    f: &DepressedCubic,
    u: &Rational,
    v: &Rational,
    n: u32,
) -> Result<OrbitSeparation, DynError> {
    assert!(u != v, "points must be distinct");
    assert!(n >= 1);
    let mut fu = u.clone();
    let mut fv = v.clone();
    let mut first_always_greater = true;
    for step in 1..=n {
        fu = f.evaluate(&fu);
        fv = f.evaluate(&fv);
        check_size_rat(&fu)?;
        check_size_rat(&fv)?;
        if fu == fv {
            return Ok(OrbitSeparation {
                coincidence: Some(step),
                first_always_greater: false,
            });
        }
        if fu <= fv {
            first_always_greater = false;
        }
    }
    Ok(OrbitSeparation {
        coincidence: None,
        first_always_greater,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Poly, Var};
    use crate::rational::rat;

    fn t() -> RatFunc {
        RatFunc::t()
    }

    fn tp(coeffs: &[i64]) -> RatFunc {
        RatFunc::from_poly(Poly::new(Var::T, coeffs.iter().map(|&c| rat(c)).collect()))
    }

    #[test]
    fn prime_power_validation() {
        assert!(UnicriticalMap::over_q(2, rat(1)).is_ok());
        assert!(UnicriticalMap::over_q(4, rat(1)).is_ok());
        assert!(UnicriticalMap::over_q(9, rat(1)).is_ok());
        assert_eq!(
            UnicriticalMap::over_q(6, rat(1)),
            Err(DynError::NotPrimePower)
        );
        assert_eq!(
            UnicriticalMap::over_q(1, rat(1)),
            Err(DynError::NotPrimePower)
        );
        assert_eq!(UnicriticalMap::over_q(8, rat(0)).unwrap().p(), 2);
    }

    #[test]
    fn orbit_of_critical_point() {
        let f = UnicriticalMap::over_qt(2, t()).unwrap();
        let orb = f.orbit(&RatFunc::zero(), 3).unwrap();
        assert_eq!(
            orb,
            vec![RatFunc::zero(), t(), tp(&[0, 1, 1]), tp(&[0, 1, 1, 2, 1])]
        );
    }

    #[test]
    fn two_cycle_over_q() {
        let f = UnicriticalMap::over_q(2, rat(-1)).unwrap();
        let orb = f.orbit(&RatFunc::from_int(-1), 4).unwrap();
        let vals: Vec<i64> = orb
            .iter()
            .map(|z| z.as_constant().unwrap().to_integer().try_into().unwrap())
            .collect();
        assert_eq!(vals, vec![-1, 0, -1, 0, -1]);
        let st = periodicity_status(&f, &RatFunc::from_int(-1)).unwrap();
        assert_eq!(st.verdict, OrbitVerdict::Periodic(2));
    }

    #[test]
    fn wandering_over_qt() {
        let f = UnicriticalMap::over_qt(2, t()).unwrap();
        let st = periodicity_status(&f, &RatFunc::zero()).unwrap();
        assert_eq!(st.verdict, OrbitVerdict::Wandering);
        assert_eq!(
            st.proof,
            OrbitProof::PositiveCanonicalHeight(crate::rational::rat_frac(1, 2))
        );
    }

    #[test]
    fn fixed_point_over_qt() {
        // c = t - t^2 makes t a fixed point of x^2 + c
        let c = t().sub(&t().pow(2));
        let f = UnicriticalMap::over_qt(2, c).unwrap();
        let st = periodicity_status(&f, &t()).unwrap();
        assert_eq!(st.verdict, OrbitVerdict::Periodic(1));
    }

    #[test]
    fn isotrivial_pair_rejected() {
        let f = UnicriticalMap::over_qt(2, RatFunc::from_int(1)).unwrap();
        assert_eq!(
            periodicity_status(&f, &RatFunc::zero()),
            Err(DynError::IsotrivialUndecidable)
        );
    }

    #[test]
    fn postcritical_examples() {
        let f = UnicriticalMap::over_qt(2, t()).unwrap();
        assert_eq!(is_postcritical(&f, &tp(&[0, 1, 1])), Ok(Some(2)));
        assert_eq!(is_postcritical(&f, &t()), Ok(Some(1)));
        assert_eq!(is_postcritical(&f, &RatFunc::from_int(1)), Ok(None));
    }

    #[test]
    fn cubic_critical_points_examples() {
        assert_eq!(cubic_critical_points(&rat(1)), Ok((rat(-1), rat(1))));
        assert_eq!(
            cubic_critical_points(&crate::rational::rat_frac(1, 2)),
            Ok((
                crate::rational::rat_frac(-1, 2),
                crate::rational::rat_frac(1, 2)
            ))
        );
        assert_eq!(cubic_critical_points(&rat(0)), Err(DynError::ZeroInput));
    }

    #[test]
    fn cubic_orbit_separation() {
        // e = 1, G(b) = b^4 + 3b^2 + 5, a = G(-3) = 113
        let f = DepressedCubic::new(rat(113), rat(-3));
        let r = orbit_separation(&f, &rat(-1), &rat(1), 3).unwrap();
        assert_eq!(r.coincidence, None);
        assert!(r.first_always_greater);
        assert_eq!(f.evaluate(&rat(-1)), rat(115));
        assert_eq!(f.evaluate(&rat(1)), rat(111));

        let g = DepressedCubic::new(rat(0), rat(-3));
        let r = orbit_separation(&g, &rat(2), &rat(-1), 2).unwrap();
        assert_eq!(r.coincidence, Some(1));

        let h = DepressedCubic::new(rat(0), rat(-12));
        let r = orbit_separation(&h, &rat(-2), &rat(2), 4).unwrap();
        assert_eq!(r.coincidence, None);
    }
}
