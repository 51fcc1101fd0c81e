//! Helpers for arbitrary-precision rationals (the constant field Q).

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};

/// Exact rational number with arbitrary-precision numerator and denominator.
/// Always stored reduced with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Natural log of a positive big integer, accurate to f64 precision even when
/// the integer itself does not fit in an f64.
pub fn log_biguint(n: &BigUint) -> f64 {
    assert!(!n.is_zero(), "log of zero");
    let bits = n.bits();
    if bits <= 63 {
        let v: u64 = n.try_into().expect("fits");
        return (v as f64).ln();
    }
    // mantissa = top 63 bits, value = mantissa * 2^(bits-63)
    let shift = bits - 63;
    let top: BigUint = n >> shift;
    let v: u64 = top.try_into().expect("fits");
    (v as f64).ln() + (shift as f64) * std::f64::consts::LN_2
}

/// log max(|num|, den) — the Weil height of a rational number in log units.
pub fn height_log(z: &Rational) -> f64 {
    let n = z.numer().magnitude();
    let d = z.denom().magnitude();
    let m = if n >= d { n } else { d };
    if m.is_zero() || m.is_one() {
        0.0
    } else {
        log_biguint(m)
    }
}

/// q-th root of a rational if it exists exactly in Q.
///
/// For even q only nonnegative inputs have a root and the nonnegative root is
/// returned; for odd q the sign carries over.
pub fn qth_root(z: &Rational, q: u32) -> Option<Rational> {
    assert!(q >= 1);
    if z.is_zero() {
        return Some(Rational::zero());
    }
    let negative = z.is_negative();
    if negative && q % 2 == 0 {
        return None;
    }
    let num = z.numer().magnitude();
    let den = z.denom().magnitude();
    let rn = num.nth_root(q);
    if rn.pow(q) != *num {
        return None;
    }
    let rd = den.nth_root(q);
    if rd.pow(q) != *den {
        return None;
    }
    let sign = if negative { Sign::Minus } else { Sign::Plus };
    Some(Rational::new(
        BigInt::from_biguint(sign, rn),
        BigInt::from_biguint(Sign::Plus, rd),
    ))
}

/// True iff z = w^q for some w in Q.
pub fn is_qth_power_rational(z: &Rational, q: u32) -> bool {
    qth_root(z, q).is_some()
}
