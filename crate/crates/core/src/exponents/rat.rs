//! Exact signed rationals on 64-bit components.
//!
//! Intermediates run in `i128`, so an operation fails only when the *reduced*
//! result leaves the `i64` range; that failure is a reported [`Error::Overflow`],
//! never a wraparound.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A rational number `num/den` in lowest terms with `den >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rat {
    num: i64,
    den: i64,
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    // u128 division is slow; drop to u64 as soon as both halves fit.
    while b != 0 {
        if a <= u64::MAX as u128 && b <= u64::MAX as u128 {
            return gcd_u64(a as u64, b as u64) as u128;
        }
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Reduce `num/den` (den != 0) and check the result fits in `i64`.
fn reduce(num: i128, den: i128) -> Result<Rat> {
    debug_assert!(den != 0);
    let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
    let g = if num == 0 { den as u128 } else { gcd_u128(num.unsigned_abs(), den as u128) } as i128;
    let (num, den) = (num / g, den / g);
    let num = i64::try_from(num).map_err(|_| Error::Overflow(format!("numerator {num}")))?;
    let den = i64::try_from(den).map_err(|_| Error::Overflow(format!("denominator {den}")))?;
    Ok(Rat { num, den })
}

impl Rat {
    pub const ZERO: Rat = Rat { num: 0, den: 1 };
    pub const ONE: Rat = Rat { num: 1, den: 1 };

    pub fn new(num: i64, den: i64) -> Result<Rat> {
        if den == 0 {
            return Err(Error::Domain("rational with zero denominator".into()));
        }
        reduce(num as i128, den as i128)
    }

    pub const fn from_int(n: i64) -> Rat {
        Rat { num: n, den: 1 }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_negative(&self) -> bool {
        self.num < 0
    }

    pub fn add(&self, rhs: Rat) -> Result<Rat> {
        let num = self.num as i128 * rhs.den as i128 + rhs.num as i128 * self.den as i128;
        reduce(num, self.den as i128 * rhs.den as i128)
    }

    pub fn sub(&self, rhs: Rat) -> Result<Rat> {
        let num = self.num as i128 * rhs.den as i128 - rhs.num as i128 * self.den as i128;
        reduce(num, self.den as i128 * rhs.den as i128)
    }

    pub fn mul(&self, rhs: Rat) -> Result<Rat> {
        reduce(self.num as i128 * rhs.num as i128, self.den as i128 * rhs.den as i128)
    }

    pub fn div(&self, rhs: Rat) -> Result<Rat> {
        if rhs.is_zero() {
            return Err(Error::Domain("rational division by zero".into()));
        }
        reduce(self.num as i128 * rhs.den as i128, self.den as i128 * rhs.num as i128)
    }

    pub fn recip(&self) -> Result<Rat> {
        if self.is_zero() {
            return Err(Error::Domain("reciprocal of zero rational".into()));
        }
        reduce(self.den as i128, self.num as i128)
    }

    /// Scale by an integer, checked.
    pub fn mul_int(&self, k: i64) -> Result<Rat> {
        reduce(self.num as i128 * k as i128, self.den as i128)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Self) -> Ordering {
        // Cross-multiplication in i128 never overflows for i64 components.
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        let r = Rat::new(6, -4).unwrap();
        assert_eq!((r.num(), r.den()), (-3, 2));
        assert_eq!(Rat::new(0, 5).unwrap(), Rat::ZERO);
    }

    #[test]
    fn exact_arithmetic() {
        let a = Rat::new(1, 3).unwrap();
        let b = Rat::new(1, 6).unwrap();
        assert_eq!(a.add(b).unwrap(), Rat::new(1, 2).unwrap());
        assert_eq!(a.sub(b).unwrap(), b);
        assert_eq!(a.mul(b).unwrap(), Rat::new(1, 18).unwrap());
        assert_eq!(a.div(b).unwrap(), Rat::from_int(2));
    }

    #[test]
    fn overflow_is_reported() {
        let a = Rat::new(i64::MAX, 1).unwrap();
        assert!(matches!(a.add(Rat::ONE), Err(Error::Overflow(_))));
        // Intermediates above i64 are fine when the reduced result fits.
        let b = Rat::new(i64::MAX, 2).unwrap();
        assert_eq!(b.add(b).unwrap(), Rat::new(i64::MAX, 1).unwrap());
    }

    #[test]
    fn ordering_without_overflow() {
        let a = Rat::new(i64::MAX, 3).unwrap();
        let b = Rat::new(i64::MAX, 2).unwrap();
        assert!(a < b);
        assert!(Rat::new(-1, 2).unwrap() < Rat::ZERO);
    }
}
