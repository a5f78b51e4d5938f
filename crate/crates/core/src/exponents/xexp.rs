//! Extended exponents: nonnegative exact rationals together with infinity.
//!
//! The reciprocal follows the convention 1/0 = inf and 1/inf = 0, which is
//! what makes every closed-form exponent formula in this crate total on
//! [1, inf] without special cases.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exponents::rat::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Repr {
    Finite(Rat), // invariant: >= 0
    Inf,
}

/// An extended exponent: a nonnegative rational or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct XExp(Repr);

impl XExp {
    pub const INF: XExp = XExp(Repr::Inf);
    pub const ZERO: XExp = XExp(Repr::Finite(Rat::ZERO));
    pub const ONE: XExp = XExp(Repr::Finite(Rat::ONE));
    pub const TWO: XExp = XExp(Repr::Finite(Rat::from_int(2)));

    /// Exact rational exponent `num/den`; rejects negative values.
    pub fn rational(num: i64, den: i64) -> Result<XExp> {
        let r = Rat::new(num, den)?;
        XExp::from_rat(r)
    }

    pub fn integer(n: i64) -> Result<XExp> {
        XExp::from_rat(Rat::from_int(n))
    }

    pub fn from_rat(r: Rat) -> Result<XExp> {
        if r.is_negative() {
            return Err(Error::Domain(format!("negative exponent {r}")));
        }
        Ok(XExp(Repr::Finite(r)))
    }

    pub fn is_inf(&self) -> bool {
        matches!(self.0, Repr::Inf)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Finite(r) if r.is_zero())
    }

    /// The finite value, if any.
    pub fn as_rat(&self) -> Option<Rat> {
        match self.0 {
            Repr::Finite(r) => Some(r),
            Repr::Inf => None,
        }
    }

    /// Reciprocal under the 1/0 = inf, 1/inf = 0 convention. Total.
    pub fn recip(&self) -> XExp {
        match self.0 {
            Repr::Inf => XExp::ZERO,
            Repr::Finite(r) if r.is_zero() => XExp::INF,
            // num >= 1 here, so swapping keeps the value nonnegative and reduced.
            Repr::Finite(r) => XExp(Repr::Finite(r.recip().expect("nonzero"))),
        }
    }

    /// Reciprocal as a plain rational; exponents in [1, inf] always have one.
    pub fn recip_rat(&self) -> Result<Rat> {
        match self.recip().0 {
            Repr::Finite(r) => Ok(r),
            Repr::Inf => Err(Error::Domain("reciprocal of zero exponent is infinite".into())),
        }
    }

    /// Maps a reciprocal back to the exponent: r <= 0 yields inf.
    pub fn from_recip_rat(r: Rat) -> Result<XExp> {
        if r.is_negative() || r.is_zero() {
            Ok(XExp::INF)
        } else {
            XExp::from_rat(r.recip()?)
        }
    }

    pub fn add(&self, rhs: XExp) -> Result<XExp> {
        match (self.0, rhs.0) {
            (Repr::Inf, _) | (_, Repr::Inf) => Ok(XExp::INF),
            (Repr::Finite(a), Repr::Finite(b)) => XExp::from_rat(a.add(b)?),
        }
    }

    /// Exact subtraction; a negative result or inf - inf is a domain error.
    pub fn sub(&self, rhs: XExp) -> Result<XExp> {
        match (self.0, rhs.0) {
            (Repr::Inf, Repr::Inf) => Err(Error::Domain("inf - inf is undefined".into())),
            (Repr::Inf, Repr::Finite(_)) => Ok(XExp::INF),
            (Repr::Finite(_), Repr::Inf) => {
                Err(Error::Domain("finite minus infinite exponent".into()))
            }
            (Repr::Finite(a), Repr::Finite(b)) => {
                let d = a.sub(b)?;
                if d.is_negative() {
                    Err(Error::Domain(format!("negative exponent difference {d}")))
                } else {
                    XExp::from_rat(d)
                }
            }
        }
    }

    pub fn mul(&self, rhs: XExp) -> Result<XExp> {
        match (self.0, rhs.0) {
            (Repr::Inf, b) | (b, Repr::Inf) => match b {
                Repr::Finite(r) if r.is_zero() => {
                    Err(Error::Domain("0 * inf is undefined".into()))
                }
                _ => Ok(XExp::INF),
            },
            (Repr::Finite(a), Repr::Finite(b)) => XExp::from_rat(a.mul(b)?),
        }
    }

    pub fn div(&self, rhs: XExp) -> Result<XExp> {
        match (self.0, rhs.0) {
            (Repr::Inf, Repr::Inf) => Err(Error::Domain("inf / inf is undefined".into())),
            (Repr::Inf, Repr::Finite(_)) => Ok(XExp::INF),
            (Repr::Finite(_), Repr::Inf) => Ok(XExp::ZERO),
            (Repr::Finite(a), Repr::Finite(b)) => {
                if b.is_zero() {
                    if a.is_zero() {
                        Err(Error::Domain("0 / 0 is undefined".into()))
                    } else {
                        Ok(XExp::INF)
                    }
                } else {
                    XExp::from_rat(a.div(b)?)
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self.0 {
            Repr::Inf => f64::INFINITY,
            Repr::Finite(r) => r.to_f64(),
        }
    }

    /// Renders as `num/den` even for integers (`2` becomes `2/1`), or `inf`.
    pub fn to_fraction_string(&self) -> String {
        match self.0 {
            Repr::Inf => "inf".to_string(),
            Repr::Finite(r) => format!("{}/{}", r.num(), r.den()),
        }
    }
}

impl PartialOrd for XExp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for XExp {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.0, other.0) {
            (Repr::Inf, Repr::Inf) => Ordering::Equal,
            (Repr::Inf, _) => Ordering::Greater,
            (_, Repr::Inf) => Ordering::Less,
            (Repr::Finite(a), Repr::Finite(b)) => a.cmp(&b),
        }
    }
}

impl fmt::Display for XExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Repr::Inf => write!(f, "inf"),
            Repr::Finite(r) => write!(f, "{r}"),
        }
    }
}

impl FromStr for XExp {
    type Err = Error;

    /// Accepts `inf`, integers (`4`), and exact fractions (`4/3`).
    /// Decimal notation is rejected: exactness is required at the boundaries.
    fn from_str(s: &str) -> Result<XExp> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(XExp::INF);
        }
        if s.contains('.') {
            return Err(Error::Parse(format!(
                "exact rational required (got `{s}`); write fractions like 4/3"
            )));
        }
        let parse_int = |t: &str| -> Result<i64> {
            t.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad exponent `{s}`")))
        };
        match s.split_once('/') {
            None => XExp::integer(parse_int(s)?),
            Some((n, d)) => XExp::rational(parse_int(n)?, parse_int(d)?),
        }
    }
}

impl Serialize for XExp {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for XExp {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// Shorthand used all over the tests: `xexp("4/3")`, `xexp("inf")`.
pub fn xexp(s: &str) -> XExp {
    s.parse().expect("literal exponent")
}
