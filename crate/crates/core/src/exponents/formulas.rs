//! Closed-form exponent maps: the regularity-principle composite exponent,
//! the summing-operator inclusion exponent, the anisotropic transfer
//! condition, the multilinear admissibility test, and the globally sharp
//! exponent tuple.

use crate::error::{Error, Result};
use crate::exponents::rat::Rat;
use crate::exponents::xexp::XExp;

/// Composite exponent of the k-fold regularity principle:
/// p1 p2 / (k p1 - (k-1) p2) for 1 <= p1 <= p2 < k p1/(k-1).
/// With k = 1 there is no upper constraint and the map returns p2.
pub fn rp_exponent(k: u32, p1: XExp, p2: XExp) -> Result<XExp> {
    if k < 1 {
        return Err(Error::Domain("k must be a positive integer".into()));
    }
    if p1 < XExp::ONE {
        return Err(Error::Domain(format!("p1 must be >= 1, got {p1}")));
    }
    if p2 < p1 {
        return Err(Error::Domain(format!("need p1 <= p2, got p1={p1}, p2={p2}")));
    }
    // 1/result = k/p2 - (k-1)/p1, positive exactly on the admissible strip.
    let inv = p2.recip_rat()?.mul_int(k as i64)?.sub(p1.recip_rat()?.mul_int(k as i64 - 1)?)?;
    if inv.is_negative() || (inv.is_zero() && k > 1) {
        return Err(Error::Domain(format!("p2 must stay below {k}*p1/{}", k - 1)));
    }
    // inv = 0 only for k = 1 with p2 = inf.
    XExp::from_recip_rat(inv)
}

/// Inclusion exponent rsu/(su + mrs - mru) for multiple summing operators,
/// defined on the strip 1 <= s <= u < mrs/(mr - s). With s = r it reduces to
/// ru/(mr - (m-1)u).
pub fn inclusion_exponent(m: u32, r: XExp, s: XExp, u: XExp) -> Result<XExp> {
    if m < 1 {
        return Err(Error::Domain("m must be a positive integer".into()));
    }
    if r < XExp::ONE || s < XExp::ONE {
        return Err(Error::Domain(format!("need r, s >= 1, got r={r}, s={s}")));
    }
    if u < s {
        return Err(Error::Domain(format!("need s <= u, got s={s}, u={u}")));
    }
    // 1/result = 1/r + m/u - m/s; the strip is exactly where this is positive.
    let inv = r
        .recip_rat()?
        .add(u.recip_rat()?.mul_int(m as i64)?)?
        .sub(s.recip_rat()?.mul_int(m as i64)?)?;
    if inv.is_negative() || inv.is_zero() {
        return Err(Error::Domain(format!(
            "(r, s, u) = ({r}, {s}, {u}) lies outside the inclusion strip"
        )));
    }
    XExp::from_recip_rat(inv)
}

/// The anisotropic transfer condition 1/r1 - 1/p1 <= 1/r3 - 1/p3, exact.
pub fn anisotropic_ok(r1: XExp, p1: XExp, r3: XExp, p3: XExp) -> Result<bool> {
    for (name, x) in [("r1", r1), ("p1", p1), ("r3", r3), ("p3", p3)] {
        if x < XExp::ONE {
            return Err(Error::Domain(format!("{name} must be >= 1, got {x}")));
        }
    }
    if p3 < p1 || r3 < r1 {
        return Err(Error::Domain("transfer requires p3 >= p1 and r3 >= r1".into()));
    }
    let lhs = r1.recip_rat()?.sub(p1.recip_rat()?)?;
    let rhs = r3.recip_rat()?.sub(p3.recip_rat()?)?;
    Ok(lhs <= rhs)
}

/// Multilinear admissibility: sum 1/q_j <= (m+1)/2 - |1/p|, with
/// |1/p| = sum 1/p_j <= 1/2 and every q_j in [1, 2].
pub fn bh_hl_admissible(ps: &[XExp], qs: &[XExp]) -> Result<bool> {
    if ps.is_empty() || ps.len() != qs.len() {
        return Err(Error::Domain(format!(
            "need matching nonempty exponent lists, got {} and {}",
            ps.len(),
            qs.len()
        )));
    }
    let mut p_sum = Rat::ZERO;
    for p in ps {
        if *p < XExp::ONE {
            return Err(Error::Domain(format!("domain exponent {p} below 1")));
        }
        p_sum = p_sum.add(p.recip_rat()?)?;
    }
    if p_sum > Rat::new(1, 2)? {
        return Err(Error::Domain(format!("|1/p| = {p_sum} exceeds 1/2")));
    }
    let mut q_sum = Rat::ZERO;
    for q in qs {
        if *q < XExp::ONE || *q > XExp::TWO {
            return Err(Error::Domain(format!("target exponent {q} outside [1, 2]")));
        }
        q_sum = q_sum.add(q.recip_rat()?)?;
    }
    let m = ps.len() as i64;
    let bound = Rat::new(m + 1, 2)?.sub(p_sum)?;
    Ok(q_sum <= bound)
}

/// The globally sharp m-tuple for m >= 3 and p >= 2m-2:
/// (2p/(p-2), then m-1 copies of 2(m-1)p/(mp-2m+2)). Its reciprocals sum to
/// (m+1)/2 - m/p exactly.
pub fn sharp_tuple(m: u32, p: XExp) -> Result<Vec<XExp>> {
    if m < 3 {
        return Err(Error::Domain(format!("tuple needs m >= 3, got {m}")));
    }
    let lower = XExp::integer(2 * m as i64 - 2)?;
    if p < lower {
        return Err(Error::Domain(format!("tuple needs p >= 2m-2 = {lower}, got {p}")));
    }
    let ip = p.recip_rat()?;
    let m_i = m as i64;
    // 1/q_1 = 1/2 - 1/p; 1/q_rest = m/(2(m-1)) - 1/p.
    let inv_first = Rat::new(1, 2)?.sub(ip)?;
    let inv_rest = Rat::new(m_i, 2 * (m_i - 1))?.sub(ip)?;
    let mut tuple = vec![XExp::from_recip_rat(inv_first)?];
    tuple.resize(m as usize, XExp::from_recip_rat(inv_rest)?);
    Ok(tuple)
}
