//! The admissibility classifier for anisotropic exponent pairs, the blow-up
//! region labels, and the closed-form boundary and rate formulas.
//!
//! Everything here is exact: comparisons happen in reciprocal space, where a
//! pair (a, b) is admissible iff
//!
//!   1/a <= 1 - 1/q,   1/b <= 1 - 1/p - 1/q,   1/a + 1/b <= 3/2 - (1/p + 1/q),
//!
//! and the conventions 1/inf = 0, 1/0 = inf make the formulas total on
//! [2, inf] x [2, inf].

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponents::rat::Rat;
use crate::exponents::xexp::XExp;

/// Conjugate exponent: 1/p + 1/p* = 1, with 1* = inf and inf* = 1.
pub fn conj(p: XExp) -> Result<XExp> {
    if p < XExp::ONE {
        return Err(Error::Domain(format!("conjugate needs p >= 1, got {p}")));
    }
    let ip = p.recip_rat()?;
    XExp::from_recip_rat(Rat::ONE.sub(ip)?)
}

/// Identifier of a failed admissibility constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Constraint {
    #[serde(rename = "A_LOWER")]
    ALower,
    #[serde(rename = "B_LOWER")]
    BLower,
    #[serde(rename = "SUM_CONDITION")]
    SumCondition,
    #[serde(rename = "PQ_DEGENERATE")]
    PqDegenerate,
}

/// Outcome of the admissibility check for a pair (a, b).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub admissible: bool,
    pub on_boundary: bool,
    pub failed_constraints: Vec<Constraint>,
}

fn check_pq(p: XExp, q: XExp) -> Result<()> {
    if p < XExp::TWO || q < XExp::TWO {
        return Err(Error::Domain(format!("p, q must lie in [2, inf], got p={p}, q={q}")));
    }
    Ok(())
}

fn check_positive(name: &str, x: XExp) -> Result<()> {
    if x.is_zero() {
        return Err(Error::Domain(format!("{name} must be positive")));
    }
    Ok(())
}

/// Base-e of the classifier: all three constraints in reciprocal space.
/// `a_bound_inv` is 1/q* for the direct order and 1/p* for the reversed one.
fn classify_with(a_bound_inv: Rat, p: XExp, q: XExp, a: XExp, b: XExp) -> Result<Classification> {
    let ip = p.recip_rat()?;
    let iq = q.recip_rat()?;
    let pq_sum = ip.add(iq)?;
    if pq_sum >= Rat::ONE {
        return Ok(Classification {
            admissible: false,
            on_boundary: false,
            failed_constraints: vec![Constraint::PqDegenerate],
        });
    }
    let ia = a.recip_rat()?;
    let ib = b.recip_rat()?;
    let b_bound_inv = Rat::ONE.sub(pq_sum)?;
    let sum_bound = Rat::new(3, 2)?.sub(pq_sum)?;
    let sum = ia.add(ib)?;

    let mut failed = Vec::new();
    if ia > a_bound_inv {
        failed.push(Constraint::ALower);
    }
    if ib > b_bound_inv {
        failed.push(Constraint::BLower);
    }
    if sum > sum_bound {
        failed.push(Constraint::SumCondition);
    }
    let admissible = failed.is_empty();
    let on_boundary =
        admissible && (ia == a_bound_inv || ib == b_bound_inv || sum == sum_bound);
    Ok(Classification { admissible, on_boundary, failed_constraints: failed })
}

/// Classifies (a, b) for the inner-a, outer-b summation order:
/// admissible iff a >= q/(q-1), b >= pq/(pq-p-q), and
/// 1/a + 1/b <= 3/2 - (1/p + 1/q), all exact.
pub fn hl_admissible(p: XExp, q: XExp, a: XExp, b: XExp) -> Result<Classification> {
    check_pq(p, q)?;
    check_positive("a", a)?;
    check_positive("b", b)?;
    let iq = q.recip_rat()?;
    classify_with(Rat::ONE.sub(iq)?, p, q, a, b)
}

/// The reversed summation order (sums over j outside): by symmetry the a-bound
/// becomes a >= p/(p-1). Agrees with `hl_admissible(q, p, a, b)` everywhere.
pub fn hl_admissible_reversed(p: XExp, q: XExp, a: XExp, b: XExp) -> Result<Classification> {
    check_pq(p, q)?;
    check_positive("a", a)?;
    check_positive("b", b)?;
    let ip = p.recip_rat()?;
    classify_with(Rat::ONE.sub(ip)?, p, q, a, b)
}

/// Label of a point in the (r1, r2) exponent plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegionLabel {
    #[serde(rename = "ADMISSIBLE")]
    Admissible,
    R1,
    R2,
    R3,
    R4,
    #[serde(rename = "P2_FAIL")]
    P2Fail,
    #[serde(rename = "PQ_DEGENERATE")]
    PqDegenerate,
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RegionLabel::Admissible => "ADMISSIBLE",
            RegionLabel::R1 => "R1",
            RegionLabel::R2 => "R2",
            RegionLabel::R3 => "R3",
            RegionLabel::R4 => "R4",
            RegionLabel::P2Fail => "P2_FAIL",
            RegionLabel::PqDegenerate => "PQ_DEGENERATE",
        };
        write!(f, "{s}")
    }
}

/// Places a non-admissible pair into one of the blow-up regions R1-R4,
/// or P2_FAIL when p = 2, or PQ_DEGENERATE when 1/p + 1/q >= 1.
/// Pairs in the uncovered sliver (r1 < q* with r2 exactly 2p/(p-2)) are a
/// reported `Unclassified` error rather than a guess.
pub fn region_label(p: XExp, q: XExp, r1: XExp, r2: XExp) -> Result<RegionLabel> {
    check_pq(p, q)?;
    if r1 < XExp::ONE || r2 < XExp::ONE {
        return Err(Error::Domain(format!("r1, r2 must be >= 1, got {r1}, {r2}")));
    }
    let cls = hl_admissible(p, q, r1, r2)?;
    if cls.admissible {
        return Ok(RegionLabel::Admissible);
    }
    if cls.failed_constraints == [Constraint::PqDegenerate] {
        return Ok(RegionLabel::PqDegenerate);
    }
    if p == XExp::TWO {
        return Ok(RegionLabel::P2Fail);
    }
    let ip = p.recip_rat()?;
    let iq = q.recip_rat()?;
    let ir1 = r1.recip_rat()?;
    let ir2 = r2.recip_rat()?;
    let qstar_inv = Rat::ONE.sub(iq)?; // 1/q*
    let half_line_inv = Rat::new(1, 2)?.sub(ip)?; // 1/(2p/(p-2))
    let b_bound_inv = Rat::ONE.sub(ip.add(iq)?)?; // 1/(pq/(pq-p-q))
    let sum_bound = Rat::new(3, 2)?.sub(ip.add(iq)?)?;
    let half = Rat::new(1, 2)?;

    if ir1 >= half && ir1 <= qstar_inv && ir1.add(ir2)? > sum_bound {
        Ok(RegionLabel::R1)
    } else if ir1 > qstar_inv && ir2 > half_line_inv {
        Ok(RegionLabel::R2)
    } else if ir1 > qstar_inv && ir2 < half_line_inv {
        Ok(RegionLabel::R3)
    } else if ir1 < half && ir2 > b_bound_inv {
        Ok(RegionLabel::R4)
    } else {
        Err(Error::Unclassified)
    }
}

/// The sharp dimension blow-up exponent for a non-admissible pair:
/// the quotient over norm-one forms grows like n to this power.
pub fn blowup_exponent(p: XExp, q: XExp, r1: XExp, r2: XExp) -> Result<XExp> {
    let label = region_label(p, q, r1, r2).map_err(|e| match e {
        Error::Unclassified => {
            Error::Domain("no blow-up formula for an unclassified pair".into())
        }
        other => other,
    })?;
    let ip = p.recip_rat()?;
    let iq = q.recip_rat()?;
    let ir1 = r1.recip_rat()?;
    let ir2 = r2.recip_rat()?;
    let rate = match label {
        RegionLabel::Admissible | RegionLabel::PqDegenerate => {
            return Err(Error::Domain(format!(
                "blow-up exponent undefined for label {label}"
            )));
        }
        // 1/r1 + 1/r2 - (3/2 - (1/p + 1/q))
        RegionLabel::R1 | RegionLabel::R2 => {
            ir1.add(ir2)?.sub(Rat::new(3, 2)?.sub(ip.add(iq)?)?)?
        }
        // 1/r1 - 1/q*
        RegionLabel::R3 => ir1.sub(Rat::ONE.sub(iq)?)?,
        // 1/r2 - (pq-p-q)/pq
        RegionLabel::R4 => ir2.sub(Rat::ONE.sub(ip.add(iq)?)?)?,
        // For r1 <= 2 the splitting rate 1/r1 + 1/r2 - 1/q* is sharp; for
        // r1 > 2 only the b lower bound can fail and the sharp rate is the
        // diagonal one, 1/r2 - (1/2 - 1/q).
        RegionLabel::P2Fail => {
            if ir1 >= Rat::new(1, 2)? {
                ir1.add(ir2)?.sub(Rat::ONE.sub(iq)?)?
            } else {
                ir2.sub(Rat::ONE.sub(ip.add(iq)?)?)?
            }
        }
    };
    debug_assert!(!rate.is_negative() && !rate.is_zero());
    XExp::from_rat(rate)
}

/// Blow-up exponents (t1, t2) in the rectangular regime 1/p + 1/q >= 1:
/// the quotient grows like n1^t1 * n2^t2 with t1 = 1/r2 and
/// t2 = 1/r1 - 1/max(r1, q*).
pub fn blowup_exponents_rect(q: XExp, r1: XExp, r2: XExp) -> Result<(XExp, XExp)> {
    if q <= XExp::ONE {
        return Err(Error::Domain(format!("rectangular rates need q > 1, got {q}")));
    }
    if r1 < XExp::ONE || r2 < XExp::ONE {
        return Err(Error::Domain(format!("r1, r2 must be >= 1, got {r1}, {r2}")));
    }
    let ir1 = r1.recip_rat()?;
    let ir2 = r2.recip_rat()?;
    let qstar_inv = Rat::ONE.sub(q.recip_rat()?)?;
    // 1/max(r1, q*) = min(1/r1, 1/q*)
    let t2 = ir1.sub(ir1.min(qstar_inv))?;
    Ok((XExp::from_rat(ir2)?, XExp::from_rat(t2)?))
}

/// The smallest admissible b for a given a >= q*:
/// max(pq/(pq-p-q), 1/(3/2 - 1/p - 1/q - 1/a)), which is inf exactly when
/// the sum term vanishes (p = 2 with a = q*).
pub fn boundary_b(p: XExp, q: XExp, a: XExp) -> Result<XExp> {
    check_pq(p, q)?;
    let ip = p.recip_rat()?;
    let iq = q.recip_rat()?;
    if ip.add(iq)? >= Rat::ONE {
        return Err(Error::Domain("boundary requires 1/p + 1/q < 1".into()));
    }
    let ia = a.recip_rat()?;
    let qstar_inv = Rat::ONE.sub(iq)?;
    if ia > qstar_inv {
        return Err(Error::Domain(format!("a must be at least q* = {}", conj(q)?)));
    }
    let sum_term = Rat::new(3, 2)?.sub(ip.add(iq)?)?.sub(ia)?;
    let b_bound_inv = Rat::ONE.sub(ip.add(iq)?)?;
    // 1/b = min(1/(pq/(pq-p-q)), sum_term); nonpositive sum_term means b = inf.
    XExp::from_recip_rat(b_bound_inv.min(sum_term))
}
