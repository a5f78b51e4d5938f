//! Quantitative experiments: mixed-norm quotients of witness families,
//! log-log slope fits against the closed-form blow-up exponents, random-sign
//! norm scaling, and verified-or-inconclusive inequality sweeps.
//!
//! Norm denominators are certified lower bounds, so every reported quotient
//! is an upper estimate and a sweep can verify an inequality but never refute
//! one. Random trials are aggregated by medians, and every sweep is a pure
//! function of its seed.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponents::{conj, region_label, Rat, RegionLabel, XExp};
use crate::forms::{evaluate, witness, MultilinearForm, WitnessKind};
use crate::optnorm::{estimate_norm, exact_norm_linf, AscentConfig, NormCertificate};
use crate::rng::SplitMix64;
use crate::tensor::{lp_norm, mixed_norm, DenseTensor, MixedNormSpec};

/// Least-squares fit of ln(value) against ln(n): the empirical growth
/// exponent of a series.
#[derive(Debug, Clone, Serialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: Vec<RatePoint>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RatePoint {
    pub n: usize,
    pub value: f64,
}

/// Ordinary least squares on (ln n, ln value). Exact power-law data recovers
/// its exponent to floating-point accuracy.
pub fn fit_rate(points: &[(usize, f64)]) -> Result<RateFit> {
    if points.len() < 3 {
        return Err(Error::Domain(format!("rate fit needs >= 3 points, got {}", points.len())));
    }
    for pair in points.windows(2) {
        if pair[1].0 <= pair[0].0 {
            return Err(Error::Domain("rate fit needs strictly increasing n".into()));
        }
    }
    if points.iter().any(|(_, v)| *v <= 0.0 || !v.is_finite()) {
        return Err(Error::Domain("rate fit needs positive finite values".into()));
    }
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|(n, _)| (*n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, v)| v.ln()).collect();
    let x_mean = xs.iter().sum::<f64>() / k;
    let y_mean = ys.iter().sum::<f64>() / k;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - x_mean) * (x - x_mean);
        sxy += (x - x_mean) * (y - y_mean);
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        let r = y - (intercept + slope * x);
        ss_res += r * r;
        ss_tot += (y - y_mean) * (y - y_mean);
    }
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(RateFit {
        slope,
        intercept,
        r_squared,
        points: points.iter().map(|&(n, value)| RatePoint { n, value }).collect(),
    })
}

/// One aggregated sweep row: the median over trials plus its spread.
#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub value: f64,
    pub trials: usize,
    pub lo: f64,
    pub hi: f64,
}

/// A completed sweep: rows by n, convertible to CSV or a rate fit.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SweepSeries {
    pub rows: Vec<SweepRow>,
}

impl SweepSeries {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,value,trials,lo,hi\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{},{}\n", r.n, r.value, r.trials, r.lo, r.hi));
        }
        out
    }

    pub fn fit(&self) -> Result<RateFit> {
        let points: Vec<(usize, f64)> = self.rows.iter().map(|r| (r.n, r.value)).collect();
        fit_rate(&points)
    }
}

fn median(sorted: &mut [f64]) -> f64 {
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let k = sorted.len();
    if k % 2 == 1 {
        sorted[k / 2]
    } else {
        0.5 * (sorted[k / 2 - 1] + sorted[k / 2])
    }
}

fn aggregate(n: usize, mut values: Vec<f64>) -> SweepRow {
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let trials = values.len();
    SweepRow { n, value: median(&mut values), trials, lo, hi }
}

/// Per-instance seed, stable across sweep shapes.
fn instance_seed(seed: u64, n: usize, trial: usize) -> u64 {
    SplitMix64::fork(seed, ((n as u64) << 32) | trial as u64).next_u64()
}

/// Certified norm lower bound: exact enumeration when every slot is a sup
/// within the guard, the ascent estimate otherwise.
fn norm_lower_bound(f: &MultilinearForm, cfg: &AscentConfig) -> NormCertificate {
    if f.domain_exps().iter().all(|p| p.is_inf()) {
        if let Ok(cert) = exact_norm_linf(f) {
            return cert;
        }
    }
    estimate_norm(f, cfg)
}

/// The anisotropic quotient: the mixed norm of the coefficient array divided
/// by a certified norm lower bound. An upper estimate of the true quotient.
pub fn hl_quotient(
    f: &MultilinearForm,
    spec: &MixedNormSpec,
    cert: &NormCertificate,
) -> Result<f64> {
    if cert.value == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(mixed_norm(f.coeffs(), spec)? / cert.value)
}

/// Quotient sweep of a witness family over dimensions `ns` at the
/// non-admissible pair (r1, r2); the coefficient array is measured with the
/// spec (r2 outer, r1 inner). Closed-form norms back U and V; random kinds
/// take the median over `trials` seeded instances. The fitted slope is the
/// empirical blow-up rate to compare with `blowup_exponent`.
#[allow(clippy::too_many_arguments)]
pub fn witness_sweep_series(
    kind: WitnessKind,
    p: XExp,
    q: XExp,
    r1: XExp,
    r2: XExp,
    ns: &[usize],
    trials: usize,
    cfg: &AscentConfig,
) -> Result<SweepSeries> {
    match region_label(p, q, r1, r2) {
        Ok(RegionLabel::Admissible) => {
            return Err(Error::Domain("witness sweep needs a non-admissible pair".into()));
        }
        Ok(_) | Err(Error::Unclassified) => {}
        Err(e) => return Err(e),
    }
    if ns.is_empty() {
        return Err(Error::Domain("empty dimension list".into()));
    }
    let spec = MixedNormSpec::pair(r2, r1)?;
    let deterministic = matches!(kind, WitnessKind::U | WitnessKind::V);
    let trials = if deterministic { 1 } else { trials.max(1) };
    let jobs: Vec<(usize, usize)> =
        ns.iter().flat_map(|&n| (0..trials).map(move |t| (n, t))).collect();
    let quotients: Vec<Result<(usize, f64)>> = jobs
        .par_iter()
        .map(|&(n, t)| {
            let seed = instance_seed(cfg.seed, n, t);
            let form = witness(kind, 2, n, seed)?.with_domain_exps(vec![p, q])?;
            let lhs = mixed_norm(form.coeffs(), &spec)?;
            let norm = if deterministic {
                closed_form_norm_checked(kind, p, q, n)?
            } else {
                let inst_cfg = cfg.with_seed(seed ^ 0x51f0_3347_9d23_b6a1);
                let cert = norm_lower_bound(&form, &inst_cfg);
                if cert.value == 0.0 {
                    return Err(Error::ZeroNorm);
                }
                cert.value
            };
            Ok((n, lhs / norm))
        })
        .collect();
    let mut rows = Vec::with_capacity(ns.len());
    let mut it = quotients.into_iter();
    for &n in ns {
        let mut values = Vec::with_capacity(trials);
        for _ in 0..trials {
            let (rn, v) = it.next().expect("job list covers ns x trials")?;
            debug_assert_eq!(rn, n);
            values.push(v);
        }
        rows.push(aggregate(n, values));
    }
    Ok(SweepSeries { rows })
}

fn closed_form_norm_checked(kind: WitnessKind, p: XExp, q: XExp, n: usize) -> Result<f64> {
    let v = crate::forms::closed_form_norm(kind, p, q, n)?;
    if v == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(v)
}

/// `witness_sweep_series` followed by the rate fit.
#[allow(clippy::too_many_arguments)]
pub fn witness_sweep(
    kind: WitnessKind,
    p: XExp,
    q: XExp,
    r1: XExp,
    r2: XExp,
    ns: &[usize],
    trials: usize,
    cfg: &AscentConfig,
) -> Result<RateFit> {
    witness_sweep_series(kind, p, q, r1, r2, ns, trials, cfg)?.fit()
}

/// Norm scaling of random-sign m-linear forms on l_{p1} x ... x l_{pm}:
/// medians of certified norms per dimension. The fitted slope is expected to
/// stay below (m+1)/2 - sum 1/p_k, the upper-bound law.
pub fn ksz_norm_scaling_series(
    m: usize,
    ps: &[XExp],
    ns: &[usize],
    trials: usize,
    seed: u64,
    cfg: &AscentConfig,
) -> Result<SweepSeries> {
    if m < 2 {
        return Err(Error::Domain("random-sign scaling needs m >= 2".into()));
    }
    if ps.len() != m {
        return Err(Error::Domain(format!("{} exponents for m = {m}", ps.len())));
    }
    if ps.iter().any(|p| *p < XExp::TWO) {
        return Err(Error::Domain("slot exponents must be >= 2".into()));
    }
    if ns.is_empty() {
        return Err(Error::Domain("empty dimension list".into()));
    }
    let trials = trials.max(1);
    let jobs: Vec<(usize, usize)> =
        ns.iter().flat_map(|&n| (0..trials).map(move |t| (n, t))).collect();
    let norms: Vec<Result<f64>> = jobs
        .par_iter()
        .map(|&(n, t)| {
            let inst = instance_seed(seed, n, t);
            let form = witness(WitnessKind::Ksz, m, n, inst)?.with_domain_exps(ps.to_vec())?;
            let cert = norm_lower_bound(&form, &cfg.with_seed(inst ^ 0x9d8e_1a37_44c2_0b55));
            Ok(cert.value)
        })
        .collect();
    let mut rows = Vec::with_capacity(ns.len());
    let mut it = norms.into_iter();
    for &n in ns {
        let mut values = Vec::with_capacity(trials);
        for _ in 0..trials {
            values.push(it.next().expect("job list covers ns x trials")?);
        }
        rows.push(aggregate(n, values));
    }
    Ok(SweepSeries { rows })
}

pub fn ksz_norm_scaling(
    m: usize,
    ps: &[XExp],
    ns: &[usize],
    trials: usize,
    seed: u64,
    cfg: &AscentConfig,
) -> Result<RateFit> {
    ksz_norm_scaling_series(m, ps, ns, trials, seed, cfg)?.fit()
}

/// Status of one verified-or-inconclusive instance. A "violated" state is
/// unrepresentable: the norm side is only a lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VerifyStatus {
    #[serde(rename = "VERIFIED")]
    Verified,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyRecord {
    pub family: String,
    pub n: usize,
    pub trial: usize,
    pub lhs: f64,
    pub norm_lower_bound: f64,
    pub status: VerifyStatus,
    pub multistarts_used: usize,
}

/// Outcome of a verification sweep.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub total: usize,
    pub verified: usize,
    pub inconclusive: usize,
    /// min over verified instances of (bound - lhs)/bound; None if nothing verified.
    pub worst_margin: Option<f64>,
    pub records: Vec<VerifyRecord>,
}

impl VerificationReport {
    fn from_records(records: Vec<VerifyRecord>) -> Self {
        let verified = records.iter().filter(|r| r.status == VerifyStatus::Verified).count();
        let worst_margin = records
            .iter()
            .filter(|r| r.status == VerifyStatus::Verified)
            .map(|r| (r.norm_lower_bound - r.lhs) / r.norm_lower_bound)
            .fold(None, |acc: Option<f64>, m| Some(acc.map_or(m, |a| a.min(m))));
        Self {
            total: records.len(),
            verified,
            inconclusive: records.len() - verified,
            worst_margin,
            records,
        }
    }
}

/// Checks the coefficient-norm inequality for m-linear forms on l_p, p > 2m:
/// the flat l_{2p/(p-2m)} norm of the coefficients must not exceed the norm.
/// Each instance compares against a certified lower bound; on failure the
/// multistart budget is escalated by 4, exactly once, before the instance is
/// declared inconclusive.
pub fn verify_coefficient_norm(
    m: usize,
    p: XExp,
    ns: &[usize],
    trials: usize,
    seed: u64,
    cfg: &AscentConfig,
) -> Result<VerificationReport> {
    if m < 2 {
        return Err(Error::Domain("verification needs m >= 2".into()));
    }
    let two_m = XExp::integer(2 * m as i64)?;
    if p <= two_m {
        return Err(Error::Domain(format!("needs p > 2m = {two_m}, got {p}")));
    }
    // 1/exponent = 1/2 - m/p, positive because p > 2m.
    let flat_inv = Rat::new(1, 2)?.sub(p.recip_rat()?.mul_int(m as i64)?)?;
    let flat_exp = XExp::from_recip_rat(flat_inv)?;
    let trials = trials.max(1);
    let jobs: Vec<(WitnessKind, usize, usize)> = [WitnessKind::Gaussian, WitnessKind::Ksz]
        .into_iter()
        .flat_map(|kind| {
            ns.iter().flat_map(move |&n| (0..trials).map(move |t| (kind, n, t)))
        })
        .collect();
    let records: Vec<Result<VerifyRecord>> = jobs
        .par_iter()
        .map(|&(kind, n, t)| {
            let salt = if kind == WitnessKind::Gaussian { 0 } else { 1 << 60 };
            let inst = instance_seed(seed ^ salt, n, t);
            let form = witness(kind, m, n, inst)?.with_domain_exps(vec![p; m])?;
            let lhs = lp_norm(form.coeffs().data(), flat_exp);
            let inst_cfg = cfg.with_seed(inst ^ 0x7be6_93d2_ff10_c4e9);
            let mut cert = estimate_norm(&form, &inst_cfg);
            let mut status = VerifyStatus::Verified;
            if lhs > cert.value {
                // One escalation: quadruple the multistart budget.
                cert = estimate_norm(&form, &inst_cfg.with_multistarts(inst_cfg.multistarts * 4));
                if lhs > cert.value {
                    status = VerifyStatus::Inconclusive;
                }
            }
            Ok(VerifyRecord {
                family: kind.to_string(),
                n,
                trial: t,
                lhs,
                norm_lower_bound: cert.value,
                status,
                multistarts_used: cert.multistarts_used,
            })
        })
        .collect();
    let records = records.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::from_records(records))
}

/// Ratio sweep for the p = 2 row-sup inequality: over Gaussian forms on
/// l_2 x l_q, the largest row l_{q*} norm divided by the certified norm.
/// Boundedness of the constant shows up as a fitted slope near zero.
pub fn verify_p2_row_sup(
    q: XExp,
    ns: &[usize],
    trials: usize,
    seed: u64,
    cfg: &AscentConfig,
) -> Result<RateFit> {
    verify_p2_row_sup_series(q, ns, trials, seed, cfg)?.fit()
}

pub fn verify_p2_row_sup_series(
    q: XExp,
    ns: &[usize],
    trials: usize,
    seed: u64,
    cfg: &AscentConfig,
) -> Result<SweepSeries> {
    if q < XExp::TWO || q.is_inf() {
        return Err(Error::Domain(format!("needs q in [2, inf), got {q}")));
    }
    if ns.is_empty() {
        return Err(Error::Domain("empty dimension list".into()));
    }
    let qstar = conj(q)?;
    let trials = trials.max(1);
    let jobs: Vec<(usize, usize)> =
        ns.iter().flat_map(|&n| (0..trials).map(move |t| (n, t))).collect();
    let ratios: Vec<Result<f64>> = jobs
        .par_iter()
        .map(|&(n, t)| {
            let inst = instance_seed(seed, n, t);
            let form = witness(WitnessKind::Gaussian, 2, n, inst)?
                .with_domain_exps(vec![XExp::TWO, q])?;
            let row_sup = form
                .coeffs()
                .data()
                .chunks(n)
                .map(|row| lp_norm(row, qstar))
                .fold(0.0f64, f64::max);
            let cert = estimate_norm(&form, &cfg.with_seed(inst ^ 0x2c5a_9f01_e377_48dd));
            if cert.value == 0.0 {
                return Err(Error::ZeroNorm);
            }
            Ok(row_sup / cert.value)
        })
        .collect();
    let mut rows = Vec::with_capacity(ns.len());
    let mut it = ratios.into_iter();
    for &n in ns {
        let mut values = Vec::with_capacity(trials);
        for _ in 0..trials {
            values.push(it.next().expect("job list covers ns x trials")?);
        }
        rows.push(aggregate(n, values));
    }
    Ok(SweepSeries { rows })
}

/// The summing-inequality left side on finite sequences: evaluates the form
/// on every tuple from the per-slot sequences and takes the mixed norm of the
/// resulting value tensor.
pub fn summing_lhs(f: &MultilinearForm, qs: &[XExp], seqs: &[Vec<Vec<f64>>]) -> Result<f64> {
    let m = f.order();
    if seqs.len() != m {
        return Err(Error::DimMismatch(format!("{} sequences for an order-{m} form", seqs.len())));
    }
    if seqs.iter().any(|s| s.is_empty()) {
        return Err(Error::DimMismatch("empty sequence slot".into()));
    }
    let counts: Vec<usize> = seqs.iter().map(|s| s.len()).collect();
    let total: usize = counts.iter().product();
    let mut values = Vec::with_capacity(total);
    let mut idx = vec![0usize; m];
    let mut picks: Vec<Vec<f64>> = idx.iter().zip(seqs).map(|(&i, s)| s[i].clone()).collect();
    loop {
        values.push(evaluate(f, &picks)?);
        // Row-major odometer over the sequence indices.
        let mut t = m;
        loop {
            if t == 0 {
                break;
            }
            t -= 1;
            idx[t] += 1;
            if idx[t] < counts[t] {
                picks[t] = seqs[t][idx[t]].clone();
                break;
            }
            idx[t] = 0;
            picks[t] = seqs[t][0].clone();
        }
        if idx.iter().all(|&i| i == 0) {
            break;
        }
    }
    let tensor = DenseTensor::new(counts, values)?;
    mixed_norm(&tensor, &MixedNormSpec::new(qs.to_vec())?)
}

/// The summing quotient whose boundedness an admissible tuple asserts:
/// summing_lhs divided by (certified norm) x (product of weak norms of the
/// sequences at exponents `ws`).
pub fn verify_summing_ratio(
    f: &MultilinearForm,
    qs: &[XExp],
    ws: &[XExp],
    seqs: &[Vec<Vec<f64>>],
    cfg: &AscentConfig,
) -> Result<f64> {
    let m = f.order();
    if ws.len() != m {
        return Err(Error::DimMismatch(format!("{} weak exponents for order {m}", ws.len())));
    }
    let lhs = summing_lhs(f, qs, seqs)?;
    let mut denom = estimate_norm(f, cfg).value;
    for (k, seq) in seqs.iter().enumerate() {
        denom *= crate::optnorm::weak_norm(seq, f.domain_exps()[k], ws[k], cfg)?.value;
    }
    if denom == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(lhs / denom)
}

/// The standard basis of R^n as a vector sequence.
pub fn standard_basis(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}
