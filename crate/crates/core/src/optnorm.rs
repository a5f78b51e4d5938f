//! Certified lower bounds on multilinear-form norms over products of lp
//! balls.
//!
//! The estimator is alternating block maximization: with all slots but one
//! frozen, the restricted problem is linear and its exact maximizer over the
//! lp ball is `dual_step`. Cycling slots yields a nondecreasing value, and the
//! returned certificate carries the maximizing vectors, so the value is a
//! lower bound of the true norm by construction. For all-sup domains the
//! maximum sits at sign vertices and is found exactly by enumeration.
//!
//! The semantics everywhere downstream is "verified or inconclusive": a lower
//! bound can prove an inequality's left side is dominated, never refute it.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exponents::{conj, Rat, XExp};
use crate::forms::{evaluate, MultilinearForm};
use crate::rng::SplitMix64;
use crate::tensor::lp_norm;

/// How a certificate's value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Method {
    #[serde(rename = "ASCENT")]
    Ascent,
    #[serde(rename = "ENUMERATION")]
    Enumeration,
    #[serde(rename = "CLOSED_FORM")]
    ClosedForm,
}

/// A certified lower bound: feasible witness vectors together with the value
/// the form attains on them.
#[derive(Debug, Clone, serde::Serialize)]
pub struct NormCertificate {
    pub value: f64,
    pub witnesses: Vec<Vec<f64>>,
    pub method: Method,
    pub converged: bool,
    pub multistarts_used: usize,
}

impl NormCertificate {
    /// Re-derives the certificate from the form: every witness must be
    /// feasible and the attained value must reproduce `value`.
    pub fn validate(&self, f: &MultilinearForm) -> Result<()> {
        for (x, p) in self.witnesses.iter().zip(f.domain_exps()) {
            let norm = lp_norm(x, *p);
            if norm > 1.0 + 1e-12 {
                return Err(Error::Domain(format!("witness leaves the l_{p} ball: {norm}")));
            }
        }
        let attained = evaluate(f, &self.witnesses)?.abs();
        if (attained - self.value).abs() > 1e-12 * self.value.max(f64::MIN_POSITIVE) {
            return Err(Error::Domain(format!(
                "certificate value {} not reproduced by witnesses ({attained})",
                self.value
            )));
        }
        Ok(())
    }
}

/// Ascent parameters. Multistarts beyond the first use seeded random starts;
/// the first start is always the normalized all-ones vector.
#[derive(Debug, Clone)]
pub struct AscentConfig {
    pub multistarts: usize,
    pub max_iters: usize,
    pub rel_tol: f64,
    pub seed: u64,
}

impl Default for AscentConfig {
    fn default() -> Self {
        Self { multistarts: 16, max_iters: 200, rel_tol: 1e-12, seed: 0 }
    }
}

impl AscentConfig {
    pub fn with_multistarts(&self, multistarts: usize) -> Self {
        Self { multistarts, ..self.clone() }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }
}

/// The exact maximizer of `<c, x>` over the unit lp ball:
/// for 1 < p < inf the dual-power rescaling, for p = inf the sign vector
/// (sign(0) = +1), for p = 1 the vertex at the first largest |c_i|.
/// A zero vector maps to e1. The attained value is the lp* norm of c.
pub fn dual_step(c: &[f64], p: XExp) -> Result<Vec<f64>> {
    if p < XExp::ONE {
        return Err(Error::Domain(format!("lp ball needs p >= 1, got {p}")));
    }
    if c.is_empty() {
        return Err(Error::DimMismatch("empty coefficient vector".into()));
    }
    let sup = c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if sup == 0.0 {
        let mut e1 = vec![0.0; c.len()];
        e1[0] = 1.0;
        return Ok(e1);
    }
    if p.is_inf() {
        return Ok(c.iter().map(|&ci| if ci < 0.0 { -1.0 } else { 1.0 }).collect());
    }
    if p == XExp::ONE {
        let k = c
            .iter()
            .enumerate()
            .max_by(|(i, a), (j, b)| {
                // strict comparison keeps the lowest index on ties
                a.abs().partial_cmp(&b.abs()).unwrap().then(j.cmp(i))
            })
            .map(|(i, _)| i)
            .unwrap();
        let mut x = vec![0.0; c.len()];
        x[k] = c[k].signum();
        return Ok(x);
    }
    // 1 < p < inf: x_i = sign(c_i) |c_i|^(p*-1) / ||c||_{p*}^(p*-1),
    // computed on c/sup so large exponents cannot overflow.
    let pstar = conj(p)?.to_f64();
    let exp = pstar - 1.0;
    let scaled: Vec<f64> = c.iter().map(|ci| (ci.abs() / sup).powf(exp)).collect();
    let norm_pow = {
        // ||c/sup||_{p*}^{p*} = sum (|c_i|/sup)^{p*}
        let sum: f64 = c.iter().map(|ci| (ci.abs() / sup).powf(pstar)).sum();
        sum.powf(exp / pstar)
    };
    Ok(c.iter()
        .zip(&scaled)
        .map(|(ci, s)| if *ci < 0.0 { -s / norm_pow } else { s / norm_pow })
        .collect())
}

fn normalize_in(x: &mut [f64], p: XExp) {
    let norm = lp_norm(x, p);
    if norm == 0.0 {
        x[0] = 1.0;
        return;
    }
    for xi in x.iter_mut() {
        *xi /= norm;
    }
}

fn all_ones_start(f: &MultilinearForm) -> Vec<Vec<f64>> {
    f.dims()
        .iter()
        .zip(f.domain_exps())
        .map(|(&n, &p)| {
            let mut x = vec![1.0; n];
            normalize_in(&mut x, p);
            x
        })
        .collect()
}

fn random_start(f: &MultilinearForm, seed: u64, index: u64) -> Vec<Vec<f64>> {
    let mut rng = SplitMix64::fork(seed, index);
    f.dims()
        .iter()
        .zip(f.domain_exps())
        .map(|(&n, &p)| {
            let mut x: Vec<f64> = (0..n).map(|_| rng.next_gaussian()).collect();
            // Uniform on the l2 sphere, then renormalized into the slot ball.
            normalize_in(&mut x, XExp::TWO);
            normalize_in(&mut x, p);
            x
        })
        .collect()
}

struct AscentRun {
    value: f64,
    witnesses: Vec<Vec<f64>>,
    converged: bool,
}

fn ascend(f: &MultilinearForm, mut xs: Vec<Vec<f64>>, cfg: &AscentConfig) -> AscentRun {
    let m = f.order();
    let mut prev = evaluate(f, &xs).expect("validated form").abs();
    let mut converged = false;
    for _ in 0..cfg.max_iters {
        for t in 0..m {
            let c = f.contract_except(t, &xs).expect("validated form");
            if c.iter().all(|&ci| ci == 0.0) {
                continue; // keep the previous iterate
            }
            xs[t] = dual_step(&c, f.domain_exps()[t]).expect("validated exponent");
        }
        let value = evaluate(f, &xs).expect("validated form").abs();
        if value - prev <= cfg.rel_tol * value.max(f64::MIN_POSITIVE) {
            prev = value;
            converged = true;
            break;
        }
        prev = value;
    }
    AscentRun { value: prev, witnesses: xs, converged }
}

/// Best certified lower bound over `cfg.multistarts` ascent runs. The value
/// is nondecreasing in the number of multistarts for a fixed seed, and the
/// whole procedure is deterministic in `cfg`; starts run in parallel but are
/// reduced in index order.
pub fn estimate_norm(f: &MultilinearForm, cfg: &AscentConfig) -> NormCertificate {
    let starts = cfg.multistarts.max(1);
    let runs: Vec<AscentRun> = (0..starts)
        .into_par_iter()
        .map(|k| {
            let xs = if k == 0 {
                all_ones_start(f)
            } else {
                random_start(f, cfg.seed, k as u64)
            };
            ascend(f, xs, cfg)
        })
        .collect();
    let mut best = 0usize;
    for (k, run) in runs.iter().enumerate() {
        if run.value > runs[best].value {
            best = k;
        }
    }
    let AscentRun { witnesses, converged, .. } = &runs[best];
    let value = evaluate(f, witnesses).expect("validated form").abs();
    NormCertificate {
        value,
        witnesses: witnesses.clone(),
        method: Method::Ascent,
        converged: *converged,
        multistarts_used: starts,
    }
}

/// Exponent of the sign-pattern count enumerated by `exact_norm_linf`.
const ENUM_GUARD_BITS: usize = 24;

/// Exact norm for all-sup domains: the maximum over sign vertices of the
/// first m-1 slots, with the last slot resolved by an l1 sum. Errors with
/// `TooLarge` beyond 2^24 sign patterns.
pub fn exact_norm_linf(f: &MultilinearForm) -> Result<NormCertificate> {
    if f.domain_exps().iter().any(|p| !p.is_inf()) {
        return Err(Error::Domain("exact enumeration needs all domain exponents infinite".into()));
    }
    let m = f.order();
    let lead_bits: usize = f.dims()[..m - 1].iter().sum();
    if lead_bits > ENUM_GUARD_BITS {
        return Err(Error::TooLarge(format!(
            "2^{lead_bits} sign patterns exceed the 2^{ENUM_GUARD_BITS} guard"
        )));
    }
    let dims = f.dims().to_vec();
    let mut best_value = -1.0f64;
    let mut best_signs: Vec<Vec<f64>> = Vec::new();
    let mut best_tail: Vec<f64> = Vec::new();
    for pattern in 0u64..(1u64 << lead_bits) {
        // Decode one sign vector per leading slot from the pattern bits.
        let mut bit = 0;
        let signs: Vec<Vec<f64>> = dims[..m - 1]
            .iter()
            .map(|&n| {
                (0..n)
                    .map(|_| {
                        let s = if pattern >> bit & 1 == 0 { 1.0 } else { -1.0 };
                        bit += 1;
                        s
                    })
                    .collect()
            })
            .collect();
        let mut values = f.coeffs().data().to_vec();
        for (t, s) in signs.iter().enumerate() {
            let n = dims[t];
            let stride = values.len() / n;
            let mut out = vec![0.0; stride];
            for (i, si) in s.iter().enumerate() {
                for (o, v) in out.iter_mut().zip(&values[i * stride..(i + 1) * stride]) {
                    *o += si * v;
                }
            }
            values = out;
        }
        let value: f64 = values.iter().map(|v| v.abs()).sum();
        if value > best_value {
            best_value = value;
            best_signs = signs;
            best_tail = values;
        }
    }
    let mut witnesses = best_signs;
    witnesses.push(best_tail.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect());
    let value = evaluate(f, &witnesses)?.abs();
    Ok(NormCertificate {
        value,
        witnesses,
        method: Method::Enumeration,
        converged: true,
        multistarts_used: 0,
    })
}

/// Weak lp norm of a finite sequence in l_s^n: the supremum over the dual
/// ball of the lp norm of the evaluations. Computed as the operator norm of
/// z -> (<z, x_j>)_j from l_{s*} to l_p via the same ascent, except that the
/// standard basis is recognized and answered in closed form,
/// n^max(0, 1/p - 1/s*).
pub fn weak_norm(
    xs: &[Vec<f64>],
    s: XExp,
    p: XExp,
    cfg: &AscentConfig,
) -> Result<NormCertificate> {
    if s < XExp::ONE || p < XExp::ONE {
        return Err(Error::Domain(format!("weak norm needs s, p >= 1, got s={s}, p={p}")));
    }
    let count = xs.len();
    if count == 0 {
        return Err(Error::DimMismatch("empty vector sequence".into()));
    }
    let n = xs[0].len();
    if n == 0 || xs.iter().any(|x| x.len() != n) {
        return Err(Error::DimMismatch("sequence vectors must share a positive length".into()));
    }
    let s_star = conj(s)?;
    let p_star = conj(p)?;
    // Lifted bilinear form B(z, w) = sum_j w_j <z, x_j> on l_{s*} x l_{p*}.
    let mut coeffs = vec![0.0; n * count];
    for (j, x) in xs.iter().enumerate() {
        for (i, v) in x.iter().enumerate() {
            coeffs[i * count + j] = *v;
        }
    }
    let lifted = MultilinearForm::new(
        crate::tensor::DenseTensor::new(vec![n, count], coeffs)?,
        vec![s_star, p_star],
    )?;

    let is_standard_basis = count == n
        && xs.iter().enumerate().all(|(j, x)| {
            x.iter().enumerate().all(|(i, &v)| v == if i == j { 1.0 } else { 0.0 })
        });
    if is_standard_basis {
        let gap = p.recip_rat()?.sub(s_star.recip_rat()?)?;
        let exponent = gap.max(Rat::ZERO);
        let value = (n as f64).powf(exponent.to_f64());
        let z = if exponent.is_zero() {
            let mut e1 = vec![0.0; n];
            e1[0] = 1.0;
            e1
        } else {
            vec![(n as f64).powf(-s_star.recip_rat()?.to_f64()); n]
        };
        let v: Vec<f64> = xs.iter().map(|x| x.iter().zip(&z).map(|(a, b)| a * b).sum()).collect();
        let w = dual_step(&v, p_star)?;
        let cert = NormCertificate {
            value,
            witnesses: vec![z, w],
            method: Method::ClosedForm,
            converged: true,
            multistarts_used: 0,
        };
        cert.validate(&lifted)?;
        return Ok(cert);
    }
    Ok(estimate_norm(&lifted, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::xexp;
    use crate::forms::{witness, WitnessKind};
    use crate::tensor::DenseTensor;

    fn form(n: usize, data: Vec<f64>, p: &str, q: &str) -> MultilinearForm {
        MultilinearForm::new(DenseTensor::matrix(n, data).unwrap(), vec![xexp(p), xexp(q)])
            .unwrap()
    }

    #[test]
    fn dual_step_golden() {
        assert_eq!(dual_step(&[3.0, 4.0], xexp("2")).unwrap(), vec![0.6, 0.8]);
        assert_eq!(dual_step(&[3.0, 4.0], XExp::INF).unwrap(), vec![1.0, 1.0]);
        assert_eq!(dual_step(&[3.0, 4.0], xexp("1")).unwrap(), vec![0.0, 1.0]);
        assert_eq!(dual_step(&[0.0, 0.0], xexp("3")).unwrap(), vec![1.0, 0.0]);
        assert_eq!(dual_step(&[-2.0, 0.0], XExp::INF).unwrap(), vec![-1.0, 1.0]);
        // l1 ties resolve at the lowest index.
        assert_eq!(dual_step(&[-5.0, 5.0], xexp("1")).unwrap(), vec![-1.0, 0.0]);
        assert!(dual_step(&[1.0], xexp("1/2")).is_err());
    }

    #[test]
    fn dual_step_attains_dual_norm() {
        let mut rng = SplitMix64::new(31);
        for p in ["1", "4/3", "2", "4", "inf"] {
            let p = xexp(p);
            let pstar = conj(p).unwrap();
            for _ in 0..50 {
                let c: Vec<f64> = (0..7).map(|_| rng.next_gaussian()).collect();
                let x = dual_step(&c, p).unwrap();
                assert!(lp_norm(&x, p) <= 1.0 + 1e-12);
                let attained: f64 = c.iter().zip(&x).map(|(a, b)| a * b).sum();
                let want = lp_norm(&c, pstar);
                assert!((attained - want).abs() <= 1e-12 * want, "p={p}: {attained} vs {want}");
            }
        }
    }

    #[test]
    fn estimate_norm_golden() {
        // ||U_2|| on l4 x l4 is 2^(3/4).
        let u2 = witness(WitnessKind::U, 2, 2, 0)
            .unwrap()
            .with_domain_exps(vec![xexp("4"), xexp("4")])
            .unwrap();
        let cert = estimate_norm(&u2, &AscentConfig::default());
        assert!((cert.value - 2.0f64.powf(0.75)).abs() < 1e-6 * cert.value);
        cert.validate(&u2).unwrap();
        assert!(cert.converged);

        // A 1x1 form returns its single coefficient.
        let one = MultilinearForm::new(
            DenseTensor::new(vec![1, 1], vec![-7.5]).unwrap(),
            vec![xexp("3"), xexp("2")],
        )
        .unwrap();
        let cert = estimate_norm(&one, &AscentConfig::default());
        assert!((cert.value - 7.5).abs() < 1e-12);

        // Oracle: brute force over all 16 sign pairs.
        let h = form(2, vec![1.0, 1.0, 1.0, -1.0], "inf", "inf");
        let mut brute: f64 = 0.0;
        for signs in 0..16u32 {
            let x = [sgn(signs & 1), sgn(signs & 2)];
            let y = [sgn(signs & 4), sgn(signs & 8)];
            let v = x[0] * (y[0] + y[1]) + x[1] * (y[0] - y[1]);
            brute = brute.max(v.abs());
        }
        assert_eq!(brute, 2.0);
        let cert = estimate_norm(&h, &AscentConfig::default());
        assert!((cert.value - brute).abs() < 1e-12);
        cert.validate(&h).unwrap();
        assert_eq!(exact_norm_linf(&h).unwrap().value, brute);
    }

    fn sgn(bit: u32) -> f64 {
        if bit == 0 {
            1.0
        } else {
            -1.0
        }
    }

    #[test]
    fn parallel_multistarts_match_sequential() {
        let f = witness(WitnessKind::Gaussian, 2, 10, 4)
            .unwrap()
            .with_domain_exps(vec![xexp("3"), xexp("7/2")])
            .unwrap();
        let cfg = AscentConfig { multistarts: 12, seed: 2, ..Default::default() };
        let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let many = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = single.install(|| estimate_norm(&f, &cfg));
        let b = many.install(|| estimate_norm(&f, &cfg));
        assert_eq!(a.value, b.value);
        assert_eq!(a.witnesses, b.witnesses);
    }

    #[test]
    fn scale_equivariance_power_of_two() {
        let f = witness(WitnessKind::Gaussian, 2, 6, 42)
            .unwrap()
            .with_domain_exps(vec![xexp("4"), xexp("8/3")])
            .unwrap();
        let cfg = AscentConfig::default();
        let base = estimate_norm(&f, &cfg).value;
        for lambda in [2.0, 4.0, 0.5] {
            let scaled = estimate_norm(&f.scale(lambda).unwrap(), &cfg).value;
            assert_eq!(scaled, lambda * base, "lambda={lambda}");
        }
    }

    #[test]
    fn multistart_monotonicity() {
        let f = witness(WitnessKind::Gaussian, 2, 8, 7)
            .unwrap()
            .with_domain_exps(vec![xexp("3"), xexp("5")])
            .unwrap();
        let cfg = AscentConfig { seed: 11, ..Default::default() };
        let mut prev = 0.0;
        for k in [1, 2, 4, 8, 16] {
            let v = estimate_norm(&f, &cfg.with_multistarts(k)).value;
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn enumeration_golden() {
        let h = form(2, vec![1.0, 1.0, 1.0, -1.0], "inf", "inf");
        let cert = exact_norm_linf(&h).unwrap();
        assert_eq!(cert.value, 2.0);
        cert.validate(&h).unwrap();

        let ones = form(2, vec![1.0; 4], "inf", "inf");
        assert_eq!(exact_norm_linf(&ones).unwrap().value, 4.0);

        // Guard and domain errors.
        let big = witness(WitnessKind::Ksz, 2, 30, 0).unwrap();
        assert!(matches!(exact_norm_linf(&big), Err(Error::TooLarge(_))));
        let not_inf = form(2, vec![1.0; 4], "2", "inf");
        assert!(matches!(exact_norm_linf(&not_inf), Err(Error::Domain(_))));
    }

    #[test]
    fn ascent_is_sound_against_enumeration() {
        let cfg = AscentConfig { multistarts: 8, ..Default::default() };
        for seed in 0..40 {
            let f = witness(WitnessKind::Gaussian, 2, 6, seed).unwrap();
            let exact = exact_norm_linf(&f).unwrap().value;
            let est = estimate_norm(&f, &cfg.with_seed(seed)).value;
            assert!(est <= exact + 1e-12 * exact, "seed {seed}: {est} > {exact}");
        }
    }

    #[test]
    fn trilinear_enumeration_agrees_with_ascent() {
        for seed in 0..5 {
            let f = witness(WitnessKind::Ksz, 3, 4, seed).unwrap();
            let exact = exact_norm_linf(&f).unwrap();
            exact.validate(&f).unwrap();
            let est = estimate_norm(&f, &AscentConfig { multistarts: 64, seed, ..Default::default() });
            assert!(est.value <= exact.value * (1.0 + 1e-12));
            assert!(est.value >= 0.9 * exact.value, "seed {seed}");
        }
    }

    #[test]
    fn weak_norm_closed_forms() {
        let cfg = AscentConfig::default();
        let basis: Vec<Vec<f64>> =
            (0..6).map(|j| (0..6).map(|i| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        // Basis of l4^n at p = 4/3: exponent max(0, 3/4 - 3/4) = 0.
        let c = weak_norm(&basis, xexp("4"), xexp("4/3"), &cfg).unwrap();
        assert_eq!(c.value, 1.0);
        assert_eq!(c.method, Method::ClosedForm);
        // Basis of l2^n at p = 1: n^(1/2).
        let c = weak_norm(&basis, xexp("2"), xexp("1"), &cfg).unwrap();
        assert!((c.value - 6.0f64.sqrt()).abs() < 1e-12);

        // A single vector's weak norm is its l_s norm, via the ascent route.
        let x = vec![3.0, -4.0, 12.0];
        let c = weak_norm(std::slice::from_ref(&x), xexp("2"), xexp("7"), &cfg).unwrap();
        assert!((c.value - 13.0).abs() < 1e-9, "{}", c.value);
        assert_eq!(c.method, Method::Ascent);
    }
}
