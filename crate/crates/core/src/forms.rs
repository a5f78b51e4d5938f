//! Multilinear forms on products of finite lp balls: evaluation by successive
//! contraction, the rank-one row and diagonal witness families with their
//! closed-form norms, and seeded random-sign and Gaussian generators.

use std::fmt;

use crate::error::{Error, Result};
use crate::exponents::{Rat, XExp};
use crate::rng::SplitMix64;
use crate::tensor::{DenseTensor, TensorFile};

/// A scalar-valued m-linear form: its coefficient tensor, entry (i1, ..., im)
/// being the value on the basis tuple, plus the lp exponent of each slot.
#[derive(Debug, Clone, PartialEq)]
pub struct MultilinearForm {
    coeffs: DenseTensor,
    domain_exps: Vec<XExp>,
}

impl MultilinearForm {
    pub fn new(coeffs: DenseTensor, domain_exps: Vec<XExp>) -> Result<Self> {
        if domain_exps.len() != coeffs.order() {
            return Err(Error::DimMismatch(format!(
                "{} domain exponents for an order-{} tensor",
                domain_exps.len(),
                coeffs.order()
            )));
        }
        for p in &domain_exps {
            if *p < XExp::ONE {
                return Err(Error::Domain(format!("domain exponent {p} below 1")));
            }
        }
        Ok(Self { coeffs, domain_exps })
    }

    pub fn coeffs(&self) -> &DenseTensor {
        &self.coeffs
    }

    pub fn domain_exps(&self) -> &[XExp] {
        &self.domain_exps
    }

    pub fn order(&self) -> usize {
        self.coeffs.order()
    }

    pub fn dims(&self) -> &[usize] {
        self.coeffs.dims()
    }

    /// Same coefficients on different lp balls.
    pub fn with_domain_exps(&self, domain_exps: Vec<XExp>) -> Result<Self> {
        Self::new(self.coeffs.clone(), domain_exps)
    }

    pub fn scale(&self, factor: f64) -> Result<Self> {
        Self::new(self.coeffs.scale(factor)?, self.domain_exps.clone())
    }

    /// Contracts every slot except `keep`, returning the coefficient vector
    /// of the restricted linear functional in that slot.
    pub fn contract_except(&self, keep: usize, xs: &[Vec<f64>]) -> Result<Vec<f64>> {
        self.check_args(xs)?;
        if keep >= self.order() {
            return Err(Error::DimMismatch(format!("slot {keep} of {}", self.order())));
        }
        // Contract trailing axes down to `keep`, then leading axes.
        let mut values = self.coeffs.data().to_vec();
        let mut live_dims: Vec<usize> = self.dims().to_vec();
        for t in (keep + 1..self.order()).rev() {
            values = contract_last(&values, &xs[t]);
            live_dims.pop();
        }
        for t in 0..keep {
            values = contract_first(&values, &xs[t], live_dims[t]);
        }
        Ok(values)
    }

    fn check_args(&self, xs: &[Vec<f64>]) -> Result<()> {
        if xs.len() != self.order() {
            return Err(Error::DimMismatch(format!(
                "{} argument vectors for an order-{} form",
                xs.len(),
                self.order()
            )));
        }
        for (t, (x, n)) in xs.iter().zip(self.dims()).enumerate() {
            if x.len() != *n {
                return Err(Error::DimMismatch(format!(
                    "slot {t}: vector length {} vs dimension {n}",
                    x.len()
                )));
            }
        }
        Ok(())
    }
}

/// Sum over the last axis against `x` (chunk dot products).
fn contract_last(values: &[f64], x: &[f64]) -> Vec<f64> {
    values
        .chunks(x.len())
        .map(|chunk| chunk.iter().zip(x).map(|(c, xi)| c * xi).sum())
        .collect()
}

/// Sum over the first axis (length `n`) against `x`.
fn contract_first(values: &[f64], x: &[f64], n: usize) -> Vec<f64> {
    let stride = values.len() / n;
    let mut out = vec![0.0; stride];
    for (i, xi) in x.iter().enumerate() {
        for (o, v) in out.iter_mut().zip(&values[i * stride..(i + 1) * stride]) {
            *o += xi * v;
        }
    }
    out
}

/// Evaluates the form by contracting one axis at a time, innermost first.
pub fn evaluate(f: &MultilinearForm, xs: &[Vec<f64>]) -> Result<f64> {
    f.check_args(xs)?;
    let mut values = f.coeffs.data().to_vec();
    for x in xs.iter().rev() {
        values = contract_last(&values, x);
    }
    debug_assert_eq!(values.len(), 1);
    Ok(values[0])
}

/// The witness families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    /// Rank-one row form: coefficient 1 exactly when the first index is 1.
    U,
    /// Diagonal form: the identity coefficient matrix.
    V,
    /// Independent uniform +-1 coefficients (Kahane-Salem-Zygmund style).
    Ksz,
    /// Independent standard normal coefficients.
    Gaussian,
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            WitnessKind::U => "U",
            WitnessKind::V => "V",
            WitnessKind::Ksz => "KSZ",
            WitnessKind::Gaussian => "GAUSSIAN",
        };
        write!(f, "{s}")
    }
}

/// Builds the n-dimensional witness of the given kind and order, with every
/// slot on l_inf; re-tag with `with_domain_exps` to move to other balls.
/// Random kinds are a pure function of (kind, m, n, seed).
pub fn witness(kind: WitnessKind, m: usize, n: usize, seed: u64) -> Result<MultilinearForm> {
    if n == 0 {
        return Err(Error::Domain("witness dimension must be >= 1".into()));
    }
    let dims = vec![n; m];
    let tensor = match kind {
        WitnessKind::U => {
            if m != 2 {
                return Err(Error::Domain("the row witness U is bilinear".into()));
            }
            let mut data = vec![0.0; n * n];
            data[..n].fill(1.0);
            DenseTensor::new(dims, data)?
        }
        WitnessKind::V => {
            if m != 2 {
                return Err(Error::Domain("the diagonal witness V is bilinear".into()));
            }
            let mut t = DenseTensor::zeros(dims)?;
            for i in 0..n {
                t.set(&[i, i], 1.0);
            }
            t
        }
        WitnessKind::Ksz => {
            if m < 2 {
                return Err(Error::Domain("random witnesses need m >= 2".into()));
            }
            let mut rng = SplitMix64::new(seed);
            let len = dims.iter().product();
            DenseTensor::new(dims, (0..len).map(|_| rng.next_sign()).collect())?
        }
        WitnessKind::Gaussian => {
            if m < 2 {
                return Err(Error::Domain("random witnesses need m >= 2".into()));
            }
            let mut rng = SplitMix64::new(seed);
            let len = dims.iter().product();
            DenseTensor::new(dims, (0..len).map(|_| rng.next_gaussian()).collect())?
        }
    };
    MultilinearForm::new(tensor, vec![XExp::INF; m])
}

/// Exact operator norms of the deterministic witnesses on lp^n x lq^n:
/// n^(1/q*) for U and n^(1 - 1/p - 1/q) for V. The exponent is computed as an
/// exact rational; only the final power is floating point.
pub fn closed_form_norm(kind: WitnessKind, p: XExp, q: XExp, n: usize) -> Result<f64> {
    if p < XExp::ONE || q < XExp::ONE {
        return Err(Error::Domain(format!("need p, q >= 1, got {p}, {q}")));
    }
    if n == 0 {
        return Err(Error::Domain("dimension must be >= 1".into()));
    }
    let exponent = match kind {
        WitnessKind::U => Rat::ONE.sub(q.recip_rat()?)?,
        WitnessKind::V => Rat::ONE.sub(p.recip_rat()?.add(q.recip_rat()?)?)?,
        _ => {
            return Err(Error::Domain(format!("no closed-form norm for {kind} witnesses")));
        }
    };
    Ok((n as f64).powf(exponent.to_f64()))
}

/// Reads a form from the tensor JSON format extended with `domain_exps`.
pub fn form_from_json(json: &str) -> Result<MultilinearForm> {
    let file = TensorFile::parse(json)?;
    let exps = file
        .domain_exps
        .clone()
        .ok_or_else(|| Error::Parse("form file missing domain_exps".into()))?;
    MultilinearForm::new(file.to_tensor()?, exps)
}

pub fn form_to_json(f: &MultilinearForm) -> Result<String> {
    let mut file = TensorFile::from_tensor(f.coeffs());
    file.domain_exps = Some(f.domain_exps().to_vec());
    file.to_json()
}
