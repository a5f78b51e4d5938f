//! Dense order-m coefficient arrays, anisotropic mixed norms, and the two
//! scalar-matrix inequalities used as tools: the mixed-sum Minkowski
//! inequality and the interpolative Holder inequality.

mod io;

pub use io::TensorFile;

use crate::error::{Error, Result};
use crate::exponents::{Rat, XExp};

/// Relative slack for floating-point inequality checks; nested powers round.
pub const INEQ_SLACK: f64 = 1e-12;

/// A dense order-m array of real coefficients, row-major (last index fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    dims: Vec<usize>,
    data: Vec<f64>,
}

impl DenseTensor {
    pub fn new(dims: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::DimMismatch("tensor order must be >= 1".into()));
        }
        if dims.contains(&0) {
            return Err(Error::DimMismatch(format!("zero-length axis in {dims:?}")));
        }
        let expect: usize = dims.iter().product();
        if data.len() != expect {
            return Err(Error::DimMismatch(format!(
                "data length {} but dims {:?} require {}",
                data.len(),
                dims,
                expect
            )));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::DimMismatch("tensor entries must be finite".into()));
        }
        Ok(Self { dims, data })
    }

    pub fn zeros(dims: Vec<usize>) -> Result<Self> {
        let len = dims.iter().product();
        Self::new(dims, vec![0.0; len])
    }

    /// Square matrix constructor, row-major.
    pub fn matrix(n: usize, data: Vec<f64>) -> Result<Self> {
        Self::new(vec![n, n], data)
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.flat_index(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: f64) {
        let k = self.flat_index(idx);
        self.data[k] = value;
    }

    fn flat_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.dims.len());
        let mut flat = 0;
        for (i, n) in idx.iter().zip(&self.dims) {
            debug_assert!(i < n);
            flat = flat * n + i;
        }
        flat
    }

    pub fn scale(&self, factor: f64) -> Result<Self> {
        Self::new(self.dims.clone(), self.data.iter().map(|x| x * factor).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::DimMismatch(format!("{:?} vs {:?}", self.dims, other.dims)));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Self::new(self.dims.clone(), data)
    }

    /// Matrix transpose (order-2 only).
    pub fn transpose(&self) -> Result<Self> {
        let [rows, cols] = self.dims[..] else {
            return Err(Error::DimMismatch(format!("transpose needs order 2, got {}", self.order())));
        };
        let mut data = vec![0.0; self.data.len()];
        for i in 0..rows {
            for j in 0..cols {
                data[j * rows + i] = self.data[i * cols + j];
            }
        }
        Self::new(vec![cols, rows], data)
    }
}

/// Per-axis exponents of a nested norm, outermost axis first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedNormSpec {
    exponents: Vec<XExp>,
}

impl MixedNormSpec {
    pub fn new(exponents: Vec<XExp>) -> Result<Self> {
        for q in &exponents {
            if *q < XExp::ONE {
                return Err(Error::Domain(format!("mixed-norm exponent {q} below 1")));
            }
        }
        Ok(Self { exponents })
    }

    /// Two-axis spec `(outer, inner)`.
    pub fn pair(outer: XExp, inner: XExp) -> Result<Self> {
        Self::new(vec![outer, inner])
    }

    /// The same exponent on every axis.
    pub fn uniform(q: XExp, order: usize) -> Result<Self> {
        Self::new(vec![q; order])
    }

    pub fn exponents(&self) -> &[XExp] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }
}

/// lp norm of a slice, with p = inf meaning the sup of absolute values.
/// Rescales by the max entry so large exponents do not overflow.
pub fn lp_norm(xs: &[f64], p: XExp) -> f64 {
    let sup = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if p.is_inf() || sup == 0.0 {
        return sup;
    }
    let pf = p.to_f64();
    if pf == 1.0 {
        return xs.iter().map(|x| x.abs()).sum();
    }
    let sum: f64 = xs.iter().map(|x| (x.abs() / sup).powf(pf)).sum();
    sup * sum.powf(1.0 / pf)
}

/// The nested mixed norm: the innermost axis is reduced first with the last
/// spec exponent, then the next axis out, and so on.
pub fn mixed_norm(t: &DenseTensor, spec: &MixedNormSpec) -> Result<f64> {
    if spec.len() != t.order() {
        return Err(Error::SpecMismatch { order: t.order(), spec_len: spec.len() });
    }
    let mut values = t.data.clone();
    for (axis, q) in spec.exponents.iter().enumerate().rev() {
        let n = t.dims[axis];
        values = values.chunks(n).map(|chunk| lp_norm(chunk, *q)).collect();
    }
    debug_assert_eq!(values.len(), 1);
    Ok(values[0])
}

/// Outcome of a numerically checked two-sided inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IneqCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Mixed-sum Minkowski inequality for 1 <= p <= q:
/// l_q(rows: l_p) of a matrix is at most l_p(columns: l_q) of its transpose.
pub fn minkowski_check(a: &DenseTensor, p: XExp, q: XExp) -> Result<IneqCheck> {
    if a.order() != 2 {
        return Err(Error::DimMismatch(format!("matrix expected, got order {}", a.order())));
    }
    if p < XExp::ONE || q < p {
        return Err(Error::Domain(format!("need 1 <= p <= q, got p={p}, q={q}")));
    }
    let lhs = mixed_norm(a, &MixedNormSpec::pair(q, p)?)?;
    let rhs = mixed_norm(&a.transpose()?, &MixedNormSpec::pair(p, q)?)?;
    Ok(IneqCheck { lhs, rhs, holds: lhs <= rhs * (1.0 + INEQ_SLACK) })
}

/// Interpolative Holder inequality on matrices: the mixed norm at the
/// exponent pair interpolated (in reciprocals, exactly) between `spec1` and
/// `spec2` with weight `theta` is at most the theta-geometric mean of the two
/// endpoint norms.
pub fn interp_holder_check(
    a: &DenseTensor,
    spec1: &MixedNormSpec,
    spec2: &MixedNormSpec,
    theta: XExp,
) -> Result<IneqCheck> {
    if a.order() != 2 || spec1.len() != 2 || spec2.len() != 2 {
        return Err(Error::DimMismatch("matrix with two-axis specs expected".into()));
    }
    if theta > XExp::ONE {
        return Err(Error::Domain(format!("theta must lie in [0, 1], got {theta}")));
    }
    let th = theta.as_rat().ok_or_else(|| Error::Domain("theta must be finite".into()))?;
    let co = Rat::ONE.sub(th)?;
    let mut interp = Vec::with_capacity(2);
    for k in 0..2 {
        let r1 = spec1.exponents[k].recip_rat()?;
        let r2 = spec2.exponents[k].recip_rat()?;
        interp.push(XExp::from_recip_rat(th.mul(r1)?.add(co.mul(r2)?)?)?);
    }
    let lhs = mixed_norm(a, &MixedNormSpec::new(interp)?)?;
    let n1 = mixed_norm(a, spec1)?;
    let n2 = mixed_norm(a, spec2)?;
    let rhs = n1.powf(th.to_f64()) * n2.powf(co.to_f64());
    Ok(IneqCheck { lhs, rhs, holds: lhs <= rhs * (1.0 + INEQ_SLACK) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::xexp;
    use crate::rng::SplitMix64;

    fn spec(outer: &str, inner: &str) -> MixedNormSpec {
        MixedNormSpec::pair(xexp(outer), xexp(inner)).unwrap()
    }

    #[test]
    fn mixed_norm_golden() {
        let id = DenseTensor::matrix(2, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        // Each row has unit l2 norm; the outer l1 sum is 2.
        assert!((mixed_norm(&id, &spec("1", "2")).unwrap() - 2.0).abs() < 1e-14);
        let m = DenseTensor::matrix(2, vec![1.0, 0.0, 1.0, 1.0]).unwrap();
        // Row l1 norms are 1 and 2; sqrt(1 + 4).
        let v = mixed_norm(&m, &spec("2", "1")).unwrap();
        assert!((v - 5.0f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn uniform_spec_collapses_to_flat_norm() {
        let mut rng = SplitMix64::new(11);
        for s in ["1", "2", "7/2", "inf"] {
            let data: Vec<f64> = (0..60).map(|_| rng.next_gaussian()).collect();
            let t = DenseTensor::new(vec![3, 4, 5], data.clone()).unwrap();
            let got =
                mixed_norm(&t, &MixedNormSpec::uniform(xexp(s), 3).unwrap()).unwrap();
            let want = lp_norm(&data, xexp(s));
            assert!((got - want).abs() <= 1e-12 * want.max(1.0), "s={s}: {got} vs {want}");
        }
    }

    #[test]
    fn zero_norm_iff_zero_tensor() {
        let z = DenseTensor::zeros(vec![2, 3]).unwrap();
        assert_eq!(mixed_norm(&z, &spec("2", "4")).unwrap(), 0.0);
        let mut t = z.clone();
        t.set(&[1, 2], 1e-300);
        assert!(mixed_norm(&t, &spec("2", "4")).unwrap() > 0.0);
    }

    #[test]
    fn spec_mismatch_and_bad_exponent() {
        let t = DenseTensor::zeros(vec![2, 2]).unwrap();
        assert!(matches!(
            mixed_norm(&t, &MixedNormSpec::uniform(xexp("2"), 3).unwrap()),
            Err(Error::SpecMismatch { .. })
        ));
        assert!(MixedNormSpec::new(vec![xexp("1/2")]).is_err());
    }

    #[test]
    fn construction_errors() {
        assert!(DenseTensor::new(vec![2, 2], vec![0.0; 3]).is_err());
        assert!(DenseTensor::new(vec![2], vec![f64::NAN, 0.0]).is_err());
        assert!(DenseTensor::new(vec![], vec![]).is_err());
    }

    #[test]
    fn minkowski_golden() {
        let ones = DenseTensor::matrix(2, vec![1.0; 4]).unwrap();
        let c = minkowski_check(&ones, xexp("1"), xexp("2")).unwrap();
        let want = 2.0 * 2.0f64.sqrt();
        assert!((c.lhs - want).abs() < 1e-12 && (c.rhs - want).abs() < 1e-12 && c.holds);

        let m = DenseTensor::matrix(2, vec![1.0, 0.0, 1.0, 1.0]).unwrap();
        let c = minkowski_check(&m, xexp("1"), xexp("2")).unwrap();
        assert!((c.lhs - 5.0f64.sqrt()).abs() < 1e-12);
        assert!((c.rhs - (1.0 + 2.0f64.sqrt())).abs() < 1e-12);
        assert!(c.holds);

        // Diagonal matrices: the two sides are the l_q and l_p norms of the
        // diagonal vector, so the inequality holds, with equality exactly
        // when a single entry is nonzero.
        let d = DenseTensor::matrix(3, vec![2.0, 0.0, 0.0, 0.0, -3.0, 0.0, 0.0, 0.0, 0.5]).unwrap();
        let single =
            DenseTensor::matrix(3, vec![0.0, 0.0, 0.0, 0.0, -3.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        for (p, q) in [("1", "2"), ("3/2", "4"), ("2", "inf")] {
            let c = minkowski_check(&d, xexp(p), xexp(q)).unwrap();
            assert!(c.holds, "p={p} q={q}");
            assert!((c.lhs - lp_norm(&[2.0, 3.0, 0.5], xexp(q))).abs() < 1e-12);
            assert!((c.rhs - lp_norm(&[2.0, 3.0, 0.5], xexp(p))).abs() < 1e-12);
            let c = minkowski_check(&single, xexp(p), xexp(q)).unwrap();
            assert!((c.lhs - c.rhs).abs() <= 1e-12 * c.rhs, "p={p} q={q}");
        }

        assert!(minkowski_check(&m, xexp("3"), xexp("2")).is_err());
    }

    #[test]
    fn interp_holder_golden() {
        let m = DenseTensor::matrix(2, vec![1.0, 2.0, -3.0, 4.0]).unwrap();
        // theta = 1 reproduces the first spec exactly.
        let c = interp_holder_check(&m, &spec("3", "2"), &spec("1", "inf"), xexp("1")).unwrap();
        let want = mixed_norm(&m, &spec("3", "2")).unwrap();
        assert!((c.lhs - want).abs() < 1e-12 && (c.rhs - want).abs() < 1e-12 && c.holds);

        // 0/1 diagonal: l2 vs sqrt(l1 * linf) agree at sqrt(2).
        let id = DenseTensor::matrix(2, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        let c =
            interp_holder_check(&id, &spec("1", "1"), &spec("inf", "inf"), xexp("1/2")).unwrap();
        assert!((c.lhs - 2.0f64.sqrt()).abs() < 1e-12);
        assert!((c.rhs - 2.0f64.sqrt()).abs() < 1e-12);
        assert!(c.holds);

        assert!(interp_holder_check(&id, &spec("1", "1"), &spec("2", "2"), xexp("3/2")).is_err());
    }

    #[test]
    fn homogeneity_monotonicity_triangle() {
        let mut rng = SplitMix64::new(23);
        for _ in 0..50 {
            let data: Vec<f64> = (0..24).map(|_| rng.next_gaussian()).collect();
            let data2: Vec<f64> = (0..24).map(|_| rng.next_gaussian()).collect();
            let t = DenseTensor::new(vec![2, 3, 4], data).unwrap();
            let s = DenseTensor::new(vec![2, 3, 4], data2).unwrap();
            let sp = MixedNormSpec::new(vec![xexp("3"), xexp("1"), xexp("5/2")]).unwrap();
            let nt = mixed_norm(&t, &sp).unwrap();
            let ns = mixed_norm(&s, &sp).unwrap();

            let scaled = mixed_norm(&t.scale(-2.5).unwrap(), &sp).unwrap();
            assert!((scaled - 2.5 * nt).abs() <= 1e-12 * scaled.max(1.0));

            // Raising one exponent never increases the norm.
            let sp_up = MixedNormSpec::new(vec![xexp("3"), xexp("2"), xexp("5/2")]).unwrap();
            assert!(mixed_norm(&t, &sp_up).unwrap() <= nt * (1.0 + 1e-12));

            let tri = mixed_norm(&t.add(&s).unwrap(), &sp).unwrap();
            assert!(tri <= nt + ns + 1e-12 * (nt + ns));
        }
    }
}
