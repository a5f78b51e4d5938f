//! The on-disk tensor format: a JSON object
//! `{"order": m, "dims": [n1, ..., nm], "data": [row-major scalars]}`,
//! optionally extended with `"domain_exps"` by the forms module.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::XExp;
use crate::tensor::DenseTensor;

/// Serialized form of a tensor, with an optional per-slot exponent tag.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TensorFile {
    pub order: usize,
    pub dims: Vec<usize>,
    pub data: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain_exps: Option<Vec<XExp>>,
}

impl TensorFile {
    pub fn from_tensor(t: &DenseTensor) -> Self {
        Self { order: t.order(), dims: t.dims().to_vec(), data: t.data().to_vec(), domain_exps: None }
    }

    pub fn parse(json: &str) -> Result<Self> {
        let file: TensorFile = serde_json::from_str(json)?;
        file.validate()?;
        Ok(file)
    }

    /// Rejects any count disagreement exactly: declared order vs dims length,
    /// and data length vs the product of dims.
    pub fn validate(&self) -> Result<()> {
        if self.order != self.dims.len() {
            return Err(Error::Parse(format!(
                "order {} disagrees with {} dims",
                self.order,
                self.dims.len()
            )));
        }
        let expect: usize = self.dims.iter().product();
        if self.data.len() != expect {
            return Err(Error::Parse(format!(
                "data has {} entries but dims {:?} require {}",
                self.data.len(),
                self.dims,
                expect
            )));
        }
        if let Some(exps) = &self.domain_exps {
            if exps.len() != self.order {
                return Err(Error::Parse(format!(
                    "{} domain exponents for order {}",
                    exps.len(),
                    self.order
                )));
            }
        }
        Ok(())
    }

    pub fn to_tensor(&self) -> Result<DenseTensor> {
        self.validate()?;
        DenseTensor::new(self.dims.clone(), self.data.clone())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}
