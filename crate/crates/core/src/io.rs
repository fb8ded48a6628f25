//! JSON instance files.
//!
//! ```json
//! {"dims":[2,2],"rho":[[7,5,5,6],...],"k":[[[10,1],[1,1]],[[1,1],[1,10]]],"p":0.5}
//! ```
//!
//! Entries are bare numbers for real values or `[re, im]` pairs for complex
//! ones. `k` holds one observable per factor.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inequality::{BipartiteInstance, TripartiteInstance};
use crate::linalg::{HermitianMatrix, Matrix};
use crate::tensor::MultipartiteOperator;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Real(f64),
    Complex([f64; 2]),
}

impl From<Complex64> for Scalar {
    fn from(z: Complex64) -> Self {
        if z.im.to_bits() == 0 {
            Scalar::Real(z.re)
        } else {
            Scalar::Complex([z.re, z.im])
        }
    }
}

impl From<Scalar> for Complex64 {
    fn from(s: Scalar) -> Self {
        match s {
            Scalar::Real(x) => Complex64::new(x, 0.0),
            Scalar::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub dims: Vec<usize>,
    pub rho: Vec<Vec<Scalar>>,
    pub k: Vec<Vec<Vec<Scalar>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
}

fn to_rows(m: &Matrix) -> Vec<Vec<Scalar>> {
    m.rows()
        .into_iter()
        .map(|r| r.into_iter().map(Scalar::from).collect())
        .collect()
}

fn to_hermitian(rows: &[Vec<Scalar>], what: &str) -> Result<HermitianMatrix> {
    let rows: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|r| r.iter().map(|&s| s.into()).collect())
        .collect();
    let m = Matrix::from_rows(&rows).map_err(|e| Error::InstanceFile(format!("{what}: {e}")))?;
    HermitianMatrix::new(m).map_err(|e| Error::InstanceFile(format!("{what}: {e}")))
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InstanceFile(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance files always serialize")
    }

    pub fn read(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InstanceFile(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn write(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")
            .map_err(|e| Error::InstanceFile(format!("{}: {e}", path.display())))
    }

    pub fn from_parts(
        rho: &MultipartiteOperator,
        observables: &[&HermitianMatrix],
        p: Option<f64>,
    ) -> Self {
        Self {
            dims: rho.dims().to_vec(),
            rho: to_rows(rho.matrix()),
            k: observables.iter().map(|k| to_rows(k)).collect(),
            p,
        }
    }

    pub fn from_bipartite(inst: &BipartiteInstance) -> Self {
        Self::from_parts(&inst.rho12, &[&inst.k1, &inst.k2], Some(inst.p))
    }

    pub fn from_tripartite(inst: &TripartiteInstance) -> Self {
        Self::from_parts(&inst.rho123, &[&inst.k1, &inst.k2, &inst.k3], Some(inst.p))
    }

    /// Validated state and one observable per factor.
    pub fn parts(&self) -> Result<(MultipartiteOperator, Vec<HermitianMatrix>)> {
        let rho = to_hermitian(&self.rho, "rho")?;
        let rho = MultipartiteOperator::new(rho, self.dims.clone())
            .map_err(|e| Error::InstanceFile(format!("rho: {e}")))?;
        if self.k.len() != self.dims.len() {
            return Err(Error::InstanceFile(format!(
                "{} observables for {} factors",
                self.k.len(),
                self.dims.len()
            )));
        }
        let ks = self
            .k
            .iter()
            .enumerate()
            .map(|(i, rows)| {
                let k = to_hermitian(rows, &format!("k[{i}]"))?;
                if k.dim() != self.dims[i] {
                    return Err(Error::InstanceFile(format!(
                        "k[{i}] is {}x{} but factor {i} has dimension {}",
                        k.dim(),
                        k.dim(),
                        self.dims[i]
                    )));
                }
                Ok(k)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((rho, ks))
    }

    fn exponent(&self, p_override: Option<f64>) -> Result<f64> {
        p_override
            .or(self.p)
            .ok_or_else(|| Error::InstanceFile("no exponent p given".into()))
    }

    pub fn to_bipartite(&self, p_override: Option<f64>) -> Result<BipartiteInstance> {
        let p = self.exponent(p_override)?;
        let (rho, mut ks) = self.parts()?;
        if ks.len() != 2 {
            return Err(Error::InstanceFile(format!(
                "expected 2 factors, found {}",
                ks.len()
            )));
        }
        let k2 = ks.pop().unwrap();
        let k1 = ks.pop().unwrap();
        BipartiteInstance::new(rho, k1, k2, p)
    }

    pub fn to_tripartite(&self, p_override: Option<f64>) -> Result<TripartiteInstance> {
        let p = self.exponent(p_override)?;
        let (rho, mut ks) = self.parts()?;
        if ks.len() != 3 {
            return Err(Error::InstanceFile(format!(
                "expected 3 factors, found {}",
                ks.len()
            )));
        }
        let k3 = ks.pop().unwrap();
        let k2 = ks.pop().unwrap();
        let k1 = ks.pop().unwrap();
        TripartiteInstance::new(rho, k1, k2, k3, p)
    }
}
