//! JSON interchange for forms and structure constants. Basis indices are
//! 1-based; scalars are exact strings such as `"1/2"` or `"1/2-3i"`.

use serde::{Deserialize, Serialize};

use crate::basis::{StructureConstants, Tensor3};
use crate::error::{Error, Result};
use crate::forms::{even_count, GradedForm, MultiIndex};
use crate::linalg::DenseMatrix;
use crate::matrix::GradedMatrix;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormTermJson {
    pub index: Vec<usize>,
    pub matrix: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    pub n: usize,
    pub m: usize,
    pub degree: usize,
    pub entries: Vec<FormTermJson>,
}

impl FormJson {
    pub fn from_form(form: &GradedForm) -> FormJson {
        let entries = form
            .terms()
            .map(|(idx, x)| FormTermJson { index: idx.entries().iter().map(|a| a + 1).collect(), matrix: x.rows() })
            .collect();
        FormJson { n: form.n(), m: form.m(), degree: form.degree(), entries }
    }

    /// Builds the form; indices must be canonical (sorted, repeats only odd).
    pub fn to_form(&self) -> Result<GradedForm> {
        let (n, m) = (self.n, self.m);
        if n + m < 2 {
            return Err(Error::TooSmall { n, m });
        }
        let dim = (n + m) * (n + m) - 1;
        let mut out = GradedForm::zero(n, m, self.degree);
        for t in &self.entries {
            if t.index.len() != self.degree {
                return Err(Error::DegreeMismatch { expected: self.degree, found: t.index.len() });
            }
            if t.index.contains(&0) {
                return Err(Error::Parse("indices are 1-based".into()));
            }
            let idx = MultiIndex::new(t.index.iter().map(|a| a - 1).collect(), even_count(n, m), dim)?;
            out.add_term(idx, &GradedMatrix::from_rows(n, m, t.matrix.clone())?);
        }
        Ok(out)
    }
}

pub fn form_to_json(form: &GradedForm) -> String {
    serde_json::to_string(&FormJson::from_form(form)).expect("serialisable")
}

pub fn form_from_json(text: &str) -> Result<GradedForm> {
    let j: FormJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    j.to_form()
}

/// One nonzero entry of a tensor, with 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseEntry {
    pub index: Vec<usize>,
    pub value: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElementJson {
    pub index: usize,
    pub parity: usize,
    pub matrix: Vec<Vec<Scalar>>,
}

/// The basis table together with `c`, `d`, `g` and the Killing form `K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantsJson {
    pub n: usize,
    pub m: usize,
    pub dim: usize,
    pub basis: Vec<BasisElementJson>,
    pub c: Vec<SparseEntry>,
    pub d: Vec<SparseEntry>,
    pub g: Vec<SparseEntry>,
    pub killing: Vec<SparseEntry>,
}

fn tensor_entries(t: &Tensor3) -> Vec<SparseEntry> {
    t.nonzero().into_iter().map(|(a, b, c, v)| SparseEntry { index: vec![a + 1, b + 1, c + 1], value: v }).collect()
}

fn matrix_entries(mat: &DenseMatrix) -> Vec<SparseEntry> {
    let mut out = Vec::new();
    for i in 0..mat.nrows() {
        for j in 0..mat.ncols() {
            let v = mat.get(i, j);
            if !v.is_zero() {
                out.push(SparseEntry { index: vec![i + 1, j + 1], value: v.clone() });
            }
        }
    }
    out
}

impl ConstantsJson {
    pub fn new(k: &StructureConstants) -> ConstantsJson {
        let basis = k
            .basis()
            .elements()
            .iter()
            .enumerate()
            .map(|(a, e)| BasisElementJson { index: a + 1, parity: k.parity(a).bit(), matrix: e.rows() })
            .collect();
        ConstantsJson {
            n: k.n(),
            m: k.m(),
            dim: k.dim(),
            basis,
            c: tensor_entries(k.c_tensor()),
            d: tensor_entries(k.d_tensor()),
            g: matrix_entries(k.g_matrix()),
            killing: matrix_entries(k.killing()),
        }
    }

    /// Looks up `c_{AB}^C` with 1-based indices.
    pub fn c(&self, a: usize, b: usize, c: usize) -> Scalar {
        self.c.iter().find(|e| e.index == [a, b, c]).map(|e| e.value.clone()).unwrap_or(Scalar::ZERO)
    }
}
