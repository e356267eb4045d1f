//! JSON forms of operators, channels, tests and combs.
//!
//! A matrix is stored as `{"rows", "cols", "data"}` where `data` is base64 of
//! the row-major entries written as little-endian `f64` pairs `(re, im)`.

use crate::channels::{ChannelRep, ChannelTestOperator};
use crate::combs::CombOperator;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Cx, DensityOperator, HermitianOperator};
use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: String,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        let mut bytes = Vec::with_capacity(m.rows() * m.cols() * 16);
        for z in m.to_row_major() {
            bytes.extend_from_slice(&z.re.to_le_bytes());
            bytes.extend_from_slice(&z.im.to_le_bytes());
        }
        Self { rows: m.rows(), cols: m.cols(), data: STANDARD.encode(bytes) }
    }
}

impl TryFrom<&MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(j: &MatrixJson) -> Result<Self> {
        let bytes = STANDARD.decode(&j.data).map_err(|e| Error::Serialization(e.to_string()))?;
        if bytes.len() != j.rows * j.cols * 16 {
            return Err(Error::Serialization(format!("{} bytes for a {}x{} matrix", bytes.len(), j.rows, j.cols)));
        }
        let f = |c: &[u8]| f64::from_le_bytes(c.try_into().expect("8-byte chunk"));
        let entries = bytes.chunks_exact(16).map(|c| Cx::new(f(&c[..8]), f(&c[8..]))).collect();
        ComplexMatrix::from_row_major(j.rows, j.cols, entries)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelJson {
    pub d_in: usize,
    pub d_out: usize,
    pub choi: MatrixJson,
}

impl From<&ChannelRep> for ChannelJson {
    fn from(ch: &ChannelRep) -> Self {
        Self { d_in: ch.d_in(), d_out: ch.d_out(), choi: ch.choi().matrix().into() }
    }
}

impl TryFrom<&ChannelJson> for ChannelRep {
    type Error = Error;

    fn try_from(j: &ChannelJson) -> Result<Self> {
        let choi = HermitianOperator::new(ComplexMatrix::try_from(&j.choi)?)?;
        ChannelRep::from_choi(j.d_in, j.d_out, choi)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestOperatorJson {
    pub d_in: usize,
    pub d_out: usize,
    pub op: MatrixJson,
    pub certificate: Option<MatrixJson>,
}

impl From<&ChannelTestOperator> for TestOperatorJson {
    fn from(e: &ChannelTestOperator) -> Self {
        Self {
            d_in: e.d_in(),
            d_out: e.d_out(),
            op: e.op().matrix().into(),
            certificate: e.certificate().map(|s| s.op().matrix().into()),
        }
    }
}

impl TryFrom<&TestOperatorJson> for ChannelTestOperator {
    type Error = Error;

    fn try_from(j: &TestOperatorJson) -> Result<Self> {
        let op = HermitianOperator::new(ComplexMatrix::try_from(&j.op)?)?;
        let cert = match &j.certificate {
            Some(c) => Some(DensityOperator::new(HermitianOperator::new(ComplexMatrix::try_from(c)?)?)?),
            None => None,
        };
        ChannelTestOperator::new(op, cert, j.d_in, j.d_out)
    }
}

/// Comb operator with its ladder of input and output dimensions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CombJson {
    pub in_dims: Vec<usize>,
    pub out_dims: Vec<usize>,
    pub op: MatrixJson,
}

impl From<&CombOperator> for CombJson {
    fn from(c: &CombOperator) -> Self {
        Self { in_dims: c.in_dims().to_vec(), out_dims: c.out_dims().to_vec(), op: c.op().matrix().into() }
    }
}

impl TryFrom<&CombJson> for CombOperator {
    type Error = Error;

    fn try_from(j: &CombJson) -> Result<Self> {
        let op = HermitianOperator::new(ComplexMatrix::try_from(&j.op)?)?;
        CombOperator::new(op, j.in_dims.clone(), j.out_dims.clone())
    }
}

pub fn to_json<S: Serialize>(value: &S) -> Result<String> {
    serde_json::to_string(value).map_err(|e| Error::Serialization(e.to_string()))
}

pub fn from_json<'a, D: Deserialize<'a>>(s: &'a str) -> Result<D> {
    serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))
}
