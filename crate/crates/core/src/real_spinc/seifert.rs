use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::SpincError;
use crate::f2lin::{smith_normal_form, IntMatrix, LinAlgError};

/// Square Seifert matrix, possibly empty. JSON form: `{"A": [[...], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SeifertJson", into = "SeifertJson")]
pub struct SeifertMatrix {
    a: IntMatrix,
}

#[derive(Serialize, Deserialize)]
struct SeifertJson {
    #[serde(rename = "A")]
    a: Vec<Vec<i64>>,
}

impl TryFrom<SeifertJson> for SeifertMatrix {
    type Error = SpincError;

    fn try_from(j: SeifertJson) -> Result<Self, Self::Error> {
        let n = j.a.len();
        SeifertMatrix::new(IntMatrix::from_rows(&j.a, n)?)
    }
}

impl From<SeifertMatrix> for SeifertJson {
    fn from(s: SeifertMatrix) -> Self {
        let a = (0..s.a.nrows()).map(|r| (0..s.a.ncols()).map(|c| s.a.get_i64(r, c)).collect()).collect();
        SeifertJson { a }
    }
}

impl SeifertMatrix {
    pub fn new(a: IntMatrix) -> Result<Self, SpincError> {
        if !a.is_square() {
            return Err(LinAlgError::ShapeMismatch { op: "seifert", left: a.shape(), right: (a.ncols(), a.nrows()) }.into());
        }
        Ok(Self { a })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self, SpincError> {
        Self::new(IntMatrix::from_i64(rows))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    /// `A + A^T`.
    pub fn symmetrized(&self) -> IntMatrix {
        self.a.add(&self.a.transpose()).expect("square")
    }

    /// `P^T A P`.
    pub fn congruent(&self, p: &IntMatrix) -> Result<Self, SpincError> {
        Self::new(p.transpose().mul(&self.a)?.mul(p)?)
    }
}

/// First homology of the branched double cover: `|H_1|` (0 when infinite)
/// and the first Betti number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchedCoverInvariants {
    pub order: u64,
    pub b1: usize,
}

pub fn branched_cover_invariants(a: &SeifertMatrix) -> Result<BranchedCoverInvariants, SpincError> {
    let snf = smith_normal_form(&a.symmetrized());
    let b1 = a.dim() - snf.rank();
    let order = if b1 > 0 {
        BigInt::from(0)
    } else {
        snf.diagonal().iter().product::<BigInt>().abs()
    };
    let order = order.to_u64().ok_or_else(|| SpincError::Overflow(order.to_string()))?;
    Ok(BranchedCoverInvariants { order, b1 })
}
