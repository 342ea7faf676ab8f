//! Real structures and real spin-c structures from equivariant cellular
//! data, and homology of branched double covers from Seifert matrices.
//!
//! `M` is a complex with a cellular involution `ι` that either fixes a
//! cell pointwise or swaps it with another cell; `Q = M/ι` is the quotient.
//! The map `Θ: H^n(M) -> H^n(Q)` is induced by `β ↦ (e ↦ β(e) + β(ιe))`.

pub mod cells;
mod cohomology;
pub mod fixtures;
mod seifert;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2lin::{IntMatrix, LinAlgError};
use cells::{quotient, CellComplex, CellMap};

pub use cohomology::{
    admits_real_structure, cohomology_group, h1_invariant_quotient, kernel_of_theta,
    real_spinc_torsor, real_structure_classes, theta_on_cohomology, CohomologyGroup,
    RealStructureCensus, ThetaOnCohomology,
};
pub use seifert::{branched_cover_invariants, BranchedCoverInvariants, SeifertMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpincError {
    #[error("malformed orbit map: {0}")]
    MalformedOrbitMap(String),
    #[error("malformed cochain complex: {0}")]
    MalformedComplex(String),
    #[error("{0} does not commute with the coboundaries")]
    NotChainMap(&'static str),
    #[error("cochain is not a cocycle")]
    NotCocycle,
    #[error("cochain has length {found}, expected {expected}")]
    CochainLength { expected: usize, found: usize },
    #[error("the supplied first Chern class admits no real structure")]
    NoRealStructure,
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("degree {degree} is outside 0..={max}")]
    DegreeOutOfRange { degree: usize, max: usize },
    #[error("value {0} does not fit in a 64-bit integer")]
    Overflow(String),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// Orbit of one cell of `M`: the index of its image in `Q` (same degree),
/// whether it is pointwise fixed, and the orientation sign of `e -> [e]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitEntry {
    pub cell: [usize; 2],
    pub image: usize,
    pub fixed: bool,
    pub sign: i64,
}

/// Cochain complexes of `M` and `Q` plus the orbit map. `delta_m[n]` is the
/// coboundary `C^n(M) -> C^{n+1}(M)`, with `cells_m[n+1]` rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivariantCWData {
    #[serde(rename = "cells_M")]
    pub cells_m: Vec<usize>,
    #[serde(rename = "cells_Q")]
    pub cells_q: Vec<usize>,
    #[serde(rename = "delta_M")]
    pub delta_m: Vec<IntMatrix>,
    #[serde(rename = "delta_Q")]
    pub delta_q: Vec<IntMatrix>,
    pub orbit: Vec<OrbitEntry>,
}

/// Orbit data rearranged per degree.
#[derive(Debug, Clone)]
pub(crate) struct OrbitTable {
    /// `image[n][k]`, `sign[n][k]`, `fixed[n][k]` for cell `k` of degree `n`.
    pub image: Vec<Vec<usize>>,
    pub sign: Vec<Vec<i64>>,
    pub fixed: Vec<Vec<bool>>,
    /// The other cell of a free orbit; the cell itself when fixed.
    pub partner: Vec<Vec<usize>>,
}

impl EquivariantCWData {
    pub fn top_degree(&self) -> usize {
        self.cells_m.len().saturating_sub(1)
    }

    /// Builds the data from a complex and a cellular involution on it.
    pub fn from_involution(m: &CellComplex, iota: &CellMap) -> Result<Self, SpincError> {
        let q = quotient(m, iota, 2)?;
        let mut orbit = Vec::new();
        for (n, proj) in q.projection.iter().enumerate() {
            for (k, p) in proj.iter().enumerate() {
                orbit.push(OrbitEntry { cell: [n, k], image: p.cell, fixed: q.fixed[n][k], sign: p.sign });
            }
        }
        let cob = |c: &CellComplex| (0..c.cells.len().saturating_sub(1)).map(|n| c.coboundary(n)).collect();
        Ok(Self {
            cells_m: m.cells.clone(),
            cells_q: q.complex.cells.clone(),
            delta_m: cob(m),
            delta_q: cob(&q.complex),
            orbit,
        })
    }

    pub fn delta_m(&self, n: usize) -> IntMatrix {
        delta(&self.cells_m, &self.delta_m, n)
    }

    pub fn delta_q(&self, n: usize) -> IntMatrix {
        delta(&self.cells_q, &self.delta_q, n)
    }

    /// Coboundary into degree `n`, i.e. `δ^{n-1}`; zero for `n = 0`.
    pub fn delta_m_into(&self, n: usize) -> IntMatrix {
        if n == 0 {
            IntMatrix::zeros(count(&self.cells_m, 0), 0)
        } else {
            self.delta_m(n - 1)
        }
    }

    pub fn delta_q_into(&self, n: usize) -> IntMatrix {
        if n == 0 {
            IntMatrix::zeros(count(&self.cells_q, 0), 0)
        } else {
            self.delta_q(n - 1)
        }
    }

    pub fn has_fixed_cells(&self) -> bool {
        self.orbit.iter().any(|o| o.fixed)
    }

    /// Shape and consistency checks, returning the orbit table.
    pub(crate) fn table(&self) -> Result<OrbitTable, SpincError> {
        let dims = self.cells_m.len();
        if self.cells_q.len() != dims {
            return Err(SpincError::MalformedComplex(format!(
                "M has {} degrees but Q has {}",
                dims,
                self.cells_q.len()
            )));
        }
        for (name, cells, deltas) in [("M", &self.cells_m, &self.delta_m), ("Q", &self.cells_q, &self.delta_q)] {
            if deltas.len() != dims.saturating_sub(1) {
                return Err(SpincError::MalformedComplex(format!(
                    "{name} needs {} coboundaries, got {}",
                    dims.saturating_sub(1),
                    deltas.len()
                )));
            }
            for (n, d) in deltas.iter().enumerate() {
                if d.shape() != (cells[n + 1], cells[n]) {
                    return Err(SpincError::MalformedComplex(format!(
                        "{name} coboundary in degree {n} has shape {:?}, expected {:?}",
                        d.shape(),
                        (cells[n + 1], cells[n])
                    )));
                }
            }
            for n in 1..deltas.len() {
                if !deltas[n].mul(&deltas[n - 1])?.is_zero() {
                    return Err(SpincError::MalformedComplex(format!("{name}: δ∘δ ≠ 0 in degree {}", n - 1)));
                }
            }
        }
        let bad = |s: String| Err(SpincError::MalformedOrbitMap(s));
        let mut image: Vec<Vec<Option<usize>>> = self.cells_m.iter().map(|&c| vec![None; c]).collect();
        let mut sign = self.cells_m.iter().map(|&c| vec![0i64; c]).collect::<Vec<_>>();
        let mut fixed = self.cells_m.iter().map(|&c| vec![false; c]).collect::<Vec<_>>();
        for o in &self.orbit {
            let [n, k] = o.cell;
            if n >= dims || k >= self.cells_m[n] {
                return bad(format!("cell {:?} does not exist", o.cell));
            }
            if o.image >= self.cells_q[n] {
                return bad(format!("image {} of cell {:?} does not exist", o.image, o.cell));
            }
            if o.sign != 1 && o.sign != -1 {
                return bad(format!("sign of cell {:?} must be ±1", o.cell));
            }
            if image[n][k].replace(o.image).is_some() {
                return bad(format!("cell {:?} listed twice", o.cell));
            }
            sign[n][k] = o.sign;
            fixed[n][k] = o.fixed;
        }
        let mut partner = Vec::with_capacity(dims);
        let mut images = Vec::with_capacity(dims);
        for n in 0..dims {
            let mut pre: Vec<Vec<usize>> = vec![Vec::new(); self.cells_q[n]];
            let mut img = Vec::with_capacity(self.cells_m[n]);
            for k in 0..self.cells_m[n] {
                let Some(i) = image[n][k] else {
                    return bad(format!("cell [{n}, {k}] has no orbit entry"));
                };
                pre[i].push(k);
                img.push(i);
            }
            let mut part = vec![0usize; self.cells_m[n]];
            for (i, cells) in pre.iter().enumerate() {
                match cells.as_slice() {
                    [] => return bad(format!("cell [{n}, {i}] of Q has no preimage")),
                    [a] if fixed[n][*a] => part[*a] = *a,
                    [a, b] if !fixed[n][*a] && !fixed[n][*b] => {
                        part[*a] = *b;
                        part[*b] = *a;
                    }
                    _ => {
                        return bad(format!(
                            "cell [{n}, {i}] of Q must have one fixed or two free preimages, has {cells:?}"
                        ))
                    }
                }
            }
            partner.push(part);
            images.push(img);
        }
        let table = OrbitTable { image: images, sign, fixed, partner };
        for n in 0..dims.saturating_sub(1) {
            let lhs = self.delta_m(n).mul(&iota_matrix(self, &table, n))?;
            let rhs = iota_matrix(self, &table, n + 1).mul(&self.delta_m(n))?;
            if lhs != rhs {
                return Err(SpincError::NotChainMap("the involution"));
            }
            let lhs = self.delta_q(n).mul(&theta_matrix(self, &table, n))?;
            let rhs = theta_matrix(self, &table, n + 1).mul(&self.delta_m(n))?;
            if lhs != rhs {
                return Err(SpincError::NotChainMap("Θ on cochains"));
            }
        }
        Ok(table)
    }

    fn check_degree(&self, n: usize) -> Result<(), SpincError> {
        if n >= self.cells_m.len() {
            return Err(SpincError::DegreeOutOfRange { degree: n, max: self.top_degree() });
        }
        Ok(())
    }
}

fn count(cells: &[usize], n: usize) -> usize {
    cells.get(n).copied().unwrap_or(0)
}

fn delta(cells: &[usize], deltas: &[IntMatrix], n: usize) -> IntMatrix {
    deltas.get(n).cloned().unwrap_or_else(|| IntMatrix::zeros(count(cells, n + 1), count(cells, n)))
}

fn theta_matrix(data: &EquivariantCWData, t: &OrbitTable, n: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(count(&data.cells_q, n), count(&data.cells_m, n));
    for k in 0..count(&data.cells_m, n) {
        let w = if t.fixed[n][k] { 2 } else { 1 };
        m.set(t.image[n][k], k, BigInt::from(w * t.sign[n][k]));
    }
    m
}

fn iota_matrix(data: &EquivariantCWData, t: &OrbitTable, n: usize) -> IntMatrix {
    let c = count(&data.cells_m, n);
    let mut m = IntMatrix::zeros(c, c);
    for k in 0..c {
        let p = t.partner[n][k];
        let v = if p == k { 1 } else { t.sign[n][k] * t.sign[n][p] };
        m.set(k, p, BigInt::from(v));
    }
    m
}

/// `Θ̃: C^n(M) -> C^n(Q)`, with entry `2·sign` on fixed cells and `sign`
/// on free ones.
pub fn theta_on_cochains(data: &EquivariantCWData, n: usize) -> Result<IntMatrix, SpincError> {
    data.check_degree(n)?;
    let t = data.table()?;
    Ok(theta_matrix(data, &t, n))
}

/// Pullback `π*: C^n(Q) -> C^n(M)`, `(π*α)(e) = sign(e)·α([e])`.
pub fn pi_star(data: &EquivariantCWData, n: usize) -> Result<IntMatrix, SpincError> {
    data.check_degree(n)?;
    let t = data.table()?;
    let mut m = IntMatrix::zeros(data.cells_m[n], data.cells_q[n]);
    for k in 0..data.cells_m[n] {
        m.set(k, t.image[n][k], BigInt::from(t.sign[n][k]));
    }
    Ok(m)
}

/// `ι*: C^n(M) -> C^n(M)`.
pub fn iota_star(data: &EquivariantCWData, n: usize) -> Result<IntMatrix, SpincError> {
    data.check_degree(n)?;
    let t = data.table()?;
    Ok(iota_matrix(data, &t, n))
}

pub(crate) fn to_i64(x: &BigInt) -> Result<i64, SpincError> {
    x.to_i64().ok_or_else(|| SpincError::Overflow(x.to_string()))
}

pub(crate) fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub(crate) fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}
