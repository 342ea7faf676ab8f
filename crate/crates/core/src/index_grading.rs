//! Index and grading arithmetic for real monopoles: the expected dimension
//! on closed 4-manifolds, the grading shift of loops and the structure of
//! the grading set.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error("c1^2 - sigma = {0} is not divisible by 8")]
    NotDivisibleBy8(i64),
    #[error("pairing {0} is odd")]
    OddPairing(i64),
    #[error("integer overflow")]
    Overflow,
}

/// Topological input on a closed 4-manifold with involution. The Betti
/// numbers are those of the `(-ι*)`-invariant parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TopologicalData4 {
    pub c1_sq: i64,
    pub sigma: i64,
    pub b1_inv: u32,
    pub bplus_inv: u32,
    pub b0_inv: u32,
}

impl TopologicalData4 {
    /// Fieldwise sum, the data of a disjoint union.
    pub fn disjoint_union(&self, other: &Self) -> Option<Self> {
        Some(Self {
            c1_sq: self.c1_sq.checked_add(other.c1_sq)?,
            sigma: self.sigma.checked_add(other.sigma)?,
            b1_inv: self.b1_inv.checked_add(other.b1_inv)?,
            bplus_inv: self.bplus_inv.checked_add(other.bplus_inv)?,
            b0_inv: self.b0_inv.checked_add(other.b0_inv)?,
        })
    }
}

/// `(c1^2 - σ)/8 + b1 - b+ - b0`.
pub fn closed4_index(d: &TopologicalData4) -> Result<i64, IndexError> {
    let diff = d.c1_sq.checked_sub(d.sigma).ok_or(IndexError::Overflow)?;
    if diff % 8 != 0 {
        return Err(IndexError::NotDivisibleBy8(diff));
    }
    let betti = i64::from(d.b1_inv) - i64::from(d.bplus_inv) - i64::from(d.b0_inv);
    (diff / 8).checked_add(betti).ok_or(IndexError::Overflow)
}

/// Relative grading of a loop with `⟨[u] ∪ c1, [Y]⟩ = pairing`.
pub fn loop_grading_shift(pairing: i64) -> Result<i64, IndexError> {
    if pairing.is_odd() {
        return Err(IndexError::OddPairing(pairing));
    }
    Ok(pairing / 2)
}

/// The grading set `J` is a `Z`-torsor divided by the stabilizer `kZ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingSetInfo {
    pub free: bool,
    /// `k`; 0 when `J` is free.
    pub stabilizer_index: u64,
}

/// Structure of `J` from the pairings of `c1` with generators of the
/// anti-invariant second homology.
pub fn j_structure(c1_pairings: &[i64]) -> Result<GradingSetInfo, IndexError> {
    let mut g: u64 = 0;
    for &p in c1_pairings {
        g = g.gcd(&loop_grading_shift(p)?.unsigned_abs());
    }
    Ok(GradingSetInfo { free: g == 0, stabilizer_index: g })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(c1_sq: i64, sigma: i64, b1: u32, bp: u32, b0: u32) -> TopologicalData4 {
        TopologicalData4 { c1_sq, sigma, b1_inv: b1, bplus_inv: bp, b0_inv: b0 }
    }

    #[test]
    fn index_examples() {
        assert_eq!(closed4_index(&TopologicalData4::default()), Ok(0));
        assert_eq!(closed4_index(&data(8, 0, 1, 1, 0)), Ok(1));
        assert_eq!(closed4_index(&data(-8, 8, 0, 1, 1)), Ok(-4));
        assert_eq!(closed4_index(&data(3, 0, 0, 0, 0)), Err(IndexError::NotDivisibleBy8(3)));
        assert_eq!(closed4_index(&data(i64::MIN, 1, 0, 0, 0)), Err(IndexError::Overflow));
    }

    #[test]
    fn circle_times_three_manifold() {
        // b0 = 0 and b1 = b+, signature 0 and c1^2 = 4 times the pairing.
        for pairing in [-6i64, -2, 0, 2, 4, 10] {
            for b in 0..3 {
                let d = data(4 * pairing, 0, b, b, 0);
                assert_eq!(closed4_index(&d).unwrap(), loop_grading_shift(pairing).unwrap());
            }
        }
    }

    #[test]
    fn loop_shifts() {
        assert_eq!(loop_grading_shift(0), Ok(0));
        assert_eq!(loop_grading_shift(4), Ok(2));
        assert_eq!(loop_grading_shift(-4), Ok(-2));
        assert_eq!(loop_grading_shift(3), Err(IndexError::OddPairing(3)));
    }

    #[test]
    fn grading_sets() {
        let free = GradingSetInfo { free: true, stabilizer_index: 0 };
        assert_eq!(j_structure(&[]), Ok(free));
        assert_eq!(j_structure(&[0, 0]), Ok(free));
        assert_eq!(j_structure(&[4]), Ok(GradingSetInfo { free: false, stabilizer_index: 2 }));
        assert_eq!(j_structure(&[6, 4]), Ok(GradingSetInfo { free: false, stabilizer_index: 1 }));
        assert_eq!(j_structure(&[-12, 0]), Ok(GradingSetInfo { free: false, stabilizer_index: 6 }));
        assert_eq!(j_structure(&[2, 5]), Err(IndexError::OddPairing(5)));
    }
}
