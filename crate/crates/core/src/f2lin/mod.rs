//! Exact linear algebra over F2 and over the integers.

mod bits;
mod f2;
mod int;
mod snf;

pub use bits::{BitMatrix, BitVec};
pub use f2::F2Matrix;
pub use int::IntMatrix;
pub use snf::{cokernel_invariants, integer_kernel, smith_normal_form, solve_integer, SnfResult};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("position ({row}, {col}) outside a {rows}x{cols} matrix")]
    OutOfBounds { row: usize, col: usize, rows: usize, cols: usize },
    #[error("position ({row}, {col}) listed twice")]
    DuplicateEntry { row: usize, col: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    ShapeMismatch { op: &'static str, left: (usize, usize), right: (usize, usize) },
    #[error("composite of consecutive differentials is nonzero ({nonzero} entries)")]
    CompositionNonzero { nonzero: usize },
}

/// Rank over F2.
pub fn f2_rank(m: &F2Matrix) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 || m.is_zero() {
        return 0;
    }
    // Eliminate along the shorter side; rank is transpose invariant.
    if m.nrows() > m.ncols() {
        m.transpose().to_dense().rank()
    } else {
        m.to_dense().rank()
    }
}

/// Basis of the null space of `m`, one vector per free column.
pub fn f2_kernel_basis(m: &F2Matrix) -> Vec<BitVec> {
    m.to_dense().kernel()
}

/// Dimension of `ker d_out / im d_in` at the middle spot of
/// `A --d_in--> B --d_out--> C`.
pub fn f2_homology_rank(d_in: &F2Matrix, d_out: &F2Matrix) -> Result<usize, LinAlgError> {
    let comp = d_out.mul(d_in)?;
    if !comp.is_zero() {
        return Err(LinAlgError::CompositionNonzero { nonzero: comp.nnz() });
    }
    Ok(d_out.ncols() - f2_rank(d_out) - f2_rank(d_in))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // Plain Gaussian elimination on Vec<Vec<u8>>, kept deliberately naive.
    fn naive_rank(mut a: Vec<Vec<u8>>) -> usize {
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..rows).find(|&r| a[r][c] == 1) else { continue };
            a.swap(rank, p);
            for r in 0..rows {
                if r != rank && a[r][c] == 1 {
                    for k in 0..cols {
                        a[r][k] ^= a[rank][k];
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn random_dense(rng: &mut ChaCha8Rng, r: usize, c: usize) -> Vec<Vec<u8>> {
        (0..r).map(|_| (0..c).map(|_| rng.gen_range(0..2)).collect()).collect()
    }

    #[test]
    fn rank_of_trivial_matrices() {
        assert_eq!(f2_rank(&F2Matrix::zeros(3, 3)), 0);
        assert_eq!(f2_rank(&F2Matrix::identity(4)), 4);
        assert_eq!(f2_rank(&F2Matrix::zeros(0, 5)), 0);
    }

    #[test]
    fn rank_matches_naive_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..200 {
            let (r, c) = (rng.gen_range(1..9), rng.gen_range(1..9));
            let d = random_dense(&mut rng, r, c);
            assert_eq!(f2_rank(&F2Matrix::from_dense(&d)), naive_rank(d));
        }
        let d = random_dense(&mut rng, 6, 6);
        assert_eq!(f2_rank(&F2Matrix::from_dense(&d)), naive_rank(d));
    }

    #[test]
    fn rank_past_one_word() {
        let mut rng = ChaCha8Rng::seed_from_u64(70);
        let d = random_dense(&mut rng, 90, 130);
        assert_eq!(f2_rank(&F2Matrix::from_dense(&d)), naive_rank(d));
    }

    #[test]
    fn kernel_trivial_cases() {
        assert!(f2_kernel_basis(&F2Matrix::identity(3)).is_empty());
        assert_eq!(f2_kernel_basis(&F2Matrix::zeros(2, 3)).len(), 3);
    }

    #[test]
    fn kernel_of_rank_two_matrix_exhaustive() {
        let m = F2Matrix::from_dense(&[
            vec![1, 1, 0, 0],
            vec![0, 1, 1, 0],
            vec![1, 0, 1, 0],
            vec![0, 0, 0, 0],
        ]);
        assert_eq!(f2_rank(&m), 2);
        let basis = f2_kernel_basis(&m);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(m.apply(v).is_zero());
        }
        // Every annihilated vector is a combination of the basis.
        let mut span = std::collections::HashSet::new();
        for mask in 0..4u32 {
            let mut v = BitVec::zeros(4);
            for (k, b) in basis.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    v.xor_assign(b);
                }
            }
            span.insert(v);
        }
        for x in 0..16usize {
            let v = BitVec::from_indices(4, (0..4).filter(|i| x >> i & 1 == 1));
            assert_eq!(m.apply(&v).is_zero(), span.contains(&v));
        }
    }

    #[test]
    fn homology_rank_basics() {
        let z = F2Matrix::zeros(3, 3);
        assert_eq!(f2_homology_rank(&z, &z).unwrap(), 3);
        assert_eq!(f2_homology_rank(&F2Matrix::identity(3), &z).unwrap(), 0);
        let err = f2_homology_rank(&F2Matrix::identity(2), &F2Matrix::identity(2));
        assert!(matches!(err, Err(LinAlgError::CompositionNonzero { .. })));
    }

    #[test]
    fn rp2_cellular_homology_mod_two() {
        // Cellular chains of RP^2: d1 = 0, d2 = 2 = 0 mod 2.
        let d1 = F2Matrix::zeros(1, 1);
        let d2 = F2Matrix::zeros(1, 1);
        let h0 = f2_homology_rank(&d1, &F2Matrix::zeros(0, 1)).unwrap();
        let h1 = f2_homology_rank(&d2, &d1).unwrap();
        let h2 = f2_homology_rank(&F2Matrix::zeros(1, 0), &d2).unwrap();
        assert_eq!((h0, h1, h2), (1, 1, 1));
    }

    #[test]
    fn json_round_trip_and_validation() {
        let m = F2Matrix::from_ones(2, 3, [(0, 1), (1, 2)]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"rows":2,"cols":3,"ones":[[0,1],[1,2]]}"#);
        assert_eq!(serde_json::from_str::<F2Matrix>(&s).unwrap(), m);
        assert!(serde_json::from_str::<F2Matrix>(r#"{"rows":1,"cols":1,"ones":[[1,0]]}"#).is_err());
        assert!(serde_json::from_str::<F2Matrix>(r#"{"rows":1,"cols":1,"ones":[[0,0],[0,0]]}"#).is_err());
    }
}
