use serde::{Deserialize, Serialize};

use super::{assemble, BlockDifferentials, ComplexError, FlavorComplex, Kind, ThreeComplexes};
use crate::f2lin::{f2_kernel_basis, BitMatrix, BitVec, F2Matrix};

/// The maps `i: bar -> check`, `j: check -> hat`, `p: hat -> bar` whose
/// induced maps form the long exact sequence.
///
/// ```text
/// i = [[0, uo], [1, us]]          (s, u) -> (o, s)
/// j = [[1, 0], [0, bar_su]]       (o, s) -> (o, u)
/// p = [[os, us], [0, 1]]          (o, u) -> (s, u)
/// ```
///
/// `i` and `j` preserve grading, `p` lowers it by one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LesMaps {
    pub i: F2Matrix,
    pub j: F2Matrix,
    pub p: F2Matrix,
}

pub fn les_maps(b: &BlockDifferentials) -> Result<LesMaps, ComplexError> {
    b.validate()?;
    let no = b.indices(Kind::O).len();
    let ns = b.indices(Kind::S).len();
    let nu = b.indices(Kind::U).len();
    let id_s = F2Matrix::identity(ns);
    let id_u = F2Matrix::identity(nu);
    let id_o = F2Matrix::identity(no);
    let i = F2Matrix::from_blocks(
        &[no, ns],
        &[ns, nu],
        &[vec![None, Some(&b.uo)], vec![Some(&id_s), Some(&b.us)]],
    )?;
    let j = F2Matrix::from_blocks(
        &[no, nu],
        &[no, ns],
        &[vec![Some(&id_o), None], vec![None, Some(&b.bar_su)]],
    )?;
    let p = F2Matrix::from_blocks(
        &[ns, nu],
        &[no, nu],
        &[vec![Some(&b.os), Some(&b.us)], vec![None, Some(&id_u)]],
    )?;
    Ok(LesMaps { i, j, p })
}

impl LesMaps {
    /// `[i.bar = check.i, j.check = hat.j, p.hat = bar.p]`
    pub fn chain_map_identities(&self, c: &ThreeComplexes) -> [bool; 3] {
        let eq = |a: Result<F2Matrix, _>, b: Result<F2Matrix, _>| match (a, b) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        };
        [
            eq(self.i.mul(&c.bar.d), c.check.d.mul(&self.i)),
            eq(self.j.mul(&c.check.d), c.hat.d.mul(&self.j)),
            eq(self.p.mul(&c.hat.d), c.bar.d.mul(&self.p)),
        ]
    }
}

/// Position in the sequence `H_g(bar) -> H_g(check) -> H_g(hat) -> H_{g-1}(bar)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LesSpot {
    Check,
    Hat,
    Bar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LesFailure {
    pub spot: LesSpot,
    pub grading: i64,
}

fn columns(m: &F2Matrix) -> Vec<BitVec> {
    (0..m.ncols()).map(|c| m.column(c)).collect()
}

fn span_rank(vecs: &[BitVec], len: usize) -> usize {
    BitMatrix::from_rows(vecs.to_vec(), len).rank()
}

/// Exactness of `A_a --f--> B_g --h--> C_c` on homology.
#[allow(clippy::too_many_arguments)]
fn exact_at(
    a: &FlavorComplex,
    f: &F2Matrix,
    a_deg: i64,
    b: &FlavorComplex,
    g: i64,
    h: &F2Matrix,
    c: &FlavorComplex,
    c_deg: i64,
) -> bool {
    let a_basis = a.basis_at(a_deg);
    let b_basis = b.basis_at(g);
    let c_basis = c.basis_at(c_deg);
    let dim_b = b_basis.len();
    if dim_b == 0 {
        return true;
    }
    let f_g = f.submatrix(&b_basis, &a_basis);
    let h_g = h.submatrix(&c_basis, &b_basis);

    // Image of f_* together with the boundaries of B.
    let mut s1: Vec<BitVec> = f2_kernel_basis(&a.d_at(a_deg)).iter().map(|z| f_g.apply(z)).collect();
    let boundaries_b = columns(&b.d_at(g + 1));
    s1.extend(boundaries_b.iter().cloned());

    // Cycles of B sent to boundaries of C.
    let z_b = f2_kernel_basis(&b.d_at(g));
    let bd_c = columns(&c.d_at(c_deg + 1));
    let mut stacked: Vec<BitVec> = z_b.iter().map(|z| h_g.apply(z)).collect();
    stacked.extend(bd_c.iter().cloned());
    let m = F2Matrix::from_columns(c_basis.len(), &stacked);
    let s2: Vec<BitVec> = f2_kernel_basis(&m)
        .iter()
        .map(|x| {
            let mut v = BitVec::zeros(dim_b);
            for k in x.ones().take_while(|&k| k < z_b.len()) {
                v.xor_assign(&z_b[k]);
            }
            v
        })
        .collect();

    let r1 = span_rank(&s1, dim_b);
    let r2 = span_rank(&s2, dim_b);
    let both: Vec<BitVec> = s1.into_iter().chain(s2).collect();
    r1 == r2 && span_rank(&both, dim_b) == r1
}

/// All spots where exactness fails, over the interior of the grading window
/// spanned by the generators. The two extreme gradings are skipped since
/// truncated complexes are not expected to be exact there.
pub fn les_failures(c: &ThreeComplexes, maps: &LesMaps) -> Vec<LesFailure> {
    let ranges: Vec<(i64, i64)> =
        [&c.check, &c.hat, &c.bar].iter().filter_map(|f| f.grading_range()).collect();
    let Some(lo) = ranges.iter().map(|r| r.0).min() else {
        return Vec::new();
    };
    let hi = ranges.iter().map(|r| r.1).max().unwrap();
    let mut out = Vec::new();
    for g in lo + 1..hi {
        if !exact_at(&c.bar, &maps.i, g, &c.check, g, &maps.j, &c.hat, g) {
            out.push(LesFailure { spot: LesSpot::Check, grading: g });
        }
        if !exact_at(&c.check, &maps.j, g, &c.hat, g, &maps.p, &c.bar, g - 1) {
            out.push(LesFailure { spot: LesSpot::Hat, grading: g });
        }
        if !exact_at(&c.hat, &maps.p, g + 1, &c.bar, g, &maps.i, &c.check, g) {
            out.push(LesFailure { spot: LesSpot::Bar, grading: g });
        }
    }
    out
}

pub fn verify_les_exact(c: &ThreeComplexes, maps: &LesMaps) -> bool {
    maps.chain_map_identities(c).iter().all(|&ok| ok) && les_failures(c, maps).is_empty()
}

/// Convenience wrapper: assemble, build the maps and check exactness.
pub fn blocks_les_exact(b: &BlockDifferentials) -> Result<bool, ComplexError> {
    let c = assemble(b)?;
    Ok(verify_les_exact(&c, &les_maps(b)?))
}
