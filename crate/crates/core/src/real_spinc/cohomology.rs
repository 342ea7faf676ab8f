use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{is_zero_vec, theta_matrix, iota_matrix, to_big, to_i64, EquivariantCWData, SpincError};
use crate::f2lin::{cokernel_invariants, integer_kernel, smith_normal_form, solve_integer, IntMatrix, SnfResult};

/// `H^n = ker δ^n / im δ^{n-1}` presented as `Z^k / im R`, where `Z^k`
/// are coordinates on the cocycle lattice.
#[derive(Debug, Clone)]
pub struct CohomologyGroup {
    pub degree: usize,
    /// Basis of the cocycle lattice, as columns.
    cocycles: IntMatrix,
    /// Cochain to cocycle coordinates (valid on cocycles).
    coords: IntMatrix,
    /// `δ^{n-1}` in cocycle coordinates.
    relations: IntMatrix,
    snf: SnfResult,
    /// Order of each coordinate after the change of basis; 0 for free.
    orders: Vec<BigInt>,
}

/// Group for the cochain complex given by `into` (`δ^{n-1}`) and `out` (`δ^n`).
fn present(degree: usize, into: &IntMatrix, out: &IntMatrix) -> CohomologyGroup {
    let snf = smith_normal_form(out);
    let r = snf.rank();
    let cols: Vec<usize> = (r..out.ncols()).collect();
    let cocycles = snf.v.select_columns(&cols);
    let coords = snf.v_inv.select_rows(&cols);
    let relations = coords.mul(into).expect("shapes agree");
    let rel_snf = smith_normal_form(&relations);
    let k = cocycles.ncols();
    let diag = rel_snf.diagonal();
    let orders = (0..k).map(|i| diag.get(i).cloned().unwrap_or_default()).collect();
    CohomologyGroup { degree, cocycles, coords, relations, snf: rel_snf, orders }
}

impl CohomologyGroup {
    pub fn cochain_dim(&self) -> usize {
        self.cocycles.nrows()
    }

    /// Invariant factors, torsion first, with 0 for each free summand.
    pub fn invariants(&self) -> Vec<BigInt> {
        self.orders.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.iter().all(One::is_one)
    }

    /// Positions of the nontrivial cyclic summands.
    fn nontrivial(&self) -> Vec<usize> {
        (0..self.orders.len()).filter(|&i| !self.orders[i].is_one()).collect()
    }

    pub fn is_cocycle(&self, z: &[BigInt], out: &IntMatrix) -> bool {
        is_zero_vec(&out.apply(z))
    }

    /// Coordinates of a cocycle on the cocycle lattice basis.
    fn lattice_coords(&self, z: &[BigInt]) -> Result<Vec<BigInt>, SpincError> {
        if z.len() != self.cochain_dim() {
            return Err(SpincError::CochainLength { expected: self.cochain_dim(), found: z.len() });
        }
        let y = self.coords.apply(z);
        if self.cocycles.apply(&y) != z {
            return Err(SpincError::NotCocycle);
        }
        Ok(y)
    }

    /// Class of a cocycle in the normal form `⊕ Z/d_i`, one entry per
    /// nontrivial summand, reduced into `[0, d_i)` for torsion summands.
    pub fn class_of(&self, z: &[BigInt]) -> Result<Vec<BigInt>, SpincError> {
        let y = self.lattice_coords(z)?;
        let x = self.snf.u.apply(&y);
        Ok(self.nontrivial().into_iter().map(|i| reduce(&x[i], &self.orders[i])).collect())
    }

    /// Cocycle representing the `j`-th nontrivial summand's generator.
    pub fn generator(&self, j: usize) -> Vec<BigInt> {
        let i = self.nontrivial()[j];
        self.cocycles.apply(&self.snf.u_inv.column(i))
    }

    pub fn rank(&self) -> usize {
        self.nontrivial().len()
    }
}

fn reduce(x: &BigInt, d: &BigInt) -> BigInt {
    if d.is_zero() {
        x.clone()
    } else {
        x.mod_floor(d)
    }
}

pub fn cohomology_group(data: &EquivariantCWData, n: usize, of_quotient: bool) -> Result<CohomologyGroup, SpincError> {
    data.check_degree(n)?;
    data.table()?;
    Ok(if of_quotient {
        present(n, &data.delta_q_into(n), &data.delta_q(n))
    } else {
        present(n, &data.delta_m_into(n), &data.delta_m(n))
    })
}

/// `Θ: H^n(M) -> H^n(Q)` between SNF presentations. Column `j` is the class
/// of `Θ̃` applied to the `j`-th generator of the source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaOnCohomology {
    pub degree: usize,
    pub source: Vec<i64>,
    pub target: Vec<i64>,
    pub matrix: IntMatrix,
}

pub fn theta_on_cohomology(data: &EquivariantCWData, n: usize) -> Result<ThetaOnCohomology, SpincError> {
    data.check_degree(n)?;
    let t = data.table()?;
    let hm = present(n, &data.delta_m_into(n), &data.delta_m(n));
    let hq = present(n, &data.delta_q_into(n), &data.delta_q(n));
    let theta = theta_matrix(data, &t, n);
    let mut cols = Vec::new();
    for j in 0..hm.rank() {
        cols.push(hq.class_of(&theta.apply(&hm.generator(j)))?);
    }
    Ok(ThetaOnCohomology {
        degree: n,
        source: hm.invariants().iter().map(to_i64).collect::<Result<_, _>>()?,
        target: hq.invariants().iter().map(to_i64).collect::<Result<_, _>>()?,
        matrix: IntMatrix::from_columns(hq.rank(), &cols),
    })
}

/// Whether the class of `c1` lies in the kernel of `Θ` in degree 2.
pub fn admits_real_structure(data: &EquivariantCWData, c1: &[i64]) -> Result<bool, SpincError> {
    data.check_degree(2)?;
    let t = data.table()?;
    let z = to_big(c1);
    if z.len() != data.cells_m[2] {
        return Err(SpincError::CochainLength { expected: data.cells_m[2], found: z.len() });
    }
    if !is_zero_vec(&data.delta_m(2).apply(&z)) {
        return Err(SpincError::NotCocycle);
    }
    let hq = present(2, &data.delta_q_into(2), &data.delta_q(2));
    let image = hq.class_of(&theta_matrix(data, &t, 2).apply(&z))?;
    Ok(is_zero_vec(&image))
}

/// Basis (as columns) of the lattice spanned by the columns of `g`.
fn lattice_basis(g: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(g);
    let diag = snf.diagonal();
    let cols: Vec<Vec<BigInt>> = (0..snf.rank())
        .map(|i| snf.u_inv.column(i).into_iter().map(|x| x * &diag[i]).collect())
        .collect();
    IntMatrix::from_columns(g.nrows(), &cols)
}

/// Invariants of `span(basis) / span(sub)`, where `sub` lies in `span(basis)`.
fn lattice_quotient(basis: &IntMatrix, sub: &IntMatrix) -> Result<Vec<BigInt>, SpincError> {
    let mut coords = Vec::with_capacity(sub.ncols());
    for c in 0..sub.ncols() {
        let col = sub.column(c);
        let x = solve_integer(basis, &col)
            .ok_or_else(|| SpincError::MalformedComplex("sublattice escapes its ambient lattice".into()))?;
        coords.push(x);
    }
    Ok(cokernel_invariants(&IntMatrix::from_columns(basis.ncols(), &coords)))
}

/// `{y : a·y ∈ im r}` as a lattice basis.
fn preimage_of_image(a: &IntMatrix, r: &IntMatrix) -> Result<IntMatrix, SpincError> {
    let neg_r = IntMatrix::zeros(r.nrows(), r.ncols()).sub(r)?;
    let k = integer_kernel(&a.hstack(&neg_r)?);
    let rows: Vec<usize> = (0..a.ncols()).collect();
    Ok(lattice_basis(&k.select_rows(&rows)))
}

/// Map induced on cocycle-lattice coordinates by a cochain map `f`.
fn induced(src: &CohomologyGroup, dst: &CohomologyGroup, f: &IntMatrix) -> IntMatrix {
    dst.coords.mul(&f.mul(&src.cocycles).unwrap()).unwrap()
}

/// Invariants of `ker(Θ: H^n(M) -> H^n(Q))`.
pub fn kernel_of_theta(data: &EquivariantCWData, n: usize) -> Result<Vec<BigInt>, SpincError> {
    data.check_degree(n)?;
    let t = data.table()?;
    let hm = present(n, &data.delta_m_into(n), &data.delta_m(n));
    let hq = present(n, &data.delta_q_into(n), &data.delta_q(n));
    let theta = induced(&hm, &hq, &theta_matrix(data, &t, n));
    let lattice = preimage_of_image(&theta, &hq.relations)?;
    lattice_quotient(&lattice, &hm.relations)
}

/// Invariants of `H^1(Q) / im Θ`: the equivalence classes of real
/// structures on a fixed line bundle.
pub fn real_structure_classes(data: &EquivariantCWData) -> Result<Vec<BigInt>, SpincError> {
    if data.cells_m.len() < 2 {
        return Ok(vec![]);
    }
    let t = data.table()?;
    let hm = present(1, &data.delta_m_into(1), &data.delta_m(1));
    let hq = present(1, &data.delta_q_into(1), &data.delta_q(1));
    let theta = induced(&hm, &hq, &theta_matrix(data, &t, 1));
    Ok(cokernel_invariants(&hq.relations.hstack(&theta)?))
}

/// Invariants of `H^1(M)^{ι*} / im(1 + ι*)`.
pub fn h1_invariant_quotient(data: &EquivariantCWData) -> Result<Vec<BigInt>, SpincError> {
    if data.cells_m.len() < 2 {
        return Ok(vec![]);
    }
    let t = data.table()?;
    let hm = present(1, &data.delta_m_into(1), &data.delta_m(1));
    let iota = induced(&hm, &hm, &iota_matrix(data, &t, 1));
    let k = iota.nrows();
    let id = IntMatrix::identity(k);
    let fixed = preimage_of_image(&iota.sub(&id)?, &hm.relations)?;
    let norm = iota.add(&id)?;
    lattice_quotient(&fixed, &norm.hstack(&hm.relations)?)
}

/// Census of real spin-c structures: a torsor over
/// `ker Θ (degree 2) × H^1(M)^{ι*} / im(1 + ι*)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealStructureCensus {
    pub exists: bool,
    /// Invariant factors of the torsor group; 0 marks a free summand.
    pub torsor_invariants: Vec<i64>,
    pub kernel_theta: Vec<i64>,
    pub h1_quotient: Vec<i64>,
    /// Number of structures, absent when infinite.
    pub size: Option<u64>,
    /// Order of the torsion subgroup of the torsor group: the number of
    /// structures over any one real line bundle class.
    pub torsion_size: u64,
}

/// Requires a fixed cell. When `c1` is given it must admit a real
/// structure; otherwise existence is taken as given.
pub fn real_spinc_torsor(data: &EquivariantCWData, c1: Option<&[i64]>) -> Result<RealStructureCensus, SpincError> {
    data.table()?;
    if !data.has_fixed_cells() {
        return Err(SpincError::Unsupported("free involutions have no constant real gauge transformations".into()));
    }
    if let Some(c) = c1 {
        if !admits_real_structure(data, c)? {
            return Err(SpincError::NoRealStructure);
        }
    }
    let kernel = if data.cells_m.len() > 2 { kernel_of_theta(data, 2)? } else { vec![] };
    let h1 = h1_invariant_quotient(data)?;
    let all: Vec<i64> = kernel.iter().chain(&h1).map(to_i64).collect::<Result<_, _>>()?;
    let torsor = cokernel_invariants(&IntMatrix::diagonal(&all));
    let torsor_invariants: Vec<i64> = torsor.iter().map(to_i64).collect::<Result<_, _>>()?;
    let size = if torsor_invariants.contains(&0) {
        None
    } else {
        Some(torsor_invariants.iter().map(|&d| d.unsigned_abs()).product())
    };
    let torsion_size = torsor_invariants.iter().filter(|&&d| d != 0).map(|&d| d.unsigned_abs()).product();
    Ok(RealStructureCensus {
        exists: true,
        torsion_size,
        torsor_invariants,
        kernel_theta: kernel.iter().map(to_i64).collect::<Result<_, _>>()?,
        h1_quotient: h1.iter().map(to_i64).collect::<Result<_, _>>()?,
        size,
    })
}

