//! Integer cellular chain complexes with signed cellular maps, joins,
//! products and quotients by cyclic groups of cellular maps.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::SpincError;
use crate::f2lin::IntMatrix;

/// Cellular chain complex. `boundary[n]` maps `C_{n+1} -> C_n`, so it has
/// `cells[n]` rows and `cells[n + 1]` columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellComplex {
    pub cells: Vec<usize>,
    pub boundary: Vec<IntMatrix>,
}

/// A cell sent to `sign` times another cell of the same dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedCell {
    pub cell: usize,
    pub sign: i64,
}

/// Cellular map sending each cell to plus or minus a cell, given per
/// dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellMap {
    pub images: Vec<Vec<SignedCell>>,
}

impl CellComplex {
    pub fn dim(&self) -> usize {
        self.cells.len().saturating_sub(1)
    }

    pub fn point() -> Self {
        Self { cells: vec![1], boundary: vec![] }
    }

    pub fn discrete(n: usize) -> Self {
        Self { cells: vec![n], boundary: vec![] }
    }

    /// Circle with `n >= 1` vertices `v_k` and edges `e_k: v_k -> v_{k+1}`.
    pub fn circle(n: usize) -> Self {
        assert!(n >= 1);
        let mut d = IntMatrix::zeros(n, n);
        for k in 0..n {
            let next = (k + 1) % n;
            *d.get_mut(next, k) += 1;
            *d.get_mut(k, k) -= 1;
        }
        Self { cells: vec![n, n], boundary: vec![d] }
    }

    /// `∂` restricted to `C_n -> C_{n-1}`, with zero matrices outside the
    /// stored range.
    pub fn d(&self, n: usize) -> IntMatrix {
        let rows = if n == 0 { 0 } else { self.count(n - 1) };
        if n >= 1 && n - 1 < self.boundary.len() {
            self.boundary[n - 1].clone()
        } else {
            IntMatrix::zeros(rows, self.count(n))
        }
    }

    pub fn count(&self, n: usize) -> usize {
        self.cells.get(n).copied().unwrap_or(0)
    }

    pub fn is_complex(&self) -> bool {
        (1..self.cells.len()).all(|n| self.d(n).mul(&self.d(n + 1)).map(|m| m.is_zero()).unwrap_or(false))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells.iter().enumerate().map(|(n, &c)| if n % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }

    /// Coboundary `C^n -> C^{n+1}`, the transpose of `∂_{n+1}`.
    pub fn coboundary(&self, n: usize) -> IntMatrix {
        self.d(n + 1).transpose()
    }
}

impl CellMap {
    pub fn identity(c: &CellComplex) -> Self {
        Self {
            images: c.cells.iter().map(|&n| (0..n).map(|k| SignedCell { cell: k, sign: 1 }).collect()).collect(),
        }
    }

    /// Rotation of [`CellComplex::circle`] by `shift` positions.
    pub fn circle_rotation(n: usize, shift: usize) -> Self {
        let img = (0..n).map(|k| SignedCell { cell: (k + shift) % n, sign: 1 }).collect::<Vec<_>>();
        Self { images: vec![img.clone(), img] }
    }

    /// Reflection `v_k -> v_{-k}` of [`CellComplex::circle`]; edges reverse.
    pub fn circle_reflection(n: usize) -> Self {
        let verts = (0..n).map(|k| SignedCell { cell: (n - k) % n, sign: 1 }).collect();
        let edges = (0..n).map(|k| SignedCell { cell: (2 * n - k - 1) % n, sign: -1 }).collect();
        Self { images: vec![verts, edges] }
    }

    pub fn apply(&self, dim: usize, cell: usize) -> SignedCell {
        self.images[dim][cell]
    }

    pub fn compose(&self, other: &CellMap) -> CellMap {
        // self after other
        let images = other
            .images
            .iter()
            .enumerate()
            .map(|(d, v)| {
                v.iter()
                    .map(|s| {
                        let t = self.apply(d, s.cell);
                        SignedCell { cell: t.cell, sign: s.sign * t.sign }
                    })
                    .collect()
            })
            .collect();
        CellMap { images }
    }

    /// Matrix of the induced chain map in dimension `n`.
    pub fn chain_matrix(&self, n: usize) -> IntMatrix {
        let k = self.images.get(n).map_or(0, Vec::len);
        let mut m = IntMatrix::zeros(k, k);
        for (c, s) in self.images.get(n).into_iter().flatten().enumerate() {
            m.set(s.cell, c, BigInt::from(s.sign));
        }
        m
    }

    /// Whether the map commutes with the boundary of `c`.
    pub fn is_chain_map(&self, c: &CellComplex) -> bool {
        (1..c.cells.len()).all(|n| {
            let lhs = c.d(n).mul(&self.chain_matrix(n)).unwrap();
            let rhs = self.chain_matrix(n - 1).mul(&c.d(n)).unwrap();
            lhs == rhs
        })
    }
}

/// Augmented complex view: dimension `-1` holds the single empty cell and
/// every vertex has boundary equal to it.
struct Augmented<'a> {
    c: &'a CellComplex,
}

impl Augmented<'_> {
    /// Number of cells in augmented dimension `d` (so `d = -1` gives 1).
    fn count(&self, d: i64) -> usize {
        if d == -1 {
            1
        } else if d < -1 {
            0
        } else {
            self.c.count(d as usize)
        }
    }

    /// Boundary of cell `k` in dimension `d` as (cell, coefficient) pairs.
    fn boundary(&self, d: i64, k: usize) -> Vec<(usize, i64)> {
        if d <= -1 {
            return vec![];
        }
        if d == 0 {
            return vec![(0, 1)];
        }
        let m = self.c.d(d as usize);
        (0..m.nrows())
            .filter_map(|r| {
                let v = m.get(r, k);
                (!v.is_zero()).then(|| (r, v.to_i64().expect("boundary coefficient fits i64")))
            })
            .collect()
    }

    fn max_dim(&self) -> i64 {
        self.c.cells.len() as i64 - 1
    }
}

/// Index bookkeeping for cells indexed by pairs `(a, b)` of cells of two
/// factors, grouped by total dimension.
struct PairIndex {
    /// `table[total][(da, ka, db, kb)] = position`
    positions: Vec<std::collections::HashMap<(i64, usize, i64, usize), usize>>,
    cells: Vec<usize>,
}

impl PairIndex {
    fn build(pairs: impl Iterator<Item = (i64, usize, i64, usize, usize)>, top: usize) -> Self {
        let mut positions = vec![std::collections::HashMap::new(); top + 1];
        let mut cells = vec![0usize; top + 1];
        for (da, ka, db, kb, total) in pairs {
            positions[total].insert((da, ka, db, kb), cells[total]);
            cells[total] += 1;
        }
        Self { positions, cells }
    }

    fn get(&self, total: usize, key: (i64, usize, i64, usize)) -> usize {
        self.positions[total][&key]
    }
}

fn join_pairs(x: &Augmented, y: &Augmented) -> Vec<(i64, usize, i64, usize, usize)> {
    let top = (x.max_dim() + y.max_dim() + 1) as usize;
    let mut out = Vec::new();
    for total in 0..=top as i64 {
        for da in -1..=x.max_dim() {
            let db = total - 1 - da;
            if db < -1 || db > y.max_dim() {
                continue;
            }
            for ka in 0..x.count(da) {
                for kb in 0..y.count(db) {
                    out.push((da, ka, db, kb, total as usize));
                }
            }
        }
    }
    out
}

/// Join `X * Y` with `∂(σ*τ) = ∂σ*τ + (-1)^{dim σ + 1} σ*∂τ`, using the
/// empty cell for `σ*∅ = σ` and `∅*τ = τ`.
pub fn join(x: &CellComplex, y: &CellComplex) -> (CellComplex, JoinIndex) {
    let ax = Augmented { c: x };
    let ay = Augmented { c: y };
    let top = (ax.max_dim() + ay.max_dim() + 1) as usize;
    let pairs = join_pairs(&ax, &ay);
    let idx = PairIndex::build(pairs.iter().copied(), top);
    let mut boundary = Vec::new();
    for total in 1..=top {
        let mut m = IntMatrix::zeros(idx.cells[total - 1], idx.cells[total]);
        for (&(da, ka, db, kb), &col) in &idx.positions[total] {
            for (ra, ca) in ax.boundary(da, ka) {
                if da - 1 == -1 && db == -1 {
                    continue; // ∅*∅ is not a cell
                }
                let row = idx.get(total - 1, (da - 1, ra, db, kb));
                *m.get_mut(row, col) += ca;
            }
            let sign = if (da + 1) % 2 == 0 { 1 } else { -1 };
            for (rb, cb) in ay.boundary(db, kb) {
                if da == -1 && db - 1 == -1 {
                    continue;
                }
                let row = idx.get(total - 1, (da, ka, db - 1, rb));
                *m.get_mut(row, col) += sign * cb;
            }
        }
        boundary.push(m);
    }
    (CellComplex { cells: idx.cells.clone(), boundary }, JoinIndex { idx })
}

/// Product `X × Y` with `∂(σ×τ) = ∂σ×τ + (-1)^{dim σ} σ×∂τ`.
pub fn product(x: &CellComplex, y: &CellComplex) -> (CellComplex, ProductIndex) {
    let top = x.dim() + y.dim();
    let mut pairs = Vec::new();
    for total in 0..=top {
        for da in 0..=x.dim() {
            if total < da || total - da > y.dim() {
                continue;
            }
            let db = total - da;
            for ka in 0..x.count(da) {
                for kb in 0..y.count(db) {
                    pairs.push((da as i64, ka, db as i64, kb, total));
                }
            }
        }
    }
    let idx = PairIndex::build(pairs.into_iter(), top);
    let mut boundary = Vec::new();
    for total in 1..=top {
        let mut m = IntMatrix::zeros(idx.cells[total - 1], idx.cells[total]);
        for (&(da, ka, db, kb), &col) in &idx.positions[total] {
            if da >= 1 {
                let d = x.d(da as usize);
                for ra in 0..d.nrows() {
                    let v = d.get(ra, ka).to_i64().unwrap();
                    if v != 0 {
                        let row = idx.get(total - 1, (da - 1, ra, db, kb));
                        *m.get_mut(row, col) += v;
                    }
                }
            }
            if db >= 1 {
                let sign = if da % 2 == 0 { 1 } else { -1 };
                let d = y.d(db as usize);
                for rb in 0..d.nrows() {
                    let v = d.get(rb, kb).to_i64().unwrap();
                    if v != 0 {
                        let row = idx.get(total - 1, (da, ka, db - 1, rb));
                        *m.get_mut(row, col) += sign * v;
                    }
                }
            }
        }
        boundary.push(m);
    }
    (CellComplex { cells: idx.cells.clone(), boundary }, ProductIndex { idx })
}

pub struct JoinIndex {
    idx: PairIndex,
}

pub struct ProductIndex {
    idx: PairIndex,
}

fn pair_map(idx: &PairIndex, f: &CellMap, g: &CellMap, augmented: bool) -> CellMap {
    let image = |m: &CellMap, d: i64, k: usize| -> SignedCell {
        if augmented && d == -1 {
            SignedCell { cell: 0, sign: 1 }
        } else {
            m.apply(d as usize, k)
        }
    };
    let images = idx
        .positions
        .iter()
        .enumerate()
        .map(|(total, table)| {
            let mut v = vec![SignedCell { cell: 0, sign: 0 }; idx.cells[total]];
            for (&(da, ka, db, kb), &pos) in table {
                let a = image(f, da, ka);
                let b = image(g, db, kb);
                v[pos] = SignedCell { cell: idx.get(total, (da, a.cell, db, b.cell)), sign: a.sign * b.sign };
            }
            v
        })
        .collect();
    CellMap { images }
}

impl JoinIndex {
    /// `f * g` on the join.
    pub fn map(&self, f: &CellMap, g: &CellMap) -> CellMap {
        pair_map(&self.idx, f, g, true)
    }
}

impl ProductIndex {
    /// `f × g` on the product.
    pub fn map(&self, f: &CellMap, g: &CellMap) -> CellMap {
        pair_map(&self.idx, f, g, false)
    }
}

/// Quotient by the cyclic group generated by `g` (of order `order`).
#[derive(Debug, Clone)]
pub struct Quotient {
    pub complex: CellComplex,
    /// Image of each cell of the original complex in the quotient, with the
    /// orientation sign.
    pub projection: Vec<Vec<SignedCell>>,
    /// Chosen representative of each quotient cell.
    pub representatives: Vec<Vec<usize>>,
    /// Cells whose stabilizer is nontrivial.
    pub fixed: Vec<Vec<bool>>,
}

/// Orbits are taken under `g`. A cell sent to itself by some nontrivial
/// power must be sent with sign +1; such cells are treated as pointwise
/// fixed.
pub fn quotient(c: &CellComplex, g: &CellMap, order: usize) -> Result<Quotient, SpincError> {
    if !g.is_chain_map(c) {
        return Err(SpincError::MalformedOrbitMap("group generator is not a chain map".into()));
    }
    let mut projection = Vec::new();
    let mut representatives = Vec::new();
    let mut fixed = Vec::new();
    for d in 0..c.cells.len() {
        let n = c.count(d);
        let mut proj = vec![SignedCell { cell: usize::MAX, sign: 0 }; n];
        let mut reps = Vec::new();
        let mut fix = vec![false; n];
        for k in 0..n {
            if proj[k].cell != usize::MAX {
                continue;
            }
            let q = reps.len();
            reps.push(k);
            let mut cur = SignedCell { cell: k, sign: 1 };
            for step in 0..order {
                // g^step(k) = cur.sign * cur.cell, so cur.cell projects to
                // cur.sign times the class of k.
                if step > 0 && cur.cell == k {
                    if cur.sign != 1 {
                        return Err(SpincError::MalformedOrbitMap(format!(
                            "cell {k} in dimension {d} is reversed by its stabilizer"
                        )));
                    }
                    fix[k] = true;
                }
                let slot = &mut proj[cur.cell];
                if slot.cell == usize::MAX {
                    *slot = SignedCell { cell: q, sign: cur.sign };
                } else if slot.cell != q || slot.sign != cur.sign {
                    return Err(SpincError::MalformedOrbitMap(format!(
                        "orbit of cell {k} in dimension {d} is inconsistent"
                    )));
                }
                let nx = g.apply(d, cur.cell);
                cur = SignedCell { cell: nx.cell, sign: cur.sign * nx.sign };
            }
            if cur != (SignedCell { cell: k, sign: 1 }) {
                return Err(SpincError::MalformedOrbitMap(format!("generator does not have order {order}")));
            }
        }
        for k in 0..n {
            let r = reps[proj[k].cell];
            if fix[r] {
                fix[k] = true;
            }
        }
        projection.push(proj);
        representatives.push(reps);
        fixed.push(fix);
    }
    let cells: Vec<usize> = representatives.iter().map(Vec::len).collect();
    let mut boundary = Vec::new();
    for d in 1..c.cells.len() {
        let full = c.d(d);
        let mut m = IntMatrix::zeros(cells[d - 1], cells[d]);
        for (q, &rep) in representatives[d].iter().enumerate() {
            for r in 0..full.nrows() {
                let v = full.get(r, rep).to_i64().unwrap();
                if v != 0 {
                    let p = projection[d - 1][r];
                    *m.get_mut(p.cell, q) += v * p.sign;
                }
            }
        }
        boundary.push(m);
    }
    Ok(Quotient { complex: CellComplex { cells, boundary }, projection, representatives, fixed })
}

impl Quotient {
    /// Map induced on the quotient by a map commuting with the group up to
    /// group elements.
    pub fn descend(&self, f: &CellMap) -> CellMap {
        let images = self
            .representatives
            .iter()
            .enumerate()
            .map(|(d, reps)| {
                reps.iter()
                    .map(|&r| {
                        let t = f.apply(d, r);
                        let p = self.projection[d][t.cell];
                        SignedCell { cell: p.cell, sign: t.sign * p.sign }
                    })
                    .collect()
            })
            .collect();
        CellMap { images }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Integer homology ranks and torsion via Smith normal form.
    fn homology(c: &CellComplex) -> Vec<Vec<i64>> {
        (0..c.cells.len())
            .map(|n| {
                let d_n = c.d(n);
                let rank_n = crate::f2lin::smith_normal_form(&d_n).rank();
                let kernel = c.count(n) - rank_n;
                let d_up = c.d(n + 1);
                let snf = crate::f2lin::smith_normal_form(&d_up);
                let mut out: Vec<i64> = snf.diagonal().iter().filter_map(|x| x.to_i64()).filter(|&x| x > 1).collect();
                let free = kernel - snf.rank();
                out.extend(std::iter::repeat_n(0, free));
                out
            })
            .collect()
    }

    #[test]
    fn circle_homology() {
        let c = CellComplex::circle(4);
        assert!(c.is_complex());
        assert_eq!(homology(&c), vec![vec![0], vec![0]]);
        assert!(CellMap::circle_reflection(4).is_chain_map(&c));
        assert!(CellMap::circle_rotation(4, 1).is_chain_map(&c));
    }

    #[test]
    fn join_of_circles_is_three_sphere() {
        let (s3, _) = join(&CellComplex::circle(2), &CellComplex::circle(3));
        assert!(s3.is_complex());
        assert_eq!(s3.euler_characteristic(), 0);
        assert_eq!(homology(&s3), vec![vec![0], vec![], vec![], vec![0]]);
    }

    #[test]
    fn suspension_of_circle_is_two_sphere() {
        let (s2, _) = join(&CellComplex::discrete(2), &CellComplex::circle(4));
        assert!(s2.is_complex());
        assert_eq!(homology(&s2), vec![vec![0], vec![], vec![0]]);
    }

    #[test]
    fn torus_product() {
        let (t2, _) = product(&CellComplex::circle(2), &CellComplex::circle(3));
        assert!(t2.is_complex());
        assert_eq!(homology(&t2), vec![vec![0], vec![0, 0], vec![0]]);
    }

    #[test]
    fn lens_space_quotient() {
        for (p, q) in [(3usize, 1usize), (5, 2), (4, 1)] {
            let n = 2 * p;
            let (s3, idx) = join(&CellComplex::circle(n), &CellComplex::circle(n));
            let g = idx.map(&CellMap::circle_rotation(n, 2), &CellMap::circle_rotation(n, 2 * q));
            assert!(g.is_chain_map(&s3));
            let lq = quotient(&s3, &g, p).unwrap();
            assert!(lq.fixed.iter().flatten().all(|&f| !f));
            let h = homology(&lq.complex);
            assert_eq!(h[1], vec![p as i64]);
            assert_eq!(h[3], vec![0]);
        }
    }

    #[test]
    fn reflection_quotient_of_circle_is_interval() {
        let c = CellComplex::circle(4);
        let q = quotient(&c, &CellMap::circle_reflection(4), 2).unwrap();
        assert_eq!(q.complex.cells, vec![3, 2]);
        assert_eq!(homology(&q.complex), vec![vec![0], vec![]]);
        assert_eq!(q.fixed[0], vec![true, false, true, false]);
    }

    #[test]
    fn reversed_invariant_cell_is_rejected() {
        // Reflection of a 2-gon through the midpoints of its edges.
        let c = CellComplex::circle(2);
        let f = CellMap {
            images: vec![
                vec![SignedCell { cell: 1, sign: 1 }, SignedCell { cell: 0, sign: 1 }],
                vec![SignedCell { cell: 0, sign: -1 }, SignedCell { cell: 1, sign: -1 }],
            ],
        };
        assert!(f.is_chain_map(&c));
        assert!(quotient(&c, &f, 2).is_err());
    }
}
