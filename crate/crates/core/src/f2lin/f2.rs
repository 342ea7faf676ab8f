use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::bits::{BitMatrix, BitVec};
use super::LinAlgError;

/// Matrix over the two-element field, stored as the set of positions
/// holding a one.
///
/// Columns index the source basis and rows the target basis, so a
/// differential `C_k -> C_{k-1}` has `dim C_{k-1}` rows.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "F2MatrixJson", into = "F2MatrixJson")]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    ones: BTreeSet<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct F2MatrixJson {
    rows: usize,
    cols: usize,
    ones: Vec<[usize; 2]>,
}

impl TryFrom<F2MatrixJson> for F2Matrix {
    type Error = LinAlgError;

    fn try_from(j: F2MatrixJson) -> Result<Self, Self::Error> {
        F2Matrix::from_ones(j.rows, j.cols, j.ones.into_iter().map(|[r, c]| (r, c)))
    }
}

impl From<F2Matrix> for F2MatrixJson {
    fn from(m: F2Matrix) -> Self {
        F2MatrixJson {
            rows: m.rows,
            cols: m.cols,
            ones: m.ones.into_iter().map(|(r, c)| [r, c]).collect(),
        }
    }
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            ones: BTreeSet::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            ones: (0..n).map(|i| (i, i)).collect(),
        }
    }

    /// Builds a matrix from explicit positions. Out-of-range or repeated
    /// positions are rejected.
    pub fn from_ones(
        rows: usize,
        cols: usize,
        ones: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, LinAlgError> {
        let mut set = BTreeSet::new();
        for (r, c) in ones {
            if r >= rows || c >= cols {
                return Err(LinAlgError::OutOfBounds { row: r, col: c, rows, cols });
            }
            if !set.insert((r, c)) {
                return Err(LinAlgError::DuplicateEntry { row: r, col: c });
            }
        }
        Ok(Self { rows, cols, ones: set })
    }

    pub fn from_dense(rows: &[Vec<u8>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(nrows, ncols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged dense matrix");
            for (c, &x) in row.iter().enumerate() {
                if x % 2 == 1 {
                    m.ones.insert((r, c));
                }
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.ones.contains(&(r, c))
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "position ({r},{c}) out of range");
        if value {
            self.ones.insert((r, c));
        } else {
            self.ones.remove(&(r, c));
        }
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        let v = self.get(r, c);
        self.set(r, c, !v);
    }

    pub fn ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.ones.iter().copied()
    }

    pub fn nnz(&self) -> usize {
        self.ones.len()
    }

    pub fn is_zero(&self) -> bool {
        self.ones.is_empty()
    }

    pub fn transpose(&self) -> Self {
        Self {
            rows: self.cols,
            cols: self.rows,
            ones: self.ones.iter().map(|&(r, c)| (c, r)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinAlgError> {
        if self.shape() != other.shape() {
            return Err(LinAlgError::ShapeMismatch {
                op: "add",
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            ones: self.ones.symmetric_difference(&other.ones).copied().collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::ShapeMismatch {
                op: "mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut by_row: Vec<Vec<usize>> = vec![Vec::new(); other.rows];
        for &(r, c) in &other.ones {
            by_row[r].push(c);
        }
        let mut ones = BTreeSet::new();
        for &(r, k) in &self.ones {
            for &c in &by_row[k] {
                if !ones.insert((r, c)) {
                    ones.remove(&(r, c));
                }
            }
        }
        Ok(Self {
            rows: self.rows,
            cols: other.cols,
            ones,
        })
    }

    /// Image of a column vector.
    pub fn apply(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols);
        let mut out = BitVec::zeros(self.rows);
        for &(r, c) in &self.ones {
            if v.get(c) {
                out.flip(r);
            }
        }
        out
    }

    pub fn column(&self, c: usize) -> BitVec {
        BitVec::from_indices(
            self.rows,
            self.ones.iter().filter(|&&(_, cc)| cc == c).map(|&(r, _)| r),
        )
    }

    /// Restriction to the given row and column index lists, in order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let row_pos: std::collections::HashMap<usize, usize> =
            rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let col_pos: std::collections::HashMap<usize, usize> =
            cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let ones = self
            .ones
            .iter()
            .filter_map(|(r, c)| Some((*row_pos.get(r)?, *col_pos.get(c)?)))
            .collect();
        Self {
            rows: rows.len(),
            cols: cols.len(),
            ones,
        }
    }

    /// Assembles a block matrix. `blocks[i][j]` is the block in block-row
    /// `i` and block-column `j`; `None` stands for a zero block.
    pub fn from_blocks(
        row_sizes: &[usize],
        col_sizes: &[usize],
        blocks: &[Vec<Option<&F2Matrix>>],
    ) -> Result<Self, LinAlgError> {
        let rows: usize = row_sizes.iter().sum();
        let cols: usize = col_sizes.iter().sum();
        let mut out = Self::zeros(rows, cols);
        let mut r0 = 0;
        for (bi, &rs) in row_sizes.iter().enumerate() {
            let mut c0 = 0;
            for (bj, &cs) in col_sizes.iter().enumerate() {
                if let Some(b) = blocks[bi][bj] {
                    if b.shape() != (rs, cs) {
                        return Err(LinAlgError::ShapeMismatch {
                            op: "block",
                            left: (rs, cs),
                            right: b.shape(),
                        });
                    }
                    for (r, c) in b.ones() {
                        out.ones.insert((r0 + r, c0 + c));
                    }
                }
                c0 += cs;
            }
            r0 += rs;
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.rows, self.cols);
        for &(r, c) in &self.ones {
            m.set(r, c, true);
        }
        m
    }

    pub fn from_columns(rows: usize, columns: &[BitVec]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, v) in columns.iter().enumerate() {
            assert_eq!(v.len(), rows);
            for r in v.ones() {
                m.ones.insert((r, c));
            }
        }
        m
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.cols)?;
        if self.rows <= 32 && self.cols <= 64 {
            for r in 0..self.rows {
                let line: String = (0..self.cols)
                    .map(|c| if self.get(r, c) { '1' } else { '.' })
                    .collect();
                writeln!(f, "  {line}")?;
            }
        } else {
            writeln!(f, "  {} nonzero entries", self.ones.len())?;
        }
        Ok(())
    }
}
