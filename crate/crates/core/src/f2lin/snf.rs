use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal with a
/// divisibility chain. The inverses of `U` and `V` are kept as well.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SnfResult {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|x| !x.is_zero()).count()
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.nrows().min(self.d.ncols());
        (0..n).map(|i| self.d.get(i, i).clone()).collect()
    }
}

struct Work {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_row_multiple(dst, src, k);
        self.u.add_row_multiple(dst, src, k);
        self.u_inv.add_col_multiple(src, dst, &-k);
    }

    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_col_multiple(dst, src, k);
        self.v.add_col_multiple(dst, src, k);
        self.v_inv.add_row_multiple(src, dst, &-k);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    /// Smallest nonzero |entry| in the trailing block, ties broken by the
    /// lowest (row, col).
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(BigInt, usize, usize)> = None;
        for r in t..self.a.nrows() {
            for c in t..self.a.ncols() {
                let x = self.a.get(r, c);
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().is_none_or(|(b, _, _)| ax < *b) {
                    best = Some((ax, r, c));
                }
            }
        }
        best.map(|(_, r, c)| (r, c))
    }
}

/// Smith normal form with deterministic pivoting.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let (m, n) = a.shape();
    let mut w = Work {
        a: a.clone(),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
        v_inv: IntMatrix::identity(n),
    };
    for t in 0..m.min(n) {
        let Some((r, c)) = w.pivot(t) else { break };
        w.swap_rows(t, r);
        w.swap_cols(t, c);
        loop {
            let mut dirty = false;
            for r in t + 1..m {
                let x = w.a.get(r, t).clone();
                if x.is_zero() {
                    continue;
                }
                let q = x.div_floor(w.a.get(t, t));
                w.add_row(r, t, &-q);
                if !w.a.get(r, t).is_zero() {
                    dirty = true;
                }
            }
            for c in t + 1..n {
                let x = w.a.get(t, c).clone();
                if x.is_zero() {
                    continue;
                }
                let q = x.div_floor(w.a.get(t, t));
                w.add_col(c, t, &-q);
                if !w.a.get(t, c).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // A remainder is now smaller than the pivot; restart with it.
                let (r, c) = w.pivot_in_cross(t);
                w.swap_rows(t, r);
                w.swap_cols(t, c);
                continue;
            }
            // Divisibility of the trailing block by the pivot.
            let p = w.a.get(t, t).clone();
            let bad = (t + 1..m).find(|&r| (t + 1..n).any(|c| !w.a.get(r, c).is_multiple_of(&p)));
            match bad {
                Some(r) => w.add_row(t, r, &BigInt::one()),
                None => break,
            }
        }
        if w.a.get(t, t).is_negative() {
            w.negate_row(t);
        }
    }
    SnfResult { u: w.u, d: w.a, v: w.v, u_inv: w.u_inv, v_inv: w.v_inv }
}

impl Work {
    /// Smallest nonzero entry in row `t` or column `t` from position `t` on.
    fn pivot_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best: Option<(BigInt, usize, usize)> = None;
        let cands = (t..self.a.nrows())
            .map(|r| (r, t))
            .chain((t + 1..self.a.ncols()).map(|c| (t, c)));
        for (r, c) in cands {
            let x = self.a.get(r, c);
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(b, _, _)| ax < *b) {
                best = Some((ax, r, c));
            }
        }
        let (_, r, c) = best.expect("cross has a nonzero entry");
        (r, c)
    }
}

/// Invariant factors of `Z^rows / im(a)`: the diagonal entries other than 1,
/// with a 0 for every free summand.
pub fn cokernel_invariants(a: &IntMatrix) -> Vec<BigInt> {
    let snf = smith_normal_form(a);
    let diag = snf.diagonal();
    let mut out: Vec<BigInt> = diag.into_iter().filter(|d| !d.is_one()).collect();
    // Rows beyond the diagonal contribute free summands.
    let extra = a.nrows().saturating_sub(a.ncols());
    out.extend(std::iter::repeat_n(BigInt::zero(), extra));
    // Keep torsion before free parts, each in divisibility order.
    out.sort_by(|x, y| match (x.is_zero(), y.is_zero()) {
        (true, false) => std::cmp::Ordering::Greater,
        (false, true) => std::cmp::Ordering::Less,
        _ => x.cmp(y),
    });
    out
}

/// Basis of the integer kernel of `a`, as columns of the returned matrix.
/// The basis spans the full saturated kernel lattice.
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    let cols: Vec<usize> = (r..a.ncols()).collect();
    snf.v.select_columns(&cols)
}

/// An integer solution of `a x = b`, if one exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), a.nrows());
    let snf = smith_normal_form(a);
    let ub = snf.u.apply(b);
    let diag = snf.diagonal();
    let mut y = vec![BigInt::zero(); a.ncols()];
    for (i, c) in ub.iter().enumerate() {
        let d = diag.get(i).cloned().unwrap_or_default();
        if d.is_zero() {
            if !c.is_zero() {
                return None;
            }
        } else {
            let (q, rem) = c.div_rem(&d);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(snf.v.apply(&y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check(a: &IntMatrix) -> SnfResult {
        let s = smith_normal_form(a);
        let uav = s.u.mul(a).unwrap().mul(&s.v).unwrap();
        assert_eq!(uav, s.d);
        assert_eq!(s.u.mul(&s.u_inv).unwrap(), IntMatrix::identity(a.nrows()));
        assert_eq!(s.v.mul(&s.v_inv).unwrap(), IntMatrix::identity(a.ncols()));
        for r in 0..s.d.nrows() {
            for c in 0..s.d.ncols() {
                if r != c {
                    assert!(s.d.get(r, c).is_zero());
                }
            }
        }
        let diag = s.diagonal();
        assert!(diag.iter().all(|x| !x.is_negative()));
        for w in diag.windows(2) {
            if !w[1].is_zero() {
                assert!(!w[0].is_zero() && w[1].is_multiple_of(&w[0]), "{diag:?}");
            } else if w[0].is_zero() {
                continue;
            }
        }
        s
    }

    #[test]
    fn hand_examples() {
        let s = check(&IntMatrix::diagonal(&[2, 3]));
        assert_eq!(s.diagonal(), big(&[1, 6]));
        let s = check(&IntMatrix::identity(4));
        assert_eq!(s.d, IntMatrix::identity(4));
        let s = check(&IntMatrix::from_i64(&[&[2, 4], &[6, 8]]));
        assert_eq!(s.diagonal(), big(&[2, 4]));
    }

    #[test]
    fn cokernels() {
        assert_eq!(cokernel_invariants(&IntMatrix::zeros(1, 1)), big(&[0]));
        assert_eq!(cokernel_invariants(&IntMatrix::from_i64(&[&[7]])), big(&[7]));
        assert_eq!(cokernel_invariants(&IntMatrix::diagonal(&[2, 4])), big(&[2, 4]));
        assert_eq!(cokernel_invariants(&IntMatrix::zeros(2, 0)), big(&[0, 0]));
        assert!(cokernel_invariants(&IntMatrix::zeros(0, 3)).is_empty());
        assert_eq!(cokernel_invariants(&IntMatrix::from_i64(&[&[2], &[0]])), big(&[2, 0]));
    }

    #[test]
    fn random_matrices_satisfy_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..150 {
            let (r, c) = (rng.gen_range(0..6), rng.gen_range(0..6));
            let rows: Vec<Vec<i64>> =
                (0..r).map(|_| (0..c).map(|_| rng.gen_range(-9..10)).collect()).collect();
            check(&IntMatrix::from_rows(&rows, c).unwrap());
        }
    }

    #[test]
    fn kernel_and_solve() {
        let a = IntMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = integer_kernel(&a);
        assert_eq!(k.ncols(), 2);
        assert!(a.mul(&k).unwrap().is_zero());
        let b = big(&[5, 10]);
        let x = solve_integer(&a, &b).unwrap();
        assert_eq!(a.apply(&x), b);
        assert!(solve_integer(&IntMatrix::from_i64(&[&[2]]), &big(&[3])).is_none());
    }

    #[test]
    fn large_entries_stay_exact() {
        let a = IntMatrix::from_i64(&[&[i64::MAX, 3], &[5, i64::MAX]]);
        check(&a);
    }

    #[test]
    fn json_round_trip() {
        let mut a = IntMatrix::from_i64(&[&[1, -2]]);
        a.set(0, 0, BigInt::from(i64::MAX) * 4);
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.contains('"'));
        assert_eq!(serde_json::from_str::<IntMatrix>(&s).unwrap(), a);
        let e = IntMatrix::from_i64(&[&[3, 4]]);
        assert_eq!(serde_json::to_string(&e).unwrap(), r#"{"rows":1,"cols":2,"data":[[3,4]]}"#);
    }
}
