use hmrkit::f2lin::{cokernel_invariants, f2_kernel_basis, f2_rank, smith_normal_form, F2Matrix, IntMatrix};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

fn f2_matrix() -> impl Strategy<Value = F2Matrix> {
    (0usize..12, 0usize..12).prop_flat_map(|(r, c)| {
        prop::collection::vec(any::<bool>(), r * c).prop_map(move |bits| {
            let ones = bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| (i / c.max(1), i % c.max(1)));
            F2Matrix::from_ones(r, c, ones).unwrap()
        })
    })
}

fn int_matrix() -> impl Strategy<Value = IntMatrix> {
    (0usize..6, 0usize..6).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-9i64..10, c), r)
            .prop_map(move |rows| IntMatrix::from_rows(&rows, c).unwrap())
    })
}

fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut p = IntMatrix::identity(n);
    if n < 2 {
        return p;
    }
    for &(i, j, k) in ops {
        let (i, j) = (i % n, j % n);
        if i != j {
            for r in 0..n {
                let v = p.get(r, i) * k;
                *p.get_mut(r, j) += v;
            }
        }
    }
    p
}

proptest! {
    #[test]
    fn rank_is_transpose_invariant(m in f2_matrix()) {
        prop_assert_eq!(f2_rank(&m), f2_rank(&m.transpose()));
    }

    #[test]
    fn kernel_basis_is_a_basis(m in f2_matrix()) {
        let k = f2_kernel_basis(&m);
        prop_assert_eq!(k.len(), m.ncols() - f2_rank(&m));
        for v in &k {
            prop_assert!(m.apply(v).is_zero());
        }
        let as_matrix = F2Matrix::from_columns(m.ncols(), &k);
        prop_assert_eq!(f2_rank(&as_matrix), k.len());
    }

    #[test]
    fn smith_form_is_exact(a in int_matrix()) {
        let s = smith_normal_form(&a);
        prop_assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.d.clone());
        prop_assert_eq!(s.u.mul(&s.u_inv).unwrap(), IntMatrix::identity(a.nrows()));
        prop_assert_eq!(s.v.mul(&s.v_inv).unwrap(), IntMatrix::identity(a.ncols()));
        let diag = s.diagonal();
        for w in diag.windows(2) {
            prop_assert!(w[0] >= BigInt::zero());
            if !w[1].is_zero() {
                prop_assert!(!w[0].is_zero() && (&w[1] % &w[0]).is_zero());
            }
        }
        for r in 0..s.d.nrows() {
            for c in 0..s.d.ncols() {
                prop_assert!(r == c || s.d.get(r, c).is_zero());
            }
        }
    }

    #[test]
    fn cokernel_is_invariant_under_unimodular_change(
        a in int_matrix(),
        left in prop::collection::vec((0usize..6, 0usize..6, -3i64..=3), 0..6),
        right in prop::collection::vec((0usize..6, 0usize..6, -3i64..=3), 0..6),
    ) {
        let u = unimodular(a.nrows(), &left);
        let v = unimodular(a.ncols(), &right);
        let b = u.mul(&a).unwrap().mul(&v).unwrap();
        prop_assert_eq!(cokernel_invariants(&a), cokernel_invariants(&b));
    }
}
