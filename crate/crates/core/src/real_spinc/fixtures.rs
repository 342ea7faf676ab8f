//! Equivariant cellular data for standard involutions. Vertex counts are
//! parameters so that coarse and fine subdivisions of the same space can
//! be compared.

use num_integer::Integer;

use super::cells::{join, product, quotient, CellComplex, CellMap, SignedCell};
use super::{EquivariantCWData, SpincError};

fn build(m: &CellComplex, iota: &CellMap) -> EquivariantCWData {
    EquivariantCWData::from_involution(m, iota).expect("fixture involution is valid")
}

fn swap_two_points() -> CellMap {
    CellMap { images: vec![vec![SignedCell { cell: 1, sign: 1 }, SignedCell { cell: 0, sign: 1 }]] }
}

/// Two points exchanged.
pub fn point_pair() -> EquivariantCWData {
    build(&CellComplex::discrete(2), &swap_two_points())
}

/// One point, fixed.
pub fn fixed_point() -> EquivariantCWData {
    let p = CellComplex::point();
    build(&p, &CellMap::identity(&p))
}

/// Circle with `2n` vertices and the free antipodal rotation.
pub fn circle_antipodal(n: usize) -> EquivariantCWData {
    assert!(n >= 1);
    build(&CellComplex::circle(2 * n), &CellMap::circle_rotation(2 * n, n))
}

/// Circle with `2n` vertices and a reflection fixing two vertices.
pub fn circle_reflection(n: usize) -> EquivariantCWData {
    assert!(n >= 1);
    build(&CellComplex::circle(2 * n), &CellMap::circle_reflection(2 * n))
}

/// `S^3 = S^1 * S^1` with complex conjugation on both factors; the fixed
/// set is a circle.
pub fn sphere3_conjugation(m: usize) -> EquivariantCWData {
    assert!(m >= 1);
    let c = CellComplex::circle(2 * m);
    let (s3, idx) = join(&c, &c);
    let r = CellMap::circle_reflection(2 * m);
    build(&s3, &idx.map(&r, &r))
}

/// Lens space `L(p, q)` as the quotient of `S^1 * S^1` by
/// `(z, w) -> (ζz, ζ^q w)`, with the involution induced by conjugation.
/// Each circle has `2pm` vertices.
pub fn lens_space(p: usize, q: usize, m: usize) -> Result<EquivariantCWData, SpincError> {
    if p < 2 || m < 1 || q == 0 || q >= p || p.gcd(&q) != 1 {
        return Err(SpincError::Unsupported(format!("lens space L({p},{q}) needs p >= 2, 0 < q < p, gcd(p, q) = 1")));
    }
    let n = 2 * p * m;
    let c = CellComplex::circle(n);
    let (s3, idx) = join(&c, &c);
    let g = idx.map(&CellMap::circle_rotation(n, 2 * m), &CellMap::circle_rotation(n, (2 * m * q) % n));
    let lens = quotient(&s3, &g, p)?;
    let r = CellMap::circle_reflection(n);
    let iota = lens.descend(&idx.map(&r, &r));
    EquivariantCWData::from_involution(&lens.complex, &iota)
}

/// `S^2` as the suspension of a circle with `2n` vertices.
fn sphere2(n: usize) -> (CellComplex, super::cells::JoinIndex) {
    join(&CellComplex::discrete(2), &CellComplex::circle(2 * n))
}

/// `S^1 × S^2` with the identity on the circle and rotation by π about the
/// polar axis. The fixed set is two circles and the quotient is `S^1 × S^2`.
pub fn s1xs2_rotation(circle_vertices: usize, n: usize) -> EquivariantCWData {
    assert!(circle_vertices >= 1 && n >= 1);
    let c = CellComplex::circle(circle_vertices);
    let (s2, idx) = sphere2(n);
    let rot = idx.map(&CellMap::identity(&CellComplex::discrete(2)), &CellMap::circle_rotation(2 * n, n));
    let (m, pidx) = product(&c, &s2);
    build(&m, &pidx.map(&CellMap::identity(&c), &rot))
}

/// `S^1 × S^2` as the branched double cover of the two-component unlink:
/// a reflection of the circle times the reflection of `S^2` across its
/// equator.
pub fn s1xs2_unlink(m: usize, n: usize) -> EquivariantCWData {
    assert!(m >= 1 && n >= 1);
    let c = CellComplex::circle(2 * m);
    let (s2, idx) = sphere2(n);
    let flip = idx.map(&swap_two_points(), &CellMap::identity(&CellComplex::circle(2 * n)));
    let (total, pidx) = product(&c, &s2);
    build(&total, &pidx.map(&CellMap::circle_reflection(2 * m), &flip))
}

/// Torus with the involution `(x, y) -> (-x, -y)`, four fixed points.
pub fn torus_reflection(a: usize, b: usize) -> EquivariantCWData {
    assert!(a >= 1 && b >= 1);
    let (t, idx) = product(&CellComplex::circle(2 * a), &CellComplex::circle(2 * b));
    build(&t, &idx.map(&CellMap::circle_reflection(2 * a), &CellMap::circle_reflection(2 * b)))
}

/// Named fixtures with their coarse and fine variants.
pub fn catalog() -> Vec<(String, EquivariantCWData)> {
    let mut out: Vec<(String, EquivariantCWData)> = vec![
        ("point_pair".into(), point_pair()),
        ("fixed_point".into(), fixed_point()),
        ("circle_antipodal".into(), circle_antipodal(1)),
        ("circle_antipodal_fine".into(), circle_antipodal(3)),
        ("circle_reflection".into(), circle_reflection(1)),
        ("circle_reflection_fine".into(), circle_reflection(3)),
        ("s3_conjugation".into(), sphere3_conjugation(1)),
        ("s3_conjugation_fine".into(), sphere3_conjugation(2)),
        ("s1xs2_rotation".into(), s1xs2_rotation(1, 1)),
        ("s1xs2_rotation_fine".into(), s1xs2_rotation(3, 2)),
        ("s1xs2_unlink".into(), s1xs2_unlink(1, 1)),
        ("s1xs2_unlink_fine".into(), s1xs2_unlink(2, 2)),
        ("t2_reflection".into(), torus_reflection(1, 1)),
        ("t2_reflection_fine".into(), torus_reflection(2, 3)),
    ];
    for p in 2..=7usize {
        for q in 1..p {
            if p.gcd(&q) == 1 && q <= p / 2 + 1 {
                out.push((format!("lens_{p}_{q}"), lens_space(p, q, 1).expect("valid lens parameters")));
            }
        }
    }
    out.push(("lens_3_1_fine".into(), lens_space(3, 1, 2).expect("valid lens parameters")));
    out
}
