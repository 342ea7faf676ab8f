//! Random generators shared by the integration suites.
#![allow(dead_code)]

use hmrkit::complexes::{BlockDifferentials, Generator, Kind};
use hmrkit::f2lin::{f2_kernel_basis, BitVec, F2Matrix};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random differential on generators with the given gradings: a standard
/// paired form conjugated by grading-preserving elementary operations.
pub fn random_complex(rng: &mut ChaCha8Rng, grades: &[i64]) -> F2Matrix {
    let n = grades.len();
    let mut d = F2Matrix::zeros(n, n);
    let mut used = vec![false; n];
    for a in 0..n {
        if used[a] || rng.gen_bool(0.4) {
            continue;
        }
        let cands: Vec<usize> = (0..n).filter(|&b| !used[b] && b != a && grades[b] == grades[a] - 1).collect();
        if cands.is_empty() {
            continue;
        }
        let b = cands[rng.gen_range(0..cands.len())];
        used[a] = true;
        used[b] = true;
        d.set(b, a, true);
    }
    for _ in 0..3 * n {
        if let Some((a, b)) = same_grade_pair(rng, grades) {
            d = elementary(n, a, b).mul(&d).unwrap().mul(&elementary(n, a, b)).unwrap();
        }
    }
    d
}

pub fn same_grade_pair(rng: &mut ChaCha8Rng, grades: &[i64]) -> Option<(usize, usize)> {
    let n = grades.len();
    if n < 2 {
        return None;
    }
    let a = rng.gen_range(0..n);
    let cands: Vec<usize> = (0..n).filter(|&b| b != a && grades[b] == grades[a]).collect();
    if cands.is_empty() {
        return None;
    }
    Some((a, cands[rng.gen_range(0..cands.len())]))
}

/// `I + e_{ab}`, its own inverse over F2.
pub fn elementary(n: usize, a: usize, b: usize) -> F2Matrix {
    let mut e = F2Matrix::identity(n);
    e.set(a, b, true);
    e
}

/// Random map with `gr(target) = gr(source) - shift` on every entry.
pub fn random_graded_map(rng: &mut ChaCha8Rng, src: &[i64], dst: &[i64], shift: i64, p: f64) -> F2Matrix {
    let mut m = F2Matrix::zeros(dst.len(), src.len());
    for (c, &gs) in src.iter().enumerate() {
        for (r, &gd) in dst.iter().enumerate() {
            if gs - gd == shift && rng.gen_bool(p) {
                m.set(r, c, true);
            }
        }
    }
    m
}

/// Random chain map between complexes, preserving grading: a null-homotopic
/// part plus rank-one maps `cycle * cocycle`.
pub fn random_chain_map(
    rng: &mut ChaCha8Rng,
    d_src: &F2Matrix,
    src: &[i64],
    d_dst: &F2Matrix,
    dst: &[i64],
) -> F2Matrix {
    let k = random_graded_map(rng, src, dst, -1, 0.3);
    let mut f = d_dst.mul(&k).unwrap().add(&k.mul(d_src).unwrap()).unwrap();
    let cycles = f2_kernel_basis(d_dst);
    let cocycles = f2_kernel_basis(&d_src.transpose());
    for _ in 0..2 {
        if cycles.is_empty() || cocycles.is_empty() {
            break;
        }
        let z = &cycles[rng.gen_range(0..cycles.len())];
        let phi = &cocycles[rng.gen_range(0..cocycles.len())];
        let mut add = F2Matrix::zeros(dst.len(), src.len());
        for r in z.ones() {
            for c in phi.ones() {
                add.set(r, c, true);
            }
        }
        // Keep only the homogeneous pieces so the map preserves grading.
        for (r, c) in add.clone().ones() {
            if dst[r] != src[c] {
                add.set(r, c, false);
            }
        }
        if is_chain_map(&add, d_src, d_dst) {
            f = f.add(&add).unwrap();
        }
    }
    f
}

fn is_chain_map(f: &F2Matrix, d_src: &F2Matrix, d_dst: &F2Matrix) -> bool {
    d_dst.mul(f).unwrap() == f.mul(d_src).unwrap()
}

pub fn random_grades(rng: &mut ChaCha8Rng, max: usize) -> Vec<i64> {
    let n = rng.gen_range(0..=max);
    let mut g: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
    g.sort();
    g
}

struct Raw {
    o: Vec<i64>,
    s: Vec<i64>,
    u: Vec<i64>,
    oo: F2Matrix,
    os: F2Matrix,
    uo: F2Matrix,
    us: F2Matrix,
    bar_ss: F2Matrix,
    bar_us: F2Matrix,
    bar_su: F2Matrix,
    bar_uu: F2Matrix,
}

fn mul(a: &F2Matrix, b: &F2Matrix) -> F2Matrix {
    a.mul(b).unwrap()
}

fn add(a: &F2Matrix, b: &F2Matrix) -> F2Matrix {
    a.add(b).unwrap()
}

/// No interior generators; the obstructed block is a chain map.
fn boundary_only(rng: &mut ChaCha8Rng, max: usize) -> Raw {
    let s = random_grades(rng, max);
    let u = random_grades(rng, max);
    let d_s = random_complex(rng, &s);
    let d_u = random_complex(rng, &u);
    let j = random_chain_map(rng, &d_s, &s, &d_u, &u);
    let h = random_graded_map(rng, &u, &s, 1, 0.3);
    let bar_us = add(&add(&mul(&d_s, &h), &mul(&h, &d_u)), &mul(&mul(&h, &j), &h));
    Raw {
        oo: F2Matrix::zeros(0, 0),
        os: F2Matrix::zeros(s.len(), 0),
        uo: F2Matrix::zeros(0, u.len()),
        us: h.clone(),
        bar_ss: add(&d_s, &mul(&h, &j)),
        bar_uu: add(&d_u, &mul(&j, &h)),
        bar_su: j,
        bar_us,
        o: vec![],
        s,
        u,
    }
}

/// Interior generators present; the obstructed block vanishes.
fn with_interior(rng: &mut ChaCha8Rng, max: usize) -> Raw {
    let o = random_grades(rng, max);
    let s = random_grades(rng, max);
    let u = random_grades(rng, max);
    let alpha = random_complex(rng, &o);
    let d_s = random_complex(rng, &s);
    let d_u = random_complex(rng, &u);
    let k = random_graded_map(rng, &o, &s, 0, 0.4);
    let m = random_graded_map(rng, &u, &o, 0, 0.4);
    let gamma = add(&mul(&d_s, &k), &mul(&k, &alpha));
    let beta = add(&mul(&alpha, &m), &mul(&m, &d_u));
    let h = random_graded_map(rng, &u, &s, 1, 0.3);
    let bar_us = add(&add(&mul(&gamma, &beta), &mul(&d_s, &h)), &mul(&h, &d_u));
    Raw {
        oo: alpha,
        os: gamma,
        uo: beta,
        us: h,
        bar_ss: d_s,
        bar_us,
        bar_su: F2Matrix::zeros(u.len(), s.len()),
        bar_uu: d_u,
        o,
        s,
        u,
    }
}

fn block_diag(a: &F2Matrix, b: &F2Matrix) -> F2Matrix {
    F2Matrix::from_blocks(
        &[a.nrows(), b.nrows()],
        &[a.ncols(), b.ncols()],
        &[vec![Some(a), None], vec![None, Some(b)]],
    )
    .unwrap()
}

fn direct_sum(x: Raw, y: Raw) -> Raw {
    Raw {
        o: [x.o, y.o].concat(),
        s: [x.s, y.s].concat(),
        u: [x.u, y.u].concat(),
        oo: block_diag(&x.oo, &y.oo),
        os: block_diag(&x.os, &y.os),
        uo: block_diag(&x.uo, &y.uo),
        us: block_diag(&x.us, &y.us),
        bar_ss: block_diag(&x.bar_ss, &y.bar_ss),
        bar_us: block_diag(&x.bar_us, &y.bar_us),
        bar_su: block_diag(&x.bar_su, &y.bar_su),
        bar_uu: block_diag(&x.bar_uu, &y.bar_uu),
    }
}

/// Change of basis on one kind of generator by an elementary operation.
fn conjugate(raw: &mut Raw, kind: Kind, a: usize, b: usize) {
    let n = match kind {
        Kind::O => raw.o.len(),
        Kind::S => raw.s.len(),
        Kind::U => raw.u.len(),
    };
    let e = elementary(n, a, b);
    let left = |m: &mut F2Matrix| *m = mul(&e, m);
    let right = |m: &mut F2Matrix| *m = mul(m, &e);
    match kind {
        Kind::O => {
            left(&mut raw.oo);
            right(&mut raw.oo);
            right(&mut raw.os);
            left(&mut raw.uo);
        }
        Kind::S => {
            left(&mut raw.os);
            left(&mut raw.us);
            left(&mut raw.bar_ss);
            right(&mut raw.bar_ss);
            left(&mut raw.bar_us);
            right(&mut raw.bar_su);
        }
        Kind::U => {
            right(&mut raw.uo);
            right(&mut raw.us);
            right(&mut raw.bar_us);
            left(&mut raw.bar_su);
            left(&mut raw.bar_uu);
            right(&mut raw.bar_uu);
        }
    }
}

/// Random blocks satisfying all the identities that make the three
/// assembled differentials square to zero.
pub fn random_valid_blocks(rng: &mut ChaCha8Rng, max_per_kind: usize) -> BlockDifferentials {
    let x = boundary_only(rng, max_per_kind);
    let y = with_interior(rng, max_per_kind);
    let mut raw = direct_sum(x, y);
    for _ in 0..10 {
        for kind in [Kind::O, Kind::S, Kind::U] {
            let grades = match kind {
                Kind::O => raw.o.clone(),
                Kind::S => raw.s.clone(),
                Kind::U => raw.u.clone(),
            };
            if let Some((a, b)) = same_grade_pair(rng, &grades) {
                conjugate(&mut raw, kind, a, b);
            }
        }
    }
    let mut gens = Vec::new();
    for (kind, grades, tag) in [(Kind::O, &raw.o, "o"), (Kind::S, &raw.s, "s"), (Kind::U, &raw.u, "u")] {
        gens.extend(grades.iter().enumerate().map(|(i, &g)| Generator::new(format!("{tag}{i}"), kind, g)));
    }
    BlockDifferentials {
        generators: gens,
        oo: raw.oo,
        os: raw.os,
        uo: raw.uo,
        us: raw.us,
        bar_ss: raw.bar_ss,
        bar_us: raw.bar_us,
        bar_su: raw.bar_su,
        bar_uu: raw.bar_uu,
    }
}

pub fn bits(v: &BitVec) -> Vec<usize> {
    v.ones().collect()
}
