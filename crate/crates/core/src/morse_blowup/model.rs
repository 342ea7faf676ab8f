use serde::{Deserialize, Serialize};

use super::{LinearFlowModel, MorseError, Spectrum, DEFAULT_TOLERANCE};
use crate::complexes::{BlockDifferentials, Generator, Kind};
use crate::f2lin::F2Matrix;

/// A critical point of the base Morse function with its normal operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasePoint {
    pub id: String,
    pub index: i64,
    #[serde(rename = "L")]
    pub l: Vec<Vec<f64>>,
}

/// Base critical points plus the mod-2 count of base trajectories.
/// `counts[(b, a)] = 1` means an odd number of trajectories from point `a`
/// down to point `b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaseMorseData {
    pub points: Vec<BasePoint>,
    #[serde(default)]
    pub counts: Option<F2Matrix>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

impl BaseMorseData {
    pub fn single(l: Vec<Vec<f64>>) -> Self {
        Self {
            points: vec![BasePoint { id: "q".into(), index: 0, l }],
            counts: None,
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    fn spectra(&self) -> Result<Vec<Spectrum>, MorseError> {
        self.points
            .iter()
            .map(|p| LinearFlowModel { l: p.l.clone(), tolerance: self.tolerance }.spectrum())
            .collect()
    }

    fn counts_or_zero(&self) -> F2Matrix {
        let n = self.points.len();
        self.counts.clone().unwrap_or_else(|| F2Matrix::zeros(n, n))
    }
}

/// One base point with fiber spectrum made of `negative` negative and
/// `positive` positive eigenvalues (`-negative..-1` and `1..positive`).
/// Its blow-up models the reducible critical points over the sphere.
pub fn sphere_model(positive: usize, negative: usize) -> BaseMorseData {
    let mut values: Vec<f64> = (1..=negative).rev().map(|k| -(k as f64)).collect();
    values.extend((1..=positive).map(|k| k as f64));
    BaseMorseData::single(LinearFlowModel::diagonal(&values).l)
}

fn generator_id(point: &BasePoint, i: usize) -> String {
    format!("{}:{}", point.id, i)
}

/// Blown-up critical points `(q, [w_i])`, kind `s` when `λ_i(q) > 0` and `u`
/// otherwise. The grading is `ind(q) + i - 1` for stable and `ind(q) + i`
/// for unstable points (`i` counted from 1).
pub fn blowup_critical_points(base: &BaseMorseData) -> Result<Vec<Generator>, MorseError> {
    let spectra = base.spectra()?;
    let mut out = Vec::new();
    for (p, sp) in base.points.iter().zip(&spectra) {
        for (k, &lam) in sp.values.iter().enumerate() {
            let i = k as i64 + 1;
            let (kind, gr) = if lam > 0.0 { (Kind::S, p.index + i - 1) } else { (Kind::U, p.index + i) };
            out.push(Generator::new(generator_id(p, k + 1), kind, gr));
        }
    }
    Ok(out)
}

/// Mod-2 count of unparametrized trajectories from `[w_i]` to `[w_j]` in
/// the projective model (1-based indices).
///
/// For `λ_i > λ_j` adjacent, the trajectories `c_0 e^{-λ_i t} w_i + c_1
/// e^{-λ_j t} w_j` form two components (the sign of `c_0 c_1`), so the
/// count is even. Otherwise the space is empty, or of the wrong dimension
/// to be counted.
pub fn adjacent_trajectory_count_mod2(model: &LinearFlowModel, i: usize, j: usize) -> Result<bool, MorseError> {
    let sp = model.spectrum()?;
    let n = sp.dim();
    if i == 0 || j == 0 || i > n || j > n {
        return Err(MorseError::DimensionMismatch { expected: n, found: i.max(j) });
    }
    if i == j || sp.values[i - 1] < sp.values[j - 1] || i != j + 1 {
        return Ok(false);
    }
    let components = 2u32;
    Ok(components % 2 == 1)
}

/// How the relative grading is pinned to integers.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Anchor {
    /// Lowest stable generator over the first base point of minimal index
    /// gets grading 0; without stable generators, its highest unstable one.
    #[default]
    Default,
    /// Keep the index-formula gradings.
    Raw,
    /// The named generator gets the given grading.
    Generator { id: String, grading: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelComplexes {
    pub blocks: BlockDifferentials,
    /// Amount added to the index-formula gradings.
    pub shift: i64,
}

/// Blocks of the blown-up complex for a product normal bundle: the bar
/// blocks are the base differential tensored with the identity on the
/// fiber plus the fiberwise projective counts, and there are no interior
/// generators.
pub fn build_model_complexes(base: &BaseMorseData, anchor: &Anchor) -> Result<ModelComplexes, MorseError> {
    if base.points.is_empty() {
        return Err(MorseError::EmptyBase);
    }
    let spectra = base.spectra()?;
    let counts = base.counts_or_zero();
    let np = base.points.len();
    if counts.shape() != (np, np) {
        return Err(MorseError::CountShape { expected: (np, np), found: counts.shape() });
    }
    for (b, a) in counts.ones() {
        let (pa, pb) = (&base.points[a], &base.points[b]);
        if pa.index - pb.index != 1 {
            return Err(MorseError::GradingViolation { from: pa.id.clone(), to: pb.id.clone() });
        }
        if spectra[a].sign_pattern() != spectra[b].sign_pattern() {
            return Err(MorseError::IncompatibleFibers { from: pa.id.clone(), to: pb.id.clone() });
        }
    }
    if !counts.mul(&counts).map_err(crate::complexes::ComplexError::from)?.is_zero() {
        return Err(MorseError::CompositionNonzero);
    }

    let mut gens = blowup_critical_points(base)?;
    let shift = anchor_shift(base, &spectra, &gens, anchor)?;
    for g in &mut gens {
        g.gr += shift;
    }

    // Position of (point, eigen index) within its kind.
    let mut pos = Vec::with_capacity(np);
    let (mut ns, mut nu) = (0usize, 0usize);
    for sp in &spectra {
        let mut row = Vec::with_capacity(sp.dim());
        for &lam in &sp.values {
            if lam > 0.0 {
                row.push((Kind::S, ns));
                ns += 1;
            } else {
                row.push((Kind::U, nu));
                nu += 1;
            }
        }
        pos.push(row);
    }
    let mut blocks = BlockDifferentials::zero(gens);
    for (b, a) in counts.ones() {
        for (&(ka, ia), &(kb, ib)) in pos[a].iter().zip(&pos[b]) {
            debug_assert_eq!(ka, kb);
            match ka {
                Kind::S => blocks.bar_ss.flip(ib, ia),
                _ => blocks.bar_uu.flip(ib, ia),
            }
        }
    }
    for (q, p) in base.points.iter().enumerate() {
        let model = LinearFlowModel { l: p.l.clone(), tolerance: base.tolerance };
        for j in 1..spectra[q].dim() {
            if adjacent_trajectory_count_mod2(&model, j + 1, j)? {
                let (kf, from) = pos[q][j];
                let (kt, to) = pos[q][j - 1];
                match (kf, kt) {
                    (Kind::S, Kind::S) => blocks.bar_ss.flip(to, from),
                    (Kind::U, Kind::U) => blocks.bar_uu.flip(to, from),
                    (Kind::S, Kind::U) => blocks.bar_su.flip(to, from),
                    _ => blocks.bar_us.flip(to, from),
                }
            }
        }
    }
    blocks.validate()?;
    Ok(ModelComplexes { blocks, shift })
}

fn anchor_shift(
    base: &BaseMorseData,
    spectra: &[Spectrum],
    gens: &[Generator],
    anchor: &Anchor,
) -> Result<i64, MorseError> {
    match anchor {
        Anchor::Raw => Ok(0),
        Anchor::Generator { id, grading } => gens
            .iter()
            .find(|g| &g.id == id)
            .map(|g| grading - g.gr)
            .ok_or_else(|| MorseError::UnknownAnchor(id.clone())),
        Anchor::Default => {
            let q = (0..base.points.len()).min_by_key(|&q| base.points[q].index).unwrap();
            let p = &base.points[q];
            let sp = &spectra[q];
            let pick = match sp.values.iter().position(|&x| x > 0.0) {
                Some(k) => k,
                None => sp.dim() - 1,
            };
            let id = generator_id(p, pick + 1);
            let g = gens.iter().find(|g| g.id == id).unwrap();
            Ok(-g.gr)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{assemble, homology, les_maps, verify_d_squared, verify_les_exact, Flavor};

    fn diag(v: &[f64]) -> Vec<Vec<f64>> {
        LinearFlowModel::diagonal(v).l
    }

    fn kinds_and_grades(gens: &[Generator]) -> Vec<(Kind, i64)> {
        gens.iter().map(|g| (g.kind, g.gr)).collect()
    }

    #[test]
    fn single_point_mixed_signs() {
        let gens = blowup_critical_points(&BaseMorseData::single(diag(&[-2.0, 1.0]))).unwrap();
        assert_eq!(kinds_and_grades(&gens), vec![(Kind::U, 1), (Kind::S, 1)]);
    }

    #[test]
    fn single_point_all_positive() {
        let gens = blowup_critical_points(&BaseMorseData::single(diag(&[1.0, 2.0, 3.0]))).unwrap();
        assert_eq!(kinds_and_grades(&gens), vec![(Kind::S, 0), (Kind::S, 1), (Kind::S, 2)]);
    }

    fn two_points() -> BaseMorseData {
        BaseMorseData {
            points: vec![
                BasePoint { id: "a".into(), index: 0, l: diag(&[-1.0, 1.0]) },
                BasePoint { id: "b".into(), index: 1, l: diag(&[-1.0, 1.0]) },
            ],
            counts: None,
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    #[test]
    fn two_base_points_follow_index_formula() {
        let gens = blowup_critical_points(&two_points()).unwrap();
        assert_eq!(
            kinds_and_grades(&gens),
            vec![(Kind::U, 1), (Kind::S, 1), (Kind::U, 2), (Kind::S, 2)]
        );
    }

    /// Numerical Jacobian of the blown-up vector field `V = (-Lφ + Λφ, -Λs)`
    /// at `(w_i, 0)`, restricted to the tangent space; the number of
    /// unstable directions plus the base index is the Morse index.
    fn numerical_index(l: &[Vec<f64>], i: usize, base_index: i64) -> i64 {
        let sp = LinearFlowModel::new(l.to_vec()).spectrum().unwrap();
        let n = sp.dim();
        let w = &sp.vectors[i];
        let field = |phi: &[f64], s: f64| -> (Vec<f64>, f64) {
            let lphi: Vec<f64> = (0..n).map(|r| (0..n).map(|c| l[r][c] * phi[c]).sum()).collect();
            let nrm: f64 = phi.iter().map(|x| x * x).sum();
            let lam = phi.iter().zip(&lphi).map(|(a, b)| a * b).sum::<f64>() / nrm;
            ((0..n).map(|r| lam * phi[r] - lphi[r]).collect(), -lam * s)
        };
        let h = 1e-6;
        let mut unstable = 0;
        // Tangent directions of the sphere at w are the other eigenvectors;
        // the linearization is diagonal in this basis.
        for (j, v) in sp.vectors.iter().enumerate() {
            if j == i {
                continue;
            }
            let p: Vec<f64> = (0..n).map(|r| w[r] + h * v[r]).collect();
            let (f, _) = field(&p, 0.0);
            let rate: f64 = f.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() / h;
            if rate > 0.0 {
                unstable += 1;
            }
        }
        let (_, fs) = field(w, h);
        if fs / h > 0.0 {
            unstable += 1;
        }
        base_index + unstable
    }

    #[test]
    fn index_formula_matches_numerical_hessian() {
        let data = two_points();
        let gens = blowup_critical_points(&data).unwrap();
        for (k, g) in gens.iter().enumerate() {
            let p = &data.points[k / 2];
            assert_eq!(numerical_index(&p.l, k % 2, p.index), g.gr, "{}", g.id);
        }
        let l = diag(&[-3.0, -1.0, 2.0, 5.0]);
        let gens = blowup_critical_points(&BaseMorseData::single(l.clone())).unwrap();
        for (k, g) in gens.iter().enumerate() {
            assert_eq!(numerical_index(&l, k, 0), g.gr);
        }
    }

    #[test]
    fn adjacent_counts_vanish() {
        let m = LinearFlowModel::diagonal(&[-1.0, 2.0, 4.0]);
        assert!(!adjacent_trajectory_count_mod2(&m, 2, 1).unwrap());
        assert!(!adjacent_trajectory_count_mod2(&m, 3, 2).unwrap());
        assert!(!adjacent_trajectory_count_mod2(&m, 1, 2).unwrap());
        assert!(!adjacent_trajectory_count_mod2(&m, 2, 2).unwrap());
        assert!(adjacent_trajectory_count_mod2(&m, 4, 2).is_err());
    }

    #[test]
    fn single_point_ranks() {
        let data = BaseMorseData::single(diag(&[-3.0, -1.0, 2.0, 4.0, 7.0]));
        let m = build_model_complexes(&data, &Anchor::Default).unwrap();
        let c = assemble(&m.blocks).unwrap();
        assert!(verify_d_squared(&c));
        assert_eq!(homology(&c, Flavor::Bar).unwrap().total(), 5);
        assert_eq!(homology(&c, Flavor::Check).unwrap().total(), 3);
        assert_eq!(homology(&c, Flavor::Hat).unwrap().total(), 2);
        assert!(verify_les_exact(&c, &les_maps(&m.blocks).unwrap()));
    }

    #[test]
    fn sphere_model_anchoring() {
        let m = build_model_complexes(&sphere_model(3, 2), &Anchor::Default).unwrap();
        assert_eq!(m.shift, -2);
        let c = assemble(&m.blocks).unwrap();
        let check = homology(&c, Flavor::Check).unwrap();
        assert_eq!(check, [(0, 1), (1, 1), (2, 1)].into_iter().collect());
        let hat = homology(&c, Flavor::Hat).unwrap();
        assert_eq!(hat, [(-1, 1), (0, 1)].into_iter().collect());
        let bar = homology(&c, Flavor::Bar).unwrap();
        assert_eq!(bar, (-2..=2).map(|g| (g, 1)).collect());
    }

    #[test]
    fn explicit_and_raw_anchors() {
        let data = sphere_model(1, 1);
        assert_eq!(build_model_complexes(&data, &Anchor::Raw).unwrap().shift, 0);
        let a = Anchor::Generator { id: "q:1".into(), grading: 10 };
        assert_eq!(build_model_complexes(&data, &a).unwrap().shift, 9);
        let bad = Anchor::Generator { id: "nope".into(), grading: 0 };
        assert!(matches!(build_model_complexes(&data, &bad), Err(MorseError::UnknownAnchor(_))));
        // Only negative eigenvalues: the top unstable generator is pinned.
        let neg = build_model_complexes(&sphere_model(0, 3), &Anchor::Default).unwrap();
        assert_eq!(neg.blocks.generators.iter().map(|g| g.gr).max(), Some(0));
    }

    #[test]
    fn circle_base_doubles_towers() {
        // Two critical points on a circle; the two trajectories cancel mod 2.
        let l = diag(&[-2.0, -1.0, 1.0, 2.0]);
        let data = BaseMorseData {
            points: vec![
                BasePoint { id: "min".into(), index: 0, l: l.clone() },
                BasePoint { id: "max".into(), index: 1, l },
            ],
            counts: Some(F2Matrix::zeros(2, 2)),
            tolerance: DEFAULT_TOLERANCE,
        };
        let m = build_model_complexes(&data, &Anchor::Default).unwrap();
        let c = assemble(&m.blocks).unwrap();
        let check = homology(&c, Flavor::Check).unwrap();
        assert_eq!(check, [(0, 1), (1, 2), (2, 1)].into_iter().collect());
        assert_eq!(homology(&c, Flavor::Bar).unwrap().total(), 8);
        assert!(verify_les_exact(&c, &les_maps(&m.blocks).unwrap()));
    }

    #[test]
    fn interval_base_cancels_in_pairs() {
        let l = diag(&[-1.0, 1.0, 3.0]);
        let data = BaseMorseData {
            points: vec![
                BasePoint { id: "a".into(), index: 0, l: l.clone() },
                BasePoint { id: "b".into(), index: 1, l },
            ],
            counts: Some(F2Matrix::from_ones(2, 2, [(0, 1)]).unwrap()),
            tolerance: DEFAULT_TOLERANCE,
        };
        let m = build_model_complexes(&data, &Anchor::Default).unwrap();
        assert_eq!(m.blocks.bar_ss.nnz(), 2);
        assert_eq!(m.blocks.bar_uu.nnz(), 1);
        let c = assemble(&m.blocks).unwrap();
        assert!(verify_d_squared(&c));
        for f in Flavor::ALL {
            assert!(homology(&c, f).unwrap().is_empty());
        }
        assert!(verify_les_exact(&c, &les_maps(&m.blocks).unwrap()));
    }

    #[test]
    fn invalid_base_counts() {
        let mut data = two_points();
        data.counts = Some(F2Matrix::from_ones(2, 2, [(1, 0)]).unwrap());
        assert!(matches!(build_model_complexes(&data, &Anchor::Default), Err(MorseError::GradingViolation { .. })));
        data.counts = Some(F2Matrix::zeros(3, 3));
        assert!(matches!(build_model_complexes(&data, &Anchor::Default), Err(MorseError::CountShape { .. })));
        data.points[1].l = diag(&[1.0, 2.0]);
        data.counts = Some(F2Matrix::from_ones(2, 2, [(0, 1)]).unwrap());
        assert!(matches!(build_model_complexes(&data, &Anchor::Default), Err(MorseError::IncompatibleFibers { .. })));
    }
}
