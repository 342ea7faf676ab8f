use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::SeifertError;
use crate::complexes::GradedRanks;

/// `Down` is `F2[υ]` with top at the anchor, `Up` is `F2[υ^-1, υ]/F2[υ]`
/// with bottom at anchor + 1, and `Full` is `F2[υ^-1, υ]`. The anchor of a
/// full tower only records where it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TowerKind {
    Down,
    Up,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Tower {
    #[serde(rename = "type")]
    pub kind: TowerKind,
    pub anchor: i64,
}

impl Tower {
    pub fn down(anchor: i64) -> Self {
        Self { kind: TowerKind::Down, anchor }
    }

    pub fn up(anchor: i64) -> Self {
        Self { kind: TowerKind::Up, anchor }
    }

    pub fn full(anchor: i64) -> Self {
        Self { kind: TowerKind::Full, anchor }
    }

    pub fn contains(&self, g: i64) -> bool {
        match self.kind {
            TowerKind::Down => g <= self.anchor,
            TowerKind::Up => g > self.anchor,
            TowerKind::Full => true,
        }
    }
}

/// Finite part plus towers, with `υ` of degree -1.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerModule {
    pub finite: GradedRanks,
    pub towers: Vec<Tower>,
}

impl TowerModule {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn tower(t: Tower) -> Self {
        Self { finite: GradedRanks::new(), towers: vec![t] }
    }

    pub fn is_zero(&self) -> bool {
        self.finite.is_empty() && self.towers.is_empty()
    }

    pub fn rank_at(&self, g: i64) -> usize {
        self.finite.get(g) + self.towers.iter().filter(|t| t.contains(g)).count()
    }

    /// Ranks in `[lo, hi]`.
    pub fn ranks_in(&self, lo: i64, hi: i64) -> GradedRanks {
        (lo..=hi).map(|g| (g, self.rank_at(g))).collect()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut finite = self.finite.clone();
        for (g, r) in other.finite.iter() {
            finite.add(g, r);
        }
        let mut towers = self.towers.clone();
        towers.extend(&other.towers);
        towers.sort();
        Self { finite, towers }
    }

    pub fn shift(&self, k: i64) -> Self {
        Self {
            finite: self.finite.iter().map(|(g, r)| (g + k, r)).collect(),
            towers: self.towers.iter().map(|t| Tower { kind: t.kind, anchor: t.anchor + k }).collect(),
        }
    }
}

/// Image of `υ`. Finite summands are killed, a down tower loses its top,
/// an up tower maps onto itself and a full tower moves down by one.
pub fn apply_upsilon(m: &TowerModule) -> TowerModule {
    upsilon_power(m, 1)
}

/// Image of `υ^n`.
pub fn upsilon_power(m: &TowerModule, n: u32) -> TowerModule {
    if n == 0 {
        return m.clone();
    }
    let n = i64::from(n);
    let towers = m
        .towers
        .iter()
        .map(|t| match t.kind {
            TowerKind::Down | TowerKind::Full => Tower { kind: t.kind, anchor: t.anchor - n },
            TowerKind::Up => *t,
        })
        .collect();
    TowerModule { finite: GradedRanks::new(), towers }
}

/// The three flavors of one real spin-c structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HmrTriple {
    pub hat: TowerModule,
    pub check: TowerModule,
    pub bar: TowerModule,
}

impl HmrTriple {
    /// The three-sphere with its reducible at grading `g`.
    pub fn sphere(g: i64) -> Self {
        Self {
            hat: TowerModule::tower(Tower::down(g)),
            check: TowerModule::tower(Tower::up(g - 1)),
            bar: TowerModule::tower(Tower::full(g)),
        }
    }

    pub fn zero() -> Self {
        Self { hat: TowerModule::zero(), check: TowerModule::zero(), bar: TowerModule::zero() }
    }
}

/// Positive scalar curvature: `H_*(T^b) ⊗` tower in each flavor, the copy
/// for torus degree `d` shifted up by `d`. Zero unless `c1` is torsion.
pub fn psc_hmr(b1_inv: u32, torsion: bool) -> HmrTriple {
    if !torsion {
        return HmrTriple::zero();
    }
    let mut out = HmrTriple::zero();
    for d in 0..=b1_inv {
        let copies = binomial(b1_inv, d);
        let s = HmrTriple::sphere(i64::from(d));
        for _ in 0..copies {
            out.hat = out.hat.direct_sum(&s.hat);
            out.check = out.check.direct_sum(&s.check);
            out.bar = out.bar.direct_sum(&s.bar);
        }
    }
    out
}

fn binomial(n: u32, k: u32) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * u64::from(n - i) / u64::from(i + 1))
}

/// One copy of the three-sphere answer per real spin-c structure of
/// `L(p, q)`; `(1, 0)` is the three-sphere itself.
pub fn lens_hmr(p: u64, q: u64) -> Result<Vec<HmrTriple>, SeifertError> {
    if (p, q) == (1, 0) {
        return Ok(vec![HmrTriple::sphere(0)]);
    }
    if p == 2 {
        return Err(SeifertError::Unsupported("L(2,1) is excluded".into()));
    }
    if p < 2 || q == 0 || q >= p {
        return Err(SeifertError::Unsupported(format!("L({p},{q}) needs 0 < q < p")));
    }
    if p.gcd(&q) != 1 {
        return Err(SeifertError::NotCoprime(vec![p, q]));
    }
    Ok(vec![HmrTriple::sphere(0); p as usize])
}

/// A flavor as reported: either a module or undetermined.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlavorReport {
    pub finite: GradedRanks,
    pub towers: Vec<Tower>,
    pub undetermined: bool,
}

impl FlavorReport {
    pub fn known(m: &TowerModule) -> Self {
        Self { finite: m.finite.clone(), towers: m.towers.clone(), undetermined: false }
    }

    pub fn undetermined() -> Self {
        Self { finite: GradedRanks::new(), towers: vec![], undetermined: true }
    }

    pub fn module(&self) -> Option<TowerModule> {
        (!self.undetermined).then(|| TowerModule { finite: self.finite.clone(), towers: self.towers.clone() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_triple() {
        let s = psc_hmr(0, true);
        assert_eq!(s, HmrTriple::sphere(0));
        assert_eq!(s.hat.ranks_in(-3, 3), [(-3, 1), (-2, 1), (-1, 1), (0, 1)].into_iter().collect());
        assert_eq!(s.check.ranks_in(-3, 3), [(0, 1), (1, 1), (2, 1), (3, 1)].into_iter().collect());
        assert_eq!(s.bar.ranks_in(-1, 1).total(), 3);
    }

    #[test]
    fn circle_bundle_has_two_towers() {
        let s = psc_hmr(1, true);
        assert_eq!(s.hat.towers, vec![Tower::down(0), Tower::down(1)]);
        assert_eq!(s.check.towers, vec![Tower::up(-1), Tower::up(0)]);
        assert!(psc_hmr(3, false).hat.is_zero());
    }

    #[test]
    fn upsilon_on_towers() {
        let m = TowerModule {
            finite: [(3, 2)].into_iter().collect(),
            towers: vec![Tower::down(0), Tower::up(0), Tower::full(5)],
        };
        let u = apply_upsilon(&m);
        assert!(u.finite.is_empty());
        assert_eq!(u.towers, vec![Tower::down(-1), Tower::up(0), Tower::full(4)]);
        assert_eq!(upsilon_power(&m, 3), apply_upsilon(&upsilon_power(&m, 2)));
        assert_eq!(upsilon_power(&m, 0), m);
    }

    #[test]
    fn lens_copies() {
        assert_eq!(lens_hmr(3, 1).unwrap().len(), 3);
        assert_eq!(lens_hmr(5, 2).unwrap().len(), 5);
        assert_eq!(lens_hmr(1, 0).unwrap(), vec![HmrTriple::sphere(0)]);
        assert!(matches!(lens_hmr(6, 4), Err(SeifertError::NotCoprime(_))));
        assert!(lens_hmr(2, 1).is_err());
        assert!(lens_hmr(3, 3).is_err());
    }

    #[test]
    fn json_shape() {
        let r = FlavorReport::known(&TowerModule {
            finite: [(0, 2)].into_iter().collect(),
            towers: vec![Tower::up(6)],
        });
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"finite":[[0,2]],"towers":[{"type":"up","anchor":6}],"undetermined":false}"#
        );
    }
}
