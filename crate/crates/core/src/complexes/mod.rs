//! The three flavors of the blown-up Morse complex, their homology and the
//! long exact sequence relating them.
//!
//! Generators come in three kinds: interior (`o`), boundary-stable (`s`)
//! and boundary-unstable (`u`). Block differentials are named by source
//! then target, so `uo` maps `u`-generators to `o`-generators. Every block
//! is stored with rows indexed by the target and columns by the source.

mod les;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2lin::{f2_homology_rank, F2Matrix, LinAlgError};

pub use les::{blocks_les_exact, les_failures, les_maps, verify_les_exact, LesFailure, LesMaps, LesSpot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    O,
    S,
    U,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::O => "o",
            Kind::S => "s",
            Kind::U => "u",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub id: String,
    pub kind: Kind,
    pub gr: i64,
}

impl Generator {
    pub fn new(id: impl Into<String>, kind: Kind, gr: i64) -> Self {
        Self { id: id.into(), kind, gr }
    }

    /// Grading used on the bar complex: `gr` for stable generators and
    /// `gr - 1` for unstable ones. Interior generators have none.
    pub fn bar_gr(&self) -> Option<i64> {
        match self.kind {
            Kind::O => None,
            Kind::S => Some(self.gr),
            Kind::U => Some(self.gr - 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Check,
    Hat,
    Bar,
}

impl Flavor {
    pub const ALL: [Flavor; 3] = [Flavor::Check, Flavor::Hat, Flavor::Bar];

    pub fn name(self) -> &'static str {
        match self {
            Flavor::Check => "check",
            Flavor::Hat => "hat",
            Flavor::Bar => "bar",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("block {block} has shape {found:?}, expected {expected:?}")]
    ShapeMismatch { block: &'static str, expected: (usize, usize), found: (usize, usize) },
    #[error("block {block} entry ({row}, {col}) changes the grading by {drop} instead of 1")]
    GradingViolation { block: &'static str, row: usize, col: usize, drop: i64 },
    #[error("{flavor} differential does not square to zero")]
    CompositionNonzero { flavor: &'static str },
    #[error("duplicate generator id {0:?}")]
    DuplicateId(String),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// The eight differential blocks together with the generators they act on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDifferentials {
    pub generators: Vec<Generator>,
    pub oo: F2Matrix,
    pub os: F2Matrix,
    pub uo: F2Matrix,
    pub us: F2Matrix,
    pub bar_ss: F2Matrix,
    pub bar_us: F2Matrix,
    pub bar_su: F2Matrix,
    pub bar_uu: F2Matrix,
}

impl BlockDifferentials {
    /// All blocks zero.
    pub fn zero(generators: Vec<Generator>) -> Self {
        let (o, s, u) = count_kinds(&generators);
        Self {
            generators,
            oo: F2Matrix::zeros(o, o),
            os: F2Matrix::zeros(s, o),
            uo: F2Matrix::zeros(o, u),
            us: F2Matrix::zeros(s, u),
            bar_ss: F2Matrix::zeros(s, s),
            bar_us: F2Matrix::zeros(s, u),
            bar_su: F2Matrix::zeros(u, s),
            bar_uu: F2Matrix::zeros(u, u),
        }
    }

    /// Positions of the generators of one kind within `generators`.
    pub fn indices(&self, kind: Kind) -> Vec<usize> {
        kind_indices(&self.generators, kind)
    }

    pub fn of_kind(&self, kind: Kind) -> Vec<&Generator> {
        self.generators.iter().filter(|g| g.kind == kind).collect()
    }

    fn blocks(&self) -> [(&'static str, &F2Matrix, Kind, Kind, bool); 8] {
        use Kind::*;
        [
            ("oo", &self.oo, O, O, false),
            ("os", &self.os, O, S, false),
            ("uo", &self.uo, U, O, false),
            ("us", &self.us, U, S, false),
            ("bar_ss", &self.bar_ss, S, S, true),
            ("bar_us", &self.bar_us, U, S, true),
            ("bar_su", &self.bar_su, S, U, true),
            ("bar_uu", &self.bar_uu, U, U, true),
        ]
    }

    /// Checks block shapes, id uniqueness and that every nonzero entry
    /// lowers the relevant grading by exactly one.
    pub fn validate(&self) -> Result<(), ComplexError> {
        let mut seen = std::collections::HashSet::new();
        for g in &self.generators {
            if !seen.insert(g.id.as_str()) {
                return Err(ComplexError::DuplicateId(g.id.clone()));
            }
        }
        for (name, m, from, to, bar) in self.blocks() {
            let src = self.of_kind(from);
            let dst = self.of_kind(to);
            if m.shape() != (dst.len(), src.len()) {
                return Err(ComplexError::ShapeMismatch {
                    block: name,
                    expected: (dst.len(), src.len()),
                    found: m.shape(),
                });
            }
            for (r, c) in m.ones() {
                let drop = if bar {
                    src[c].bar_gr().unwrap() - dst[r].bar_gr().unwrap()
                } else {
                    src[c].gr - dst[r].gr
                };
                if drop != 1 {
                    return Err(ComplexError::GradingViolation { block: name, row: r, col: c, drop });
                }
            }
        }
        Ok(())
    }
}

fn count_kinds(gens: &[Generator]) -> (usize, usize, usize) {
    let c = |k| gens.iter().filter(|g| g.kind == k).count();
    (c(Kind::O), c(Kind::S), c(Kind::U))
}

fn kind_indices(gens: &[Generator], kind: Kind) -> Vec<usize> {
    gens.iter().enumerate().filter(|(_, g)| g.kind == kind).map(|(i, _)| i).collect()
}

/// One flavor: its generators (positions in the shared generator list),
/// their gradings in this flavor, and the total differential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlavorComplex {
    pub generators: Vec<usize>,
    pub gradings: Vec<i64>,
    pub d: F2Matrix,
}

impl FlavorComplex {
    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    /// Local positions of the basis elements in grading `g`.
    pub fn basis_at(&self, g: i64) -> Vec<usize> {
        (0..self.gradings.len()).filter(|&i| self.gradings[i] == g).collect()
    }

    /// Differential restricted to `C_g -> C_{g-1}`.
    pub fn d_at(&self, g: i64) -> F2Matrix {
        self.d.submatrix(&self.basis_at(g - 1), &self.basis_at(g))
    }

    pub fn grading_range(&self) -> Option<(i64, i64)> {
        Some((*self.gradings.iter().min()?, *self.gradings.iter().max()?))
    }

    pub fn squares_to_zero(&self) -> bool {
        self.d.mul(&self.d).map(|m| m.is_zero()).unwrap_or(false)
    }

    pub fn homology(&self) -> Result<GradedRanks, LinAlgError> {
        let mut out = GradedRanks::default();
        let Some((lo, hi)) = self.grading_range() else {
            return Ok(out);
        };
        for g in lo..=hi {
            let r = f2_homology_rank(&self.d_at(g + 1), &self.d_at(g))?;
            out.insert(g, r);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeComplexes {
    pub generators: Vec<Generator>,
    pub check: FlavorComplex,
    pub hat: FlavorComplex,
    pub bar: FlavorComplex,
}

impl ThreeComplexes {
    pub fn flavor(&self, f: Flavor) -> &FlavorComplex {
        match f {
            Flavor::Check => &self.check,
            Flavor::Hat => &self.hat,
            Flavor::Bar => &self.bar,
        }
    }

    pub fn flavor_mut(&mut self, f: Flavor) -> &mut FlavorComplex {
        match f {
            Flavor::Check => &mut self.check,
            Flavor::Hat => &mut self.hat,
            Flavor::Bar => &mut self.bar,
        }
    }
}

/// Builds the total differentials
///
/// ```text
/// check = [[oo, uo.bar_su], [os, bar_ss + us.bar_su]]   on (o, s)
/// hat   = [[oo, uo], [bar_su.os, bar_uu + bar_su.us]]   on (o, u)
/// bar   = [[bar_ss, bar_us], [bar_su, bar_uu]]          on (s, u)
/// ```
pub fn assemble(b: &BlockDifferentials) -> Result<ThreeComplexes, ComplexError> {
    b.validate()?;
    let (no, ns, nu) = count_kinds(&b.generators);
    let o = b.indices(Kind::O);
    let s = b.indices(Kind::S);
    let u = b.indices(Kind::U);
    let gr = |idx: &[usize]| idx.iter().map(|&i| b.generators[i].gr).collect::<Vec<_>>();
    let bar_gr = |idx: &[usize]| {
        idx.iter().map(|&i| b.generators[i].bar_gr().unwrap()).collect::<Vec<_>>()
    };

    let check_os = b.uo.mul(&b.bar_su)?;
    let check_ss = b.bar_ss.add(&b.us.mul(&b.bar_su)?)?;
    let check_d = F2Matrix::from_blocks(
        &[no, ns],
        &[no, ns],
        &[vec![Some(&b.oo), Some(&check_os)], vec![Some(&b.os), Some(&check_ss)]],
    )?;

    let hat_uo = b.bar_su.mul(&b.os)?;
    let hat_uu = b.bar_uu.add(&b.bar_su.mul(&b.us)?)?;
    let hat_d = F2Matrix::from_blocks(
        &[no, nu],
        &[no, nu],
        &[vec![Some(&b.oo), Some(&b.uo)], vec![Some(&hat_uo), Some(&hat_uu)]],
    )?;

    let bar_d = F2Matrix::from_blocks(
        &[ns, nu],
        &[ns, nu],
        &[vec![Some(&b.bar_ss), Some(&b.bar_us)], vec![Some(&b.bar_su), Some(&b.bar_uu)]],
    )?;

    let concat = |a: &[usize], c: &[usize]| [a, c].concat();
    Ok(ThreeComplexes {
        generators: b.generators.clone(),
        check: FlavorComplex {
            generators: concat(&o, &s),
            gradings: [gr(&o), gr(&s)].concat(),
            d: check_d,
        },
        hat: FlavorComplex {
            generators: concat(&o, &u),
            gradings: [gr(&o), gr(&u)].concat(),
            d: hat_d,
        },
        bar: FlavorComplex {
            generators: concat(&s, &u),
            gradings: [bar_gr(&s), bar_gr(&u)].concat(),
            d: bar_d,
        },
    })
}

pub fn verify_d_squared(c: &ThreeComplexes) -> bool {
    Flavor::ALL.iter().all(|&f| c.flavor(f).squares_to_zero())
}

/// Per-grading F2 ranks of one flavor.
pub fn homology(c: &ThreeComplexes, flavor: Flavor) -> Result<GradedRanks, ComplexError> {
    let fc = c.flavor(flavor);
    if !fc.squares_to_zero() {
        return Err(ComplexError::CompositionNonzero { flavor: flavor.name() });
    }
    Ok(fc.homology()?)
}

/// Finitely supported map from grading to rank. Zero ranks are not stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct GradedRanks(BTreeMap<i64, usize>);

impl GradedRanks {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, g: i64, rank: usize) {
        if rank == 0 {
            self.0.remove(&g);
        } else {
            self.0.insert(g, rank);
        }
    }

    pub fn add(&mut self, g: i64, rank: usize) {
        let cur = self.get(g);
        self.insert(g, cur + rank);
    }

    pub fn get(&self, g: i64) -> usize {
        self.0.get(&g).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.0.iter().map(|(&g, &r)| (g, r))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn restrict(&self, lo: i64, hi: i64) -> Self {
        Self(self.0.range(lo..=hi).map(|(&g, &r)| (g, r)).collect())
    }
}

impl FromIterator<(i64, usize)> for GradedRanks {
    fn from_iter<I: IntoIterator<Item = (i64, usize)>>(iter: I) -> Self {
        let mut out = Self::default();
        for (g, r) in iter {
            out.add(g, r);
        }
        out
    }
}

impl Serialize for GradedRanks {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|(&g, &r)| [g, r as i64]))
    }
}

impl<'de> Deserialize<'de> for GradedRanks {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs = Vec::<(i64, usize)>::deserialize(d)?;
        Ok(pairs.into_iter().collect())
    }
}

/// Ranks of all three flavors plus the structural checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexReport {
    pub check: GradedRanks,
    pub hat: GradedRanks,
    pub bar: GradedRanks,
    pub d_squared_zero: bool,
    pub les_exact: bool,
}

pub fn report(blocks: &BlockDifferentials) -> Result<ComplexReport, ComplexError> {
    let c = assemble(blocks)?;
    let d_squared_zero = verify_d_squared(&c);
    if !d_squared_zero {
        let bad = Flavor::ALL.into_iter().find(|&f| !c.flavor(f).squares_to_zero()).unwrap();
        return Err(ComplexError::CompositionNonzero { flavor: bad.name() });
    }
    let maps = les_maps(blocks)?;
    Ok(ComplexReport {
        check: homology(&c, Flavor::Check)?,
        hat: homology(&c, Flavor::Hat)?,
        bar: homology(&c, Flavor::Bar)?,
        d_squared_zero,
        les_exact: verify_les_exact(&c, &maps),
    })
}
