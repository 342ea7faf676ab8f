use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::towers::{FlavorReport, Tower, TowerModule};
use super::SeifertError;
use crate::complexes::{report, BlockDifferentials, Generator, GradedRanks, Kind};

/// Brieskorn spheres `Σ(2, q, r)` whose groups are determined by gradings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BrieskornFamily {
    #[serde(rename = "2,3,6k+1")]
    ThreeSixKPlusOne,
    #[serde(rename = "2,3,6k-1")]
    ThreeSixKMinusOne,
    #[serde(rename = "2,5,10k-1")]
    FiveTenKMinusOne,
    #[serde(rename = "2,5,10k+1")]
    FiveTenKPlusOne,
    #[serde(rename = "2,7,29")]
    SevenTwentyNine,
}

impl BrieskornFamily {
    pub const ALL: [BrieskornFamily; 5] = [
        Self::ThreeSixKPlusOne,
        Self::ThreeSixKMinusOne,
        Self::FiveTenKMinusOne,
        Self::FiveTenKPlusOne,
        Self::SevenTwentyNine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::ThreeSixKPlusOne => "2,3,6k+1",
            Self::ThreeSixKMinusOne => "2,3,6k-1",
            Self::FiveTenKMinusOne => "2,5,10k-1",
            Self::FiveTenKPlusOne => "2,5,10k+1",
            Self::SevenTwentyNine => "2,7,29",
        }
    }

    /// `(2, q, r)` for parameter `k`.
    pub fn triple(self, k: u32) -> (u64, u64, u64) {
        let k = u64::from(k);
        match self {
            Self::ThreeSixKPlusOne => (2, 3, 6 * k + 1),
            Self::ThreeSixKMinusOne => (2, 3, 6 * k - 1),
            Self::FiveTenKMinusOne => (2, 5, 10 * k - 1),
            Self::FiveTenKPlusOne => (2, 5, 10 * k + 1),
            Self::SevenTwentyNine => (2, 7, 29),
        }
    }

    pub fn uses_k(self) -> bool {
        self != Self::SevenTwentyNine
    }

    /// Family and `k` of an explicit triple. `(2,5,11)` is read as
    /// `10k+1` with `k = 1`.
    pub fn classify(p: u64, q: u64, r: u64) -> Option<(Self, u32)> {
        let k = |x: u64, m: u64| u32::try_from(x / m).ok().filter(|&k| k >= 1);
        match (p, q, r) {
            (2, 7, 29) => Some((Self::SevenTwentyNine, 1)),
            (2, 3, r) if r % 6 == 1 => Some((Self::ThreeSixKPlusOne, k(r, 6)?)),
            (2, 3, r) if r % 6 == 5 => Some((Self::ThreeSixKMinusOne, k(r + 1, 6)?)),
            (2, 5, r) if r % 10 == 9 => Some((Self::FiveTenKMinusOne, k(r + 1, 10)?)),
            (2, 5, r) if r % 10 == 1 => Some((Self::FiveTenKPlusOne, k(r, 10)?)),
            _ => None,
        }
    }
}

impl fmt::Display for BrieskornFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Accepts `2,3,6k+1`, the short forms `2,3,+1` / `2,5,-1`, and `2,7,29`.
impl FromStr for BrieskornFamily {
    type Err = SeifertError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let fam = match t.as_str() {
            "2,3,6k+1" | "2,3,+1" => Self::ThreeSixKPlusOne,
            "2,3,6k-1" | "2,3,-1" => Self::ThreeSixKMinusOne,
            "2,5,10k-1" | "2,5,-1" => Self::FiveTenKMinusOne,
            "2,5,10k+1" | "2,5,+1" => Self::FiveTenKPlusOne,
            "2,7,29" => Self::SevenTwentyNine,
            _ => return Err(SeifertError::UnknownFamily(s.to_string())),
        };
        Ok(fam)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrieskornInput {
    pub family: BrieskornFamily,
    /// Ignored for `(2,7,29)`.
    pub k: u32,
    /// Grading window `[lo, hi]` of the explicit truncated complex.
    #[serde(default)]
    pub window: Option<(i64, i64)>,
}

impl BrieskornInput {
    pub fn new(family: BrieskornFamily, k: u32) -> Self {
        Self { family, k, window: None }
    }

    fn k(&self) -> Result<u32, SeifertError> {
        if !self.family.uses_k() {
            return Ok(1);
        }
        if self.k == 0 {
            return Err(SeifertError::UnknownFamily(format!("{} with k = 0", self.family)));
        }
        Ok(self.k)
    }
}

/// Irreducible critical points by grading, and the grading of the
/// boundary-unstable reducible `θ_{-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrreducibleSpectrum {
    pub irreducibles: GradedRanks,
    pub theta_minus1: i64,
    /// Flow lines from `θ_{-1}` to irreducibles are not excluded, so the
    /// hat differential is unknown.
    pub hat_ambiguous: bool,
}

impl IrreducibleSpectrum {
    pub fn count(&self) -> usize {
        self.irreducibles.total()
    }
}

/// Irreducibles come in pairs; gradings are normalized so that the
/// irreducible of the empty divisor sits in degree 0.
pub fn brieskorn_irreducibles(input: &BrieskornInput) -> Result<IrreducibleSpectrum, SeifertError> {
    let k = input.k()?;
    let half = (k / 2) as usize;
    let ki = i64::from(k);
    let five = |theta| {
        let mut irr: GradedRanks = (0..ki).map(|i| (i, 2)).collect();
        irr.add(ki, 2 * half);
        (irr, theta)
    };
    let (irreducibles, theta_minus1) = match input.family {
        BrieskornFamily::ThreeSixKPlusOne | BrieskornFamily::ThreeSixKMinusOne => {
            ([(0, 2 * half)].into_iter().collect(), -1)
        }
        BrieskornFamily::FiveTenKMinusOne => five(ki + 1),
        BrieskornFamily::FiveTenKPlusOne => five(ki),
        BrieskornFamily::SevenTwentyNine => {
            // Pairs at 0, 2, 4, 5, 6, 5 in decreasing order of the functional.
            ([0, 2, 4, 5, 6, 5].into_iter().map(|g| (g, 2)).collect(), 7)
        }
    };
    Ok(IrreducibleSpectrum {
        irreducibles,
        theta_minus1,
        hat_ambiguous: input.family == BrieskornFamily::ThreeSixKMinusOne,
    })
}

/// Selection rule standing in for the pullback condition on orbifold line
/// bundles: a bundle is kept when `2pqr (deg K/2 - deg E) >= min_gap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorCalibration {
    pub min_gap: u64,
}

const BUNDLED_CALIBRATION: &str = include_str!("../../fixtures/divisor_calibration.json");

impl DivisorCalibration {
    pub fn bundled() -> Self {
        Self::from_json(BUNDLED_CALIBRATION).expect("bundled calibration parses")
    }

    pub fn from_json(s: &str) -> Result<Self, SeifertError> {
        serde_json::from_str(s).map_err(|e| SeifertError::Calibration(e.to_string()))
    }
}

/// Number of orbifold line bundles `E` over `S^2(p, q, r)` with
/// `0 <= deg E < deg K/2` passing the calibrated selection rule. Degrees
/// are `e + b1/p + b2/q + b3/r` with `0 <= b_i` below the isotropy orders.
pub fn divisor_count(p: u64, q: u64, r: u64, cal: &DivisorCalibration) -> Result<u64, SeifertError> {
    if p < 2 || q < 2 || r < 2 {
        return Err(SeifertError::Unsupported(format!("isotropy orders ({p},{q},{r}) must be at least 2")));
    }
    if p.gcd(&q) != 1 || p.gcd(&r) != 1 || q.gcd(&r) != 1 {
        return Err(SeifertError::NotCoprime(vec![p, q, r]));
    }
    let (p, q, r) = (i128::from(p), i128::from(q), i128::from(r));
    // Everything scaled by 2pqr.
    let half_k = p * q * r - q * r - p * r - p * q;
    let gap = i128::from(cal.min_gap);
    let mut n = 0;
    let mut e = 0;
    while 2 * e * p * q * r < half_k {
        for b1 in 0..p {
            for b2 in 0..q {
                for b3 in 0..r {
                    let deg = 2 * (e * p * q * r + b1 * q * r + b2 * p * r + b3 * p * q);
                    if deg < half_k && half_k - deg >= gap {
                        n += 1;
                    }
                }
            }
        }
        e += 1;
    }
    Ok(n)
}

/// Structural checks on the explicit truncated complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplicitCheck {
    pub d_squared_zero: bool,
    pub les_exact: bool,
    /// The explicit ranks agree with the reported modules on the window.
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrieskornReport {
    pub family: BrieskornFamily,
    pub k: Option<u32>,
    pub triple: [u64; 3],
    pub irreducibles: GradedRanks,
    pub theta_minus1: i64,
    pub window: (i64, i64),
    pub hat: FlavorReport,
    pub check: FlavorReport,
    pub bar: FlavorReport,
    pub explicit: ExplicitCheck,
}

fn default_window(s: &IrreducibleSpectrum) -> (i64, i64) {
    let gs: Vec<i64> = s.irreducibles.iter().map(|(g, _)| g).chain([s.theta_minus1]).collect();
    let lo = *gs.iter().min().unwrap();
    let hi = *gs.iter().max().unwrap();
    (lo - 2, hi + 10)
}

/// Truncated complex: one `o` generator per irreducible, `θ_i` (`i >= 0`,
/// kind `s`) at `θ_{-1} + i` and `θ_{-j}` (`j >= 1`, kind `u`) at
/// `θ_{-1} - j + 1`, inside the window. Every differential vanishes: no
/// flow line leaves the reducible, and between irreducibles the gradings
/// or the paired moduli spaces rule them out.
fn truncated_blocks(s: &IrreducibleSpectrum, (lo, hi): (i64, i64)) -> BlockDifferentials {
    let mut gens = Vec::new();
    let mut pair = 0;
    for (g, r) in s.irreducibles.iter() {
        for _ in 0..r / 2 {
            gens.push(Generator::new(format!("alpha{pair}"), Kind::O, g));
            gens.push(Generator::new(format!("beta{pair}"), Kind::O, g));
            pair += 1;
        }
    }
    let t = s.theta_minus1;
    for (i, g) in (t..=hi).enumerate() {
        gens.push(Generator::new(format!("theta{i}"), Kind::S, g));
    }
    for (j, g) in (lo..=t).rev().enumerate() {
        gens.push(Generator::new(format!("theta-{}", j + 1), Kind::U, g));
    }
    BlockDifferentials::zero(gens)
}

/// Reports the three flavors of a spectrum over the given (or default)
/// window, together with the explicit truncated complex.
pub fn assemble_brieskorn_hmr(
    s: &IrreducibleSpectrum,
    window: Option<(i64, i64)>,
) -> Result<(ModuleTriple, BlockDifferentials, ExplicitCheck), SeifertError> {
    let (dlo, dhi) = default_window(s);
    let (lo, hi) = window.unwrap_or((dlo, dhi));
    if lo > dlo + 2 || hi < dhi - 10 {
        return Err(SeifertError::InvalidWindow { lo, hi, need_lo: dlo + 2, need_hi: dhi - 10 });
    }
    let t = s.theta_minus1;
    let finite = TowerModule { finite: s.irreducibles.clone(), towers: vec![] };
    let check = finite.direct_sum(&TowerModule::tower(Tower::up(t - 1)));
    let hat = finite.direct_sum(&TowerModule::tower(Tower::down(t)));
    let bar = TowerModule::tower(Tower::full(t));
    let blocks = truncated_blocks(s, (lo, hi));
    let rep = report(&blocks)?;
    let agree = |explicit: &GradedRanks, m: &TowerModule| (lo..=hi).all(|g| explicit.get(g) == m.rank_at(g));
    let consistent =
        agree(&rep.check, &check) && agree(&rep.bar, &bar) && (s.hat_ambiguous || agree(&rep.hat, &hat));
    let modules = ModuleTriple {
        hat: if s.hat_ambiguous { FlavorReport::undetermined() } else { FlavorReport::known(&hat) },
        check: FlavorReport::known(&check),
        bar: FlavorReport::known(&bar),
        window: (lo, hi),
    };
    Ok((modules, blocks, ExplicitCheck { d_squared_zero: rep.d_squared_zero, les_exact: rep.les_exact, consistent }))
}

/// Flavors reported for a Brieskorn sphere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleTriple {
    pub hat: FlavorReport,
    pub check: FlavorReport,
    pub bar: FlavorReport,
    pub window: (i64, i64),
}

impl BrieskornReport {
    pub fn compute(input: &BrieskornInput) -> Result<Self, SeifertError> {
        let s = brieskorn_irreducibles(input)?;
        let (m, _, explicit) = assemble_brieskorn_hmr(&s, input.window)?;
        let k = input.k()?;
        let (p, q, r) = input.family.triple(k);
        Ok(Self {
            family: input.family,
            k: input.family.uses_k().then_some(k),
            triple: [p, q, r],
            irreducibles: s.irreducibles,
            theta_minus1: s.theta_minus1,
            window: m.window,
            hat: m.hat,
            check: m.check,
            bar: m.bar,
            explicit,
        })
    }

    /// Hat as a module, failing for the undetermined family.
    pub fn hat_module(&self) -> Result<TowerModule, SeifertError> {
        self.hat.module().ok_or(SeifertError::AmbiguousDifferential)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{assemble, verify_d_squared};

    fn input(f: BrieskornFamily, k: u32) -> BrieskornInput {
        BrieskornInput::new(f, k)
    }

    #[test]
    fn small_spectra() {
        let s = brieskorn_irreducibles(&input(BrieskornFamily::ThreeSixKPlusOne, 1)).unwrap();
        assert_eq!(s.count(), 0);
        assert_eq!(s.theta_minus1, -1);
        let s = brieskorn_irreducibles(&input(BrieskornFamily::ThreeSixKPlusOne, 2)).unwrap();
        assert_eq!(s.irreducibles, [(0, 2)].into_iter().collect());
        let s = brieskorn_irreducibles(&input(BrieskornFamily::SevenTwentyNine, 0)).unwrap();
        assert_eq!(s.irreducibles, [(0, 2), (2, 2), (4, 2), (5, 4), (6, 2)].into_iter().collect());
        assert_eq!(s.theta_minus1, 7);
        assert!(brieskorn_irreducibles(&input(BrieskornFamily::FiveTenKPlusOne, 0)).is_err());
    }

    #[test]
    fn divisor_examples() {
        let cal = DivisorCalibration::bundled();
        assert_eq!(divisor_count(2, 3, 7, &cal), Ok(0));
        assert_eq!(divisor_count(2, 3, 13, &cal), Ok(1));
        assert_eq!(divisor_count(2, 5, 9, &cal), Ok(1));
        assert_eq!(divisor_count(2, 7, 29, &cal), Ok(6));
        assert!(matches!(divisor_count(2, 4, 7, &cal), Err(SeifertError::NotCoprime(_))));
        // Spherical orbifolds have no bundles in the window.
        assert_eq!(divisor_count(2, 3, 5, &cal), Ok(0));
    }

    #[test]
    fn divisor_counts_match_spectra() {
        let cal = DivisorCalibration::bundled();
        for f in BrieskornFamily::ALL {
            for k in 1..=6 {
                let (p, q, r) = f.triple(k);
                let n = divisor_count(p, q, r, &cal).unwrap();
                let s = brieskorn_irreducibles(&input(f, k)).unwrap();
                assert_eq!(2 * n as usize, s.count(), "{f} k = {k}");
            }
        }
    }

    #[test]
    fn classify_and_parse() {
        assert_eq!(BrieskornFamily::classify(2, 3, 13), Some((BrieskornFamily::ThreeSixKPlusOne, 2)));
        assert_eq!(BrieskornFamily::classify(2, 3, 11), Some((BrieskornFamily::ThreeSixKMinusOne, 2)));
        assert_eq!(BrieskornFamily::classify(2, 5, 19), Some((BrieskornFamily::FiveTenKMinusOne, 2)));
        assert_eq!(BrieskornFamily::classify(2, 5, 21), Some((BrieskornFamily::FiveTenKPlusOne, 2)));
        assert_eq!(BrieskornFamily::classify(2, 3, 1), None);
        assert_eq!(BrieskornFamily::classify(2, 7, 31), None);
        for f in BrieskornFamily::ALL {
            assert_eq!(f.name().parse::<BrieskornFamily>().unwrap(), f);
            let j = serde_json::to_string(&f).unwrap();
            assert_eq!(j, format!("\"{}\"", f.name()));
        }
        assert_eq!("2,5,+1".parse::<BrieskornFamily>().unwrap(), BrieskornFamily::FiveTenKPlusOne);
        assert!("2,3,5".parse::<BrieskornFamily>().is_err());
    }

    #[test]
    fn reports_and_explicit_complexes() {
        for f in BrieskornFamily::ALL {
            for k in 1..=6 {
                let rep = BrieskornReport::compute(&input(f, k)).unwrap();
                assert!(rep.explicit.d_squared_zero && rep.explicit.les_exact && rep.explicit.consistent, "{f} {k}");
                assert_eq!(rep.hat.undetermined, f == BrieskornFamily::ThreeSixKMinusOne);
                let s = brieskorn_irreducibles(&input(f, k)).unwrap();
                let (_, blocks, _) = assemble_brieskorn_hmr(&s, None).unwrap();
                assert!(verify_d_squared(&assemble(&blocks).unwrap()));
            }
        }
    }

    #[test]
    fn narrow_window_is_rejected() {
        let s = brieskorn_irreducibles(&input(BrieskornFamily::SevenTwentyNine, 1)).unwrap();
        assert!(matches!(assemble_brieskorn_hmr(&s, Some((1, 20))), Err(SeifertError::InvalidWindow { .. })));
        assert!(assemble_brieskorn_hmr(&s, Some((-1, 8))).is_ok());
    }
}
