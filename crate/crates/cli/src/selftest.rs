//! Runs the documented worked examples and the fixture tables, reporting
//! each by name.

use std::path::Path;
use std::time::Instant;

use hmrkit::complexes::GradedRanks;
use hmrkit::index_grading::{closed4_index, j_structure, loop_grading_shift, TopologicalData4};
use hmrkit::morse_blowup::{build_model_complexes, sphere_model, Anchor};
use hmrkit::real_spinc::{
    admits_real_structure, branched_cover_invariants, fixtures, real_spinc_torsor, real_structure_classes,
    theta_on_cochains, EquivariantCWData, SeifertMatrix,
};
use hmrkit::seifert_hmr::{
    divisor_count, lens_hmr, psc_hmr, BrieskornFamily, BrieskornInput, BrieskornReport, DivisorCalibration, HmrTriple,
    Tower,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::commands::read_input;

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn builtin() -> Vec<(String, Box<dyn Fn() -> Outcome>)> {
    let mut v: Vec<(String, Box<dyn Fn() -> Outcome>)> = Vec::new();
    v.push((
        "theta on a fixed point is 2".into(),
        Box::new(|| {
            let t = theta_on_cochains(&fixtures::fixed_point(), 0).map_err(|e| e.to_string())?;
            ensure(t.get_i64(0, 0) == 2, || format!("got {t:?}"))
        }),
    ));
    v.push((
        "three-sphere tower model".into(),
        Box::new(|| {
            let m = build_model_complexes(&sphere_model(10, 10), &Anchor::Default).map_err(|e| e.to_string())?;
            let r = hmrkit::complexes::report(&m.blocks).map_err(|e| e.to_string())?;
            let want = |lo: i64, hi: i64| -> GradedRanks { (lo..=hi).map(|g| (g, 1)).collect() };
            ensure(r.check == want(0, 9) && r.hat == want(-9, 0) && r.bar == want(-10, 9), || format!("{r:?}"))
        }),
    ));
    v.push((
        "psc with b1 = 0 is the three-sphere".into(),
        Box::new(|| ensure(psc_hmr(0, true) == HmrTriple::sphere(0), || "mismatch".into())),
    ));
    v.push((
        "psc with b1 = 1 has two towers shifted by one".into(),
        Box::new(|| {
            let t = psc_hmr(1, true);
            ensure(t.hat.towers == vec![Tower::down(0), Tower::down(1)], || format!("{:?}", t.hat))
        }),
    ));
    v.push((
        "psc with non-torsion c1 vanishes".into(),
        Box::new(|| ensure(psc_hmr(2, false) == HmrTriple::zero(), || "nonzero".into())),
    ));
    v.push((
        "lens spaces have p copies of the sphere answer".into(),
        Box::new(|| {
            let n = lens_hmr(5, 2).map_err(|e| e.to_string())?.len();
            ensure(n == 5, || format!("got {n}"))
        }),
    ));
    v.push((
        "S1xS2 rotation: only trivial c1 admits a real structure".into(),
        Box::new(|| {
            let d = fixtures::s1xs2_rotation(1, 1);
            let g = hmrkit::real_spinc::cohomology_group(&d, 2, false).map_err(|e| e.to_string())?;
            let gen: Vec<i64> = g.generator(0).iter().map(|x| i64::try_from(x).unwrap()).collect();
            for k in -2i64..=2 {
                let c: Vec<i64> = gen.iter().map(|x| k * x).collect();
                let ok = admits_real_structure(&d, &c).map_err(|e| e.to_string())?;
                ensure(ok == (k == 0), || format!("k = {k}: {ok}"))?;
            }
            let cls = real_structure_classes(&d).map_err(|e| e.to_string())?;
            ensure(cls.len() == 1 && cls[0] == 2.into(), || format!("{cls:?}"))
        }),
    ));
    v.push((
        "index of circle times a three-manifold is half the pairing".into(),
        Box::new(|| {
            let d = TopologicalData4 { c1_sq: 16, sigma: 0, b1_inv: 1, bplus_inv: 1, b0_inv: 0 };
            let i = closed4_index(&d).map_err(|e| e.to_string())?;
            ensure(Ok(i) == loop_grading_shift(4), || format!("got {i}"))
        }),
    ));
    v.push((
        "torsion c1 gives a free grading set".into(),
        Box::new(|| {
            let j = j_structure(&[0, 0]).map_err(|e| e.to_string())?;
            ensure(j.free, || format!("{j:?}"))
        }),
    ));
    v
}

#[derive(Deserialize)]
struct Cases<T> {
    cases: Vec<T>,
}

#[derive(Deserialize)]
struct BrieskornCase {
    family: String,
    k: Option<u32>,
    irreducibles: GradedRanks,
    theta_minus1: i64,
    hat_finite: Option<usize>,
    check_finite: usize,
    hat_undetermined: bool,
}

fn brieskorn_case(c: &BrieskornCase) -> Outcome {
    let fam: BrieskornFamily = c.family.parse().map_err(|e: hmrkit::seifert_hmr::SeifertError| e.to_string())?;
    let rep = BrieskornReport::compute(&BrieskornInput::new(fam, c.k.unwrap_or(1))).map_err(|e| e.to_string())?;
    ensure(rep.irreducibles == c.irreducibles, || format!("irreducibles {:?}", rep.irreducibles))?;
    ensure(rep.theta_minus1 == c.theta_minus1, || format!("theta {}", rep.theta_minus1))?;
    ensure(rep.check.finite.total() == c.check_finite, || format!("check {:?}", rep.check))?;
    ensure(rep.check.towers == vec![Tower::up(c.theta_minus1 - 1)], || format!("check {:?}", rep.check))?;
    ensure(rep.hat.undetermined == c.hat_undetermined, || "hat determinacy".into())?;
    if let Some(h) = c.hat_finite {
        ensure(rep.hat.finite.total() == h, || format!("hat {:?}", rep.hat))?;
        ensure(rep.hat.towers == vec![Tower::down(c.theta_minus1)], || format!("hat {:?}", rep.hat))?;
    }
    let cal = DivisorCalibration::bundled();
    let [p, q, r] = rep.triple;
    let n = divisor_count(p, q, r, &cal).map_err(|e| e.to_string())?;
    ensure(2 * n as usize == c.irreducibles.total(), || format!("divisor count {n}"))?;
    ensure(rep.explicit.d_squared_zero && rep.explicit.les_exact && rep.explicit.consistent, || {
        format!("explicit complex {:?}", rep.explicit)
    })
}

#[derive(Deserialize)]
struct CensusCase {
    fixture: String,
    size: Option<u64>,
    torsor_invariants: Vec<i64>,
    #[serde(default)]
    torsion_size: Option<u64>,
    #[serde(default)]
    real_structure_classes: Option<Vec<i64>>,
}

fn census_case(dir: &Path, c: &CensusCase) -> Outcome {
    let path = dir.join("cw").join(format!("{}.json", c.fixture));
    let text = read_input(&path).map_err(|e| e.to_string())?;
    let data: EquivariantCWData = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let got = real_spinc_torsor(&data, None).map_err(|e| e.to_string())?;
    ensure(got.size == c.size, || format!("size {:?}", got.size))?;
    ensure(got.torsor_invariants == c.torsor_invariants, || format!("invariants {:?}", got.torsor_invariants))?;
    if let Some(t) = c.torsion_size {
        ensure(got.torsion_size == t, || format!("torsion size {}", got.torsion_size))?;
    }
    if let Some(want) = &c.real_structure_classes {
        let cls: Vec<i64> =
            real_structure_classes(&data).map_err(|e| e.to_string())?.iter().map(|x| i64::try_from(x).unwrap()).collect();
        ensure(&cls == want, || format!("classes {cls:?}"))?;
    }
    Ok(())
}

#[derive(Deserialize)]
struct SeifertCase {
    name: String,
    #[serde(rename = "A")]
    a: Vec<Vec<i64>>,
    order: u64,
    b1: usize,
}

fn seifert_case(c: &SeifertCase) -> Outcome {
    let m: SeifertMatrix = serde_json::from_value(serde_json::json!({ "A": c.a })).map_err(|e| e.to_string())?;
    let inv = branched_cover_invariants(&m).map_err(|e| e.to_string())?;
    ensure(inv.order == c.order && inv.b1 == c.b1, || format!("{}: {inv:?}", c.name))
}

fn load<T: for<'de> Deserialize<'de>>(dir: &Path, file: &str) -> Result<Vec<T>, String> {
    let path = dir.join(file);
    let text = read_input(&path).map_err(|e| e.to_string())?;
    let c: Cases<T> = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(c.cases)
}

fn calibration_check(dir: &Path) -> Outcome {
    let path = dir.join("divisor_calibration.json");
    let text = read_input(&path).map_err(|e| e.to_string())?;
    let cal = DivisorCalibration::from_json(&text).map_err(|e| e.to_string())?;
    ensure(cal == DivisorCalibration::bundled(), || format!("{path:?} differs from the compiled-in calibration"))
}

pub fn run(dir: &Path) -> Summary {
    let start = Instant::now();
    let mut checks = Vec::new();
    let mut push = |name: String, r: Outcome| checks.push(Check { name, ok: r.is_ok(), detail: r.err() });
    for (name, f) in builtin() {
        push(name, f());
    }
    push("fixture divisor_calibration.json".into(), calibration_check(dir));
    match load::<BrieskornCase>(dir, "brieskorn.json") {
        Ok(cases) => {
            for c in &cases {
                let k = c.k.map(|k| format!(" k={k}")).unwrap_or_default();
                push(format!("brieskorn {}{k}", c.family), brieskorn_case(c));
            }
        }
        Err(e) => push("fixture brieskorn.json".into(), Err(e)),
    }
    match load::<CensusCase>(dir, "census.json") {
        Ok(cases) => {
            for c in &cases {
                push(format!("census {}", c.fixture), census_case(dir, c));
            }
        }
        Err(e) => push("fixture census.json".into(), Err(e)),
    }
    match load::<SeifertCase>(dir, "seifert.json") {
        Ok(cases) => {
            for c in &cases {
                push(format!("seifert {}", c.name), seifert_case(c));
            }
        }
        Err(e) => push("fixture seifert.json".into(), Err(e)),
    }
    let failed = checks.iter().filter(|c| !c.ok).count();
    let mut warnings = Vec::new();
    let secs = start.elapsed().as_secs_f64();
    if secs > 60.0 {
        warnings.push(format!("selftest took {secs:.1} s, over the 60 s budget"));
    }
    Summary { passed: checks.len() - failed, failed, checks, warnings }
}

/// Named value for use in a JSON report.
pub fn to_value(s: &Summary) -> Value {
    serde_json::to_value(s).expect("summary serializes")
}
