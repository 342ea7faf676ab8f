use std::fs;
use std::path::{Path, PathBuf};

use hmrkit::complexes::{report, BlockDifferentials, GradedRanks};
use hmrkit::index_grading::{closed4_index, j_structure, TopologicalData4};
use hmrkit::morse_blowup::{
    build_model_complexes, integrate_blowup_flow, sphere_model, Anchor, BaseMorseData, FlowOptions, LinearFlowModel,
};
use hmrkit::real_spinc::{
    admits_real_structure, branched_cover_invariants, cohomology_group, fixtures, real_spinc_torsor,
    real_structure_classes, theta_on_cohomology, EquivariantCWData, SeifertMatrix, SpincError,
};
use hmrkit::seifert_hmr::{lens_hmr, psc_hmr, BrieskornFamily, BrieskornInput, BrieskornReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::CliError;

pub type CmdResult = Result<Value, CliError>;

fn to_value<T: Serialize>(v: &T) -> CmdResult {
    Ok(serde_json::to_value(v)?)
}

pub fn read_input(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::input("io", format!("{}: {e}", path.display())))
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    Ok(serde_json::from_str(&read_input(path)?)?)
}

/// `lo:hi`, either bound may be negative.
pub fn parse_window(s: &str) -> Result<(i64, i64), CliError> {
    let bad = || CliError::input("invalid_argument", format!("window {s:?} must look like lo:hi with lo <= hi"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let lo: i64 = a.trim().parse().map_err(|_| bad())?;
    let hi: i64 = b.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

pub fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    if s.trim().is_empty() {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| CliError::input("invalid_argument", format!("bad {what} entry {x:?}"))))
        .collect()
}

/// Morse input is either base data (`points`) or explicit blocks
/// (`generators`).
pub fn morse(input: Option<&Path>, sphere: Option<&str>, anchor: Anchor, with_blocks: bool) -> CmdResult {
    let (blocks, shift) = match (input, sphere) {
        (Some(_), Some(_)) | (None, None) => {
            return Err(CliError::input("invalid_argument", "give exactly one of --input and --sphere"))
        }
        (None, Some(s)) => {
            let v: Vec<usize> = parse_list(s, "sphere")?;
            let [p, n] = v[..] else {
                return Err(CliError::input("invalid_argument", "--sphere takes POSITIVE,NEGATIVE"));
            };
            let m = build_model_complexes(&sphere_model(p, n), &anchor)?;
            (m.blocks, Some(m.shift))
        }
        (Some(path), None) => {
            let raw: Value = serde_json::from_str(&read_input(path)?)?;
            if raw.get("generators").is_some() {
                let b: BlockDifferentials = serde_json::from_value(raw)?;
                b.validate()?;
                (b, None)
            } else {
                let base: BaseMorseData = serde_json::from_value(raw)?;
                let m = build_model_complexes(&base, &anchor)?;
                (m.blocks, Some(m.shift))
            }
        }
    };
    let rep = report(&blocks)?;
    let mut out = json!({
        "generators": blocks.generators,
        "shift": shift,
        "report": rep,
    });
    if with_blocks {
        out["blocks"] = serde_json::to_value(&blocks)?;
    }
    Ok(out)
}

#[derive(Debug, Deserialize)]
struct FlowInput {
    #[serde(rename = "L")]
    l: Vec<Vec<f64>>,
    phi0: Vec<f64>,
    #[serde(default = "one")]
    s0: f64,
    t_max: f64,
    step: f64,
    #[serde(default)]
    options: Option<FlowOptions>,
}

fn one() -> f64 {
    1.0
}

pub struct FlowArgs<'a> {
    pub input: Option<&'a Path>,
    pub diag: Option<&'a str>,
    pub seed: u64,
    pub t_max: f64,
    pub step: f64,
    pub s0: f64,
    pub samples: bool,
    pub csv: Option<&'a Path>,
}

/// Unit vector drawn from the seeded generator.
pub fn random_unit(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

pub fn flow(a: FlowArgs) -> CmdResult {
    let (model, phi0, s0, t_max, step, opts) = match (a.input, a.diag) {
        (Some(p), None) => {
            let f: FlowInput = parse_json(p)?;
            let opts = f.options.unwrap_or_default();
            (LinearFlowModel::new(f.l), f.phi0, f.s0, f.t_max, f.step, opts)
        }
        (None, Some(d)) => {
            let vals: Vec<f64> = parse_list(d, "diagonal")?;
            let phi0 = random_unit(vals.len(), a.seed);
            (LinearFlowModel::diagonal(&vals), phi0, a.s0, a.t_max, a.step, FlowOptions::default())
        }
        _ => return Err(CliError::input("invalid_argument", "give exactly one of --input and --diag")),
    };
    let traj = integrate_blowup_flow(&model, &phi0, s0, t_max, step, &opts)?;
    if let Some(path) = a.csv {
        let mut s = String::from("t,s,lambda");
        for i in 0..phi0.len() {
            s.push_str(&format!(",phi{i}"));
        }
        s.push('\n');
        for x in &traj.samples {
            s.push_str(&format!("{},{},{}", x.t, x.s, x.lambda));
            for p in &x.phi {
                s.push_str(&format!(",{p}"));
            }
            s.push('\n');
        }
        fs::write(path, s).map_err(|e| CliError::input("io", format!("{}: {e}", path.display())))?;
    }
    let t = traj.terminal();
    let mut out = json!({
        "phi0": phi0,
        "converged": traj.converged,
        "steps": traj.steps,
        "limit_index": traj.limit_index,
        "limit_eigenvalue": traj.limit_eigenvalue,
        "terminal": t,
        "max_drift": traj.max_drift,
    });
    if a.samples {
        out["samples"] = serde_json::to_value(&traj.samples)?;
    }
    Ok(out)
}

fn fixture_by_name(name: &str) -> Result<EquivariantCWData, CliError> {
    fixtures::catalog()
        .into_iter()
        .find(|(n, _)| n == name)
        .map(|(_, d)| d)
        .ok_or_else(|| CliError::input("unknown_fixture", format!("no fixture named {name:?}")))
}

fn invariants(d: &EquivariantCWData, quotient: bool) -> Result<Vec<Vec<String>>, SpincError> {
    (0..=d.top_degree())
        .map(|n| Ok(cohomology_group(d, n, quotient)?.invariants().iter().map(|x| x.to_string()).collect()))
        .collect()
}

/// Cohomology of `M` and `M/ι` (invariant factors per degree, 0 for `Z`),
/// `Θ` on cohomology, the real structure classes and the census.
pub fn spinc(input: Option<&Path>, fixture: Option<&str>, c1: Option<&str>, census: bool) -> CmdResult {
    let data = match (input, fixture) {
        (Some(p), None) => parse_json::<EquivariantCWData>(p)?,
        (None, Some(n)) => fixture_by_name(n)?,
        _ => return Err(CliError::input("invalid_argument", "give exactly one of --input and --fixture")),
    };
    let c1: Option<Vec<i64>> = c1.map(|s| parse_list(s, "c1")).transpose()?;
    let theta: Vec<_> = (0..=data.top_degree()).map(|n| theta_on_cohomology(&data, n)).collect::<Result<_, _>>()?;
    let mut out = json!({
        "cells_M": data.cells_m,
        "cells_Q": data.cells_q,
        "cohomology_M": invariants(&data, false)?,
        "cohomology_Q": invariants(&data, true)?,
        "theta": theta,
        "real_structure_classes": real_structure_classes(&data)?.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
    });
    if let Some(c) = &c1 {
        out["admits_real_structure"] = json!(admits_real_structure(&data, c)?);
    }
    if census {
        out["census"] = to_value(&real_spinc_torsor(&data, c1.as_deref())?)?;
    }
    Ok(out)
}

pub fn brieskorn(family: Option<&str>, triple: Option<&str>, k: Option<u32>, window: Option<&str>) -> CmdResult {
    let (fam, k) = match (family, triple) {
        (Some(f), None) => {
            // A full triple such as 2,3,13 is accepted here too.
            match f.parse::<BrieskornFamily>() {
                Ok(fam) => (fam, k.unwrap_or(1)),
                Err(e) => classify(f).ok_or(e)?,
            }
        }
        (None, Some(t)) => classify(t).ok_or_else(|| {
            CliError::from(hmrkit::seifert_hmr::SeifertError::UnknownFamily(t.to_string()))
        })?,
        _ => return Err(CliError::input("invalid_argument", "give exactly one of --family and --triple")),
    };
    if fam.uses_k() && k == 0 {
        return Err(CliError::input("invalid_argument", "--k must be positive"));
    }
    let input = BrieskornInput { family: fam, k, window: window.map(parse_window).transpose()? };
    to_value(&BrieskornReport::compute(&input)?)
}

fn classify(s: &str) -> Option<(BrieskornFamily, u32)> {
    let v: Vec<u64> = parse_list(s, "triple").ok()?;
    let [p, q, r] = v[..] else { return None };
    BrieskornFamily::classify(p, q, r)
}

/// The per-structure answers, plus the number of real spin-c structures
/// counted from the cellular model of `L(p, q)`.
pub fn lens(p: u64, q: u64) -> CmdResult {
    let triples = lens_hmr(p, q)?;
    let census = if p >= 2 {
        let data = fixtures::lens_space(p as usize, q as usize, 1)?;
        let c = real_spinc_torsor(&data, None)?;
        c.size
    } else {
        Some(1)
    };
    Ok(json!({ "p": p, "q": q, "count": triples.len(), "census_size": census, "structures": triples }))
}

pub fn psc(b1: u32, torsion: bool, window: (i64, i64)) -> CmdResult {
    let t = psc_hmr(b1, torsion);
    let ranks = |m: &hmrkit::seifert_hmr::TowerModule| -> GradedRanks { m.ranks_in(window.0, window.1) };
    Ok(json!({
        "b1": b1,
        "torsion": torsion,
        "hat": t.hat,
        "check": t.check,
        "bar": t.bar,
        "window": window,
        "ranks": { "hat": ranks(&t.hat), "check": ranks(&t.check), "bar": ranks(&t.bar) },
    }))
}

pub fn index(d: TopologicalData4, pairings: Option<&str>) -> CmdResult {
    let mut out = json!({ "index": closed4_index(&d)? });
    if let Some(p) = pairings {
        out["grading_set"] = to_value(&j_structure(&parse_list::<i64>(p, "pairing")?)?)?;
    }
    Ok(out)
}

pub fn seifert_matrix(input: Option<&Path>, matrix: Option<&str>) -> CmdResult {
    let a: SeifertMatrix = match (input, matrix) {
        (Some(p), None) => parse_json(p)?,
        (None, Some(m)) => {
            let rows: Vec<Vec<i64>> = serde_json::from_str(m)?;
            serde_json::from_value(json!({ "A": rows }))?
        }
        _ => return Err(CliError::input("invalid_argument", "give exactly one of --input and --matrix")),
    };
    let inv = branched_cover_invariants(&a)?;
    Ok(json!({ "dim": a.dim(), "order": inv.order, "b1": inv.b1 }))
}

pub fn fixture_dir(explicit: Option<&Path>) -> PathBuf {
    if let Some(p) = explicit {
        return p.to_path_buf();
    }
    if let Some(p) = std::env::var_os("HMRKIT_FIXTURES") {
        return PathBuf::from(p);
    }
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures"))
}

/// Writes every cellular fixture as `cw/<name>.json`.
pub fn fixtures_dump(dir: &Path) -> CmdResult {
    let cw = dir.join("cw");
    fs::create_dir_all(&cw).map_err(|e| CliError::input("io", format!("{}: {e}", cw.display())))?;
    let mut names = Vec::new();
    for (name, data) in fixtures::catalog() {
        let path = cw.join(format!("{name}.json"));
        let mut s = serde_json::to_string(&data)?;
        s.push('\n');
        fs::write(&path, s).map_err(|e| CliError::input("io", format!("{}: {e}", path.display())))?;
        names.push(name);
    }
    Ok(json!({ "dir": cw.display().to_string(), "written": names }))
}

pub fn fixtures_list() -> CmdResult {
    let names: Vec<Value> = fixtures::catalog()
        .into_iter()
        .map(|(n, d)| json!({ "name": n, "cells_M": d.cells_m, "cells_Q": d.cells_q }))
        .collect();
    Ok(Value::Array(names))
}
