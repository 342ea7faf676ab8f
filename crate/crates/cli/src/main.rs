mod commands;
mod error;
mod render;
mod selftest;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hmrkit::index_grading::TopologicalData4;
use hmrkit::morse_blowup::Anchor;
use serde_json::{json, Value};

use commands::{parse_window, CmdResult, FlowArgs};
use error::{CliError, EXIT_INPUT};

#[derive(Parser)]
#[command(name = "hmrkit", version, about = "Finite models and calculators for real monopole Floer homology")]
struct Cli {
    /// Render the report as an indented text table instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Write the report to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Accepted for compatibility; JSON is the default format.
    #[arg(long, global = true, hide = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Blown-up Morse model or explicit block complex: graded ranks and checks.
    Morse(MorseArgs),
    /// Integrate the blown-up gradient flow of a linear vector field.
    Flow(FlowCmd),
    /// Real structures and real spin-c structures from equivariant cells.
    Spinc(SpincArgs),
    /// Floer groups of Brieskorn spheres Σ(2,q,r).
    Brieskorn(BrieskornArgs),
    /// Floer groups of lens spaces, one per real spin-c structure.
    Lens(LensArgs),
    /// Floer groups of positive scalar curvature manifolds.
    Psc(PscArgs),
    /// Index of the linearized equations on a closed 4-manifold.
    Index(IndexArgs),
    /// Homology of the branched double cover from a Seifert matrix.
    SeifertMatrix(SeifertArgs),
    /// Run the worked examples and fixture tables.
    Selftest(DirArgs),
    /// Manage the fixture library.
    Fixtures {
        #[command(subcommand)]
        action: FixturesAction,
    },
}

#[derive(Args)]
struct MorseArgs {
    /// Base Morse data or block complex JSON.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Single base point with POS positive and NEG negative eigenvalues.
    #[arg(long, value_name = "POS,NEG")]
    sphere: Option<String>,
    /// Keep the index-formula gradings.
    #[arg(long, conflicts_with = "anchor_id")]
    raw: bool,
    /// Generator that receives --anchor-grading.
    #[arg(long, requires = "anchor_grading")]
    anchor_id: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    anchor_grading: Option<i64>,
    /// Include the differential blocks in the report.
    #[arg(long)]
    blocks: bool,
}

#[derive(Args)]
struct FlowCmd {
    /// Flow input JSON with L, phi0, s0, t_max, step.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Diagonal entries of L; phi0 is drawn from --seed.
    #[arg(long, allow_hyphen_values = true)]
    diag: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 40.0)]
    t_max: f64,
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    #[arg(long, default_value_t = 1.0)]
    s0: f64,
    /// Include every recorded sample.
    #[arg(long)]
    samples: bool,
    /// Write the trajectory as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct SpincArgs {
    /// Equivariant cellular data JSON.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Built-in fixture name (see `fixtures list`).
    #[arg(long)]
    fixture: Option<String>,
    /// Degree-2 cocycle, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    c1: Option<String>,
    /// Skip the real spin-c census.
    #[arg(long)]
    no_census: bool,
}

#[derive(Args)]
struct BrieskornArgs {
    /// 2,3,+1 | 2,3,-1 | 2,5,-1 | 2,5,+1 | 2,7,29, or a full triple.
    #[arg(long, allow_hyphen_values = true)]
    family: Option<String>,
    /// Explicit triple such as 2,3,13.
    #[arg(long)]
    triple: Option<String>,
    #[arg(long)]
    k: Option<u32>,
    /// Window lo:hi of the explicit truncated complex.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
}

#[derive(Args)]
struct LensArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    q: u64,
}

#[derive(Args)]
struct PscArgs {
    #[arg(long, default_value_t = 0)]
    b1: u32,
    /// c1 is torsion; otherwise every group vanishes.
    #[arg(long)]
    torsion: bool,
    #[arg(long, allow_hyphen_values = true, default_value = "-8:8")]
    window: String,
}

#[derive(Args)]
struct IndexArgs {
    #[arg(long, allow_hyphen_values = true)]
    c1sq: i64,
    #[arg(long, allow_hyphen_values = true)]
    sigma: i64,
    #[arg(long, default_value_t = 0)]
    b1: u32,
    #[arg(long, default_value_t = 0)]
    bplus: u32,
    #[arg(long, default_value_t = 0)]
    b0: u32,
    /// Pairings of c1 with anti-invariant classes, for the grading set.
    #[arg(long, allow_hyphen_values = true)]
    pairings: Option<String>,
}

#[derive(Args)]
struct SeifertArgs {
    /// JSON of the form {"A": [[...]]}.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Inline matrix such as [[-1,1],[0,-1]].
    #[arg(long, allow_hyphen_values = true)]
    matrix: Option<String>,
}

#[derive(Args)]
struct DirArgs {
    /// Fixture directory; defaults to $HMRKIT_FIXTURES or the bundled one.
    #[arg(long)]
    dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum FixturesAction {
    /// Write the cellular fixtures as JSON under <dir>/cw.
    Dump(DirArgs),
    /// Names and cell counts of the cellular fixtures.
    List,
}

/// Report value plus the exit code it should produce.
fn dispatch(cmd: Command) -> Result<(Value, i32), CliError> {
    let ok = |r: CmdResult| r.map(|v| (v, 0));
    match cmd {
        Command::Morse(a) => {
            let anchor = match (a.raw, a.anchor_id) {
                (true, _) => Anchor::Raw,
                (false, Some(id)) => Anchor::Generator { id, grading: a.anchor_grading.unwrap_or(0) },
                (false, None) => Anchor::Default,
            };
            ok(commands::morse(a.input.as_deref(), a.sphere.as_deref(), anchor, a.blocks))
        }
        Command::Flow(a) => ok(commands::flow(FlowArgs {
            input: a.input.as_deref(),
            diag: a.diag.as_deref(),
            seed: a.seed,
            t_max: a.t_max,
            step: a.step,
            s0: a.s0,
            samples: a.samples,
            csv: a.csv.as_deref(),
        })),
        Command::Spinc(a) => {
            ok(commands::spinc(a.input.as_deref(), a.fixture.as_deref(), a.c1.as_deref(), !a.no_census))
        }
        Command::Brieskorn(a) => {
            ok(commands::brieskorn(a.family.as_deref(), a.triple.as_deref(), a.k, a.window.as_deref()))
        }
        Command::Lens(a) => ok(commands::lens(a.p, a.q)),
        Command::Psc(a) => ok(commands::psc(a.b1, a.torsion, parse_window(&a.window)?)),
        Command::Index(a) => ok(commands::index(
            TopologicalData4 { c1_sq: a.c1sq, sigma: a.sigma, b1_inv: a.b1, bplus_inv: a.bplus, b0_inv: a.b0 },
            a.pairings.as_deref(),
        )),
        Command::SeifertMatrix(a) => ok(commands::seifert_matrix(a.input.as_deref(), a.matrix.as_deref())),
        Command::Selftest(a) => {
            let s = selftest::run(&commands::fixture_dir(a.dir.as_deref()));
            let code = if s.failed == 0 { 0 } else { 1 };
            Ok((selftest::to_value(&s), code))
        }
        Command::Fixtures { action } => match action {
            FixturesAction::Dump(a) => ok(commands::fixtures_dump(&commands::fixture_dir(a.dir.as_deref()))),
            FixturesAction::List => ok(commands::fixtures_list()),
        },
    }
}

fn emit(v: &Value, pretty: bool, output: Option<&PathBuf>) -> std::io::Result<()> {
    let mut text = if pretty { render::render(v) } else { serde_json::to_string(v).expect("value serializes") };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match output {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let err = CliError::input("usage", e.render().to_string().trim());
            let _ = emit(&json!({ "error": err }), false, None);
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    let (value, code) = match dispatch(cli.command) {
        Ok(r) => r,
        Err(e) => (json!({ "error": e }), e.exit),
    };
    if let Err(e) = emit(&value, cli.pretty, cli.output.as_ref()) {
        let err = CliError::input("io", e.to_string());
        let _ = emit(&json!({ "error": err }), false, None);
        return ExitCode::from(EXIT_INPUT as u8);
    }
    ExitCode::from(code as u8)
}
