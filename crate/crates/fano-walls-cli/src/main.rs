//! `fano-walls`: command-line surface over the core library.
//!
//! Each subcommand delegates to exactly one library entry point; the binary
//! adds flag parsing, the text/json/svg switch, and `--output` redirection.
//! All output is deterministic: identical invocations produce byte-identical
//! bytes, whatever `--jobs` says.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use fano_walls_core::expr::parse_class_expr;
use fano_walls_core::kulattice::{euler_matrix, minus_one_classes, rotation_orbit, to_ku_class};
use fano_walls_core::numclass::{ChernCharacter, DenomGate, FanoContext};
use fano_walls_core::rat::{rat_from_str, rat_to_string, Rat};
use fano_walls_core::svg::{render_walls, RenderStyle};
use fano_walls_core::verify;
use fano_walls_core::walls::{
    numerical_wall, scan_candidates, Bounds, Completeness, ScanReport, Wall, WallComputation,
    Window,
};

/// Rotation steps `orbit` tries before giving up on closure. Orbits close
/// only at low degree; elsewhere the entries grow without bound.
const ORBIT_MAX_STEPS: usize = 24;

/// Search box for `minus-one`, matching the built-in verification suite.
const MINUS_ONE_BOX: i64 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Svg,
}

#[derive(Parser)]
#[command(
    name = "fano-walls",
    version,
    about = "Exact wall-and-chamber computations on index-2 Fano threefolds"
)]
struct Cli {
    /// Output format; defaults to text (render defaults to svg)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write output to FILE instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,

    /// Worker threads for the scan partitioning (default: automatic)
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Euler characteristic chi(E), or the pairing chi(E, F) with --vs
    Chi {
        #[command(flatten)]
        deg: Degree,
        /// Class expression: "k1", "-k1+2*k2", "ch(1,0,-1,0)", rationals as p/q
        #[arg(long, allow_hyphen_values = true)]
        class: String,
        /// Second argument of the pairing
        #[arg(long, allow_hyphen_values = true)]
        vs: Option<String>,
    },
    /// Matrix of the Euler form on the residual lattice in the (k1, k2) basis
    EulerMatrix {
        #[command(flatten)]
        deg: Degree,
    },
    /// Hilbert polynomial chi(E(t))
    Hilbert {
        #[command(flatten)]
        deg: Degree,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
    },
    /// Numerical wall where the tilt slopes of two classes agree
    Wall {
        #[command(flatten)]
        deg: Degree,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
        #[arg(long, allow_hyphen_values = true)]
        vs: String,
    },
    /// Enumerate candidate walls for a class inside a window
    Scan(ScanArgs),
    /// Rotation orbit of a class of the residual lattice
    Orbit {
        #[command(flatten)]
        deg: Degree,
        #[arg(long, allow_hyphen_values = true)]
        class: String,
    },
    /// The (-1)-classes of the residual lattice in a fixed search box
    MinusOne {
        #[command(flatten)]
        deg: Degree,
    },
    /// Draw the candidate walls in a window as an SVG atlas
    Render(ScanArgs),
    /// Run the built-in acceptance checks; exits nonzero if any fail
    Verify,
}

#[derive(Args)]
struct Degree {
    /// Degree d = H^3 of the threefold, 1..=5
    #[arg(long)]
    degree: i64,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    deg: Degree,
    /// Class whose walls are scanned
    #[arg(long, allow_hyphen_values = true)]
    class: String,
    /// Left edge of the beta-window (rational)
    #[arg(long, value_name = "RAT", allow_hyphen_values = true)]
    beta_min: String,
    /// Right edge of the beta-window (rational)
    #[arg(long, value_name = "RAT", allow_hyphen_values = true)]
    beta_max: String,
    /// Cap on s = alpha^2 (rational)
    #[arg(long, value_name = "RAT", default_value = "4", allow_hyphen_values = true)]
    alpha2_max: String,
    /// Rank cap for enumerated destabilizers
    #[arg(long, default_value_t = Bounds::default().max_rank)]
    max_rank: u32,
    /// Denominator allowed in destabilizer ch2 entries
    #[arg(long, default_value_t = Bounds::default().ch2_denominator)]
    ch2_denom: u32,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(n) = cli.jobs {
        if n == 0 {
            bail!("--jobs must be positive");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("building the worker pool")?;
    }
    let gate = gate_from_env()?;
    let format = cli.format;
    let out = cli.output;

    let content = match cli.cmd {
        Cmd::Chi { deg, class, vs } => {
            let ctx = ctx_for(&deg)?;
            let e = class_arg(&ctx, &gate, "--class", &class)?;
            let value = match &vs {
                Some(src) => {
                    let f = class_arg(&ctx, &gate, "--vs", src)?;
                    ctx.euler_pairing(&e, &f)
                }
                None => ctx.chi(&e),
            };
            match pick(format, Format::Text)? {
                Format::Text => format!("{value}\n"),
                Format::Json => json_line(json!({
                    "degree": ctx.degree(),
                    "kind": if vs.is_some() { "pairing" } else { "chi" },
                    "value": rat_to_string(&value),
                })),
                Format::Svg => bail!("chi has no svg output"),
            }
        }
        Cmd::EulerMatrix { deg } => {
            let ctx = ctx_for(&deg)?;
            let m = euler_matrix(ctx.degree());
            match pick(format, Format::Text)? {
                Format::Text => {
                    format!("[[{},{}],[{},{}]]\n", m[0][0], m[0][1], m[1][0], m[1][1])
                }
                Format::Json => json_line(serde_json::to_value(m)?),
                Format::Svg => bail!("euler-matrix has no svg output"),
            }
        }
        Cmd::Hilbert { deg, class } => {
            let ctx = ctx_for(&deg)?;
            let e = class_arg(&ctx, &gate, "--class", &class)?;
            let p = ctx.hilbert_polynomial(&e);
            match pick(format, Format::Text)? {
                Format::Text => format!("{p}\n"),
                Format::Json => json_line(serde_json::to_value(&p)?),
                Format::Svg => bail!("hilbert has no svg output"),
            }
        }
        Cmd::Wall { deg, class, vs } => {
            let ctx = ctx_for(&deg)?;
            let v = class_arg(&ctx, &gate, "--class", &class)?;
            let u = class_arg(&ctx, &gate, "--vs", &vs)?;
            let w = numerical_wall(&ctx, &v, &u);
            match pick(format, Format::Text)? {
                Format::Text => match &w {
                    WallComputation::Wall(wall) => format!("{wall}\n"),
                    WallComputation::Everywhere => {
                        "everywhere: the classes are proportional\n".into()
                    }
                    WallComputation::Nowhere => {
                        "nowhere: the slope-equality locus misses the upper half-plane\n".into()
                    }
                },
                Format::Json => json_line(match &w {
                    WallComputation::Wall(wall) => serde_json::to_value(wall)?,
                    WallComputation::Everywhere => json!({ "type": "everywhere" }),
                    WallComputation::Nowhere => json!({ "type": "nowhere" }),
                }),
                Format::Svg => bail!("wall has no svg output; use render"),
            }
        }
        Cmd::Scan(args) => {
            let (_, report) = run_scan(&args, &gate)?;
            match pick(format, Format::Text)? {
                Format::Text => scan_text(&report),
                Format::Json => json_line(serde_json::to_value(&report)?),
                Format::Svg => bail!("scan emits text or json; render draws svg"),
            }
        }
        Cmd::Orbit { deg, class } => {
            let ctx = ctx_for(&deg)?;
            let e = class_arg(&ctx, &gate, "--class", &class)?;
            let k = to_ku_class(&ctx, &e).map_err(|e| anyhow!("KuLatticeError: {e}"))?;
            let report = rotation_orbit(ctx.degree(), &k, ORBIT_MAX_STEPS)
                .map_err(|e| anyhow!("KuLatticeError: {e}"))?;
            match pick(format, Format::Text)? {
                Format::Text => {
                    let line: Vec<String> =
                        report.classes.iter().map(|c| c.to_string()).collect();
                    match report.period {
                        Some(p) => {
                            format!("{} -> {}\nperiod {p}\n", line.join(" -> "), report.start)
                        }
                        None => format!(
                            "{} -> ...\nno period within {ORBIT_MAX_STEPS} steps\n",
                            line.join(" -> ")
                        ),
                    }
                }
                Format::Json => json_line(serde_json::to_value(&report)?),
                Format::Svg => bail!("orbit has no svg output"),
            }
        }
        Cmd::MinusOne { deg } => {
            let ctx = ctx_for(&deg)?;
            let classes = minus_one_classes(ctx.degree(), MINUS_ONE_BOX);
            match pick(format, Format::Text)? {
                Format::Text => {
                    let mut s = String::new();
                    for k in &classes {
                        let _ = writeln!(s, "{k}");
                    }
                    s
                }
                Format::Json => json_line(json!({
                    "degree": ctx.degree(),
                    "box": MINUS_ONE_BOX,
                    "classes": serde_json::to_value(&classes)?,
                })),
                Format::Svg => bail!("minus-one has no svg output"),
            }
        }
        Cmd::Render(args) => {
            let (window, report) = run_scan(&args, &gate)?;
            match pick(format, Format::Svg)? {
                Format::Svg => {
                    let walls: Vec<Wall> =
                        report.candidates.iter().map(|c| c.wall.clone()).collect();
                    render_walls(&walls, &window, &RenderStyle::default())
                }
                _ => bail!("render emits svg only; use scan for text or json"),
            }
        }
        Cmd::Verify => {
            let results = verify::run_all();
            let failed = results.iter().filter(|r| !r.passed).count();
            let content = match pick(format, Format::Text)? {
                Format::Text => {
                    let mut s = String::new();
                    for r in &results {
                        let status = if r.passed { "PASS" } else { "FAIL" };
                        let _ = writeln!(s, "{status} {:2}  {}: {}", r.id, r.name, r.detail);
                    }
                    let _ = writeln!(s, "{} passed, {failed} failed", results.len() - failed);
                    s
                }
                Format::Json => json_line(serde_json::to_value(&results)?),
                Format::Svg => bail!("verify has no svg output"),
            };
            emit(&out, &content)?;
            return Ok(if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            });
        }
    };
    emit(&out, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn pick(requested: Option<Format>, default: Format) -> Result<Format> {
    Ok(requested.unwrap_or(default))
}

fn ctx_for(deg: &Degree) -> Result<FanoContext> {
    FanoContext::new(deg.degree).map_err(|e| anyhow!("NumClassError: {e}"))
}

/// Parses a class flag and applies the advisory denominator gate: gate
/// violations warn on stderr but never block the computation.
fn class_arg(
    ctx: &FanoContext,
    gate: &DenomGate,
    flag: &str,
    src: &str,
) -> Result<ChernCharacter> {
    let e = parse_class_expr(ctx, src).map_err(|e| anyhow!("{flag}: {e}"))?;
    let bad = gate.violations(&e);
    if !bad.is_empty() {
        eprintln!("warning: {flag} = {e}: components {bad:?} fail the denominator gate (advisory)");
    }
    Ok(e)
}

fn rat_flag(flag: &str, s: &str) -> Result<Rat> {
    rat_from_str(s).map_err(|e| anyhow!("{flag}: {e}"))
}

fn run_scan(args: &ScanArgs, gate: &DenomGate) -> Result<(Window, ScanReport)> {
    let ctx = ctx_for(&args.deg)?;
    let v = class_arg(&ctx, gate, "--class", &args.class)?;
    let window = Window::new(
        rat_flag("--beta-min", &args.beta_min)?,
        rat_flag("--beta-max", &args.beta_max)?,
        rat_flag("--alpha2-max", &args.alpha2_max)?,
    )
    .map_err(|e| anyhow!("WallsError: {e}"))?;
    let bounds = Bounds::new(args.max_rank, Bounds::default().max_c1_span, args.ch2_denom)
        .map_err(|e| anyhow!("WallsError: {e}"))?;
    let report = scan_candidates(&ctx, &v, &window, &bounds);
    Ok((window, report))
}

fn scan_text(r: &ScanReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "degree {}  v = {}", r.degree, r.v);
    let _ = writeln!(
        s,
        "window: {} < beta < {}, 0 < s <= {}",
        r.window.beta_min, r.window.beta_max, r.window.s_max
    );
    let _ = writeln!(
        s,
        "bounds: max_rank {}, max_c1_span {}, ch2_denominator {}",
        r.bounds.max_rank, r.bounds.max_c1_span, r.bounds.ch2_denominator
    );
    if r.candidates.is_empty() {
        let _ = writeln!(s, "no candidate walls");
    } else {
        let _ = writeln!(s, "{} candidate wall(s):", r.candidates.len());
        for (i, c) in r.candidates.iter().enumerate() {
            let _ = writeln!(
                s,
                "  {}. {}  destabilizer {}  q_sub {}  q_quot {}",
                i + 1,
                c.wall,
                c.destabilizer,
                c.q_sub,
                c.q_quot
            );
        }
    }
    match &r.completeness {
        Completeness::Certified { required_rank, required_c1_span } => {
            let _ = writeln!(
                s,
                "complete: certified against rank <= {required_rank}, c1 span <= {required_c1_span}"
            );
        }
        Completeness::Incomplete { reason } => {
            let _ = writeln!(s, "possibly incomplete: {reason}");
        }
    }
    s
}

fn json_line(value: serde_json::Value) -> String {
    format!("{value}\n")
}

fn gate_from_env() -> Result<DenomGate> {
    match std::env::var("FANO_WALLS_DENOM_GATE") {
        Ok(s) => DenomGate::parse(&s).map_err(|e| anyhow!("FANO_WALLS_DENOM_GATE: {e}")),
        Err(std::env::VarError::NotPresent) => Ok(DenomGate::default()),
        Err(e) => Err(anyhow!("FANO_WALLS_DENOM_GATE: {e}")),
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .with_context(|| format!("writing {}", path.display()))?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(content.as_bytes())?;
        }
    }
    Ok(())
}
