//! `udcert`: build unit-distance witnesses, certify their chromatic numbers
//! and check slab colorings from the command line.
//!
//! Exit codes: `solve` returns 0 on Sat, 1 on Unsat, 2 on Timeout. Every
//! other command returns 0 on success. Failed validation, a coloring
//! violation or a rejected parameter gives 3, and a command line that does
//! not parse gives 64.

mod plot;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use udcert::chromatic::{chromatic_number, is_k_colorable, is_k_colorable_parallel, SolveBudget, Verdict};
use udcert::colorings::{verify_scheme_parallel, ColoringScheme};
use udcert::constructions::curve::curve_odd_cycle;
use udcert::constructions::forbidden::enumerate_forbidden_radii;
use udcert::constructions::rational::{min_admissible_l, rational_odd_cycle};
use udcert::constructions::slab::{slab_chi5_witness, SpindleParams, SEARCH_MARGIN};
use udcert::constructions::strip::{min_admissible_gadgets, steps_from_delta, strip_chi3_witness, strip_chi4_witness};
use udcert::scalar::Scalar;
use udcert::udgraph::{load_graph, save_graph, to_dimacs, validate_coloring, validate_geometry, Coloring, UnitDistanceGraph};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

const EXIT_FAILED: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug, Serialize)]
#[command(name = "udcert", version, about = "Unit-distance witnesses and slab colorings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// List forbidden radii 1/(2 sin(pi l/m)) in an interval.
    Radii(RadiiArgs),
    /// Build a witness graph, validate it and write it to a file.
    Witness(WitnessArgs),
    /// Decide k-colorability or compute the chromatic number of a graph file.
    Solve(SolveArgs),
    /// Upper-bound colorings.
    #[command(subcommand)]
    Coloring(ColoringCommand),
    /// Write a graph file as a DIMACS edge instance.
    Export(ExportArgs),
    /// Draw a graph file as SVG.
    Plot(PlotArgs),
}

#[derive(Args, Debug, Serialize)]
struct RadiiArgs {
    #[arg(long)]
    min: f64,
    #[arg(long)]
    max: f64,
    #[arg(long, default_value_t = 101)]
    max_denom: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum WitnessKind {
    Strip3,
    Strip4,
    Slab5,
    Rational,
    Curve,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum CurveShape {
    Segment,
    Arc,
}

#[derive(Args, Debug, Serialize)]
struct WitnessArgs {
    kind: WitnessKind,
    /// Slab or strip width; `p/q` keeps rational witnesses exact.
    #[arg(long)]
    eps: Option<String>,
    /// Chain spacing for strip3, as `1/n`.
    #[arg(long)]
    delta: Option<String>,
    /// Strip height for strip4.
    #[arg(long)]
    h: Option<f64>,
    /// Gadget count for strip4; defaults to the smallest admissible one.
    #[arg(long)]
    m: Option<u64>,
    /// Cycle numerator for slab5 (with --m and --steps), or the parameter
    /// l of the rational cycle.
    #[arg(long)]
    l: Option<u64>,
    /// Chain steps 1/delta for slab5.
    #[arg(long)]
    steps: Option<u64>,
    /// Largest cycle length scanned when slab5 parameters are searched.
    #[arg(long, default_value_t = 101)]
    max_m: u64,
    #[arg(long, value_enum, default_value_t = CurveShape::Segment)]
    shape: CurveShape,
    /// Segment length or arc chord for the curve witness.
    #[arg(long, default_value_t = 2.5)]
    length: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct SolveArgs {
    graph: PathBuf,
    #[arg(long, conflicts_with = "chromatic", required_unless_present = "chromatic")]
    k: Option<usize>,
    #[arg(long)]
    chromatic: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Wall-clock budget in seconds.
    #[arg(long, env = "UDCERT_BUDGET_SECS", default_value_t = 600.0)]
    budget: f64,
    #[arg(long)]
    max_decisions: Option<u64>,
    /// Where a found coloring is written; defaults to `<graph>.coloring.json`.
    #[arg(long)]
    coloring_out: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ColoringCommand {
    /// Sample unit-distance pairs and count monochromatic ones.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SchemeArg {
    Hex7,
    Slab7,
    Stripe3,
    Stripe4,
    Qmod3,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    scheme: SchemeArg,
    /// Number of bounded dimensions.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Bounded width (slab7: decimal; qmod3: `p/q`).
    #[arg(long)]
    eps: Option<String>,
    /// Stripe height as an exact value `p/q`.
    #[arg(long, conflicts_with = "h_max")]
    h: Option<String>,
    /// Use the largest height the stripe coloring allows.
    #[arg(long)]
    h_max: bool,
    /// Override the hexagon side (negative controls).
    #[arg(long)]
    side: Option<f64>,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args, Debug, Serialize)]
struct ExportArgs {
    graph: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct PlotArgs {
    graph: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Coloring file written by `solve`.
    #[arg(long)]
    coloring: Option<PathBuf>,
}

/// The parsed command line, embedded in every artifact.
#[derive(Debug, Serialize)]
struct RunConfig<'a> {
    tool: &'static str,
    version: &'static str,
    #[serde(flatten)]
    command: &'a Command,
}

impl RunConfig<'_> {
    fn json(&self) -> String {
        serde_json::to_string(self).expect("run config serializes")
    }

    fn stamp(&self, g: &mut UnitDistanceGraph) {
        g.meta.insert("tool_version".into(), format!("udcert {VERSION}"));
        g.meta.insert("run_config".into(), self.json());
    }
}

#[derive(Serialize, serde::Deserialize)]
struct ColoringFile {
    k: usize,
    colors: Vec<usize>,
    run_config: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let config = RunConfig {
        tool: "udcert",
        version: VERSION,
        command: &cli.command,
    };
    match run(&cli.command, &config) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_FAILED)
        }
    }
}

fn run(command: &Command, config: &RunConfig) -> anyhow::Result<u8> {
    match command {
        Command::Radii(a) => radii(a),
        Command::Witness(a) => witness(a, config),
        Command::Solve(a) => solve(a, config),
        Command::Coloring(ColoringCommand::Verify(a)) => verify(a, config),
        Command::Export(a) => export(a, config),
        Command::Plot(a) => {
            let g = load_graph(&a.graph)?;
            let coloring = match &a.coloring {
                Some(p) => Some(read_coloring(p)?),
                None => None,
            };
            if let Some(c) = &coloring {
                if !validate_coloring(&g, c)? {
                    bail!("coloring in {} is not proper for this graph", a.graph.display());
                }
            }
            let svg = plot::render(&g, coloring.as_ref(), &config.json());
            write(&a.out, &svg)?;
            println!("wrote {} ({} vertices, {} edges)", a.out.display(), g.vertex_count(), g.edge_count());
            Ok(0)
        }
    }
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn radii(a: &RadiiArgs) -> anyhow::Result<u8> {
    let list = enumerate_forbidden_radii(a.min, a.max, a.max_denom)?;
    println!("{:>9} {:>12} {:>12}", "l/m", "q", "r");
    for fr in &list {
        println!("{:>9} {:>12.9} {:>12.9}", format!("{}/{}", fr.l, fr.m), fr.q(), fr.radius);
    }
    println!("{} radii in [{}, {}] with odd m <= {}", list.len(), a.min, a.max, a.max_denom);
    Ok(0)
}

fn real(s: &Option<String>, default: f64, name: &str) -> anyhow::Result<f64> {
    match s {
        Some(s) => Ok(s.parse::<Scalar>().with_context(|| format!("--{name}"))?.to_f64()),
        None => Ok(default),
    }
}

fn witness(a: &WitnessArgs, config: &RunConfig) -> anyhow::Result<u8> {
    let mut g = match a.kind {
        WitnessKind::Strip3 => {
            let eps = real(&a.eps, 0.3, "eps")?;
            let delta: Scalar = a.delta.as_deref().unwrap_or("1/12").parse()?;
            strip_chi3_witness(eps, steps_from_delta(&delta)?)?
        }
        WitnessKind::Strip4 => {
            let h = a.h.unwrap_or(0.9);
            let m = match a.m {
                Some(m) => m,
                None => min_admissible_gadgets(h)?,
            };
            println!("gadgets m = {m}");
            strip_chi4_witness(h, m)?
        }
        WitnessKind::Slab5 => {
            let eps = real(&a.eps, 0.65, "eps")?;
            let params = match (a.steps, a.l, a.m) {
                (Some(steps), Some(l), Some(m)) => SpindleParams::new(eps, steps, l, m)?,
                (None, None, None) => SpindleParams::search(eps, a.max_m, SEARCH_MARGIN)?,
                _ => bail!("give all of --steps, --l, --m or none of them"),
            };
            println!(
                "delta = 1/{}  q = {}/{}  r = {:.9}  eps1 = {:.9}",
                params.steps,
                params.radius.l,
                params.radius.m,
                params.radius.radius,
                params.epsilon1()
            );
            slab_chi5_witness(&params)?
        }
        WitnessKind::Rational => {
            let eps: Scalar = a.eps.as_deref().unwrap_or("2/5").parse()?;
            if !eps.is_exact() {
                bail!("--eps must be exact (p/q) for the rational witness");
            }
            let l = match a.l {
                Some(l) => l,
                None => min_admissible_l(&eps)?,
            };
            println!("l = {l}");
            rational_odd_cycle(l, &eps)?
        }
        WitnessKind::Curve => {
            let eps = real(&a.eps, 0.2, "eps")?;
            let polyline = curve_polyline(a.shape, a.length);
            let c = curve_odd_cycle(&polyline, eps)?;
            println!(
                "segments s = {}  cycle length {}  max offset {:.6}",
                c.segments,
                4 * c.segments + 1,
                c.max_offset
            );
            c.graph
        }
    };
    config.stamp(&mut g);
    let report = validate_geometry(&g);
    save_graph(&g, &a.out)?;
    println!("wrote {} ({} vertices, {} edges)", a.out.display(), g.vertex_count(), g.edge_count());
    println!("{report}");
    Ok(if report.pass { 0 } else { EXIT_FAILED })
}

/// A straight segment of the given length, or a half circle whose chord
/// has that length.
fn curve_polyline(shape: CurveShape, length: f64) -> Vec<[f64; 2]> {
    match shape {
        CurveShape::Segment => vec![[0.0, 0.0], [length, 0.0]],
        CurveShape::Arc => {
            let r = length / 2.0;
            (0..=400)
                .map(|i| {
                    let t = std::f64::consts::PI * (1.0 - i as f64 / 400.0);
                    [r + r * t.cos(), r * t.sin()]
                })
                .collect()
        }
    }
}

fn read_coloring(path: &Path) -> anyhow::Result<Coloring> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: ColoringFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(Coloring::new(file.colors))
}

fn write_coloring(path: &Path, k: usize, c: &Coloring, config: &RunConfig) -> anyhow::Result<()> {
    let file = ColoringFile {
        k,
        colors: c.colors.clone(),
        run_config: config.json(),
    };
    write(path, &(serde_json::to_string_pretty(&file)? + "\n"))
}

fn solve(a: &SolveArgs, config: &RunConfig) -> anyhow::Result<u8> {
    let g = load_graph(&a.graph)?;
    if !(a.budget > 0.0) {
        bail!("budget must be positive");
    }
    let mut budget = SolveBudget::seconds(a.budget);
    if let Some(d) = a.max_decisions {
        budget = budget.with_decision_limit(d);
    }
    let coloring_out = a.coloring_out.clone().unwrap_or_else(|| a.graph.with_extension("coloring.json"));
    println!("graph {} ({} vertices, {} edges)", a.graph.display(), g.vertex_count(), g.edge_count());

    if a.chromatic {
        let r = match chromatic_number(&g, &budget) {
            Ok(r) => r,
            Err(udcert::Error::SolveTimeout { lower, upper }) => {
                println!("TIMEOUT chromatic number in [{lower}, {upper}]");
                return Ok(2);
            }
            Err(e) => return Err(e.into()),
        };
        for o in &r.outcomes {
            println!("k={} {} {}", o.k, o.verdict_name(), stats_line(&o.stats));
        }
        println!("clique bound {}  greedy bound {}", r.clique_bound, r.greedy_bound);
        println!("chromatic number {}", r.chi);
        write_coloring(&coloring_out, r.chi, &r.coloring, config)?;
        println!("coloring written to {}", coloring_out.display());
        return Ok(0);
    }

    let k = a.k.expect("clap enforces --k or --chromatic");
    let out = if a.threads > 1 {
        is_k_colorable_parallel(&g, k, &budget, a.threads)
    } else {
        is_k_colorable(&g, k, &budget)
    };
    println!("k={k} {} {}", out.verdict_name(), stats_line(&out.stats));
    Ok(match &out.verdict {
        Verdict::Sat(c) => {
            write_coloring(&coloring_out, k, c, config)?;
            println!("coloring with {} colors written to {}", c.color_count(), coloring_out.display());
            0
        }
        Verdict::Unsat => 1,
        Verdict::Timeout => 2,
    })
}

fn stats_line(s: &udcert::chromatic::SolveStats) -> String {
    format!(
        "decisions={} backtracks={} merges={} elapsed={:.3}s",
        s.decisions,
        s.backtracks,
        s.merges,
        s.elapsed.as_secs_f64()
    )
}

fn verify(a: &VerifyArgs, config: &RunConfig) -> anyhow::Result<u8> {
    let exact = |s: &str| -> anyhow::Result<num_rational::BigRational> {
        match s.parse::<Scalar>()? {
            Scalar::Exact(q) => Ok(q),
            Scalar::Real(_) => bail!("{s} is not an exact value p/q"),
        }
    };
    let stripe = |colors: usize| -> anyhow::Result<ColoringScheme> {
        match (&a.h, a.h_max) {
            (Some(h), false) => {
                let h = exact(h)?;
                Ok(ColoringScheme::stripe(colors, a.k, &h * &h)?)
            }
            (None, _) => Ok(ColoringScheme::stripe_max(colors, a.k)?),
            (Some(_), true) => unreachable!("clap rejects --h with --h-max"),
        }
    };
    let scheme = match a.scheme {
        SchemeArg::Hex7 => match a.side {
            Some(side) => ColoringScheme::hex_with_side(side, 0, 0.0),
            None => ColoringScheme::hex7(),
        },
        SchemeArg::Slab7 => {
            let eps = real(&a.eps, 0.3, "eps")?;
            match a.side {
                Some(side) => ColoringScheme::hex_with_side(side, a.k, eps),
                None => ColoringScheme::slab7(a.k, eps)?,
            }
        }
        SchemeArg::Stripe3 => stripe(3)?,
        SchemeArg::Stripe4 => stripe(4)?,
        SchemeArg::Qmod3 => ColoringScheme::qmod3(exact(a.eps.as_deref().unwrap_or("1/10"))?)?,
    };
    let report = verify_scheme_parallel(&scheme, a.samples, a.seed, a.workers)?;
    println!("run config {}", config.json());
    println!("{report}");
    Ok(if report.pass() { 0 } else { EXIT_FAILED })
}

fn export(a: &ExportArgs, config: &RunConfig) -> anyhow::Result<u8> {
    let g = load_graph(&a.graph)?;
    let mut comments = vec![format!("udcert {VERSION}"), format!("run_config {}", config.json())];
    for (k, v) in &g.meta {
        comments.push(format!("source {k} {v}"));
    }
    write(&a.out, &to_dimacs(&g, &comments))?;
    println!("wrote {} (p edge {} {})", a.out.display(), g.vertex_count(), g.edge_count());
    Ok(0)
}
