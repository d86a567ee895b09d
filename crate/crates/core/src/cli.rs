//! Command-line front end.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::cross_section::{
    bracket_cross, bracket_cross_numeric, project_to_cross_section, CompactContext, CrossSectionPoint,
};
use crate::error::{Error, Result};
use crate::goldman::{bracket_symbolic, PathEntrySymbol};
use crate::lie::{AlgebraContext, GroupKind, Observable, ObservableSpec};
use crate::quasipoisson::{bracket_combinatorial, SurfaceFunction, SurfaceQp};
use crate::report::{FixtureResult, Report};
use crate::repspace::{PointFile, RepPoint};
use crate::suites::{mix, run_suite, Suite, SuiteConfig};
use crate::surfaces::{
    intersection_data, polygon_model, realize_pair, word_of_diagram, GeneratorWord, PathDiagram,
    SurfaceSpec,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "surface-qp", version, about = "Quasi-Poisson brackets of holonomy functions on surface representation spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Bracket of two holonomy functions, by formula and by bivector.
    Bracket(BracketArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Surface JSON file ({"genus":g,"boundary_count":b}, or a list of them), or `g,b`.
    #[arg(long)]
    pub surface: Option<String>,
    /// `gl` or `u`; defaults per suite
    #[arg(long, value_parser = parse_group)]
    pub group: Option<GroupKind>,
    /// Matrix size
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Override the suite tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    /// Report path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BracketArgs {
    #[command(flatten)]
    pub common: Common,
    /// Path diagram JSON; give twice for α and β.
    #[arg(long)]
    pub diagram: Vec<PathBuf>,
    /// Word of α when no diagram is given.
    #[arg(long)]
    pub alpha: Option<String>,
    /// Word of β when no diagram is given.
    #[arg(long)]
    pub beta: Option<String>,
    /// Observable on α: `entry:i,j` (one-based), `trace` or `trace:k`.
    #[arg(long, default_value = "entry:1,2")]
    pub phi: String,
    /// Observable on β
    #[arg(long, default_value = "entry:2,1")]
    pub psi: String,
    /// Point JSON; random seeded points when absent.
    #[arg(long)]
    pub point: Option<PathBuf>,
    /// Number of random points.
    #[arg(long, default_value_t = 3)]
    pub points: usize,
    /// Restrict to the cross-section (compact group only).
    #[arg(long)]
    pub cross_section: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// qp-identity, moment, main-theorem, splitting, goldman, cross-section, simple-path, classical or geometry
    #[arg(long, value_parser = parse_suite)]
    pub suite: Suite,
    /// Number of points (or pairs) per fixture family.
    #[arg(long)]
    pub points: Option<usize>,
    /// Evaluate the formula under a deliberately wrong sign convention.
    #[arg(long)]
    pub mutate: bool,
}

fn parse_group(s: &str) -> std::result::Result<GroupKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Singular(_) | Error::NumericDomain(_) | Error::NotGeneralPosition(_) => EXIT_NUMERIC,
        _ => EXIT_INPUT,
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SurfaceInput {
    One(SurfaceSpec),
    Many(Vec<SurfaceSpec>),
}

/// `g,b` or a JSON file holding one surface or a list.
pub fn parse_surfaces(arg: &str) -> Result<Vec<SurfaceSpec>> {
    if let Some((g, b)) = arg.split_once(',') {
        if let (Ok(g), Ok(b)) = (g.trim().parse(), b.trim().parse()) {
            return Ok(vec![SurfaceSpec::new(g, b)?]);
        }
    }
    let text = read(Path::new(arg))?;
    let parsed: SurfaceInput =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{arg}: {e}")))?;
    let list = match parsed {
        SurfaceInput::One(s) => vec![s],
        SurfaceInput::Many(v) => v,
    };
    for s in &list {
        s.validate()?;
    }
    Ok(list)
}

/// `entry:i,j`, `entry:i,j:im`, `trace` or `trace:k`.
pub fn parse_observable(s: &str, ctx: &AlgebraContext) -> Result<Observable> {
    let bad = || Error::Parse(format!("bad observable `{s}`"));
    let mut parts = s.split(':');
    let spec = match parts.next() {
        Some("trace") => ObservableSpec::Trace {
            power: match parts.next() {
                Some(k) => k.parse().map_err(|_| bad())?,
                None => 1,
            },
        },
        Some("entry") => {
            let (i, j) = parts.next().and_then(|p| p.split_once(',')).ok_or_else(bad)?;
            let part = match parts.next() {
                None | Some("re") => crate::lie::Part::Re,
                Some("im") => crate::lie::Part::Im,
                _ => return Err(bad()),
            };
            ObservableSpec::Entry {
                i: i.trim().parse().map_err(|_| bad())?,
                j: j.trim().parse().map_err(|_| bad())?,
                part,
            }
        }
        _ => return Err(bad()),
    };
    if parts.next().is_some() {
        return Err(bad());
    }
    spec.build(ctx)
}

fn emit(report: &Report, out: &Option<PathBuf>) -> Result<()> {
    let text = report.to_json();
    match out {
        Some(p) => std::fs::write(p, text + "\n").map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn summary(report: &Report) {
    eprintln!(
        "{}: {} ({} fixtures, {} failed, max residual {:e})",
        report.suite,
        if report.pass { "PASS" } else { "FAIL" },
        report.fixture_count,
        report.failures,
        report.max_residual
    );
}

pub fn verify(args: &VerifyArgs) -> Result<Report> {
    let c = &args.common;
    let cfg = SuiteConfig {
        suite: args.suite,
        group: c.group,
        n: c.n,
        seed: c.seed,
        tol: c.tol,
        points: args.points,
        surfaces: c.surface.as_deref().map(parse_surfaces).transpose()?,
        mutate: args.mutate,
    };
    run_suite(&cfg)
}

struct Paths {
    spec: SurfaceSpec,
    wa: GeneratorWord,
    wb: GeneratorWord,
    data: crate::surfaces::IntersectionData,
}

fn bracket_paths(args: &BracketArgs) -> Result<Paths> {
    let surfaces = match &args.common.surface {
        Some(s) => parse_surfaces(s)?,
        None => return Err(Error::InvalidArgument("--surface is required".into())),
    };
    let [spec] = surfaces[..] else {
        return Err(Error::InvalidArgument("bracket needs exactly one surface".into()));
    };
    if spec.is_trivial() {
        return Err(Error::InvalidSurface("the disk has no paths".into()));
    }
    let pm = polygon_model(&spec);
    match args.diagram.len() {
        0 => {
            let word = |w: &Option<String>, name: &str| -> Result<GeneratorWord> {
                let w = w
                    .as_deref()
                    .ok_or_else(|| Error::InvalidArgument(format!("--{name} or --diagram is required")))?;
                let w = GeneratorWord::parse(w)?;
                spec.check_word(&w)?;
                Ok(w)
            };
            let (wa, wb) = (word(&args.alpha, "alpha")?, word(&args.beta, "beta")?);
            let (_, _, data) = realize_pair(&wa, &wb, &pm, args.common.seed)?;
            Ok(Paths { spec, wa, wb, data })
        }
        2 => {
            let load = |p: &PathBuf| -> Result<PathDiagram> { PathDiagram::from_json(&read(p)?) };
            let (da, db) = (load(&args.diagram[0])?, load(&args.diagram[1])?);
            let wa = word_of_diagram(&da, &pm)?;
            let wb = word_of_diagram(&db, &pm)?;
            let data = intersection_data(&da, &db, &pm)?;
            Ok(Paths { spec, wa, wb, data })
        }
        k => Err(Error::InvalidArgument(format!("expected 0 or 2 diagrams, got {k}"))),
    }
}

fn load_point(path: &Path, ctx: &AlgebraContext, spec: &SurfaceSpec) -> Result<RepPoint> {
    let file: PointFile =
        serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    if file.group != ctx.kind {
        return Err(Error::InvalidArgument(format!("point is for group {}", file.group)));
    }
    let m = file.to_point(ctx)?;
    if m.spec != *spec {
        return Err(Error::InvalidArgument("point lives on another surface".into()));
    }
    Ok(m)
}

pub fn bracket(args: &BracketArgs) -> Result<Report> {
    let c = &args.common;
    let kind = c.group.unwrap_or(if args.cross_section { GroupKind::U } else { GroupKind::GL });
    let ctx = AlgebraContext::new(kind, c.n)?;
    let tol = c.tol.unwrap_or(if args.cross_section { 1e-7 } else { 1e-8 });
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let Paths { spec, wa, wb, data } = bracket_paths(args)?;
    let phi = parse_observable(&args.phi, &ctx)?;
    let psi = parse_observable(&args.psi, &ctx)?;
    let points = match &args.point {
        Some(p) => vec![load_point(p, &ctx, &spec)?],
        None => (0..args.points)
            .map(|k| RepPoint::random(&ctx, spec, mix(c.seed, 0, k as u64)))
            .collect::<Result<_>>()?,
    };
    if points.is_empty() {
        return Err(Error::InvalidArgument("empty fixture list".into()));
    }
    let s = SurfaceQp::build(&spec, &ctx)?;
    let f = SurfaceFunction::holonomy(phi.clone(), wa.clone());
    let g = SurfaceFunction::holonomy(psi.clone(), wb.clone());
    let symbolic = match (&phi, &psi, kind, args.cross_section) {
        (
            Observable::Entry { i, j, part: crate::lie::Part::Re },
            Observable::Entry { i: k, j: l, part: crate::lie::Part::Re },
            GroupKind::GL,
            false,
        ) => Some(bracket_symbolic(
            &spec,
            ctx.n,
            &PathEntrySymbol::new(wa.clone(), *i, *j),
            &PathEntrySymbol::new(wb.clone(), *k, *l),
            &data,
        )?),
        _ => None,
    };
    let mut fixtures = Vec::new();
    for (k, m) in points.into_iter().enumerate() {
        let id = format!("bracket/{wa}|{wb}/{}|{}/p{k}", phi.describe(), psi.describe());
        if args.cross_section {
            let cc = CompactContext::from_algebra(&ctx)?;
            let p = if args.point.is_some() {
                CrossSectionPoint::new(&cc, m)?
            } else {
                project_to_cross_section(&cc, &m)?.0
            };
            let comb = bracket_cross(&cc, &phi, &wa, &psi, &wb, &data, &p)?;
            let num = bracket_cross_numeric(&cc, &s, &f, &g, &p)?;
            fixtures.push(FixtureResult::compare(format!("{id}/cross-section"), comb.total, num, tol));
            continue;
        }
        let comb = bracket_combinatorial(&ctx, &phi, &wa, &psi, &wb, &data, &m)?;
        let num = s.bracket_numeric(&f, &g, &m)?;
        fixtures.push(
            FixtureResult::compare(format!("{id}/formula"), comb.total, num, tol).with_detail(format!(
                "endpoint {:.16e}, crossing {:.16e}",
                comb.endpoint, comb.crossing
            )),
        );
        if let Some(nf) = &symbolic {
            fixtures.push(FixtureResult::compare(format!("{id}/symbolic"), nf.evaluate(&m)?, num, tol));
        }
    }
    let mut report = Report::new("bracket", &kind.to_string(), ctx.n, c.seed, fixtures);
    report.normal_form = symbolic.map(|nf| nf.to_sexpr());
    report.intersection = Some(crate::surfaces::algebraic_intersection(&data).to_string());
    Ok(report)
}

/// Runs the CLI on the given arguments and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
        }
    };
    let (result, out) = match &cli.command {
        Command::Bracket(a) => (bracket(a), &a.common.out),
        Command::Verify(a) => (verify(a), &a.common.out),
    };
    match result {
        Ok(report) => {
            summary(&report);
            if let Err(e) = emit(&report, out) {
                eprintln!("error: {e}");
                return EXIT_INPUT;
            }
            if report.pass {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
