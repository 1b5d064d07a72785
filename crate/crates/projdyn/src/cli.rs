//! Command definitions and their execution. `main` only parses arguments,
//! calls [`run`] and forwards the outcome.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use projdyn_core::constructor::{construct, period_bound, ConstructOptions, Construction, Seeded, Sequential};
use projdyn_core::morphism_cert::{is_morphism, MorphismDecision};
use projdyn_core::orbits::{assert_primitive_period_with, detect_orbit, OrbitLimits, OrbitOutcome};
use projdyn_core::planner::{best_plan_with_menu, realize_plan_seeded, ExtraBlock, PeriodMenu};
use projdyn_core::products::product_map;
use projdyn_core::{Error, PolynomialMap, ProjectivePoint};
use serde::Serialize;

use crate::choices::parse_choices;
use crate::fixtures::{load_fixture, period8_factor, verify_all};
use crate::format::{
    map_from_str, map_to_string, point_from_str, to_canonical_string, CertifyReport, ConstructionReport, MapJson,
    OrbitReport, PlanJson, PointJson,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

/// Morphism certification is skipped by default above this dimension; the
/// Macaulay matrix on P^6 already has 3003 columns.
pub const AUTO_CERTIFY_MAX_DIM: usize = 5;

#[derive(Debug, Parser)]
#[command(name = "projdyn", version, about = "Rational periodic points of polynomial maps on projective space")]
pub struct Cli {
    /// Print readable text instead of JSON.
    #[arg(long, global = true)]
    pub human: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a degree-2 map on P^dim with [0,...,0,1] of the given period.
    Construct(ConstructArgs),
    /// Check the period of a point.
    Verify(VerifyArgs),
    /// Decide whether a map is a morphism.
    Certify(MapSource),
    /// Splice two maps into one on the product chart.
    Product(ProductArgs),
    /// Choose blocks maximizing the period on P^dim.
    Plan(PlanArgs),
    /// Re-check every embedded reference map.
    #[command(name = "paper-check")]
    ReferenceCheck,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub period: usize,
    /// Seed for free values; without it the draws are 2, 3, 4, ...
    #[arg(long)]
    pub seed: Option<u64>,
    /// Fixed coefficients, e.g. `c=1,b:=1-a` on P^1 or `c0_1_1=2`.
    #[arg(long)]
    pub choices: Option<String>,
    /// Write the map alone to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Skip the morphism certificate.
    #[arg(long)]
    pub no_certify: bool,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct MapSourceGroup {
    #[arg(long)]
    pub map: Option<PathBuf>,
    /// One of the embedded reference maps.
    #[arg(long)]
    pub fixture: Option<String>,
}

#[derive(Debug, Args)]
pub struct MapSource {
    #[command(flatten)]
    pub source: MapSourceGroup,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: MapSourceGroup,
    /// `0,0,1`, a JSON point, or a file holding either. Defaults to the
    /// fixture point or `[0,...,0,1]`.
    #[arg(long)]
    pub point: Option<String>,
    /// Expected primitive period; without it the orbit is detected.
    #[arg(long)]
    pub period: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ProductArgs {
    #[arg(long)]
    pub left: PathBuf,
    #[arg(long)]
    pub right: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[arg(long)]
    pub dim: usize,
    /// `M:n=FILE` adds period n on P^M backed by the map in FILE. FILE may
    /// be `@period8` or `@period9` for the embedded maps.
    #[arg(long = "extra-period")]
    pub extra_period: Vec<String>,
    /// Build and certify the witness map.
    #[arg(long)]
    pub realize: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// With --realize, write the map to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// What a command produced: exit code plus the text for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn fail(code: i32, message: impl Into<String>) -> Self {
        Outcome { code, stdout: String::new(), stderr: message.into() + "\n" }
    }
}

#[derive(Serialize)]
struct ErrorReport {
    error: String,
}

pub fn orbit_limits() -> OrbitLimits {
    let mut limits = OrbitLimits::default();
    if let Some(n) = std::env::var("PROJDYN_MAX_ITERS").ok().and_then(|v| v.parse().ok()) {
        limits.max_iters = n;
    }
    limits
}

pub fn run(cli: &Cli) -> Outcome {
    let human = cli.human;
    match &cli.command {
        Command::Construct(a) => cmd_construct(a, human),
        Command::Verify(a) => cmd_verify(a, human),
        Command::Certify(a) => cmd_certify(&a.source, human),
        Command::Product(a) => cmd_product(a, human),
        Command::Plan(a) => cmd_plan(a, human),
        Command::ReferenceCheck => cmd_reference_check(human),
    }
}

fn construction_exit(e: &Error) -> i32 {
    match e {
        Error::InvalidDimension(_) | Error::InvalidPreset(_) | Error::UnknownCoefficient(_) => EXIT_USAGE,
        _ => EXIT_INFEASIBLE,
    }
}

fn read(path: &Path) -> Result<String, Outcome> {
    std::fs::read_to_string(path).map_err(|e| Outcome::fail(EXIT_USAGE, format!("cannot read {}: {}", path.display(), e)))
}

fn write(path: &Path, text: &str) -> Result<(), Outcome> {
    std::fs::write(path, text).map_err(|e| Outcome::fail(EXIT_USAGE, format!("cannot write {}: {}", path.display(), e)))
}

fn load_map(path: &Path) -> Result<PolynomialMap, Outcome> {
    map_from_str(&read(path)?).map_err(|e| Outcome::fail(EXIT_USAGE, format!("{}: {}", path.display(), e)))
}

/// The map plus, for fixtures, the recorded point and period.
fn resolve_source(src: &MapSourceGroup) -> Result<(PolynomialMap, Option<ProjectivePoint>, Option<usize>), Outcome> {
    if let Some(path) = &src.map {
        return Ok((load_map(path)?, None, None));
    }
    let id = src.fixture.as_deref().expect("clap enforces one source");
    let f = load_fixture(id).map_err(|e| Outcome::fail(EXIT_USAGE, e.to_string()))?;
    Ok((f.map, Some(f.point), Some(f.period)))
}

fn unwrap_or_outcome(r: Result<Outcome, Outcome>) -> Outcome {
    r.unwrap_or_else(|o| o)
}

fn cmd_construct(a: &ConstructArgs, human: bool) -> Outcome {
    unwrap_or_outcome((|| {
        if a.dim == 0 {
            return Err(Outcome::fail(EXIT_USAGE, "--dim must be at least 1"));
        }
        let bound = period_bound(a.dim);
        if a.period == 0 || a.period > bound {
            return Err(Outcome::fail(
                EXIT_INFEASIBLE,
                format!("period {} exceeds the constructible bound {} for dimension {}", a.period, bound, a.dim),
            ));
        }
        let presets = match &a.choices {
            Some(text) => parse_choices(text, a.dim).map_err(|e| Outcome::fail(EXIT_USAGE, e.to_string()))?,
            None => Vec::new(),
        };
        let options = ConstructOptions { presets, ..Default::default() };
        let result = match a.seed {
            Some(seed) => construct(a.dim, a.period, &mut Seeded::new(seed), &options),
            None => construct(a.dim, a.period, &mut Sequential, &options),
        };
        let c = result.map_err(|e| Outcome::fail(construction_exit(&e), e.to_string()))?;
        let morphism = (!a.no_certify && a.dim <= AUTO_CERTIFY_MAX_DIM).then(|| {
            let t = Instant::now();
            let cert = is_morphism(&c.map);
            CertifyReport::new(&cert, t.elapsed().as_millis())
        });
        if let Some(path) = &a.out {
            write(path, &map_to_string(&c.map))?;
        }
        Ok(Outcome::ok(if human { human_construction(&c, morphism.as_ref()) } else { construction_json(&c, morphism) }))
    })())
}

/// The JSON report without the timing field, so reruns are byte-identical.
fn construction_json(c: &Construction, morphism: Option<CertifyReport>) -> String {
    let mut report = ConstructionReport::new(c, morphism);
    if let Some(m) = report.morphism.as_mut() {
        m.elapsed_ms = 0;
    }
    to_canonical_string(&report)
}

fn human_construction(c: &Construction, morphism: Option<&CertifyReport>) -> String {
    let mut s = String::new();
    writeln!(s, "map on P^{} with [0,...,0,1] of primitive period {}", c.map.dimension(), c.certificate.period).unwrap();
    for (i, f) in c.map.coordinates().iter().enumerate() {
        writeln!(s, "  x{} -> {}", i, f).unwrap();
    }
    writeln!(s, "orbit:").unwrap();
    for p in &c.certificate.orbit {
        writeln!(s, "  {}", p).unwrap();
    }
    if let Some(m) = morphism {
        writeln!(s, "morphism check: {} (rank {} of {})", m.decision, m.rank, m.columns).unwrap();
    }
    s
}

fn cmd_verify(a: &VerifyArgs, human: bool) -> Outcome {
    unwrap_or_outcome((|| {
        let (map, fixture_point, fixture_period) = resolve_source(&a.source)?;
        let point = match &a.point {
            Some(text) => {
                let text = if Path::new(text).is_file() { read(Path::new(text))? } else { text.clone() };
                point_from_str(&text).map_err(|e| Outcome::fail(EXIT_USAGE, format!("bad point: {}", e)))?
            }
            None => fixture_point.unwrap_or_else(|| ProjectivePoint::base(map.dimension())),
        };
        if point.dimension() != map.dimension() {
            return Err(Outcome::fail(EXIT_USAGE, "point and map dimensions differ"));
        }
        let limits = orbit_limits();
        let period = a.period.or(fixture_period);
        let certified = match period {
            Some(n) => assert_primitive_period_with(&map, &point, n, &limits),
            None => detect_orbit(&map, &point, &limits).and_then(|rec| match rec.outcome {
                OrbitOutcome::PeriodicReturn { period } => assert_primitive_period_with(&map, &point, period, &limits),
                OrbitOutcome::PreperiodicCycle { tail, cycle } => {
                    Err(Error::InvalidMap(format!("preperiodic: tail {} then cycle {}", tail, cycle)))
                }
                OrbitOutcome::Exhausted { max_iters } => {
                    Err(Error::InvalidMap(format!("no return within {} iterations", max_iters)))
                }
            }),
        };
        match certified {
            Ok(cert) => {
                let report = OrbitReport::from(&cert);
                Ok(Outcome::ok(if human {
                    let orbit: Vec<String> = cert.orbit.iter().map(|p| p.to_string()).collect();
                    format!("primitive period {}\n  {}\n", cert.period, orbit.join("\n  "))
                } else {
                    to_canonical_string(&report)
                }))
            }
            Err(e) => Err(Outcome {
                code: EXIT_VERIFY,
                stdout: if human { format!("not certified: {}\n", e) } else { to_canonical_string(&ErrorReport { error: e.to_string() }) },
                stderr: String::new(),
            }),
        }
    })())
}

fn cmd_certify(src: &MapSourceGroup, human: bool) -> Outcome {
    unwrap_or_outcome((|| {
        let (map, _, _) = resolve_source(src)?;
        let t = Instant::now();
        let cert = is_morphism(&map);
        let report = CertifyReport::new(&cert, t.elapsed().as_millis());
        let stdout = if human {
            format!(
                "{}: rank {} of {} columns ({} rows, degree {})\n",
                report.decision, cert.rank, cert.columns, cert.rows, cert.degree
            )
        } else {
            to_canonical_string(&report)
        };
        let code = if cert.decision == MorphismDecision::Morphism { EXIT_OK } else { EXIT_VERIFY };
        Ok(Outcome { code, stdout, stderr: String::new() })
    })())
}

fn cmd_product(a: &ProductArgs, human: bool) -> Outcome {
    unwrap_or_outcome((|| {
        let (left, right) = (load_map(&a.left)?, load_map(&a.right)?);
        let psi = product_map(&left, &right).map_err(|e| Outcome::fail(EXIT_USAGE, e.to_string()))?;
        let text = map_to_string(&psi);
        if let Some(path) = &a.out {
            write(path, &text)?;
        }
        Ok(Outcome::ok(if human { human_map(&psi) } else { text }))
    })())
}

fn human_map(map: &PolynomialMap) -> String {
    let mut s = format!("map on P^{}\n", map.dimension());
    for (i, f) in map.coordinates().iter().enumerate() {
        writeln!(s, "  x{} -> {}", i, f).unwrap();
    }
    s
}

fn parse_extra(text: &str) -> Result<ExtraBlock, Outcome> {
    let bad = || Outcome::fail(EXIT_USAGE, format!("bad --extra-period {:?}: expected M:n=FILE", text));
    let (spec, file) = text.split_once('=').ok_or_else(bad)?;
    let (m, n) = spec.split_once(':').ok_or_else(bad)?;
    let dim: usize = m.trim().parse().map_err(|_| bad())?;
    let period: usize = n.trim().parse().map_err(|_| bad())?;
    let map = match file.trim() {
        "@period8" => period8_factor(),
        "@period9" => load_fixture("ex1_p2_period9").expect("embedded fixture").map,
        path => load_map(Path::new(path))?,
    };
    if map.dimension() != dim {
        return Err(Outcome::fail(EXIT_USAGE, format!("{} is a map on P^{}, not P^{}", file, map.dimension(), dim)));
    }
    Ok(ExtraBlock { period, map })
}

#[derive(Serialize)]
struct RealizedPlanJson {
    plan: PlanJson,
    map: MapJson,
    point: PointJson,
    period: usize,
    morphism: CertifyReport,
}

fn cmd_plan(a: &PlanArgs, human: bool) -> Outcome {
    unwrap_or_outcome((|| {
        if a.dim == 0 {
            return Err(Outcome::fail(EXIT_USAGE, "--dim must be at least 1"));
        }
        let extras = a.extra_period.iter().map(|t| parse_extra(t)).collect::<Result<Vec<_>, _>>()?;
        let mut menu = PeriodMenu::default();
        for e in &extras {
            menu.add_extra(e.map.dimension(), e.period);
        }
        let plan = best_plan_with_menu(a.dim, &menu);
        let blocks: Vec<String> = plan.blocks.iter().map(|b| format!("(P^{}, period {})", b.dim, b.period)).collect();
        if !a.realize {
            return Ok(Outcome::ok(if human {
                format!("period {} from {}\n", plan.achieved, blocks.join(" + "))
            } else {
                to_canonical_string(&PlanJson::from(&plan))
            }));
        }
        let r = realize_plan_seeded(&plan, a.seed, &extras).map_err(|e| Outcome::fail(EXIT_INFEASIBLE, e.to_string()))?;
        if let Some(path) = &a.out {
            write(path, &map_to_string(&r.map))?;
        }
        let report = RealizedPlanJson {
            plan: PlanJson::from(&plan),
            map: MapJson::from(&r.map),
            point: PointJson::from(&r.point),
            period: r.period.period,
            morphism: CertifyReport::new(&r.morphism, 0),
        };
        Ok(Outcome::ok(if human {
            format!("period {} from {}, certified morphism\n{}", r.period.period, blocks.join(" + "), human_map(&r.map))
        } else {
            to_canonical_string(&report)
        }))
    })())
}

fn cmd_reference_check(human: bool) -> Outcome {
    let report = verify_all(&orbit_limits());
    let stdout = if human {
        let mut s = String::new();
        for c in &report.checks {
            let morphism = match c.morphism_ok {
                Some(true) => "morphism ok",
                Some(false) => "morphism FAILED",
                None => "morphism skipped",
            };
            writeln!(s, "{} {}: {}; {}", if c.passed() { "PASS" } else { "FAIL" }, c.id, c.period_detail, morphism).unwrap();
        }
        s
    } else {
        to_canonical_string(&report)
    };
    Outcome { code: if report.passed() { EXIT_OK } else { EXIT_VERIFY }, stdout, stderr: String::new() }
}
