//! The `laguerre` command line: argument parsing, surface specs, transform
//! scripts and report emission.
//!
//! Reports are JSON with keys in a fixed order, so a fixed seed gives
//! byte-identical output.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::grid::{Axis, FdOrder, Field, Grid};
use crate::group::{self, Generator, LaguerreTransform, RandomElementOptions};
use crate::hypersurface::{
    build_patch, compare_invariants, laguerre_volume, patch_from_samples, Analysis, InvariantOptions,
    SurfacePatch,
};
use crate::minimality::minimality_report;
use crate::spaceforms::{
    embed_sigma, embed_tau, radius_probe_check, transfer_check, ContactElementR30, ContactElementR31,
};
use crate::spheres::{self, ContactElement, SphereElement};
use crate::surface::{Builtin, ContactSurface, EmbeddedSurface, Space, TransformedSurface};

/// Environment variable holding the log filter.
pub const LOG_ENV: &str = "LAGUERRE_LOG";

#[derive(Debug, Parser)]
#[command(name = "laguerre", version, about = "Laguerre geometry of hypersurfaces")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// Overrides shared by every command.
#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Write the report here (atomically) instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Divide every grid step by K.
    #[arg(long, global = true, value_name = "K")]
    pub grid_refine: Option<usize>,
    /// Finite-difference accuracy order.
    #[arg(long, global = true, value_parser = parse_fd_order)]
    pub fd_order: Option<FdOrder>,
    /// Tolerance for the checks of the command.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Minimality threshold on the Euler–Lagrange residual.
    #[arg(long, global = true)]
    pub threshold: Option<f64>,
    /// Seed for `random` steps of transform scripts.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Exit with status 5 when a check exceeds its tolerance.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Per-point CSV export (surface analyze).
    #[arg(long, global = true, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

fn parse_fd_order(s: &str) -> std::result::Result<FdOrder, String> {
    let k: u32 = s.parse().map_err(|_| format!("not an integer: {s}"))?;
    FdOrder::from_int(k).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Oriented spheres and planes.
    #[command(subcommand)]
    Spheres(SpheresCommand),
    /// Laguerre group elements.
    #[command(subcommand)]
    Group(GroupCommand),
    /// Invariants of sampled hypersurfaces.
    #[command(subcommand)]
    Surface(SurfaceCommand),
}

#[derive(Debug, Subcommand)]
pub enum SpheresCommand {
    /// Oriented contact of two sphere elements, given as files or inline JSON.
    Contact { first: String, second: String },
}

#[derive(Debug, Subcommand)]
pub enum GroupCommand {
    /// Multiply out a transform script.
    Compose(TransformArg),
    /// Factor an element into isometries and one flow of each kind.
    Decompose(TransformArg),
}

#[derive(Debug, Args)]
pub struct TransformArg {
    /// Transform script or raw matrix.
    #[arg(long, value_name = "PATH")]
    pub transform: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum SurfaceCommand {
    Analyze(SurfaceArgs),
    Minimality(SurfaceArgs),
    Volume(SurfaceArgs),
    /// Compare invariants of two patches on the same grid.
    Compare(CompareArgs),
    /// Carry a space-form patch into ℝⁿ and check the transfer identities.
    Embed(SurfaceArgs),
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    #[arg(long, value_name = "PATH")]
    pub spec: PathBuf,
    /// Laguerre transform applied before the analysis.
    #[arg(long, value_name = "PATH")]
    pub transform: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, value_name = "PATH")]
    pub spec: PathBuf,
    /// Second patch; defaults to the first.
    #[arg(long, value_name = "PATH")]
    pub against: Option<PathBuf>,
    /// Laguerre transform applied to the second patch.
    #[arg(long, value_name = "PATH")]
    pub transform: Option<PathBuf>,
}

/// A report together with the checks that exceeded their tolerance.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub breaches: Vec<Error>,
}

impl Outcome {
    fn clean(report: Value) -> Self {
        Outcome {
            report,
            breaches: Vec::new(),
        }
    }
}

/// Process exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_) | Error::Input(_) | Error::InvalidCoordinate(_) | Error::InvalidLine(_) => 2,
        Error::InvalidElement(_) => 3,
        Error::DegenerateSurface { .. } | Error::EmbeddingDomain(_) | Error::InsufficientInterior(_) => 4,
        Error::ToleranceBreach { .. } => 5,
    }
}

struct Checks {
    breaches: Vec<Error>,
}

impl Checks {
    fn new() -> Self {
        Checks { breaches: Vec::new() }
    }

    fn at_most(&mut self, identity: &str, value: f64, limit: f64) {
        if !(value <= limit) {
            self.breaches.push(Error::ToleranceBreach {
                identity: identity.to_string(),
                value,
                limit,
            });
        }
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("{what}: {e}")))
}

/// Reads a JSON argument that is either inline (starting with `{`) or a path.
fn json_arg<T: for<'de> Deserialize<'de>>(arg: &str) -> Result<T> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') {
        parse_json(trimmed, "inline JSON")
    } else {
        parse_json(&read_text(Path::new(arg))?, arg)
    }
}

/// Evaluates `3`, `-pi/3`, `2*pi`, `1.5e-2` and similar products.
pub fn parse_range_value(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| Error::Input(format!("bad number {n}"))),
        Value::String(s) => parse_expr(s),
        other => Err(Error::Input(format!("grid range entries must be numbers or strings, got {other}"))),
    }
}

fn parse_expr(s: &str) -> Result<f64> {
    let bad = || Error::Input(format!("cannot evaluate {s:?}"));
    let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let (sign, body) = match text.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, text.strip_prefix('+').unwrap_or(&text)),
    };
    if body.is_empty() {
        return Err(bad());
    }
    let mut value = sign;
    let mut op = '*';
    let mut rest = body;
    loop {
        let end = rest.find(['*', '/']).unwrap_or(rest.len());
        let factor = match &rest[..end] {
            "pi" | "π" => std::f64::consts::PI,
            num => num.parse::<f64>().map_err(|_| bad())?,
        };
        value = if op == '*' { value * factor } else { value / factor };
        if end == rest.len() {
            break;
        }
        op = rest[end..].chars().next().unwrap_or('*');
        rest = &rest[end + 1..];
    }
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AxisSpec {
    name: Option<String>,
    range: [Value; 2],
    count: usize,
    #[serde(default)]
    periodic: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Samples {
    points: Vec<Vec<f64>>,
    normals: Vec<Vec<f64>>,
}

/// A surface spec file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SurfaceSpec {
    space: Space,
    grid: Vec<AxisSpec>,
    builtin: Option<String>,
    #[serde(default)]
    params: Map<String, Value>,
    normal: Option<String>,
    samples: Option<Samples>,
}

enum Source {
    Closed(Arc<dyn ContactSurface>),
    Sampled(Samples),
}

struct LoadedSpec {
    space: Space,
    grid: Grid,
    source: Source,
}

fn load_spec(path: &Path, config: &RunConfig) -> Result<LoadedSpec> {
    let spec: SurfaceSpec = parse_json(&read_text(path)?, &path.display().to_string())?;
    let names = ["u", "v", "w", "s", "t"];
    let axes = spec
        .grid
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let name = a.name.clone().unwrap_or_else(|| names.get(i).map_or(format!("p{i}"), |s| s.to_string()));
            Axis::new(name, parse_range_value(&a.range[0])?, parse_range_value(&a.range[1])?, a.count, a.periodic)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut grid = Grid::new(axes)?;
    let source = match (spec.builtin, spec.samples) {
        (Some(name), None) => {
            let b = Builtin::from_spec(&name, &spec.params, spec.normal.as_deref())?;
            if b.space() != spec.space {
                return Err(Error::Input(format!(
                    "builtin {name} lives in {}, spec says {}",
                    b.space().tag(),
                    spec.space.tag()
                )));
            }
            if let Some(k) = config.grid_refine {
                if k == 0 {
                    return Err(Error::Input("--grid-refine must be positive".into()));
                }
                grid = grid.refined(k);
            }
            Source::Closed(Arc::new(b))
        }
        (None, Some(samples)) => {
            if config.grid_refine.is_some_and(|k| k != 1) {
                return Err(Error::Input("sampled surfaces cannot be refined".into()));
            }
            Source::Sampled(samples)
        }
        _ => return Err(Error::Input("a spec needs exactly one of \"builtin\" and \"samples\"".into())),
    };
    Ok(LoadedSpec {
        space: spec.space,
        grid,
        source,
    })
}

fn fd_order(config: &RunConfig) -> FdOrder {
    config.fd_order.unwrap_or_default()
}

/// A transform script: `{"n": 3, "steps": [...]}` or `{"matrix": [[...]]}`.
///
/// Steps are generators (`isometry`, `parabolic`, `hyperbolic`), `reversal`
/// or `random`; they apply in order.
pub fn load_transform(path: &Path, seed: u64) -> Result<LaguerreTransform> {
    let v: Value = parse_json(&read_text(path)?, &path.display().to_string())?;
    transform_from_json(&v, seed)
}

pub fn transform_from_json(v: &Value, seed: u64) -> Result<LaguerreTransform> {
    if let Some(rows) = v.get("matrix") {
        let rows: Vec<Vec<f64>> =
            serde_json::from_value(rows.clone()).map_err(|e| Error::Input(format!("matrix: {e}")))?;
        return LaguerreTransform::new(group::matrix_from_rows(&rows)?);
    }
    let n = v
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Input("transform script needs \"n\" or \"matrix\"".into()))? as usize;
    let steps = v
        .get("steps")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Input("transform script needs a \"steps\" array".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = LaguerreTransform::identity(n);
    for step in steps {
        let next = match step.get("kind").and_then(Value::as_str) {
            Some("random") => group::random_element(&mut rng, n, RandomElementOptions::default()),
            Some("reversal") => group::orientation_reversal(n),
            _ => {
                let g: Generator =
                    serde_json::from_value(step.clone()).map_err(|e| Error::Input(format!("step {step}: {e}")))?;
                group::generator(n, &g)?
            }
        };
        t = t.then(&next)?;
    }
    Ok(t)
}

fn build(spec: &LoadedSpec, transform: Option<&LaguerreTransform>, order: FdOrder) -> Result<SurfacePatch> {
    match (&spec.source, transform) {
        (Source::Closed(s), None) => build_patch(s.as_ref(), &spec.grid),
        (Source::Closed(s), Some(t)) => {
            let moved = TransformedSurface::new(s.clone(), t.clone())?;
            build_patch(&moved, &spec.grid)
        }
        (Source::Sampled(s), None) => patch_from_samples(spec.space, &spec.grid, &s.points, &s.normals, order),
        (Source::Sampled(s), Some(t)) => {
            if spec.space != Space::Euclidean {
                return Err(Error::usage("transforms act on Euclidean patches; embed first"));
            }
            let mut points = Vec::with_capacity(s.points.len());
            let mut normals = Vec::with_capacity(s.points.len());
            for (x, xi) in s.points.iter().zip(&s.normals) {
                let c = group::act_on_contact(t, &ContactElement::new(x.clone(), xi.clone())?)?;
                points.push(c.x);
                normals.push(c.xi);
            }
            patch_from_samples(Space::Euclidean, &spec.grid, &points, &normals, order)
        }
    }
}

fn analyze(spec: &LoadedSpec, transform: Option<&LaguerreTransform>, config: &RunConfig) -> Result<Analysis> {
    let order = fd_order(config);
    let patch = build(spec, transform, order)?;
    log::info!("patch built on grid {:?}", spec.grid.counts());
    Analysis::new(patch, InvariantOptions { fd_order: order })
}

fn range_summary(grid: &Grid, f: &Field) -> Value {
    let k = f.comps();
    let mut lo = vec![f64::INFINITY; k];
    let mut hi = vec![f64::NEG_INFINITY; k];
    for flat in f.region().indices(grid) {
        for (c, v) in f.at(flat).iter().enumerate() {
            lo[c] = lo[c].min(*v);
            hi[c] = hi[c].max(*v);
        }
    }
    json!({ "min": lo, "max": hi })
}

fn grid_json(grid: &Grid) -> Value {
    Value::Array(
        grid.axes()
            .iter()
            .map(|a| json!({ "name": a.name, "lo": a.lo, "hi": a.hi, "count": a.count, "periodic": a.periodic }))
            .collect(),
    )
}

fn analysis_json(a: &Analysis, checks: &mut Checks, tol: f64) -> Value {
    let grid = a.patch.grid();
    let inv = &a.invariants;
    let residuals: Map<String, Value> = inv
        .residual_summary(grid)
        .into_iter()
        .map(|(k, v)| {
            checks.at_most(&k, v, tol);
            (k, json!(v))
        })
        .collect();
    json!({
        "surface": a.patch.metadata(),
        "space": a.patch.space().tag(),
        "grid": grid_json(grid),
        "interior_points": inv.shape_spectrum().region().count(),
        "shape_spectrum": range_summary(grid, inv.shape_spectrum()),
        "b_spectrum": range_summary(grid, inv.b_spectrum()),
        "metric": range_summary(grid, inv.metric()),
        "mean_radius": range_summary(grid, a.shape.mean_radius()),
        "rho": range_summary(grid, a.shape.rho()),
        "max_scalar_curvature": inv.scalar_curvature().max_abs(grid),
        "residuals": residuals,
        "tol": tol,
    })
}

fn write_csv(path: &Path, a: &Analysis) -> Result<()> {
    let grid = a.patch.grid();
    let m = a.patch.params();
    let spectrum = a.invariants.shape_spectrum();
    let mut text = String::new();
    let mut header: Vec<String> = grid.axes().iter().map(|ax| ax.name.clone()).collect();
    header.extend(["r".to_string(), "rho".to_string()]);
    header.extend((1..=m).map(|i| format!("s{i}")));
    text.push_str(&header.join(","));
    text.push('\n');
    for flat in spectrum.region().indices(grid) {
        let mut row: Vec<String> = grid.point(flat).iter().map(|v| format!("{v:e}")).collect();
        row.push(format!("{:e}", a.shape.mean_radius().at(flat)[0]));
        row.push(format!("{:e}", a.shape.rho().at(flat)[0]));
        row.extend(spectrum.at(flat).iter().map(|v| format!("{v:e}")));
        text.push_str(&row.join(","));
        text.push('\n');
    }
    write_atomic(path, text.as_bytes())
}

/// Writes through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let io = |e: std::io::Error| Error::Input(format!("{}: {e}", path.display()));
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| Error::Input(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(bytes).map_err(io)?;
    f.sync_all().map_err(io)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io(e)
    })
}

fn cmd_spheres(cmd: &SpheresCommand, config: &RunConfig) -> Result<Outcome> {
    let SpheresCommand::Contact { first, second } = cmd;
    let a: SphereElement = json_arg(first)?;
    let b: SphereElement = json_arg(second)?;
    let tol = config.tol.unwrap_or(1e-10);
    let contact = spheres::oriented_contact(&a, &b, tol)?;
    let f = match (&a, &b) {
        (SphereElement::Sphere { .. }, SphereElement::Sphere { .. }) => Some(spheres::tangential_invariant(&a, &b)?),
        _ => None,
    };
    let coords: Vec<Vec<f64>> = [&a, &b]
        .iter()
        .map(|s| spheres::sphere_coord(s).representative().as_slice().to_vec())
        .collect();
    let mut checks = Checks::new();
    if let Some(f) = f {
        // contact ⇔ F = 0
        if contact != (f.abs() <= tol * (1.0 + f.abs())) {
            checks.at_most("contact_vs_F", f.abs(), tol);
        }
    }
    Ok(Outcome {
        report: json!({ "contact": contact, "F": f, "coords": coords }),
        breaches: checks.breaches,
    })
}

fn cmd_group(cmd: &GroupCommand, config: &RunConfig) -> Result<Outcome> {
    match cmd {
        GroupCommand::Compose(arg) => {
            let t = load_transform(&arg.transform, config.seed)?;
            Ok(Outcome::clean(json!({
                "n": t.base_dim(),
                "matrix": group::matrix_rows(t.matrix()),
                "blocks": group::to_blocks(&t),
                "orthochronous": t.is_orthochronous(),
            })))
        }
        GroupCommand::Decompose(arg) => {
            let t = load_transform(&arg.transform, config.seed)?;
            let f = group::decompose(t.matrix())?;
            let err = f.reconstruction_error(t.matrix());
            let mut checks = Checks::new();
            checks.at_most("reconstruction", err, config.tol.unwrap_or(1e-10));
            Ok(Outcome {
                report: json!({ "factorization": f, "reconstruction_error": err }),
                breaches: checks.breaches,
            })
        }
    }
}

fn load_optional_transform(path: Option<&PathBuf>, config: &RunConfig) -> Result<Option<LaguerreTransform>> {
    path.map(|p| load_transform(p, config.seed)).transpose()
}

fn cmd_surface(cmd: &SurfaceCommand, config: &RunConfig) -> Result<Outcome> {
    let mut checks = Checks::new();
    let report = match cmd {
        SurfaceCommand::Analyze(args) => {
            let spec = load_spec(&args.spec, config)?;
            let t = load_optional_transform(args.transform.as_ref(), config)?;
            let a = analyze(&spec, t.as_ref(), config)?;
            if let Some(path) = &config.csv {
                write_csv(path, &a)?;
            }
            analysis_json(&a, &mut checks, config.tol.unwrap_or(1e-4))
        }
        SurfaceCommand::Minimality(args) => {
            let spec = load_spec(&args.spec, config)?;
            let t = load_optional_transform(args.transform.as_ref(), config)?;
            let a = analyze(&spec, t.as_ref(), config)?;
            let r = minimality_report(&a, config.threshold, fd_order(config))?;
            let tol = config.tol.unwrap_or(1e-4);
            checks.at_most("eta_expansion", r.eta_expansion, tol);
            // the relative cross-check only means something away from Δ_III r = 0
            if let (Some(c), Some(lap), Some(limit)) = (r.laplacian_crosscheck, r.max_laplacian_r, r.laplacian_threshold) {
                if lap > limit {
                    checks.at_most("laplacian_crosscheck", c, 1e-3);
                }
            }
            if r.inconsistent {
                checks.at_most("criteria_agreement", 1.0, 0.0);
            }
            serde_json::to_value(&r).map_err(|e| Error::Input(e.to_string()))?
        }
        SurfaceCommand::Volume(args) => {
            let spec = load_spec(&args.spec, config)?;
            let t = load_optional_transform(args.transform.as_ref(), config)?;
            let order = fd_order(config);
            let patch = build(&spec, t.as_ref(), order)?;
            let shape = crate::hypersurface::shape_data(&patch)?;
            let v = laguerre_volume(&patch, &shape)?;
            if let Some(d) = v.discrepancy {
                checks.at_most("volume_paths", d, config.tol.unwrap_or(1e-6));
            }
            json!({
                "surface": patch.metadata(),
                "volume": v.volume,
                "curvature_form": v.curvature_form,
                "discrepancy": v.discrepancy,
            })
        }
        SurfaceCommand::Compare(args) => {
            let first = load_spec(&args.spec, config)?;
            let second = match &args.against {
                Some(p) => load_spec(p, config)?,
                None => load_spec(&args.spec, config)?,
            };
            let t = load_optional_transform(args.transform.as_ref(), config)?;
            let a = analyze(&first, None, config)?;
            let b = analyze(&second, t.as_ref(), config)?;
            let r = compare_invariants(&a, &b)?;
            let worst = r.max_deviation();
            checks.at_most("invariants", worst, config.tol.unwrap_or(1e-6));
            json!({
                "metric": r.metric,
                "shape_spectrum": r.shape_spectrum,
                "b_spectrum": r.b_spectrum,
                "points": r.points,
                "max_deviation": worst,
            })
        }
        SurfaceCommand::Embed(args) => {
            let spec = load_spec(&args.spec, config)?;
            if args.transform.is_some() {
                return Err(Error::usage("embed takes no transform"));
            }
            let base = analyze(&spec, None, config)?;
            let embedded = embed_patch(&spec, config)?;
            let transfer = transfer_check(&base, &embedded)?;
            let probe_base = radius_probe_check(&base);
            let probe_image = radius_probe_check(&embedded);
            let tol = config.tol.unwrap_or(1e-6);
            for (name, v) in transfer.entries() {
                checks.at_most(&format!("transfer/{name}"), v, tol);
            }
            for (name, p) in [("space_form", probe_base), ("embedded", probe_image)] {
                checks.at_most(&format!("radius_probe/{name}/rho"), p.rho, 1e-10);
                checks.at_most(&format!("radius_probe/{name}/mean_radius"), p.mean_radius, 1e-10);
            }
            let minimality = minimality_report(&embedded, config.threshold, fd_order(config))?;
            if minimality.inconsistent {
                checks.at_most("criteria_agreement", 1.0, 0.0);
            }
            let analysis = analysis_json(&embedded, &mut Checks::new(), config.tol.unwrap_or(1e-4));
            json!({
                "analysis": analysis,
                "transfer": transfer,
                "radius_probe": { "space_form": probe_base, "embedded": probe_image },
                "minimality": minimality,
            })
        }
    };
    Ok(Outcome {
        report,
        breaches: checks.breaches,
    })
}

fn embed_patch(spec: &LoadedSpec, config: &RunConfig) -> Result<Analysis> {
    let order = fd_order(config);
    let patch = match &spec.source {
        Source::Closed(s) => build_patch(&EmbeddedSurface::new(s.clone())?, &spec.grid)?,
        Source::Sampled(s) => {
            let mut points = Vec::with_capacity(s.points.len());
            let mut normals = Vec::with_capacity(s.points.len());
            for (x, xi) in s.points.iter().zip(&s.normals) {
                let c = match spec.space {
                    Space::Lorentzian => embed_sigma(&ContactElementR31::new(x.clone(), xi.clone())?)?,
                    Space::Degenerate => embed_tau(&ContactElementR30::new(x.clone(), xi.clone())?)?,
                    Space::Euclidean => return Err(Error::usage("surface is already Euclidean")),
                };
                points.push(c.x);
                normals.push(c.xi);
            }
            patch_from_samples(Space::Euclidean, &spec.grid, &points, &normals, order)?
        }
    };
    Analysis::new(patch, InvariantOptions { fd_order: order })
}

/// Runs one parsed command.
pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Spheres(c) => cmd_spheres(c, &cli.config),
        Command::Group(c) => cmd_group(c, &cli.config),
        Command::Surface(c) => cmd_surface(c, &cli.config),
    }
}

fn init_logging() {
    let env = env_logger::Env::new().filter_or(LOG_ENV, "warn");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

/// Parses `args`, runs the command, emits the report and returns the exit
/// status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let mut text = serde_json::to_string_pretty(&outcome.report).unwrap_or_default();
    text.push('\n');
    let written = match &cli.config.out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return exit_code(&e);
    }
    if !cli.config.strict {
        for b in &outcome.breaches {
            log::warn!("{b}");
        }
        return 0;
    }
    for b in &outcome.breaches {
        eprintln!("error: {b}");
    }
    outcome.breaches.first().map_or(0, exit_code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_expressions() {
        let pi = std::f64::consts::PI;
        for (s, v) in [("pi/3", pi / 3.0), ("-pi/3", -pi / 3.0), ("2*pi", 2.0 * pi), ("0.5", 0.5), ("3*pi/4", 0.75 * pi)] {
            assert!((parse_expr(s).unwrap() - v).abs() < 1e-15, "{s}");
        }
        for s in ["", "pi/", "x", "1/0"] {
            assert!(parse_expr(s).is_err(), "{s}");
        }
    }

    #[test]
    fn compose_parabolic_flow() {
        let script = json!({"n": 3, "steps": [{"kind": "parabolic", "t": 1.0}, {"kind": "parabolic", "t": 2.0}]});
        let t = transform_from_json(&script, 0).unwrap();
        let three = group::parabolic(3, 3.0);
        assert!((t.matrix() - three.matrix()).amax() < 1e-12);
    }

    #[test]
    fn seeded_scripts_repeat() {
        let script = json!({"n": 3, "steps": [{"kind": "random"}, {"kind": "random"}]});
        let a = transform_from_json(&script, 7).unwrap();
        let b = transform_from_json(&script, 7).unwrap();
        let c = transform_from_json(&script, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Input("x".into())), 2);
        assert_eq!(exit_code(&Error::InvalidElement("x".into())), 3);
        assert_eq!(exit_code(&Error::degenerate(vec![1, 2], "x")), 4);
        assert_eq!(
            exit_code(&Error::ToleranceBreach { identity: "x".into(), value: 1.0, limit: 0.0 }),
            5
        );
    }
}
