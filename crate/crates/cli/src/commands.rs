use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use wave_manifold::curves::{
    curve_from_kl, curve_through_point, intersect_characteristic, intersect_son,
    intersect_sonprime, sample, sample_curve,
};
use wave_manifold::lax::{
    extract_arcs, region_classify, sonprime_t0, z_interval, ArcClass, ArcEnd, ArcStart,
};
use wave_manifold::oracle::{run_checks, OracleReport, CHECKS};
use wave_manifold::surfaces::{mesh, son, sonprime, MeshGrid};
use wave_manifold::{
    ChartPoint, CurveSample, Error, HugoniotCurve, ModelParams, RealRoots, RegionLabel, SurfaceId,
    Tolerances,
};

use crate::config::{Config, Format};
use crate::error::{CliError, CliResult};
use crate::output::{num, Sink};

fn finite(name: &str, values: &[f64]) -> CliResult<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{name} must be finite")))
    }
}

fn pair(name: &str, v: &[f64]) -> CliResult<(f64, f64)> {
    finite(name, v)?;
    match v {
        [a, b] => Ok((*a, *b)),
        _ => Err(CliError::Usage(format!(
            "{name} takes two comma-separated numbers"
        ))),
    }
}

/// `|f| / |grad f|`, the first-order distance to the zero set of `f`.
fn distance(f: impl Fn(&ChartPoint<f64>) -> f64, p: &ChartPoint<f64>) -> f64 {
    let v = f(p);
    if v == 0.0 {
        return 0.0;
    }
    let d = |dz: f64, dt: f64, dy: f64| {
        let h = 1e-6 * (1.0 + p.z.abs().max(p.t.abs()).max(p.y.abs()));
        let plus = ChartPoint::new(p.z + dz * h, p.t + dt * h, p.y + dy * h);
        let minus = ChartPoint::new(p.z - dz * h, p.t - dt * h, p.y - dy * h);
        (f(&plus) - f(&minus)) / (2.0 * h)
    };
    let g = (d(1.0, 0.0, 0.0).powi(2) + d(0.0, 1.0, 0.0).powi(2) + d(0.0, 0.0, 1.0).powi(2)).sqrt();
    if g > 0.0 {
        v.abs() / g
    } else {
        f64::INFINITY
    }
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub z: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,
    #[arg(long = "Y", visible_alias = "y", allow_negative_numbers = true)]
    pub y: f64,
}

#[derive(Serialize)]
struct Classification {
    z: f64,
    t: f64,
    #[serde(rename = "Y")]
    y: f64,
    label: RegionLabel,
    z_interval: u8,
    son: f64,
    sonprime: f64,
    distances: Distances,
    nearest: &'static str,
}

#[derive(Serialize)]
struct Distances {
    characteristic: f64,
    son: f64,
    sonprime: f64,
}

pub fn classify(cfg: &Config, args: &ClassifyArgs) -> CliResult<()> {
    finite("z, t and Y", &[args.z, args.t, args.y])?;
    let m = &cfg.params;
    let p = ChartPoint::new(args.z, args.t, args.y);
    let distances = Distances {
        characteristic: p.y.abs(),
        son: distance(|q| son(m, q), &p),
        sonprime: distance(|q| sonprime(m, q), &p),
    };
    let nearest = [
        ("characteristic", distances.characteristic),
        ("son", distances.son),
        ("sonprime", distances.sonprime),
    ]
    .into_iter()
    .min_by(|a, b| a.1.total_cmp(&b.1))
    .map(|(name, _)| name)
    .expect("three candidates");
    let c = Classification {
        z: p.z,
        t: p.t,
        y: p.y,
        label: region_classify(m, &p, cfg.tolerances.boundary),
        z_interval: z_interval(m, p.z),
        son: son(m, &p),
        sonprime: sonprime(m, &p),
        distances,
        nearest,
    };

    let mut out = Sink::open(None)?;
    match cfg.format.unwrap_or(Format::Text) {
        Format::Json => out.json(&c)?,
        Format::Csv => {
            out.line("z,t,Y,label,son,sonprime,Y_value,dist_characteristic,dist_son,dist_sonprime,nearest")?;
            out.row(&[
                num(c.z),
                num(c.t),
                num(c.y),
                c.label.to_string(),
                num(c.son),
                num(c.sonprime),
                num(c.y),
                num(c.distances.characteristic),
                num(c.distances.son),
                num(c.distances.sonprime),
                c.nearest.to_string(),
            ])?;
        }
        Format::Text => {
            out.line(&format!("label: {}", c.label))?;
            out.line(&format!(
                "point: z={} t={} Y={}",
                num(c.z),
                num(c.t),
                num(c.y)
            ))?;
            out.line(&format!("son: {}", num(c.son)))?;
            out.line(&format!("sonprime: {}", num(c.sonprime)))?;
            out.line(&format!("Y: {}", num(c.y)))?;
            out.line(&format!(
                "distance: characteristic={} son={} sonprime={} (nearest {})",
                num(c.distances.characteristic),
                num(c.distances.son),
                num(c.distances.sonprime),
                c.nearest
            ))?;
        }
    }
    out.finish()
}

/// How a curve is named on the command line.
#[derive(Debug, Args)]
#[group(id = "curve_select", required = true, multiple = true)]
pub struct CurveSelect {
    #[arg(long, allow_negative_numbers = true, requires = "l", conflicts_with_all = ["through", "on_sonprime"])]
    pub k: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "k")]
    pub l: Option<f64>,
    /// A point `z,t,Y` the curve passes through.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        value_name = "Z,T,Y",
        conflicts_with = "on_sonprime"
    )]
    pub through: Option<Vec<f64>>,
    /// The point of `Son'` above `(z0, Y0)`.
    #[arg(
        long = "on-sonprime",
        value_delimiter = ',',
        allow_hyphen_values = true,
        value_name = "Z0,Y0"
    )]
    pub on_sonprime: Option<Vec<f64>>,
}

impl CurveSelect {
    fn resolve(
        &self,
        m: &ModelParams<f64>,
        tols: &Tolerances<f64>,
        prime: bool,
    ) -> CliResult<HugoniotCurve<f64>> {
        if let (Some(k), Some(l)) = (self.k, self.l) {
            finite("k and l", &[k, l])?;
            return Ok(curve_from_kl(k, l, prime));
        }
        let p = if let Some(v) = &self.through {
            finite("--through", v)?;
            match v.as_slice() {
                [z, t, y] => ChartPoint::new(*z, *t, *y),
                _ => {
                    return Err(CliError::Usage(
                        "--through takes three comma-separated numbers".into(),
                    ))
                }
            }
        } else if let Some(v) = &self.on_sonprime {
            let (z0, y0) = pair("--on-sonprime", v)?;
            ChartPoint::new(z0, sonprime_t0(m, z0, y0, tols.boundary)?, y0)
        } else {
            return Err(CliError::Usage(
                "give --k/--l, --through or --on-sonprime".into(),
            ));
        };
        Ok(curve_through_point(m, &p, prime))
    }
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub select: CurveSelect,
    /// Use the Hugoniot' curve instead.
    #[arg(long)]
    pub prime: bool,
    #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
    pub z_from: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub z_to: f64,
    /// Number of samples, endpoints included.
    #[arg(long, default_value_t = 101)]
    pub n: usize,
}

#[derive(Serialize)]
struct Crossing {
    surface: SurfaceId,
    z: f64,
    t: f64,
    #[serde(rename = "Y")]
    y: f64,
    s: f64,
    multiplicity: usize,
}

#[derive(Serialize)]
struct CurveReport {
    curve: HugoniotCurve<f64>,
    samples: Vec<CurveSample<f64>>,
    intersections: Vec<Crossing>,
    /// Surfaces that contain the whole curve.
    contained_in: Vec<SurfaceId>,
}

type Intersect = fn(
    &ModelParams<f64>,
    &HugoniotCurve<f64>,
    &Tolerances<f64>,
) -> wave_manifold::Result<RealRoots<f64>>;

pub fn curve(cfg: &Config, args: &CurveArgs) -> CliResult<()> {
    finite("--z-from and --z-to", &[args.z_from, args.z_to])?;
    if args.n < 2 {
        return Err(CliError::Usage("--n must be at least 2".into()));
    }
    let m = &cfg.params;
    let tols = &cfg.tolerances;
    let curve = args.select.resolve(m, tols, args.prime)?;
    let (lo, hi) = (args.z_from.min(args.z_to), args.z_from.max(args.z_to));

    let mut intersections = Vec::new();
    let mut contained_in = Vec::new();
    let surfaces: [(SurfaceId, Intersect); 3] = [
        (SurfaceId::Characteristic, intersect_characteristic),
        (SurfaceId::Son, intersect_son),
        (SurfaceId::SonPrime, intersect_sonprime),
    ];
    for (id, intersect) in surfaces {
        match intersect(m, &curve, tols) {
            Ok(roots) => {
                for r in roots
                    .roots()
                    .iter()
                    .filter(|r| (lo..=hi).contains(&r.value))
                {
                    let p = sample(m, &curve, r.value);
                    intersections.push(Crossing {
                        surface: id,
                        z: p.z,
                        t: p.t,
                        y: p.y,
                        s: p.s,
                        multiplicity: r.multiplicity,
                    });
                }
            }
            Err(Error::DegenerateCurve(_)) => contained_in.push(id),
            Err(e) => return Err(e.into()),
        }
    }
    let report = CurveReport {
        curve,
        samples: sample_curve(m, &curve, args.z_from, args.z_to, args.n),
        intersections,
        contained_in,
    };

    let mut out = Sink::open(None)?;
    match cfg.format.unwrap_or(Format::Csv) {
        Format::Json => out.json(&report)?,
        Format::Csv | Format::Text => {
            out.line("kind,z,t,Y,s,multiplicity")?;
            for p in &report.samples {
                out.row(&[
                    "sample".into(),
                    num(p.z),
                    num(p.t),
                    num(p.y),
                    num(p.s),
                    String::new(),
                ])?;
            }
            for x in &report.intersections {
                out.row(&[
                    x.surface.to_string(),
                    num(x.z),
                    num(x.t),
                    num(x.y),
                    num(x.s),
                    x.multiplicity.to_string(),
                ])?;
            }
            for id in &report.contained_in {
                out.row(&[
                    id.to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    "all".into(),
                ])?;
            }
        }
    }
    out.finish()
}

#[derive(Debug, Args)]
pub struct ArcsArgs {
    #[command(flatten)]
    pub select: CurveSelect,
    /// Points per sampled polyline, endpoints included.
    #[arg(long, default_value_t = 51)]
    pub samples: usize,
}

#[derive(Serialize)]
struct Segment {
    z_start: f64,
    z_end: f64,
    start_kind: ArcStart,
    end_kind: ArcEnd,
    classification: ArcClass,
    samples: Vec<CurveSample<f64>>,
}

#[derive(Serialize)]
struct ArcReport {
    curve: HugoniotCurve<f64>,
    z_max: f64,
    segments: Vec<Segment>,
}

pub fn arcs(cfg: &Config, args: &ArcsArgs) -> CliResult<()> {
    if args.samples < 2 {
        return Err(CliError::Usage("--samples must be at least 2".into()));
    }
    let m = &cfg.params;
    let curve = args.select.resolve(m, &cfg.tolerances, false)?;
    let segments = extract_arcs(m, &curve, &cfg.tolerances, cfg.z_max)?
        .into_iter()
        .map(|a| Segment {
            z_start: a.z_start,
            z_end: a.z_end,
            start_kind: a.start_kind,
            end_kind: a.end_kind,
            classification: a.classification,
            samples: a.samples(m, args.samples),
        })
        .collect();
    let mut out = Sink::open(None)?;
    out.json(&ArcReport {
        curve,
        z_max: cfg.z_max,
        segments,
    })?;
    out.finish()
}

#[derive(Debug, Args)]
pub struct MeshArgs {
    #[arg(long)]
    pub surface: SurfaceId,
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        value_name = "FROM,TO",
        default_value = "-2,2"
    )]
    pub z_range: Vec<f64>,
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        value_name = "FROM,TO",
        default_value = "-3,3"
    )]
    pub t_range: Vec<f64>,
    #[arg(long, default_value_t = 41)]
    pub nz: usize,
    #[arg(long, default_value_t = 61)]
    pub nt: usize,
    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct MeshReport {
    surface: SurfaceId,
    /// `[z, t, Y]` triples.
    points: Vec<[f64; 3]>,
}

pub fn mesh_cmd(cfg: &Config, args: &MeshArgs) -> CliResult<()> {
    if args.nz < 2 || args.nt < 2 {
        return Err(CliError::Usage("--nz and --nt must be at least 2".into()));
    }
    let grid = MeshGrid {
        z_range: pair("--z-range", &args.z_range)?,
        t_range: pair("--t-range", &args.t_range)?,
        nz: args.nz,
        nt: args.nt,
        pole_guard: cfg.tolerances.pole_guard,
    };
    let rows = mesh(&cfg.params, args.surface, &grid);
    let mut out = Sink::open(args.out.as_deref())?;
    match cfg.format.unwrap_or(Format::Csv) {
        Format::Json => out.json(&MeshReport {
            surface: args.surface,
            points: rows.iter().map(|r| [r.z, r.t, r.y]).collect(),
        })?,
        Format::Csv | Format::Text => {
            out.line("surface,z,t,Y")?;
            for r in &rows {
                out.row(&[r.surface.to_string(), num(r.z), num(r.t), num(r.y)])?;
            }
        }
    }
    out.finish()
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run every registered check (the default).
    #[arg(long, conflicts_with = "check")]
    pub all: bool,
    /// Run only the named check; repeatable.
    #[arg(long)]
    pub check: Vec<String>,
    /// Base sweep size.
    #[arg(long)]
    pub samples: Option<usize>,
    /// List the registered checks and exit.
    #[arg(long, conflicts_with_all = ["all", "check"])]
    pub list: bool,
}

pub fn verify(cfg: &Config, args: &VerifyArgs) -> CliResult<()> {
    let mut out = Sink::open(None)?;
    if args.list {
        for check in CHECKS.iter() {
            out.line(check.name)?;
        }
        return out.finish();
    }
    let mut sweep = cfg.sweep();
    if let Some(n) = args.samples {
        if n == 0 {
            return Err(CliError::Usage("--samples must be positive".into()));
        }
        sweep.samples = n;
    }
    let names: Vec<&str> = args.check.iter().map(String::as_str).collect();
    if let Some(bad) = names.iter().find(|n| !CHECKS.iter().any(|c| c.name == **n)) {
        return Err(CliError::Usage(format!(
            "unknown check `{bad}` (see `verify --list`)"
        )));
    }
    let filter = (!names.is_empty()).then_some(names.as_slice());
    let reports: Vec<OracleReport> = run_checks(&sweep, filter)?;

    match cfg.format.unwrap_or(Format::Json) {
        Format::Json => out.json(&reports)?,
        Format::Csv => {
            out.line("check,samples,skipped,max_residual,tolerance,pass")?;
            for r in &reports {
                out.row(&[
                    r.check.clone(),
                    r.samples.to_string(),
                    r.skipped.to_string(),
                    num(r.max_residual),
                    num(r.tolerance),
                    r.pass.to_string(),
                ])?;
            }
        }
        Format::Text => {
            for r in &reports {
                let status = if r.pass { "PASS" } else { "FAIL" };
                let notes = r.notes.join("; ");
                out.line(&format!(
                    "{status} {} samples={} max={} tol={} {notes}",
                    r.check,
                    r.samples,
                    num(r.max_residual),
                    num(r.tolerance)
                ))?;
            }
        }
    }
    out.finish()?;
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.check.as_str())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failed.join(", ")))
    }
}
